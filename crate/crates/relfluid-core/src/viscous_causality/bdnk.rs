use serde::{Deserialize, Serialize};

use super::audit::{ConditionSet, Relation};
use crate::error::{Error, Result};

/// Coefficients of the first-order theory; `kappa_kappa` is the product of
/// the heat-conduction coefficient with the thermodynamic `κ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BdnkCoefficients {
    #[serde(rename = "tau_R")]
    pub tau_r: f64,
    #[serde(rename = "tau_P")]
    pub tau_p: f64,
    #[serde(rename = "tau_Q")]
    pub tau_q: f64,
    pub zeta: f64,
    pub eta: f64,
    #[serde(default)]
    pub kappa_kappa: f64,
    #[serde(default)]
    pub beta_rho: f64,
    pub cs2: f64,
    pub p_plus_rho: f64,
}

/// `β_ρ = τ_𝒬 ∂p/∂ρ|_n + κθh ∂(μ/θ)/∂ρ|_n` from supplied partials.
pub fn beta_rho_from_partials(tau_q: f64, dp_drho: f64, kappa: f64, theta: f64, h: f64, dmu_theta_drho: f64) -> f64 {
    tau_q * dp_drho + kappa * theta * h * dmu_theta_drho
}

fn hypotheses(c: &BdnkCoefficients) -> Result<()> {
    let mut failed = Vec::new();
    for (name, v) in [("p_plus_rho", c.p_plus_rho), ("tau_R", c.tau_r), ("tau_P", c.tau_p), ("tau_Q", c.tau_q)] {
        if !(v > 0.0) {
            failed.push(format!("A.1: {name} = {v} must be positive"));
        }
    }
    for (name, v) in [("zeta", c.zeta), ("eta", c.eta), ("kappa_kappa", c.kappa_kappa)] {
        if !(v >= 0.0) {
            failed.push(format!("A.1: {name} = {v} must be nonnegative"));
        }
    }
    if !c.cs2.is_finite() || !c.beta_rho.is_finite() {
        failed.push("cs2 and beta_rho must be finite".into());
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::PreconditionFailed(failed.join("; ")))
    }
}

/// The four necessary-and-sufficient conditions; (b) and (c) are chained
/// and contribute two margins each.
pub fn bdnk_causal(c: &BdnkCoefficients, strict: bool) -> Result<ConditionSet> {
    hypotheses(c)?;
    let a = c.p_plus_rho;
    let visc = c.zeta + 4.0 * c.eta / 3.0;
    let x = c.tau_r * (a * c.cs2 * c.tau_q + visc + c.kappa_kappa);
    let bracket = c.tau_p * (a * c.cs2 * c.tau_q + c.kappa_kappa) - c.beta_rho * visc;
    let rhs_b = 4.0 * a * c.tau_r * c.tau_q * bracket;

    let mut set = ConditionSet::new(strict);
    set.push("a", Relation::Ge, a * c.tau_q - c.eta);
    set.push("b.1", Relation::Ge, (x + a * c.tau_p * c.tau_q).powi(2) - rhs_b);
    set.push("b.2", Relation::Ge, rhs_b);
    let mid = x + a * c.tau_r * c.tau_q;
    set.push("c.1", Relation::Ge, 2.0 * a * c.tau_r * c.tau_q - mid);
    set.push("c.2", Relation::Ge, mid);
    // LHS − RHS after cancelling (p+ρ)τ_ℛτ_𝒬 and the c_s² terms.
    set.push("d", Relation::Ge, c.kappa_kappa * (c.tau_p - c.tau_r) - (c.tau_r + c.beta_rho) * visc);
    Ok(set)
}
