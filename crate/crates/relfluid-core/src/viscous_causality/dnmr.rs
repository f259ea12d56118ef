use serde::{Deserialize, Serialize};

use super::audit::{ConditionSet, Relation};
use crate::error::{Error, Result};

/// Transport coefficients of the second-order (bulk + shear) theory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DnmrCoefficients {
    pub zeta: f64,
    pub eta: f64,
    #[serde(rename = "tau_P")]
    pub tau_p: f64,
    pub tau_pi: f64,
    #[serde(rename = "delta_PP", default)]
    pub delta_pp: f64,
    #[serde(rename = "lambda_Ppi", default)]
    pub lambda_ppi: f64,
    #[serde(default)]
    pub delta_pipi: f64,
    #[serde(default)]
    pub tau_pipi: f64,
    #[serde(rename = "lambda_piP", default)]
    pub lambda_pip: f64,
    /// Coefficient of `|Λ₁|` in sufficient (f) and (h); `None` means `lambda_Ppi`.
    #[serde(rename = "delta_Ppi", default, skip_serializing_if = "Option::is_none")]
    pub delta_ppi: Option<f64>,
    pub cs2: f64,
}

impl DnmrCoefficients {
    /// Perfect-fluid limit with unit relaxation times.
    pub fn ideal(cs2: f64) -> Self {
        DnmrCoefficients {
            zeta: 0.0,
            eta: 0.0,
            tau_p: 1.0,
            tau_pi: 1.0,
            delta_pp: 0.0,
            lambda_ppi: 0.0,
            delta_pipi: 0.0,
            tau_pipi: 0.0,
            lambda_pip: 0.0,
            delta_ppi: None,
            cs2,
        }
    }

    fn delta_ppi(&self) -> f64 {
        self.delta_ppi.unwrap_or(self.lambda_ppi)
    }
}

/// Energy density, pressure, bulk pressure and ordered shear eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DnmrState {
    pub rho: f64,
    pub p: f64,
    #[serde(rename = "P_bulk")]
    pub bulk: f64,
    pub lambda: [f64; 3],
}

fn hypotheses(s: &DnmrState, c: &DnmrCoefficients) -> Result<()> {
    let mut failed = Vec::new();
    if !(c.tau_p > 0.0 && c.tau_pi > 0.0) {
        failed.push("A.1: relaxation times must be positive".to_string());
    }
    let named = [
        ("eta", c.eta),
        ("zeta", c.zeta),
        ("delta_PP", c.delta_pp),
        ("lambda_Ppi", c.lambda_ppi),
        ("delta_pipi", c.delta_pipi),
        ("tau_pipi", c.tau_pipi),
        ("lambda_piP", c.lambda_pip),
        ("delta_Ppi", c.delta_ppi()),
    ];
    for (name, v) in named {
        if !(v >= 0.0) {
            failed.push(format!("A.1: {name} = {v} must be nonnegative"));
        }
    }
    if !c.cs2.is_finite() {
        failed.push("A.1: cs2 must be finite".into());
    }
    let e = s.rho + s.p + s.bulk;
    if !(s.rho > 0.0 && s.p >= 0.0 && e > 0.0) {
        failed.push(format!("A.2: need rho > 0, p >= 0, rho + p + P > 0 (rho={}, p={}, P={})", s.rho, s.p, s.bulk));
    }
    let l = s.lambda;
    if !(l[0] <= l[1] && l[1] <= l[2]) {
        failed.push("eigenvalues must be ordered".into());
    }
    for (i, li) in l.iter().enumerate() {
        if !(e + li > 0.0) {
            failed.push(format!("A.3: rho + p + P + Lambda_{} = {} must be positive", i + 1, e + li));
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::PreconditionFailed(failed.join("; ")))
    }
}

/// `num/den` with `0/0 = 0` and `x/0 = +∞` for `x ≠ 0`.
fn guarded_ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

/// The eight sufficient conditions; (h) is omitted when `τ_ππ = δ_ππ = 0`.
pub fn dnmr_sufficient(s: &DnmrState, c: &DnmrCoefficients, strict: bool) -> Result<ConditionSet> {
    hypotheses(s, c)?;
    let e = s.rho + s.p + s.bulk;
    let l1 = s.lambda[0].abs();
    let (l2, l3) = (s.lambda[1], s.lambda[2]);
    let x = 2.0 * c.eta + c.lambda_pip * s.bulk;
    let (tpi, tp, c2) = (c.tau_pi, c.tau_p, c.cs2);
    let bulk_num = c.zeta + c.delta_pp * s.bulk;
    let dppi = c.delta_ppi();

    let a_expr = e - l1 - x / (2.0 * tpi) - c.tau_pipi * l3 / (2.0 * tpi);
    let dd = c.lambda_ppi / tp + c2 - c.tau_pipi / (12.0 * tpi);
    let num = (12.0 * c.delta_pipi - c.tau_pipi) / (12.0 * tpi) * dd * (l3 + l1).powi(2);

    let mut set = ConditionSet::new(strict);
    set.push("a", Relation::Ge, a_expr);
    set.push("b", Relation::Ge, x - c.tau_pipi * l1);
    set.push("c", Relation::Le, c.tau_pipi - 6.0 * c.delta_pipi);
    set.push("d", Relation::Ge, dd);
    let e_lhs = (4.0 * c.eta + 2.0 * c.lambda_pip * s.bulk + (3.0 * c.delta_pipi + c.tau_pipi) * l3) / (3.0 * tpi)
        + (bulk_num + c.lambda_ppi * l3) / tp
        + l1
        + l3 * c2
        + guarded_ratio(num, a_expr);
    set.push("e", Relation::Le, e_lhs - e * (1.0 - c2));
    let f_lhs = (x + (c.tau_pipi - 6.0 * c.delta_pipi) * l1) / (6.0 * tpi) + (bulk_num - dppi * l1) / tp + (e - l1) * c2;
    set.push("f", Relation::Ge, f_lhs);
    let g_den = (x / (2.0 * tpi) - c.tau_pipi * l1 / (2.0 * tpi)).powi(2);
    set.push("g", Relation::Le, guarded_ratio(num, g_den) - 1.0);
    if !(c.tau_pipi == 0.0 && c.delta_pipi == 0.0) {
        let base = e - l1;
        let lhs = (e + l2) * (e + l3) / (3.0 * base) * (1.0 + (x / tpi + c.tau_pipi * l3 / tpi) / base);
        let rhs = (4.0 * c.eta + 2.0 * c.lambda_pip * s.bulk - (3.0 * c.delta_pipi + c.tau_pipi) * l1) / (3.0 * tpi)
            + (bulk_num - dppi * l1) / tp
            + base * c2;
        set.push("h", Relation::Le, lhs - rhs);
    }
    Ok(set)
}

/// The six necessary conditions, instantiated over `i ≠ j` where indexed.
pub fn dnmr_necessary(s: &DnmrState, c: &DnmrCoefficients, strict: bool) -> Result<ConditionSet> {
    hypotheses(s, c)?;
    let e = s.rho + s.p + s.bulk;
    let l = s.lambda;
    let x = 2.0 * c.eta + c.lambda_pip * s.bulk;
    let (tpi, tp, c2, tpp) = (c.tau_pi, c.tau_p, c.cs2, c.tau_pipi);
    let bulk_num = c.zeta + c.delta_pp * s.bulk;

    let mut set = ConditionSet::new(strict);
    set.push("a", Relation::Ge, x - 0.5 * tpp * l[0].abs());
    set.push("b", Relation::Ge, e - x / (2.0 * tpi) - tpp * l[2] / (4.0 * tpi));
    for i in 0..3 {
        for j in (i + 1)..3 {
            let v = x / (2.0 * tpi) + tpp * (l[i] + l[j]) / (4.0 * tpi);
            set.push(&format!("c[{},{}]", i + 1, j + 1), Relation::Ge, v);
        }
    }
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                let v = e + l[i] - x / (2.0 * tpi) - tpp * (l[i] + l[j]) / (4.0 * tpi);
                set.push(&format!("d[{},{}]", i + 1, j + 1), Relation::Ge, v);
            }
        }
    }
    let core: Vec<f64> = l
        .iter()
        .map(|&li| {
            x / (2.0 * tpi)
                + tpp * li / (2.0 * tpi)
                + (x + (6.0 * c.delta_pipi - tpp) * li) / (6.0 * tpi)
                + (bulk_num + c.lambda_ppi * li) / tp
        })
        .collect();
    for i in 0..3 {
        set.push(&format!("e[{}]", i + 1), Relation::Ge, core[i] + (e + l[i]) * c2);
    }
    for i in 0..3 {
        set.push(&format!("f[{}]", i + 1), Relation::Ge, e + l[i] - core[i] - (e + l[i]) * c2);
    }
    Ok(set)
}

/// Tri-state outcome with both condition sets.
#[derive(Clone, Debug, Serialize)]
pub struct DnmrVerdict {
    pub verdict: super::Verdict,
    pub sufficient: ConditionSet,
    pub necessary: ConditionSet,
}

pub fn dnmr_verdict(s: &DnmrState, c: &DnmrCoefficients, strict: bool) -> Result<DnmrVerdict> {
    let sufficient = dnmr_sufficient(s, c, strict)?;
    let necessary = dnmr_necessary(s, c, strict)?;
    let verdict = match (sufficient.pass(), necessary.pass()) {
        (true, true) => super::Verdict::Causal,
        (true, false) => {
            return Err(Error::Consistency(necessary.failed().join(", ")));
        }
        (false, false) => super::Verdict::Acausal,
        (false, true) => super::Verdict::Indeterminate,
    };
    Ok(DnmrVerdict { verdict, sufficient, necessary })
}
