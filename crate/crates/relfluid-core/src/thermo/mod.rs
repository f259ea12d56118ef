//! Equations of state and thermodynamic scalars.

mod eos;

pub use eos::{
    eos_registry, AnalyticEos, Conformal, EquationOfState, IdealGas, LinearEos, Polytropic,
    ThermalClosure,
};

use serde::Serialize;

use crate::error::{Error, Result};

/// The second thermodynamic variable accompanying the energy density.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Secondary {
    None,
    Density(f64),
    Entropy(f64),
}

/// Pointwise thermodynamic state with derived scalars.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThermoState {
    pub rho: f64,
    pub n: Option<f64>,
    pub s: Option<f64>,
    pub p: f64,
    pub h: Option<f64>,
    pub hhat: Option<f64>,
    pub theta: Option<f64>,
    pub cs2: f64,
    /// `∂p/∂s` at fixed energy density; zero for barotropic equations of state.
    pub dp_ds: f64,
    pub hbar: f64,
    /// Set when `cs2` lies outside `(0, 1]`.
    pub non_hyperbolic: bool,
}

impl ThermoState {
    /// Enthalpy per particle; fails when no positive density is available.
    pub fn enthalpy(&self) -> Result<f64> {
        match self.n {
            Some(n) if n > 0.0 => Ok((self.p + self.rho) / n),
            Some(_) => Err(Error::DivisionByZero("enthalpy requested with n = 0".into())),
            None => Err(Error::DivisionByZero("enthalpy requested without n".into())),
        }
    }
}

/// `∂p/∂ρ|_n + n/(p+ρ) ∂p/∂n|_ρ`; reduces to `dp/dρ` for barotropic laws.
pub fn sound_speed_sq(eos: &dyn EquationOfState, rho: f64, n: f64) -> Result<f64> {
    if !eos.in_domain(rho, n) {
        return Err(Error::Domain(format!("{}: rho = {rho}, n = {n}", eos.name())));
    }
    let pr = eos.dp_drho(rho, n);
    if !eos.two_variable() {
        return Ok(pr);
    }
    let enthalpy_density = eos.pressure(rho, n) + rho;
    if enthalpy_density <= 0.0 {
        return Err(Error::Domain(format!("p + rho = {enthalpy_density} must be positive")));
    }
    Ok(pr + n / enthalpy_density * eos.dp_dn(rho, n))
}

/// Fills pressure, enthalpy, log-enthalpy, sound speed and (when supplied)
/// temperature for the given energy density.
pub fn derived_scalars(
    eos: &dyn EquationOfState,
    rho: f64,
    secondary: Secondary,
    hbar: f64,
) -> Result<ThermoState> {
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!("rho = {rho} must be nonnegative")));
    }
    if !(hbar > 0.0) {
        return Err(Error::Domain(format!("reference enthalpy {hbar} must be positive")));
    }
    let (n, s) = match secondary {
        Secondary::None => (None, None),
        Secondary::Density(n) => {
            let s = eos.thermal().map(|t| t.entropy(rho, n));
            (Some(n), s)
        }
        Secondary::Entropy(s) => match eos.thermal() {
            Some(t) => (Some(t.density_from_entropy(rho, s)?), Some(s)),
            None => (None, Some(s)),
        },
    };
    if eos.two_variable() && n.is_none() {
        return Err(Error::Domain(format!("{} needs a baryon density", eos.name())));
    }
    let nn = n.unwrap_or(0.0);
    if nn < 0.0 {
        return Err(Error::Domain(format!("n = {nn} must be nonnegative")));
    }
    let p = eos.pressure(rho, nn);
    let cs2 = sound_speed_sq(eos, rho, nn)?;
    let h = n.filter(|&n| n > 0.0).map(|n| (p + rho) / n);
    let hhat = h.map(|h| (h / hbar).ln());
    let theta = match (eos.thermal(), n) {
        (Some(t), Some(n)) if n > 0.0 => Some(t.temperature(rho, n)),
        _ => None,
    };
    // dρ = h dn + nθ ds at fixed ρ gives ∂n/∂s = −nθ/h.
    let dp_ds = match (theta, h) {
        (Some(th), Some(h)) => -eos.dp_dn(rho, nn) * nn * th / h,
        _ => 0.0,
    };
    Ok(ThermoState {
        rho,
        n,
        s,
        p,
        h,
        hhat,
        theta,
        cs2,
        dp_ds,
        hbar,
        non_hyperbolic: !(cs2 > 0.0 && cs2 <= 1.0),
    })
}

/// Maximum over consecutive pairs of `|Δp − n Δh + nθ Δs| / δ` using left
/// endpoint coefficients. Temperature may be absent only where `Δs = 0`.
pub fn first_law_residual(path: &[ThermoState], delta: f64) -> Result<f64> {
    if path.len() < 3 {
        return Err(Error::InsufficientSamples { needed: 3, got: path.len() });
    }
    if !(delta > 0.0) {
        return Err(Error::Config(format!("path spacing {delta} must be positive")));
    }
    let mut worst = 0.0f64;
    for pair in path.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let n = a.n.ok_or_else(|| Error::DivisionByZero("path state without n".into()))?;
        let dh = b.enthalpy()? - a.enthalpy()?;
        let ds = b.s.unwrap_or(0.0) - a.s.unwrap_or(0.0);
        let heat = if ds == 0.0 {
            0.0
        } else {
            n * a.theta.ok_or(Error::MissingTemperature)? * ds
        };
        worst = worst.max(((b.p - a.p) - n * dh + heat).abs() / delta);
    }
    Ok(worst)
}
