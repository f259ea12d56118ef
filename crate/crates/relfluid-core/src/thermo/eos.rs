use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::registry::{param_f64, require_f64, Registry};

/// Closed-form pressure law `p(ρ, n)` with analytic partial derivatives.
pub trait EquationOfState: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;
    /// Parameters as a tagged JSON object that the registry can rebuild.
    fn to_json(&self) -> Value;
    fn pressure(&self, rho: f64, n: f64) -> f64;
    /// `∂p/∂ρ` at fixed `n`.
    fn dp_drho(&self, rho: f64, n: f64) -> f64;
    /// `∂p/∂n` at fixed `ρ`.
    fn dp_dn(&self, _rho: f64, _n: f64) -> f64 {
        0.0
    }
    /// True when the pressure depends on the baryon density.
    fn two_variable(&self) -> bool {
        false
    }
    fn in_domain(&self, rho: f64, _n: f64) -> bool {
        rho >= 0.0
    }
    /// Temperature and entropy closure, when the law provides one.
    fn thermal(&self) -> Option<&dyn ThermalClosure> {
        None
    }
}

/// Temperature/entropy closure, also parametrised by enthalpy `h` and
/// specific entropy `s` for the enthalpy-wave residuals.
pub trait ThermalClosure: Send + Sync {
    fn temperature(&self, rho: f64, n: f64) -> f64;
    fn entropy(&self, rho: f64, n: f64) -> f64;
    fn density_from_entropy(&self, rho: f64, s: f64) -> Result<f64>;
    /// Baryon density as a function of `(h, s)`.
    fn density_hs(&self, h: f64, s: f64) -> Result<f64>;
    /// `(θ, ∂θ/∂h, ∂θ/∂s)`.
    fn theta_hs(&self, h: f64, s: f64) -> [f64; 3];
    /// `(c_s², ∂c_s²/∂h, ∂c_s²/∂s)`.
    fn cs2_hs(&self, h: f64, s: f64) -> [f64; 3];
}

/// `p = ρ/3`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Conformal;

impl EquationOfState for Conformal {
    fn name(&self) -> &'static str {
        "conformal"
    }
    fn to_json(&self) -> Value {
        json!({"kind": "conformal"})
    }
    fn pressure(&self, rho: f64, _n: f64) -> f64 {
        rho / 3.0
    }
    fn dp_drho(&self, _rho: f64, _n: f64) -> f64 {
        1.0 / 3.0
    }
}

/// `p = w ρ`; `w = 1` is the stiff law. Values above one are representable
/// and show up as non-hyperbolic states.
#[derive(Clone, Copy, Debug)]
pub struct LinearEos {
    w: f64,
}

impl LinearEos {
    pub fn new(w: f64) -> Result<Self> {
        if !(w >= 0.0) {
            return Err(Error::Domain(format!("linear law needs w >= 0, got {w}")));
        }
        Ok(LinearEos { w })
    }
}

impl EquationOfState for LinearEos {
    fn name(&self) -> &'static str {
        "linear"
    }
    fn to_json(&self) -> Value {
        json!({"kind": "linear", "w": self.w})
    }
    fn pressure(&self, rho: f64, _n: f64) -> f64 {
        self.w * rho
    }
    fn dp_drho(&self, _rho: f64, _n: f64) -> f64 {
        self.w
    }
}

/// `p = ρ^{κ+1}`.
#[derive(Clone, Copy, Debug)]
pub struct Polytropic {
    pub kappa: f64,
}

impl Polytropic {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::Domain(format!("polytropic law needs kappa > 0, got {kappa}")));
        }
        Ok(Polytropic { kappa })
    }
}

impl EquationOfState for Polytropic {
    fn name(&self) -> &'static str {
        "polytropic"
    }
    fn to_json(&self) -> Value {
        json!({"kind": "polytropic", "kappa": self.kappa})
    }
    fn pressure(&self, rho: f64, _n: f64) -> f64 {
        rho.powf(self.kappa + 1.0)
    }
    fn dp_drho(&self, rho: f64, _n: f64) -> f64 {
        (self.kappa + 1.0) * rho.powf(self.kappa)
    }
}

/// `p = (ρ − n)(γ − 1)` with `p = e^s n^γ`.
#[derive(Clone, Copy, Debug)]
pub struct IdealGas {
    pub gamma: f64,
}

impl IdealGas {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(Error::Domain(format!("ideal gas needs gamma > 1, got {gamma}")));
        }
        Ok(IdealGas { gamma })
    }
}

impl EquationOfState for IdealGas {
    fn name(&self) -> &'static str {
        "ideal-gas"
    }
    fn to_json(&self) -> Value {
        json!({"kind": "ideal-gas", "gamma": self.gamma})
    }
    fn pressure(&self, rho: f64, n: f64) -> f64 {
        (rho - n) * (self.gamma - 1.0)
    }
    fn dp_drho(&self, _rho: f64, _n: f64) -> f64 {
        self.gamma - 1.0
    }
    fn dp_dn(&self, _rho: f64, _n: f64) -> f64 {
        -(self.gamma - 1.0)
    }
    fn two_variable(&self) -> bool {
        true
    }
    fn in_domain(&self, rho: f64, n: f64) -> bool {
        n >= 0.0 && rho >= n
    }
    fn thermal(&self) -> Option<&dyn ThermalClosure> {
        Some(self)
    }
}

impl ThermalClosure for IdealGas {
    fn temperature(&self, rho: f64, n: f64) -> f64 {
        self.pressure(rho, n) / ((self.gamma - 1.0) * n)
    }

    fn entropy(&self, rho: f64, n: f64) -> f64 {
        (self.pressure(rho, n) / n.powf(self.gamma)).ln()
    }

    fn density_from_entropy(&self, rho: f64, s: f64) -> Result<f64> {
        // n + e^s n^γ/(γ−1) = ρ is increasing in n on (0, ρ).
        if !(rho > 0.0) {
            return Err(Error::Domain(format!("rho = {rho} must be positive")));
        }
        let g = self.gamma;
        let k = s.exp() / (g - 1.0);
        let f = |n: f64| n + k * n.powf(g) - rho;
        let (mut lo, mut hi) = (0.0, rho);
        let mut n = 0.5 * rho;
        for _ in 0..200 {
            let fv = f(n);
            if fv > 0.0 {
                hi = n;
            } else {
                lo = n;
            }
            let d = 1.0 + k * g * n.powf(g - 1.0);
            let mut next = n - fv / d;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - n).abs() <= 1e-15 * rho {
                return Ok(next);
            }
            n = next;
        }
        Ok(n)
    }

    fn density_hs(&self, h: f64, s: f64) -> Result<f64> {
        let g = self.gamma;
        if !(h > 1.0) {
            return Err(Error::Domain(format!("ideal gas needs h > 1, got {h}")));
        }
        Ok(((h - 1.0) * (g - 1.0) / (g * s.exp())).powf(1.0 / (g - 1.0)))
    }

    fn theta_hs(&self, h: f64, _s: f64) -> [f64; 3] {
        [(h - 1.0) / self.gamma, 1.0 / self.gamma, 0.0]
    }

    fn cs2_hs(&self, h: f64, _s: f64) -> [f64; 3] {
        let g1 = self.gamma - 1.0;
        [g1 * (1.0 - 1.0 / h), g1 / (h * h), 0.0]
    }
}

type Fn2 = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Caller-supplied closed form with analytic partial derivatives.
pub struct AnalyticEos {
    label: String,
    p: Fn2,
    dp_drho: Fn2,
    dp_dn: Fn2,
    two_variable: bool,
    thermal: Option<Box<dyn ThermalClosure>>,
}

impl fmt::Debug for AnalyticEos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticEos").field("label", &self.label).finish()
    }
}

impl AnalyticEos {
    /// Builds the law and checks `∂p/∂ρ ≥ 0` on a 16×16 sample of the box
    /// `rho_range × n_range`.
    pub fn new(
        label: &str,
        p: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        dp_drho: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        dp_dn: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        two_variable: bool,
        rho_range: (f64, f64),
        n_range: (f64, f64),
    ) -> Result<Self> {
        for i in 0..16 {
            for j in 0..16 {
                let rho = rho_range.0 + (rho_range.1 - rho_range.0) * i as f64 / 15.0;
                let n = n_range.0 + (n_range.1 - n_range.0) * j as f64 / 15.0;
                let d = dp_drho(rho, n);
                if !(d >= 0.0) {
                    return Err(Error::Domain(format!(
                        "{label}: dp/drho = {d} < 0 at rho = {rho}, n = {n}"
                    )));
                }
            }
        }
        Ok(AnalyticEos {
            label: label.to_string(),
            p: Box::new(p),
            dp_drho: Box::new(dp_drho),
            dp_dn: Box::new(dp_dn),
            two_variable,
            thermal: None,
        })
    }

    pub fn with_thermal(mut self, closure: Box<dyn ThermalClosure>) -> Self {
        self.thermal = Some(closure);
        self
    }
}

impl EquationOfState for AnalyticEos {
    fn name(&self) -> &'static str {
        "analytic"
    }
    fn to_json(&self) -> Value {
        json!({"kind": "analytic", "label": self.label})
    }
    fn pressure(&self, rho: f64, n: f64) -> f64 {
        (self.p)(rho, n)
    }
    fn dp_drho(&self, rho: f64, n: f64) -> f64 {
        (self.dp_drho)(rho, n)
    }
    fn dp_dn(&self, rho: f64, n: f64) -> f64 {
        (self.dp_dn)(rho, n)
    }
    fn two_variable(&self) -> bool {
        self.two_variable
    }
    fn thermal(&self) -> Option<&dyn ThermalClosure> {
        self.thermal.as_deref()
    }
}

/// Registry of JSON-constructible equations of state.
pub fn eos_registry() -> Registry<dyn EquationOfState> {
    Registry::<dyn EquationOfState>::new("eos")
        .with("conformal", |_| Ok(Box::new(Conformal)))
        .with("linear", |p| Ok(Box::new(LinearEos::new(param_f64(p, "w", 1.0)?)?)))
        .with("polytropic", |p| Ok(Box::new(Polytropic::new(require_f64(p, "kappa")?)?)))
        .with("ideal-gas", |p| Ok(Box::new(IdealGas::new(require_f64(p, "gamma")?)?)))
}
