use serde::{Deserialize, Serialize};

use super::BulkCoefficients;
use crate::error::{Error, Result};
use crate::thermo::EquationOfState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BjorkenMode {
    /// `ρ = ρ₀ (τ₀/τ)^{4/3}`.
    IdealConformal,
    /// Energy balance with a relaxing bulk pressure, integrated numerically.
    BulkOde,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BjorkenPoint {
    pub tau: f64,
    pub rho: f64,
    #[serde(rename = "P_bulk")]
    pub bulk: f64,
    pub steps: usize,
}

/// Dormand–Prince 5(4) on a 2-vector with mixed absolute/relative tolerance.
fn dopri<F: Fn(f64, [f64; 2]) -> [f64; 2]>(f: F, t0: f64, y0: [f64; 2], t1: f64, tol: f64) -> Result<([f64; 2], usize)> {
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] =
        [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];
    let mut t = t0;
    let mut y = y0;
    let mut h = (t1 - t0) * 1e-3;
    let mut steps = 0;
    while t < t1 {
        if steps > 1_000_000 {
            return Err(Error::Config("Bjorken integration did not finish".into()));
        }
        h = h.min(t1 - t);
        let mut k = [[0.0; 2]; 7];
        for s in 0..7 {
            let mut ys = y;
            for j in 0..s {
                for c in 0..2 {
                    ys[c] += h * A[s][j] * k[j][c];
                }
            }
            k[s] = f(t + C[s] * h, ys);
        }
        let mut y5 = y;
        let mut err = 0.0f64;
        for c in 0..2 {
            let mut e = 0.0;
            for s in 0..7 {
                y5[c] += h * B5[s] * k[s][c];
                e += h * (B5[s] - B4[s]) * k[s][c];
            }
            err = err.max(e.abs() / (tol * (1.0 + y[c].abs().max(y5[c].abs()))));
        }
        if err <= 1.0 {
            t += h;
            y = y5;
            steps += 1;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
    }
    Ok((y, steps))
}

/// Boost-invariant longitudinal expansion from `(ρ₀, 𝒫₀)` at `τ₀` to `τ`.
pub fn bjorken_oracle(
    rho0: f64,
    bulk0: f64,
    tau0: f64,
    tau: f64,
    eos: &dyn EquationOfState,
    coeffs: &BulkCoefficients,
    mode: BjorkenMode,
) -> Result<BjorkenPoint> {
    if !(tau0 > 0.0 && tau >= tau0) {
        return Err(Error::Config(format!("need tau >= tau0 > 0, got tau0 = {tau0}, tau = {tau}")));
    }
    match mode {
        BjorkenMode::IdealConformal => {
            Ok(BjorkenPoint { tau, rho: rho0 * (tau0 / tau).powf(4.0 / 3.0), bulk: 0.0, steps: 0 })
        }
        BjorkenMode::BulkOde => {
            let c = *coeffs;
            let rhs = |t: f64, y: [f64; 2]| {
                let (rho, bulk) = (y[0], y[1]);
                let p = eos.pressure(rho, 0.0);
                [-(rho + p + bulk) / t, -(bulk + c.zeta / t + c.delta_pp * bulk / t) / c.tau_p]
            };
            let (y, steps) = dopri(rhs, tau0, [rho0, bulk0], tau, 1e-10)?;
            Ok(BjorkenPoint { tau, rho: y[0], bulk: y[1], steps })
        }
    }
}
