//! Time-resolved samples: the diagonal-system residual and the good
//! linear variables.

use serde::Serialize;

use super::norms::derivative;
use super::{base, to_diagonal, DiagonalState, VacuumClosure};
use crate::error::{Error, Result};
use crate::sim1d::{lorentz_factor, Trajectory};

/// Equally spaced time levels of `(r, v)` on a shared grid.
#[derive(Clone, Debug)]
pub struct DiagonalSeries {
    pub dt: f64,
    pub frames: Vec<DiagonalState>,
}

impl DiagonalSeries {
    pub fn new(dt: f64, frames: Vec<DiagonalState>) -> Result<Self> {
        if !(dt > 0.0) || frames.is_empty() {
            return Err(Error::Config("series needs dt > 0 and at least one frame".into()));
        }
        let first = &frames[0];
        if frames.iter().any(|f| f.x != first.x || f.kappa != first.kappa) {
            return Err(Error::Config("frames must share grid and kappa".into()));
        }
        Ok(DiagonalSeries { dt, frames })
    }

    /// Transforms stored solver frames, read as polytropic `(ρ, v)`.
    pub fn from_trajectory(traj: &Trajectory, kappa: f64) -> Result<Self> {
        if traj.times.len() < 2 {
            return Err(Error::InsufficientTimeLevels { needed: 2, got: traj.times.len() });
        }
        let x: Vec<f64> = (0..traj.grid.n_cells).map(|i| traj.grid.center(i)).collect();
        let frames = traj
            .frames
            .iter()
            .map(|f| {
                let rho: Vec<f64> = f.iter().map(|p| p.rho).collect();
                let u: Vec<[f64; 4]> = f
                    .iter()
                    .map(|p| {
                        let w = lorentz_factor(p.v);
                        [w, w * p.v, 0.0, 0.0]
                    })
                    .collect();
                to_diagonal(x.clone(), &rho, &u, kappa)
            })
            .collect::<Result<Vec<_>>>()?;
        DiagonalSeries::new(traj.times[1] - traj.times[0], frames)
    }

    pub fn kappa(&self) -> f64 {
        self.frames[0].kappa
    }

    fn need(&self, levels: usize) -> Result<()> {
        if self.frames.len() < levels {
            return Err(Error::InsufficientTimeLevels { needed: levels, got: self.frames.len() });
        }
        Ok(())
    }

    fn dt_at(&self, level: usize, f: impl Fn(&DiagonalState) -> Vec<f64>) -> Vec<f64> {
        let (a, b) = (f(&self.frames[level - 1]), f(&self.frames[level + 1]));
        a.iter().zip(&b).map(|(p, q)| (q - p) / (2.0 * self.dt)).collect()
    }
}

fn component(s: &DiagonalState, c: usize) -> Vec<f64> {
    s.v.iter().map(|v| v[c]).collect()
}

/// Max-norms of the two equations of the diagonal system over the interior.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiagonalResidual {
    pub sound: f64,
    pub velocity: f64,
    pub points: usize,
}

/// Residual of `D_t r + r H̄⁻¹∂v + r a₁ v·∂r = 0` and `D_t v + a₂∂r = 0`
/// with `D_t = ∂_t + (v/v⁰)·∂`, by centred differences at interior time
/// levels and grid points where `r ≥ r_min`.
pub fn diagonal_residual(series: &DiagonalSeries, closure: &dyn VacuumClosure, r_min: f64) -> Result<DiagonalResidual> {
    series.need(3)?;
    let kappa = series.kappa();
    let mut out = DiagonalResidual { sound: 0.0, velocity: 0.0, points: 0 };
    for level in 1..series.frames.len() - 1 {
        let s = &series.frames[level];
        let n = s.len();
        let dx = s.dx();
        let rt = series.dt_at(level, |f| f.r.clone());
        let vt: Vec<Vec<f64>> = (0..3).map(|c| series.dt_at(level, |f| component(f, c))).collect();
        let rx = derivative(&s.r, dx);
        let vx: Vec<Vec<f64>> = (0..3).map(|c| derivative(&component(s, c), dx)).collect();
        for i in 1..n - 1 {
            let (r, v) = (s.r[i], s.v[i]);
            if r < r_min {
                continue;
            }
            let h = closure.hbar_inverse(r, v, kappa)?;
            let a1 = closure.a1(r, v, kappa)?;
            let a2 = closure.a2(r, v, kappa)?;
            let adv = v[0] / h.v0;
            let div: f64 = (0..3).map(|j| h.matrix[0][j] * vx[j][i]).sum();
            let e1 = rt[i] + adv * rx[i] + r * div + r * a1 * v[0] * rx[i];
            out.sound = out.sound.max(e1.abs());
            for c in 0..3 {
                let grad = if c == 0 { rx[i] } else { 0.0 };
                let e2 = vt[c][i] + adv * vx[c][i] + a2 * grad;
                out.velocity = out.velocity.max(e2.abs());
            }
            out.points += 1;
        }
    }
    Ok(out)
}

/// `(s_ℓ, w_ℓ)` at one time level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoodVars {
    pub ell: usize,
    pub s: Vec<f64>,
    pub w: Vec<[f64; 3]>,
}

/// Material derivative `∂_t f + (v¹/v⁰)∂_x f` at `level` for a per-frame field.
fn material(series: &DiagonalSeries, level: usize, f: &dyn Fn(&DiagonalState) -> Vec<f64>) -> Vec<f64> {
    let s = &series.frames[level];
    let ft = series.dt_at(level, f);
    let fx = derivative(&f(s), s.dx());
    let v0 = s.v0();
    (0..s.len()).map(|i| ft[i] + s.v[i][0] / v0[i] * fx[i]).collect()
}

/// Good linear variables for `ℓ ≤ 2`:
/// `s₀ = r, w₀ = v; s₁ = ∂_t r, w₁ = ∂_t v;`
/// `s₂ = D_t²r + ½ a₀a₂/(κB)·H̄⁻¹∂r∂r, w₂ = D_t²v`.
pub fn good_linear_vars(
    series: &DiagonalSeries,
    ell: usize,
    level: usize,
    closure: &dyn VacuumClosure,
) -> Result<GoodVars> {
    if ell > 2 {
        return Err(Error::Config(format!("good linear variables are implemented for ell <= 2, got {ell}")));
    }
    let nt = series.frames.len();
    let reach = ell;
    if reach > 0 {
        series.need(2 * reach + 1)?;
    }
    if level < reach || level + reach >= nt {
        return Err(Error::Config(format!("level {level} needs {reach} neighbouring levels on each side (have {nt})")));
    }
    let s = &series.frames[level];
    match ell {
        0 => Ok(GoodVars { ell, s: s.r.clone(), w: s.v.clone() }),
        1 => {
            let rt = series.dt_at(level, |f| f.r.clone());
            let vt: Vec<Vec<f64>> = (0..3).map(|c| series.dt_at(level, |f| component(f, c))).collect();
            Ok(GoodVars { ell, s: rt, w: (0..s.len()).map(|i| [vt[0][i], vt[1][i], vt[2][i]]).collect() })
        }
        _ => {
            // D_t f on levels level±1 and level, then D_t of that series.
            let second = |f: &dyn Fn(&DiagonalState) -> Vec<f64>| -> Vec<f64> {
                let inner: Vec<Vec<f64>> = (level - 1..=level + 1).map(|k| material(series, k, f)).collect();
                let dx = s.dx();
                let v0 = s.v0();
                let gx = derivative(&inner[1], dx);
                (0..s.len())
                    .map(|i| (inner[2][i] - inner[0][i]) / (2.0 * series.dt) + s.v[i][0] / v0[i] * gx[i])
                    .collect()
            };
            let kappa = s.kappa;
            let rx = derivative(&s.r, s.dx());
            let dtt_r = second(&|f: &DiagonalState| f.r.clone());
            let mut out = Vec::with_capacity(s.len());
            for i in 0..s.len() {
                let h = closure.hbar_inverse(s.r[i], s.v[i], kappa)?;
                let a2 = closure.a2(s.r[i], s.v[i], kappa)?;
                let corr = 0.5 * h.a0 * a2 / (kappa * base(s.r[i], kappa)) * h.matrix[0][0] * rx[i] * rx[i];
                out.push(dtt_r[i] + corr);
            }
            let wc: Vec<Vec<f64>> = (0..3).map(|c| second(&move |f: &DiagonalState| component(f, c))).collect();
            Ok(GoodVars { ell, s: out, w: (0..s.len()).map(|i| [wc[0][i], wc[1][i], wc[2][i]]).collect() })
        }
    }
}
