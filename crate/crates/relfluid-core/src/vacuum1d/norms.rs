//! Weighted quadrature, Sobolev-type norms, energies, control norms and
//! the distance functional.

use nalgebra::Matrix3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DiagonalState, VacuumClosure};
use crate::error::{Error, Result};

/// Largest grid accepted by the pairwise seminorms.
pub const PAIRWISE_CAP: usize = 4096;

/// Result of a weighted trapezoid sum. `excluded_measure` is the length of
/// the segments dropped because a node had zero weight and a negative
/// exponent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Quadrature {
    pub value: f64,
    pub excluded_measure: f64,
}

/// Centred first derivative with second-order one-sided ends.
pub fn derivative(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 3, "derivative needs three samples");
    let mut d = vec![0.0; n];
    d[0] = (4.0 * (f[1] - f[0]) - (f[2] - f[0])) / (2.0 * dx);
    d[n - 1] = (4.0 * (f[n - 1] - f[n - 2]) - (f[n - 1] - f[n - 3])) / (2.0 * dx);
    for i in 1..n - 1 {
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * dx);
    }
    d
}

pub(crate) fn nth_derivative(f: &[f64], dx: f64, k: usize) -> Vec<f64> {
    (0..k).fold(f.to_vec(), |acc, _| derivative(&acc, dx))
}

/// `∫ w^e g dx` by the trapezoid rule on a uniform grid. At nodes with
/// `w = 0` the factor is `0` for `e > 0`, `1` for `e = 0`, and for `e < 0`
/// the adjacent segments are dropped.
pub fn weighted_integral(weight: &[f64], exponent: f64, integrand: &[f64], dx: f64) -> Quadrature {
    let node = |i: usize| -> Option<f64> {
        let w = weight[i];
        if w > 0.0 {
            Some(w.powf(exponent) * integrand[i])
        } else if exponent > 0.0 {
            Some(0.0)
        } else if exponent == 0.0 {
            Some(integrand[i])
        } else {
            None
        }
    };
    let (mut value, mut excluded) = (0.0, 0.0);
    for i in 0..weight.len().saturating_sub(1) {
        match (node(i), node(i + 1)) {
            (Some(a), Some(b)) => value += 0.5 * dx * (a + b),
            _ => excluded += dx,
        }
    }
    Quadrature { value, excluded_measure: excluded }
}

/// Derivative count and weight exponent of `H^{N,σ}`. `derivs` is the
/// integer number of derivatives, so half-integer `N` is written as `2N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedNormSpec {
    pub derivs: usize,
    pub sigma: f64,
}

impl WeightedNormSpec {
    pub fn new(derivs: usize, sigma: f64) -> Result<Self> {
        if !(sigma > -0.5) {
            return Err(Error::InadmissibleSigma(sigma));
        }
        Ok(WeightedNormSpec { derivs, sigma })
    }
}

fn norm_sq(components: &[Vec<f64>], r: &[f64], dx: f64, spec: WeightedNormSpec) -> Result<Quadrature> {
    if !(spec.sigma > -0.5) {
        return Err(Error::InadmissibleSigma(spec.sigma));
    }
    let mut total = Quadrature { value: 0.0, excluded_measure: 0.0 };
    for c in components {
        if c.len() != r.len() {
            return Err(Error::Config("field and weight lengths differ".into()));
        }
        let mut d = c.clone();
        for k in 0..=spec.derivs {
            if k > 0 {
                d = derivative(&d, dx);
            }
            let sq: Vec<f64> = d.iter().map(|x| x * x).collect();
            let q = weighted_integral(r, 2.0 * spec.sigma, &sq, dx);
            total.value += q.value;
            total.excluded_measure = total.excluded_measure.max(q.excluded_measure);
        }
    }
    Ok(total)
}

/// `(Σ_{k≤N} ∫ r^{2σ}|∂^k f|²)^{1/2}`.
pub fn weighted_norm(f: &[f64], r: &[f64], dx: f64, spec: WeightedNormSpec) -> Result<Quadrature> {
    let q = norm_sq(&[f.to_vec()], r, dx, spec)?;
    Ok(Quadrature { value: q.value.sqrt(), ..q })
}

/// The top-order piece `∫ r^{2σ}|∂^k f|²` alone (not square-rooted).
pub fn homogeneous_piece(f: &[f64], r: &[f64], dx: f64, k: usize, sigma: f64) -> Result<Quadrature> {
    if !(sigma > -0.5) {
        return Err(Error::InadmissibleSigma(sigma));
    }
    let d = nth_derivative(f, dx, k);
    let sq: Vec<f64> = d.iter().map(|x| x * x).collect();
    Ok(weighted_integral(r, 2.0 * sigma, &sq, dx))
}

/// Weight exponents `((1−κ)/(2κ) + N, (1−κ)/(2κ) + N + 1/2)` of `ℋ^{2N}`.
pub fn script_h_exponents(kappa: f64, two_n: usize) -> (f64, f64) {
    let s = (1.0 - kappa) / (2.0 * kappa) + two_n as f64 / 2.0;
    (s, s + 0.5)
}

fn split(w: &[[f64; 3]]) -> Vec<Vec<f64>> {
    (0..3).map(|c| w.iter().map(|x| x[c]).collect()).collect()
}

/// `‖(s, w)‖_{ℋ^{2N}}` against the background weight `r`.
pub fn script_h_norm(
    s: &[f64],
    w: &[[f64; 3]],
    r: &[f64],
    dx: f64,
    kappa: f64,
    two_n: usize,
) -> Result<Quadrature> {
    let (ss, sv) = script_h_exponents(kappa, two_n);
    let a = norm_sq(&[s.to_vec()], r, dx, WeightedNormSpec { derivs: two_n, sigma: ss })?;
    let b = norm_sq(&split(w), r, dx, WeightedNormSpec { derivs: two_n, sigma: sv })?;
    Ok(Quadrature { value: (a.value + b.value).sqrt(), excluded_measure: a.excluded_measure.max(b.excluded_measure) })
}

impl DiagonalState {
    /// `‖(r, v)‖_{ℋ^{2N}}`.
    pub fn script_h_norm(&self, two_n: usize) -> Result<Quadrature> {
        script_h_norm(&self.r, &self.v, &self.r, self.dx(), self.kappa, two_n)
    }
}

/// Linearized energy with its equivalence bracket against `‖(s,w)‖²_{ℋ⁰}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Energy {
    pub value: f64,
    pub h0_sq: f64,
    pub c1: f64,
    pub c2: f64,
    pub excluded_measure: f64,
}

/// `E = ½∫ r^{(1−κ)/κ}(s² + r|w|²_H̄/a₂)` with `H̄` the inverse of the
/// closure's `H̄⁻¹`. The bracket comes from the pointwise range of `a₂` and
/// of the spectrum of `H̄⁻¹`.
pub fn linearized_energy(
    s: &[f64],
    w: &[[f64; 3]],
    background: &DiagonalState,
    closure: &dyn VacuumClosure,
) -> Result<Energy> {
    let n = background.len();
    if s.len() != n || w.len() != n {
        return Err(Error::Config("linearized pair must live on the background grid".into()));
    }
    let kappa = background.kappa;
    let e = (1.0 - kappa) / kappa;
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    let mut q = Vec::with_capacity(n);
    let mut plain = Vec::with_capacity(n);
    let mut wsq = Vec::with_capacity(n);
    for i in 0..n {
        let (r, v) = (background.r[i], background.v[i]);
        let a2 = closure.a2(r, v, kappa)?;
        if !(a2 > 0.0) {
            return Err(Error::MissingClosure(format!("closure '{}' gives a2 = {a2} <= 0", closure.name())));
        }
        let h = closure.hbar_inverse(r, v, kappa)?;
        let hb = Matrix3::from_fn(|a, b| h.matrix[a][b])
            .try_inverse()
            .ok_or(Error::LostPositivity(h.eig_min))?;
        let wi = nalgebra::Vector3::from(w[i]);
        let norm_h = wi.dot(&(hb * wi));
        lo = lo.min(1.0 / (h.eig_max * a2));
        hi = hi.max(1.0 / (h.eig_min * a2));
        q.push(s[i] * s[i] + r * norm_h / a2);
        plain.push(s[i] * s[i]);
        wsq.push(r * wi.norm_squared());
    }
    let en = weighted_integral(&background.r, e, &q, background.dx());
    let h0a = weighted_integral(&background.r, e, &plain, background.dx());
    let h0b = weighted_integral(&background.r, e, &wsq, background.dx());
    Ok(Energy {
        value: 0.5 * en.value,
        h0_sq: h0a.value + h0b.value,
        c1: 0.5 * lo,
        c2: 0.5 * hi,
        excluded_measure: en.excluded_measure,
    })
}

/// The auxiliary vector field `𝖭` compared against `∇r`.
#[derive(Clone, Debug, PartialEq)]
pub enum NormalField {
    Constant([f64; 3]),
    /// `∇r` frozen at the given grid index.
    FromBoundary(usize),
    PerPoint(Vec<[f64; 3]>),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ControlNorms {
    pub a: f64,
    pub b: f64,
    pub grad_r_defect: f64,
    pub holder_v: f64,
    pub holder_grad_r: f64,
    pub max_grad_v: f64,
}

fn pairwise_max(n: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> f64 {
    (0..n).into_par_iter().map(|i| (i + 1..n).map(|j| f(i, j)).fold(0.0, f64::max)).reduce(|| 0.0, f64::max)
}

fn dist3(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// `A = max|∇r − 𝖭| + [v]_{C^{1/2}}` and `B = A + [∇r]_{C̃^{1/2}} + max|∇v|`,
/// with the seminorms taken over all pairs of grid points.
pub fn control_norms(state: &DiagonalState, normal: &NormalField) -> Result<ControlNorms> {
    let n = state.len();
    if n > PAIRWISE_CAP {
        return Err(Error::GridTooLarge { points: n, cap: PAIRWISE_CAP });
    }
    let dx = state.dx();
    let dr = derivative(&state.r, dx);
    let grad_r: Vec<[f64; 3]> = dr.iter().map(|&d| [d, 0.0, 0.0]).collect();
    let nf: Vec<[f64; 3]> = match normal {
        NormalField::Constant(c) => vec![*c; n],
        NormalField::FromBoundary(i) => {
            let g = *grad_r.get(*i).ok_or_else(|| Error::Config(format!("boundary index {i} out of range")))?;
            vec![g; n]
        }
        NormalField::PerPoint(p) if p.len() == n => p.clone(),
        NormalField::PerPoint(p) => {
            return Err(Error::Config(format!("normal field has {} points, grid has {n}", p.len())))
        }
    };
    let grad_r_defect = (0..n).map(|i| dist3(grad_r[i], nf[i])).fold(0.0, f64::max);
    let x = &state.x;
    let v = &state.v;
    let holder_v = pairwise_max(n, |i, j| dist3(v[i], v[j]) / (x[j] - x[i]).abs().sqrt());
    let r = &state.r;
    let holder_grad_r = pairwise_max(n, |i, j| {
        (dr[i] - dr[j]).abs() / (r[i].sqrt() + r[j].sqrt() + (x[j] - x[i]).abs().sqrt())
    });
    let dv = split(v).iter().map(|c| derivative(c, dx)).collect::<Vec<_>>();
    let max_grad_v = (0..n).map(|i| dist3([dv[0][i], dv[1][i], dv[2][i]], [0.0; 3])).fold(0.0, f64::max);
    let a = grad_r_defect + holder_v;
    Ok(ControlNorms { a, b: a + holder_grad_r + max_grad_v, grad_r_defect, holder_v, holder_grad_r, max_grad_v })
}

/// `𝒟 = ∫ (r₁+r₂)^{(1−κ)/κ}((r₁−r₂)² + (r₁+r₂)|v₁−v₂|²)` over the nodes
/// where both densities are positive.
pub fn distance_functional(a: &DiagonalState, b: &DiagonalState) -> Result<Quadrature> {
    if a.kappa != b.kappa {
        return Err(Error::KappaMismatch(a.kappa, b.kappa));
    }
    if a.len() != b.len() || a.x.iter().zip(&b.x).any(|(p, q)| (p - q).abs() > 1e-12 * (1.0 + p.abs())) {
        return Err(Error::Config("states must share a grid".into()));
    }
    let sum: Vec<f64> = a.r.iter().zip(&b.r).map(|(p, q)| p + q).collect();
    let integrand: Vec<f64> = (0..a.len())
        .map(|i| {
            if a.r[i] > 0.0 && b.r[i] > 0.0 {
                let dv = dist3(a.v[i], b.v[i]);
                (a.r[i] - b.r[i]).powi(2) + sum[i] * dv * dv
            } else {
                0.0
            }
        })
        .collect();
    Ok(weighted_integral(&sum, (1.0 - a.kappa) / a.kappa, &integrand, a.dx()))
}
