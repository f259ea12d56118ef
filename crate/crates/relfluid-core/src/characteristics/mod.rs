//! Principal symbol of the Euler system, its characteristic determinant and
//! roots, causality classification, and sampled hyperbolicity tests.

mod hyperbolic;

pub use hyperbolic::{halton_spatial_directions, halton_sphere_directions, hyperbolic_poly_check, HyperbolicityReport};

use nalgebra::Matrix6;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kinematics::FluidState;
use crate::tensor::{Metric4, Vec4};

/// Roots closer than this (relative to `max(1, |root|)`) are merged.
pub const ROOT_MERGE_TOL: f64 = 1e-9;
/// A covector counts as timelike when `g⁻¹ξξ < −LIGHTCONE_TOL·|ξ⃗|²`.
pub const LIGHTCONE_TOL: f64 = 1e-10;

/// `A^α ξ_α` with rows/columns ordered as (velocity block, ρ, s).
pub fn euler_symbol(state: &FluidState, xi: &Vec4) -> Matrix6<f64> {
    let a = state.enthalpy_density();
    let u = state.u;
    let u_xi = u.dot(xi);
    let pi_up = state.metric.ginv() + u * u.transpose();
    let pi_xi = pi_up * xi;
    let mut m = Matrix6::zeros();
    for b in 0..4 {
        m[(b, b)] = a * u_xi;
        m[(b, 4)] = pi_xi[b] * state.thermo.cs2;
        m[(b, 5)] = pi_xi[b] * state.thermo.dp_ds;
        m[(4, b)] = a * xi[b];
    }
    m[(4, 4)] = u_xi;
    m[(5, 5)] = u_xi;
    m
}

/// Numeric and factored values of the characteristic determinant.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CharDet {
    pub numeric: f64,
    pub closed: f64,
    /// `|numeric − closed|` over the magnitude of the factored terms
    /// `(p+ρ)⁴ (u·ξ)⁴ [(u·ξ)² + c_s²|Πξξ|]`, which stays meaningful near the
    /// sound cone where the determinant itself cancels.
    pub rel_err: f64,
}

pub fn euler_char_det(state: &FluidState, xi: &Vec4) -> CharDet {
    let a = state.enthalpy_density();
    let u_xi = state.u.dot(xi);
    let pi_xx = sound_form(state, xi);
    let cs2 = state.thermo.cs2;
    let closed = a.powi(4) * u_xi.powi(4) * (u_xi * u_xi - cs2 * pi_xx);
    let numeric = euler_symbol(state, xi).determinant();
    let scale = a.powi(4) * u_xi.powi(4) * (u_xi * u_xi + (cs2 * pi_xx).abs());
    let rel_err = if scale == 0.0 { numeric.abs() } else { (numeric - closed).abs() / scale };
    CharDet { numeric, closed, rel_err }
}

/// `Π^{μν} ξ_μ ξ_ν`.
fn sound_form(state: &FluidState, xi: &Vec4) -> f64 {
    let u_xi = state.u.dot(xi);
    state.metric.dot_down(xi, xi) + u_xi * u_xi
}

/// One root with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RootStatus {
    Real,
    NonReal,
}

/// Roots of the characteristic polynomial in `ξ₀` for fixed spatial `ξ⃗`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub degree: usize,
    pub status: RootStatus,
}

fn push_root(roots: &mut Vec<Root>, re: f64, im: f64, mult: usize) {
    let tol = ROOT_MERGE_TOL * re.abs().max(1.0);
    if im == 0.0 {
        if let Some(r) = roots.iter_mut().find(|r| r.im == 0.0 && (r.re - re).abs() <= tol) {
            r.multiplicity += mult;
            return;
        }
    }
    roots.push(Root { re, im, multiplicity: mult });
}

/// Flow-line root (multiplicity four) and the two sound-cone roots.
pub fn sound_cone_roots(state: &FluidState, xi_spatial: [f64; 3]) -> Result<RootSet> {
    if xi_spatial.iter().all(|&x| x == 0.0) {
        return Err(Error::Config("spatial direction must be nonzero".into()));
    }
    let u = state.u;
    let eta = Vec4::new(0.0, xi_spatial[0], xi_spatial[1], xi_spatial[2]);
    let gi = state.metric.ginv();
    let cs2 = state.thermo.cs2;
    let u_eta = u.dot(&eta);
    let pi00 = gi[(0, 0)] + u[0] * u[0];
    let pi0e: f64 = (0..4).map(|j| (gi[(0, j)] + u[0] * u[j]) * eta[j]).sum();
    let piee = state.metric.dot_down(&eta, &eta) + u_eta * u_eta;
    let qa = u[0] * u[0] - cs2 * pi00;
    let qb = 2.0 * (u[0] * u_eta - cs2 * pi0e);
    let qc = u_eta * u_eta - cs2 * piee;

    let mut roots = Vec::new();
    push_root(&mut roots, -u_eta / u[0], 0.0, 4);
    let mut status = RootStatus::Real;
    let scale = qa.abs().max(qb.abs()).max(qc.abs());
    if qa.abs() <= 1e-14 * scale {
        // The quadratic degenerates: one root escapes to infinity.
        push_root(&mut roots, f64::INFINITY, 0.0, 1);
        push_root(&mut roots, -qc / qb, 0.0, 1);
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let q = -0.5 * (qb + qb.signum() * disc.sqrt());
            let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / qa, qc / q) };
            let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
            push_root(&mut roots, lo, 0.0, 1);
            push_root(&mut roots, hi, 0.0, 1);
        } else {
            status = RootStatus::NonReal;
            let re = -qb / (2.0 * qa);
            let im = (-disc).sqrt() / (2.0 * qa.abs());
            push_root(&mut roots, re, -im, 1);
            push_root(&mut roots, re, im, 1);
        }
    }
    Ok(RootSet { roots, degree: 6, status })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CausalityStatus {
    Causal,
    Acausal,
    NonReal,
}

/// A covector demonstrating a violation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub xi: [f64; 4],
    pub root: f64,
    /// `g^{μν} ξ_μ ξ_ν` for the witness covector.
    pub norm: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CausalityVerdict {
    pub status: CausalityStatus,
    pub witness: Option<Witness>,
}

/// Causal iff every root is real and the covector `(ξ₀, ξ⃗)` is not timelike.
pub fn classify_causality(roots: &RootSet, xi_spatial: [f64; 3], metric: &Metric4) -> CausalityVerdict {
    if let Some(r) = roots.roots.iter().find(|r| r.im != 0.0) {
        return CausalityVerdict {
            status: CausalityStatus::NonReal,
            witness: Some(Witness {
                xi: [r.re, xi_spatial[0], xi_spatial[1], xi_spatial[2]],
                root: r.re,
                norm: f64::NAN,
            }),
        };
    }
    let spatial_sq: f64 = xi_spatial.iter().map(|x| x * x).sum();
    let tol = LIGHTCONE_TOL * spatial_sq.max(1e-300);
    for r in &roots.roots {
        let xi = Vec4::new(r.re, xi_spatial[0], xi_spatial[1], xi_spatial[2]);
        let norm = if r.re.is_finite() { metric.dot_down(&xi, &xi) } else { f64::NEG_INFINITY };
        if norm < -tol {
            return CausalityVerdict {
                status: CausalityStatus::Acausal,
                witness: Some(Witness { xi: [xi[0], xi[1], xi[2], xi[3]], root: r.re, norm }),
            };
        }
    }
    CausalityVerdict { status: CausalityStatus::Causal, witness: None }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DetA0 {
    pub closed: f64,
    pub numeric: f64,
}

/// `det A⁰ = (p+ρ)⁴ (u⁰)⁴ (1 + (1 − c_s²) u^i u_i)` in Minkowski coordinates.
pub fn det_a0(state: &FluidState) -> Result<DetA0> {
    if !state.metric.is_minkowski() {
        return Err(Error::BadMetric("det A0 closed form assumes Minkowski coordinates".into()));
    }
    let a = state.enthalpy_density();
    let u = state.u;
    let uiui = u[1] * u[1] + u[2] * u[2] + u[3] * u[3];
    let closed = a.powi(4) * u[0].powi(4) * (1.0 + (1.0 - state.thermo.cs2) * uiui);
    let numeric = euler_symbol(state, &Vec4::new(1.0, 0.0, 0.0, 0.0)).determinant();
    Ok(DetA0 { closed, numeric })
}

/// Verdict over many spatial directions; the first failing one is kept.
pub fn classify_directions(state: &FluidState, directions: &[[f64; 3]]) -> Result<CausalityVerdict> {
    for d in directions {
        let roots = sound_cone_roots(state, *d)?;
        let v = classify_causality(&roots, *d, &state.metric);
        if v.status != CausalityStatus::Causal {
            return Ok(v);
        }
    }
    Ok(CausalityVerdict { status: CausalityStatus::Causal, witness: None })
}
