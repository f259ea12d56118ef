//! Free-boundary diagnostics for a polytropic gas `p = ρ^{κ+1}` in the
//! good variables `r = ((κ+1)/κ)ρ^κ` (sound speed squared over κ) and
//! `v = (1+ρ^κ)^{1+1/κ} u`, sampled on a uniform 1-D grid.

mod dynamics;
mod norms;

use std::io::Read;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::registry::Registry;

pub use dynamics::{diagonal_residual, good_linear_vars, DiagonalResidual, DiagonalSeries, GoodVars};
pub use norms::{
    control_norms, derivative, distance_functional, homogeneous_piece, linearized_energy, script_h_exponents,
    script_h_norm, weighted_integral,
    weighted_norm, ControlNorms, Energy, NormalField, Quadrature, WeightedNormSpec, PAIRWISE_CAP,
};

/// Relative tolerance for accepting a grid as uniform.
const UNIFORM_TOL: f64 = 1e-9;

/// `1 + κr/(κ+1)`, which equals `1 + ρ^κ`.
pub fn base(r: f64, kappa: f64) -> f64 {
    1.0 + kappa * r / (kappa + 1.0)
}

/// `v⁰` from the normalisation `v^α v_α = −(1 + κr/(κ+1))^{2+2/κ}`.
pub fn v0_from_constraint(r: f64, v: [f64; 3], kappa: f64) -> f64 {
    (base(r, kappa).powf(2.0 + 2.0 / kappa) + dot(v, v)).sqrt()
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa >= 1.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("kappa must be >= 1, got {kappa}")))
    }
}

/// Pointwise map `(ρ, u) ↦ (r, v)`; `u` is the contravariant four-velocity.
pub fn to_diagonal_point(rho: f64, u: [f64; 4], kappa: f64) -> Result<(f64, [f64; 4])> {
    if rho < 0.0 || rho.is_nan() {
        return Err(Error::NegativeDensity(rho));
    }
    check_kappa(kappa)?;
    let rk = rho.powf(kappa);
    let f = (1.0 + rk).powf(1.0 + 1.0 / kappa);
    Ok(((kappa + 1.0) / kappa * rk, u.map(|c| f * c)))
}

/// Inverse of [`to_diagonal_point`].
pub fn from_diagonal_point(r: f64, v: [f64; 4], kappa: f64) -> Result<(f64, [f64; 4])> {
    if r < 0.0 || r.is_nan() {
        return Err(Error::NegativeDensity(r));
    }
    check_kappa(kappa)?;
    let rho = (kappa * r / (kappa + 1.0)).powf(1.0 / kappa);
    let f = base(r, kappa).powf(1.0 + 1.0 / kappa);
    Ok((rho, v.map(|c| c / f)))
}

/// `(r, v)` sampled on a uniform grid `x`, with the spatial part of `v`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalState {
    pub kappa: f64,
    pub x: Vec<f64>,
    pub r: Vec<f64>,
    pub v: Vec<[f64; 3]>,
}

impl DiagonalState {
    pub fn new(kappa: f64, x: Vec<f64>, r: Vec<f64>, v: Vec<[f64; 3]>) -> Result<Self> {
        check_kappa(kappa)?;
        if x.len() < 3 || r.len() != x.len() || v.len() != x.len() {
            return Err(Error::Config(format!(
                "need at least 3 points and matching lengths (x {}, r {}, v {})",
                x.len(),
                r.len(),
                v.len()
            )));
        }
        let dx = x[1] - x[0];
        if !(dx > 0.0) || x.windows(2).any(|w| ((w[1] - w[0]) - dx).abs() > UNIFORM_TOL * dx.max(x[0].abs())) {
            return Err(Error::Config("grid must be uniform and increasing".into()));
        }
        if let Some(&bad) = r.iter().find(|&&ri| !(ri >= 0.0)) {
            return Err(Error::NegativeDensity(bad));
        }
        if v.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Config("velocity samples must be finite".into()));
        }
        Ok(DiagonalState { kappa, x, r, v })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn dx(&self) -> f64 {
        (self.x[self.len() - 1] - self.x[0]) / (self.len() - 1) as f64
    }

    pub fn v0(&self) -> Vec<f64> {
        self.r.iter().zip(&self.v).map(|(&r, &v)| v0_from_constraint(r, v, self.kappa)).collect()
    }

    /// Checks `c₁ ≤ r(x)/dist(x, ∂{r>0}) ≤ c₂` on the points of the support
    /// away from the boundary nodes themselves. Returns the observed ratio range.
    pub fn boundary_ratio(&self, c1: f64, c2: f64) -> Result<(f64, f64)> {
        let zeros: Vec<f64> = self.x.iter().zip(&self.r).filter(|(_, &r)| r == 0.0).map(|(&x, _)| x).collect();
        if zeros.is_empty() {
            return Err(Error::Domain("field has no vacuum boundary node (r = 0)".into()));
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (&x, &r) in self.x.iter().zip(&self.r) {
            if r > 0.0 {
                let d = zeros.iter().map(|z| (x - z).abs()).fold(f64::INFINITY, f64::min);
                let q = r / d;
                lo = lo.min(q);
                hi = hi.max(q);
            }
        }
        if lo < c1 || hi > c2 {
            return Err(Error::Domain(format!(
                "r/dist ranges over [{lo}, {hi}], outside the physical-vacuum bracket [{c1}, {c2}]"
            )));
        }
        Ok((lo, hi))
    }
}

/// Maps sampled `(ρ, u)` to the good variables.
pub fn to_diagonal(x: Vec<f64>, rho: &[f64], u: &[[f64; 4]], kappa: f64) -> Result<DiagonalState> {
    if rho.len() != u.len() {
        return Err(Error::Config("rho and u lengths differ".into()));
    }
    let mut r = Vec::with_capacity(rho.len());
    let mut v = Vec::with_capacity(rho.len());
    for (&p, &uu) in rho.iter().zip(u) {
        let (ri, vi) = to_diagonal_point(p, uu, kappa)?;
        r.push(ri);
        v.push([vi[1], vi[2], vi[3]]);
    }
    DiagonalState::new(kappa, x, r, v)
}

/// Recovers `(ρ, u)` with `u⁰` from the normalisation.
pub fn from_diagonal(state: &DiagonalState) -> Result<(Vec<f64>, Vec<[f64; 4]>)> {
    let mut rho = Vec::with_capacity(state.len());
    let mut u = Vec::with_capacity(state.len());
    for (&r, &v) in state.r.iter().zip(&state.v) {
        let v0 = v0_from_constraint(r, v, state.kappa);
        let (p, uu) = from_diagonal_point(r, [v0, v[0], v[1], v[2]], state.kappa)?;
        rho.push(p);
        u.push(uu);
    }
    Ok((rho, u))
}

/// `H̄⁻¹` at a point, with the coefficients it is built from and its
/// spectral bracket against the Euclidean metric.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HbarInverse {
    pub matrix: [[f64; 3]; 3],
    pub a0: f64,
    pub a2: f64,
    pub v0: f64,
    pub eig_min: f64,
    pub eig_max: f64,
}

/// `H̄⁻¹ = κ/(a₀v⁰)·(1 + κr/(κ+1))·(δ − v⊗v/(v⁰)²)` with
/// `a₀ = 1 − κr|v|²/(v⁰)²` and the reference `a₂`.
pub fn hbar_inverse(r: f64, v: [f64; 3], kappa: f64) -> Result<HbarInverse> {
    let v0 = v0_from_constraint(r, v, kappa);
    let v2 = dot(v, v);
    let a0 = 1.0 - kappa * r * v2 / (v0 * v0);
    if !(a0 > 0.0) {
        return Err(Error::LostPositivity(a0));
    }
    let b = base(r, kappa);
    let c = kappa * b / (a0 * v0);
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let d = if i == j { 1.0 } else { 0.0 };
            m[i][j] = c * (d - v[i] * v[j] / (v0 * v0));
        }
    }
    // Eigenvalues: c on the plane orthogonal to v, c(1 − |v|²/(v⁰)²) along v.
    let along = c * (1.0 - v2 / (v0 * v0));
    Ok(HbarInverse {
        matrix: m,
        a0,
        a2: b.powf(1.0 + 2.0 / kappa) / v0,
        v0,
        eig_min: along.min(c),
        eig_max: c,
    })
}

/// Closure for the lower-order coefficients of the diagonal system
/// `D_t r + r H̄⁻¹∂v + r a₁ v·∂r = 0`, `D_t v + a₂ ∂r = 0`.
pub trait VacuumClosure: Send + Sync {
    fn name(&self) -> &'static str;
    fn a1(&self, r: f64, v: [f64; 3], kappa: f64) -> Result<f64>;
    fn a2(&self, r: f64, v: [f64; 3], kappa: f64) -> Result<f64>;
    fn hbar_inverse(&self, r: f64, v: [f64; 3], kappa: f64) -> Result<HbarInverse>;
}

/// Coefficients obtained by rewriting the polytropic Euler equations in
/// `(r, v)`: `a₂ = B^{1+2/κ}/v⁰`, `a₁ = −2κB^{2+2/κ}/(a₀(v⁰)³)`, `B = 1 + κr/(κ+1)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReferenceClosure;

impl VacuumClosure for ReferenceClosure {
    fn name(&self) -> &'static str {
        "reference"
    }
    fn a1(&self, r: f64, v: [f64; 3], kappa: f64) -> Result<f64> {
        let h = hbar_inverse(r, v, kappa)?;
        Ok(-2.0 * kappa * base(r, kappa).powf(2.0 + 2.0 / kappa) / (h.a0 * h.v0.powi(3)))
    }
    fn a2(&self, r: f64, v: [f64; 3], kappa: f64) -> Result<f64> {
        Ok(base(r, kappa).powf(1.0 + 2.0 / kappa) / v0_from_constraint(r, v, kappa))
    }
    fn hbar_inverse(&self, r: f64, v: [f64; 3], kappa: f64) -> Result<HbarInverse> {
        hbar_inverse(r, v, kappa)
    }
}

/// `a₁ = 0`, `a₂ = 1`, `H̄⁻¹ = δ`: a flat model for fixtures.
#[derive(Clone, Copy, Debug, Default)]
pub struct UnitClosure;

impl VacuumClosure for UnitClosure {
    fn name(&self) -> &'static str {
        "unit"
    }
    fn a1(&self, _r: f64, _v: [f64; 3], _kappa: f64) -> Result<f64> {
        Ok(0.0)
    }
    fn a2(&self, _r: f64, _v: [f64; 3], _kappa: f64) -> Result<f64> {
        Ok(1.0)
    }
    fn hbar_inverse(&self, r: f64, v: [f64; 3], kappa: f64) -> Result<HbarInverse> {
        Ok(HbarInverse {
            matrix: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            a0: 1.0,
            a2: 1.0,
            v0: v0_from_constraint(r, v, kappa),
            eig_min: 1.0,
            eig_max: 1.0,
        })
    }
}

pub fn closure_registry() -> Registry<dyn VacuumClosure> {
    Registry::<dyn VacuumClosure>::new("vacuum closure")
        .with("reference", |_: &Value| Ok(Box::new(ReferenceClosure)))
        .with("unit", |_: &Value| Ok(Box::new(UnitClosure)))
}

/// Reads named numeric columns from CSV. Missing optional columns read as 0.
fn read_table<R: Read>(reader: R, required: &[&str], optional: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Schema { row: 1, message: e.to_string() })?.clone();
    let mut idx = Vec::new();
    for name in required {
        let i = headers
            .iter()
            .position(|h| h == *name)
            .ok_or_else(|| Error::Schema { row: 1, message: format!("missing column '{name}'") })?;
        idx.push((*name, Some(i)));
    }
    for name in optional {
        idx.push((*name, headers.iter().position(|h| h == *name)));
    }
    let mut cols = vec![Vec::new(); idx.len()];
    for (k, rec) in rdr.records().enumerate() {
        let row = k + 2;
        let rec = rec.map_err(|e| Error::Schema { row, message: e.to_string() })?;
        for (c, (name, i)) in idx.iter().enumerate() {
            let value = match i {
                None => 0.0,
                Some(i) => {
                    let raw = rec.get(*i).unwrap_or("");
                    match raw.parse::<f64>() {
                        Ok(v) if v.is_finite() => v,
                        _ => {
                            return Err(Error::Schema {
                                row,
                                message: format!("column '{name}': '{raw}' is not a finite number"),
                            })
                        }
                    }
                }
            };
            cols[c].push(value);
        }
    }
    Ok(cols)
}

fn zip3(a: &[f64], b: &[f64], c: &[f64]) -> Vec<[f64; 3]> {
    a.iter().zip(b).zip(c).map(|((&a, &b), &c)| [a, b, c]).collect()
}

/// Reads a profile from CSV with columns `x, r, v1` and optional `v2, v3`.
pub fn read_profile<R: Read>(reader: R, kappa: f64) -> Result<DiagonalState> {
    let cols = read_table(reader, &["x", "r", "v1"], &["v2", "v3"])?;
    if let Some(k) = cols[1].iter().position(|&r| r < 0.0) {
        return Err(Error::Schema { row: k + 2, message: format!("column 'r': negative value {}", cols[1][k]) });
    }
    let v = zip3(&cols[2], &cols[3], &cols[4]);
    DiagonalState::new(kappa, cols[0].clone(), cols[1].clone(), v)
}

/// A linearized pair `(s, w)` sampled on a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearizedPair {
    pub x: Vec<f64>,
    pub s: Vec<f64>,
    pub w: Vec<[f64; 3]>,
}

/// Reads a linearized pair from CSV with columns `x, s, w1` and optional `w2, w3`.
pub fn read_pair<R: Read>(reader: R) -> Result<LinearizedPair> {
    let cols = read_table(reader, &["x", "s", "w1"], &["w2", "w3"])?;
    Ok(LinearizedPair { x: cols[0].clone(), s: cols[1].clone(), w: zip3(&cols[2], &cols[3], &cols[4]) })
}
