//! Pointwise causality conditions for first- and second-order viscous
//! theories, and batch audits of cell data.

mod audit;
mod bdnk;
mod dnmr;

pub use audit::{
    batch_audit, read_cells, theory_registry, AuditOptions, CausalityReport, Cell, CellResult, CausalityTheory,
    Summary, Verdict,
};
pub use bdnk::{bdnk_causal, beta_rho_from_partials, BdnkCoefficients};
pub use dnmr::{dnmr_necessary, dnmr_sufficient, dnmr_verdict, DnmrCoefficients, DnmrState, DnmrVerdict};

use nalgebra::{Matrix3, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::{Mat4, Metric4, Vec4};

/// Default tolerance on shear constraint residuals for ingested data.
pub const TOL_CONSTRAINT: f64 = 1e-8;

/// Storage order of the ten independent components.
pub const PI_INDEX: [(usize, usize); 10] =
    [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];

/// Contravariant shear-stress tensor together with the flow it is tied to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShearTensor {
    pub pi: [f64; 10],
    pub u: Vec4,
    pub metric: Metric4,
}

/// Which constraint failed worst, and by how much (scaled).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConstraintResiduals {
    pub orthogonality: f64,
    pub trace: f64,
}

impl ShearTensor {
    pub fn new(pi: [f64; 10], u: Vec4, metric: Metric4) -> Self {
        ShearTensor { pi, u, metric }
    }

    pub fn from_matrix(m: &Mat4, u: Vec4, metric: Metric4) -> Self {
        let mut pi = [0.0; 10];
        for (k, &(a, b)) in PI_INDEX.iter().enumerate() {
            pi[k] = 0.5 * (m[(a, b)] + m[(b, a)]);
        }
        ShearTensor { pi, u, metric }
    }

    /// `π^{μν}` as a full matrix.
    pub fn matrix(&self) -> Mat4 {
        let mut m = Mat4::zeros();
        for (k, &(a, b)) in PI_INDEX.iter().enumerate() {
            m[(a, b)] = self.pi[k];
            m[(b, a)] = self.pi[k];
        }
        m
    }

    /// Magnitude used to scale residuals: `max|π^{μν}|·(u⁰)²`, at least 1.
    fn scale(&self) -> f64 {
        let m = self.pi.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        (m * self.u[0] * self.u[0]).max(1.0)
    }

    /// `max_ν |u_μ π^{μν}|` and `|g_{μν}π^{μν}|`, each divided by [`Self::scale`].
    pub fn residuals(&self) -> ConstraintResiduals {
        let m = self.matrix();
        let ul = self.metric.lower(&self.u);
        let orth = (m * ul).amax();
        let trace = (self.metric.g().component_mul(&m)).sum().abs();
        let s = self.scale();
        ConstraintResiduals { orthogonality: orth / s, trace: trace / s }
    }

    pub fn check(&self, tol: f64) -> Result<()> {
        let r = self.residuals();
        if r.orthogonality > tol {
            return Err(Error::ConstraintViolation { which: "orthogonality", residual: r.orthogonality, tol });
        }
        if r.trace > tol {
            return Err(Error::ConstraintViolation { which: "trace", residual: r.trace, tol });
        }
        Ok(())
    }

    /// Symmetric, traceless, `u`-orthogonal part.
    pub fn projected(&self) -> ShearTensor {
        let g = self.metric.g();
        let proj_up = self.metric.ginv() + self.u * self.u.transpose();
        // P^μ_α = δ^μ_α + u^μ u_α
        let ul = self.metric.lower(&self.u);
        let mixed = Mat4::identity() + self.u * ul.transpose();
        let p = mixed * self.matrix() * mixed.transpose();
        let tr = g.component_mul(&p).sum();
        ShearTensor::from_matrix(&(p - proj_up * (tr / 3.0)), self.u, self.metric)
    }
}

/// Eigenvalues of `π^μ_ν` on the `u`-orthogonal subspace, ascending.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShearSpectrum {
    pub lambda: [f64; 3],
    /// `e₀ = u` followed by the eigenvectors (contravariant, orthonormal).
    #[serde(skip)]
    pub frame: [Vec4; 4],
    pub reconstruction_residual: f64,
}

/// Orthonormal basis of the `g`-orthogonal complement of `u`.
fn spatial_frame(u: &Vec4, metric: &Metric4) -> [Vec4; 3] {
    let ul = metric.lower(u);
    let mut out: Vec<Vec4> = Vec::with_capacity(3);
    for k in 1..4 {
        let mut v = Vec4::zeros();
        v[k] = 1.0;
        v += u * ul[k];
        for _ in 0..2 {
            for e in &out {
                let c = metric.dot_up(e, &v);
                v -= e * c;
            }
        }
        let n = metric.dot_up(&v, &v).sqrt();
        out.push(v / n);
    }
    [out[0], out[1], out[2]]
}

pub fn shear_spectrum(pi: &ShearTensor, tol_constraint: f64) -> Result<ShearSpectrum> {
    pi.check(tol_constraint)?;
    let basis = spatial_frame(&pi.u, &pi.metric);
    let g = pi.metric.g();
    let pi_low = g * pi.matrix() * g;
    let restricted = Matrix3::from_fn(|a, b| basis[a].dot(&(pi_low * basis[b])));
    let eig = SymmetricEigen::new(restricted);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut lambda = [0.0; 3];
    let mut frame = [pi.u, Vec4::zeros(), Vec4::zeros(), Vec4::zeros()];
    for (slot, &k) in order.iter().enumerate() {
        lambda[slot] = eig.eigenvalues[k];
        frame[slot + 1] = (0..3).fold(Vec4::zeros(), |acc, b| acc + basis[b] * eig.eigenvectors[(b, k)]);
    }
    let mut rebuilt = Mat4::zeros();
    for a in 0..3 {
        rebuilt += frame[a + 1] * frame[a + 1].transpose() * lambda[a];
    }
    let residual = (rebuilt - pi.matrix()).amax() / pi.scale();
    if residual > 10.0 * tol_constraint + 1e-10 {
        return Err(Error::Internal(residual));
    }
    Ok(ShearSpectrum { lambda, frame, reconstruction_residual: residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::boost;
    use nalgebra::Vector3;

    fn rest_diag(a: f64) -> ShearTensor {
        let m = Mat4::from_diagonal(&Vec4::new(0.0, -2.0 * a, a, a));
        ShearTensor::from_matrix(&m, Vec4::new(1.0, 0.0, 0.0, 0.0), Metric4::minkowski())
    }

    #[test]
    fn zero_shear() {
        let s = shear_spectrum(&rest_diag(0.0), TOL_CONSTRAINT).unwrap();
        assert_eq!(s.lambda, [0.0; 3]);
    }

    #[test]
    fn diagonal_rest_frame() {
        let s = shear_spectrum(&rest_diag(0.7), TOL_CONSTRAINT).unwrap();
        assert!((s.lambda[0] + 1.4).abs() < 1e-14);
        assert!((s.lambda[1] - 0.7).abs() < 1e-14 && (s.lambda[2] - 0.7).abs() < 1e-14);
        assert!(s.reconstruction_residual < 1e-14);
    }

    #[test]
    fn boosted_spectrum_matches() {
        let l = boost(&Vector3::new(0.3, -0.5, 0.2));
        let base = rest_diag(0.7);
        let m = l * base.matrix() * l.transpose();
        let u = l * base.u;
        let s = shear_spectrum(&ShearTensor::from_matrix(&m, u, Metric4::minkowski()), TOL_CONSTRAINT).unwrap();
        assert!((s.lambda[0] + 1.4).abs() < 1e-10);
        assert!((s.lambda[2] - 0.7).abs() < 1e-10);
        assert!(s.reconstruction_residual < 1e-10);
    }

    #[test]
    fn violation_reported() {
        let mut t = rest_diag(0.5);
        t.pi[1] = 1e-3;
        match shear_spectrum(&t, TOL_CONSTRAINT) {
            Err(Error::ConstraintViolation { which, .. }) => assert_eq!(which, "orthogonality"),
            other => panic!("{other:?}"),
        }
        let p = t.projected();
        assert!(p.check(1e-12).is_ok());
    }
}
