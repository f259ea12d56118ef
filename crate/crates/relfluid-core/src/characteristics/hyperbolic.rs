use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tensor::Vec4;

/// Outcome of a sampled hyperbolicity test. Only finitely many lines are
/// examined, so `hyperbolic = true` means no counterexample was found.
#[derive(Clone, Debug, Serialize)]
pub struct HyperbolicityReport {
    pub hyperbolic: bool,
    pub witness: Option<[f64; 4]>,
    pub directions_tested: usize,
    pub skipped_parallel: usize,
    /// Smallest root gap over all tested lines, relative to the root scale.
    pub min_relative_gap: f64,
    pub note: String,
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut out = 0.0;
    let mut f = inv;
    while i > 0 {
        out += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    out
}

/// Coordinate axes followed by Halton points pushed onto the unit 3-sphere.
pub fn halton_sphere_directions(count: usize) -> Vec<Vec4> {
    let mut dirs: Vec<Vec4> = (0..4.min(count))
        .map(|k| {
            let mut v = Vec4::zeros();
            v[k] = 1.0;
            v
        })
        .collect();
    let mut i = 1u64;
    while dirs.len() < count {
        let (a, b, c) = (radical_inverse(i, 2), radical_inverse(i, 3), radical_inverse(i, 5));
        i += 1;
        // Hopf-style parametrisation, uniform on S³.
        let r1 = a.sqrt();
        let r0 = (1.0 - a).sqrt();
        let (t1, t2) = (2.0 * std::f64::consts::PI * b, 2.0 * std::f64::consts::PI * c);
        dirs.push(Vec4::new(r0 * t1.cos(), r0 * t1.sin(), r1 * t2.cos(), r1 * t2.sin()));
    }
    dirs
}

/// Spatial unit directions: the three axes, then Halton points on the 2-sphere.
pub fn halton_spatial_directions(count: usize) -> Vec<[f64; 3]> {
    let mut dirs: Vec<[f64; 3]> = (0..3.min(count))
        .map(|k| {
            let mut v = [0.0; 3];
            v[k] = 1.0;
            v
        })
        .collect();
    let mut i = 1u64;
    while dirs.len() < count {
        let z = 1.0 - 2.0 * radical_inverse(i, 2);
        let phi = 2.0 * std::f64::consts::PI * radical_inverse(i, 3);
        i += 1;
        let rho = (1.0 - z * z).max(0.0).sqrt();
        dirs.push([rho * phi.cos(), rho * phi.sin(), z]);
    }
    dirs
}

/// Coefficients (ascending) of `λ ↦ p(λζ + θ)` by interpolation at Chebyshev nodes.
fn line_coefficients(poly: &dyn Fn(&Vec4) -> f64, degree: usize, zeta: &Vec4, theta: &Vec4) -> Option<Vec<f64>> {
    let n = degree + 1;
    let nodes: Vec<f64> = (0..n)
        .map(|j| 2.0 * (std::f64::consts::PI * (2 * j + 1) as f64 / (2 * n) as f64).cos())
        .collect();
    let vand = DMatrix::from_fn(n, n, |r, c| nodes[r].powi(c as i32));
    let rhs = DVector::from_iterator(n, nodes.iter().map(|&l| poly(&(zeta * l + theta))));
    vand.lu().solve(&rhs).map(|v| v.iter().copied().collect())
}

fn poly_roots(coeffs: &[f64]) -> Vec<(f64, f64)> {
    let k = coeffs.len() - 1;
    let lead = coeffs[k];
    let mut comp = DMatrix::<f64>::zeros(k, k);
    for i in 1..k {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..k {
        comp[(i, k - 1)] = -coeffs[i] / lead;
    }
    comp.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect()
}

/// Checks that every sampled line through `θ` in direction `ζ` meets the zero
/// set of the homogeneous polynomial in `degree` distinct real points.
pub fn hyperbolic_poly_check(
    poly: &dyn Fn(&Vec4) -> f64,
    degree: usize,
    zeta: &Vec4,
    sample_dirs: usize,
    delta_root: f64,
) -> Result<HyperbolicityReport> {
    if degree == 0 {
        return Err(Error::Config("polynomial degree must be positive".into()));
    }
    let zn = zeta.norm();
    if zn == 0.0 {
        return Err(Error::DegenerateDirection(0.0));
    }
    let z = zeta / zn;
    let lead = poly(&z);
    let probe = (0..4)
        .map(|k| {
            let mut e = Vec4::zeros();
            e[k] = 1.0;
            poly(&e).abs()
        })
        .fold(1.0f64, f64::max);
    if lead.abs() <= 1e-13 * probe {
        return Err(Error::DegenerateDirection(lead));
    }
    let mut tested = 0;
    let mut skipped = 0;
    let mut min_gap = f64::INFINITY;
    for theta in halton_sphere_directions(sample_dirs) {
        // Drop the ζ component; lines with θ ∥ ζ carry no information.
        let perp = theta - z * z.dot(&theta);
        if perp.norm() < 1e-8 {
            skipped += 1;
            continue;
        }
        tested += 1;
        let Some(coeffs) = line_coefficients(poly, degree, &z, &theta) else {
            return Err(Error::Internal(f64::NAN));
        };
        let roots = poly_roots(&coeffs);
        let scale = roots.iter().map(|r| r.0.hypot(r.1)).fold(1.0f64, f64::max);
        let complex = roots.iter().any(|r| r.1.abs() > delta_root * scale);
        let mut re: Vec<f64> = roots.iter().map(|r| r.0).collect();
        re.sort_by(f64::total_cmp);
        let gap = re.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min) / scale;
        min_gap = min_gap.min(gap);
        if complex || gap < delta_root {
            return Ok(HyperbolicityReport {
                hyperbolic: false,
                witness: Some([theta[0], theta[1], theta[2], theta[3]]),
                directions_tested: tested,
                skipped_parallel: skipped,
                min_relative_gap: min_gap,
                note: if complex { "complex roots on witness line".into() } else { "repeated root on witness line".into() },
            });
        }
    }
    Ok(HyperbolicityReport {
        hyperbolic: true,
        witness: None,
        directions_tested: tested,
        skipped_parallel: skipped,
        min_relative_gap: min_gap,
        note: format!("no counterexample among {tested} sampled lines; untested lines are not covered"),
    })
}
