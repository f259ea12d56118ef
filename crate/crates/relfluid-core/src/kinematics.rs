//! Pointwise geometry of a perfect-fluid state.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulation::GridField4;
use crate::tensor::{Mat4, Metric4, Slot, Tensor1, Tensor2, Vec4};
use crate::thermo::ThermoState;

/// Four-velocity (contravariant), thermodynamic scalars and background metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluidState {
    pub u: Vec4,
    pub thermo: ThermoState,
    pub metric: Metric4,
}

impl FluidState {
    /// Completes the spatial velocity to a unit timelike vector.
    pub fn new(spatial: [f64; 3], thermo: ThermoState, metric: Metric4) -> Result<Self> {
        let u = normalize_velocity(spatial, &metric)?;
        Ok(FluidState { u, thermo, metric })
    }

    pub fn velocity(&self) -> Tensor1 {
        Tensor1::up(self.u)
    }

    /// `p + ρ`.
    pub fn enthalpy_density(&self) -> f64 {
        self.thermo.p + self.thermo.rho
    }
}

/// Solves `g(u,u) = −1` for the largest positive `u⁰`.
pub fn normalize_velocity(spatial: [f64; 3], metric: &Metric4) -> Result<Vec4> {
    let g = metric.g();
    let ui = Vec4::new(0.0, spatial[0], spatial[1], spatial[2]);
    let a = g[(0, 0)];
    let b = 2.0 * (0..3).map(|i| g[(0, i + 1)] * spatial[i]).sum::<f64>();
    let c = metric.dot_up(&ui, &ui) + 1.0;
    let u0 = if a == 0.0 {
        if b == 0.0 {
            return Err(Error::NoTimelikeCompletion);
        }
        -c / b
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return Err(Error::NoTimelikeCompletion);
        }
        let sq = disc.sqrt();
        let q = -0.5 * (b + b.signum() * sq);
        let (r1, r2) = if q == 0.0 { (0.0, 0.0) } else { (q / a, c / q) };
        r1.max(r2)
    };
    if !(u0 > 0.0) {
        return Err(Error::NoTimelikeCompletion);
    }
    Ok(Vec4::new(u0, spatial[0], spatial[1], spatial[2]))
}

fn check_normalized(u: &Vec4, metric: &Metric4) -> Result<()> {
    let defect = metric.dot_up(u, u) + 1.0;
    if defect.abs() > 1e-8 {
        return Err(Error::NotNormalized(defect));
    }
    Ok(())
}

/// Mixed projector `Π^α_β = δ^α_β + u^α u_β` onto the complement of `u`.
pub fn projector(u: &Tensor1, metric: &Metric4) -> Result<Tensor2> {
    let u = u.expect(Slot::Up)?;
    check_normalized(&u, metric)?;
    let ud = metric.lower(&u);
    Ok(Tensor2::new(Mat4::identity() + u * ud.transpose(), (Slot::Up, Slot::Down)))
}

/// Acoustical metric `G = c⁻² g + (c⁻² − 1) u♭⊗u♭` and its inverse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcousticalMetric {
    pub g: Mat4,
    pub ginv: Mat4,
    pub cs2: f64,
    pub det: f64,
    /// `c⁻⁶ det g`, which is `−c⁻⁶` in Minkowski rectangular coordinates.
    pub det_expected: f64,
    /// True when the background is not Minkowski, so the determinant
    /// identity is being applied beyond rectangular Minkowski coordinates.
    pub det_extrapolated: bool,
}

impl AcousticalMetric {
    /// `|det G|^{1/2} G⁻¹ = c⁻¹ g⁻¹ + (c⁻¹ − c⁻³) u⊗u`, up to `|det g|^{1/2}`.
    pub fn densitized_inverse(u: &Vec4, cs2: f64, metric: &Metric4) -> Mat4 {
        let c = cs2.sqrt();
        metric.ginv() / c + (1.0 / c - 1.0 / (c * cs2)) * u * u.transpose()
    }
}

pub fn acoustical_metric(u: &Tensor1, cs2: f64, metric: &Metric4) -> Result<AcousticalMetric> {
    let u = u.expect(Slot::Up)?;
    if !(cs2 > 0.0) {
        return Err(Error::DegenerateSoundSpeed(cs2));
    }
    check_normalized(&u, metric)?;
    let ud = metric.lower(&u);
    let g = metric.g() / cs2 + (1.0 / cs2 - 1.0) * ud * ud.transpose();
    let ginv = metric.ginv() * cs2 + (cs2 - 1.0) * u * u.transpose();
    Ok(AcousticalMetric {
        g,
        ginv,
        cs2,
        det: g.determinant(),
        det_expected: metric.det() / (cs2 * cs2 * cs2),
        det_extrapolated: !metric.is_minkowski(),
    })
}

/// Enthalpy current `w = h u` and the defect `w·w + h²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnthalpyCurrent {
    pub w: [f64; 4],
    pub norm_defect: f64,
}

pub fn enthalpy_current(state: &FluidState) -> Result<EnthalpyCurrent> {
    let h = state.thermo.enthalpy()?;
    let w = state.u * h;
    Ok(EnthalpyCurrent {
        w: [w[0], w[1], w[2], w[3]],
        norm_defect: state.metric.dot_up(&w, &w) + h * h,
    })
}

/// `a^α = u^μ ∂_μ u^α` by centred differences on a sampled field.
pub fn acceleration(field: &GridField4) -> Result<[Vec<f64>; 4]> {
    field.check_resolution()?;
    let du = field.velocity_gradients();
    let mut out: [Vec<f64>; 4] = Default::default();
    for (a, comp) in out.iter_mut().enumerate() {
        *comp = (0..field.len())
            .map(|i| (0..4).map(|m| field.u[m][i] * du[m][a][i]).sum())
            .collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_examples() {
        let m = Metric4::minkowski();
        assert_eq!(normalize_velocity([0.0; 3], &m).unwrap(), Vec4::new(1.0, 0.0, 0.0, 0.0));
        let u = normalize_velocity([0.6, 0.0, 0.0], &m).unwrap();
        assert!((u[0] - 1.36f64.sqrt()).abs() < 1e-15);
        let u = normalize_velocity([3.0, 4.0, 0.0], &m).unwrap();
        assert!((u[0] - 26f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn normalization_with_off_diagonal_metric() {
        let mut g = *Metric4::minkowski().g();
        g[(0, 1)] = 0.3;
        g[(1, 0)] = 0.3;
        let m = Metric4::new(g).unwrap();
        let u = normalize_velocity([0.2, -0.4, 0.1], &m).unwrap();
        assert!((m.dot_up(&u, &u) + 1.0).abs() < 1e-13);
        assert!(u[0] > 0.0);
    }

    #[test]
    fn projector_examples() {
        let m = Metric4::minkowski();
        let rest = Tensor1::up(Vec4::new(1.0, 0.0, 0.0, 0.0));
        let p = projector(&rest, &m).unwrap().comps;
        assert_eq!(p, Mat4::from_diagonal(&Vec4::new(0.0, 1.0, 1.0, 1.0)));
        let u = Vec4::new(1.36f64.sqrt(), 0.6, 0.0, 0.0);
        let p = projector(&Tensor1::up(u), &m).unwrap().comps;
        assert!((p * u).abs().max() < 1e-12);
        assert!((p.trace() - 3.0).abs() < 1e-12);
        assert!((p * p - p).abs().max() < 1e-12);
        let bad = Tensor1::up(Vec4::new(2.0, 0.0, 0.0, 0.0));
        assert_eq!(projector(&bad, &m).unwrap_err().code(), "NotNormalized");
        assert_eq!(projector(&Tensor1::down(u), &m).unwrap_err().code(), "IndexPosition");
    }

    #[test]
    fn acoustical_metric_rest_frame() {
        let m = Metric4::minkowski();
        let rest = Tensor1::up(Vec4::new(1.0, 0.0, 0.0, 0.0));
        let a = acoustical_metric(&rest, 1.0 / 3.0, &m).unwrap();
        let want = Mat4::from_diagonal(&Vec4::new(-1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0));
        assert!((a.ginv - want).abs().max() < 1e-15);
        assert!((a.det + 27.0).abs() < 1e-12);
        let lum = acoustical_metric(&rest, 1.0, &m).unwrap();
        assert_eq!(lum.g, *m.g());
        assert_eq!(
            acoustical_metric(&rest, 0.0, &m).unwrap_err().code(),
            "DegenerateSoundSpeed"
        );
    }

    #[test]
    fn densitized_inverse_matches_definition() {
        let m = Metric4::minkowski();
        let u = normalize_velocity([0.3, -0.2, 0.5], &m).unwrap();
        let cs2 = 0.27;
        let a = acoustical_metric(&Tensor1::up(u), cs2, &m).unwrap();
        let lhs = a.ginv * a.det.abs().sqrt();
        let rhs = AcousticalMetric::densitized_inverse(&u, cs2, &m);
        assert!((lhs - rhs).abs().max() < 1e-12 * rhs.abs().max());
    }
}
