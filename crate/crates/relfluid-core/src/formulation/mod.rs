//! Grid verification of the vorticity, entropy and log-enthalpy wave
//! identities satisfied by smooth perfect-fluid solutions.

mod checks;
mod grid;

pub use checks::{check_registry, HhatWave, Lichnerowicz, ResidualCheck, ResidualReport, VortEvo};
pub use grid::{GridGeometry, Stencil};

use crate::error::{Error, Result};
use crate::tensor::{Mat4, Metric4, Vec4};
use crate::thermo::ThermalClosure;

/// Sampled `(ĥ, s, u)` on a 4-D grid; `u` is contravariant.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField4 {
    pub geom: GridGeometry,
    pub hhat: Vec<f64>,
    pub s: Vec<f64>,
    pub u: [Vec<f64>; 4],
    pub hbar: f64,
}

/// Thermodynamic scalars evaluated pointwise from a closure.
pub struct PointThermo {
    pub h: Vec<f64>,
    pub n: Vec<f64>,
    pub theta: Vec<f64>,
    pub dtheta_dhhat: Vec<f64>,
    pub cs: Vec<f64>,
    pub dcs_dhhat: Vec<f64>,
    pub dcs_ds: Vec<f64>,
    pub q: Vec<f64>,
    pub dq_dhhat: Vec<f64>,
    pub dq_ds: Vec<f64>,
}

impl GridField4 {
    pub fn new(
        geom: GridGeometry,
        hhat: Vec<f64>,
        s: Vec<f64>,
        u: [Vec<f64>; 4],
        hbar: f64,
    ) -> Result<Self> {
        let n = geom.len();
        if hhat.len() != n || s.len() != n || u.iter().any(|c| c.len() != n) {
            return Err(Error::Config(format!("field arrays must all have {n} entries")));
        }
        if !(hbar > 0.0) {
            return Err(Error::Config(format!("reference enthalpy {hbar} must be positive")));
        }
        geom.check_resolution()?;
        Ok(GridField4 { geom, hhat, s, u, hbar })
    }

    /// Builds a field by evaluating `f(t, x, y, z) -> (ĥ, s, u^0..u^3)`.
    pub fn from_fn(geom: GridGeometry, hbar: f64, f: impl Fn([f64; 4]) -> [f64; 6]) -> Result<Self> {
        let n = geom.len();
        let mut hhat = Vec::with_capacity(n);
        let mut s = Vec::with_capacity(n);
        let mut u: [Vec<f64>; 4] = Default::default();
        for k in 0..n {
            let c = geom.coords(k);
            let v = f([0, 1, 2, 3].map(|a| c[a] as f64 * geom.spacing[a]));
            hhat.push(v[0]);
            s.push(v[1]);
            for a in 0..4 {
                u[a].push(v[2 + a]);
            }
        }
        GridField4::new(geom, hhat, s, u, hbar)
    }

    pub fn len(&self) -> usize {
        self.geom.len()
    }

    pub fn is_empty(&self) -> bool {
        self.geom.is_empty()
    }

    pub fn metric(&self) -> &Metric4 {
        &self.geom.metric
    }

    pub fn check_resolution(&self) -> Result<()> {
        self.geom.check_resolution()
    }

    pub fn u_at(&self, k: usize) -> Vec4 {
        Vec4::new(self.u[0][k], self.u[1][k], self.u[2][k], self.u[3][k])
    }

    /// Largest `|g(u,u) + 1|` on the grid.
    pub fn normalization_defect(&self) -> f64 {
        (0..self.len())
            .map(|k| {
                let u = self.u_at(k);
                (self.metric().dot_up(&u, &u) + 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn enthalpy(&self) -> Vec<f64> {
        self.hhat.iter().map(|&x| self.hbar * x.exp()).collect()
    }

    /// Covariant velocity components `u_β`.
    pub fn u_lower(&self) -> [Vec<f64>; 4] {
        let g = self.metric().g();
        let mut out: [Vec<f64>; 4] = Default::default();
        for (b, comp) in out.iter_mut().enumerate() {
            *comp = (0..self.len()).map(|k| (0..4).map(|m| g[(b, m)] * self.u[m][k]).sum()).collect();
        }
        out
    }

    /// `du[m][a][k] = ∂_m u^a`.
    pub fn velocity_gradients(&self) -> [[Vec<f64>; 4]; 4] {
        let per_comp: Vec<[Vec<f64>; 4]> = (0..4).map(|a| self.geom.gradient(&self.u[a])).collect();
        std::array::from_fn(|m| std::array::from_fn(|a| per_comp[a][m].clone()))
    }

    pub fn thermo(&self, closure: &dyn ThermalClosure) -> Result<PointThermo> {
        let n = self.len();
        let mut t = PointThermo {
            h: Vec::with_capacity(n),
            n: Vec::with_capacity(n),
            theta: Vec::with_capacity(n),
            dtheta_dhhat: Vec::with_capacity(n),
            cs: Vec::with_capacity(n),
            dcs_dhhat: Vec::with_capacity(n),
            dcs_ds: Vec::with_capacity(n),
            q: Vec::with_capacity(n),
            dq_dhhat: Vec::with_capacity(n),
            dq_ds: Vec::with_capacity(n),
        };
        for k in 0..n {
            let h = self.hbar * self.hhat[k].exp();
            let s = self.s[k];
            let [th, th_h, th_s] = closure.theta_hs(h, s);
            let [c2, c2_h, c2_s] = closure.cs2_hs(h, s);
            if !(c2 > 0.0) {
                return Err(Error::DegenerateSoundSpeed(c2));
            }
            let c = c2.sqrt();
            t.h.push(h);
            t.n.push(closure.density_hs(h, s)?);
            t.theta.push(th);
            t.dtheta_dhhat.push(h * th_h);
            t.cs.push(c);
            t.dcs_dhhat.push(h * c2_h / (2.0 * c));
            t.dcs_ds.push(c2_s / (2.0 * c));
            t.q.push(th / h);
            t.dq_dhhat.push(th_h - th / h);
            t.dq_ds.push(th_s / h);
        }
        Ok(t)
    }
}

/// Antisymmetric field stored by its six independent components
/// `(01, 02, 03, 12, 13, 23)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoForm {
    comps: [Vec<f64>; 6],
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

impl TwoForm {
    pub fn get(&self, a: usize, b: usize, k: usize) -> f64 {
        if a == b {
            return 0.0;
        }
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        let idx = PAIRS.iter().position(|&p| p == (lo, hi)).unwrap();
        sign * self.comps[idx][k]
    }

    pub fn component(&self, a: usize, b: usize) -> Vec<f64> {
        (0..self.comps[0].len()).map(|k| self.get(a, b, k)).collect()
    }

    pub fn max_abs(&self, geom: &GridGeometry) -> f64 {
        self.comps.iter().map(|c| geom.max_abs(c)).fold(0.0, f64::max)
    }

    fn from_fn(f: impl Fn(usize, usize) -> Vec<f64>) -> Self {
        TwoForm { comps: PAIRS.map(|(a, b)| f(a, b)) }
    }
}

/// `Ω_{αβ} = ∂_α(h u_β) − ∂_β(h u_α)`.
pub fn vorticity_two_form(field: &GridField4) -> Result<TwoForm> {
    field.check_resolution()?;
    let h = field.enthalpy();
    if h.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Domain("enthalpy must be positive".into()));
    }
    let ud = field.u_lower();
    let hu: Vec<Vec<f64>> = (0..4).map(|b| (0..field.len()).map(|k| h[k] * ud[b][k]).collect()).collect();
    Ok(curl(&field.geom, &hu))
}

fn curl(geom: &GridGeometry, v: &[Vec<f64>]) -> TwoForm {
    TwoForm::from_fn(|a, b| {
        let dab = geom.diff(&v[b], a);
        let dba = geom.diff(&v[a], b);
        dab.iter().zip(&dba).map(|(x, y)| x - y).collect()
    })
}

/// Componentwise residual fields and their max-norm over valid points.
#[derive(Clone, Debug)]
pub struct Residual {
    pub components: Vec<Vec<f64>>,
    pub max_norm: f64,
}

impl Residual {
    fn new(geom: &GridGeometry, components: Vec<Vec<f64>>) -> Self {
        let max_norm = components.iter().map(|c| geom.max_abs(c)).fold(0.0, f64::max);
        Residual { components, max_norm }
    }
}

/// `u^α Ω_{αβ} − θ ∂_β s` for each `β`.
pub fn lichnerowicz_residual(field: &GridField4, closure: Option<&dyn ThermalClosure>) -> Result<Residual> {
    let closure = closure.ok_or(Error::MissingTemperature)?;
    let th = field.thermo(closure)?;
    let omega = vorticity_two_form(field)?;
    let ds = field.geom.gradient(&field.s);
    let comps = (0..4)
        .map(|b| {
            (0..field.len())
                .map(|k| {
                    let contraction: f64 = (0..4).map(|a| field.u[a][k] * omega.get(a, b, k)).sum();
                    contraction - th.theta[k] * ds[b][k]
                })
                .collect()
        })
        .collect();
    Ok(Residual::new(&field.geom, comps))
}

/// Transport identity for `Ω` along the enthalpy current `w = h u`.
pub fn vorticity_evolution_residual(
    field: &GridField4,
    closure: Option<&dyn ThermalClosure>,
) -> Result<Residual> {
    let closure = closure.ok_or(Error::MissingTemperature)?;
    let th = field.thermo(closure)?;
    let geom = &field.geom;
    let omega = vorticity_two_form(field)?;
    let w: Vec<Vec<f64>> = (0..4).map(|a| (0..field.len()).map(|k| th.h[k] * field.u[a][k]).collect()).collect();
    let dw: Vec<[Vec<f64>; 4]> = w.iter().map(|c| geom.gradient(c)).collect(); // dw[μ][α] = ∂_α w^μ
    let d_omega: Vec<[Vec<f64>; 4]> = PAIRS.iter().map(|&(a, b)| geom.gradient(&omega.component(a, b))).collect();
    let htheta: Vec<f64> = (0..field.len()).map(|k| th.h[k] * th.theta[k]).collect();
    let dht = geom.gradient(&htheta);
    let ds = geom.gradient(&field.s);
    let comps = PAIRS
        .iter()
        .enumerate()
        .map(|(p, &(a, b))| {
            (0..field.len())
                .map(|k| {
                    let mut lhs = 0.0;
                    for m in 0..4 {
                        lhs += w[m][k] * d_omega[p][m][k];
                        lhs += dw[m][a][k] * omega.get(m, b, k);
                        lhs += dw[m][b][k] * omega.get(a, m, k);
                    }
                    lhs - (dht[a][k] * ds[b][k] - dht[b][k] * ds[a][k])
                })
                .collect()
        })
        .collect();
    Ok(Residual::new(geom, comps))
}

/// Auxiliary fields of the first-order reformulation.
#[derive(Clone, Debug)]
pub struct VorticityPack {
    pub omega_form: TwoForm,
    /// `ω^α = vort^α(h u)`.
    pub omega: [Vec<f64>; 4],
    /// `S_α = ∂_α s`.
    pub entropy_gradient: [Vec<f64>; 4],
    /// Modified vorticity of the vorticity, `𝒞^α`.
    pub c: [Vec<f64>; 4],
    /// Modified divergence of the entropy gradient, `𝒟`.
    pub d: Vec<f64>,
}

/// `vort^α(V) = −ε^{αβγδ} u_β ∂_γ V_δ` for a covariant field `V`.
pub fn vort(field: &GridField4, v_lower: &[Vec<f64>]) -> [Vec<f64>; 4] {
    let geom = &field.geom;
    let ud = field.u_lower();
    let dv: Vec<[Vec<f64>; 4]> = v_lower.iter().map(|c| geom.gradient(c)).collect(); // dv[δ][γ]
    let eps = field.metric().epsilon_entries();
    let mut out: [Vec<f64>; 4] = std::array::from_fn(|_| vec![0.0; field.len()]);
    for &([a, b, c, d], e) in &eps {
        for (k, o) in out[a].iter_mut().enumerate() {
            *o -= e * ud[b][k] * dv[d][c][k];
        }
    }
    out
}

fn lower_field(metric: &Metric4, v: &[Vec<f64>; 4]) -> [Vec<f64>; 4] {
    let g = metric.g();
    std::array::from_fn(|b| (0..v[0].len()).map(|k| (0..4).map(|m| g[(b, m)] * v[m][k]).sum()).collect())
}

fn raise_field(metric: &Metric4, v: &[Vec<f64>; 4]) -> [Vec<f64>; 4] {
    let gi = metric.ginv();
    std::array::from_fn(|b| (0..v[0].len()).map(|k| (0..4).map(|m| gi[(b, m)] * v[m][k]).sum()).collect())
}

pub fn auxiliary_pack(field: &GridField4, closure: Option<&dyn ThermalClosure>) -> Result<VorticityPack> {
    let closure = closure.ok_or(Error::MissingTemperature)?;
    let th = field.thermo(closure)?;
    if th.n.contains(&0.0) {
        return Err(Error::DivisionByZero("baryon density vanishes on the grid".into()));
    }
    let geom = &field.geom;
    let metric = field.metric();
    let n = field.len();
    let omega_form = vorticity_two_form(field)?;
    let ud = field.u_lower();
    let hu: Vec<Vec<f64>> = (0..4).map(|b| (0..n).map(|k| th.h[k] * ud[b][k]).collect()).collect();
    let omega = vort(field, &hu);
    let omega_lower = lower_field(metric, &omega);
    let vort_omega = vort(field, &omega_lower);
    let s_lower = geom.gradient(&field.s);
    let s_upper = raise_field(metric, &s_lower);
    let dh = geom.gradient(&field.hhat);
    let du = field.velocity_gradients(); // du[λ][α] = ∂_λ u^α
    let div_s: Vec<f64> = {
        let parts: Vec<Vec<f64>> = (0..4).map(|l| geom.diff(&s_upper[l], l)).collect();
        (0..n).map(|k| (0..4).map(|l| parts[l][k]).sum()).collect()
    };
    let eps = metric.epsilon_entries();
    let mut c: [Vec<f64>; 4] = Default::default();
    let mut d = Vec::with_capacity(n);
    for k in 0..n {
        let cs2 = th.cs[k] * th.cs[k];
        let div_u: f64 = (0..4).map(|l| du[l][l][k]).sum();
        let s_dh: f64 = (0..4).map(|l| s_upper[l][k] * dh[l][k]).sum();
        let coef = th.theta[k] - th.dtheta_dhhat[k];
        for (a, ca) in c.iter_mut().enumerate() {
            let eps_term: f64 = eps
                .iter()
                .filter(|(idx, _)| idx[0] == a)
                .map(|&([_, b, g, dd], e)| e * ud[b][k] * dh[g][k] * omega_lower[dd][k])
                .sum();
            let transport: f64 = (0..4).map(|l| s_upper[l][k] * du[l][a][k]).sum();
            ca.push(
                vort_omega[a][k]
                    + eps_term / cs2
                    + coef * (s_upper[a][k] * div_u + field.u[a][k] * s_dh + transport),
            );
        }
        d.push((div_s[k] + s_dh - s_dh / cs2) / th.n[k]);
    }
    Ok(VorticityPack { omega_form, omega, entropy_gradient: s_lower, c, d })
}

/// Which null form to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NullFormKind {
    Symmetric,
    Antisymmetric,
}

/// Value of a null form: a scalar or an antisymmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NullFormValue {
    Scalar(f64),
    Matrix(Mat4),
}

/// `𝒬^G(φ,ψ) = (G⁻¹)^{αβ}∂_αφ∂_βψ` or `𝒬_{αβ}(φ,ψ) = ∂_αφ∂_βψ − ∂_βφ∂_αψ`.
pub fn null_form(ginv: &Mat4, dphi: &Vec4, dpsi: &Vec4, kind: NullFormKind) -> NullFormValue {
    match kind {
        NullFormKind::Symmetric => NullFormValue::Scalar(dphi.dot(&(ginv * dpsi))),
        NullFormKind::Antisymmetric => NullFormValue::Matrix(dphi * dpsi.transpose() - dpsi * dphi.transpose()),
    }
}

/// Sound speed and flow velocity sampled on a grid: the data defining `G`.
#[derive(Clone, Debug)]
pub struct AcousticField {
    pub geom: GridGeometry,
    pub cs2: Vec<f64>,
    pub u: [Vec<f64>; 4],
}

/// Both evaluations of `□_G f` and their largest disagreement.
#[derive(Clone, Debug)]
pub struct WaveOperator {
    pub divergence: Vec<f64>,
    pub expanded: Vec<f64>,
    pub max_discrepancy: f64,
}

/// `□_G f = |det G|^{-1/2} ∂_α(|det G|^{1/2} (G⁻¹)^{αβ} ∂_β f)`.
pub fn wave_operator(gfield: &AcousticField, f: &[f64]) -> Result<WaveOperator> {
    let geom = &gfield.geom;
    geom.check_resolution()?;
    if let Some(&bad) = gfield.cs2.iter().find(|&&c| !(c > 0.0 && c <= 1.0)) {
        return Err(Error::DegenerateSoundSpeed(bad));
    }
    let n = geom.len();
    let gi = geom.metric.ginv();
    let cs: Vec<f64> = gfield.cs2.iter().map(|c| c.sqrt()).collect();
    let m = |k: usize, a: usize, b: usize| {
        let c = cs[k];
        gi[(a, b)] / c + (1.0 / c - 1.0 / (c * c * c)) * gfield.u[a][k] * gfield.u[b][k]
    };
    let df = geom.gradient(f);
    // Divergence form.
    let flux: Vec<Vec<f64>> =
        (0..4).map(|a| (0..n).map(|k| (0..4).map(|b| m(k, a, b) * df[b][k]).sum()).collect()).collect();
    let dflux: Vec<Vec<f64>> = (0..4).map(|a| geom.diff(&flux[a], a)).collect();
    let divergence: Vec<f64> =
        (0..n).map(|k| cs[k].powi(3) * (0..4).map(|a| dflux[a][k]).sum::<f64>()).collect();
    // Expanded form with product-rule coefficient derivatives.
    let dcs = geom.gradient(&cs);
    let du: Vec<[Vec<f64>; 4]> = gfield.u.iter().map(|c| geom.gradient(c)).collect(); // du[β][α] = ∂_α u^β
    let mut second = vec![vec![Vec::new(); 4]; 4];
    for a in 0..4 {
        for b in a..4 {
            second[a][b] = geom.diff2(f, a, b);
        }
    }
    let expanded: Vec<f64> = (0..n)
        .map(|k| {
            let c = cs[k];
            let mut acc = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                    acc += m(k, a, b) * second[lo][hi][k];
                }
            }
            let div_u: f64 = (0..4).map(|a| du[a][a][k]).sum();
            for b in 0..4 {
                let mut dm = 0.0;
                for a in 0..4 {
                    let ua = gfield.u[a][k];
                    let ub = gfield.u[b][k];
                    dm += -dcs[a][k] / (c * c) * gi[(a, b)];
                    dm += (-1.0 / (c * c) + 3.0 / (c * c * c * c)) * dcs[a][k] * ua * ub;
                    dm += (1.0 / c - 1.0 / (c * c * c)) * ua * du[b][a][k];
                }
                dm += (1.0 / c - 1.0 / (c * c * c)) * div_u * gfield.u[b][k];
                acc += dm * df[b][k];
            }
            c * c * c * acc
        })
        .collect();
    let diff: Vec<f64> = divergence.iter().zip(&expanded).map(|(a, b)| a - b).collect();
    Ok(WaveOperator { max_discrepancy: geom.max_abs(&diff), divergence, expanded })
}

/// `□_G ĥ` minus the explicit right-hand side of the log-enthalpy wave
/// equation.
pub fn hhat_wave_residual(field: &GridField4, closure: Option<&dyn ThermalClosure>) -> Result<Residual> {
    let closure = closure.ok_or(Error::MissingTemperature)?;
    let th = field.thermo(closure)?;
    let geom = &field.geom;
    let metric = field.metric();
    let gi = metric.ginv();
    let n = field.len();
    let acoustic = AcousticField {
        geom: *geom,
        cs2: th.cs.iter().map(|c| c * c).collect(),
        u: field.u.clone(),
    };
    let boxed = wave_operator(&acoustic, &field.hhat)?.divergence;
    let pack = auxiliary_pack(field, Some(closure))?;
    let s_lower = &pack.entropy_gradient;
    let s_upper = raise_field(metric, s_lower);
    let dh = geom.gradient(&field.hhat);
    let du = field.velocity_gradients(); // du[m][a] = ∂_m u^a
    let rhs: Vec<f64> = (0..n)
        .map(|k| {
            let c = th.cs[k];
            let c2 = c * c;
            let u = field.u_at(k);
            let ginv_ac = gi * c2 + (c2 - 1.0) * u * u.transpose();
            let dhv = Vec4::new(dh[0][k], dh[1][k], dh[2][k], dh[3][k]);
            let qg = dhv.dot(&(ginv_ac * dhv));
            let s_dh: f64 = (0..4).map(|b| s_upper[b][k] * dh[b][k]).sum();
            let s_s: f64 = (0..4).map(|b| s_upper[b][k] * s_lower[b][k]).sum();
            let div_u: f64 = (0..4).map(|a| du[a][a][k]).sum();
            let mut cross = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    cross += du[b][a][k] * du[a][b][k];
                }
            }
            th.n[k] * c2 * th.q[k] * pack.d[k] + (1.0 - c2) * th.q[k] * s_dh
                - th.dcs_dhhat[k] / c * qg
                + c2 * (div_u * div_u - cross)
                - c * th.dcs_ds[k] * s_dh
                + c2 * th.dq_dhhat[k] * s_dh
                + c2 * th.dq_ds[k] * s_s
        })
        .collect();
    let comp = boxed.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    Ok(Residual::new(geom, vec![comp]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::IdealGas;

    fn constant_field() -> GridField4 {
        let geom = GridGeometry::new([5, 6, 5, 5], [0.1; 4]).unwrap();
        let u = crate::kinematics::normalize_velocity([0.3, -0.1, 0.2], &Metric4::minkowski()).unwrap();
        GridField4::from_fn(geom, 1.0, |_| [0.4, -0.2, u[0], u[1], u[2], u[3]]).unwrap()
    }

    #[test]
    fn constant_state_residuals_vanish_exactly() {
        let f = constant_field();
        let gas = IdealGas::new(1.4).unwrap();
        let cl: Option<&dyn ThermalClosure> = Some(&gas);
        assert_eq!(vorticity_two_form(&f).unwrap().max_abs(&f.geom), 0.0);
        assert_eq!(lichnerowicz_residual(&f, cl).unwrap().max_norm, 0.0);
        assert_eq!(vorticity_evolution_residual(&f, cl).unwrap().max_norm, 0.0);
        assert_eq!(hhat_wave_residual(&f, cl).unwrap().max_norm, 0.0);
        let pack = auxiliary_pack(&f, cl).unwrap();
        assert!(pack.c.iter().all(|c| c.iter().all(|&x| x == 0.0)));
        assert!(pack.d.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn missing_temperature_is_reported() {
        let f = constant_field();
        assert_eq!(lichnerowicz_residual(&f, None).unwrap_err().code(), "MissingTemperature");
        assert_eq!(hhat_wave_residual(&f, None).unwrap_err().code(), "MissingTemperature");
    }

    #[test]
    fn null_form_symmetries() {
        let gi = Mat4::from_diagonal(&Vec4::new(-1.0, 0.3, 0.3, 0.3));
        let a = Vec4::new(0.2, -1.0, 0.4, 0.7);
        let b = Vec4::new(1.1, 0.5, -0.3, 0.2);
        let (NullFormValue::Scalar(x), NullFormValue::Scalar(y)) = (
            null_form(&gi, &a, &b, NullFormKind::Symmetric),
            null_form(&gi, &b, &a, NullFormKind::Symmetric),
        ) else {
            panic!()
        };
        assert_eq!(x, y);
        let NullFormValue::Matrix(m) = null_form(&gi, &a, &a, NullFormKind::Antisymmetric) else { panic!() };
        assert_eq!(m, Mat4::zeros());
        let NullFormValue::Matrix(p) = null_form(&gi, &a, &b, NullFormKind::Antisymmetric) else { panic!() };
        let NullFormValue::Matrix(q) = null_form(&gi, &b, &a, NullFormKind::Antisymmetric) else { panic!() };
        assert_eq!(p, -q);
        let null = Vec4::new(0.3f64.sqrt(), 1.0, 0.0, 0.0);
        let NullFormValue::Scalar(z) = null_form(&gi, &null, &null, NullFormKind::Symmetric) else { panic!() };
        assert!(z.abs() < 1e-15);
    }
}
