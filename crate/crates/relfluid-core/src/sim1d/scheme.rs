use crate::error::Result;
use crate::registry::Registry;

use super::state::Cons;

/// Slope estimate from the one-sided differences of a cell.
pub trait Reconstruction: Send + Sync {
    fn name(&self) -> &'static str;
    fn slope(&self, left: f64, right: f64) -> f64;
}

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

struct PiecewiseConstant;
struct Minmod;
struct MonotonizedCentral;
/// Unlimited centred slope; second order on smooth data, oscillates at jumps.
struct Linear;

impl Reconstruction for PiecewiseConstant {
    fn name(&self) -> &'static str {
        "pc"
    }
    fn slope(&self, _l: f64, _r: f64) -> f64 {
        0.0
    }
}

impl Reconstruction for Minmod {
    fn name(&self) -> &'static str {
        "minmod"
    }
    fn slope(&self, l: f64, r: f64) -> f64 {
        minmod(l, r)
    }
}

impl Reconstruction for MonotonizedCentral {
    fn name(&self) -> &'static str {
        "mc"
    }
    fn slope(&self, l: f64, r: f64) -> f64 {
        minmod(0.5 * (l + r), minmod(2.0 * l, 2.0 * r))
    }
}

impl Reconstruction for Linear {
    fn name(&self) -> &'static str {
        "linear"
    }
    fn slope(&self, l: f64, r: f64) -> f64 {
        0.5 * (l + r)
    }
}

pub fn reconstruction_registry() -> Registry<dyn Reconstruction> {
    Registry::<dyn Reconstruction>::new("reconstruction")
        .with("pc", |_| Ok(Box::new(PiecewiseConstant)))
        .with("minmod", |_| Ok(Box::new(Minmod)))
        .with("mc", |_| Ok(Box::new(MonotonizedCentral)))
        .with("linear", |_| Ok(Box::new(Linear)))
}

/// One side of an interface: conserved state, physical flux, and the
/// slowest/fastest signal speeds.
#[derive(Clone, Copy, Debug)]
pub struct FaceState {
    pub u: Cons,
    pub f: Cons,
    pub speeds: (f64, f64),
}

pub trait RiemannSolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn flux(&self, l: &FaceState, r: &FaceState) -> Cons;
}

struct Hll;
struct Rusanov;

impl RiemannSolver for Hll {
    fn name(&self) -> &'static str {
        "hll"
    }
    fn flux(&self, l: &FaceState, r: &FaceState) -> Cons {
        let sl = l.speeds.0.min(r.speeds.0);
        let sr = l.speeds.1.max(r.speeds.1);
        if sl >= 0.0 {
            return l.f;
        }
        if sr <= 0.0 {
            return r.f;
        }
        std::array::from_fn(|k| (sr * l.f[k] - sl * r.f[k] + sl * sr * (r.u[k] - l.u[k])) / (sr - sl))
    }
}

impl RiemannSolver for Rusanov {
    fn name(&self) -> &'static str {
        "rusanov"
    }
    fn flux(&self, l: &FaceState, r: &FaceState) -> Cons {
        let s = [l.speeds.0, l.speeds.1, r.speeds.0, r.speeds.1].iter().fold(0.0f64, |a, b| a.max(b.abs()));
        std::array::from_fn(|k| 0.5 * (l.f[k] + r.f[k]) - 0.5 * s * (r.u[k] - l.u[k]))
    }
}

pub fn riemann_registry() -> Registry<dyn RiemannSolver> {
    Registry::<dyn RiemannSolver>::new("riemann")
        .with("hll", |_| Ok(Box::new(Hll)))
        .with("rusanov", |_| Ok(Box::new(Rusanov)))
}

pub type Rhs<'a> = dyn FnMut(&[Cons]) -> Result<Vec<Cons>> + 'a;

/// Explicit time integrator for `du/dt = L(u)`.
pub trait Integrator: Send + Sync {
    fn name(&self) -> &'static str;
    fn step(&self, u: &mut Vec<Cons>, dt: f64, rhs: &mut Rhs<'_>) -> Result<()>;
}

struct SspRk2;
struct SspRk3;

fn axpy(a: &[Cons], b: &[Cons], wa: f64, wb: f64, dt_b: f64, l: &[Cons]) -> Vec<Cons> {
    a.iter()
        .zip(b)
        .zip(l)
        .map(|((x, y), z)| std::array::from_fn(|k| wa * x[k] + wb * (y[k] + dt_b * z[k])))
        .collect()
}

impl Integrator for SspRk2 {
    fn name(&self) -> &'static str {
        "ssp-rk2"
    }
    fn step(&self, u: &mut Vec<Cons>, dt: f64, rhs: &mut Rhs<'_>) -> Result<()> {
        let l0 = rhs(u)?;
        let u1 = axpy(u, u, 0.0, 1.0, dt, &l0);
        let l1 = rhs(&u1)?;
        *u = axpy(u, &u1, 0.5, 0.5, dt, &l1);
        Ok(())
    }
}

impl Integrator for SspRk3 {
    fn name(&self) -> &'static str {
        "ssp-rk3"
    }
    fn step(&self, u: &mut Vec<Cons>, dt: f64, rhs: &mut Rhs<'_>) -> Result<()> {
        let l0 = rhs(u)?;
        let u1 = axpy(u, u, 0.0, 1.0, dt, &l0);
        let l1 = rhs(&u1)?;
        let u2 = axpy(u, &u1, 0.75, 0.25, dt, &l1);
        let l2 = rhs(&u2)?;
        *u = axpy(u, &u2, 1.0 / 3.0, 2.0 / 3.0, dt, &l2);
        Ok(())
    }
}

pub fn integrator_registry() -> Registry<dyn Integrator> {
    Registry::<dyn Integrator>::new("integrator")
        .with("ssp-rk2", |_| Ok(Box::new(SspRk2)))
        .with("ssp-rk3", |_| Ok(Box::new(SspRk3)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn limiters() {
        let reg = reconstruction_registry();
        let mm = reg.build("minmod", &Value::Null).unwrap();
        assert_eq!(mm.slope(1.0, 2.0), 1.0);
        assert_eq!(mm.slope(-1.0, 2.0), 0.0);
        let mc = reg.build("mc", &Value::Null).unwrap();
        assert_eq!(mc.slope(1.0, 2.0), 1.5);
        assert_eq!(mc.slope(1.0, 10.0), 2.0);
        assert_eq!(reg.build("linear", &Value::Null).unwrap().slope(-1.0, 3.0), 1.0);
    }

    #[test]
    fn rk_orders_on_linear_ode() {
        // du/dt = −u; one step error scales as dt^(order+1).
        for (name, order) in [("ssp-rk2", 2), ("ssp-rk3", 3)] {
            let integ = integrator_registry().build(name, &Value::Null).unwrap();
            let err = |dt: f64| {
                let mut u = vec![[1.0, 0.0, 0.0, 0.0]];
                integ.step(&mut u, dt, &mut |x: &[Cons]| Ok(x.iter().map(|c| [-c[0], 0.0, 0.0, 0.0]).collect())).unwrap();
                (u[0][0] - (-dt).exp()).abs()
            };
            let ratio = err(0.1) / err(0.05);
            assert!((ratio.log2() - (order + 1) as f64).abs() < 0.2, "{name}: {ratio}");
        }
    }

    #[test]
    fn hll_upwinds_supersonic_flow() {
        let l = FaceState { u: [1.0; 4], f: [2.0; 4], speeds: (0.1, 0.9) };
        let r = FaceState { u: [3.0; 4], f: [5.0; 4], speeds: (0.2, 0.8) };
        let h = riemann_registry().build("hll", &Value::Null).unwrap();
        assert_eq!(h.flux(&l, &r), [2.0; 4]);
    }
}
