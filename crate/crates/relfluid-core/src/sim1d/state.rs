use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::thermo::EquationOfState;

/// Primitive variables of one cell: energy density, baryon density,
/// three-velocity and bulk pressure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prim {
    pub rho: f64,
    pub n: f64,
    pub v: f64,
    #[serde(rename = "P_bulk")]
    pub bulk: f64,
}

/// `(T⁰⁰, T⁰¹, J⁰, u⁰𝒫)`.
pub type Cons = [f64; 4];

pub fn lorentz_factor(v: f64) -> f64 {
    1.0 / ((1.0 - v) * (1.0 + v)).sqrt()
}

pub fn prim2con(p: &Prim, eos: &dyn EquationOfState) -> Result<Cons> {
    if !(p.v.abs() < 1.0) {
        return Err(Error::SuperluminalInput(p.v));
    }
    let w = lorentz_factor(p.v);
    let ptot = eos.pressure(p.rho, p.n) + p.bulk;
    let enth = p.rho + ptot;
    Ok([enth * w * w - ptot, enth * w * w * p.v, p.n * w, w * p.bulk])
}

/// Physical flux along x.
pub fn flux(p: &Prim, u: &Cons, eos: &dyn EquationOfState) -> Cons {
    let ptot = eos.pressure(p.rho, p.n) + p.bulk;
    [u[1], u[1] * p.v + ptot, u[2] * p.v, u[3] * p.v]
}

pub const CON2PRIM_MAX_ITER: usize = 100;

/// Newton iteration on the total pressure `P = p + 𝒫`. `guess` is a previous
/// total pressure, if known.
pub fn con2prim(u: &Cons, eos: &dyn EquationOfState, guess: Option<f64>, cell: usize) -> Result<Prim> {
    let [e, s, d, q] = *u;
    let fail = |message: String| Error::Con2PrimFailure { cell, message };
    if !(e > s.abs()) || !u.iter().all(|x| x.is_finite()) {
        return Err(fail(format!("need T00 > |T01|, got ({e}, {s}, {d}, {q})")));
    }
    let lo = s.abs() - e;
    let mut pt = match guess {
        Some(g) if g > lo => g,
        _ => (eos.pressure(e, d) + q).max(lo + 1e-3 * e),
    };
    for _ in 0..CON2PRIM_MAX_ITER {
        let ep = e + pt;
        let v = s / ep;
        let v2 = v * v;
        let w = lorentz_factor(v);
        let rho = ep * (1.0 - v2) - pt;
        let n = d / w;
        let f = eos.pressure(rho, n) + q / w - pt;
        let df = eos.dp_drho(rho, n) * v2 + (eos.dp_dn(rho, n) * d + q) * v2 * w / ep - 1.0;
        let mut next = pt - f / df;
        if !(next > lo) || !next.is_finite() {
            next = 0.5 * (pt + lo);
        }
        let done = (next - pt).abs() <= 1e-12 * (1.0 + pt.abs());
        pt = next;
        if done {
            let ep = e + pt;
            let v = s / ep;
            let w = lorentz_factor(v);
            let rho = ep * (1.0 - v * v) - pt;
            if rho < 0.0 {
                return Err(Error::NegativeDensity(rho));
            }
            return Ok(Prim { rho, n: d / w, v, bulk: q / w });
        }
    }
    Err(fail(format!("no convergence in {CON2PRIM_MAX_ITER} iterations for ({e}, {s}, {d}, {q})")))
}
