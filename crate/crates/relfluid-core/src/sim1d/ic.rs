use std::f64::consts::PI;

use serde_json::Value;

use super::state::Prim;
use super::Grid1D;
use crate::error::{Error, Result};
use crate::registry::{param_f64, Registry};
use crate::thermo::{sound_speed_sq, EquationOfState};

/// Initial data on cell centres.
pub trait InitialCondition: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, grid: &Grid1D, eos: &dyn EquationOfState) -> Result<Vec<Prim>>;
}

/// Periodic density bump with optional velocity and entropy modulation.
#[derive(Clone, Copy, Debug)]
pub struct Bump {
    pub rho0: f64,
    pub amp: f64,
    pub width: f64,
    pub center: f64,
    pub v0: f64,
    pub v_amp: f64,
    pub s0: f64,
    pub s_amp: f64,
    pub n0: f64,
    pub bulk0: f64,
}

impl Bump {
    fn from_params(p: &Value) -> Result<Self> {
        Ok(Bump {
            rho0: param_f64(p, "rho0", 1.0)?,
            amp: param_f64(p, "amp", 0.2)?,
            width: param_f64(p, "width", 0.3)?,
            center: param_f64(p, "center", 0.5)?,
            v0: param_f64(p, "v0", 0.0)?,
            v_amp: param_f64(p, "v_amp", 0.0)?,
            s0: param_f64(p, "s0", 0.0)?,
            s_amp: param_f64(p, "s_amp", 0.0)?,
            n0: param_f64(p, "n0", 1.0)?,
            bulk0: param_f64(p, "bulk0", 0.0)?,
        })
    }
}

impl InitialCondition for Bump {
    fn name(&self) -> &'static str {
        "bump"
    }

    fn build(&self, grid: &Grid1D, eos: &dyn EquationOfState) -> Result<Vec<Prim>> {
        let len = grid.length();
        let thermal = eos.thermal().filter(|_| eos.two_variable());
        (0..grid.n_cells)
            .map(|i| {
                let xi = (grid.center(i) - grid.x_min) / len;
                let arg = (PI * (xi - self.center)).sin() / self.width;
                let rho = self.rho0 * (1.0 + self.amp * (-arg * arg).exp());
                let v = self.v0 + self.v_amp * (2.0 * PI * xi).sin();
                let n = match thermal {
                    Some(t) => t.density_from_entropy(rho, self.s0 + self.s_amp * (2.0 * PI * xi).cos())?,
                    None => self.n0,
                };
                Ok(Prim { rho, n, v, bulk: self.bulk0 })
            })
            .collect()
    }
}

/// Right- or left-moving simple wave of a barotropic law, built from the
/// Riemann invariant `artanh v ∓ ∫ c_s/(ρ+p) dρ`.
#[derive(Clone, Copy, Debug)]
pub struct SimpleWave {
    pub rho0: f64,
    pub amp: f64,
    pub n0: f64,
    pub direction: f64,
}

fn riemann_integral(eos: &dyn EquationOfState, a: f64, b: f64) -> Result<f64> {
    const M: usize = 256;
    let g = |r: f64| -> Result<f64> { Ok(sound_speed_sq(eos, r, 0.0)?.max(0.0).sqrt() / (r + eos.pressure(r, 0.0))) };
    let h = (b - a) / M as f64;
    let mut sum = g(a)? + g(b)?;
    for k in 1..M {
        sum += if k % 2 == 1 { 4.0 } else { 2.0 } * g(a + k as f64 * h)?;
    }
    Ok(sum * h / 3.0)
}

impl InitialCondition for SimpleWave {
    fn name(&self) -> &'static str {
        "simple-wave"
    }

    fn build(&self, grid: &Grid1D, eos: &dyn EquationOfState) -> Result<Vec<Prim>> {
        if eos.two_variable() {
            return Err(Error::Config("simple-wave initial data needs a barotropic equation of state".into()));
        }
        let len = grid.length();
        (0..grid.n_cells)
            .map(|i| {
                let xi = (grid.center(i) - grid.x_min) / len;
                let rho = self.rho0 * (1.0 + self.amp * (2.0 * PI * xi).sin());
                let phi = self.direction.signum() * riemann_integral(eos, self.rho0, rho)?;
                Ok(Prim { rho, n: self.n0, v: phi.tanh(), bulk: 0.0 })
            })
            .collect()
    }
}

/// Linear interpolation of tabulated profiles onto cell centres.
#[derive(Clone, Debug)]
pub struct CustomTable {
    x: Vec<f64>,
    rho: Vec<f64>,
    v: Vec<f64>,
    n: Option<Vec<f64>>,
    bulk: Option<Vec<f64>>,
}

fn column(p: &Value, key: &str) -> Result<Option<Vec<f64>>> {
    match p.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Array(a)) => a
            .iter()
            .map(|x| x.as_f64().ok_or_else(|| Error::Config(format!("table column '{key}' must hold numbers"))))
            .collect::<Result<Vec<_>>>()
            .map(Some),
        Some(_) => Err(Error::Config(format!("table column '{key}' must be an array"))),
    }
}

impl CustomTable {
    fn from_params(p: &Value) -> Result<Self> {
        let need = |k: &str| column(p, k)?.ok_or_else(|| Error::Config(format!("custom-table needs '{k}'")));
        let t = CustomTable { x: need("x")?, rho: need("rho")?, v: need("v")?, n: column(p, "n")?, bulk: column(p, "P_bulk")? };
        let len = t.x.len();
        let lens = [Some(t.rho.len()), Some(t.v.len()), t.n.as_ref().map(Vec::len), t.bulk.as_ref().map(Vec::len)];
        if len < 2 || lens.iter().flatten().any(|&l| l != len) {
            return Err(Error::Config("custom-table columns must share a length of at least 2".into()));
        }
        if t.x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("custom-table x must be strictly increasing".into()));
        }
        Ok(t)
    }

    fn interp(&self, col: &[f64], x: f64) -> f64 {
        let k = self.x.partition_point(|&xi| xi <= x);
        if k == 0 {
            return col[0];
        }
        if k == self.x.len() {
            return col[k - 1];
        }
        let w = (x - self.x[k - 1]) / (self.x[k] - self.x[k - 1]);
        col[k - 1] + w * (col[k] - col[k - 1])
    }
}

impl InitialCondition for CustomTable {
    fn name(&self) -> &'static str {
        "custom-table"
    }

    fn build(&self, grid: &Grid1D, _eos: &dyn EquationOfState) -> Result<Vec<Prim>> {
        Ok((0..grid.n_cells)
            .map(|i| {
                let x = grid.center(i);
                Prim {
                    rho: self.interp(&self.rho, x),
                    n: self.n.as_ref().map_or(1.0, |c| self.interp(c, x)),
                    v: self.interp(&self.v, x),
                    bulk: self.bulk.as_ref().map_or(0.0, |c| self.interp(c, x)),
                }
            })
            .collect())
    }
}

pub fn ic_registry() -> Registry<dyn InitialCondition> {
    Registry::<dyn InitialCondition>::new("ic")
        .with("bump", |p| Ok(Box::new(Bump::from_params(p)?)))
        .with("simple-wave", |p| {
            Ok(Box::new(SimpleWave {
                rho0: param_f64(p, "rho0", 1.0)?,
                amp: param_f64(p, "amp", 0.3)?,
                n0: param_f64(p, "n0", 1.0)?,
                direction: param_f64(p, "direction", 1.0)?,
            }))
        })
        .with("custom-table", |p| Ok(Box::new(CustomTable::from_params(p)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::{Conformal, IdealGas, LinearEos};
    use serde_json::json;

    fn grid() -> Grid1D {
        Grid1D::new(16, 0.0, 1.0, true).unwrap()
    }

    #[test]
    fn simple_wave_invariant_for_constant_sound_speed() {
        // With p = wρ the integral is √w/(1+w)·ln(ρ/ρ₀).
        let eos = LinearEos::new(0.25).unwrap();
        let ic = ic_registry().build("simple-wave", &json!({"rho0": 2.0, "amp": 0.4})).unwrap();
        let g = grid();
        for (i, p) in ic.build(&g, &eos).unwrap().iter().enumerate() {
            let want = (0.5 / 1.25 * (p.rho / 2.0).ln()).tanh();
            assert!((p.v - want).abs() < 1e-12, "cell {i}");
        }
        assert!(ic.build(&g, &IdealGas::new(1.4).unwrap()).is_err());
    }

    #[test]
    fn table_interpolates() {
        let ic = ic_registry()
            .build("custom-table", &json!({"x": [0.0, 1.0], "rho": [1.0, 3.0], "v": [0.0, 0.0]}))
            .unwrap();
        let p = ic.build(&grid(), &Conformal).unwrap();
        assert!((p[0].rho - (1.0 + 2.0 / 32.0)).abs() < 1e-15);
        assert_eq!(p[0].n, 1.0);
    }
}
