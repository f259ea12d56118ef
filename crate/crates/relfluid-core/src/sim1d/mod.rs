//! Finite-volume solver for the 1+1 dimensional relativistic Euler
//! equations with an optional relaxing bulk pressure, and the Bjorken
//! flow oracle.

mod bjorken;
mod ic;
mod scheme;
mod state;

pub use bjorken::{bjorken_oracle, BjorkenMode, BjorkenPoint};
pub use ic::{ic_registry, Bump, CustomTable, InitialCondition, SimpleWave};
pub use scheme::{
    integrator_registry, reconstruction_registry, riemann_registry, FaceState, Integrator, Reconstruction, RiemannSolver,
};
pub use state::{con2prim, flux, lorentz_factor, prim2con, Cons, Prim};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::formulation::{GridField4, GridGeometry};
use crate::thermo::{eos_registry, sound_speed_sq, EquationOfState};
use crate::viscous_causality::{dnmr_verdict, DnmrCoefficients, DnmrState, Verdict};

pub const MAX_CFL: f64 = 0.4;

/// Relaxation coefficients of the bulk pressure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BulkCoefficients {
    pub zeta: f64,
    #[serde(rename = "tau_P")]
    pub tau_p: f64,
    #[serde(rename = "delta_PP", default)]
    pub delta_pp: f64,
}

impl BulkCoefficients {
    fn validate(&self) -> Result<()> {
        if !(self.tau_p > 0.0 && self.zeta >= 0.0 && self.delta_pp >= 0.0) {
            return Err(Error::Config(format!("bulk coefficients need tau_P > 0, zeta >= 0, delta_PP >= 0: {self:?}")));
        }
        Ok(())
    }
}

/// Uniform cell-centred grid on `[x_min, x_min + n_cells·dx]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid1D {
    pub n_cells: usize,
    pub dx: f64,
    pub x_min: f64,
    pub periodic: bool,
}

impl Grid1D {
    pub fn new(n_cells: usize, x_min: f64, x_max: f64, periodic: bool) -> Result<Self> {
        if n_cells < 8 {
            return Err(Error::Config(format!("need at least 8 cells, got {n_cells}")));
        }
        if !(x_max > x_min) {
            return Err(Error::Config(format!("empty interval [{x_min}, {x_max}]")));
        }
        Ok(Grid1D { n_cells, dx: (x_max - x_min) / n_cells as f64, x_min, periodic })
    }

    pub fn length(&self) -> f64 {
        self.dx * self.n_cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx
    }

    /// Cell index for a possibly out-of-range position (ghost cells).
    fn wrap(&self, i: isize) -> usize {
        let n = self.n_cells as isize;
        if self.periodic {
            i.rem_euclid(n) as usize
        } else {
            i.clamp(0, n - 1) as usize
        }
    }
}

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n_cells: usize,
    #[serde(default)]
    pub x_min: f64,
    #[serde(default = "one")]
    pub x_max: f64,
    #[serde(default = "yes")]
    pub periodic: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SchemeConfig {
    pub reconstruction: String,
    pub riemann: String,
    pub integrator: String,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        SchemeConfig { reconstruction: "minmod".into(), riemann: "hll".into(), integrator: "ssp-rk2".into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IcConfig {
    pub kind: String,
    #[serde(default)]
    pub params: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub eos: Value,
    #[serde(default)]
    pub coeffs: Option<BulkCoefficients>,
    pub ic: IcConfig,
    pub t_end: f64,
    pub output_every: usize,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default)]
    pub scheme: SchemeConfig,
    #[serde(default = "one")]
    pub hbar: f64,
}

fn default_cfl() -> f64 {
    MAX_CFL
}

impl RunConfig {
    pub fn from_json(v: &Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Config(format!("run config: {e}")))
    }
}

/// A configured solver together with its conserved state.
pub struct Solver {
    pub grid: Grid1D,
    pub eos: Box<dyn EquationOfState>,
    pub coeffs: Option<BulkCoefficients>,
    recon: Box<dyn Reconstruction>,
    riemann: Box<dyn RiemannSolver>,
    integrator: Box<dyn Integrator>,
    pub t: f64,
    pub u: Vec<Cons>,
}

impl Solver {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        let grid = Grid1D::new(cfg.grid.n_cells, cfg.grid.x_min, cfg.grid.x_max, cfg.grid.periodic)?;
        let eos = eos_registry().build_tagged(&cfg.eos)?;
        let ic = ic_registry().build(&cfg.ic.kind, &cfg.ic.params)?;
        let prims = ic.build(&grid, eos.as_ref())?;
        let mut s = Solver::new(grid, eos, cfg.coeffs, &cfg.scheme)?;
        s.set_primitives(&prims)?;
        Ok(s)
    }

    pub fn new(
        grid: Grid1D,
        eos: Box<dyn EquationOfState>,
        coeffs: Option<BulkCoefficients>,
        scheme: &SchemeConfig,
    ) -> Result<Self> {
        if let Some(c) = &coeffs {
            c.validate()?;
        }
        Ok(Solver {
            grid,
            eos,
            coeffs,
            recon: reconstruction_registry().build(&scheme.reconstruction, &Value::Null)?,
            riemann: riemann_registry().build(&scheme.riemann, &Value::Null)?,
            integrator: integrator_registry().build(&scheme.integrator, &Value::Null)?,
            t: 0.0,
            u: Vec::new(),
        })
    }

    pub fn set_primitives(&mut self, prims: &[Prim]) -> Result<()> {
        if prims.len() != self.grid.n_cells {
            return Err(Error::Config(format!("expected {} cells, got {}", self.grid.n_cells, prims.len())));
        }
        let mut u = Vec::with_capacity(prims.len());
        for p in prims {
            if p.rho < 0.0 || p.n < 0.0 {
                return Err(Error::NegativeDensity(p.rho.min(p.n)));
            }
            let mut p = *p;
            if self.coeffs.is_none() {
                p.bulk = 0.0;
            }
            u.push(prim2con(&p, self.eos.as_ref())?);
        }
        self.u = u;
        Ok(())
    }

    pub fn primitives(&self) -> Result<Vec<Prim>> {
        primitives(&self.u, self.eos.as_ref())
    }

    /// Slowest and fastest characteristic speeds, with the bulk correction.
    fn speeds(&self, p: &Prim, cell: usize) -> Result<(f64, f64)> {
        let mut c2 = sound_speed_sq(self.eos.as_ref(), p.rho, p.n)?;
        if let Some(c) = &self.coeffs {
            let enth = p.rho + self.eos.pressure(p.rho, p.n) + p.bulk;
            c2 += (c.zeta + c.delta_pp * p.bulk) / (c.tau_p * enth);
        }
        if c2 > 1.0 {
            return Err(Error::CausalityBreach { cell, value: c2 });
        }
        let c = c2.max(0.0).sqrt();
        Ok(((p.v - c) / (1.0 - p.v * c), (p.v + c) / (1.0 + p.v * c)))
    }

    fn face(&self, w: [f64; 4], cell: usize) -> Result<FaceState> {
        let [rho, n, u1, bulk] = w;
        if rho < 0.0 || n < 0.0 {
            return Err(Error::NegativeDensity(rho.min(n)));
        }
        let p = Prim { rho, n, v: u1 / (1.0 + u1 * u1).sqrt(), bulk };
        let u = prim2con(&p, self.eos.as_ref())?;
        Ok(FaceState { u, f: flux(&p, &u, self.eos.as_ref()), speeds: self.speeds(&p, cell)? })
    }

    /// Semi-discrete rate `−(F_{i+½} − F_{i−½})/Δx`.
    pub fn rhs(&self, u: &[Cons]) -> Result<Vec<Cons>> {
        let n = self.grid.n_cells;
        let prims = primitives(u, self.eos.as_ref())?;
        let w: Vec<[f64; 4]> = prims.iter().map(|p| [p.rho, p.n, lorentz_factor(p.v) * p.v, p.bulk]).collect();
        let at = |i: isize| w[self.grid.wrap(i)];
        // Slopes for cells −1..=n.
        let slopes: Vec<[f64; 4]> = (-1..=n as isize)
            .map(|i| {
                let (l, c, r) = (at(i - 1), at(i), at(i + 1));
                std::array::from_fn(|k| self.recon.slope(c[k] - l[k], r[k] - c[k]))
            })
            .collect();
        let mut fluxes = Vec::with_capacity(n + 1);
        for f in 0..=n {
            let (il, ir) = (f as isize - 1, f as isize);
            let (wl, wr) = (at(il), at(ir));
            let (sl, sr) = (slopes[f], slopes[f + 1]);
            let left = self.face(std::array::from_fn(|k| wl[k] + 0.5 * sl[k]), self.grid.wrap(il))?;
            let right = self.face(std::array::from_fn(|k| wr[k] - 0.5 * sr[k]), self.grid.wrap(ir))?;
            fluxes.push(self.riemann.flux(&left, &right));
        }
        let inv = 1.0 / self.grid.dx;
        let mut out: Vec<Cons> = (0..n).map(|i| std::array::from_fn(|k| -(fluxes[i + 1][k] - fluxes[i][k]) * inv)).collect();
        if self.coeffs.is_none() {
            for o in &mut out {
                o[3] = 0.0;
            }
        }
        Ok(out)
    }

    fn advect(&mut self, dt: f64) -> Result<()> {
        let mut u = std::mem::take(&mut self.u);
        let this = &*self;
        let r = this.integrator.step(&mut u, dt, &mut |x: &[Cons]| this.rhs(x));
        self.u = u;
        r
    }

    /// Expansion rate `∂_μu^μ` per cell: `∂_t u⁰` along the semi-discrete
    /// rates, plus a centred `∂_x u¹`.
    pub fn expansion_rate(&self) -> Result<Vec<f64>> {
        let eos = self.eos.as_ref();
        let rates = self.rhs(&self.u)?;
        let eps = 1e-4 * self.grid.dx;
        let shifted = |s: f64| -> Vec<Cons> {
            self.u.iter().zip(&rates).map(|(u, l)| std::array::from_fn(|k| u[k] + s * l[k])).collect()
        };
        let plus = primitives(&shifted(eps), eos)?;
        let minus = primitives(&shifted(-eps), eos)?;
        let prims = self.primitives()?;
        let u1: Vec<f64> = prims.iter().map(|p| lorentz_factor(p.v) * p.v).collect();
        let n = self.grid.n_cells;
        Ok((0..n)
            .map(|i| {
                let dw = (lorentz_factor(plus[i].v) - lorentz_factor(minus[i].v)) / (2.0 * eps);
                let (l, r) = (self.grid.wrap(i as isize - 1), self.grid.wrap(i as isize + 1));
                let span = if self.grid.periodic || (i > 0 && i + 1 < n) { 2.0 } else { 1.0 };
                dw + (u1[r] - u1[l]) / (span * self.grid.dx)
            })
            .collect())
    }

    /// Exact solve of `τ u^μ∂_μ𝒫 + 𝒫 + (ζ + δ𝒫)θ = 0` at frozen `u⁰` and `θ`.
    fn relax(&mut self, dt: f64) -> Result<()> {
        let Some(c) = self.coeffs else { return Ok(()) };
        let theta = self.expansion_rate()?;
        let prims = self.primitives()?;
        for (i, p) in prims.iter().enumerate() {
            let w = lorentz_factor(p.v);
            let a = (theta[i] * (1.0 - c.delta_pp / c.tau_p) - 1.0 / c.tau_p) / w;
            let b = -c.zeta * theta[i] / (c.tau_p * w);
            let em1 = (a * dt).exp_m1();
            let bulk = if a == 0.0 { p.bulk + b * dt } else { p.bulk + p.bulk * em1 + b / a * em1 };
            self.u[i][3] = w * bulk;
        }
        Ok(())
    }

    /// Advection, then relaxation, then advection when bulk is active.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        if self.coeffs.is_some() {
            self.advect(0.5 * dt)?;
            self.relax(dt)?;
            self.advect(0.5 * dt)?;
        } else {
            self.advect(dt)?;
        }
        self.t += dt;
        Ok(())
    }

    /// `Σ (T⁰⁰, T⁰¹, J⁰)·Δx`.
    pub fn totals(&self) -> [f64; 3] {
        let mut s = [0.0; 3];
        for u in &self.u {
            for k in 0..3 {
                s[k] += u[k];
            }
        }
        s.map(|x| x * self.grid.dx)
    }
}

pub fn primitives(u: &[Cons], eos: &dyn EquationOfState) -> Result<Vec<Prim>> {
    u.iter().enumerate().map(|(i, c)| con2prim(c, eos, None, i)).collect()
}

/// Verdict counts of a DNMR audit of one output frame.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct FrameAudit {
    pub causal: usize,
    pub acausal: usize,
    pub indeterminate: usize,
    pub invalid: usize,
}

/// Bulk-only audit: the shear eigenvalues vanish in these runs.
pub fn audit_frame(prims: &[Prim], eos: &dyn EquationOfState, coeffs: &BulkCoefficients) -> FrameAudit {
    let mut out = FrameAudit::default();
    for p in prims {
        let verdict = sound_speed_sq(eos, p.rho, p.n).and_then(|cs2| {
            let c = DnmrCoefficients { zeta: coeffs.zeta, tau_p: coeffs.tau_p, delta_pp: coeffs.delta_pp, ..DnmrCoefficients::ideal(cs2) };
            let s = DnmrState { rho: p.rho, p: eos.pressure(p.rho, p.n), bulk: p.bulk, lambda: [0.0; 3] };
            dnmr_verdict(&s, &c, false).map(|v| v.verdict)
        });
        match verdict {
            Ok(Verdict::Causal) => out.causal += 1,
            Ok(Verdict::Acausal) => out.acausal += 1,
            Ok(Verdict::Indeterminate) => out.indeterminate += 1,
            _ => out.invalid += 1,
        }
    }
    out
}

/// Stored output of a run.
#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub grid: Grid1D,
    pub dt: f64,
    pub steps: usize,
    pub times: Vec<f64>,
    #[serde(skip)]
    pub frames: Vec<Vec<Prim>>,
    /// `max_i |∂_x v|` per frame (steepening diagnostic).
    pub max_dvdx: Vec<f64>,
    /// Largest per-step change of each total, relative to `Σ|U|Δx`.
    pub max_step_drift: [f64; 3],
    pub audits: Vec<FrameAudit>,
}

fn max_dvdx(prims: &[Prim], grid: &Grid1D) -> f64 {
    let n = grid.n_cells;
    (0..n)
        .map(|i| {
            let (l, r) = (grid.wrap(i as isize - 1), grid.wrap(i as isize + 1));
            ((prims[r].v - prims[l].v) / (2.0 * grid.dx)).abs()
        })
        .fold(0.0, f64::max)
}

/// Runs to `t_end` with `dt = t_end/⌈t_end/(cfl·Δx)⌉`, storing every
/// `output_every`-th step (and the initial state).
pub fn evolve(solver: &mut Solver, t_end: f64, cfl: f64, output_every: usize, audit: bool) -> Result<Trajectory> {
    if !(cfl > 0.0 && cfl <= MAX_CFL) {
        return Err(Error::CflViolation(cfl));
    }
    if output_every == 0 || !(t_end >= 0.0) {
        return Err(Error::Config("need output_every >= 1 and t_end >= 0".into()));
    }
    let steps = (t_end / (cfl * solver.grid.dx)).ceil() as usize;
    let dt = if steps == 0 { 0.0 } else { t_end / steps as f64 };
    let mut traj = Trajectory {
        grid: solver.grid,
        dt,
        steps,
        times: Vec::new(),
        frames: Vec::new(),
        max_dvdx: Vec::new(),
        max_step_drift: [0.0; 3],
        audits: Vec::new(),
    };
    let record = |s: &Solver, traj: &mut Trajectory| -> Result<()> {
        let prims = s.primitives()?;
        traj.times.push(s.t);
        traj.max_dvdx.push(max_dvdx(&prims, &s.grid));
        if audit {
            if let Some(c) = &s.coeffs {
                traj.audits.push(audit_frame(&prims, s.eos.as_ref(), c));
            }
        }
        traj.frames.push(prims);
        Ok(())
    };
    record(solver, &mut traj)?;
    for k in 1..=steps {
        let before = solver.totals();
        solver.step(dt)?;
        let after = solver.totals();
        let scale: [f64; 3] = std::array::from_fn(|j| solver.u.iter().map(|u| u[j].abs()).sum::<f64>() * solver.grid.dx);
        for j in 0..3 {
            let d = (after[j] - before[j]).abs() / scale[j].max(f64::MIN_POSITIVE);
            traj.max_step_drift[j] = traj.max_step_drift[j].max(d);
        }
        if k % output_every == 0 {
            record(solver, &mut traj)?;
        }
    }
    Ok(traj)
}

pub fn run(cfg: &RunConfig, audit: bool) -> Result<(Solver, Trajectory)> {
    let mut solver = Solver::from_config(cfg)?;
    let traj = evolve(&mut solver, cfg.t_end, cfg.cfl, cfg.output_every, audit)?;
    Ok((solver, traj))
}

/// Embeds the stored frames as a `(t, x, y, z)` field with five constant
/// copies along `y` and `z`. Needs at least five frames and `n > 0`.
pub fn embed_trajectory(traj: &Trajectory, eos: &dyn EquationOfState, hbar: f64) -> Result<GridField4> {
    let nt = traj.frames.len();
    let nx = traj.grid.n_cells;
    let dt_out = if nt > 1 { traj.times[1] - traj.times[0] } else { traj.dt };
    let dx = traj.grid.dx;
    let geom = GridGeometry::new([nt, nx, 5, 5], [dt_out.max(f64::MIN_POSITIVE), dx, dx, dx])?;
    let thermal = eos.thermal();
    let mut point = Vec::with_capacity(nt * nx);
    for frame in &traj.frames {
        for p in frame {
            if !(p.n > 0.0) {
                return Err(Error::DivisionByZero(format!("baryon density {} in snapshot", p.n)));
            }
            let h = (p.rho + eos.pressure(p.rho, p.n)) / p.n;
            let s = thermal.map_or(0.0, |t| t.entropy(p.rho, p.n));
            let w = lorentz_factor(p.v);
            point.push([(h / hbar).ln(), s, w, w * p.v, 0.0, 0.0]);
        }
    }
    GridField4::from_fn(geom, hbar, |x| {
        let it = (x[0] / geom.spacing[0]).round() as usize;
        let ix = (x[1] / geom.spacing[1]).round() as usize;
        point[it * nx + ix]
    })
}
