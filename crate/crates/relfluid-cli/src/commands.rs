use std::path::{Path, PathBuf};

use clap::Args;
use serde_json::{json, Map, Value};

use crate::failure::{open, require_file, Failure};
use crate::{OutArg, Report};
use relfluid_core::characteristics::{
    classify_causality, classify_directions, det_a0, euler_char_det, halton_spatial_directions, sound_cone_roots,
    LIGHTCONE_TOL, ROOT_MERGE_TOL,
};
use relfluid_core::formulation::check_registry;
use relfluid_core::io::{read_field, read_json, write_field};
use relfluid_core::kinematics::FluidState;
use relfluid_core::sim1d::{bjorken_oracle, embed_trajectory, run, BjorkenMode, BulkCoefficients, RunConfig, MAX_CFL};
use relfluid_core::tensor::{Metric4, Vec4};
use relfluid_core::thermo::{derived_scalars, eos_registry, Conformal, EquationOfState, Secondary};
use relfluid_core::vacuum1d::{
    closure_registry, control_norms, distance_functional, linearized_energy, read_pair, read_profile,
    script_h_exponents, DiagonalState, NormalField, PAIRWISE_CAP,
};
use relfluid_core::viscous_causality::{batch_audit, read_cells, theory_registry, AuditOptions, TOL_CONSTRAINT};

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value, Failure> {
    serde_json::to_value(x).map_err(|e| Failure::config(format!("serialisation: {e}")))
}

fn body(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn load_json(path: &Path) -> Result<Value, Failure> {
    require_file(path)?;
    Ok(read_json(path)?)
}

fn field_f64(obj: &Value, key: &str) -> Result<Option<f64>, Failure> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => v.as_f64().map(Some).ok_or_else(|| Failure::config(format!("'{key}' must be a number"))),
    }
}

#[derive(Args, Debug)]
pub struct CharsArgs {
    /// JSON state: {"eos": {"kind": ...}, "rho", "n"?, "s"?, "u"?: [u1,u2,u3], "hbar"?}.
    #[arg(long)]
    state: PathBuf,
    /// Covector components ξ₀,ξ₁,ξ₂,ξ₃.
    #[arg(long, default_value = "0,1,0,0")]
    xi: String,
    /// Also classify over this many low-discrepancy spatial directions.
    #[arg(long)]
    all_dirs: Option<usize>,
    #[command(flatten)]
    pub out: OutArg,
}

fn parse_xi(raw: &str) -> Result<[f64; 4], Failure> {
    let parts: Vec<f64> = raw
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::config(format!("--xi must be four comma-separated numbers, got '{raw}'")))?;
    let xi: [f64; 4] = parts
        .try_into()
        .map_err(|_| Failure::config(format!("--xi must have four components, got '{raw}'")))?;
    if xi[1..].iter().all(|&c| c == 0.0) {
        return Err(Failure::config("the spatial part of --xi must be nonzero"));
    }
    Ok(xi)
}

pub fn chars(a: &CharsArgs) -> Result<Report, Failure> {
    let spec = load_json(&a.state)?;
    let eos_spec = spec.get("eos").ok_or_else(|| Failure::config("state needs an 'eos' object"))?;
    let eos = eos_registry().build_tagged(eos_spec)?;
    let rho = field_f64(&spec, "rho")?.ok_or_else(|| Failure::config("state needs 'rho'"))?;
    let secondary = match (field_f64(&spec, "n")?, field_f64(&spec, "s")?) {
        (Some(_), Some(_)) => return Err(Failure::config("give at most one of 'n' and 's'")),
        (Some(n), None) => Secondary::Density(n),
        (None, Some(s)) => Secondary::Entropy(s),
        (None, None) => Secondary::None,
    };
    let hbar = field_f64(&spec, "hbar")?.unwrap_or(1.0);
    let u: [f64; 3] = match spec.get("u") {
        None | Some(Value::Null) => [0.0; 3],
        Some(v) => serde_json::from_value(v.clone()).map_err(|_| Failure::config("'u' must be [u1, u2, u3]"))?,
    };
    let thermo = derived_scalars(eos.as_ref(), rho, secondary, hbar)?;
    let metric = Metric4::minkowski();
    let state = FluidState::new(u, thermo, metric)?;
    let xi = parse_xi(&a.xi)?;
    let spatial = [xi[1], xi[2], xi[3]];
    let roots = sound_cone_roots(&state, spatial)?;
    let verdict = classify_causality(&roots, spatial, &metric);
    let det = euler_char_det(&state, &Vec4::from(xi));
    let mut out = body(vec![
        (
            "state",
            json!({
                "eos": eos.to_json(),
                "rho": thermo.rho,
                "p": thermo.p,
                "cs2": thermo.cs2,
                "u": [state.u[0], state.u[1], state.u[2], state.u[3]],
            }),
        ),
        ("xi", json!(xi)),
        ("roots", to_value(&roots)?),
        ("verdict", to_value(&verdict)?),
        ("det_checks", json!({"characteristic": to_value(&det)?, "a0": to_value(&det_a0(&state)?)?})),
    ]);
    if let Some(n) = a.all_dirs {
        let dirs = halton_spatial_directions(n);
        let v = classify_directions(&state, &dirs)?;
        out.insert("all_dirs".into(), json!({"count": dirs.len(), "verdict": to_value(&v)?}));
    }
    Ok(Report {
        strict: false,
        tolerances: json!({"root_merge": ROOT_MERGE_TOL, "lightcone": LIGHTCONE_TOL}),
        body: out,
    })
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    /// Cell table (CSV with id, rho, p, P_bulk, pi_00..pi_33, u1, u2, u3).
    #[arg(long)]
    cells: PathBuf,
    /// Coefficient object (JSON); per-cell columns with the same names override it.
    #[arg(long)]
    coeffs: PathBuf,
    /// Evaluate every inequality as strict.
    #[arg(long)]
    strict: bool,
    /// Project the shear tensor onto the constraint set before the audit.
    #[arg(long)]
    project_constraints: bool,
    /// Tolerance on the shear orthogonality and trace constraints.
    #[arg(long, default_value_t = TOL_CONSTRAINT)]
    tol_constraint: f64,
    #[command(flatten)]
    pub out: OutArg,
}

pub fn audit(theory: &str, a: &AuditArgs) -> Result<Report, Failure> {
    let coeffs = load_json(&a.coeffs)?;
    let cells = read_cells(open(&a.cells)?)?;
    let theory = theory_registry().build(theory, &coeffs)?;
    let opts = AuditOptions {
        strict: a.strict,
        tol_constraint: a.tol_constraint,
        project_constraints: a.project_constraints,
        ..AuditOptions::default()
    };
    let report = batch_audit(&cells, theory.as_ref(), &opts);
    let mut out = match report.to_json() {
        Value::Object(m) => m,
        _ => unreachable!("reports serialise to objects"),
    };
    out.insert("theory".into(), json!(report.theory));
    Ok(Report { strict: a.strict, tolerances: json!({"constraint": a.tol_constraint}), body: out })
}

#[derive(Args, Debug)]
pub struct ResidualArgs {
    /// Binary snapshot; its JSON sidecar sits next to it.
    #[arg(long)]
    field: PathBuf,
    /// lichnerowicz, vort-evo, hhat-wave or all.
    #[arg(long, default_value = "all")]
    check: String,
    /// Equation of state (JSON with "kind"); defaults to the one in the sidecar.
    #[arg(long)]
    eos: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArg,
}

pub fn residuals(a: &ResidualArgs) -> Result<Report, Failure> {
    require_file(&a.field)?;
    let (field, side) = read_field(&a.field)?;
    let eos_spec = match &a.eos {
        Some(p) => Some(load_json(p)?),
        None => side.eos.clone(),
    };
    let eos = eos_spec.as_ref().map(|s| eos_registry().build_tagged(s)).transpose()?;
    let closure = eos.as_ref().and_then(|e| e.thermal());
    let registry = check_registry();
    let names: Vec<&str> = if a.check == "all" { registry.names() } else { vec![a.check.as_str()] };
    let mut reports = Vec::new();
    for name in names {
        let check = registry.build(name, &Value::Null)?;
        reports.push(to_value(&check.evaluate(&field, closure)?)?);
    }
    let out = body(vec![
        ("field", json!({"dims": side.dims, "spacing": side.spacing, "hbar": side.hbar})),
        ("eos", eos.map_or(Value::Null, |e| e.to_json())),
        ("checks", Value::Array(reports)),
    ]);
    Ok(Report { strict: false, tolerances: json!({}), body: out })
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    /// Run configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Audit every stored frame with this theory (only "dnmr").
    #[arg(long)]
    audit: Option<String>,
    /// Also write the stored frames as a 4-D field snapshot (binary plus JSON sidecar).
    #[arg(long)]
    snapshot: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArg,
}

pub fn evolve1d(a: &EvolveArgs) -> Result<Report, Failure> {
    let cfg = RunConfig::from_json(&load_json(&a.config)?)?;
    let audit = match a.audit.as_deref() {
        None => false,
        Some("dnmr") if cfg.coeffs.is_some() => true,
        Some("dnmr") => return Err(Failure::config("--audit dnmr needs bulk coefficients in the config")),
        Some(other) => return Err(Failure::config(format!("unknown audit '{other}'; only 'dnmr' is available"))),
    };
    let (solver, traj) = run(&cfg, audit)?;
    if let Some(path) = &a.snapshot {
        let field = embed_trajectory(&traj, solver.eos.as_ref(), cfg.hbar)?;
        write_field(path, &field, Some(solver.eos.to_json()))?;
    }
    let prims = solver.primitives()?;
    let x: Vec<f64> = (0..solver.grid.n_cells).map(|i| solver.grid.center(i)).collect();
    let out = body(vec![
        ("trajectory", to_value(&traj)?),
        (
            "final",
            json!({
                "t": solver.t,
                "x": x,
                "rho": prims.iter().map(|p| p.rho).collect::<Vec<_>>(),
                "n": prims.iter().map(|p| p.n).collect::<Vec<_>>(),
                "v": prims.iter().map(|p| p.v).collect::<Vec<_>>(),
                "P_bulk": prims.iter().map(|p| p.bulk).collect::<Vec<_>>(),
                "totals": solver.totals(),
            }),
        ),
    ]);
    Ok(Report { strict: false, tolerances: json!({"cfl": cfg.cfl, "max_cfl": MAX_CFL}), body: out })
}

#[derive(Args, Debug)]
pub struct NormsArgs {
    /// Profile CSV with columns x, r, v1 and optional v2, v3.
    #[arg(long)]
    field: PathBuf,
    #[arg(long)]
    kappa: f64,
    /// "H,<2N>", "energy", "distance" or "control".
    #[arg(long)]
    norm: String,
    /// Second profile for "distance".
    #[arg(long)]
    other: Option<PathBuf>,
    /// Linearized pair CSV (x, s, w1, w2?, w3?) for "energy".
    #[arg(long)]
    pair: Option<PathBuf>,
    /// Closure for "energy": reference or unit.
    #[arg(long, default_value = "reference")]
    closure: String,
    /// Grid index where the auxiliary field is frozen to ∇r for "control";
    /// defaults to the first vacuum node.
    #[arg(long)]
    normal_index: Option<usize>,
    #[command(flatten)]
    pub out: OutArg,
}

fn profile(path: &Path, kappa: f64) -> Result<DiagonalState, Failure> {
    Ok(read_profile(open(path)?, kappa)?)
}

pub fn norms(a: &NormsArgs) -> Result<Report, Failure> {
    let state = profile(&a.field, a.kappa)?;
    let (kind, result) = match a.norm.split(',').map(str::trim).collect::<Vec<_>>().as_slice() {
        ["H", n] => {
            let two_n: usize =
                n.parse().map_err(|_| Failure::config(format!("'{n}' is not a derivative count")))?;
            let (ss, sv) = script_h_exponents(a.kappa, two_n);
            let q = state.script_h_norm(two_n)?;
            ("H", json!({"two_n": two_n, "sigma_scalar": ss, "sigma_vector": sv, "quadrature": to_value(&q)?}))
        }
        ["energy"] => {
            let path = a.pair.as_ref().ok_or_else(|| Failure::config("--norm energy needs --pair"))?;
            let pair = read_pair(open(path)?)?;
            if pair.x.len() != state.len() || pair.x.iter().zip(&state.x).any(|(p, q)| (p - q).abs() > 1e-12 * (1.0 + q.abs())) {
                return Err(Failure::config("the pair must be sampled on the profile grid"));
            }
            let closure = closure_registry().build(&a.closure, &Value::Null)?;
            let e = linearized_energy(&pair.s, &pair.w, &state, closure.as_ref())?;
            ("energy", json!({"closure": closure.name(), "energy": to_value(&e)?}))
        }
        ["distance"] => {
            let path = a.other.as_ref().ok_or_else(|| Failure::config("--norm distance needs --other"))?;
            let other = profile(path, a.kappa)?;
            ("distance", to_value(&distance_functional(&state, &other)?)?)
        }
        ["control"] => {
            let index = match a.normal_index {
                Some(i) => i,
                None => state.r.iter().position(|&r| r == 0.0).unwrap_or(0),
            };
            let c = control_norms(&state, &NormalField::FromBoundary(index))?;
            ("control", json!({"normal_index": index, "norms": to_value(&c)?}))
        }
        _ => return Err(Failure::config(format!("unknown --norm '{}'", a.norm))),
    };
    let out = body(vec![
        ("kappa", json!(a.kappa)),
        ("points", json!(state.len())),
        ("norm", json!(kind)),
        ("result", result),
    ]);
    Ok(Report { strict: false, tolerances: json!({"pairwise_cap": PAIRWISE_CAP}), body: out })
}

#[derive(Args, Debug)]
pub struct BjorkenArgs {
    /// Equation of state (JSON with "kind"); conformal when omitted.
    #[arg(long)]
    eos: Option<PathBuf>,
    #[arg(long)]
    rho0: f64,
    #[arg(long, default_value_t = 1.0)]
    tau0: f64,
    /// Final proper time.
    #[arg(long)]
    tau: f64,
    #[arg(long, default_value_t = 0.0)]
    bulk0: f64,
    #[arg(long, default_value_t = 0.0)]
    zeta: f64,
    #[arg(long = "tau-P", default_value_t = 1.0)]
    tau_p: f64,
    #[arg(long = "delta-PP", default_value_t = 0.0)]
    delta_pp: f64,
    /// ideal-conformal or bulk-ode.
    #[arg(long, default_value = "bulk-ode")]
    mode: String,
    /// Number of equal proper-time intervals reported.
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[command(flatten)]
    pub out: OutArg,
}

pub fn bjorken(a: &BjorkenArgs) -> Result<Report, Failure> {
    let eos: Box<dyn EquationOfState> = match &a.eos {
        Some(p) => eos_registry().build_tagged(&load_json(p)?)?,
        None => Box::new(Conformal),
    };
    let mode: BjorkenMode = serde_json::from_value(json!(a.mode))
        .map_err(|_| Failure::config(format!("unknown mode '{}'; use ideal-conformal or bulk-ode", a.mode)))?;
    if a.samples == 0 {
        return Err(Failure::config("--samples must be at least 1"));
    }
    let coeffs = BulkCoefficients { zeta: a.zeta, tau_p: a.tau_p, delta_pp: a.delta_pp };
    let mut points = Vec::with_capacity(a.samples + 1);
    for k in 0..=a.samples {
        let tau = a.tau0 + (a.tau - a.tau0) * k as f64 / a.samples as f64;
        let p = bjorken_oracle(a.rho0, a.bulk0, a.tau0, tau, eos.as_ref(), &coeffs, mode)?;
        let mut v = to_value(&p)?;
        v["rho_ideal_conformal"] = json!(a.rho0 * (a.tau0 / tau).powf(4.0 / 3.0));
        points.push(v);
    }
    let out = body(vec![
        ("eos", eos.to_json()),
        ("mode", json!(a.mode)),
        ("coeffs", to_value(&coeffs)?),
        ("initial", json!({"rho0": a.rho0, "bulk0": a.bulk0, "tau0": a.tau0})),
        ("points", Value::Array(points)),
    ]);
    Ok(Report { strict: false, tolerances: json!({"ode_rel_tol": 1e-10}), body: out })
}
