//! Acceptance criteria 1–9, one line of output each.
//!
//! Runs without the libtest harness so the summary lines are always shown.
//! Exits nonzero when any criterion fails.

mod support;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use relfluid_core::characteristics::{
    classify_causality, euler_char_det, halton_spatial_directions, sound_cone_roots,
    CausalityStatus,
};
use relfluid_core::formulation::{
    hhat_wave_residual, lichnerowicz_residual, vorticity_evolution_residual, GridField4, GridGeometry,
};
use relfluid_core::io::sidecar_path;
use relfluid_core::kinematics::{acoustical_metric, FluidState};
use relfluid_core::sim1d::{
    bjorken_oracle, con2prim, embed_trajectory, prim2con, run, BjorkenMode, BulkCoefficients, Prim, RunConfig,
};
use relfluid_core::tensor::{Mat4, Metric4, Vec4};
use relfluid_core::thermo::{Conformal, EquationOfState, IdealGas, ThermoState};
use relfluid_core::vacuum1d::{
    distance_functional, homogeneous_piece, linearized_energy, weighted_norm, DiagonalState, ReferenceClosure,
    WeightedNormSpec,
};
use relfluid_core::viscous_causality::{
    bdnk_causal, dnmr_necessary, dnmr_sufficient, dnmr_verdict, BdnkCoefficients, DnmrCoefficients, DnmrState,
    Verdict,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn thermo(rho: f64, p: f64, cs2: f64, dp_ds: f64) -> ThermoState {
    ThermoState {
        rho,
        n: None,
        s: None,
        p,
        h: None,
        hhat: None,
        theta: None,
        cs2,
        dp_ds,
        hbar: 1.0,
        non_hyperbolic: !(cs2 > 0.0 && cs2 <= 1.0),
    }
}

/// `Lᵀ η L` with `L` a random perturbation of the identity.
fn random_metric(r: &mut ChaCha8Rng) -> Metric4 {
    let eta = Mat4::from_diagonal(&Vec4::new(-1.0, 1.0, 1.0, 1.0));
    loop {
        let l = Mat4::identity() + Mat4::from_fn(|_, _| r.gen_range(-0.2..0.2));
        if let Ok(m) = Metric4::new(l.transpose() * eta * l) {
            return m;
        }
    }
}

fn random_spatial(r: &mut ChaCha8Rng, scale: f64) -> [f64; 3] {
    std::array::from_fn(|_| r.gen_range(-scale..scale))
}

fn criterion_1() -> Outcome {
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..100_000 {
        let rho = r.gen_range(0.1..10.0);
        let p = rho * r.gen_range(0.0..1.0);
        let th = thermo(rho, p, r.gen_range(0.01..=1.0), r.gen_range(-1.0..1.0));
        let metric = random_metric(&mut r);
        let Ok(state) = FluidState::new(random_spatial(&mut r, 2.0), th, metric) else { continue };
        let xi = Vec4::from(std::array::from_fn::<f64, 4, _>(|_| r.gen_range(-1.0..1.0)));
        let u_xi: f64 = (0..4).map(|a| state.u[a] * xi[a]).sum();
        let ginv = metric.ginv();
        let g_xi_xi: f64 = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| ginv[(a, b)] * xi[a] * xi[b]).sum();
        let pi_xi_xi = g_xi_xi + u_xi * u_xi;
        let a4 = (p + rho).powi(4) * u_xi.powi(4);
        let oracle = a4 * (u_xi * u_xi - th.cs2 * pi_xi_xi);
        // Relative to the size of the two factored terms, which survives the
        // cancellation on the sound cone.
        let scale = a4 * (u_xi * u_xi + th.cs2 * pi_xi_xi.abs());
        if scale == 0.0 {
            continue;
        }
        let det = euler_char_det(&state, &xi);
        worst = worst.max((det.numeric - oracle).abs() / scale);
    }
    outcome(worst <= 1e-10, format!("max relative deviation {worst:.2e} over 1e5 random states and covectors"))
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let (mut inv_err, mut norm_err, mut det_err) = (0.0f64, 0.0f64, 0.0f64);
    let metric = Metric4::minkowski();
    for _ in 0..10_000 {
        let cs2 = r.gen_range(0.05..=1.0);
        let th = thermo(1.0, cs2, cs2, 0.0);
        let state = FluidState::new(random_spatial(&mut r, 1.0), th, metric).unwrap();
        let g = acoustical_metric(&state.velocity(), cs2, &metric).unwrap();
        inv_err = inv_err.max((g.g * g.ginv - Mat4::identity()).abs().max());
        let u = state.u;
        let uu: f64 = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| g.g[(a, b)] * u[a] * u[b]).sum();
        norm_err = norm_err.max((uu + 1.0).abs());
        let expected = -1.0 / (cs2 * cs2 * cs2);
        det_err = det_err.max((g.g.determinant() - expected).abs() / expected.abs());
    }
    outcome(
        inv_err <= 1e-10 && norm_err <= 1e-10 && det_err <= 1e-10,
        format!("|G G⁻¹ − 1| {inv_err:.2e}, |G(u,u) + 1| {norm_err:.2e}, det rel err {det_err:.2e} over 1e4 states"),
    )
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let metric = Metric4::minkowski();
    let mut acausal_in_range = 0;
    for k in 0..10_000 {
        let cs2 = if k % 10 == 0 { 1.0 } else { r.gen_range(1e-3..=1.0) };
        let state = FluidState::new(random_spatial(&mut r, 3.0), thermo(1.0, 0.3, cs2, 0.0), metric).unwrap();
        let xi = random_spatial(&mut r, 1.0);
        let roots = sound_cone_roots(&state, xi).unwrap();
        if classify_causality(&roots, xi, &metric).status != CausalityStatus::Causal {
            acausal_in_range += 1;
        }
    }
    let dirs = halton_spatial_directions(64);
    let mut witnessed = 0;
    let trials = 200;
    for _ in 0..trials {
        let cs2 = r.gen_range(1.01..4.0);
        let state = FluidState::new(random_spatial(&mut r, 1.0), thermo(1.0, 0.3, cs2, 0.0), metric).unwrap();
        let found = dirs.iter().any(|d| {
            let v = classify_causality(&sound_cone_roots(&state, *d).unwrap(), *d, &metric);
            match (v.status, v.witness) {
                (CausalityStatus::Acausal, Some(w)) => {
                    -w.xi[0] * w.xi[0] + w.xi[1] * w.xi[1] + w.xi[2] * w.xi[2] + w.xi[3] * w.xi[3] < 0.0
                }
                _ => false,
            }
        });
        if found {
            witnessed += 1;
        }
    }
    outcome(
        acausal_in_range == 0 && witnessed == trials,
        format!(
            "{acausal_in_range} non-causal of 1e4 with 0 < c² ≤ 1; timelike witness found for {witnessed}/{trials} states with c² > 1"
        ),
    )
}

fn random_dnmr(r: &mut ChaCha8Rng) -> (DnmrState, DnmrCoefficients) {
    loop {
        let rho = r.gen_range(0.5..5.0);
        let p = rho * r.gen_range(0.05..0.5);
        let e0 = rho + p;
        // Half the draws stay close to equilibrium, where the sufficient set
        // is not empty.
        let spread = if r.gen_bool(0.5) { 0.3 } else { 0.03 };
        let bulk = e0 * r.gen_range(-spread..spread);
        let l1 = e0 * r.gen_range(-spread..spread);
        let l2 = e0 * r.gen_range(-spread..spread);
        let mut lambda = [l1, l2, -l1 - l2];
        lambda.sort_by(f64::total_cmp);
        let state = DnmrState { rho, p, bulk, lambda };
        let tau_p = r.gen_range(0.2..3.0);
        let tau_pi = r.gen_range(0.2..3.0);
        let mut scaled = |tau: f64| e0 * tau * r.gen_range(0.0..spread);
        let c = DnmrCoefficients {
            zeta: scaled(tau_p),
            eta: scaled(tau_pi),
            tau_p,
            tau_pi,
            delta_pp: tau_p * r.gen_range(0.0..1.0),
            lambda_ppi: tau_p * r.gen_range(0.0..1.0),
            delta_pipi: tau_pi * r.gen_range(0.0..1.0),
            tau_pipi: tau_pi * r.gen_range(0.0..1.0),
            lambda_pip: tau_pi * r.gen_range(0.0..1.0),
            delta_ppi: None,
            cs2: r.gen_range(0.05..1.0),
        };
        if dnmr_sufficient(&state, &c, false).is_ok() {
            return (state, c);
        }
    }
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let (mut sufficient, mut counterexamples) = (0usize, 0usize);
    for _ in 0..100_000 {
        let (s, c) = random_dnmr(&mut r);
        if dnmr_sufficient(&s, &c, false).unwrap().pass() {
            sufficient += 1;
            if !dnmr_necessary(&s, &c, false).unwrap().pass() {
                counterexamples += 1;
            }
        }
    }
    let eq = DnmrState { rho: 3.0, p: 1.0, bulk: 0.0, lambda: [0.0; 3] };
    let mut c = DnmrCoefficients::ideal(1.0 / 3.0);
    c.eta = 0.2;
    c.zeta = 0.1;
    let v = dnmr_verdict(&eq, &c, false).unwrap();
    let e = v.sufficient.get("e").unwrap();
    c.zeta = 10.0;
    let v10 = dnmr_verdict(&eq, &c, false).unwrap();
    let f = v10.necessary.worst("f").unwrap();
    let ok = counterexamples == 0
        && sufficient > 1000
        && v.verdict == Verdict::Causal
        && (e + 2.3).abs() <= 1e-12
        && v10.verdict == Verdict::Acausal
        && (f + 7.6).abs() <= 1e-10;
    outcome(
        ok,
        format!(
            "{counterexamples} counterexamples among {sufficient} sufficient-passing states of 1e5; equilibrium {:?} with (e) {e:.15}; zeta=10 {:?} with (f) {f:.15}",
            v.verdict, v10.verdict
        ),
    )
}

/// `LHS − RHS` of (d) exactly as displayed, without cancellation.
fn bdnk_d_displayed(c: &BdnkCoefficients) -> f64 {
    let a = c.p_plus_rho;
    let visc = c.zeta + 4.0 * c.eta / 3.0;
    let lhs = a * c.tau_r * c.tau_q + c.kappa_kappa * c.tau_p;
    let rhs = c.tau_r * (a * c.cs2 * c.tau_q + visc + c.kappa_kappa)
        + a * c.tau_r * c.tau_q * (1.0 - c.cs2)
        + c.beta_rho * visc;
    lhs - rhs
}

fn criterion_5() -> Outcome {
    let causal = BdnkCoefficients {
        tau_r: 1.0,
        tau_p: 3.0,
        tau_q: 2.0,
        zeta: 0.1,
        eta: 0.2,
        kappa_kappa: 1.0,
        beta_rho: 1.0,
        cs2: 1.0 / 3.0,
        p_plus_rho: 4.0,
    };
    let acausal = BdnkCoefficients { kappa_kappa: 0.0, tau_r: 1.0, tau_p: 1.0, tau_q: 1.0, ..causal };
    let zero = BdnkCoefficients { eta: 0.0, zeta: 0.0, kappa_kappa: 0.0, ..causal };
    let rc = bdnk_causal(&causal, false).unwrap();
    let ra = bdnk_causal(&acausal, false).unwrap();
    let d0 = bdnk_causal(&zero, false).unwrap();
    let d0_strict = bdnk_causal(&zero, true).unwrap();
    let (dc, da) = (rc.get("d").unwrap(), ra.get("d").unwrap());
    let ok = d0.get("d") == Some(0.0)
        && d0.pass()
        && !d0_strict.pass()
        && rc.pass()
        && (dc - bdnk_d_displayed(&causal)).abs() <= 1e-12
        && !ra.pass()
        && (da - bdnk_d_displayed(&acausal)).abs() <= 1e-12;
    outcome(
        ok,
        format!(
            "zero dissipation (d) = {:?} (non-strict {}, strict {}); causal fixture (d) {dc:.6}; acausal fixture (d) {da:.6}",
            d0.get("d"),
            d0.pass(),
            d0_strict.pass()
        ),
    )
}

fn bump_config(n: usize, t_end: f64) -> RunConfig {
    RunConfig::from_json(&serde_json::json!({
        "grid": {"n_cells": n},
        "eos": {"kind": "ideal-gas", "gamma": 1.4},
        "ic": {"kind": "bump", "params": {"amp": 0.2, "width": 0.5, "v_amp": 0.1, "s_amp": 0.2}},
        "t_end": t_end, "output_every": 1, "cfl": 0.2,
        "scheme": {"reconstruction": "linear", "integrator": "ssp-rk3"}
    }))
    .unwrap()
}

/// Smallest successive pairwise order `log₂(e_h / e_{h/2})`.
fn min_order(errors: &[f64]) -> f64 {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).fold(f64::INFINITY, f64::min)
}

fn criterion_6() -> Outcome {
    let eos = IdealGas::new(1.4).unwrap();
    let closure = eos.thermal();
    let mut norms = [Vec::new(), Vec::new(), Vec::new()];
    for n in [64usize, 128, 256] {
        let (_, traj) = run(&bump_config(n, 0.2), false).unwrap();
        let field = embed_trajectory(&traj, &eos, 1.0).unwrap();
        norms[0].push(lichnerowicz_residual(&field, closure).unwrap().max_norm);
        norms[1].push(vorticity_evolution_residual(&field, closure).unwrap().max_norm);
        norms[2].push(hhat_wave_residual(&field, closure).unwrap().max_norm);
    }
    let orders: Vec<f64> = norms.iter().map(|e| min_order(e)).collect();
    let geom = GridGeometry::new([9, 8, 8, 8], [0.01, 0.1, 0.1, 0.1]).unwrap();
    let w = 1.25f64.sqrt();
    let constant = GridField4::from_fn(geom, 1.0, |_| [0.7, 0.3, w, 0.3, 0.4, 0.0]).unwrap();
    let constant_norms = [
        lichnerowicz_residual(&constant, closure).unwrap().max_norm,
        vorticity_evolution_residual(&constant, closure).unwrap().max_norm,
        hhat_wave_residual(&constant, closure).unwrap().max_norm,
    ];
    let ok = orders.iter().all(|&o| o >= 1.9) && constant_norms.iter().all(|&x| x == 0.0);
    outcome(
        ok,
        format!(
            "orders lichnerowicz {:.3}, vorticity {:.3}, hhat-wave {:.3}; constant-state residuals {constant_norms:?}",
            orders[0], orders[1], orders[2]
        ),
    )
}

fn criterion_7() -> Outcome {
    // Conservation on a periodic run with bulk relaxation switched on.
    let mut cfg = bump_config(128, 0.2);
    cfg.coeffs = Some(BulkCoefficients { zeta: 0.05, tau_p: 0.5, delta_pp: 0.0 });
    let (_, traj) = run(&cfg, false).unwrap();
    let drift = traj.max_step_drift[..3].iter().copied().fold(0.0, f64::max);

    let mut r = rng(7);
    let mut roundtrip = 0.0f64;
    for k in 0..10_000 {
        let eos = IdealGas::new(if k % 2 == 0 { 1.4 } else { 5.0 / 3.0 }).unwrap();
        let n = r.gen_range(0.1..5.0);
        let rho = n * r.gen_range(1.01..5.0);
        let bulk = if k % 3 == 0 { 0.0 } else { eos.pressure(rho, n) * r.gen_range(-0.3..0.3) };
        let prim = Prim { rho, n, v: r.gen_range(-0.95..0.95), bulk };
        let back = con2prim(&prim2con(&prim, &eos).unwrap(), &eos, None, k).unwrap();
        let rel = |a: f64, b: f64, s: f64| (a - b).abs() / s;
        roundtrip = roundtrip
            .max(rel(back.rho, prim.rho, prim.rho))
            .max(rel(back.n, prim.n, prim.n))
            .max(rel(back.v, prim.v, 1.0))
            .max(rel(back.bulk, prim.bulk, prim.rho));
    }

    let mut finals: Vec<Vec<f64>> = Vec::new();
    for n in [64usize, 128, 256, 512] {
        let (solver, _) = run(&bump_config(n, 0.2), false).unwrap();
        finals.push(solver.u.iter().map(|u| u[0]).collect());
    }
    let errors: Vec<f64> = finals
        .windows(2)
        .map(|w| {
            let (coarse, fine) = (&w[0], &w[1]);
            coarse.iter().enumerate().map(|(i, c)| (c - 0.5 * (fine[2 * i] + fine[2 * i + 1])).abs()).sum::<f64>()
                / coarse.len() as f64
        })
        .collect();
    let order = min_order(&errors);

    let coeffs = BulkCoefficients { zeta: 0.0, tau_p: 0.5, delta_pp: 0.0 };
    let (rho0, tau0) = (7.0, 0.6);
    let bjorken = [0.8, 1.5, 4.0, 20.0]
        .iter()
        .map(|&tau| {
            let p = bjorken_oracle(rho0, 0.0, tau0, tau, &Conformal, &coeffs, BjorkenMode::BulkOde).unwrap();
            let exact = rho0 * (tau0 / tau).powf(4.0 / 3.0);
            (p.rho - exact).abs() / exact
        })
        .fold(0.0, f64::max);

    let ok = drift <= 1e-12 && roundtrip <= 1e-9 && order >= 1.8 && bjorken <= 1e-9;
    outcome(
        ok,
        format!(
            "per-step drift {drift:.2e}; con2prim roundtrip {roundtrip:.2e} over 1e4; self-convergence order {order:.3}; Bjorken rel err {bjorken:.2e}"
        ),
    )
}

fn unit_grid(n: usize, len: f64) -> Vec<f64> {
    (0..n).map(|i| len * i as f64 / (n - 1) as f64).collect()
}

fn diag_state(kappa: f64, x: &[f64], r: impl Fn(f64) -> f64, v: impl Fn(f64) -> [f64; 3]) -> DiagonalState {
    DiagonalState::new(kappa, x.to_vec(), x.iter().map(|&x| r(x)).collect(), x.iter().map(|&x| v(x)).collect()).unwrap()
}

fn criterion_8() -> Outcome {
    let x = unit_grid(10_000, 1.0);
    let ones = vec![1.0; x.len()];
    let q = weighted_norm(&ones, &x, x[1], WeightedNormSpec::new(0, 0.5).unwrap()).unwrap();
    let quad_err = (q.value - 0.5f64.sqrt()).abs();

    // Distance functional on fixtures, against a directly written integrand.
    let kappa = 2.0;
    let xg = unit_grid(401, 1.0);
    let a = diag_state(kappa, &xg, |x| x * (1.2 - x), |x| [0.1 * x, 0.0, -0.2]);
    let fixtures = [
        diag_state(kappa, &xg, |x| x * (1.2 - x) * (1.0 + 0.1 * x), |x| [0.1 * x, 0.0, -0.2]),
        diag_state(kappa, &xg, |x| x * (1.2 - x), |x| [0.1 * x + 0.05, 0.0, -0.2]),
        diag_state(kappa, &xg, |x| 0.5 * x * (1.2 - x), |x| [x, 0.3, 0.0]),
    ];
    let self_zero = distance_functional(&a, &a).unwrap().value == 0.0;
    let mut dist_ok = self_zero;
    let mut dist_err = 0.0f64;
    for b in &fixtures {
        let d = distance_functional(&a, b).unwrap().value;
        let e = (1.0 - kappa) / kappa;
        let weight: Vec<f64> = (0..xg.len()).map(|i| a.r[i] + b.r[i]).collect();
        let integrand: Vec<f64> = (0..xg.len())
            .map(|i| {
                let dv: f64 = (0..3).map(|c| (a.v[i][c] - b.v[i][c]).powi(2)).sum();
                (a.r[i] - b.r[i]).powi(2) + weight[i] * dv
            })
            .collect();
        // The weight exponent is negative, so segments touching a zero of
        // the weight are left out.
        let oracle: f64 = (0..xg.len() - 1)
            .filter(|&j| weight[j] > 0.0 && weight[j + 1] > 0.0)
            .map(|j| 0.5 * xg[1] * (weight[j].powf(e) * integrand[j] + weight[j + 1].powf(e) * integrand[j + 1]))
            .sum();
        dist_err = dist_err.max((d - oracle).abs() / oracle);
        dist_ok &= d > 0.0 && distance_functional(b, &a).unwrap().value == d;
    }
    dist_ok &= dist_err <= 1e-12;

    // Energy bracket on random linearized pairs over random backgrounds.
    let mut r = rng(8);
    let mut bracket_ok = 0;
    for _ in 0..100 {
        let (c0, c1) = (r.gen_range(0.5..2.0), r.gen_range(-0.3..0.3));
        let vv: [f64; 3] = random_spatial(&mut r, 0.8);
        let bg = diag_state(kappa, &xg, |x| c0 * x * (1.0 + c1 * x), |x| [vv[0] * x, vv[1], vv[2] * (1.0 - x)]);
        let s: Vec<f64> = xg.iter().map(|_| r.gen_range(-1.0..1.0)).collect();
        let w: Vec<[f64; 3]> = xg.iter().map(|_| random_spatial(&mut r, 1.0)).collect();
        let en = linearized_energy(&s, &w, &bg, &ReferenceClosure).unwrap();
        let slack = 1e-12 * en.h0_sq;
        if en.c1 * en.h0_sq <= en.value + slack && en.value <= en.c2 * en.h0_sq + slack {
            bracket_ok += 1;
        }
    }

    // Critical homogeneous piece at κ = 1 (2N₀ = 3 in one space dimension).
    let (k, kappa1) = (3usize, 1.0);
    let sigma_s = (1.0 - kappa1) / (2.0 * kappa1) + k as f64 / 2.0;
    let sigma_v = sigma_s + 0.5;
    let r0 = |x: f64| (std::f64::consts::PI * x).sin();
    let v0 = |x: f64| 0.3 * (std::f64::consts::PI * x).cos() + 0.1 * x;
    let piece = |lambda: f64, n: usize| {
        let l2 = lambda * lambda;
        let xs = unit_grid(n, 1.0 / l2);
        let rl: Vec<f64> = xs.iter().map(|&x| r0(l2 * x) / l2).collect();
        let vl: Vec<f64> = xs.iter().map(|&x| v0(l2 * x) / lambda).collect();
        let dx = xs[1];
        homogeneous_piece(&rl, &rl, dx, k, sigma_s).unwrap().value
            + homogeneous_piece(&vl, &rl, dx, k, sigma_v).unwrap().value
    };
    let base = piece(1.0, 4001);
    let scaling = [(2.0, 5001), (4.0, 6001)]
        .iter()
        .map(|&(l, n)| (piece(l, n) - base).abs() / base)
        .fold(0.0, f64::max);

    let ok = quad_err <= 1e-6 && dist_ok && bracket_ok == 100 && scaling <= 1e-4;
    outcome(
        ok,
        format!(
            "∫x dx norm err {quad_err:.2e}; distance zero-on-self {self_zero}, fixture rel err {dist_err:.2e}; energy bracket {bracket_ok}/100; scaling rel change {scaling:.2e}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let fx = support::Fixtures::new();
    let mut mismatched = Vec::new();
    let invocations = fx.invocations();
    for (tag, args) in &invocations {
        let first = support::sha256(&fx.run_to(&format!("{tag}-1"), args));
        let second = support::sha256(&fx.run_to(&format!("{tag}-2"), args));
        if first != second {
            mismatched.push(*tag);
        }
    }
    // The binary snapshot written by evolve1d is covered too.
    let snap = |name: &str| {
        let path = fx.path(name);
        let args = support::run(&["evolve1d", "--config", &fx.arg("run.json"), "--snapshot", &path.display().to_string()]);
        assert!(args.status.success());
        (support::sha256(&path), support::read_json(&sidecar_path(&path)))
    };
    let (a, sa) = snap("s1.bin");
    let (b, sb) = snap("s2.bin");
    if a != b || sa != sb || sa == Value::Null {
        mismatched.push("snapshot");
    }
    outcome(
        mismatched.is_empty(),
        format!("{} invocations plus snapshot hashed twice; mismatches {mismatched:?}", invocations.len()),
    )
}

/// Name, check and optional wall-clock budget.
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: [Criterion; 9] = [
        ("characteristic determinant closed form", criterion_1, Some(Duration::from_secs(10))),
        ("acoustical metric identities", criterion_2, None),
        ("causal regime and c² > 1 witnesses", criterion_3, None),
        ("DNMR implication and fixtures", criterion_4, Some(Duration::from_secs(30))),
        ("BDNK boundary behaviour", criterion_5, None),
        ("formulation residual orders", criterion_6, Some(Duration::from_secs(120))),
        ("solver sanity", criterion_7, None),
        ("vacuum diagnostics", criterion_8, None),
        ("CLI determinism", criterion_9, None),
    ];
    let mut failures = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut o = f();
        let elapsed = start.elapsed();
        if let Some(b) = budget {
            if elapsed > *b {
                o.pass = false;
                o.detail += &format!("; exceeded the {} s budget", b.as_secs());
            }
        }
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {} [{tag}] {name}: {} ({:.2} s)", i + 1, o.detail, elapsed.as_secs_f64());
        if !o.pass {
            failures += 1;
        }
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
