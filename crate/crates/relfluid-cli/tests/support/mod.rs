//! Fixture files and a runner for the `relfluid` binary.

#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

pub const CELLS_HEADER: &str =
    "id,rho,p,P_bulk,pi_00,pi_01,pi_02,pi_03,pi_11,pi_12,pi_13,pi_22,pi_23,pi_33,u1,u2,u3,zeta";

/// Equilibrium (causal), large bulk viscosity (acausal) and a mildly
/// sheared cell with ζ = 1 that fails sufficient (e) only.
pub const THREE_CELLS: &str = "\
id,rho,p,P_bulk,pi_00,pi_01,pi_02,pi_03,pi_11,pi_12,pi_13,pi_22,pi_23,pi_33,u1,u2,u3,zeta
eq,3,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,
bulky,3,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,10
sheared,3,1,0,0,0,0,0,-1,0,0,-1,0,2,0,0,0,1
";

pub const DNMR_COEFFS: &str = r#"{"zeta": 0.1, "eta": 0.2, "tau_P": 1.0, "tau_pi": 1.0, "cs2": 0.3333333333333333}"#;

pub const BDNK_COEFFS: &str = r#"{"tau_R": 1.0, "tau_P": 3.0, "tau_Q": 2.0, "zeta": 0.1, "eta": 0.2,
"kappa_kappa": 1.0, "beta_rho": 1.0, "cs2": 0.3333333333333333}"#;

pub const STATE: &str = r#"{"eos": {"kind": "ideal-gas", "gamma": 1.4}, "rho": 2.0, "n": 1.0, "u": [0.3, -0.1, 0.2]}"#;

pub const RUN_CONFIG: &str = r#"{
  "grid": {"n_cells": 32},
  "eos": {"kind": "ideal-gas", "gamma": 1.4},
  "coeffs": {"zeta": 0.05, "tau_P": 0.5},
  "ic": {"kind": "bump", "params": {"amp": 0.2, "v_amp": 0.1, "s_amp": 0.2}},
  "t_end": 0.1,
  "output_every": 2,
  "cfl": 0.2
}"#;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_relfluid"))
}

/// Runs the binary with `RELFLUID_THREADS` unset.
pub fn run(args: &[&str]) -> Output {
    bin().env_remove("RELFLUID_THREADS").args(args).output().expect("binary runs")
}

pub fn sha256(path: &Path) -> Vec<u8> {
    Sha256::digest(fs::read(path).expect("readable")).to_vec()
}

pub fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&fs::read(path).expect("readable")).expect("valid JSON")
}

/// Vacuum profile on `[0, 1]` with `r` vanishing at `x = 0`.
pub fn profile_csv(n: usize, amp: f64) -> String {
    let mut s = String::from("x,r,v1,v2,v3\n");
    for i in 0..n {
        let x = i as f64 / (n - 1) as f64;
        let r = x * (1.5 - x) * (1.0 + amp * (3.0 * x).sin());
        s += &format!("{x},{r},{},{},{}\n", 0.2 * (2.0 * x).cos(), amp * x, -0.1 * x * x);
    }
    s
}

pub fn pair_csv(n: usize) -> String {
    let mut s = String::from("x,s,w1,w2,w3\n");
    for i in 0..n {
        let x = i as f64 / (n - 1) as f64;
        s += &format!("{x},{},{},{},{}\n", (4.0 * x).sin(), x.cos(), 0.5 * x, -0.25);
    }
    s
}

/// A temporary directory holding one copy of every input file.
pub struct Fixtures {
    pub dir: TempDir,
}

impl Fixtures {
    pub fn new() -> Self {
        let dir = tempfile::tempdir().expect("tempdir");
        let files = [
            ("cells.csv", THREE_CELLS.to_string()),
            ("dnmr.json", DNMR_COEFFS.to_string()),
            ("bdnk.json", BDNK_COEFFS.to_string()),
            ("state.json", STATE.to_string()),
            ("run.json", RUN_CONFIG.to_string()),
            ("eos.json", r#"{"kind": "ideal-gas", "gamma": 1.4}"#.to_string()),
            ("profile.csv", profile_csv(65, 0.1)),
            ("other.csv", profile_csv(65, 0.2)),
            ("pair.csv", pair_csv(65)),
        ];
        for (name, body) in files {
            fs::write(dir.path().join(name), body).expect("fixture written");
        }
        Fixtures { dir }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    pub fn arg(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }

    /// Writes the evolve snapshot used by `residuals`.
    pub fn snapshot(&self) -> PathBuf {
        let bin = self.path("field.bin");
        if !bin.exists() {
            let out = run(&["evolve1d", "--config", &self.arg("run.json"), "--snapshot", &bin.display().to_string()]);
            assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        }
        bin
    }

    /// One invocation per subcommand, each writing to `--out <tag>.json`.
    pub fn invocations(&self) -> Vec<(&'static str, Vec<String>)> {
        let field = self.snapshot().display().to_string();
        let f = |s: &str| self.arg(s);
        let v = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        vec![
            ("chars", v(&["chars", "--state", &f("state.json"), "--xi", "0.2,1,0.5,-0.3", "--all-dirs", "64"])),
            ("check-dnmr", v(&["check-dnmr", "--cells", &f("cells.csv"), "--coeffs", &f("dnmr.json")])),
            ("check-bdnk", v(&["check-bdnk", "--cells", &f("cells.csv"), "--coeffs", &f("bdnk.json"), "--strict"])),
            ("residuals", v(&["residuals", "--field", &field])),
            ("evolve1d", v(&["evolve1d", "--config", &f("run.json"), "--audit", "dnmr"])),
            ("norms-h", v(&["norms", "--field", &f("profile.csv"), "--kappa", "2", "--norm", "H,2"])),
            (
                "norms-energy",
                v(&["norms", "--field", &f("profile.csv"), "--kappa", "2", "--norm", "energy", "--pair", &f("pair.csv")]),
            ),
            (
                "norms-distance",
                v(&["norms", "--field", &f("profile.csv"), "--kappa", "2", "--norm", "distance", "--other", &f("other.csv")]),
            ),
            ("norms-control", v(&["norms", "--field", &f("profile.csv"), "--kappa", "2", "--norm", "control"])),
            (
                "bjorken",
                v(&["bjorken", "--rho0", "10", "--tau", "5", "--bulk0", "0.1", "--zeta", "0.2", "--tau-P", "0.5"]),
            ),
        ]
    }

    /// Runs `args` with `--seed 7 --out <dir>/<tag>.json` and returns the output path.
    pub fn run_to(&self, tag: &str, args: &[String]) -> PathBuf {
        let out = self.path(&format!("{tag}.json"));
        let mut full: Vec<&str> = args.iter().map(String::as_str).collect();
        let out_s = out.display().to_string();
        full.extend(["--seed", "7", "--out", &out_s]);
        let o = run(&full);
        assert!(o.status.success(), "{tag}: {}", String::from_utf8_lossy(&o.stderr));
        out
    }
}
