use std::collections::BTreeMap;
use std::io::Read;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::bdnk::{bdnk_causal, BdnkCoefficients};
use super::dnmr::{dnmr_verdict, DnmrCoefficients, DnmrState};
use super::{shear_spectrum, ShearTensor, TOL_CONSTRAINT};
use crate::error::{Error, Result};
use crate::kinematics::normalize_velocity;
use crate::registry::Registry;
use crate::tensor::Metric4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
}

/// Raw `LHS − RHS` of one displayed inequality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Margin {
    pub condition: String,
    pub relation: Relation,
    pub value: f64,
    pub pass: bool,
}

/// Margins of a family of conditions evaluated with one strictness setting.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionSet {
    pub strict: bool,
    pub margins: Vec<Margin>,
}

impl ConditionSet {
    pub fn new(strict: bool) -> Self {
        ConditionSet { strict, margins: Vec::new() }
    }

    pub fn push(&mut self, condition: &str, relation: Relation, value: f64) {
        let pass = match (relation, self.strict) {
            (Relation::Ge, false) => value >= 0.0,
            (Relation::Ge, true) => value > 0.0,
            (Relation::Le, false) => value <= 0.0,
            (Relation::Le, true) => value < 0.0,
        };
        self.margins.push(Margin { condition: condition.to_string(), relation, value, pass });
    }

    pub fn pass(&self) -> bool {
        self.margins.iter().all(|m| m.pass)
    }

    pub fn failed(&self) -> Vec<String> {
        self.margins.iter().filter(|m| !m.pass).map(|m| m.condition.clone()).collect()
    }

    pub fn get(&self, condition: &str) -> Option<f64> {
        self.margins.iter().find(|m| m.condition == condition).map(|m| m.value)
    }

    /// Worst value over all instantiations `base[..]` (or `base` itself).
    pub fn worst(&self, base: &str) -> Option<f64> {
        let mut hits = self
            .margins
            .iter()
            .filter(|m| m.condition == base || m.condition.strip_prefix(base).is_some_and(|r| r.starts_with('[')))
            .peekable();
        let relation = hits.peek()?.relation;
        let values = hits.map(|m| m.value);
        match relation {
            Relation::Ge => values.reduce(f64::min),
            Relation::Le => values.reduce(f64::max),
        }
    }

    /// Per-instantiation margins plus one worst-case entry per indexed condition.
    pub fn to_map(&self, prefix: &str) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        for m in &self.margins {
            out.insert(format!("{prefix}.{}", m.condition), m.value);
            if let Some((base, _)) = m.condition.split_once('[') {
                if let Some(w) = self.worst(base) {
                    out.insert(format!("{prefix}.{base}"), w);
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Causal,
    Acausal,
    Indeterminate,
    /// Constraint violations, failed hypotheses or unusable input.
    Invalid,
}

/// One row of the cell table; unrecognised numeric columns land in `extra`.
#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub id: String,
    pub rho: f64,
    pub p: f64,
    pub bulk: f64,
    pub pi: [f64; 10],
    pub u: [f64; 3],
    pub extra: BTreeMap<String, f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuditOptions {
    pub strict: bool,
    pub tol_constraint: f64,
    pub project_constraints: bool,
    pub metric: Metric4,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { strict: false, tol_constraint: TOL_CONSTRAINT, project_constraints: false, metric: Metric4::minkowski() }
    }
}

pub trait CausalityTheory: Send + Sync {
    fn name(&self) -> &'static str;
    fn evaluate(&self, cell: &Cell, opts: &AuditOptions) -> Result<(Verdict, BTreeMap<String, f64>)>;
}

const DNMR_KEYS: [&str; 11] = [
    "zeta", "eta", "tau_P", "tau_pi", "delta_PP", "lambda_Ppi", "delta_pipi", "tau_pipi", "lambda_piP", "delta_Ppi", "cs2",
];
const BDNK_KEYS: [&str; 9] = ["tau_R", "tau_P", "tau_Q", "zeta", "eta", "kappa_kappa", "beta_rho", "cs2", "p_plus_rho"];

fn base_object(params: &Value, keys: &[&str], theory: &str) -> Result<Map<String, Value>> {
    let obj = match params {
        Value::Null => Map::new(),
        Value::Object(m) => m.clone(),
        _ => return Err(Error::Config(format!("{theory} coefficients must be a JSON object"))),
    };
    let mut out = Map::new();
    for (k, v) in obj {
        if k == "kind" {
            continue;
        }
        if !keys.contains(&k.as_str()) {
            return Err(Error::Config(format!("unknown {theory} coefficient '{k}'")));
        }
        out.insert(k, v);
    }
    Ok(out)
}

fn merged<T: for<'de> Deserialize<'de>>(base: &Map<String, Value>, cell: &Cell, keys: &[&str]) -> Result<T> {
    let mut m = base.clone();
    for (k, v) in &cell.extra {
        if keys.contains(&k.as_str()) {
            m.insert(k.clone(), json!(v));
        }
    }
    serde_json::from_value(Value::Object(m)).map_err(|e| Error::Config(format!("coefficients: {e}")))
}

struct DnmrTheory {
    base: Map<String, Value>,
}

impl CausalityTheory for DnmrTheory {
    fn name(&self) -> &'static str {
        "dnmr"
    }

    fn evaluate(&self, cell: &Cell, opts: &AuditOptions) -> Result<(Verdict, BTreeMap<String, f64>)> {
        let coeffs: DnmrCoefficients = merged(&self.base, cell, &DNMR_KEYS)?;
        let u = normalize_velocity(cell.u, &opts.metric)?;
        let mut shear = ShearTensor::new(cell.pi, u, opts.metric);
        if opts.project_constraints {
            shear = shear.projected();
        }
        let spec = shear_spectrum(&shear, opts.tol_constraint)?;
        let state = DnmrState { rho: cell.rho, p: cell.p, bulk: cell.bulk, lambda: spec.lambda };
        let v = dnmr_verdict(&state, &coeffs, opts.strict)?;
        let mut margins = v.sufficient.to_map("sufficient");
        margins.extend(v.necessary.to_map("necessary"));
        Ok((v.verdict, margins))
    }
}

struct BdnkTheory {
    base: Map<String, Value>,
}

impl CausalityTheory for BdnkTheory {
    fn name(&self) -> &'static str {
        "bdnk"
    }

    fn evaluate(&self, cell: &Cell, opts: &AuditOptions) -> Result<(Verdict, BTreeMap<String, f64>)> {
        let mut base = self.base.clone();
        if !base.contains_key("p_plus_rho") {
            base.insert("p_plus_rho".into(), json!(cell.p + cell.rho));
        }
        let coeffs: BdnkCoefficients = merged(&base, cell, &BDNK_KEYS)?;
        let set = bdnk_causal(&coeffs, opts.strict)?;
        let verdict = if set.pass() { Verdict::Causal } else { Verdict::Acausal };
        Ok((verdict, set.to_map("conditions")))
    }
}

/// Theories keyed by name; parameters are the global coefficient object.
pub fn theory_registry() -> Registry<dyn CausalityTheory> {
    Registry::<dyn CausalityTheory>::new("theory")
        .with("dnmr", |p| Ok(Box::new(DnmrTheory { base: base_object(p, &DNMR_KEYS, "dnmr")? })))
        .with("bdnk", |p| Ok(Box::new(BdnkTheory { base: base_object(p, &BDNK_KEYS, "bdnk")? })))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellResult {
    pub id: String,
    pub verdict: Verdict,
    pub margins: BTreeMap<String, f64>,
    pub reason: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub frac_causal: f64,
    pub frac_acausal: f64,
    pub frac_indeterminate: f64,
    pub frac_invalid: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CausalityReport {
    pub theory: String,
    pub cells: Vec<CellResult>,
    pub summary: Option<Summary>,
}

impl CausalityReport {
    pub fn to_json(&self) -> Value {
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|c| {
                let mut o = json!({"id": c.id, "verdict": c.verdict, "margins": c.margins});
                if let Some(r) = &c.reason {
                    o["reason"] = json!(r);
                }
                o
            })
            .collect();
        let summary = match &self.summary {
            Some(s) => serde_json::to_value(s).unwrap_or(Value::Null),
            None => json!({"n": 0}),
        };
        json!({"cells": cells, "summary": summary})
    }
}

/// Evaluates every cell; order of the output follows the input.
pub fn batch_audit(cells: &[Cell], theory: &dyn CausalityTheory, opts: &AuditOptions) -> CausalityReport {
    let results: Vec<CellResult> = cells
        .par_iter()
        .map(|cell| match theory.evaluate(cell, opts) {
            Ok((verdict, margins)) => CellResult { id: cell.id.clone(), verdict, margins, reason: None },
            Err(e) => CellResult {
                id: cell.id.clone(),
                verdict: Verdict::Invalid,
                margins: BTreeMap::new(),
                reason: Some(format!("{}: {}", e.code(), e)),
            },
        })
        .collect();
    let n = results.len();
    let summary = (n > 0).then(|| {
        let frac = |v: Verdict| results.iter().filter(|r| r.verdict == v).count() as f64 / n as f64;
        Summary {
            n,
            frac_causal: frac(Verdict::Causal),
            frac_acausal: frac(Verdict::Acausal),
            frac_indeterminate: frac(Verdict::Indeterminate),
            frac_invalid: frac(Verdict::Invalid),
        }
    });
    CausalityReport { theory: theory.name().to_string(), cells: results, summary }
}

const PI_COLUMNS: [&str; 10] = ["pi_00", "pi_01", "pi_02", "pi_03", "pi_11", "pi_12", "pi_13", "pi_22", "pi_23", "pi_33"];

/// Parses the cell table. Row numbers in errors are 1-based file lines.
pub fn read_cells<R: Read>(reader: R) -> Result<Vec<Cell>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Schema { row: 1, message: e.to_string() })?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let mut required = vec!["id", "rho", "p", "P_bulk"];
    required.extend(PI_COLUMNS);
    required.extend(["u1", "u2", "u3"]);
    let mut idx = BTreeMap::new();
    for name in &required {
        let i = col(name).ok_or_else(|| Error::Schema { row: 1, message: format!("missing column '{name}'") })?;
        idx.insert(*name, i);
    }
    let extras: Vec<(usize, String)> =
        headers.iter().enumerate().filter(|(_, h)| !required.contains(h)).map(|(i, h)| (i, h.to_string())).collect();

    let mut cells = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let row = k + 2;
        let rec = rec.map_err(|e| Error::Schema { row, message: e.to_string() })?;
        let num = |i: usize, name: &str| -> Result<f64> {
            let raw = rec.get(i).unwrap_or("");
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Schema { row, message: format!("column '{name}': '{raw}' is not a finite number") }),
            }
        };
        let mut pi = [0.0; 10];
        for (j, name) in PI_COLUMNS.iter().enumerate() {
            pi[j] = num(idx[name], name)?;
        }
        let mut extra = BTreeMap::new();
        for (i, name) in &extras {
            if rec.get(*i).is_some_and(|s| !s.is_empty()) {
                extra.insert(name.clone(), num(*i, name)?);
            }
        }
        let id = rec.get(idx["id"]).unwrap_or("").to_string();
        if id.is_empty() {
            return Err(Error::Schema { row, message: "empty id".into() });
        }
        cells.push(Cell {
            id,
            rho: num(idx["rho"], "rho")?,
            p: num(idx["p"], "p")?,
            bulk: num(idx["P_bulk"], "P_bulk")?,
            pi,
            u: [num(idx["u1"], "u1")?, num(idx["u2"], "u2")?, num(idx["u3"], "u3")?],
            extra,
        });
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "id,rho,p,P_bulk,pi_00,pi_01,pi_02,pi_03,pi_11,pi_12,pi_13,pi_22,pi_23,pi_33,u1,u2,u3";

    #[test]
    fn reads_cells_and_extras() {
        let text = format!("{HEADER},zeta\nc0,3,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,10\n");
        let cells = read_cells(text.as_bytes()).unwrap();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].extra.get("zeta"), Some(&10.0));
    }

    #[test]
    fn bad_number_reports_row() {
        let text = format!("{HEADER}\nc0,3,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0\nc1,x,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n");
        assert_eq!(read_cells(text.as_bytes()).unwrap_err(), Error::Schema {
            row: 3,
            message: "column 'rho': 'x' is not a finite number".into()
        });
    }

    #[test]
    fn empty_report() {
        let t = theory_registry().build("dnmr", &json!({"eta": 0.2, "zeta": 0.1, "tau_P": 1, "tau_pi": 1, "cs2": 0.3})).unwrap();
        let r = batch_audit(&[], t.as_ref(), &AuditOptions::default());
        assert_eq!(r.to_json(), json!({"cells": [], "summary": {"n": 0}}));
    }

    #[test]
    fn worst_over_instantiations() {
        let mut s = ConditionSet::new(false);
        s.push("c[1,2]", Relation::Ge, 0.5);
        s.push("c[1,3]", Relation::Ge, -0.25);
        s.push("e", Relation::Le, -2.0);
        assert_eq!(s.worst("c"), Some(-0.25));
        assert_eq!(s.worst("e"), Some(-2.0));
        assert_eq!(s.to_map("x")["x.c"], -0.25);
    }
}
