//! Canonical JSON emission and the flat binary snapshot format.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::formulation::{GridField4, GridGeometry, Stencil};

/// Formats like C's `%.17g`.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mant = strip_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        strip_zeros(&format!("{x:.*}", (16 - exp) as usize)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&format_g17(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap_or_default()),
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(x, out);
            }
            out.push(']');
        }
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).unwrap_or_default());
                out.push(':');
                write_value(&m[k], out);
            }
            out.push('}');
        }
    }
}

/// Compact JSON with sorted keys and `%.17g` floats; non-finite values are
/// already `null` in a [`Value`].
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = String::new();
    write_value(v, &mut s);
    s
}

pub fn write_canonical(path: &Path, v: &Value) -> Result<()> {
    let mut s = to_canonical_string(v);
    s.push('\n');
    fs::write(path, s).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Variable order inside a snapshot file.
pub const FIELD_VARIABLES: [&str; 6] = ["hhat", "s", "u0", "u1", "u2", "u3"];

/// Metadata stored next to a snapshot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSidecar {
    pub dims: [usize; 4],
    pub spacing: [f64; 4],
    pub variables: Vec<String>,
    pub hbar: f64,
    #[serde(default)]
    pub stencil: Stencil,
    /// Equation-of-state spec (`{"kind": ...}`) the field was produced with.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eos: Option<Value>,
}

/// `snap.bin` ↦ `snap.json`.
pub fn sidecar_path(bin: &Path) -> PathBuf {
    bin.with_extension("json")
}

/// Writes little-endian `f64` values, variable-major, and the sidecar.
pub fn write_field(bin: &Path, field: &GridField4, eos: Option<Value>) -> Result<()> {
    let mut bytes = Vec::with_capacity(field.len() * 6 * 8);
    for var in [&field.hhat, &field.s, &field.u[0], &field.u[1], &field.u[2], &field.u[3]] {
        for x in var.iter() {
            bytes.extend_from_slice(&x.to_le_bytes());
        }
    }
    fs::write(bin, bytes).map_err(|e| Error::Io(format!("{}: {e}", bin.display())))?;
    let side = FieldSidecar {
        dims: field.geom.dims,
        spacing: field.geom.spacing,
        variables: FIELD_VARIABLES.iter().map(|s| s.to_string()).collect(),
        hbar: field.hbar,
        stencil: field.geom.stencil,
        eos,
    };
    let v = serde_json::to_value(&side)?;
    write_canonical(&sidecar_path(bin), &v)
}

pub fn read_field(bin: &Path) -> Result<(GridField4, FieldSidecar)> {
    let side_path = sidecar_path(bin);
    let side: FieldSidecar = serde_json::from_value(read_json(&side_path)?)
        .map_err(|e| Error::Config(format!("{}: {e}", side_path.display())))?;
    if side.variables != FIELD_VARIABLES {
        return Err(Error::Config(format!("snapshot variables must be {FIELD_VARIABLES:?}")));
    }
    let bytes = fs::read(bin).map_err(|e| Error::Io(format!("{}: {e}", bin.display())))?;
    let n: usize = side.dims.iter().product();
    if bytes.len() != n * 6 * 8 {
        return Err(Error::Config(format!(
            "{} holds {} bytes, expected {} for dims {:?}",
            bin.display(),
            bytes.len(),
            n * 48,
            side.dims
        )));
    }
    let vals: Vec<f64> = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    let var = |k: usize| vals[k * n..(k + 1) * n].to_vec();
    let mut geom = GridGeometry::new(side.dims, side.spacing)?;
    geom.stencil = side.stencil;
    let field = GridField4::new(geom, var(0), var(1), [var(2), var(3), var(4), var(5)], side.hbar)?;
    Ok((field, side))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn g17_matches_printf() {
        assert_eq!(format_g17(0.1), "0.10000000000000001");
        assert_eq!(format_g17(1.0), "1");
        assert_eq!(format_g17(-2.5), "-2.5");
        assert_eq!(format_g17(1e20), "1e+20");
        assert_eq!(format_g17(1.5e-5), "1.5e-05");
        assert_eq!(format_g17(2.0f64.sqrt() * 1e-7), "1.4142135623730952e-07");
        assert_eq!(format_g17(0.0001), "0.0001");
        assert_eq!(format_g17(123456789.0), "123456789");
        assert_eq!(format_g17(1.0 / 3.0), "0.33333333333333331");
    }

    #[test]
    fn canonical_sorts_keys() {
        let v = json!({"b": 1, "a": [0.5, null, "x"], "c": {"z": true, "y": 2.0}});
        assert_eq!(to_canonical_string(&v), r#"{"a":[0.5,null,"x"],"b":1,"c":{"y":2,"z":true}}"#);
    }
}
