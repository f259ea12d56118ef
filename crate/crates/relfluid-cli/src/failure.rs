use std::fs::File;
use std::path::Path;

use serde_json::json;

use relfluid_core::io::to_canonical_string;
use relfluid_core::Error;

/// A validation failure reported as `{"error": {...}}` on stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: String,
    pub message: String,
    pub row: Option<usize>,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure { code: "ConfigError".into(), message: message.into(), row: None }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: "UsageError".into(), message: message.into(), row: None }
    }

    pub fn emit(&self) {
        let mut body = json!({"code": self.code, "message": self.message});
        if let Some(row) = self.row {
            body["row"] = json!(row);
        }
        eprintln!("{}", to_canonical_string(&json!({ "error": body })));
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let row = match &e {
            Error::Schema { row, .. } => Some(*row),
            _ => None,
        };
        Failure { code: e.code().to_string(), message: e.to_string(), row }
    }
}

/// Opens an input file, reporting a missing one as `FileNotFound`.
pub fn open(path: &Path) -> Result<File, Failure> {
    File::open(path).map_err(|e| {
        let code = if e.kind() == std::io::ErrorKind::NotFound { "FileNotFound" } else { "IoError" };
        Failure { code: code.into(), message: format!("{}: {e}", path.display()), row: None }
    })
}

pub fn require_file(path: &Path) -> Result<(), Failure> {
    open(path).map(|_| ())
}
