//! Name-keyed registries of strategy constructors.

use std::collections::BTreeMap;

use serde_json::Value;

use crate::error::{Error, Result};

type Ctor<T> = Box<dyn Fn(&Value) -> Result<Box<T>> + Send + Sync>;

/// Maps strategy names to constructors taking a JSON parameter object.
pub struct Registry<T: ?Sized> {
    family: &'static str,
    entries: BTreeMap<&'static str, Ctor<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(family: &'static str) -> Self {
        Registry { family, entries: BTreeMap::new() }
    }

    pub fn register<F>(&mut self, name: &'static str, ctor: F)
    where
        F: Fn(&Value) -> Result<Box<T>> + Send + Sync + 'static,
    {
        self.entries.insert(name, Box::new(ctor));
    }

    pub fn with<F>(mut self, name: &'static str, ctor: F) -> Self
    where
        F: Fn(&Value) -> Result<Box<T>> + Send + Sync + 'static,
    {
        self.register(name, ctor);
        self
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn build(&self, name: &str, params: &Value) -> Result<Box<T>> {
        match self.entries.get(name) {
            Some(ctor) => ctor(params),
            None => Err(Error::UnknownStrategy {
                family: self.family,
                name: name.to_string(),
                known: self.names().join(", "),
            }),
        }
    }

    /// Builds from an object of the form `{"kind": name, ...params}`.
    pub fn build_tagged(&self, spec: &Value) -> Result<Box<T>> {
        let kind = spec
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Config(format!("{} spec needs a string 'kind'", self.family)))?;
        self.build(kind, spec)
    }
}

/// Reads an optional float parameter with a default.
pub fn param_f64(params: &Value, key: &str, default: f64) -> Result<f64> {
    match params.get(key) {
        None | Some(Value::Null) => Ok(default),
        Some(v) => v
            .as_f64()
            .ok_or_else(|| Error::Config(format!("parameter '{key}' must be a number"))),
    }
}

/// Reads a required float parameter.
pub fn require_f64(params: &Value, key: &str) -> Result<f64> {
    params
        .get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| Error::Config(format!("missing numeric parameter '{key}'")))
}
