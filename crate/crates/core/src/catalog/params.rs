use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;

/// A parameter value: a number, a name, a vector, a matrix or a list of
/// matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Real(f64),
    Text(String),
    Vector(Vec<f64>),
    Matrix(Vec<Vec<f64>>),
    Matrices(Vec<Vec<Vec<f64>>>),
}

impl ParamValue {
    /// Parses a command-line value: JSON when it parses, bare text otherwise.
    pub fn parse_cli(s: &str) -> ParamValue {
        serde_json::from_str(s).unwrap_or_else(|_| ParamValue::Text(s.to_string()))
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Text(s) => f.write_str(s),
            other => f.write_str(&serde_json::to_string(other).map_err(|_| fmt::Error)?),
        }
    }
}

/// Declared parameter of a catalog entry.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    /// Human-readable admissible range, quoted in error messages.
    pub constraint: &'static str,
    /// Default value for a given dimension.
    pub default: fn(usize) -> ParamValue,
}

/// Resolved parameters of an instantiated entry.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Params(pub BTreeMap<String, ParamValue>);

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    pub fn with(mut self, name: &str, value: ParamValue) -> Self {
        self.0.insert(name.to_string(), value);
        self
    }

    pub fn real_param(self, name: &str, value: f64) -> Self {
        self.with(name, ParamValue::Real(value))
    }

    pub fn text_param(self, name: &str, value: &str) -> Self {
        self.with(name, ParamValue::Text(value.to_string()))
    }

    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.0.get(name)
    }

    fn require(&self, name: &str) -> Result<&ParamValue> {
        self.0
            .get(name)
            .ok_or_else(|| Error::param(name, "missing parameter"))
    }

    pub fn real(&self, name: &str) -> Result<f64> {
        match self.require(name)? {
            ParamValue::Real(v) if v.is_finite() => Ok(*v),
            _ => Err(Error::param(name, "expected a finite number")),
        }
    }

    pub fn text(&self, name: &str) -> Result<&str> {
        match self.require(name)? {
            ParamValue::Text(s) => Ok(s),
            _ => Err(Error::param(name, "expected a name")),
        }
    }

    /// A vector of length `n`; a single number is broadcast.
    pub fn vector(&self, name: &str, n: usize) -> Result<Vec<f64>> {
        let v = match self.require(name)? {
            ParamValue::Real(x) => vec![*x; n],
            ParamValue::Vector(v) => v.clone(),
            _ => return Err(Error::param(name, "expected a number or a vector")),
        };
        if v.len() != n {
            return Err(Error::param(name, format!("expected {n} entries, found {}", v.len())));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::param(name, "entries must be finite"));
        }
        Ok(v)
    }

    pub fn rows(&self, name: &str) -> Result<Vec<Vec<f64>>> {
        match self.require(name)? {
            ParamValue::Matrix(m) => Ok(m.clone()),
            ParamValue::Vector(v) => Ok(vec![v.clone()]),
            _ => Err(Error::param(name, "expected a list of rows")),
        }
    }

    /// A list of symmetric matrices.
    pub fn matrices(&self, name: &str) -> Result<Vec<Point>> {
        let raw = match self.require(name)? {
            ParamValue::Matrices(ms) => ms.clone(),
            ParamValue::Matrix(m) => vec![m.clone()],
            _ => return Err(Error::param(name, "expected a list of symmetric matrices")),
        };
        raw.into_iter()
            .map(|m| Point::matrix(m).map_err(|e| Error::param(name, e.to_string())))
            .collect()
    }
}
