use serde::{Deserialize, Serialize};

/// Absolute-plus-relative slack for "q ≥ 0" tests.
///
/// A quantity `q` passes iff `q ≥ −(abs + rel·s)`, where `s` is the largest
/// absolute value that went into computing `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-9,
            rel: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    pub fn slack(&self, scale: f64) -> f64 {
        self.abs + self.rel * scale.abs()
    }

    pub fn nonneg(&self, q: f64, scale: f64) -> bool {
        q >= -self.slack(scale)
    }
}
