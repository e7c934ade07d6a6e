use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Real interval with independently open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        lo_open: true,
        hi_open: true,
    };

    /// `[0, ∞)`
    pub const NONNEG: Interval = Interval {
        lo: 0.0,
        hi: f64::INFINITY,
        lo_open: false,
        hi_open: true,
    };

    /// `(0, ∞)`
    pub const POSITIVE: Interval = Interval {
        lo: 0.0,
        hi: f64::INFINITY,
        lo_open: true,
        hi_open: true,
    };

    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_open: false,
            hi_open: false,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_open { x > self.lo } else { x >= self.lo };
        let below = if self.hi_open { x < self.hi } else { x <= self.hi };
        above && below
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo,
            self.hi,
            if self.hi_open { ')' } else { ']' }
        )
    }
}

/// A real function of one real variable with a declared domain and,
/// optionally, closed-form first and second derivatives.
#[derive(Clone)]
pub struct ScalarFunction {
    label: String,
    domain: Interval,
    rule: RealFn,
    first: Option<RealFn>,
    second: Option<RealFn>,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl ScalarFunction {
    pub fn new(
        label: impl Into<String>,
        domain: Interval,
        rule: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        ScalarFunction {
            label: label.into(),
            domain,
            rule: Arc::new(rule),
            first: None,
            second: None,
        }
    }

    pub fn with_derivatives(
        mut self,
        first: impl Fn(f64) -> f64 + Send + Sync + 'static,
        second: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.first = Some(Arc::new(first));
        self.second = Some(Arc::new(second));
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Evaluates at `x`, failing outside the domain or on a non-finite result.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(Error::domain(format!(
                "{} is outside {} for `{}`",
                x, self.domain, self.label
            )));
        }
        let y = (self.rule)(x);
        if !y.is_finite() {
            return Err(Error::domain(format!("`{}` is not finite at {x}", self.label)));
        }
        Ok(y)
    }

    pub fn derivative(&self, x: f64) -> Option<f64> {
        self.first.as_ref().map(|d| d(x))
    }

    pub fn second_derivative(&self, x: f64) -> Option<f64> {
        self.second.as_ref().map(|d| d(x))
    }

    pub fn identity() -> Self {
        ScalarFunction::new("t", Interval::REAL_LINE, |t| t).with_derivatives(|_| 1.0, |_| 0.0)
    }

    pub fn square() -> Self {
        ScalarFunction::new("t^2", Interval::REAL_LINE, |t| t * t)
            .with_derivatives(|t| 2.0 * t, |_| 2.0)
    }

    pub fn sqrt() -> Self {
        ScalarFunction::new("sqrt(t)", Interval::NONNEG, f64::sqrt)
    }

    pub fn exp() -> Self {
        ScalarFunction::new("exp(t)", Interval::REAL_LINE, f64::exp)
            .with_derivatives(f64::exp, f64::exp)
    }

    pub fn ln() -> Self {
        ScalarFunction::new("log(t)", Interval::POSITIVE, f64::ln)
            .with_derivatives(|t| 1.0 / t, |t| -1.0 / (t * t))
    }

    /// `t ↦ t^p` on `[0, ∞)` with `0^p := 0` for `p > 0`.
    pub fn power(p: f64) -> Self {
        ScalarFunction::new(format!("t^{p}"), Interval::NONNEG, move |t| {
            if t == 0.0 && p > 0.0 {
                0.0
            } else {
                t.powf(p)
            }
        })
        .with_derivatives(
            move |t| p * t.powf(p - 1.0),
            move |t| p * (p - 1.0) * t.powf(p - 2.0),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_is_enforced() {
        assert!(ScalarFunction::ln().eval(0.0).is_err());
        assert!(ScalarFunction::sqrt().eval(-1.0).is_err());
        assert_eq!(ScalarFunction::sqrt().eval(4.0).unwrap(), 2.0);
        assert_eq!(ScalarFunction::power(1.5).eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn interval_membership() {
        assert!(Interval::NONNEG.contains(0.0));
        assert!(!Interval::POSITIVE.contains(0.0));
        assert!(Interval::closed(0.0, 1.0).contains(1.0));
    }
}
