//! Functions on cones and their finite difference operators `Δ_x`.

use std::fmt;
use std::sync::Arc;

use crate::cone::ConeSpec;
use crate::error::{Error, Result};
use crate::linalg::ScalarFunction;
use crate::point::Point;

/// Largest order accepted by [`kth_diff`]; it costs `2^k` evaluations.
pub const MAX_ORDER: usize = 12;

type Rule = Arc<dyn Fn(&Point) -> Result<f64> + Send + Sync>;

/// A real function on a cone. Cheap to clone.
#[derive(Clone)]
pub struct FunctionHandle {
    label: String,
    domain: ConeSpec,
    rule: Rule,
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl FunctionHandle {
    pub fn new(
        label: impl Into<String>,
        domain: ConeSpec,
        rule: impl Fn(&Point) -> Result<f64> + Send + Sync + 'static,
    ) -> Self {
        FunctionHandle {
            label: label.into(),
            domain,
            rule: Arc::new(rule),
        }
    }

    /// Lifts a scalar function to a one-dimensional cone.
    pub fn from_scalar(f: ScalarFunction, domain: ConeSpec) -> Self {
        let label = f.label().to_string();
        FunctionHandle::new(label, domain, move |x| f.eval(x.value()))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> &ConeSpec {
        &self.domain
    }

    /// Evaluates at `x`. Shape mismatches and non-finite values are errors;
    /// the latter is reported as a domain error.
    pub fn eval(&self, x: &Point) -> Result<f64> {
        self.domain.check_shape(x)?;
        let v = (self.rule)(x)?;
        if !v.is_finite() {
            return Err(Error::domain(format!("`{}` is not finite at {:?}", self.label, x.as_slice())));
        }
        Ok(v)
    }
}

/// `Φ(x + z) − Φ(z)`.
pub fn delta(f: &FunctionHandle, x: &Point, z: &Point) -> Result<f64> {
    Ok(f.eval(&x.add(z)?)? - f.eval(z)?)
}

/// `Φ(x+y+z) − Φ(x+z) − Φ(y+z) + Φ(z)`.
pub fn second_diff(f: &FunctionHandle, x: &Point, y: &Point, z: &Point) -> Result<f64> {
    second_diff_scaled(f, x, y, z).map(|(v, _)| v)
}

/// [`second_diff`] together with the largest absolute function value used.
pub fn second_diff_scaled(f: &FunctionHandle, x: &Point, y: &Point, z: &Point) -> Result<(f64, f64)> {
    let fxyz = f.eval(&x.add(y)?.add(z)?)?;
    let fxz = f.eval(&x.add(z)?)?;
    let fyz = f.eval(&y.add(z)?)?;
    let fz = f.eval(z)?;
    let scale = fxyz.abs().max(fxz.abs()).max(fyz.abs()).max(fz.abs());
    // grouping makes the result symmetric in x and y bit for bit
    Ok(((fxyz + fz) - (fxz + fyz), scale))
}

/// `Δ_{x₁}⋯Δ_{x_k} Φ(base)` by inclusion–exclusion over subsets.
pub fn kth_diff(f: &FunctionHandle, xs: &[Point], base: &Point) -> Result<f64> {
    kth_diff_scaled(f, xs, base).map(|(v, _)| v)
}

/// [`kth_diff`] together with the largest absolute function value used.
pub fn kth_diff_scaled(f: &FunctionHandle, xs: &[Point], base: &Point) -> Result<(f64, f64)> {
    let k = xs.len();
    if k > MAX_ORDER {
        return Err(Error::Capability(format!(
            "difference order {k} exceeds the cap of {MAX_ORDER}"
        )));
    }
    let mut pos = 0.0;
    let mut neg = 0.0;
    let mut scale: f64 = 0.0;
    for mask in 0u32..(1u32 << k) {
        let mut p = base.clone();
        for (i, x) in xs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                p = p.add(x)?;
            }
        }
        let v = f.eval(&p)?;
        scale = scale.max(v.abs());
        if (k - mask.count_ones() as usize) % 2 == 0 {
            pos += v;
        } else {
            neg += v;
        }
    }
    Ok((pos - neg, scale))
}

/// `x ↦ Φ(x + t) − Φ(t)` on the closure of Φ's domain.
pub fn shift_and_center(f: &FunctionHandle, t: &Point) -> Result<FunctionHandle> {
    let ft = f.eval(t)?;
    let inner = f.clone();
    let shift = t.clone();
    Ok(FunctionHandle::new(
        format!("{} shifted and centered", f.label()),
        f.domain().closure(),
        move |x| Ok(inner.eval(&x.add(&shift)?)? - ft),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::sample;
    use crate::linalg::Interval;
    use crate::rng::SeedStream;
    use proptest::prelude::*;

    fn scalar(label: &str, rule: impl Fn(f64) -> f64 + Send + Sync + 'static) -> FunctionHandle {
        FunctionHandle::from_scalar(
            ScalarFunction::new(label, Interval::NONNEG, rule),
            ConeSpec::NonnegOrthant(1),
        )
    }

    fn pt(v: &[f64]) -> Point {
        Point::vector(v.to_vec())
    }

    fn sq_norm(n: usize) -> FunctionHandle {
        FunctionHandle::new("sq", ConeSpec::NonnegOrthant(n), |x| Ok(x.inner(x)?))
    }

    #[test]
    fn delta_examples() {
        let f = scalar("3t+1", |t| 3.0 * t + 1.0);
        assert_eq!(delta(&f, &Point::scalar(2.0), &Point::scalar(5.0)).unwrap(), 6.0);
        let g = scalar("log1p", f64::ln_1p);
        let d = delta(&g, &Point::scalar(1.0), &Point::scalar(0.0)).unwrap();
        assert!((d - 2f64.ln()).abs() < 1e-15);
        assert_eq!(delta(&g, &Point::scalar(0.0), &Point::scalar(3.0)).unwrap(), 0.0);
    }

    #[test]
    fn second_diff_of_sq_norm() {
        let v = second_diff(&sq_norm(2), &pt(&[1.0, 1.0]), &pt(&[2.0, 3.0]), &pt(&[0.4, 7.0])).unwrap();
        assert!((v - 10.0).abs() < 1e-9);
    }

    #[test]
    fn second_diff_of_geometric_mean() {
        let g = FunctionHandle::new("geomean2", ConeSpec::NonnegOrthant(2), |x| {
            Ok((x.as_slice()[0] * x.as_slice()[1]).sqrt())
        });
        let t = 1.0 / 3.0;
        let v = second_diff(&g, &pt(&[t, t]), &pt(&[t, 2.0 * t]), &pt(&[0.0, 0.0])).unwrap();
        // sqrt(2/3) - 1/3 - sqrt(2)/3
        let closed = (2.0f64 / 3.0).sqrt() - t - 2f64.sqrt() / 3.0;
        assert!((v - closed).abs() < 1e-15);
        assert!((v - 0.011_758_726_8).abs() < 1e-9);
    }

    #[test]
    fn second_diff_of_lse() {
        let lse = FunctionHandle::new("lse", ConeSpec::NonnegOrthant(2), |x| {
            Ok(x.as_slice().iter().map(|v| v.exp()).sum::<f64>().ln())
        });
        let l = ((1.0 + std::f64::consts::E) / 2.0).ln();
        // mixed directions: LSE(2,2) + LSE(1,1) − 2·LSE(2,1) = 1 − 2l
        let v = second_diff(&lse, &pt(&[1.0, 0.0]), &pt(&[0.0, 1.0]), &pt(&[1.0, 1.0])).unwrap();
        assert!((v - (1.0 - 2.0 * l)).abs() < 1e-12);
        assert!(v < 0.0);
        // equal directions: log((e²+1)/2) − 2l > 0
        let e1 = pt(&[1.0, 0.0]);
        let v = second_diff(&lse, &e1, &e1, &pt(&[0.0, 0.0])).unwrap();
        let closed = ((std::f64::consts::E.powi(2) + 1.0) / 2.0).ln() - 2.0 * l;
        assert!((v - closed).abs() < 1e-12);
        assert!(v > 0.19);
    }

    #[test]
    fn kth_diff_low_orders() {
        let f = scalar("e^-2t", |t| (-2.0 * t).exp());
        let (x, y, z) = (Point::scalar(0.3), Point::scalar(0.7), Point::scalar(0.5));
        assert_eq!(kth_diff(&f, &[x.clone()], &z).unwrap(), delta(&f, &x, &z).unwrap());
        let two = kth_diff(&f, &[x.clone(), y.clone()], &z).unwrap();
        assert!((two - second_diff(&f, &x, &y, &z).unwrap()).abs() < 1e-15);
        let three = kth_diff(&f, &[x, y, Point::scalar(0.1)], &z).unwrap();
        assert!(-three >= 0.0);
        // closed form e^{-2z} Π (e^{-2x_i} − 1)
        let closed = (-1.0f64).exp() * ((-0.6f64).exp() - 1.0) * ((-1.4f64).exp() - 1.0) * ((-0.2f64).exp() - 1.0);
        assert!((three - closed).abs() < 1e-14);
    }

    #[test]
    fn order_cap() {
        let f = scalar("t", |t| t);
        let xs = vec![Point::scalar(1.0); MAX_ORDER + 1];
        assert!(matches!(kth_diff(&f, &xs, &Point::scalar(0.0)), Err(Error::Capability(_))));
    }

    #[test]
    fn shift_and_center_examples() {
        let f = scalar("e^-t", |t| (-t).exp());
        let g = shift_and_center(&f, &Point::scalar(0.0)).unwrap();
        assert_eq!(g.eval(&Point::scalar(0.0)).unwrap(), 0.0);
        assert!((g.eval(&Point::scalar(1.0)).unwrap() - ((-1.0f64).exp() - 1.0)).abs() < 1e-15);

        let a = 1.0;
        let logistic = scalar("logistic^2", move |t: f64| (1.0 + a * (-t).exp()).powi(2));
        let g = shift_and_center(&logistic, &Point::scalar(0.0)).unwrap();
        let x = 0.8;
        let want = (1.0 + a * (-x as f64).exp()).powi(2) - (1.0 + a).powi(2);
        assert!((g.eval(&Point::scalar(x)).unwrap() - want).abs() < 1e-14);

        let det_recip = FunctionHandle::new("det(I+A)^-1", ConeSpec::Psd(2), |m| {
            Ok(1.0 / crate::linalg::det(&Point::identity(2).add(m)?)?)
        });
        let phi = shift_and_center(&det_recip, &Point::zero_matrix(2)).unwrap();
        let m = Point::diag(&[1.0, 3.0]);
        assert!((phi.eval(&m).unwrap() - (1.0 / 8.0 - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn shift_requires_finite_value() {
        let f = FunctionHandle::new("1/x", ConeSpec::PositiveOrthant(1), |x| Ok(1.0 / x.value()));
        assert!(shift_and_center(&f, &Point::scalar(0.0)).unwrap_err().is_domain());
        let g = shift_and_center(&f, &Point::scalar(1.0)).unwrap();
        assert_eq!(g.domain(), &ConeSpec::NonnegOrthant(1));
    }

    fn triple(seed: u64, cone: &ConeSpec) -> (Point, Point, Point) {
        let mut s = SeedStream::new(seed, 0).sampler();
        (sample(cone, &mut s, 1.0), sample(cone, &mut s, 1.0), sample(cone, &mut s, 1.0))
    }

    fn recursive_delta(f: &FunctionHandle, xs: &[Point], base: &Point) -> f64 {
        match xs.split_last() {
            None => f.eval(base).unwrap(),
            Some((last, rest)) => {
                recursive_delta(f, rest, &base.add(last).unwrap()) - recursive_delta(f, rest, base)
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn second_diff_is_symmetric(seed in any::<u64>(), n in 1usize..6) {
            let cone = ConeSpec::NonnegOrthant(n);
            let f = FunctionHandle::new("lse", cone.clone(), |x| {
                Ok(x.as_slice().iter().map(|v| v.exp()).sum::<f64>().ln())
            });
            let (x, y, z) = triple(seed, &cone);
            prop_assert_eq!(second_diff(&f, &x, &y, &z).unwrap(), second_diff(&f, &y, &x, &z).unwrap());
        }

        #[test]
        fn affine_functions_have_no_curvature(seed in any::<u64>(), n in 1usize..6) {
            let cone = ConeSpec::NonnegOrthant(n);
            let c: Vec<f64> = (0..n).map(|i| 0.7 - 0.3 * i as f64).collect();
            let f = FunctionHandle::new("affine", cone.clone(), move |x| {
                Ok(x.as_slice().iter().zip(&c).map(|(a, b)| a * b).sum::<f64>() + 2.5)
            });
            let (x, y, z) = triple(seed, &cone);
            let (v, scale) = second_diff_scaled(&f, &x, &y, &z).unwrap();
            prop_assert!(v.abs() <= 5e-12 * scale.max(1.0));
        }

        #[test]
        fn second_diff_is_linear_in_the_function(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let cone = ConeSpec::NonnegOrthant(3);
            let f = sq_norm(3);
            let g = FunctionHandle::new("sqrt-sum", cone.clone(), |x| Ok(x.as_slice().iter().sum::<f64>().sqrt()));
            let (f2, g2) = (f.clone(), g.clone());
            let h = FunctionHandle::new("combo", cone.clone(), move |x| Ok(a * f2.eval(x)? + b * g2.eval(x)?));
            let (x, y, z) = triple(seed, &cone);
            let lhs = second_diff(&h, &x, &y, &z).unwrap();
            let rhs = a * second_diff(&f, &x, &y, &z).unwrap() + b * second_diff(&g, &x, &y, &z).unwrap();
            let (_, sf) = second_diff_scaled(&f, &x, &y, &z).unwrap();
            let (_, sg) = second_diff_scaled(&g, &x, &y, &z).unwrap();
            let scale = a.abs() * sf + b.abs() * sg;
            prop_assert!((lhs - rhs).abs() <= 1e-10 * scale.max(1.0));
        }

        #[test]
        fn inclusion_exclusion_matches_recursion(seed in any::<u64>(), k in 1usize..=6) {
            let cone = ConeSpec::NonnegOrthant(2);
            let f = FunctionHandle::new("cm", cone.clone(), |x| {
                let s = x.as_slice();
                Ok((-(s[0] + 0.5 * s[1])).exp() + 1.0 / (1.0 + s[0] + s[1]))
            });
            let mut s = SeedStream::new(seed, 9).sampler();
            let xs: Vec<Point> = (0..k).map(|_| sample(&cone, &mut s, 1.0)).collect();
            let base = sample(&cone, &mut s, 1.0);
            let (v, scale) = kth_diff_scaled(&f, &xs, &base).unwrap();
            let r = recursive_delta(&f, &xs, &base);
            prop_assert!((v - r).abs() <= 1e-11 * scale.max(1.0));
        }
    }
}
