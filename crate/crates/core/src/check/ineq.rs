//! The inequalities a trial can test, and how to evaluate them at named
//! points. Witnesses store an [`Inequality`] plus its points so that the
//! margin can be recomputed later by [`evaluate`].

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cone::{meet_join, ConeSpec};
use crate::diff::{kth_diff_scaled, second_diff_scaled, FunctionHandle};
use crate::error::{Error, Result};
use crate::linalg::{sym_eigenvalues, ScalarFunction};
use crate::point::Point;

pub type Points = BTreeMap<String, Point>;

/// A single inequality `margin ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Inequality {
    OriginNonneg,
    OriginNonpos,
    Subadd,
    Superadd,
    SecondDiffNonneg,
    SecondDiffNonpos,
    Submodular,
    Supermodular,
    /// `(−1)^k Δ_{h1}⋯Δ_{hk} Φ(base) ≥ 0`; order 0 is `Φ(base) ≥ 0`.
    AlternatingSign { order: usize },
    AlphaStrong { alpha: f64 },
    LipschitzBox { lipschitz: f64 },
    ExpRatioUpper,
    ExpRatioLower,
    Chebyshev,
    /// `reverse = false`: `Σf(b) ≥ Σf(a)`; `reverse = true`: `Σf(a) ≥ Σf(b)`.
    TomicWeyl { reverse: bool },
    Popoviciu { symmetrized: bool, reversed: bool },
    DetTraceInverse,
    /// Quasi–Monte Carlo value of `∫ e^{−⟨Ax,x⟩} Π e^{−xᵢ²}/√π dx` within
    /// `rel_tol` of `det(I+A)^{−1/2}`.
    GaussianDetRepresentation { rel_tol: f64 },
}

impl Inequality {
    /// Human-readable statement, with `Φ` the checked function and `f` the
    /// outer scalar function where one is involved.
    pub fn expression(&self) -> String {
        match self {
            Inequality::OriginNonneg => "Φ(0) ≥ 0".into(),
            Inequality::OriginNonpos => "Φ(0) ≤ 0".into(),
            Inequality::Subadd => "Φ(x+y) ≤ Φ(x) + Φ(y)".into(),
            Inequality::Superadd => "Φ(x+y) ≥ Φ(x) + Φ(y)".into(),
            Inequality::SecondDiffNonneg => "Φ(x+y+z) − Φ(x+z) − Φ(y+z) + Φ(z) ≥ 0".into(),
            Inequality::SecondDiffNonpos => "Φ(x+y+z) − Φ(x+z) − Φ(y+z) + Φ(z) ≤ 0".into(),
            Inequality::Submodular => "Φ(x∨y) + Φ(x∧y) ≤ Φ(x) + Φ(y)".into(),
            Inequality::Supermodular => "Φ(x∨y) + Φ(x∧y) ≥ Φ(x) + Φ(y)".into(),
            Inequality::AlternatingSign { order: 0 } => "Φ(base) ≥ 0".into(),
            Inequality::AlternatingSign { order } => {
                let hs: Vec<String> = (1..=*order).map(|i| format!("Δ_h{i}")).collect();
                format!("(−1)^{order} {} Φ(base) ≥ 0", hs.join(""))
            }
            Inequality::AlphaStrong { alpha } => {
                format!("Φ(x+y+z) − Φ(x+z) − Φ(y+z) + Φ(z) ≥ {alpha}·x·y")
            }
            Inequality::LipschitzBox { lipschitz } => {
                format!("|Φ(x+y+z) − Φ(x+z) − Φ(y+z) + Φ(z)| ≤ {lipschitz}·x·y")
            }
            Inequality::ExpRatioUpper => "(1+z)(1+x+y+z) / ((1+x+z)(1+y+z)) ≤ e^{xy}".into(),
            Inequality::ExpRatioLower => "(1+z)(1+x+y+z) / ((1+x+z)(1+y+z)) ≥ e^{−xy}".into(),
            Inequality::Chebyshev => "⟨u,p⟩·⟨v,p⟩ ≤ ⟨uv,p⟩".into(),
            Inequality::TomicWeyl { reverse: false } => "Σ f(a_k) ≤ Σ f(b_k)".into(),
            Inequality::TomicWeyl { reverse: true } => "Σ f(a_k) ≥ Σ f(b_k)".into(),
            Inequality::Popoviciu { symmetrized, reversed } => {
                let rel = if *reversed { "≤" } else { "≥" };
                if *symmetrized {
                    format!(
                        "(f(Φ(x)) + f(Φ(y)) + f(Φ(z)))/3 + f(Φ(x+y+z)) {rel} \
                         (2/3)(f(Φ(x+y)) + f(Φ(y+z)) + f(Φ(x+z)))"
                    )
                } else {
                    format!("f(Φ(x+y+z)) + f(Φ(z)) {rel} f(Φ(x+z)) + f(Φ(y+z))")
                }
            }
            Inequality::DetTraceInverse => "det(U)·tr(U⁻¹) ≤ det(U+W)·tr((U+W)⁻¹)".into(),
            Inequality::GaussianDetRepresentation { rel_tol } => {
                format!("|∫ e^{{−⟨Ax,x⟩}} Π e^{{−xᵢ²}}/√π dx − det(I+A)^{{−1/2}}| ≤ {rel_tol}·det(I+A)^{{−1/2}}")
            }
        }
    }

    /// Points that must lie in the domain itself; the rest are increments
    /// that only need to lie in its closure.
    pub(crate) fn anchors(&self) -> &'static [&'static str] {
        match self {
            Inequality::Subadd
            | Inequality::Superadd
            | Inequality::Submodular
            | Inequality::Supermodular => &["x", "y"],
            Inequality::SecondDiffNonneg
            | Inequality::SecondDiffNonpos
            | Inequality::AlphaStrong { .. }
            | Inequality::LipschitzBox { .. } => &["z"],
            Inequality::AlternatingSign { .. } => &["base"],
            Inequality::ExpRatioUpper | Inequality::ExpRatioLower | Inequality::Popoviciu { .. } => {
                &["x", "y", "z"]
            }
            Inequality::DetTraceInverse => &["U"],
            _ => &[],
        }
    }
}

/// What an inequality may refer to besides its points.
#[derive(Clone, Copy)]
pub struct Context<'a> {
    pub phi: Option<&'a FunctionHandle>,
    pub outer: Option<&'a ScalarFunction>,
    pub domain: &'a ConeSpec,
}

impl<'a> Context<'a> {
    pub fn of(phi: &'a FunctionHandle) -> Self {
        Context {
            phi: Some(phi),
            outer: None,
            domain: phi.domain(),
        }
    }

    fn phi(&self) -> Result<&'a FunctionHandle> {
        self.phi
            .ok_or_else(|| Error::Precondition("this inequality needs a function Φ".into()))
    }

    fn outer(&self) -> Result<&'a ScalarFunction> {
        self.outer
            .ok_or_else(|| Error::Precondition("this inequality needs an outer function f".into()))
    }
}

fn pt<'p>(points: &'p Points, name: &str) -> Result<&'p Point> {
    points
        .get(name)
        .ok_or_else(|| Error::Precondition(format!("missing point `{name}`")))
}

fn max_abs(vals: &[f64]) -> f64 {
    vals.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `e_{N−1}` of the eigenvalues, i.e. `det(M)·tr(M⁻¹)` without inverting.
fn det_trace_inv(m: &Point) -> Result<f64> {
    let l = sym_eigenvalues(m)?;
    if l.last().is_some_and(|&v| v <= 0.0) {
        return Err(Error::domain("matrix is not positive definite"));
    }
    Ok((0..l.len())
        .map(|i| l.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v).product::<f64>())
        .sum())
}

/// Margin of `ineq` at `points`, together with the magnitude of the values
/// that went into it (for the relative part of the tolerance).
pub fn evaluate(ineq: &Inequality, ctx: &Context<'_>, points: &Points) -> Result<(f64, f64)> {
    let p = |n: &str| pt(points, n);
    let out = match ineq {
        Inequality::OriginNonneg | Inequality::OriginNonpos => {
            let v = ctx.phi()?.eval(&ctx.domain.zero())?;
            let m = if *ineq == Inequality::OriginNonneg { v } else { -v };
            (m, v.abs())
        }
        Inequality::Subadd | Inequality::Superadd => {
            let f = ctx.phi()?;
            let (x, y) = (p("x")?, p("y")?);
            let (a, b, c) = (f.eval(x)?, f.eval(y)?, f.eval(&x.add(y)?)?);
            let m = a + b - c;
            let m = if *ineq == Inequality::Subadd { m } else { -m };
            (m, max_abs(&[a, b, c]))
        }
        Inequality::SecondDiffNonneg | Inequality::SecondDiffNonpos => {
            let (d, s) = second_diff_scaled(ctx.phi()?, p("x")?, p("y")?, p("z")?)?;
            (if *ineq == Inequality::SecondDiffNonneg { d } else { -d }, s)
        }
        Inequality::Submodular | Inequality::Supermodular => {
            let f = ctx.phi()?;
            let (x, y) = (p("x")?, p("y")?);
            let (meet, join) = meet_join(f.domain(), x, y)?;
            let vals = [f.eval(x)?, f.eval(y)?, f.eval(&join)?, f.eval(&meet)?];
            let m = vals[0] + vals[1] - vals[2] - vals[3];
            (if *ineq == Inequality::Submodular { m } else { -m }, max_abs(&vals))
        }
        Inequality::AlternatingSign { order } => {
            let f = ctx.phi()?;
            let base = p("base")?;
            if *order == 0 {
                let v = f.eval(base)?;
                (v, v.abs())
            } else {
                let hs: Vec<Point> = (1..=*order)
                    .map(|i| p(&format!("h{i}")).cloned())
                    .collect::<Result<_>>()?;
                let (d, s) = kth_diff_scaled(f, &hs, base)?;
                (if order % 2 == 0 { d } else { -d }, s)
            }
        }
        Inequality::AlphaStrong { alpha } => {
            let (x, y) = (p("x")?, p("y")?);
            let (d, s) = second_diff_scaled(ctx.phi()?, x, y, p("z")?)?;
            let bound = alpha * x.value() * y.value();
            (d - bound, s.max(bound.abs()))
        }
        Inequality::LipschitzBox { lipschitz } => {
            let (x, y) = (p("x")?, p("y")?);
            let (d, s) = second_diff_scaled(ctx.phi()?, x, y, p("z")?)?;
            let bound = lipschitz * x.value() * y.value();
            (bound - d.abs(), s.max(bound.abs()))
        }
        Inequality::ExpRatioUpper | Inequality::ExpRatioLower => {
            let (x, y, z) = (p("x")?.value(), p("y")?.value(), p("z")?.value());
            if x < 0.0 || y < 0.0 || z < 0.0 {
                return Err(Error::domain("the double inequality is stated for x, y, z ≥ 0"));
            }
            let terms = [z.ln_1p(), (x + y + z).ln_1p(), (x + z).ln_1p(), (y + z).ln_1p()];
            let log_ratio = terms[0] + terms[1] - terms[2] - terms[3];
            let xy = x * y;
            let m = if *ineq == Inequality::ExpRatioUpper { xy - log_ratio } else { log_ratio + xy };
            (m, max_abs(&terms).max(xy))
        }
        Inequality::Chebyshev => {
            let (u, v, w) = (p("u")?.as_slice(), p("v")?.as_slice(), p("p")?.as_slice());
            let uv: Vec<f64> = u.iter().zip(v).map(|(a, b)| a * b).collect();
            let (eu, ev, euv) = (dot(u, w), dot(v, w), dot(&uv, w));
            (euv - eu * ev, max_abs(&[euv, eu * ev]))
        }
        Inequality::TomicWeyl { reverse } => {
            let f = ctx.outer()?;
            let sum = |s: &[f64]| -> Result<f64> { s.iter().map(|&t| f.eval(t)).sum() };
            let (sa, sb) = (sum(p("a")?.as_slice())?, sum(p("b")?.as_slice())?);
            (if *reverse { sa - sb } else { sb - sa }, max_abs(&[sa, sb]))
        }
        Inequality::Popoviciu { symmetrized, reversed } => {
            let (phi, f) = (ctx.phi()?, ctx.outer()?);
            let (x, y, z) = (p("x")?, p("y")?, p("z")?);
            let g = |q: &Point| -> Result<f64> { f.eval(phi.eval(q)?) };
            let xz = g(&x.add(z)?)?;
            let yz = g(&y.add(z)?)?;
            let xyz = g(&x.add(y)?.add(z)?)?;
            let (m, vals) = if *symmetrized {
                let (gx, gy, gz, xy) = (g(x)?, g(y)?, g(z)?, g(&x.add(y)?)?);
                let lhs = (gx + gy + gz) / 3.0 + xyz;
                let rhs = 2.0 / 3.0 * (xy + yz + xz);
                (lhs - rhs, vec![gx, gy, gz, xyz, xy, yz, xz])
            } else {
                let gz = g(z)?;
                (xyz + gz - xz - yz, vec![xyz, gz, xz, yz])
            };
            (if *reversed { -m } else { m }, max_abs(&vals))
        }
        Inequality::DetTraceInverse => {
            let u = p("U")?;
            let v = u.add(p("W")?)?;
            let (a, b) = (det_trace_inv(u)?, det_trace_inv(&v)?);
            (b - a, max_abs(&[a, b]))
        }
        Inequality::GaussianDetRepresentation { rel_tol } => {
            let a = p("A")?;
            let exact = crate::certify::gaussian_det_exact(a)?;
            let q = crate::certify::gaussian_det_quadrature(a)?;
            (rel_tol * exact - (q - exact).abs(), exact)
        }
    };
    if !out.0.is_finite() {
        return Err(Error::domain(format!("{} is not finite", ineq.expression())));
    }
    Ok(out)
}

pub(crate) fn points<const K: usize>(named: [(&str, Point); K]) -> Points {
    named.into_iter().map(|(n, p)| (n.to_string(), p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;

    #[test]
    fn exp_ratio_bounds_at_simple_points() {
        let ctx = Context {
            phi: None,
            outer: None,
            domain: &ConeSpec::NonnegOrthant(1),
        };
        let s = Point::scalar;
        // x = y = 0: the ratio is 1 and both bounds are tight
        let at = points([("x", s(0.0)), ("y", s(0.0)), ("z", s(3.0))]);
        assert_eq!(evaluate(&Inequality::ExpRatioUpper, &ctx, &at).unwrap().0, 0.0);
        assert_eq!(evaluate(&Inequality::ExpRatioLower, &ctx, &at).unwrap().0, 0.0);
        // z → ∞: ratio → 1, margins → xy
        let at = points([("x", s(0.5)), ("y", s(2.0)), ("z", s(1e6))]);
        for ineq in [Inequality::ExpRatioUpper, Inequality::ExpRatioLower] {
            let m = evaluate(&ineq, &ctx, &at).unwrap().0;
            assert!((m - 1.0).abs() < 1e-5, "{m}");
        }
    }

    #[test]
    fn chebyshev_margin() {
        let ctx = Context {
            phi: None,
            outer: None,
            domain: &ConeSpec::NonnegOrthant(2),
        };
        let v = |a: f64, b: f64| Point::vector(vec![a, b]);
        let at = points([("u", v(0.0, 1.0)), ("v", v(0.0, 1.0)), ("p", v(0.5, 0.5))]);
        assert_eq!(evaluate(&Inequality::Chebyshev, &ctx, &at).unwrap().0, 0.25);
    }

    #[test]
    fn det_trace_inverse_is_e_n_minus_1() {
        let ctx = Context {
            phi: None,
            outer: None,
            domain: &ConeSpec::PositiveDefinite(2),
        };
        let at = points([("U", Point::diag(&[2.0, 3.0])), ("W", Point::diag(&[1.0, 0.0]))]);
        // det·tr(inv) of diag(a,b) is a + b
        let (m, _) = evaluate(&Inequality::DetTraceInverse, &ctx, &at).unwrap();
        assert!((m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geomean_margin_at_the_printed_point() {
        let f = lookup("geomean2").unwrap().default_instance().unwrap().handle;
        let v = |a: f64, b: f64| Point::vector(vec![a, b]);
        let at = points([
            ("x", v(1.0 / 3.0, 1.0 / 3.0)),
            ("y", v(1.0 / 3.0, 2.0 / 3.0)),
            ("z", v(0.0, 0.0)),
        ]);
        let (m, _) = evaluate(&Inequality::SecondDiffNonpos, &Context::of(&f), &at).unwrap();
        assert!((m + 0.011_758_726_8).abs() < 1e-9, "{m}");
    }
}
