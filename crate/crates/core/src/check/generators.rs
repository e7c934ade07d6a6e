//! Checks of classical inequalities built from a function on a cone: strong
//! convexity bounds, a box bound on second differences, weak majorization,
//! Chebyshev's sum inequality and a Popoviciu-type three-point inequality.

use serde::Serialize;

use super::ineq::{points, Context, Inequality, Points};
use super::{report, run_trials, CheckConfig, CheckReport, Outcome, Probe, Tightest};
use crate::cone::{comonotonic, sample, sample_with, ConeSpec};
use crate::diff::FunctionHandle;
use crate::error::{Error, Result};
use crate::linalg::ScalarFunction;
use crate::point::Point;
use crate::rng::{Sampler, SeedStream};
use crate::tol::Tolerance;

fn require_scalar(f: &FunctionHandle) -> Result<()> {
    let d = f.domain();
    if d.is_matrix() || d.flat_len() != 1 {
        return Err(Error::Capability(format!("`{}` is not a function of one real variable", f.label())));
    }
    Ok(())
}

fn triple_check(f: &FunctionHandle, ineq: Inequality, name: String, cfg: &CheckConfig) -> Result<CheckReport> {
    cfg.validate()?;
    require_scalar(f)?;
    let ctx = Context::of(f);
    let domain = f.domain();
    let draw = |_: u64, s: &mut Sampler| {
        let [x, y, z] = [0; 3].map(|_| sample_with(domain, s, cfg.scale, cfg.boundary_prob));
        vec![Probe {
            ineq,
            points: points([("x", x), ("y", y), ("z", z)]),
        }]
    };
    let out = run_trials(&ctx, cfg.tolerance(), cfg.trials, |i| SeedStream::new(cfg.seed, i), draw)?;
    report(name, cfg.clone(), &ctx, out, cfg.shrink)
}

/// `Δ_xΔ_y f(z) ≥ α·x·y` on random scalar triples.
pub fn check_alpha_strong(f: &FunctionHandle, alpha: f64, cfg: &CheckConfig) -> Result<CheckReport> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::param("alpha", "α > 0"));
    }
    triple_check(f, Inequality::AlphaStrong { alpha }, format!("ALPHA_STRONG(α={alpha})"), cfg)
}

/// `|Δ_xΔ_y f(z)| ≤ L·x·y` on random scalar triples.
pub fn check_lipschitz_box(f: &FunctionHandle, lipschitz: f64, cfg: &CheckConfig) -> Result<CheckReport> {
    if !(lipschitz > 0.0 && lipschitz.is_finite()) {
        return Err(Error::param("L", "L > 0"));
    }
    triple_check(f, Inequality::LipschitzBox { lipschitz }, format!("LIPSCHITZ_BOX(L={lipschitz})"), cfg)
}

/// `e^{−xy} ≤ (1+z)(1+x+y+z)/((1+x+z)(1+y+z)) ≤ e^{xy}` for `x, y, z ≥ 0`,
/// tested in log form.
pub fn check_exp_ratio_bounds(cfg: &CheckConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let domain = ConeSpec::NonnegOrthant(1);
    let ctx = Context {
        phi: None,
        outer: None,
        domain: &domain,
    };
    let draw = |_: u64, s: &mut Sampler| {
        let [x, y, z] = [0; 3].map(|_| sample_with(&domain, s, cfg.scale, cfg.boundary_prob));
        let pts = points([("x", x), ("y", y), ("z", z)]);
        vec![
            Probe {
                ineq: Inequality::ExpRatioUpper,
                points: pts.clone(),
            },
            Probe {
                ineq: Inequality::ExpRatioLower,
                points: pts,
            },
        ]
    };
    let out = run_trials(&ctx, cfg.tolerance(), cfg.trials, |i| SeedStream::new(cfg.seed, i), draw)?;
    report("EXP_RATIO_BOUNDS".into(), cfg.clone(), &ctx, out, cfg.shrink)
}

fn single(name: &str, ctx: &Context<'_>, tol: Tolerance, probe: Probe) -> Result<CheckReport> {
    let (margin, scale) = super::evaluate(&probe.ineq, ctx, &probe.points)?;
    let out = Outcome {
        trials: 1,
        skipped: 0,
        tightest: Some(Tightest {
            margin,
            scale,
            slack: tol.slack(scale),
            probe,
        }),
    };
    let config = CheckConfig {
        trials: 1,
        tol_abs: tol.abs,
        tol_rel: tol.rel,
        shrink: false,
        ..CheckConfig::default()
    };
    report(name.into(), config, ctx, out, false)
}

/// Chebyshev's sum inequality `⟨u,p⟩⟨v,p⟩ ≤ ⟨uv,p⟩` for comonotone `u, v`
/// and a probability vector `p`.
pub fn check_chebyshev(u: &Point, v: &Point, p: &Point, tol: Tolerance) -> Result<CheckReport> {
    if !comonotonic(u, v, 0.0)? {
        return Err(Error::Precondition("u and v are not comonotone".into()));
    }
    let w = p.as_slice();
    if p.is_matrix() || w.len() != u.dim() {
        return Err(Error::shape("p must be a vector as long as u"));
    }
    if w.iter().any(|&q| q < 0.0) || (w.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition("p is not a probability vector".into()));
    }
    let domain = ConeSpec::FullSpace(u.dim());
    let ctx = Context {
        phi: None,
        outer: None,
        domain: &domain,
    };
    let probe = Probe {
        ineq: Inequality::Chebyshev,
        points: points([("u", u.clone()), ("v", v.clone()), ("p", p.clone())]),
    };
    single("CHEBYSHEV", &ctx, tol, probe)
}

/// Which hypotheses of the weak-majorization inequality are in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeylDirection {
    /// `a` nonincreasing, `f` nondecreasing convex: `Σf(a) ≤ Σf(b)`.
    Forward,
    /// `b` nondecreasing, `f` nonincreasing convex: `Σf(a) ≥ Σf(b)`.
    Reverse,
}

/// Two sequences with `Σ_{k≤m} a_k ≤ Σ_{k≤m} b_k` for every `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MajorizationPair {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl MajorizationPair {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Self {
        MajorizationPair { a, b }
    }

    /// Checks the hypotheses for `direction`, naming the first failing index.
    pub fn validate(&self, direction: WeylDirection) -> Result<()> {
        if self.a.len() != self.b.len() || self.a.is_empty() {
            return Err(Error::shape("a and b must be nonempty and of equal length"));
        }
        let (mut sa, mut sb) = (0.0, 0.0);
        for (k, (x, y)) in self.a.iter().zip(&self.b).enumerate() {
            sa += x;
            sb += y;
            if sa > sb + 1e-12 * sa.abs().max(sb.abs()).max(1.0) {
                return Err(Error::Precondition(format!(
                    "partial sums fail at index {k}: Σa = {sa} > Σb = {sb}"
                )));
            }
        }
        let (seq, name, decreasing) = match direction {
            WeylDirection::Forward => (&self.a, "a", true),
            WeylDirection::Reverse => (&self.b, "b", false),
        };
        for k in 1..seq.len() {
            let ok = if decreasing { seq[k] <= seq[k - 1] } else { seq[k] >= seq[k - 1] };
            if !ok {
                let how = if decreasing { "nonincreasing" } else { "nondecreasing" };
                return Err(Error::Precondition(format!("{name} is not {how} at index {k}")));
            }
        }
        Ok(())
    }
}

/// Spot-checks monotonicity and convexity of `f` on `[lo, hi]` by
/// differences on a uniform grid.
fn spot_check_shape(f: &ScalarFunction, lo: f64, hi: f64, nondecreasing: bool) -> Result<()> {
    const GRID: usize = 64;
    if hi <= lo {
        return Ok(());
    }
    let h = (hi - lo) / GRID as f64;
    let vals: Vec<f64> = (0..=GRID).map(|i| f.eval(lo + h * i as f64)).collect::<Result<_>>()?;
    let tol = Tolerance::default();
    for i in 0..GRID {
        let d = vals[i + 1] - vals[i];
        let s = vals[i].abs().max(vals[i + 1].abs());
        let d = if nondecreasing { d } else { -d };
        if !tol.nonneg(d, s) {
            let how = if nondecreasing { "nondecreasing" } else { "nonincreasing" };
            return Err(Error::Precondition(format!(
                "`{}` is not {how} near {}",
                f.label(),
                lo + h * i as f64
            )));
        }
    }
    for i in 1..GRID {
        let d2 = vals[i + 1] - 2.0 * vals[i] + vals[i - 1];
        if !tol.nonneg(d2, vals[i].abs()) {
            return Err(Error::Precondition(format!(
                "`{}` is not convex near {}",
                f.label(),
                lo + h * i as f64
            )));
        }
    }
    Ok(())
}

/// Weak-majorization inequality for `pair` and `f`.
///
/// Forward: `Σf(b) − Σf(a) ≥ 0`. Reverse: `Σf(a) − Σf(b) ≥ 0`. The shape of
/// `f` on the data range is spot-checked before use.
pub fn tomic_weyl(
    pair: &MajorizationPair,
    f: &ScalarFunction,
    direction: WeylDirection,
    tol: Tolerance,
) -> Result<CheckReport> {
    pair.validate(direction)?;
    let all = pair.a.iter().chain(&pair.b);
    let lo = all.clone().fold(f64::INFINITY, |m, &v| m.min(v));
    let hi = all.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    spot_check_shape(f, lo, hi, direction == WeylDirection::Forward)?;
    let domain = ConeSpec::FullSpace(pair.a.len());
    let ctx = Context {
        phi: None,
        outer: Some(f),
        domain: &domain,
    };
    let probe = Probe {
        ineq: Inequality::TomicWeyl {
            reverse: direction == WeylDirection::Reverse,
        },
        points: points([
            ("a", Point::vector(pair.a.clone())),
            ("b", Point::vector(pair.b.clone())),
        ]),
    };
    single("TOMIC_WEYL", &ctx, tol, probe)
}

/// A random pair satisfying the hypotheses for `direction`: the sorted
/// sequence is `|g|·scale`, and the other one differs by increments with
/// nonnegative partial sums.
pub fn sample_majorization_pair(n: usize, direction: WeylDirection, s: &mut Sampler, scale: f64) -> MajorizationPair {
    let mut sorted: Vec<f64> = (0..n).map(|_| s.gaussian().abs() * scale).collect();
    let mut prefix = 0.0;
    let incr: Vec<f64> = (0..n)
        .map(|_| {
            let next = s.gaussian().abs() * scale * 0.5;
            let d = next - prefix;
            prefix = next;
            d
        })
        .collect();
    match direction {
        WeylDirection::Forward => {
            sorted.sort_by(|x, y| y.total_cmp(x));
            let b = sorted.iter().zip(&incr).map(|(a, d)| a + d).collect();
            MajorizationPair::new(sorted, b)
        }
        WeylDirection::Reverse => {
            sorted.sort_by(f64::total_cmp);
            let a = sorted.iter().zip(&incr).map(|(b, d)| b - d).collect();
            MajorizationPair::new(a, sorted)
        }
    }
}

/// Three-point inequalities for `f ∘ Φ` with `Φ` monotone, nonnegative and
/// strongly superadditive and `f` nondecreasing convex (or, with `reversed`,
/// nonincreasing concave, which flips both inequalities).
///
/// Each trial tests `f(Φ(x+y+z)) + f(Φ(z)) ≥ f(Φ(x+z)) + f(Φ(y+z))` and the
/// symmetrized form. Monotonicity of `Φ` is spot-checked on 100 ordered
/// pairs first.
pub fn check_popoviciu(
    phi: &FunctionHandle,
    f: &ScalarFunction,
    reversed: bool,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    cfg.validate()?;
    let domain = phi.domain();
    let closure = domain.closure();
    let tol = cfg.tolerance();
    for i in 0..100 {
        let mut s = SeedStream::namespaced(cfg.seed, 0xB0B, i).sampler();
        let u = sample(domain, &mut s, cfg.scale);
        let v = sample(&closure, &mut s, cfg.scale);
        let w = u.add(&v)?;
        let (a, b) = (phi.eval(&u)?, phi.eval(&w)?);
        if !tol.nonneg(b - a, a.abs().max(b.abs())) {
            return Err(Error::Precondition(format!(
                "Φ is not monotone: Φ(u) = {a} > Φ(u+v) = {b} at u = {:?}, v = {:?}",
                u.as_slice(),
                v.as_slice()
            )));
        }
    }
    let ctx = Context {
        phi: Some(phi),
        outer: Some(f),
        domain,
    };
    let draw = |_: u64, s: &mut Sampler| {
        let [x, y, z] = [0; 3].map(|_| sample_with(domain, s, cfg.scale, cfg.boundary_prob));
        let pts: Points = points([("x", x), ("y", y), ("z", z)]);
        [false, true]
            .into_iter()
            .map(|symmetrized| Probe {
                ineq: Inequality::Popoviciu { symmetrized, reversed },
                points: pts.clone(),
            })
            .collect()
    };
    let out = run_trials(&ctx, tol, cfg.trials, |i| SeedStream::new(cfg.seed, i), draw)?;
    report(format!("POPOVICIU[{}]", f.label()), cfg.clone(), &ctx, out, cfg.shrink)
}

/// `det(U)·tr(U⁻¹) ≤ det(V)·tr(V⁻¹)` for `U ≤ V` positive definite, with
/// `V = U + W` and `W` a random PSD matrix.
pub fn check_det_trace_inverse(n: usize, cfg: &CheckConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let domain = ConeSpec::PositiveDefinite(n);
    domain.validate()?;
    let psd = ConeSpec::Psd(n);
    let ctx = Context {
        phi: None,
        outer: None,
        domain: &domain,
    };
    let draw = |_: u64, s: &mut Sampler| {
        let u = sample_with(&domain, s, cfg.scale, cfg.boundary_prob);
        let w = sample_with(&psd, s, cfg.scale, cfg.boundary_prob);
        vec![Probe {
            ineq: Inequality::DetTraceInverse,
            points: points([("U", u), ("W", w)]),
        }]
    };
    let out = run_trials(&ctx, cfg.tolerance(), cfg.trials, |i| SeedStream::new(cfg.seed, i), draw)?;
    report("DET_TRACE_INVERSE".into(), cfg.clone(), &ctx, out, cfg.shrink)
}
