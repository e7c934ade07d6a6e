//! Randomized property checks with re-evaluable witnesses.
//!
//! A check draws independent trials, each from its own RNG stream
//! `(seed, trial index)`, evaluates one or more [`Inequality`] margins per
//! trial and keeps the tightest one. Trials run in parallel; the reduction is
//! sequential in trial order, so reports do not depend on the thread count.

mod generators;
pub(crate) mod ineq;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{PropertyLabel, DEFAULT_ORDER_CAP};
use crate::cone::{comonotonic, member, sample_comonotone_pair, sample_with, ConeSpec, BOUNDARY_PROB};
use crate::diff::{FunctionHandle, MAX_ORDER};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::rng::{Sampler, SeedStream};
use crate::tol::Tolerance;

pub use generators::{
    check_alpha_strong, check_chebyshev, check_det_trace_inverse, check_exp_ratio_bounds, check_lipschitz_box,
    check_popoviciu, sample_majorization_pair, tomic_weyl, MajorizationPair, WeylDirection,
};
pub use ineq::{evaluate, Context, Inequality, Points};

/// Largest share of trials that may be skipped for domain errors.
pub const MAX_SKIP_FRACTION: f64 = 0.1;
/// Cap on accepted shrink moves.
pub const SHRINK_STEPS: usize = 200;
/// Scales tried in turn by [`refute`].
pub const SCALE_LADDER: [f64; 3] = [0.1, 1.0, 10.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    pub trials: u64,
    pub scale: f64,
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub seed: u64,
    /// Highest difference order for complete-monotonicity checks, used when
    /// a property is named without an explicit cap.
    pub order_cap: usize,
    pub shrink: bool,
    pub boundary_prob: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        let tol = Tolerance::default();
        CheckConfig {
            trials: 10_000,
            scale: 1.0,
            tol_abs: tol.abs,
            tol_rel: tol.rel,
            seed: 1,
            order_cap: DEFAULT_ORDER_CAP,
            shrink: true,
            boundary_prob: BOUNDARY_PROB,
        }
    }
}

impl CheckConfig {
    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.tol_abs, self.tol_rel)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials", "trials ≥ 1"));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::param("scale", "scale > 0"));
        }
        if !(self.tol_abs >= 0.0 && self.tol_rel >= 0.0) {
            return Err(Error::param("tol", "tolerances must be ≥ 0"));
        }
        if self.order_cap == 0 || self.order_cap > MAX_ORDER {
            return Err(Error::param("order_cap", format!("order cap in 1..={MAX_ORDER}")));
        }
        if !(0.0..=1.0).contains(&self.boundary_prob) {
            return Err(Error::param("boundary_prob", "boundary probability in [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    NoViolationFound,
    ViolationFound,
}

/// A violated inequality at concrete points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub inequality: Inequality,
    pub expression: String,
    pub points: Points,
    pub margin: f64,
    /// Magnitude of the values behind `margin`, for the relative tolerance.
    pub value_scale: f64,
}

impl Witness {
    /// Recomputes the margin at the stored points.
    pub fn reevaluate(&self, ctx: &Context<'_>) -> Result<f64> {
        Ok(evaluate(&self.inequality, ctx, &self.points)?.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub property: String,
    pub verdict: Verdict,
    pub trials: u64,
    pub skipped: u64,
    /// Margin of the tightest trial, i.e. the one with the smallest
    /// `margin + slack`. Negative beyond the slack iff a violation was found.
    pub worst_margin: f64,
    pub witness: Option<Witness>,
    pub config: CheckConfig,
}

impl CheckReport {
    pub fn violated(&self) -> bool {
        self.verdict == Verdict::ViolationFound
    }
}

/// One inequality at concrete points.
#[derive(Debug, Clone)]
pub(crate) struct Probe {
    pub ineq: Inequality,
    pub points: Points,
}

#[derive(Debug, Clone)]
pub(crate) struct Tightest {
    pub margin: f64,
    pub scale: f64,
    pub slack: f64,
    pub probe: Probe,
}

impl Tightest {
    fn key(&self) -> f64 {
        self.margin + self.slack
    }

    fn violated(&self) -> bool {
        self.key() < 0.0
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Outcome {
    pub trials: u64,
    pub skipped: u64,
    pub tightest: Option<Tightest>,
}

/// Evaluates every probe of one trial; `None` when a domain error skips it.
fn run_trial(ctx: &Context<'_>, tol: Tolerance, probes: Vec<Probe>) -> Result<Option<Tightest>> {
    let mut best: Option<Tightest> = None;
    for probe in probes {
        match evaluate(&probe.ineq, ctx, &probe.points) {
            Ok((margin, scale)) => {
                let t = Tightest {
                    margin,
                    scale,
                    slack: tol.slack(scale),
                    probe,
                };
                if best.as_ref().map_or(true, |b| t.key() < b.key()) {
                    best = Some(t);
                }
            }
            Err(e) if e.is_domain() => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(best)
}

/// Runs `n` trials in parallel and reduces them in index order: the
/// smallest `margin + slack` wins, the lowest index breaks ties.
pub(crate) fn run_trials<S, D>(ctx: &Context<'_>, tol: Tolerance, n: u64, stream: S, draw: D) -> Result<Outcome>
where
    S: Fn(u64) -> SeedStream + Sync,
    D: Fn(u64, &mut Sampler) -> Vec<Probe> + Sync,
{
    let results: Vec<Result<Option<Tightest>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut s = stream(i).sampler();
            run_trial(ctx, tol, draw(i, &mut s))
        })
        .collect();
    let mut out = Outcome {
        trials: n,
        ..Outcome::default()
    };
    for r in results {
        match r? {
            None => out.skipped += 1,
            Some(t) => {
                if out.tightest.as_ref().map_or(true, |b| t.key() < b.key()) {
                    out.tightest = Some(t);
                }
            }
        }
    }
    if out.skipped as f64 > MAX_SKIP_FRACTION * n as f64 {
        return Err(Error::Numeric(format!(
            "{} of {} trials left the domain (budget {:.0}%)",
            out.skipped,
            n,
            100.0 * MAX_SKIP_FRACTION
        )));
    }
    Ok(out)
}

/// Probes evaluated one per trial, without a skip budget. Used for
/// deterministic scans.
fn run_probes(ctx: &Context<'_>, tol: Tolerance, probes: Vec<Probe>) -> Result<Outcome> {
    let n = probes.len() as u64;
    let results: Vec<Result<Option<Tightest>>> =
        probes.into_par_iter().map(|p| run_trial(ctx, tol, vec![p])).collect();
    let mut out = Outcome {
        trials: n,
        ..Outcome::default()
    };
    for r in results {
        match r? {
            None => out.skipped += 1,
            Some(t) => {
                if out.tightest.as_ref().map_or(true, |b| t.key() < b.key()) {
                    out.tightest = Some(t);
                }
            }
        }
    }
    Ok(out)
}

/// Shrinks a violating probe toward small, round points.
///
/// A move either snaps one coordinate to 0 or 1 or halves it (matrix points
/// move as a whole: snap to 0 or halve). It is kept iff every point stays in
/// the cone, the inequality is still violated beyond the slack, and the
/// margin stays at or below half the starting margin. At most
/// [`SHRINK_STEPS`] moves are kept.
pub(crate) fn shrink(ctx: &Context<'_>, tol: Tolerance, start: Tightest) -> Tightest {
    let threshold = 0.5 * start.margin;
    let closure = ctx.domain.closure();
    let ineq = start.probe.ineq;
    let anchors = ineq.anchors();
    let accept = |pts: &Points| -> Option<(f64, f64)> {
        for (name, p) in pts {
            let cone = if anchors.contains(&name.as_str()) { ctx.domain } else { &closure };
            if !member(cone, p, 0.0).unwrap_or(false) {
                return None;
            }
        }
        let (m, s) = evaluate(&ineq, ctx, pts).ok()?;
        (m < -tol.slack(s) && m <= threshold).then_some((m, s))
    };

    let names: Vec<String> = start.probe.points.keys().cloned().collect();
    let mut cur = start;
    let moves = std::cell::Cell::new(0usize);
    let mut attempt = |cur: &mut Tightest, name: &str, p: Point| -> bool {
        if moves.get() >= SHRINK_STEPS || cur.probe.points.get(name) == Some(&p) {
            return false;
        }
        let mut pts = cur.probe.points.clone();
        pts.insert(name.to_string(), p);
        match accept(&pts) {
            Some((margin, scale)) => {
                cur.probe.points = pts;
                cur.margin = margin;
                cur.scale = scale;
                cur.slack = tol.slack(scale);
                moves.set(moves.get() + 1);
                true
            }
            None => false,
        }
    };

    let snap = |cur: &mut Tightest, attempt: &mut dyn FnMut(&mut Tightest, &str, Point) -> bool| {
        for name in &names {
            let p = cur.probe.points[name].clone();
            if p.is_matrix() {
                attempt(cur, name, Point::zero_matrix(p.dim()));
                continue;
            }
            for j in 0..p.dim() {
                for target in [0.0, 1.0] {
                    let mut v = cur.probe.points[name].as_slice().to_vec();
                    v[j] = target;
                    if attempt(cur, name, Point::vector(v)) {
                        break;
                    }
                }
            }
        }
    };

    snap(&mut cur, &mut attempt);
    loop {
        let mut changed = false;
        for name in &names {
            let p = cur.probe.points[name].clone();
            if p.is_matrix() {
                changed |= attempt(&mut cur, name, p.scale(0.5));
                continue;
            }
            for j in 0..p.dim() {
                let mut v = cur.probe.points[name].as_slice().to_vec();
                if v[j] == 0.0 {
                    continue;
                }
                v[j] *= 0.5;
                changed |= attempt(&mut cur, name, Point::vector(v));
            }
        }
        if !changed || moves.get() >= SHRINK_STEPS {
            break;
        }
    }
    snap(&mut cur, &mut attempt);
    cur
}

pub(crate) fn report(
    property: String,
    config: CheckConfig,
    ctx: &Context<'_>,
    out: Outcome,
    shrink_witness: bool,
) -> Result<CheckReport> {
    let Some(t) = out.tightest else {
        return Err(Error::Numeric("every trial left the domain".into()));
    };
    let worst_margin = t.margin;
    let witness = t.violated().then(|| {
        let t = if shrink_witness {
            shrink(ctx, config.tolerance(), t)
        } else {
            t
        };
        Witness {
            inequality: t.probe.ineq,
            expression: t.probe.ineq.expression(),
            points: t.probe.points,
            margin: t.margin,
            value_scale: t.scale,
        }
    });
    Ok(CheckReport {
        property,
        verdict: if witness.is_some() {
            Verdict::ViolationFound
        } else {
            Verdict::NoViolationFound
        },
        trials: out.trials,
        skipped: out.skipped,
        worst_margin,
        witness,
        config,
    })
}

fn origin_inequality(property: &PropertyLabel) -> Option<Inequality> {
    match property {
        PropertyLabel::Subadd | PropertyLabel::StrongSubadd => Some(Inequality::OriginNonneg),
        PropertyLabel::Superadd | PropertyLabel::StrongSuperadd => Some(Inequality::OriginNonpos),
        _ => None,
    }
}

fn pair_inequalities(property: &PropertyLabel) -> &'static [Inequality] {
    match property {
        PropertyLabel::Subadd => &[Inequality::Subadd],
        PropertyLabel::Superadd => &[Inequality::Superadd],
        PropertyLabel::StrongSubadd => &[Inequality::Subadd, Inequality::SecondDiffNonpos],
        PropertyLabel::StrongSuperadd => &[Inequality::Superadd, Inequality::SecondDiffNonneg],
        PropertyLabel::SecondDiffNonneg | PropertyLabel::ComonotoneStrongSuperadd => {
            &[Inequality::SecondDiffNonneg]
        }
        PropertyLabel::SecondDiffNonpos => &[Inequality::SecondDiffNonpos],
        PropertyLabel::Submodular => &[Inequality::Submodular],
        PropertyLabel::Supermodular => &[Inequality::Supermodular],
        PropertyLabel::CompletelyMonotone { .. } => &[],
    }
}

fn check_applicable(domain: &ConeSpec, property: &PropertyLabel) -> Result<()> {
    match property {
        PropertyLabel::Submodular | PropertyLabel::Supermodular if !domain.supports_lattice() => Err(
            Error::Capability(format!("{property} needs lattice operations, which {} lacks", domain.family())),
        ),
        PropertyLabel::ComonotoneStrongSuperadd
            if !matches!(domain, ConeSpec::NonnegOrthant(_) | ConeSpec::GridLp { .. }) =>
        {
            Err(Error::Capability(format!("{property} is defined on closed orthants only")))
        }
        _ => Ok(()),
    }
}

/// Random probes for one trial of `property`.
fn draw_probes(property: &PropertyLabel, domain: &ConeSpec, s: &mut Sampler, scale: f64, bp: f64) -> Vec<Probe> {
    if let PropertyLabel::CompletelyMonotone { order_cap } = property {
        let closure = domain.closure();
        let base = sample_with(domain, s, scale, bp);
        let hs: Vec<Point> = (0..*order_cap).map(|_| sample_with(&closure, s, scale, bp)).collect();
        return (0..=*order_cap)
            .map(|k| {
                let mut points = Points::new();
                points.insert("base".into(), base.clone());
                for (i, h) in hs.iter().take(k).enumerate() {
                    points.insert(format!("h{}", i + 1), h.clone());
                }
                Probe {
                    ineq: Inequality::AlternatingSign { order: k },
                    points,
                }
            })
            .collect();
    }
    let (x, y) = if *property == PropertyLabel::ComonotoneStrongSuperadd {
        sample_comonotone_pair(domain.flat_len(), s, scale)
    } else {
        (sample_with(domain, s, scale, bp), sample_with(domain, s, scale, bp))
    };
    let z = sample_with(domain, s, scale, bp);
    pair_inequalities(property)
        .iter()
        .map(|ineq| Probe {
            ineq: *ineq,
            points: match ineq {
                Inequality::SecondDiffNonneg | Inequality::SecondDiffNonpos => {
                    ineq::points([("x", x.clone()), ("y", y.clone()), ("z", z.clone())])
                }
                _ => ineq::points([("x", x.clone()), ("y", y.clone())]),
            },
        })
        .collect()
}

fn check_in_namespace(f: &FunctionHandle, property: &PropertyLabel, cfg: &CheckConfig, namespace: u64) -> Result<CheckReport> {
    cfg.validate()?;
    let domain = f.domain();
    check_applicable(domain, property)?;
    let mut config = cfg.clone();
    if let PropertyLabel::CompletelyMonotone { order_cap } = property {
        config.order_cap = *order_cap;
    }
    let ctx = Context::of(f);
    let origin = origin_inequality(property).filter(|_| domain.contains_origin());
    let stream = |i: u64| {
        if namespace == 0 {
            SeedStream::new(cfg.seed, i)
        } else {
            SeedStream::namespaced(cfg.seed, namespace, i)
        }
    };
    let draw = |i: u64, s: &mut Sampler| match origin {
        Some(ineq) if i == 0 => vec![Probe {
            ineq,
            points: Points::new(),
        }],
        _ => draw_probes(property, domain, s, cfg.scale, cfg.boundary_prob),
    };
    let out = run_trials(&ctx, cfg.tolerance(), cfg.trials, stream, draw)?;
    // shrinking a comonotone witness could break comonotonicity
    let shrink = cfg.shrink && *property != PropertyLabel::ComonotoneStrongSuperadd;
    report(property.to_string(), config, &ctx, out, shrink)
}

/// Randomized check of `property` for `f`.
///
/// When the domain contains the origin, trial 0 tests the sign of `Φ(0)`
/// that (sub/super)additivity forces. A pass is reported as
/// [`Verdict::NoViolationFound`]; sampling cannot prove the property.
pub fn check(f: &FunctionHandle, property: &PropertyLabel, cfg: &CheckConfig) -> Result<CheckReport> {
    check_in_namespace(f, property, cfg, 0)
}

/// Simple points of the cone: the origin (if it belongs), the basis rays
/// and their sum, optionally restricted to the domain itself.
fn simple_points(domain: &ConeSpec, in_domain: bool) -> Vec<Point> {
    let target = if in_domain { domain.clone() } else { domain.closure() };
    let mut rays = domain.basis_rays();
    rays.truncate(18);
    let mut v = vec![domain.zero()];
    v.extend(rays);
    v.push(domain.unit());
    v.into_iter().filter(|p| member(&target, p, 0.0).unwrap_or(false)).collect()
}

const CM_BASES: [f64; 7] = [0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0];
const CM_STEPS: [f64; 8] = [0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0, 2.0];

/// A deterministic scan over simple points. For complete monotonicity it
/// walks bases `t·1` and repeated steps `h·d` along the unit vector and each
/// basis ray, for every order up to the cap.
fn structured_probes(property: &PropertyLabel, domain: &ConeSpec) -> Vec<Probe> {
    let mut out = Vec::new();
    if let PropertyLabel::CompletelyMonotone { order_cap } = property {
        let unit = domain.unit();
        let mut dirs = vec![unit.clone()];
        dirs.extend(domain.basis_rays());
        for t in CM_BASES {
            let mut base = unit.scale(t);
            if !member(domain, &base, 0.0).unwrap_or(false) {
                base = unit.scale(1e-3);
            }
            out.push(Probe {
                ineq: Inequality::AlternatingSign { order: 0 },
                points: ineq::points([("base", base.clone())]),
            });
            for d in &dirs {
                for h in CM_STEPS {
                    for k in 1..=*order_cap {
                        let mut points = ineq::points([("base", base.clone())]);
                        for i in 1..=k {
                            points.insert(format!("h{i}"), d.scale(h));
                        }
                        out.push(Probe {
                            ineq: Inequality::AlternatingSign { order: k },
                            points,
                        });
                    }
                }
            }
        }
        return out;
    }
    let anchors = simple_points(domain, true);
    let steps = simple_points(domain, false);
    if let Some(ineq) = origin_inequality(property).filter(|_| domain.contains_origin()) {
        out.push(Probe {
            ineq,
            points: Points::new(),
        });
    }
    for ineq in pair_inequalities(property) {
        match ineq {
            Inequality::SecondDiffNonneg | Inequality::SecondDiffNonpos => {
                for x in &steps {
                    for y in &steps {
                        if *property == PropertyLabel::ComonotoneStrongSuperadd
                            && !comonotonic(x, y, 0.0).unwrap_or(false)
                        {
                            continue;
                        }
                        for z in &anchors {
                            out.push(Probe {
                                ineq: *ineq,
                                points: ineq::points([("x", x.clone()), ("y", y.clone()), ("z", z.clone())]),
                            });
                        }
                    }
                }
            }
            _ => {
                for x in &anchors {
                    for y in &anchors {
                        out.push(Probe {
                            ineq: *ineq,
                            points: ineq::points([("x", x.clone()), ("y", y.clone())]),
                        });
                    }
                }
            }
        }
    }
    out
}

/// Searches for a counterexample to `property`.
///
/// First scans simple points (origin, basis rays, their sum; for complete
/// monotonicity a grid of bases, steps and orders). If that finds nothing it
/// runs randomized checks at each scale of [`SCALE_LADDER`] and once more at
/// scale 1 with boundary probability ½, stopping at the first violation.
/// Scan witnesses are already simple and are not shrunk.
pub fn refute(f: &FunctionHandle, property: &PropertyLabel, cfg: &CheckConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let domain = f.domain();
    check_applicable(domain, property)?;
    let ctx = Context::of(f);
    let mut config = cfg.clone();
    if let PropertyLabel::CompletelyMonotone { order_cap } = property {
        config.order_cap = *order_cap;
    }
    let scan = run_probes(&ctx, cfg.tolerance(), structured_probes(property, domain))?;
    let mut trials = scan.trials;
    if scan.tightest.as_ref().is_some_and(Tightest::violated) {
        return report(property.to_string(), config, &ctx, scan, false);
    }
    let rungs = SCALE_LADDER
        .iter()
        .map(|&s| (s, cfg.boundary_prob))
        .chain(std::iter::once((1.0, 0.5)));
    let mut last: Option<CheckReport> = None;
    for (k, (scale, bp)) in rungs.enumerate() {
        let rung = CheckConfig {
            scale: scale * cfg.scale,
            boundary_prob: bp,
            ..config.clone()
        };
        let mut r = check_in_namespace(f, property, &rung, k as u64 + 1)?;
        trials += r.trials;
        r.config = config.clone();
        r.trials = trials;
        if r.violated() {
            return Ok(r);
        }
        if last.as_ref().map_or(true, |l| r.worst_margin < l.worst_margin) {
            last = Some(r);
        }
    }
    let mut r = last.expect("the ladder has rungs");
    r.trials = trials;
    Ok(r)
}

#[cfg(test)]
mod tests;
