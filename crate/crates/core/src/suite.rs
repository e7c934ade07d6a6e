//! The acceptance suite: numbered criteria, each backed by the reports and
//! certificates that decide it.
//!
//! Verdicts and margins depend only on the seed. Wall-clock budgets are
//! applied only when [`SuiteOptions::timing`] is set, so that untimed runs
//! serialize byte-identically.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::catalog::{builtin_entries, instantiate, lookup, Instance, LabelStatus, ParamValue, Params, PropertyLabel};
use crate::certify::{
    certify_differential_monotone, certify_hessian_sign, certify_topkis, gaussian_detcert_check, Certificate,
    Lattice, Monotone, Sign,
};
use crate::check::{
    check, check_popoviciu, refute, CheckConfig, CheckReport, Context, Verdict,
    SCALE_LADDER,
};
use crate::cone::{sample_with, ConeSpec};
use crate::diff::second_diff;
use crate::error::Result;
use crate::linalg::{weyl_check, ScalarFunction};
use crate::point::Point;
use crate::rng::SeedStream;

/// Number of criteria, including the determinism check.
pub const CRITERIA: u8 = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Apply the runtime budgets and record wall times.
    pub timing: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 1, timing: false }
    }
}

/// One piece of evidence behind a criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    Check { label: String, report: CheckReport },
    Certificate { label: String, certificate: Certificate },
    Value { label: String, value: f64, expected: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub evidence: Vec<Evidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

/// Wall-clock budget of a criterion, if it has one.
pub fn budget(id: u8) -> Option<Duration> {
    match id {
        1 | 2 => Some(Duration::from_secs(1)),
        4 | 5 => Some(Duration::from_secs(20)),
        11 => Some(Duration::from_secs(60)),
        _ => None,
    }
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "geometric-mean counterexample",
        2 => "log-sum-exp counterexample value",
        3 => "squared-norm second-difference identity",
        4 => "scalar catalog",
        5 => "matrix catalog",
        6 => "Popoviciu inequality for det^p",
        7 => "complete monotonicity",
        8 => "certificates",
        9 => "Gaussian determinant representation",
        10 => "refuted candidates",
        11 => "determinism",
        _ => "unknown",
    }
}

/// Accumulates evidence and failures for one criterion.
struct Tally {
    evidence: Vec<Evidence>,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            evidence: Vec::new(),
            failures: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn check(&mut self, label: impl Into<String>, report: CheckReport) -> CheckReport {
        self.evidence.push(Evidence::Check {
            label: label.into(),
            report: report.clone(),
        });
        report
    }

    fn cert(&mut self, label: impl Into<String>, c: Certificate) -> Certificate {
        self.evidence.push(Evidence::Certificate {
            label: label.into(),
            certificate: c.clone(),
        });
        c
    }

    fn value(&mut self, label: impl Into<String>, value: f64, expected: f64) {
        self.evidence.push(Evidence::Value {
            label: label.into(),
            value,
            expected,
        });
    }
}

fn inst(id: &str, params: Params, dim: Option<usize>) -> Result<Instance> {
    instantiate(lookup(id)?, &params, dim)
}

fn default_inst(id: &str) -> Result<Instance> {
    inst(id, Params::new(), None)
}

/// A witness re-evaluates to its margin and the margin is beyond tolerance.
fn sound(r: &CheckReport, ctx: &Context<'_>) -> bool {
    let Some(w) = &r.witness else { return false };
    let again = match w.reevaluate(ctx) {
        Ok(v) => v,
        Err(_) => return false,
    };
    (again - w.margin).abs() <= 1e-12 * w.margin.abs().max(1e-300) && w.margin < -r.config.tolerance().slack(w.value_scale)
}

fn c1(seed: u64, t: &mut Tally) -> Result<()> {
    let f = default_inst("geomean2")?;
    let v = |a: f64, b: f64| Point::vector(vec![a, b]);
    let d = second_diff(&f.handle, &v(1.0 / 3.0, 1.0 / 3.0), &v(1.0 / 3.0, 2.0 / 3.0), &v(0.0, 0.0))?;
    let expected = 0.011_758_726_8;
    t.value("second difference at x=(1/3,1/3), y=(1/3,2/3), z=0", d, expected);
    t.require((d - expected).abs() <= 1e-9, format!("second difference {d} differs from {expected}"));
    let cfg = CheckConfig::default().with_seed(seed).with_trials(1000);
    let r = t.check("refute STRONG_SUBADD", refute(&f.handle, &PropertyLabel::StrongSubadd, &cfg)?);
    t.require(r.violated() && r.trials <= 1000, format!("no violation within {} trials", r.trials));
    Ok(())
}

fn c2(_: u64, t: &mut Tally) -> Result<()> {
    let f = default_inst("lse")?;
    let v = |a: f64, b: f64| Point::vector(vec![a, b]);
    let d = second_diff(&f.handle, &v(1.0, 0.0), &v(0.0, 1.0), &v(1.0, 1.0))?;
    let expected = 1.0 - ((1.0 + std::f64::consts::E) / 2.0).ln();
    t.value("second difference at x=(1,0), y=(0,1), z=(1,1)", d, expected);
    t.require(
        (d - expected).abs() <= 1e-12 && d > 0.379,
        format!("second difference is {d:.12}, expected {expected:.12}"),
    );
    Ok(())
}

fn c3(seed: u64, t: &mut Tally) -> Result<()> {
    for n in 2..=6 {
        let f = inst("sq-norm", Params::new(), Some(n))?;
        let cone = ConeSpec::NonnegOrthant(n);
        let mut worst = 0.0f64;
        for i in 0..1000 {
            let mut s = SeedStream::namespaced(seed, 3, (n as u64) << 20 | i).sampler();
            let (x, y, z) = (
                sample_with(&cone, &mut s, 1.0, 0.2),
                sample_with(&cone, &mut s, 1.0, 0.2),
                sample_with(&cone, &mut s, 1.0, 0.2),
            );
            let d = second_diff(&f.handle, &x, &y, &z)?;
            worst = worst.max((d - 2.0 * x.inner(&y)?).abs());
        }
        t.value(format!("N={n}: max |Δ² − 2⟨x,y⟩|"), worst, 0.0);
        t.require(worst <= 1e-9, format!("N={n}: deviation {worst:e}"));
    }
    Ok(())
}

fn asserted(f: &Instance, label: &PropertyLabel) -> bool {
    f.claims.iter().any(|c| c.label == *label && c.status == LabelStatus::Asserted)
}

fn c4(seed: u64, t: &mut Tally) -> Result<()> {
    let base = CheckConfig::default().with_seed(seed);
    let mut count = 0;
    for entry in builtin_entries() {
        let f = entry.default_instance()?;
        if f.handle.domain().flat_len() != 1 || f.handle.domain().is_matrix() {
            continue;
        }
        for label in [PropertyLabel::StrongSubadd, PropertyLabel::StrongSuperadd] {
            if !asserted(&f, &label) {
                continue;
            }
            count += 1;
            for scale in SCALE_LADDER {
                let cfg = base.clone().with_scale(scale);
                let r = t.check(format!("{} {label} scale {scale}", entry.id), check(&f.handle, &label, &cfg)?);
                t.require(!r.violated(), format!("{} {label} violated at scale {scale}", entry.id));
            }
        }
    }
    t.require(count >= 10, format!("only {count} scalar claims"));

    let f = default_inst("reciprocal")?;
    let r = t.check("reciprocal SUBADD", check(&f.handle, &PropertyLabel::Subadd, &base)?);
    t.require(!r.violated(), "reciprocal SUBADD violated");
    let r = t.check("reciprocal STRONG_SUBADD", check(&f.handle, &PropertyLabel::StrongSubadd, &base)?);
    t.require(sound(&r, &Context::of(&f.handle)), "reciprocal STRONG_SUBADD has no sound witness");
    Ok(())
}

fn c5(seed: u64, t: &mut Tally) -> Result<()> {
    let cfg = CheckConfig::default().with_seed(seed).with_trials(1000);
    let run = |t: &mut Tally, f: &Instance, label: PropertyLabel, name: String| -> Result<()> {
        let r = t.check(name.clone(), check(&f.handle, &label, &cfg)?);
        t.require(!r.violated(), format!("{name} violated"));
        Ok(())
    };
    for n in 1..=5 {
        let f = inst("det", Params::new(), Some(n))?;
        run(t, &f, PropertyLabel::StrongSuperadd, format!("det N={n} STRONG_SUPERADD"))?;
    }
    for (ps, label) in [
        ([0.3, 0.7, 1.0], PropertyLabel::StrongSubadd),
        ([1.0, 1.5, 2.0], PropertyLabel::StrongSuperadd),
    ] {
        for p in ps {
            let f = inst("trace-pow", Params::new().real_param("p", p), None)?;
            run(t, &f, label.clone(), format!("trace-pow p={p} {label}"))?;
        }
    }
    for n in 1..=4 {
        let f = inst("vn-entropy", Params::new(), Some(n))?;
        run(t, &f, PropertyLabel::StrongSubadd, format!("vn-entropy N={n} STRONG_SUBADD"))?;
    }
    let f = default_inst("logdet")?;
    run(t, &f, PropertyLabel::SecondDiffNonneg, "logdet SECOND_DIFF_NONNEG".into())?;
    // The direction log det actually satisfies; reported alongside.
    let r = t.check("logdet SECOND_DIFF_NONPOS", check(&f.handle, &PropertyLabel::SecondDiffNonpos, &cfg)?);
    if r.violated() {
        t.failures.push("logdet SECOND_DIFF_NONPOS violated".into());
    }

    let mut bad = 0;
    for n in 1..=4u64 {
        let cone = ConeSpec::Psd(n as usize);
        for i in 0..250 {
            let mut s = SeedStream::namespaced(seed, 5, n << 20 | i).sampler();
            let a = sample_with(&cone, &mut s, 1.0, 0.2);
            let g = sample_with(&cone, &mut s, 1.0, 0.2);
            let b = a.add(&g)?;
            if !weyl_check(&a, &b, 1e-9 * b.max_abs().max(1.0))? {
                bad += 1;
            }
        }
    }
    t.value("Weyl pairs A ≤ A+GGᵀ failing", bad as f64, 0.0);
    t.require(bad == 0, format!("{bad} of 1000 Weyl pairs fail"));
    Ok(())
}

fn c6(seed: u64, t: &mut Tally) -> Result<()> {
    let cfg = CheckConfig::default().with_seed(seed).with_trials(1000);
    for n in [2, 3] {
        let det = inst("det", Params::new(), Some(n))?;
        for p in [1.0, 1.5, 2.0] {
            let name = format!("det^{p} N={n}");
            let r = t.check(name.clone(), check_popoviciu(&det.handle, &ScalarFunction::power(p), false, &cfg)?);
            t.require(!r.violated(), format!("{name} violated"));
        }
    }
    Ok(())
}

fn c7(seed: u64, t: &mut Tally) -> Result<()> {
    let cm = PropertyLabel::CompletelyMonotone { order_cap: 5 };
    let cfg = CheckConfig::default().with_seed(seed).with_trials(500);
    for id in ["exp-neg-linear", "inv-power-product"] {
        let f = default_inst(id)?;
        let r = t.check(format!("{id} CM K=5"), check(&f.handle, &cm, &cfg)?);
        t.require(!r.violated(), format!("{id} CM violated"));
    }
    let f = inst("logistic-pow", Params::new().real_param("beta", 0.5).real_param("a", 1.0), None)?;
    let r = t.check("logistic-pow β=0.5 refute CM", refute(&f.handle, &cm, &cfg)?);
    let order_ok = matches!(
        r.witness.as_ref().map(|w| w.inequality),
        Some(crate::check::Inequality::AlternatingSign { order }) if order <= 5
    );
    t.require(
        order_ok && sound(&r, &Context::of(&f.handle)),
        "logistic-pow β=0.5 not refuted at order ≤ 5",
    );
    let cfg = CheckConfig::default().with_seed(seed);
    for beta in [1.0, 2.0] {
        let f = inst("elem-sym-4-shifted", Params::new().real_param("beta", beta), None)?;
        let r = t.check(
            format!("elem-sym-4-shifted β={beta} STRONG_SUPERADD"),
            check(&f.handle, &PropertyLabel::StrongSuperadd, &cfg)?,
        );
        t.require(!r.violated(), format!("elem-sym-4-shifted β={beta} violated"));
    }
    Ok(())
}

fn c8(seed: u64, t: &mut Tally) -> Result<()> {
    let cfg = CheckConfig::default().with_seed(seed);
    let points = 500;
    let mut certified: Vec<(String, Instance, PropertyLabel)> = Vec::new();

    for (id, sign) in [("shannon-entropy", Sign::Nonpos), ("sq-norm", Sign::Nonneg), ("lse", Sign::Nonpos)] {
        let f = default_inst(id)?;
        let c = t.cert(format!("{id} Hessian {sign:?}"), certify_hessian_sign(&f.handle, sign, points, &cfg)?);
        if id == "lse" {
            let diagonal = c
                .refusal_witness
                .as_ref()
                .and_then(|w| w.entry)
                .is_some_and(|[i, j]| i == j);
            t.require(!c.certified() && diagonal, "lse not refused on a diagonal entry");
        } else {
            t.require(c.certified(), format!("{id} not certified"));
            certified.push((id.into(), f, c.target));
        }
    }
    let f = default_inst("lse")?;
    let c = t.cert("lse Topkis submodular", certify_topkis(&f.handle, Lattice::Submodular, points, &cfg)?);
    t.require(c.certified(), "lse not Topkis-submodular");
    certified.push(("lse".into(), f, c.target));

    let lp = inst("lp-power-norm", Params::new().real_param("p", 2.0), Some(8))?;
    let det = inst("det", Params::new(), Some(3))?;
    for (id, f) in [("lp-power-norm", lp), ("det", det)] {
        let c = t.cert(
            format!("{id} differential nondecreasing"),
            certify_differential_monotone(&f.handle, Monotone::Nondecreasing, points, &cfg)?,
        );
        t.require(c.certified(), format!("{id} not certified"));
        certified.push((id.into(), f, c.target));
    }

    for (id, f, label) in &certified {
        let r = t.check(format!("{id} {label} coherence"), check(&f.handle, label, &cfg)?);
        t.require(!r.violated(), format!("{id}: certificate and check disagree on {label}"));
    }
    Ok(())
}

fn c9(seed: u64, t: &mut Tally) -> Result<()> {
    let cfg = CheckConfig::default().with_seed(seed).with_trials(20);
    for n in [1, 2] {
        let r = t.check(format!("N={n}"), gaussian_detcert_check(n, &cfg)?);
        t.require(r.verdict == Verdict::NoViolationFound, format!("N={n}: relative error above 1e-3"));
    }
    Ok(())
}

fn c10(seed: u64, t: &mut Tally) -> Result<()> {
    let cfg = CheckConfig::default().with_seed(seed);
    let jensen = inst(
        "jensen-gap",
        Params::new()
            .text_param("f", "neg-square")
            .with("lambda", ParamValue::Vector(vec![0.5, 0.5])),
        None,
    )?;
    let cases = [
        ("half-sq-plus-cos", default_inst("half-sq-plus-cos")?, PropertyLabel::Superadd),
        ("pairwise-diff-convex", default_inst("pairwise-diff-convex")?, PropertyLabel::StrongSubadd),
        ("jensen-gap", jensen, PropertyLabel::StrongSubadd),
    ];
    for (id, f, label) in cases {
        let r = t.check(format!("{id} refute {label}"), refute(&f.handle, &label, &cfg)?);
        t.require(
            sound(&r, &Context::of(&f.handle)) && r.trials <= 10_000,
            format!("{id}: no sound witness within 10000 trials"),
        );
        if id == "jensen-gap" {
            let m = r.witness.as_ref().map_or(0.0, |w| w.margin);
            t.require(m <= -0.4, format!("jensen-gap witness margin {m} is above −0.4"));
        }
    }
    Ok(())
}

/// Runs criterion `id` (1 to 10).
fn run_one(id: u8, seed: u64, timing: bool) -> CriterionOutcome {
    let start = Instant::now();
    let mut t = Tally::new();
    let run = match id {
        1 => c1,
        2 => c2,
        3 => c3,
        4 => c4,
        5 => c5,
        6 => c6,
        7 => c7,
        8 => c8,
        9 => c9,
        10 => c10,
        _ => unreachable!("criterion {id} is not a single check"),
    };
    if let Err(e) = run(seed, &mut t) {
        t.failures.push(format!("error: {e}"));
    }
    let elapsed = start.elapsed();
    finish(id, t, elapsed, timing)
}

fn finish(id: u8, mut t: Tally, elapsed: Duration, timing: bool) -> CriterionOutcome {
    if timing {
        if let Some(b) = budget(id).filter(|b| elapsed > *b) {
            t.failures.push(format!("took {:.2} s, budget {} s", elapsed.as_secs_f64(), b.as_secs()));
        }
    }
    let detail = if t.failures.is_empty() {
        format!("all {} checks passed", t.evidence.len())
    } else {
        t.failures.join("; ")
    };
    CriterionOutcome {
        id,
        title: title(id),
        pass: t.failures.is_empty(),
        detail,
        evidence: t.evidence,
        seconds: timing.then(|| elapsed.as_secs_f64()),
    }
}

/// Criteria 1 to 10, in order.
pub fn run_criteria(opts: &SuiteOptions) -> Vec<CriterionOutcome> {
    (1..CRITERIA).map(|id| run_one(id, opts.seed, opts.timing)).collect()
}

/// The full suite. Criterion 11 reruns criteria 1 to 10 and compares the
/// serialized evidence of both runs byte for byte; with timing on, the first pass
/// must also finish within its budget.
pub fn run_suite(opts: &SuiteOptions) -> Vec<CriterionOutcome> {
    let untimed = SuiteOptions { timing: false, ..*opts };
    let start = Instant::now();
    let mut out = run_criteria(opts);
    let first_pass = start.elapsed();

    let second = run_criteria(&untimed);
    let evidence = |v: &[CriterionOutcome]| {
        let all: Vec<&Vec<Evidence>> = v.iter().map(|c| &c.evidence).collect();
        serde_json::to_string(&all).unwrap_or_default()
    };
    let (a, b) = (evidence(&out), evidence(&second));
    let mut t = Tally::new();
    t.require(a == b, "second run serialized differently");
    let mut last = finish(CRITERIA, t, first_pass, opts.timing);
    last.seconds = opts.timing.then(|| start.elapsed().as_secs_f64());
    if last.pass {
        last.detail = format!("second run identical ({} bytes)", a.len());
    }
    out.push(last);
    out
}

/// Everything needed to replay a suite run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub seed: u64,
    pub version: &'static str,
    pub passed: bool,
    pub criteria: Vec<CriterionOutcome>,
    /// Present only for timed runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_seconds: Option<f64>,
}

impl RunManifest {
    /// Runs the suite and records it under `command`.
    pub fn run(command: Vec<String>, opts: &SuiteOptions) -> Self {
        let start = Instant::now();
        let criteria = run_suite(opts);
        RunManifest {
            command,
            seed: opts.seed,
            version: env!("CARGO_PKG_VERSION"),
            passed: criteria.iter().all(|c| c.pass),
            criteria,
            wall_seconds: opts.timing.then(|| start.elapsed().as_secs_f64()),
        }
    }
}
