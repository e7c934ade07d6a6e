use super::*;
use crate::catalog::{instantiate, lookup, Instance, ParamValue, Params};
use crate::cone::sample;
use crate::diff::second_diff;
use crate::linalg::{matmul, Interval, ScalarFunction};

fn inst(id: &str) -> Instance {
    lookup(id).unwrap().default_instance().unwrap()
}

fn inst_with(id: &str, params: Params, dim: Option<usize>) -> Instance {
    instantiate(lookup(id).unwrap(), &params, dim).unwrap()
}

fn cfg(trials: u64) -> CheckConfig {
    CheckConfig::default().with_trials(trials)
}

fn scalar_handle(label: &str, rule: impl Fn(f64) -> f64 + Send + Sync + 'static) -> FunctionHandle {
    FunctionHandle::from_scalar(ScalarFunction::new(label, Interval::NONNEG, rule), ConeSpec::NonnegOrthant(1))
}

/// Every violation must carry a witness that re-evaluates to its margin.
fn assert_sound(r: &CheckReport, ctx: &Context<'_>) {
    assert_eq!(r.violated(), r.witness.is_some());
    let slack = r.config.tolerance();
    if let Some(w) = &r.witness {
        let again = w.reevaluate(ctx).unwrap();
        assert!((again - w.margin).abs() <= 1e-12 * w.margin.abs().max(1e-300), "{again} vs {}", w.margin);
        assert!(w.margin < -slack.slack(w.value_scale));
    }
}

fn run(id: &str, property: PropertyLabel, c: &CheckConfig) -> CheckReport {
    let f = inst(id);
    let r = check(&f.handle, &property, c).unwrap();
    assert_sound(&r, &Context::of(&f.handle));
    r
}

#[test]
fn log1p_has_no_violation() {
    let r = run("log1p", PropertyLabel::StrongSubadd, &CheckConfig::default());
    assert_eq!(r.verdict, Verdict::NoViolationFound);
    assert_eq!(r.trials, 10_000);
}

#[test]
fn geomean_and_lse_are_not_strongly_subadditive() {
    for id in ["geomean2", "lse"] {
        let r = run(id, PropertyLabel::StrongSubadd, &cfg(2000));
        assert!(r.violated(), "{id}");
    }
}

#[test]
fn lse_is_submodular_and_comonotone_superadditive() {
    let r = run("lse", PropertyLabel::Submodular, &cfg(2000));
    assert!(!r.violated());
    for n in 2..=6 {
        let f = inst_with("lse", Params::new(), Some(n));
        let r = check(&f.handle, &PropertyLabel::ComonotoneStrongSuperadd, &cfg(1000)).unwrap();
        assert!(!r.violated(), "N = {n}: {:?}", r.witness);
    }
}

#[test]
fn exp_neg_linear_is_completely_monotone() {
    let r = run("exp-neg-linear", PropertyLabel::completely_monotone(), &cfg(500));
    assert!(!r.violated());
    assert_eq!(r.property, "COMPLETELY_MONOTONE(K=5)");
}

#[test]
fn origin_sign_is_trial_zero() {
    let f = inst("half-sq-plus-cos");
    let r = check(&f.handle, &PropertyLabel::Superadd, &cfg(1)).unwrap();
    let w = r.witness.unwrap();
    assert_eq!(w.inequality, Inequality::OriginNonpos);
    assert_eq!(w.margin, -1.0);
}

#[test]
fn lattice_capability_is_enforced() {
    let f = inst("det");
    assert!(matches!(
        check(&f.handle, &PropertyLabel::Submodular, &cfg(10)),
        Err(Error::Capability(_))
    ));
}

#[test]
fn reports_are_deterministic() {
    let f = inst("geomean2");
    let a = serde_json::to_string(&check(&f.handle, &PropertyLabel::StrongSubadd, &cfg(500)).unwrap()).unwrap();
    let b = serde_json::to_string(&check(&f.handle, &PropertyLabel::StrongSubadd, &cfg(500)).unwrap()).unwrap();
    assert_eq!(a, b);
    let c = serde_json::to_string(&check(&f.handle, &PropertyLabel::StrongSubadd, &cfg(500).with_seed(2)).unwrap())
        .unwrap();
    assert_ne!(a, c);
}

#[test]
fn skip_budget() {
    // defined only below 0.1: nearly every sample leaves the domain
    let f = FunctionHandle::new("narrow", ConeSpec::NonnegOrthant(1), |x| {
        if x.value() < 0.1 {
            Ok(x.value())
        } else {
            Err(Error::domain("outside [0, 0.1)"))
        }
    });
    assert!(matches!(check(&f, &PropertyLabel::Subadd, &cfg(200)), Err(Error::Numeric(_))));
}

#[test]
fn shrunk_witness_stays_violating() {
    let f = inst("reciprocal");
    let r = check(&f.handle, &PropertyLabel::StrongSubadd, &cfg(1000)).unwrap();
    assert!(r.violated());
    let w = r.witness.clone().unwrap();
    assert!(w.margin <= 0.5 * r.worst_margin);
    assert_sound(&r, &Context::of(&f.handle));
}

#[test]
fn strongly_subadditive_scalars_pass_with_random_parameters() {
    let mut s = SeedStream::new(99, 0).sampler();
    for k in 0..20 {
        let (id, params) = match k % 3 {
            0 => (
                "affine-power",
                Params::new()
                    .real_param("m", s.gaussian())
                    .real_param("n", s.uniform())
                    .real_param("p", 2.0 * s.uniform())
                    .real_param("alpha", s.uniform()),
            ),
            1 => ("one-minus-sqrt1p", Params::new().real_param("alpha", 0.01 + 3.0 * s.uniform())),
            _ => ("neg-xlogx-shift", Params::new().real_param("alpha", s.uniform())),
        };
        let f = inst_with(id, params.clone(), None);
        let r = check(&f.handle, &PropertyLabel::StrongSubadd, &cfg(2000)).unwrap();
        assert!(!r.violated(), "{id} {params:?}: {:?}", r.witness);
    }
}

#[test]
fn det_is_strongly_superadditive() {
    for n in 1..=5 {
        let f = inst_with("det", Params::new(), Some(n));
        let r = check(&f.handle, &PropertyLabel::StrongSuperadd, &cfg(1000)).unwrap();
        assert!(!r.violated(), "N = {n}");
    }
}

#[test]
fn trace_square_second_difference() {
    let f = inst_with("trace-pow", Params::new().real_param("p", 2.0), Some(3));
    let mut s = SeedStream::new(5, 0).sampler();
    for _ in 0..200 {
        let [x, y, z] = [0; 3].map(|_| sample(f.domain(), &mut s, 1.0));
        let d = second_diff(&f.handle, &x, &y, &z).unwrap();
        let ab: f64 = (0..3).map(|i| matmul(3, x.as_slice(), y.as_slice())[i * 4]).sum();
        assert!((d - 2.0 * ab).abs() < 1e-8);
    }
}

#[test]
fn logdet_second_differences_are_nonpositive() {
    let f = inst("logdet");
    let ctx = Context::of(&f.handle);
    let nonpos = check(&f.handle, &PropertyLabel::SecondDiffNonpos, &cfg(1000)).unwrap();
    assert!(!nonpos.violated());
    for p in [PropertyLabel::SecondDiffNonneg, PropertyLabel::Subadd, PropertyLabel::Superadd] {
        let r = refute(&f.handle, &p, &cfg(1000)).unwrap();
        assert!(r.violated(), "{p}");
        assert_sound(&r, &ctx);
    }
}

#[test]
fn refute_examples() {
    let f = inst("geomean2");
    let r = refute(&f.handle, &PropertyLabel::StrongSubadd, &cfg(1000)).unwrap();
    assert!(r.violated() && r.trials <= 1000);
    assert_sound(&r, &Context::of(&f.handle));

    let f = inst_with(
        "jensen-gap",
        Params::new()
            .text_param("f", "neg-square")
            .with("lambda", ParamValue::Vector(vec![0.5, 0.5])),
        None,
    );
    let r = refute(&f.handle, &PropertyLabel::StrongSubadd, &cfg(10_000)).unwrap();
    let w = r.witness.clone().unwrap();
    assert!((w.margin + 0.5).abs() < 1e-12, "{w:?}");
    assert_sound(&r, &Context::of(&f.handle));

    let f = inst_with("logistic-pow", Params::new().real_param("beta", 0.5), None);
    let r = refute(&f.handle, &PropertyLabel::completely_monotone(), &cfg(1000)).unwrap();
    let w = r.witness.clone().unwrap();
    assert!(matches!(w.inequality, Inequality::AlternatingSign { order } if order <= 5));
    assert_sound(&r, &Context::of(&f.handle));

    let f = inst_with("logistic-pow", Params::new().real_param("beta", 2.0), None);
    let r = refute(&f.handle, &PropertyLabel::completely_monotone(), &cfg(500)).unwrap();
    assert!(!r.violated());
}

#[test]
fn alpha_strong_examples() {
    let sq = scalar_handle("square", |x| x * x);
    assert!(!check_alpha_strong(&sq, 2.0, &cfg(2000)).unwrap().violated());
    // ∫₀ˣ∫₀ˢ c = c·x²/2
    let c = 0.7;
    let dbl = scalar_handle("double-integral", move |x| 0.5 * c * x * x);
    assert!(!check_alpha_strong(&dbl, c, &cfg(2000)).unwrap().violated());
    let id = scalar_handle("identity", |x| x);
    let r = check_alpha_strong(&id, 1.0, &cfg(2000)).unwrap();
    assert!(r.violated());
    assert_sound(&r, &Context::of(&id));
    assert!(check_alpha_strong(&id, -1.0, &cfg(10)).is_err());
}

#[test]
fn lipschitz_box_examples() {
    let half_sq = scalar_handle("half-square", |x| 0.5 * x * x);
    assert!(!check_lipschitz_box(&half_sq, 1.0, &cfg(2000)).unwrap().violated());
    let sin = scalar_handle("sin", f64::sin);
    assert!(!check_lipschitz_box(&sin, 1.0, &cfg(2000)).unwrap().violated());
    let cube = scalar_handle("cube", |x| x * x * x);
    let r = check_lipschitz_box(&cube, 1.0, &cfg(2000)).unwrap();
    assert!(r.violated());
    assert_sound(&r, &Context::of(&cube));
}

#[test]
fn exp_ratio_bounds_hold() {
    for scale in SCALE_LADDER {
        let r = check_exp_ratio_bounds(&cfg(5000).with_scale(scale)).unwrap();
        assert!(!r.violated());
    }
}

#[test]
fn chebyshev_examples() {
    let v = |a: &[f64]| Point::vector(a.to_vec());
    let tol = Tolerance::default();
    let r = check_chebyshev(&v(&[0.0, 1.0]), &v(&[0.0, 1.0]), &v(&[0.5, 0.5]), tol).unwrap();
    assert_eq!(r.worst_margin, 0.25);
    let r = check_chebyshev(&v(&[2.0, 2.0]), &v(&[0.0, 5.0]), &v(&[0.3, 0.7]), tol).unwrap();
    assert!(r.worst_margin.abs() < 1e-15);
    assert!(matches!(
        check_chebyshev(&v(&[0.0, 1.0]), &v(&[1.0, 0.0]), &v(&[0.5, 0.5]), tol),
        Err(Error::Precondition(_))
    ));
    let mut s = SeedStream::new(3, 0).sampler();
    for _ in 0..1000 {
        let n = 2 + s.index(5);
        let (u, w) = sample_comonotone_pair(n, &mut s, 1.0);
        let raw: Vec<f64> = (0..n).map(|_| s.uniform()).collect();
        let total: f64 = raw.iter().sum();
        let mut p: Vec<f64> = raw.iter().map(|r| r / total).collect();
        let rest: f64 = p[1..].iter().sum();
        p[0] = 1.0 - rest;
        if p[0] < 0.0 {
            continue;
        }
        assert!(!check_chebyshev(&u, &w, &Point::vector(p), tol).unwrap().violated());
    }
}

#[test]
fn tomic_weyl_examples() {
    let tol = Tolerance::default();
    let sq = ScalarFunction::square();
    let r = tomic_weyl(&MajorizationPair::new(vec![3.0, 1.0], vec![3.0, 2.0]), &sq, WeylDirection::Forward, tol)
        .unwrap();
    assert_eq!(r.worst_margin, 3.0);
    let same = MajorizationPair::new(vec![2.0, 1.0], vec![2.0, 1.0]);
    assert_eq!(tomic_weyl(&same, &sq, WeylDirection::Forward, tol).unwrap().worst_margin, 0.0);
    let bad = MajorizationPair::new(vec![1.0, 3.0], vec![3.0, 2.0]);
    let err = tomic_weyl(&bad, &sq, WeylDirection::Forward, tol).unwrap_err();
    assert!(err.to_string().contains("index 1"), "{err}");
    let over = MajorizationPair::new(vec![4.0, 1.0], vec![3.0, 2.0]);
    assert!(tomic_weyl(&over, &sq, WeylDirection::Forward, tol).unwrap_err().to_string().contains("index 0"));

    let exp = ScalarFunction::exp();
    let decay = ScalarFunction::new("exp(-t)", Interval::REAL_LINE, |t| (-t).exp());
    let mut s = SeedStream::new(4, 0).sampler();
    for _ in 0..500 {
        let n = 1 + s.index(6);
        let fwd = sample_majorization_pair(n, WeylDirection::Forward, &mut s, 1.0);
        assert!(!tomic_weyl(&fwd, &exp, WeylDirection::Forward, tol).unwrap().violated());
        let rev = sample_majorization_pair(n, WeylDirection::Reverse, &mut s, 1.0);
        assert!(!tomic_weyl(&rev, &decay, WeylDirection::Reverse, tol).unwrap().violated());
    }
}

#[test]
fn popoviciu_examples() {
    let a = [1.0, 0.5, 2.0];
    let linear = FunctionHandle::new("<x,a>", ConeSpec::NonnegOrthant(3), move |x| {
        Ok(x.as_slice().iter().zip(&a).map(|(u, v)| u * v).sum())
    });
    let r = check_popoviciu(&linear, &ScalarFunction::exp(), false, &cfg(1000)).unwrap();
    assert!(!r.violated());

    let id = scalar_handle("x", |x| x);
    let ctx = Context {
        phi: Some(&id),
        outer: Some(&ScalarFunction::identity()),
        domain: id.domain(),
    };
    let s = Point::scalar;
    let at = ineq::points([("x", s(0.3)), ("y", s(1.1)), ("z", s(2.0))]);
    let sym = Inequality::Popoviciu {
        symmetrized: true,
        reversed: false,
    };
    assert!(evaluate(&sym, &ctx, &at).unwrap().0.abs() < 1e-15);

    for n in [2, 3] {
        let det = inst_with("det", Params::new(), Some(n));
        for p in [1.0, 1.5, 2.0] {
            let r = check_popoviciu(&det.handle, &ScalarFunction::power(p), false, &cfg(300)).unwrap();
            assert!(!r.violated(), "N = {n}, p = {p}: {:?}", r.witness);
        }
    }

    let not_monotone = scalar_handle("sin", f64::sin);
    assert!(matches!(
        check_popoviciu(&not_monotone, &ScalarFunction::exp(), false, &cfg(10)),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn det_trace_inverse_grows_in_loewner_order() {
    for n in 1..=4 {
        let r = check_det_trace_inverse(n, &cfg(500)).unwrap();
        assert!(!r.violated(), "N = {n}");
    }
}

#[test]
fn config_json_fills_defaults() {
    let c: CheckConfig = serde_json::from_str(r#"{"trials": 7, "seed": 3}"#).unwrap();
    assert_eq!(c.trials, 7);
    assert_eq!(c.scale, 1.0);
    assert!(serde_json::from_str::<CheckConfig>(r#"{"trails": 7}"#).is_err());
    assert!(CheckConfig::default().with_trials(0).validate().is_err());
}
