use std::collections::HashSet;
use std::f64::consts::LN_2;

use super::*;
use crate::cone::{sample, ConeSpec};
use crate::diff::second_diff;
use crate::linalg::{fd_hessian, hessian_step};
use crate::rng::SeedStream;

fn inst(id: &str) -> Instance {
    lookup(id).unwrap().default_instance().unwrap()
}

#[test]
fn spec_examples() {
    let f = inst("log1p");
    assert!((f.handle.eval(&Point::scalar(1.0)).unwrap() - LN_2).abs() < 1e-15);
    let d = inst("det");
    let v = d.handle.eval(&Point::diag(&[2.0, 3.0, 1.0])).unwrap();
    assert!((v - 6.0).abs() < 1e-12);
    assert_eq!(lookup("lse").unwrap().id, "lse");
    let err = lookup("nope").unwrap_err();
    assert!(err.to_string().contains("log1p"));
}

#[test]
fn ids_are_unique_and_plentiful() {
    let ids: HashSet<_> = builtin_entries().iter().map(|e| e.id).collect();
    assert_eq!(ids.len(), builtin_entries().len());
    assert!(ids.len() >= 30);
}

#[test]
fn instantiate_examples() {
    let e = lookup("trace-pow").unwrap();
    let i = instantiate(e, &Params::new().real_param("p", 0.5), Some(3)).unwrap();
    assert_eq!(i.domain(), &ConeSpec::Psd(3));
    assert_eq!(i.status(&PropertyLabel::StrongSubadd), Some(LabelStatus::Asserted));
    assert_eq!(i.status(&PropertyLabel::StrongSuperadd), None);

    let err = instantiate(lookup("affine-power").unwrap(), &Params::new().real_param("alpha", 2.0), None)
        .unwrap_err();
    assert!(err.to_string().contains("α ∈ [0, 1]"), "{err}");

    let bad = ParamValue::Matrices(vec![vec![vec![1.0, 2.0], vec![2.0, 1.0]], vec![vec![1.0, 0.0], vec![0.0, 1.0]]]);
    let err = instantiate(lookup("logdet-pencil").unwrap(), &Params::new().with("matrices", bad), None)
        .unwrap_err();
    assert!(err.to_string().contains("positive definite"), "{err}");

    assert!(instantiate(lookup("log1p").unwrap(), &Params::new().real_param("q", 1.0), None).is_err());
    assert!(instantiate(lookup("geomean2").unwrap(), &Params::new(), Some(3)).is_err());
}

#[test]
fn conditional_claims() {
    let e = lookup("logistic-pow").unwrap();
    let cm = PropertyLabel::completely_monotone();
    let on = instantiate(e, &Params::new().real_param("beta", 2.0), None).unwrap();
    let off = instantiate(e, &Params::new().real_param("beta", 0.5), None).unwrap();
    assert_eq!(on.status(&cm), Some(LabelStatus::Asserted));
    assert_eq!(off.status(&cm), None);

    let e = lookup("det-recip-pow").unwrap();
    let p = |b: f64| Params::new().real_param("beta", b);
    assert!(instantiate(e, &p(0.5), Some(4)).unwrap().status(&cm).is_some());
    assert!(instantiate(e, &p(1.2), Some(4)).unwrap().status(&cm).is_none());
    assert!(instantiate(e, &p(1.6), Some(4)).unwrap().status(&cm).is_some());
}

#[test]
fn implication_closure() {
    for entry in builtin_entries() {
        let i = entry.default_instance().unwrap();
        for c in &i.claims {
            for implied in c.label.implied() {
                let s = i.status(implied);
                assert!(s.is_some(), "{} lacks {implied}", entry.id);
                if c.status == LabelStatus::Asserted {
                    assert_eq!(s, Some(LabelStatus::Asserted), "{} {implied}", entry.id);
                }
            }
        }
    }
    let r = inst("reciprocal");
    assert_eq!(r.status(&PropertyLabel::Subadd), Some(LabelStatus::Asserted));
    assert_eq!(r.status(&PropertyLabel::StrongSubadd), Some(LabelStatus::RefutedCandidate));
    assert_eq!(r.status(&PropertyLabel::SecondDiffNonpos), Some(LabelStatus::RefutedCandidate));
}

#[test]
fn finite_on_samples() {
    for (idx, entry) in builtin_entries().iter().enumerate() {
        let i = entry.default_instance().unwrap();
        let mut s = SeedStream::namespaced(7, 1, idx as u64).sampler();
        for _ in 0..1000 {
            let x = sample(i.domain(), &mut s, 1.0);
            let v = i.handle.eval(&x);
            assert!(matches!(v, Ok(v) if v.is_finite()), "{} at {:?}: {v:?}", entry.id, x.as_slice());
        }
    }
}

#[test]
fn scalar_curvature_matches_labels() {
    for entry in builtin_entries() {
        let i = entry.default_instance().unwrap();
        if !i.is_scalar() {
            continue;
        }
        let sign = match (
            i.status(&PropertyLabel::StrongSubadd),
            i.status(&PropertyLabel::StrongSuperadd),
        ) {
            (Some(LabelStatus::Asserted), _) => -1.0,
            (_, Some(LabelStatus::Asserted)) => 1.0,
            _ => continue,
        };
        let f = |t: f64| i.handle.eval(&Point::scalar(t)).unwrap();
        for k in 1..=200 {
            let t = 0.05 * k as f64;
            let h = 1e-4 * t.max(1.0);
            let d2 = (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
            assert!(sign * d2 >= -1e-6, "{} at {t}: f'' = {d2}", entry.id);
        }
        if i.domain().contains_origin() {
            assert!(sign * -f(0.0) >= -1e-12, "{}: f(0) = {}", entry.id, f(0.0));
        }
    }
}

#[test]
fn sq_norm_second_difference() {
    let f = inst("sq-norm");
    let mut s = SeedStream::new(11, 0).sampler();
    for _ in 0..1000 {
        let [x, y, z] = [0; 3].map(|_| sample(f.domain(), &mut s, 1.0));
        let d = second_diff(&f.handle, &x, &y, &z).unwrap();
        assert!((d - 2.0 * x.inner(&y).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn trace_pow_one_is_linear() {
    let f = instantiate(lookup("trace-pow").unwrap(), &Params::new().real_param("p", 1.0), None).unwrap();
    assert!(f.status(&PropertyLabel::StrongSubadd).is_some());
    assert!(f.status(&PropertyLabel::StrongSuperadd).is_some());
    let mut s = SeedStream::new(12, 0).sampler();
    for _ in 0..200 {
        let [x, y, z] = [0; 3].map(|_| sample(f.domain(), &mut s, 1.0));
        assert!(second_diff(&f.handle, &x, &y, &z).unwrap().abs() < 1e-10);
    }
}

#[test]
fn analytic_hessians_match_finite_differences() {
    for (k, id) in ["shannon-entropy", "sq-norm", "lse", "inner-product", "exp-neg-linear", "lp-power-norm"].into_iter().enumerate() {
        let f = inst(id);
        let hess = f.hessian.clone().unwrap();
        let mut s = SeedStream::namespaced(13, 1, k as u64).sampler();
        let mut done = 0;
        while done < 100 {
            let x = sample(f.domain(), &mut s, 1.0);
            // the entropy Hessian only exists in the interior
            if x.as_slice().iter().any(|&v| v < 0.05) {
                continue;
            }
            let h = hess(&x).unwrap();
            let g = fd_hessian(|p| f.handle.eval(p), &x, hessian_step(&x)).unwrap();
            for (r, q) in h.iter().zip(&g) {
                for (a, b) in r.iter().zip(q) {
                    assert!((a - b).abs() < 1e-5 * a.abs().max(1.0), "{id}: {a} vs {b}");
                }
            }
            done += 1;
        }
    }
}

#[test]
fn hansen_closed_form_at_p_one() {
    // p = 1 uses t + t²/2 directly; p close to 1 goes through quadrature
    let a = Point::diag(&[0.7, 2.0]);
    let q = |p: f64| {
        instantiate(lookup("trace-hansen").unwrap(), &Params::new().real_param("p", p), None)
            .unwrap()
            .handle
            .eval(&a)
            .unwrap()
    };
    let exact = 0.7 + 0.245 + 2.0 + 2.0;
    assert!((q(1.0) - exact).abs() < 1e-14);
    assert!((q(1.0 - 1e-9) - exact).abs() < 1e-6);
}

#[test]
fn summaries_serialize() {
    for entry in builtin_entries() {
        let s = summarize(entry).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["id"], entry.id);
        assert!(!s.labels.is_empty(), "{}", entry.id);
    }
    let s = summarize(lookup("lse").unwrap()).unwrap();
    let v = serde_json::to_value(&s).unwrap();
    assert_eq!(v["status"][0]["status"], "asserted");
}
