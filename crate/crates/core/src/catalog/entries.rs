use std::f64::consts::{E, LN_2};
use std::sync::Arc;

use super::{lookup, instantiate, Built, CatalogEntry, Claim, DimRule, HessianFn, ParamValue, Params, PropertyLabel};
use crate::cone::ConeSpec;
use crate::diff::FunctionHandle;
use crate::error::{Error, Result};
use crate::linalg::{self, gamma, sym_eigenvalues, tanh_sinh, Interval, ScalarFunction};
use crate::point::Point;

use PropertyLabel::*;

fn ensure(ok: bool, name: &str, constraint: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::param(name, constraint))
    }
}

fn scalar(id: &'static str, domain: Interval, rule: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Built {
    let cone = if domain.lo_open {
        ConeSpec::PositiveOrthant(1)
    } else {
        ConeSpec::NonnegOrthant(1)
    };
    Built::plain(FunctionHandle::from_scalar(ScalarFunction::new(id, domain, rule), cone))
}

fn hessian(f: impl Fn(&Point) -> Result<Vec<Vec<f64>>> + Send + Sync + 'static) -> Option<HessianFn> {
    Some(Arc::new(f))
}

fn diag_matrix(d: Vec<f64>) -> Vec<Vec<f64>> {
    let n = d.len();
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { d[i] } else { 0.0 }).collect())
        .collect()
}

/// `−t log t` with `0 log 0 := 0`.
fn neg_xlogx(t: f64) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        -t * t.ln()
    }
}

/// `log cosh t` without overflow.
fn log_cosh(t: f64) -> f64 {
    let a = t.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

fn strong_subadd() -> Claim {
    Claim::asserted(StrongSubadd)
}

fn strong_superadd() -> Claim {
    Claim::asserted(StrongSuperadd)
}

fn cm() -> PropertyLabel {
    PropertyLabel::completely_monotone()
}

fn beta(p: &Params) -> f64 {
    p.real("beta").unwrap_or(f64::NAN)
}

fn is_integer(x: f64) -> bool {
    x >= 0.0 && x.fract() == 0.0
}

/// `β ∈ {0, ½, 1, …} ∪ [(N−1)/2, ∞)`
fn det_power_range(p: &Params, n: usize) -> bool {
    let b = beta(p);
    is_integer(2.0 * b) || b >= (n as f64 - 1.0) / 2.0
}

fn zero_or_at_least_one(p: &Params, _: usize) -> bool {
    let b = beta(p);
    b == 0.0 || b >= 1.0
}

fn scalar_entries() -> Vec<CatalogEntry> {
    let nonneg = Interval::NONNEG;
    vec![
        CatalogEntry::new(
            "affine-power",
            "m·x + n + p·x^α",
            "concave for α ∈ [0,1], p ≥ 0, with value n (+p when α = 0) ≥ 0 at the origin",
            DimRule::fixed(1),
            move |p, _| {
                let (m, n, c, a) = (p.real("m")?, p.real("n")?, p.real("p")?, p.real("alpha")?);
                ensure((0.0..=1.0).contains(&a), "alpha", "α ∈ [0, 1]")?;
                ensure(n >= 0.0, "n", "n ≥ 0")?;
                ensure(c >= 0.0, "p", "p ≥ 0")?;
                Ok(scalar("affine-power", nonneg, move |x| m * x + n + c * x.powf(a)))
            },
        )
        .param("m", "any real", |_| ParamValue::Real(1.0))
        .param("n", "n ≥ 0", |_| ParamValue::Real(0.5))
        .param("p", "p ≥ 0", |_| ParamValue::Real(1.0))
        .param("alpha", "α ∈ [0, 1]", |_| ParamValue::Real(0.5))
        .claim(strong_subadd()),
        CatalogEntry::new(
            "one-minus-sqrt1p",
            "1 − (1 + α·x²)^{1/2}",
            "concave, zero at the origin",
            DimRule::fixed(1),
            move |p, _| {
                let a = p.real("alpha")?;
                ensure(a > 0.0, "alpha", "α > 0")?;
                Ok(scalar("one-minus-sqrt1p", nonneg, move |x| 1.0 - (1.0 + a * x * x).sqrt()))
            },
        )
        .param("alpha", "α > 0", |_| ParamValue::Real(1.0))
        .claim(strong_subadd()),
        CatalogEntry::new(
            "neg-xlogx-shift",
            "−(x + α)·log(x + α)",
            "concave, value −α log α ≥ 0 at the origin for α ∈ [0,1]",
            DimRule::fixed(1),
            move |p, _| {
                let a = p.real("alpha")?;
                ensure((0.0..=1.0).contains(&a), "alpha", "α ∈ [0, 1]")?;
                Ok(scalar("neg-xlogx-shift", nonneg, move |x| neg_xlogx(x + a)))
            },
        )
        .param("alpha", "α ∈ [0, 1]", |_| ParamValue::Real(0.5))
        .claim(strong_subadd()),
        CatalogEntry::new("log1p", "log(1 + x)", "concave, zero at the origin", DimRule::fixed(1), |_, _| {
            Ok(scalar("log1p", Interval::NONNEG, f64::ln_1p))
        })
        .claim(strong_subadd()),
        CatalogEntry::new("neg-log-cosh", "−log cosh x", "concave, zero at the origin", DimRule::fixed(1), |_, _| {
            Ok(scalar("neg-log-cosh", Interval::NONNEG, |x| -log_cosh(x)))
        })
        .claim(strong_subadd()),
        CatalogEntry::new(
            "e-minus-1px-pow",
            "e − (1 + x)^{1/x}, 0 at x = 0",
            "(1+x)^{1/x} is convex and tends to e at the origin",
            DimRule::fixed(1),
            |_, _| {
                Ok(scalar("e-minus-1px-pow", Interval::NONNEG, |x| {
                    if x == 0.0 {
                        0.0
                    } else {
                        E - (x.ln_1p() / x).exp()
                    }
                }))
            },
        )
        .claim(strong_subadd()),
        CatalogEntry::new("one-minus-exp-neg", "1 − e^{−x}", "concave, zero at the origin", DimRule::fixed(1), |_, _| {
            Ok(scalar("one-minus-exp-neg", Interval::NONNEG, |x| -(-x).exp_m1()))
        })
        .claim(strong_subadd()),
        CatalogEntry::new("sigmoid", "(1 + e^{−x})^{−1}", "concave on [0, ∞), value ½ at the origin", DimRule::fixed(1), |_, _| {
            Ok(scalar("sigmoid", Interval::NONNEG, |x| 1.0 / (1.0 + (-x).exp())))
        })
        .claim(strong_subadd()),
        CatalogEntry::new("half-sq-plus-log1p", "x²/2 + log(1 + x)", "second derivative 1 − (1+x)^{−2} ≥ 0, zero at the origin", DimRule::fixed(1), |_, _| {
            Ok(scalar("half-sq-plus-log1p", Interval::NONNEG, |x| 0.5 * x * x + x.ln_1p()))
        })
        .claim(strong_superadd()),
        CatalogEntry::new("half-sq-minus-log1p", "x²/2 − log(1 + x)", "second derivative 1 + (1+x)^{−2} > 0, zero at the origin", DimRule::fixed(1), |_, _| {
            Ok(scalar("half-sq-minus-log1p", Interval::NONNEG, |x| 0.5 * x * x - x.ln_1p()))
        })
        .claim(strong_superadd()),
        CatalogEntry::new("half-sq-plus-sin", "x²/2 + sin x", "second derivative 1 − sin x ≥ 0, zero at the origin", DimRule::fixed(1), |_, _| {
            Ok(scalar("half-sq-plus-sin", Interval::NONNEG, |x| 0.5 * x * x + x.sin()))
        })
        .claim(strong_superadd()),
        CatalogEntry::new("half-sq-minus-sin", "x²/2 − sin x", "second derivative 1 + sin x ≥ 0, zero at the origin", DimRule::fixed(1), |_, _| {
            Ok(scalar("half-sq-minus-sin", Interval::NONNEG, |x| 0.5 * x * x - x.sin()))
        })
        .claim(strong_superadd()),
        CatalogEntry::new("half-sq-minus-cos", "x²/2 − cos x", "second derivative 1 + cos x ≥ 0, value −1 at the origin", DimRule::fixed(1), |_, _| {
            Ok(scalar("half-sq-minus-cos", Interval::NONNEG, |x| 0.5 * x * x - x.cos()))
        })
        .claim(strong_superadd()),
        CatalogEntry::new(
            "half-sq-plus-cos",
            "x²/2 + cos x",
            "convex, but the value 1 at the origin breaks superadditivity near 0",
            DimRule::fixed(1),
            |_, _| Ok(scalar("half-sq-plus-cos", Interval::NONNEG, |x| 0.5 * x * x + x.cos())),
        )
        .claim(Claim::asserted(SecondDiffNonneg))
        .claim(Claim::candidate(Superadd)),
        CatalogEntry::new(
            "x-gamma-minus-1",
            "x·Γ(x) − 1 = Γ(x + 1) − 1",
            "Γ(x+1) is log-convex, hence convex; zero at the origin",
            DimRule::fixed(1),
            |_, _| {
                Ok(scalar("x-gamma-minus-1", Interval::NONNEG, |x| {
                    gamma(x + 1.0).unwrap_or(f64::INFINITY) - 1.0
                }))
            },
        )
        .claim(strong_superadd()),
        CatalogEntry::new(
            "reciprocal",
            "1/x on (0, ∞)",
            "subadditive, but convex, so second differences are positive",
            DimRule::fixed(1),
            |_, _| Ok(scalar("reciprocal", Interval::POSITIVE, |x| 1.0 / x)),
        )
        .claim(Claim::asserted(Subadd))
        .claim(Claim::candidate(StrongSubadd)),
    ]
}

fn default_pencil(n: usize) -> ParamValue {
    ParamValue::Matrices(
        (0..n)
            .map(|i| {
                let d = 1.0 + i as f64;
                vec![vec![d, 0.3], vec![0.3, 1.0 / d]]
            })
            .collect(),
    )
}

fn default_poly(n: usize) -> ParamValue {
    let term = |c: f64, e: &[(usize, f64)]| {
        let mut row = vec![0.0; n + 1];
        row[0] = c;
        for &(i, k) in e {
            row[i + 1] += k;
        }
        row
    };
    let mut rows: Vec<Vec<f64>> = (0..n).map(|i| term(1.0, &[(i, 2.0)])).collect();
    rows.push(term(2.0, &[(0, 1.0), (n - 1, 1.0)]));
    rows.push(term(0.5, &[(0, 3.0)]));
    rows.push(term(1.0, &[(n - 1, 1.0)]));
    ParamValue::Matrix(rows)
}

fn lse_mean(x: &[f64]) -> f64 {
    let m = x.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let s: f64 = x.iter().map(|v| (v - m).exp()).sum();
    m + (s / x.len() as f64).ln()
}

fn softmax(x: &[f64]) -> Vec<f64> {
    let m = x.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let e: Vec<f64> = x.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

fn vector_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry::new(
            "shannon-entropy",
            "−Σ x_k log x_k",
            "separable concave with value 0 at the origin; cross partials vanish",
            DimRule::free(3, 1),
            |_, n| {
                let handle = FunctionHandle::new("shannon-entropy", ConeSpec::NonnegOrthant(n), |x| {
                    Ok(x.as_slice().iter().map(|&t| neg_xlogx(t)).sum())
                });
                let hess = hessian(|x| {
                    let d: Result<Vec<f64>> = x
                        .as_slice()
                        .iter()
                        .map(|&t| {
                            if t > 0.0 {
                                Ok(-1.0 / t)
                            } else {
                                Err(Error::domain("entropy Hessian is unbounded on the boundary"))
                            }
                        })
                        .collect();
                    Ok(diag_matrix(d?))
                });
                Ok(Built { handle, hessian: hess })
            },
        )
        .claim(strong_subadd()),
        CatalogEntry::new(
            "sq-norm",
            "‖x‖²",
            "second differences equal 2⟨x, y⟩ ≥ 0 on the orthant; zero at the origin",
            DimRule::free(3, 1),
            |_, n| {
                let handle = FunctionHandle::new("sq-norm", ConeSpec::NonnegOrthant(n), |x| x.inner(x));
                let hess = hessian(|x| Ok(diag_matrix(vec![2.0; x.dim()])));
                Ok(Built { handle, hessian: hess })
            },
        )
        .claim(strong_superadd()),
        CatalogEntry::new(
            "inner-product",
            "⟨x, y⟩ on ℝ₊ᴺ × ℝ₊ᴺ",
            "bilinear; second differences are ⟨x₁, y₂⟩ + ⟨x₂, y₁⟩ ≥ 0",
            DimRule::free(2, 1),
            |_, n| {
                let cone = ConeSpec::Product(vec![ConeSpec::NonnegOrthant(n), ConeSpec::NonnegOrthant(n)]);
                let handle = FunctionHandle::new("inner-product", cone, move |p| {
                    let v = p.as_slice();
                    Ok(v[..n].iter().zip(&v[n..]).map(|(a, b)| a * b).sum())
                });
                let hess = hessian(move |_| {
                    Ok((0..2 * n)
                        .map(|i| (0..2 * n).map(|j| if i + n == j || j + n == i { 1.0 } else { 0.0 }).collect())
                        .collect())
                });
                Ok(Built { handle, hessian: hess })
            },
        )
        .claim(strong_superadd()),
        CatalogEntry::new(
            "concave-of-linear",
            "f(⟨x, a⟩) for a scalar catalog function f",
            "composition of a strongly subadditive scalar function with a nonnegative linear form",
            DimRule::free(3, 1),
            |p, n| {
                let id = p.text("f")?.to_string();
                let constraint = "a scalar catalog id with asserted STRONG_SUBADD, e.g. log1p";
                let inner = lookup(&id).map_err(|_| Error::param("f", constraint))?;
                let inner = instantiate(inner, &Params::new(), None)?;
                ensure(
                    inner.is_scalar()
                        && inner.domain().contains_origin()
                        && inner.status(&StrongSubadd) == Some(super::LabelStatus::Asserted),
                    "f",
                    constraint,
                )?;
                let a = p.vector("a", n)?;
                ensure(a.iter().all(|&c| c >= 0.0), "a", "a ≥ 0 coordinatewise")?;
                let f = inner.handle;
                let handle = FunctionHandle::new(format!("{id}(<x,a>)"), ConeSpec::NonnegOrthant(n), move |x| {
                    let t: f64 = x.as_slice().iter().zip(&a).map(|(u, v)| u * v).sum();
                    f.eval(&Point::scalar(t))
                });
                Ok(Built::plain(handle))
            },
        )
        .param("f", "a scalar catalog id with asserted STRONG_SUBADD", |_| ParamValue::Text("log1p".into()))
        .param("a", "a ≥ 0 coordinatewise", |n| ParamValue::Vector(vec![1.0; n]))
        .claim(strong_subadd()),
        CatalogEntry::new(
            "geomean2",
            "√(x₁ x₂)",
            "concave and 1-homogeneous, hence superadditive; mixed second differences can be positive",
            DimRule::fixed(2),
            |_, _| {
                Ok(Built::plain(FunctionHandle::new("geomean2", ConeSpec::NonnegOrthant(2), |x| {
                    Ok((x.as_slice()[0] * x.as_slice()[1]).sqrt())
                })))
            },
        )
        .claim(Claim::asserted(Superadd))
        .claim(Claim::candidate(StrongSubadd)),
        CatalogEntry::new(
            "pairwise-diff-convex",
            "Σ_{i<j} f(xᵢ − xⱼ), f ∈ {square, cosh, logcosh}",
            "along x = y = eᵢ the second difference picks up f'' > 0",
            DimRule::free(2, 2),
            |p, n| {
                let name = p.text("f")?;
                let f: fn(f64) -> f64 = match name {
                    "square" => |t| t * t,
                    "cosh" => f64::cosh,
                    "logcosh" => log_cosh,
                    _ => return Err(Error::param("f", "one of square, cosh, logcosh")),
                };
                Ok(Built::plain(FunctionHandle::new(
                    format!("pairwise-diff-{name}"),
                    ConeSpec::NonnegOrthant(n),
                    move |x| {
                        let v = x.as_slice();
                        let mut s = 0.0;
                        for i in 0..v.len() {
                            for j in (i + 1)..v.len() {
                                s += f(v[i] - v[j]);
                            }
                        }
                        Ok(s)
                    },
                )))
            },
        )
        .param("f", "one of square, cosh, logcosh", |_| ParamValue::Text("square".into()))
        .claim(Claim::candidate(StrongSubadd)),
        CatalogEntry::new(
            "jensen-gap",
            "f(Σ λᵢxᵢ) − Σ λᵢ f(xᵢ), f ∈ {neg-square, neg-cosh, neg-exp}",
            "for f = −t², λ = (½, ½) the gap is (x₁ − x₂)²/4, whose second difference along e₁ is ½",
            DimRule::free(2, 2),
            |p, n| {
                let name = p.text("f")?;
                let f: fn(f64) -> f64 = match name {
                    "neg-square" => |t| -t * t,
                    "neg-cosh" => |t: f64| -t.cosh(),
                    "neg-exp" => |t: f64| -t.exp(),
                    _ => return Err(Error::param("f", "one of neg-square, neg-cosh, neg-exp")),
                };
                let lambda = p.vector("lambda", n)?;
                ensure(
                    lambda.iter().all(|&l| l >= 0.0) && (lambda.iter().sum::<f64>() - 1.0).abs() <= 1e-12,
                    "lambda",
                    "a probability vector",
                )?;
                Ok(Built::plain(FunctionHandle::new(
                    format!("jensen-gap-{name}"),
                    ConeSpec::NonnegOrthant(n),
                    move |x| {
                        let v = x.as_slice();
                        let mean: f64 = v.iter().zip(&lambda).map(|(a, l)| a * l).sum();
                        let avg: f64 = v.iter().zip(&lambda).map(|(a, l)| l * f(*a)).sum();
                        Ok(f(mean) - avg)
                    },
                )))
            },
        )
        .param("f", "one of neg-square, neg-cosh, neg-exp", |_| ParamValue::Text("neg-square".into()))
        .param("lambda", "a probability vector", |n| ParamValue::Vector(vec![1.0 / n as f64; n]))
        .claim(Claim::candidate(StrongSubadd)),
        CatalogEntry::new(
            "nonneg-poly",
            "Σ c·Π xᵢ^{eᵢ}, c ≥ 0, no constant term",
            "all mixed differences of monomials with nonnegative coefficients are nonnegative on the orthant",
            DimRule::free(2, 1),
            |p, n| {
                let rows = p.rows("terms")?;
                let constraint = "rows [c, e₁, …, e_N] with c ≥ 0, integer eᵢ ≥ 0 and Σ eᵢ ≥ 1";
                let mut terms = Vec::with_capacity(rows.len());
                for row in rows {
                    ensure(row.len() == n + 1, "terms", constraint)?;
                    let c = row[0];
                    let exps: Vec<i32> = row[1..].iter().map(|&e| e as i32).collect();
                    ensure(
                        c >= 0.0
                            && row[1..].iter().all(|&e| e >= 0.0 && e.fract() == 0.0 && e <= 64.0)
                            && exps.iter().sum::<i32>() >= 1,
                        "terms",
                        constraint,
                    )?;
                    terms.push((c, exps));
                }
                Ok(Built::plain(FunctionHandle::new("nonneg-poly", ConeSpec::NonnegOrthant(n), move |x| {
                    let v = x.as_slice();
                    Ok(terms
                        .iter()
                        .map(|(c, e)| c * v.iter().zip(e).map(|(a, k)| a.powi(*k)).product::<f64>())
                        .sum())
                })))
            },
        )
        .param("terms", "rows [c, e₁, …, e_N] with c ≥ 0, integer exponents, no constant term", default_poly)
        .claim(strong_superadd()),
        CatalogEntry::new(
            "lse",
            "log((1/N) Σ e^{x_k})",
            "cross partials −pᵢpⱼ ≤ 0 give submodularity; diagonal entries pᵢ(1 − pᵢ) > 0 break strong subadditivity",
            DimRule::free(2, 1),
            |_, n| {
                let handle = FunctionHandle::new("lse", ConeSpec::NonnegOrthant(n), |x| Ok(lse_mean(x.as_slice())));
                let hess = hessian(|x| {
                    let p = softmax(x.as_slice());
                    Ok((0..p.len())
                        .map(|i| {
                            (0..p.len())
                                .map(|j| if i == j { p[i] - p[i] * p[i] } else { -p[i] * p[j] })
                                .collect()
                        })
                        .collect())
                });
                Ok(Built { handle, hessian: hess })
            },
        )
        .claim(Claim::asserted(Submodular))
        .claim(Claim::asserted(ComonotoneStrongSuperadd))
        .claim(Claim::candidate(StrongSubadd)),
        CatalogEntry::new(
            "lp-power-norm",
            "Σ |fᵢ|^p·h on M grid points",
            "the differential x ↦ p·x^{p−1}·h is nondecreasing on the cone; zero at the origin",
            DimRule::free(16, 1),
            |p, m| {
                let (q, h) = (p.real("p")?, p.real("h")?);
                ensure(q > 1.0, "p", "p ∈ (1, ∞)")?;
                ensure(h > 0.0, "h", "h > 0")?;
                let cone = ConeSpec::grid_lp(m, q, h)?;
                let handle = FunctionHandle::new("lp-power-norm", cone, move |x| {
                    Ok(x.as_slice().iter().map(|v| v.abs().powf(q)).sum::<f64>() * h)
                });
                let hess = hessian(move |x| {
                    let d: Result<Vec<f64>> = x
                        .as_slice()
                        .iter()
                        .map(|&v| {
                            if v == 0.0 && q < 2.0 {
                                Err(Error::domain("Hessian is unbounded at zero for p < 2"))
                            } else {
                                Ok(q * (q - 1.0) * v.abs().powf(q - 2.0) * h)
                            }
                        })
                        .collect();
                    Ok(diag_matrix(d?))
                });
                Ok(Built { handle, hessian: hess })
            },
        )
        .param("p", "p ∈ (1, ∞)", |_| ParamValue::Real(2.0))
        .param("h", "h > 0", |m| ParamValue::Real(1.0 / m as f64))
        .claim(strong_superadd()),
    ]
}

fn hansen_primitive(t: f64, p: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(t + 0.5 * t * t);
    }
    tanh_sinh(|s: f64| (1.0 + s.powf(p)).powf(1.0 / p), 0.0, t, 1e-14)
}

/// `det` on the PSD cone; roundoff below zero on singular matrices is
/// clamped inside the usual window.
fn psd_det(a: &Point) -> Result<f64> {
    let d = linalg::det(a)?;
    let window = linalg::CLAMP_WINDOW * a.max_abs().max(1.0).powi(a.dim() as i32);
    if d < 0.0 && d >= -window {
        Ok(0.0)
    } else {
        Ok(d)
    }
}

fn matrix_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry::new(
            "det",
            "det A on PSD matrices",
            "directional derivatives det(A)·tr(A⁻¹W) grow along the Löwner order; zero at the origin",
            DimRule::free(3, 1),
            |_, n| Ok(Built::plain(FunctionHandle::new("det", ConeSpec::Psd(n), psd_det))),
        )
        .claim(strong_superadd()),
        CatalogEntry::new(
            "logdet-pencil",
            "x ↦ log det(Σ xᵢAᵢ), Aᵢ positive definite",
            "concave in x with cross partials −tr(M⁻¹AᵢM⁻¹Aⱼ) ≤ 0; log det diverges at the origin, so subadditivity fails for small x",
            DimRule::free(2, 1),
            |p, n| {
                let mats = p.matrices("matrices")?;
                let constraint = "N positive definite matrices of one common size";
                ensure(mats.len() == n && !mats.is_empty(), "matrices", constraint)?;
                let d = mats[0].dim();
                for m in &mats {
                    ensure(m.dim() == d, "matrices", constraint)?;
                    let lmin = sym_eigenvalues(m)?.last().copied().unwrap_or(0.0);
                    ensure(lmin > 0.0, "matrices", "every Aᵢ must be positive definite")?;
                }
                Ok(Built::plain(FunctionHandle::new("logdet-pencil", ConeSpec::PositiveOrthant(n), move |x| {
                    let mut acc = Point::zero_matrix(d);
                    for (xi, a) in x.as_slice().iter().zip(&mats) {
                        acc = acc.add(&a.scale(*xi))?;
                    }
                    linalg::log_det(&acc)
                })))
            },
        )
        .param("matrices", "N positive definite matrices of one common size", default_pencil)
        .claim(Claim::asserted(SecondDiffNonpos))
        .claim(Claim::candidate(StrongSubadd)),
        CatalogEntry::new(
            "trace-pow",
            "trace A^p",
            "t^{p−1} is operator antitone for p ∈ [0,1] and operator monotone for p ∈ [1,2]",
            DimRule::free(3, 1),
            |p, n| {
                let q = p.real("p")?;
                ensure(q >= 0.0, "p", "p ≥ 0")?;
                Ok(Built::plain(FunctionHandle::new(format!("trace-pow({q})"), ConeSpec::Psd(n), move |a| {
                    linalg::trace_pow(a, q)
                })))
            },
        )
        .param("p", "p ≥ 0", |_| ParamValue::Real(0.5))
        .claim(strong_subadd().when("p ∈ [0, 1]", |p, _| (0.0..=1.0).contains(&p.real("p").unwrap_or(-1.0))))
        .claim(strong_superadd().when("p ∈ [1, 2]", |p, _| (1.0..=2.0).contains(&p.real("p").unwrap_or(-1.0)))),
        CatalogEntry::new(
            "trace-hansen",
            "trace F(A), F(t) = ∫₀ᵗ (1 + s^p)^{1/p} ds",
            "F' = (1 + t^p)^{1/p} is operator monotone for p ∈ (0,1]; F(0) = 0",
            DimRule::free(2, 1),
            |p, n| {
                let q = p.real("p")?;
                ensure(q > 0.0 && q <= 1.0, "p", "p ∈ (0, 1]")?;
                Ok(Built::plain(FunctionHandle::new(format!("trace-hansen({q})"), ConeSpec::Psd(n), move |a| {
                    let window = linalg::CLAMP_WINDOW * a.max_abs().max(1.0);
                    let mut s = 0.0;
                    for l in sym_eigenvalues(a)? {
                        if l < -window {
                            return Err(Error::domain(format!("negative eigenvalue {l}")));
                        }
                        s += hansen_primitive(l.max(0.0), q)?;
                    }
                    Ok(s)
                })))
            },
        )
        .param("p", "p ∈ (0, 1]", |_| ParamValue::Real(0.5))
        .claim(strong_superadd()),
        CatalogEntry::new(
            "vn-entropy",
            "−trace(A log A)",
            "trace of the operator concave function −t log t, zero at the origin",
            DimRule::free(3, 1),
            |_, n| Ok(Built::plain(FunctionHandle::new("vn-entropy", ConeSpec::Psd(n), linalg::vn_entropy))),
        )
        .claim(strong_subadd()),
        CatalogEntry::new(
            "logdet",
            "log det A on positive definite matrices",
            "concave; second derivative −tr(C⁻¹XC⁻¹Y) ≤ 0 along PSD directions",
            DimRule::free(3, 1),
            |_, n| Ok(Built::plain(FunctionHandle::new("logdet", ConeSpec::PositiveDefinite(n), linalg::log_det))),
        )
        .claim(Claim::asserted(SecondDiffNonpos))
        .claim(Claim::candidate(SecondDiffNonneg)),
        CatalogEntry::new(
            "det-recip-pow",
            "(det A)^{−β} on positive definite matrices",
            "a Laplace transform of a positive measure on the PSD cone exactly for β ∈ {0, ½, 1, …} ∪ [(N−1)/2, ∞)",
            DimRule::free(2, 1),
            |p, n| {
                let b = p.real("beta")?;
                ensure(b >= 0.0, "beta", "β ≥ 0")?;
                Ok(Built::plain(FunctionHandle::new(
                    format!("det^-{b}"),
                    ConeSpec::PositiveDefinite(n),
                    move |a| {
                        let d = linalg::det(a)?;
                        if d <= 0.0 {
                            return Err(Error::domain(format!("determinant {d} is not positive")));
                        }
                        Ok(d.powf(-b))
                    },
                )))
            },
        )
        .param("beta", "β ≥ 0", |_| ParamValue::Real(0.5))
        .claim(Claim::asserted(cm()).when("β ∈ {0, ½, 1, …} ∪ [(N−1)/2, ∞)", det_power_range)),
        CatalogEntry::new(
            "det-shift-recip",
            "(det(I + A))^{−β} − 1 on PSD matrices",
            "a completely monotone function translated into the cone and centered",
            DimRule::free(2, 1),
            |p, n| {
                let b = p.real("beta")?;
                ensure(b >= 0.0, "beta", "β ≥ 0")?;
                Ok(Built::plain(FunctionHandle::new(format!("det(I+A)^-{b} - 1"), ConeSpec::Psd(n), move |a| {
                    let d = linalg::det(&Point::identity(a.dim()).add(a)?)?;
                    Ok(d.powf(-b) - 1.0)
                })))
            },
        )
        .param("beta", "β ≥ 0", |_| ParamValue::Real(0.5))
        .claim(strong_superadd().when("β ∈ {0, ½, 1, …} ∪ [(N−1)/2, ∞)", det_power_range)),
    ]
}

fn cm_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry::new(
            "exp-neg-linear",
            "e^{−⟨α, x⟩}",
            "Laplace transform of the point mass at α",
            DimRule::free(3, 1),
            |p, n| {
                let a = p.vector("alpha", n)?;
                ensure(a.iter().all(|&c| c >= 0.0), "alpha", "α ≥ 0 coordinatewise")?;
                let a2 = a.clone();
                let handle = FunctionHandle::new("exp-neg-linear", ConeSpec::NonnegOrthant(n), move |x| {
                    Ok((-x.as_slice().iter().zip(&a).map(|(u, v)| u * v).sum::<f64>()).exp())
                });
                let hess = hessian(move |x| {
                    let f = (-x.as_slice().iter().zip(&a2).map(|(u, v)| u * v).sum::<f64>()).exp();
                    Ok(a2.iter().map(|ai| a2.iter().map(|aj| ai * aj * f).collect()).collect())
                });
                Ok(Built { handle, hessian: hess })
            },
        )
        .param("alpha", "α ≥ 0 coordinatewise", |n| {
            ParamValue::Vector((0..n).map(|i| 1.0 / (i as f64 + 1.0)).collect())
        })
        .claim(Claim::asserted(cm())),
        CatalogEntry::new(
            "inv-power-product",
            "Π xᵢ^{−αᵢ} on (0, ∞)ᴺ",
            "a product of completely monotone functions of separate variables",
            DimRule::free(2, 1),
            |p, n| {
                let a = p.vector("alpha", n)?;
                ensure(a.iter().all(|&c| c > 0.0), "alpha", "α > 0 coordinatewise")?;
                Ok(Built::plain(FunctionHandle::new("inv-power-product", ConeSpec::PositiveOrthant(n), move |x| {
                    Ok(x.as_slice().iter().zip(&a).map(|(u, v)| u.powf(-v)).product())
                })))
            },
        )
        .param("alpha", "α > 0 coordinatewise", |_| ParamValue::Real(0.5))
        .claim(Claim::asserted(cm())),
        CatalogEntry::new(
            "logistic-pow",
            "(1 + a·e^{−x})^β",
            "completely monotone on [0, ∞) exactly for integer β ≥ 0",
            DimRule::fixed(1),
            |p, _| {
                let (a, b) = (p.real("a")?, p.real("beta")?);
                ensure(a > 0.0, "a", "a > 0")?;
                ensure(b >= 0.0, "beta", "β ≥ 0")?;
                Ok(scalar("logistic-pow", Interval::NONNEG, move |x| (1.0 + a * (-x).exp()).powf(b)))
            },
        )
        .param("a", "a > 0", |_| ParamValue::Real(1.0))
        .param("beta", "β ≥ 0", |_| ParamValue::Real(2.0))
        .claim(Claim::asserted(cm()).when("β ∈ {0, 1, 2, …}", |p, _| is_integer(beta(p)))),
        CatalogEntry::new(
            "logistic-pow-centered",
            "(1 + a·e^{−x})^β − (1 + a)^β",
            "convex with value 0 at the origin",
            DimRule::fixed(1),
            |p, _| {
                let (a, b) = (p.real("a")?, p.real("beta")?);
                ensure(a > 0.0, "a", "a > 0")?;
                ensure(b >= 0.0, "beta", "β ≥ 0")?;
                let f0 = (1.0 + a).powf(b);
                Ok(scalar("logistic-pow-centered", Interval::NONNEG, move |x| {
                    (1.0 + a * (-x).exp()).powf(b) - f0
                }))
            },
        )
        .param("a", "a > 0", |_| ParamValue::Real(1.0))
        .param("beta", "β ≥ 0", |_| ParamValue::Real(2.0))
        .claim(strong_superadd().when("β ∈ {0} ∪ [1, ∞)", zero_or_at_least_one)),
        CatalogEntry::new(
            "elem-sym-4",
            "(Σ_{i<j≤4} xᵢxⱼ)^{−β} on (0, ∞)⁴",
            "completely monotone exactly for β = 0 or β ≥ 1",
            DimRule::fixed(4),
            |p, _| {
                let b = p.real("beta")?;
                ensure(b >= 0.0, "beta", "β ≥ 0")?;
                Ok(Built::plain(FunctionHandle::new("elem-sym-4", ConeSpec::PositiveOrthant(4), move |x| {
                    Ok(elem_sym_2(x.as_slice()).powf(-b))
                })))
            },
        )
        .param("beta", "β ≥ 0", |_| ParamValue::Real(1.0))
        .claim(Claim::asserted(cm()).when("β = 0 or β ≥ 1", zero_or_at_least_one)),
        CatalogEntry::new(
            "elem-sym-4-shifted",
            "Φ(x + 1) − Φ(1), Φ = (Σ_{i<j≤4} xᵢxⱼ)^{−β}",
            "a completely monotone function translated by 1 and centered",
            DimRule::fixed(4),
            |p, _| {
                let b = p.real("beta")?;
                ensure(b >= 0.0, "beta", "β ≥ 0")?;
                let f1 = 6f64.powf(-b);
                Ok(Built::plain(FunctionHandle::new("elem-sym-4-shifted", ConeSpec::NonnegOrthant(4), move |x| {
                    let shifted: Vec<f64> = x.as_slice().iter().map(|v| v + 1.0).collect();
                    Ok(elem_sym_2(&shifted).powf(-b) - f1)
                })))
            },
        )
        .param("beta", "β ≥ 0", |_| ParamValue::Real(1.0))
        .claim(strong_superadd().when("β = 0 or β ≥ 1", zero_or_at_least_one)),
    ]
}

fn elem_sym_2(x: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            s += x[i] * x[j];
        }
    }
    s
}

pub(super) fn all() -> Vec<CatalogEntry> {
    let mut v = scalar_entries();
    v.extend(vector_entries());
    v.extend(matrix_entries());
    v.extend(cm_entries());
    v
}
