//! Sampled sufficient-condition certificates.
//!
//! A [`Certificate`] with verdict `CERTIFIED_NUMERIC` means the sufficient
//! condition held at every sampled point (and at the origin where it
//! matters). It is evidence, not proof.

mod gaussian;
mod laplace;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::PropertyLabel;
use crate::check::{CheckConfig, Points};
use crate::cone::{sample_with, ConeSpec};
use crate::diff::FunctionHandle;
use crate::error::{Error, Result};
use crate::linalg::{fd_directional, fd_hessian, gradient_step, hessian_step};
use crate::point::Point;
use crate::rng::{Sampler, SeedStream};

pub use gaussian::{gaussian_det_exact, gaussian_det_quadrature, gaussian_detcert_check, QMC_NODES};
pub use laplace::{laplace_as_handle, laplace_eval, LaplaceCertificate};

/// Relative slack on sampled derivative signs: an entry `v` of required
/// sign passes iff `±v ≥ −1e−6·max(1, scale)`.
pub const SIGN_SLACK: f64 = 1e-6;
/// Fresh draws per sample slot before the slot counts as failed.
const MAX_ATTEMPTS: u64 = 8;
/// Largest share of resampled points before the run is abandoned.
const MAX_RESAMPLE_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    HessianSign,
    TopkisCross,
    DifferentialMonotone,
    LaplaceAtoms,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertVerdict {
    CertifiedNumeric,
    Refused,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Nonpos,
    Nonneg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lattice {
    Submodular,
    Supermodular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotone {
    Nonincreasing,
    Nondecreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplePoints {
    pub count: u64,
    pub seed: u64,
    pub resampled: u64,
}

/// Where a sufficient condition failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refusal {
    pub points: Points,
    /// Offending Hessian entry `(i, j)`, if any.
    pub entry: Option<[usize; 2]>,
    pub value: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub method: Method,
    pub target: PropertyLabel,
    pub sample_points: SamplePoints,
    pub verdict: CertVerdict,
    pub refusal_witness: Option<Refusal>,
    pub config: CheckConfig,
}

impl Certificate {
    pub fn certified(&self) -> bool {
        self.verdict == CertVerdict::CertifiedNumeric
    }
}

fn passes(v: f64, want_nonneg: bool, scale: f64) -> bool {
    let v = if want_nonneg { v } else { -v };
    v >= -SIGN_SLACK * scale.abs().max(1.0)
}

/// Offset used for the origin value on open cones.
const NEAR_ORIGIN: f64 = 1e-9;

/// The origin sign that completes a second-order condition: `Φ(0) ≥ 0`
/// for the subadditive side, `Φ(0) ≤ 0` for the superadditive side. On an
/// open cone Φ(0) is read off the rule if it is finite there, and from
/// `Φ(ε·1)` with `ε = 1e−9` otherwise.
fn origin_refusal(f: &FunctionHandle, want_nonneg: bool) -> Result<Option<Refusal>> {
    let domain = f.domain();
    let zero = domain.zero();
    let (name, at, v) = match f.eval(&zero) {
        Ok(v) => ("origin", zero, v),
        Err(e) if e.is_domain() && !domain.contains_origin() => {
            let near = domain.unit().scale(NEAR_ORIGIN);
            match f.eval(&near) {
                Ok(v) => ("near-origin", near, v),
                Err(e) if e.is_domain() => ("near-origin", near, f64::NAN),
                Err(e) => return Err(e),
            }
        }
        Err(e) => return Err(e),
    };
    let ok = if want_nonneg { v >= 0.0 } else { v <= 0.0 };
    Ok((!ok).then(|| Refusal {
        points: [(name.to_string(), at)].into_iter().collect(),
        entry: None,
        value: v,
        reason: format!("Φ at the {name} point is {v}, the wrong sign"),
    }))
}

/// Runs `test` on `count` sample slots in parallel. A slot whose draw hits
/// a domain error is redrawn from the next stream of its namespace.
fn sampled<T>(count: u64, seed: u64, test: T) -> Result<(Option<Refusal>, u64)>
where
    T: Fn(&mut Sampler) -> Result<Option<Refusal>> + Sync,
{
    let results: Vec<Result<(Option<Refusal>, u64)>> = (0..count)
        .into_par_iter()
        .map(|i| {
            for attempt in 0..MAX_ATTEMPTS {
                let mut s = SeedStream::namespaced(seed, attempt + 1, i).sampler();
                match test(&mut s) {
                    Ok(r) => return Ok((r, attempt)),
                    Err(e) if e.is_domain() => continue,
                    Err(e) => return Err(e),
                }
            }
            Ok((None, MAX_ATTEMPTS))
        })
        .collect();
    let mut first = None;
    let mut resampled = 0;
    for r in results {
        let (refusal, redraws) = r?;
        resampled += redraws;
        if first.is_none() {
            first = refusal;
        }
    }
    if resampled as f64 > MAX_RESAMPLE_FRACTION * count as f64 {
        return Err(Error::Numeric(format!(
            "{resampled} redraws for {count} sample points exceed the {:.0}% budget",
            100.0 * MAX_RESAMPLE_FRACTION
        )));
    }
    Ok((first, resampled))
}

fn require_vector(f: &FunctionHandle) -> Result<()> {
    if f.domain().is_matrix() {
        return Err(Error::Capability(
            "entrywise Hessian conditions need a vector domain; use differential monotonicity".into(),
        ));
    }
    Ok(())
}

fn finish(
    method: Method,
    target: PropertyLabel,
    cfg: &CheckConfig,
    count: u64,
    origin: Option<Refusal>,
    sampled: (Option<Refusal>, u64),
) -> Certificate {
    let refusal = origin.or(sampled.0);
    Certificate {
        method,
        target,
        sample_points: SamplePoints {
            count,
            seed: cfg.seed,
            resampled: sampled.1,
        },
        verdict: if refusal.is_some() {
            CertVerdict::Refused
        } else {
            CertVerdict::CertifiedNumeric
        },
        refusal_witness: refusal,
        config: cfg.clone(),
    }
}

/// Finite-difference Hessian at `count` interior points, checking entries
/// selected by `offdiag_only` for the sign `want_nonneg`.
fn hessian_scan(
    f: &FunctionHandle,
    want_nonneg: bool,
    offdiag_only: bool,
    count: u64,
    cfg: &CheckConfig,
) -> Result<(Option<Refusal>, u64)> {
    let domain = f.domain();
    sampled(count, cfg.seed, |s| {
        let x = sample_with(domain, s, cfg.scale, 0.0);
        let h = fd_hessian(|p| f.eval(p), &x, hessian_step(&x))?;
        let norm = h.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        for (i, row) in h.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if offdiag_only && i == j {
                    continue;
                }
                if !passes(v, want_nonneg, norm) {
                    return Ok(Some(Refusal {
                        points: [("x".to_string(), x.clone())].into_iter().collect(),
                        entry: Some([i, j]),
                        value: v,
                        reason: format!("∂²Φ/∂x{i}∂x{j} = {v} has the wrong sign"),
                    }));
                }
            }
        }
        Ok(None)
    })
}

/// All second partials of one sign plus the matching sign of `Φ(0)`:
/// nonpositive Hessian with `Φ(0) ≥ 0` targets STRONG_SUBADD, nonnegative
/// with `Φ(0) ≤ 0` targets STRONG_SUPERADD.
pub fn certify_hessian_sign(f: &FunctionHandle, sign: Sign, points: u64, cfg: &CheckConfig) -> Result<Certificate> {
    require_vector(f)?;
    let want_nonneg = sign == Sign::Nonneg;
    let target = if want_nonneg {
        PropertyLabel::StrongSuperadd
    } else {
        PropertyLabel::StrongSubadd
    };
    let origin = origin_refusal(f, !want_nonneg)?;
    let scan = hessian_scan(f, want_nonneg, false, points, cfg)?;
    Ok(finish(Method::HessianSign, target, cfg, points, origin, scan))
}

/// Cross partials `∂²Φ/∂xᵢ∂xⱼ`, `i ≠ j`, of one sign.
pub fn certify_topkis(f: &FunctionHandle, mode: Lattice, points: u64, cfg: &CheckConfig) -> Result<Certificate> {
    require_vector(f)?;
    if !f.domain().supports_lattice() {
        return Err(Error::Capability(format!("{} has no lattice operations", f.domain().family())));
    }
    let want_nonneg = mode == Lattice::Supermodular;
    let target = if want_nonneg {
        PropertyLabel::Supermodular
    } else {
        PropertyLabel::Submodular
    };
    let scan = hessian_scan(f, want_nonneg, true, points, cfg)?;
    Ok(finish(Method::TopkisCross, target, cfg, points, None, scan))
}

/// Monotonicity of the differential along the cone order: for `u` in the
/// domain and `v, w` in its closure, compares `D_wΦ(u+v)` with `D_wΦ(u)`.
/// Works on matrix cones with PSD directions.
pub fn certify_differential_monotone(
    f: &FunctionHandle,
    direction: Monotone,
    pairs: u64,
    cfg: &CheckConfig,
) -> Result<Certificate> {
    let domain = f.domain();
    let closure: ConeSpec = domain.closure();
    let nondecreasing = direction == Monotone::Nondecreasing;
    let target = if nondecreasing {
        PropertyLabel::StrongSuperadd
    } else {
        PropertyLabel::StrongSubadd
    };
    let origin = origin_refusal(f, !nondecreasing)?;
    let scan = sampled(pairs, cfg.seed, |s| {
        let u = sample_with(domain, s, cfg.scale, 0.0);
        let v = sample_with(&closure, s, cfg.scale, cfg.boundary_prob);
        let w = sample_with(&closure, s, cfg.scale, 0.0);
        let uv = u.add(&v)?;
        let d0 = fd_directional(|p| f.eval(p), &u, &w, gradient_step(&u))?;
        let d1 = fd_directional(|p| f.eval(p), &uv, &w, gradient_step(&uv))?;
        let scale = d0.abs().max(d1.abs());
        if passes(d1 - d0, nondecreasing, scale) {
            return Ok(None);
        }
        let how = if nondecreasing { "decreases" } else { "increases" };
        Ok(Some(Refusal {
            points: [("u", u), ("v", v), ("w", w)]
                .into_iter()
                .map(|(n, p): (&str, Point)| (n.to_string(), p))
                .collect(),
            entry: None,
            value: d1 - d0,
            reason: format!("D_wΦ {how} from u to u+v: {d0} → {d1}"),
        }))
    })?;
    Ok(finish(Method::DifferentialMonotone, target, cfg, pairs, origin, scan))
}

/// Validates the atoms against `cone` and runs the alternating-difference
/// check on the transform. Invalid atoms are an error; a sign violation
/// (which only rounding could cause) refuses the certificate.
pub fn certify_laplace(cert: &LaplaceCertificate, cone: &ConeSpec, cfg: &CheckConfig) -> Result<Certificate> {
    let f = laplace_as_handle(cert, cone)?;
    let target = PropertyLabel::CompletelyMonotone {
        order_cap: cfg.order_cap,
    };
    let r = crate::check::check(&f, &target, cfg)?;
    let refusal = r.witness.map(|w| Refusal {
        points: w.points,
        entry: None,
        value: w.margin,
        reason: w.expression,
    });
    Ok(finish(
        Method::LaplaceAtoms,
        target,
        cfg,
        r.trials,
        None,
        (refusal, r.skipped),
    ))
}
