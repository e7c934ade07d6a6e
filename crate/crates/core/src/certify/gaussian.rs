//! The β = ½ Gaussian representation of `det(I+A)^{−1/2}`, checked by
//! quasi–Monte Carlo quadrature on a fixed Halton sequence.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use statrs::function::erf::erfc_inv;

use crate::check::ineq::points;
use crate::check::{report, run_trials, CheckConfig, CheckReport, Context, Inequality, Probe};
use crate::cone::{sample_with, ConeSpec};
use crate::error::{Error, Result};
use crate::linalg::sym_eigenvalues;
use crate::point::Point;
use crate::rng::{Sampler, SeedStream};

/// Number of Halton nodes.
pub const QMC_NODES: usize = 1_000_000;
/// Largest supported dimension; one prime base per coordinate.
const BASES: [u64; 4] = [2, 3, 5, 7];
/// Agreement required between quadrature and the eigenvalue formula.
const REL_TOL: f64 = 1e-3;
/// Spectral radius the sampled matrices are rescaled to stay below.
const MAX_EIGENVALUE: f64 = 2.0;
const CHUNK: usize = 4096;

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let (mut f, mut r) = (inv, 0.0);
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// Nodes for dimension `n`, flattened row-major, mapped so that each
/// coordinate has density `e^{−x²}/√π`.
fn nodes(n: usize) -> Arc<Vec<f64>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<f64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return v.clone();
    }
    let v: Vec<f64> = (1..=QMC_NODES as u64)
        .into_par_iter()
        .flat_map_iter(|i| BASES[..n].iter().map(move |&b| -erfc_inv(2.0 * radical_inverse(i, b))))
        .collect();
    let v = Arc::new(v);
    cache.lock().unwrap().entry(n).or_insert(v).clone()
}

fn check_dim(a: &Point) -> Result<usize> {
    if !a.is_matrix() {
        return Err(Error::shape("the Gaussian representation needs a matrix"));
    }
    let n = a.dim();
    if n == 0 || n > BASES.len() {
        return Err(Error::param("N", format!("{n} is outside 1..={}", BASES.len())));
    }
    Ok(n)
}

/// `det(I+A)^{−1/2}` from the eigenvalues of `A`.
pub fn gaussian_det_exact(a: &Point) -> Result<f64> {
    check_dim(a)?;
    let ev = sym_eigenvalues(a)?;
    let floor = -1e-12 * a.max_abs().max(1.0);
    if let Some(l) = ev.iter().find(|&&l| l < floor) {
        return Err(Error::domain(format!("eigenvalue {l} is negative")));
    }
    Ok(ev.iter().map(|l| (1.0 + l.max(0.0)).powf(-0.5)).product())
}

/// Quadrature estimate of `∫ e^{−⟨Ax,x⟩} Π e^{−xᵢ²}/√π dx`. Partial sums
/// are taken over fixed chunks and added in order, so the value does not
/// depend on the thread count.
pub fn gaussian_det_quadrature(a: &Point) -> Result<f64> {
    let n = check_dim(a)?;
    let nodes = nodes(n);
    let m = a.as_slice();
    let partial: Vec<f64> = nodes
        .par_chunks(CHUNK * n)
        .map(|chunk| {
            chunk
                .chunks_exact(n)
                .map(|x| {
                    let mut q = 0.0;
                    for i in 0..n {
                        for j in 0..n {
                            q += x[i] * m[i * n + j] * x[j];
                        }
                    }
                    (-q).exp()
                })
                .sum::<f64>()
        })
        .collect();
    let v = partial.iter().sum::<f64>() / QMC_NODES as f64;
    if !v.is_finite() {
        return Err(Error::Numeric("Gaussian quadrature diverged".into()));
    }
    Ok(v)
}

/// Random PSD matrices of size `n`, scaled so every eigenvalue is at most
/// 2, each compared with the eigenvalue formula.
pub fn gaussian_detcert_check(n: usize, cfg: &CheckConfig) -> Result<CheckReport> {
    cfg.validate()?;
    if n == 0 || n > BASES.len() {
        return Err(Error::param("N", format!("{n} is outside 1..={}", BASES.len())));
    }
    let domain = ConeSpec::Psd(n);
    let ctx = Context {
        phi: None,
        outer: None,
        domain: &domain,
    };
    let draw = |_: u64, s: &mut Sampler| {
        let mut a = sample_with(&domain, s, cfg.scale, cfg.boundary_prob);
        let top = sym_eigenvalues(&a).map_or(0.0, |ev| ev.iter().fold(0.0f64, |m, &l| m.max(l)));
        if top > MAX_EIGENVALUE {
            a = a.scale(MAX_EIGENVALUE / top);
        }
        vec![Probe {
            ineq: Inequality::GaussianDetRepresentation { rel_tol: REL_TOL },
            points: points([("A", a)]),
        }]
    };
    let out = run_trials(&ctx, cfg.tolerance(), cfg.trials, |i| SeedStream::new(cfg.seed, i), draw)?;
    report(format!("GAUSSIAN_DET_REPRESENTATION[N={n}]"), cfg.clone(), &ctx, out, false)
}
