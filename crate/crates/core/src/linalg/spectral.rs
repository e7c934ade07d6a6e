use crate::error::{Error, Result};
use crate::linalg::eig::{sym_eig, sym_eigenvalues};
use crate::linalg::scalar::ScalarFunction;
use crate::point::Point;

/// Eigenvalues within this (relative) window of a closed domain endpoint are
/// snapped onto it; sampled PSD matrices carry rounding noise of this order.
pub const CLAMP_WINDOW: f64 = 1e-12;

/// Open lower endpoints need eigenvalues at least this far inside.
pub const OPEN_ENDPOINT_GUARD: f64 = 1e-12;

fn require_matrix(a: &Point, op: &str) -> Result<()> {
    if a.is_matrix() {
        Ok(())
    } else {
        Err(Error::shape(format!("{op} expects a matrix point")))
    }
}

fn window(values: &[f64]) -> f64 {
    CLAMP_WINDOW * values.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
}

/// Spectral calculus: `Q·f(Λ)·Qᵀ`.
pub fn matrix_function(f: &ScalarFunction, a: &Point) -> Result<Point> {
    require_matrix(a, "matrix_function")?;
    let e = sym_eig(a)?;
    let dom = f.domain();
    let w = window(&e.values);
    let mut mapped = Vec::with_capacity(e.n);
    for &l in &e.values {
        let mut x = l;
        if !dom.contains(x) {
            if !dom.lo_open && x < dom.lo && dom.lo - x <= w {
                x = dom.lo;
            } else if !dom.hi_open && x > dom.hi && x - dom.hi <= w {
                x = dom.hi;
            } else {
                return Err(Error::domain(format!(
                    "eigenvalue {l} is outside {} for `{}`",
                    dom,
                    f.label()
                )));
            }
        }
        if dom.lo_open && dom.lo.is_finite() && x - dom.lo <= OPEN_ENDPOINT_GUARD {
            return Err(Error::domain(format!(
                "eigenvalue {l} is too close to the open endpoint {} of `{}`",
                dom.lo,
                f.label()
            )));
        }
        mapped.push(f.eval(x)?);
    }
    Ok(e.reconstruct_from(&mapped))
}

pub fn trace(a: &Point) -> f64 {
    let n = a.dim();
    (0..n).map(|i| a.get(i, i)).sum()
}

/// Row-major product of two square matrices (the result need not be symmetric).
pub fn matmul(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(a: &Point) -> Result<f64> {
    require_matrix(a, "det")?;
    let n = a.dim();
    let mut m = a.as_slice().to_vec();
    let mut d = 1.0;
    for col in 0..n {
        let mut piv = col;
        for r in (col + 1)..n {
            if m[r * n + col].abs() > m[piv * n + col].abs() {
                piv = r;
            }
        }
        let p = m[piv * n + col];
        if p == 0.0 {
            return Ok(0.0);
        }
        if piv != col {
            for j in 0..n {
                m.swap(col * n + j, piv * n + j);
            }
            d = -d;
        }
        d *= p;
        for r in (col + 1)..n {
            let factor = m[r * n + col] / p;
            if factor == 0.0 {
                continue;
            }
            for j in col..n {
                m[r * n + j] -= factor * m[col * n + j];
            }
        }
    }
    Ok(d)
}

/// `Σ log λ_k`; requires `λ_min > 1e-12`.
pub fn log_det(a: &Point) -> Result<f64> {
    require_matrix(a, "log_det")?;
    let values = sym_eigenvalues(a)?;
    let lmin = values.last().copied().unwrap_or(1.0);
    if lmin <= OPEN_ENDPOINT_GUARD {
        return Err(Error::domain(format!(
            "log det needs a positive definite matrix; smallest eigenvalue is {lmin}"
        )));
    }
    Ok(values.iter().map(|l| l.ln()).sum())
}

fn clamp_nonneg(values: &mut [f64], what: &str) -> Result<()> {
    let w = window(values);
    for l in values.iter_mut() {
        if *l < -w {
            return Err(Error::domain(format!(
                "{what} needs a positive semidefinite matrix; found eigenvalue {l}"
            )));
        }
        if *l < 0.0 {
            *l = 0.0;
        }
    }
    Ok(())
}

/// `Σ λ_k^p`. For `p < 1` the matrix must be PSD, eigenvalues inside the
/// clamping window count as zero, and `0^p := 0`.
pub fn trace_pow(a: &Point, p: f64) -> Result<f64> {
    require_matrix(a, "trace_pow")?;
    let mut values = sym_eigenvalues(a)?;
    if p < 1.0 {
        clamp_nonneg(&mut values, "trace_pow with p < 1")?;
        let w = window(&values);
        Ok(values
            .iter()
            .map(|&l| if l <= w { 0.0 } else { l.powf(p) })
            .sum())
    } else if p.fract() == 0.0 {
        Ok(values.iter().map(|&l| l.powi(p as i32)).sum())
    } else {
        clamp_nonneg(&mut values, "trace_pow with fractional p")?;
        Ok(values.iter().map(|&l| l.powf(p)).sum())
    }
}

/// `−Σ λ_k log λ_k` with `0·log 0 := 0`.
pub fn vn_entropy(a: &Point) -> Result<f64> {
    require_matrix(a, "vn_entropy")?;
    let mut values = sym_eigenvalues(a)?;
    clamp_nonneg(&mut values, "von Neumann entropy")?;
    Ok(-values
        .iter()
        .map(|&l| if l > 0.0 { l * l.ln() } else { 0.0 })
        .sum::<f64>())
}

/// Schatten `p`-norm, `p ∈ [1, ∞]` (`f64::INFINITY` for the operator norm).
pub fn schatten_norm(a: &Point, p: f64) -> Result<f64> {
    require_matrix(a, "schatten_norm")?;
    if !(p >= 1.0) {
        return Err(Error::param("p", "Schatten norms need p >= 1"));
    }
    let values = sym_eigenvalues(a)?;
    if p.is_infinite() {
        return Ok(values.iter().fold(0.0, |m, l| m.max(l.abs())));
    }
    Ok(values.iter().map(|l| l.abs().powf(p)).sum::<f64>().powf(1.0 / p))
}

/// Weyl's monotonicity test: `λ_i↓(A) ≤ λ_i↓(B) + tol` for every `i`.
pub fn weyl_check(a: &Point, b: &Point, tol: f64) -> Result<bool> {
    require_matrix(a, "weyl_check")?;
    if a.dim() != b.dim() || !b.is_matrix() {
        return Err(Error::shape("weyl_check needs two matrices of equal order"));
    }
    let la = sym_eigenvalues(a)?;
    let lb = sym_eigenvalues(b)?;
    Ok(la.iter().zip(&lb).all(|(x, y)| *x <= *y + tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedStream;

    fn random_psd(n: usize, seed: u64) -> Point {
        let mut s = SeedStream::new(seed, 11).sampler();
        let g: Vec<f64> = (0..n * n).map(|_| s.gaussian()).collect();
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = (0..n).map(|k| g[i * n + k] * g[j * n + k]).sum::<f64>() / n as f64;
            }
        }
        Point::from_flat_matrix_unchecked(n, data)
    }

    // Cofactor expansion, independent of the elimination path.
    fn cofactor_det(n: usize, m: &[f64]) -> f64 {
        if n == 1 {
            return m[0];
        }
        let mut total = 0.0;
        for c in 0..n {
            let mut minor = Vec::with_capacity((n - 1) * (n - 1));
            for r in 1..n {
                for cc in 0..n {
                    if cc != c {
                        minor.push(m[r * n + cc]);
                    }
                }
            }
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * m[c] * cofactor_det(n - 1, &minor);
        }
        total
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&Point::diag(&[2.0, 3.0])).unwrap(), 6.0);
        assert_eq!(det(&Point::zero_matrix(2)).unwrap(), 0.0);
    }

    #[test]
    fn det_matches_eigen_product_and_cofactors() {
        for seed in 0..100 {
            let n = 1 + seed as usize % 5;
            let a = random_psd(n, seed);
            let d = det(&a).unwrap();
            let prod: f64 = sym_eigenvalues(&a).unwrap().iter().product();
            assert!((d - prod).abs() <= 1e-9 * d.abs().max(1e-300), "{d} vs {prod}");
            if n <= 3 {
                let c = cofactor_det(n, a.as_slice());
                assert!((d - c).abs() <= 1e-9 * d.abs().max(1.0));
            }
        }
    }

    #[test]
    fn entropy_of_maximally_mixed_qubit() {
        let s = vn_entropy(&Point::diag(&[0.5, 0.5])).unwrap();
        assert!((s - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(vn_entropy(&Point::zero_matrix(3)).unwrap(), 0.0);
        assert!(vn_entropy(&Point::diag(&[1.0, -0.1])).is_err());
    }

    #[test]
    fn schatten_examples() {
        let a = Point::diag(&[3.0, -4.0]);
        assert_eq!(schatten_norm(&a, f64::INFINITY).unwrap(), 4.0);
        assert!((schatten_norm(&a, 2.0).unwrap() - 5.0).abs() < 1e-14);
        assert_eq!(schatten_norm(&a, 1.0).unwrap(), 7.0);
        assert!(schatten_norm(&a, 0.5).is_err());
    }

    #[test]
    fn log_det_domain() {
        assert!((log_det(&Point::diag(&[2.0, 3.0])).unwrap() - 6f64.ln()).abs() < 1e-14);
        assert!(log_det(&Point::diag(&[1.0, 0.0])).is_err());
    }

    #[test]
    fn trace_pow_conventions() {
        let a = Point::diag(&[4.0, 0.0]);
        assert_eq!(trace_pow(&a, 0.5).unwrap(), 2.0);
        assert_eq!(trace_pow(&a, 0.0).unwrap(), 1.0);
        assert_eq!(trace_pow(&a, 2.0).unwrap(), 16.0);
        assert!(trace_pow(&Point::diag(&[1.0, -1.0]), 0.5).is_err());
    }

    #[test]
    fn matrix_function_examples() {
        let a = random_psd(4, 3);
        let same = matrix_function(&ScalarFunction::identity(), &a).unwrap();
        assert!(same.sub(&a).unwrap().norm() <= 1e-10);
        let sq = matrix_function(&ScalarFunction::square(), &Point::diag(&[2.0, 3.0])).unwrap();
        assert!(sq.sub(&Point::diag(&[4.0, 9.0])).unwrap().norm() < 1e-14);
        let root = matrix_function(&ScalarFunction::sqrt(), &a).unwrap();
        let back = Point::from_flat_matrix_unchecked(4, matmul(4, root.as_slice(), root.as_slice()));
        assert!(back.sub(&a).unwrap().norm() <= 1e-8);
        let err = matrix_function(&ScalarFunction::ln(), &Point::diag(&[1.0, -2.0])).unwrap_err();
        assert!(err.to_string().contains("-2"), "{err}");
    }

    #[test]
    fn weyl_examples() {
        assert!(weyl_check(&Point::identity(2), &Point::identity(2).scale(2.0), 0.0).unwrap());
        assert!(!weyl_check(&Point::diag(&[2.0, 0.0]), &Point::diag(&[0.0, 1.0]), 1e-12).unwrap());
    }

    #[test]
    fn schatten_is_monotone_on_psd() {
        for seed in 0..500 {
            let n = 2 + seed as usize % 3;
            let a = random_psd(n, seed);
            let b = a.add(&random_psd(n, seed + 10_000)).unwrap();
            for p in [1.0, 2.0, f64::INFINITY] {
                assert!(schatten_norm(&a, p).unwrap() <= schatten_norm(&b, p).unwrap() + 1e-9);
            }
        }
    }
}
