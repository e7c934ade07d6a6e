use crate::error::{Error, Result};
use crate::point::Point;

/// Sweeps stop once the off-diagonal Frobenius mass falls below this
/// fraction of `‖A‖_F`.
pub const JACOBI_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Spectral decomposition `A = Q·diag(values)·Qᵀ` of a symmetric matrix.
///
/// `values` is sorted nonincreasing and column `k` of `vectors` (row-major,
/// `n × n`) is the eigenvector paired with `values[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
    pub n: usize,
}

impl EigenDecomposition {
    pub fn vector_entry(&self, row: usize, col: usize) -> f64 {
        self.vectors[row * self.n + col]
    }

    /// `Q·diag(g(λ))·Qᵀ`.
    pub fn reconstruct_with(&self, g: impl Fn(f64) -> f64) -> Point {
        let mapped: Vec<f64> = self.values.iter().map(|&l| g(l)).collect();
        self.reconstruct_from(&mapped)
    }

    /// `Q·diag(mapped)·Qᵀ`, pairing `mapped[k]` with eigenvector `k`.
    pub fn reconstruct_from(&self, mapped: &[f64]) -> Point {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += self.vector_entry(i, k) * mapped[k] * self.vector_entry(j, k);
                }
                data[i * n + j] = s;
                data[j * n + i] = s;
            }
        }
        Point::from_flat_matrix_unchecked(n, data)
    }

    pub fn reconstruct(&self) -> Point {
        self.reconstruct_with(|l| l)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

/// Eigendecomposition of a symmetric matrix point by cyclic Jacobi rotations.
pub fn sym_eig(a: &Point) -> Result<EigenDecomposition> {
    if !a.is_matrix() {
        return Err(Error::shape("sym_eig expects a matrix point"));
    }
    if !a.is_finite() {
        return Err(Error::Numeric("matrix has non-finite entries".into()));
    }
    let n = a.dim();
    let (values, vectors) = jacobi(n, a.as_slice().to_vec())?;

    let mut order: Vec<usize> = (0..n).collect();
    // total_cmp keeps the order deterministic when eigenvalues tie
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    let sorted_values = order.iter().map(|&k| values[k]).collect();
    let mut sorted_vectors = vec![0.0; n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            sorted_vectors[row * n + new_col] = vectors[row * n + old_col];
        }
    }
    Ok(EigenDecomposition {
        values: sorted_values,
        vectors: sorted_vectors,
        n,
    })
}

/// Eigenvalues only, sorted nonincreasing.
pub fn sym_eigenvalues(a: &Point) -> Result<Vec<f64>> {
    Ok(sym_eig(a)?.values)
}

fn off_diagonal_mass(n: usize, a: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s.sqrt()
}

fn jacobi(n: usize, mut a: Vec<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || n == 1 {
        let values = (0..n).map(|i| a[i * n + i]).collect();
        return Ok((values, v));
    }
    let target = JACOBI_TOL * norm;

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_mass(n, &a) <= target {
            let values = (0..n).map(|i| a[i * n + i]).collect();
            return Ok((values, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = c * vrp - s * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
    }
    if off_diagonal_mass(n, &a) <= target {
        let values = (0..n).map(|i| a[i * n + i]).collect();
        return Ok((values, v));
    }
    Err(Error::Numeric(format!(
        "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps"
    )))
}
