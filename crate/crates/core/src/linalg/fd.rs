//! Central finite differences on vector points.
//!
//! Callers pass the step explicitly; [`gradient_step`] and [`hessian_step`]
//! give the defaults used throughout the crate. A stencil point outside the
//! function's domain surfaces as whatever error the function returns, so the
//! caller can shrink the step or move the base point.

use crate::error::{Error, Result};
use crate::point::Point;

pub fn gradient_step(x: &Point) -> f64 {
    1e-5 * x.max_abs().max(1.0)
}

pub fn hessian_step(x: &Point) -> f64 {
    1e-4 * x.max_abs().max(1.0)
}

fn check_step(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::param("h", "finite-difference step must be positive"))
    }
}

fn bump(x: &Point, moves: &[(usize, f64)]) -> Point {
    let mut data = x.as_slice().to_vec();
    for &(i, d) in moves {
        data[i] += d;
    }
    x.with_data(data)
}

pub fn fd_gradient<F>(f: F, x: &Point, h: f64) -> Result<Vec<f64>>
where
    F: Fn(&Point) -> Result<f64>,
{
    check_step(h)?;
    if x.is_matrix() {
        return Err(Error::Capability(
            "coordinate gradients are defined for vector points only".into(),
        ));
    }
    (0..x.dim())
        .map(|i| {
            let up = f(&bump(x, &[(i, h)]))?;
            let down = f(&bump(x, &[(i, -h)]))?;
            Ok((up - down) / (2.0 * h))
        })
        .collect()
}

/// Symmetric central-difference Hessian; the diagonal uses the same
/// four-point stencil with `i = j`, i.e. steps of `±2h`.
pub fn fd_hessian<F>(f: F, x: &Point, h: f64) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&Point) -> Result<f64>,
{
    check_step(h)?;
    if x.is_matrix() {
        return Err(Error::Capability(
            "coordinate Hessians are defined for vector points only".into(),
        ));
    }
    let n = x.dim();
    let mut hess = vec![vec![0.0; n]; n];
    let denom = 4.0 * h * h;
    for i in 0..n {
        for j in i..n {
            let pp = f(&bump(x, &[(i, h), (j, h)]))?;
            let pm = f(&bump(x, &[(i, h), (j, -h)]))?;
            let mp = f(&bump(x, &[(i, -h), (j, h)]))?;
            let mm = f(&bump(x, &[(i, -h), (j, -h)]))?;
            let v = ((pp + mm) - (pm + mp)) / denom;
            hess[i][j] = v;
            hess[j][i] = v;
        }
    }
    Ok(hess)
}

/// `(f(x + h·w) − f(x − h·w)) / 2h`; works for matrix points too.
pub fn fd_directional<F>(f: F, x: &Point, w: &Point, h: f64) -> Result<f64>
where
    F: Fn(&Point) -> Result<f64>,
{
    check_step(h)?;
    let up = f(&x.add(&w.scale(h))?)?;
    let down = f(&x.sub(&w.scale(h))?)?;
    Ok((up - down) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shannon(p: &Point) -> Result<f64> {
        p.as_slice()
            .iter()
            .map(|&x| {
                if x < 0.0 {
                    Err(Error::domain("negative coordinate"))
                } else if x == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(-x * x.ln())
                }
            })
            .sum()
    }

    #[test]
    fn affine_gradient_is_exact() {
        let a = [1.5, -2.0, 0.25];
        let f = |p: &Point| Ok(p.as_slice().iter().zip(a).map(|(x, c)| x * c).sum::<f64>() + 3.0);
        let x = Point::vector(vec![0.3, 1.2, -4.0]);
        let g = fd_gradient(f, &x, gradient_step(&x)).unwrap();
        for (gi, ai) in g.iter().zip(a) {
            assert!((gi - ai).abs() < 1e-9);
        }
    }

    #[test]
    fn squared_norm_hessian() {
        let f = |p: &Point| Ok(p.as_slice().iter().map(|x| x * x).sum::<f64>());
        let x = Point::vector(vec![0.7, -1.1, 2.0]);
        let h = fd_hessian(f, &x, hessian_step(&x)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 2.0 } else { 0.0 };
                assert!((h[i][j] - target).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn shannon_hessian_at_ones() {
        let x = Point::vector(vec![1.0, 1.0]);
        let h = fd_hessian(shannon, &x, hessian_step(&x)).unwrap();
        assert!((h[0][0] + 1.0).abs() < 1e-5);
        assert!((h[1][1] + 1.0).abs() < 1e-5);
        assert!(h[0][1].abs() < 1e-5);
    }

    #[test]
    fn stencil_outside_domain_errors() {
        let x = Point::vector(vec![1e-6, 1.0]);
        assert!(fd_hessian(shannon, &x, 1e-4).unwrap_err().is_domain());
    }

    #[test]
    fn directional_on_matrices() {
        // d/dt trace(A + tW) = trace(W)
        let f = |p: &Point| Ok(crate::linalg::trace(p));
        let a = Point::identity(3);
        let w = Point::diag(&[1.0, 2.0, 3.0]);
        let d = fd_directional(f, &a, &w, 1e-5).unwrap();
        assert!((d - 6.0).abs() < 1e-9);
    }
}
