//! Finite atomic measures on the dual cone and their Laplace transforms
//! `Φ(x) = Σ wᵢ e^{−⟨x,uᵢ⟩}`, which are completely monotone.

use serde::{Deserialize, Serialize};

use crate::cone::ConeSpec;
use crate::diff::FunctionHandle;
use crate::error::{Error, Result};
use crate::linalg::sym_eigenvalues;
use crate::point::Point;

/// Eigenvalue floor for PSD dual points.
const PSD_DUAL_TOL: f64 = 1e-12;

/// Atoms `(w, u)` with `w ≥ 0` and `u` in the dual cone. Serializes as
/// `[[w, u], …]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaplaceCertificate {
    pub atoms: Vec<(f64, Point)>,
}

impl LaplaceCertificate {
    pub fn new(atoms: Vec<(f64, Point)>) -> Self {
        LaplaceCertificate { atoms }
    }

    /// Checks weights and dual membership against `cone`. Orthant-like
    /// cones are self-dual coordinatewise, PSD cones under `trace(AU)`.
    pub fn validate(&self, cone: &ConeSpec) -> Result<()> {
        if self.atoms.is_empty() {
            return Err(Error::Certificate("no atoms".into()));
        }
        for (k, (w, u)) in self.atoms.iter().enumerate() {
            if !(w.is_finite() && *w >= 0.0) {
                return Err(Error::Certificate(format!("atom {k}: weight {w} is negative")));
            }
            cone.check_shape(u)
                .map_err(|e| Error::Certificate(format!("atom {k}: {e}")))?;
            dual_member(cone, u.as_slice(), u.is_matrix())
                .map_err(|why| Error::Certificate(format!("atom {k}: {why}")))?;
        }
        Ok(())
    }
}

fn dual_member(cone: &ConeSpec, flat: &[f64], matrix: bool) -> std::result::Result<(), String> {
    match cone {
        ConeSpec::NonnegOrthant(_) | ConeSpec::PositiveOrthant(_) | ConeSpec::GridLp { .. } => {
            match flat.iter().position(|&c| !(c >= 0.0)) {
                Some(i) => Err(format!("coordinate {i} = {} is not in the dual orthant", flat[i])),
                None => Ok(()),
            }
        }
        ConeSpec::Psd(n) | ConeSpec::PositiveDefinite(n) if matrix => {
            let u = Point::from_flat_matrix(*n, flat.to_vec()).map_err(|e| e.to_string())?;
            let lmin = sym_eigenvalues(&u)
                .map_err(|e| e.to_string())?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            if lmin < -PSD_DUAL_TOL {
                Err(format!("λmin = {lmin} is below −{PSD_DUAL_TOL}"))
            } else {
                Ok(())
            }
        }
        ConeSpec::Product(factors) => {
            for (f, r) in factors.iter().zip(cone.factor_ranges()) {
                dual_member(f, &flat[r], f.is_matrix())?;
            }
            Ok(())
        }
        other => Err(format!("{} has no supported dual cone", other.family())),
    }
}

/// `Σ wᵢ e^{−⟨x,uᵢ⟩}`.
pub fn laplace_eval(cert: &LaplaceCertificate, x: &Point) -> Result<f64> {
    let mut sum = 0.0;
    for (w, u) in &cert.atoms {
        sum += w * (-x.inner(u)?).exp();
    }
    Ok(sum)
}

/// Validates `cert` against `cone` and wraps its transform as a function.
pub fn laplace_as_handle(cert: &LaplaceCertificate, cone: &ConeSpec) -> Result<FunctionHandle> {
    cone.validate()?;
    cert.validate(cone)?;
    let cert = cert.clone();
    Ok(FunctionHandle::new(
        format!("laplace[{} atoms]", cert.atoms.len()),
        cone.clone(),
        move |x| laplace_eval(&cert, x),
    ))
}
