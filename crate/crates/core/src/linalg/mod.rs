//! Dense symmetric linear algebra, finite differences and a few special
//! functions.

mod eig;
mod fd;
mod quad;
mod scalar;
mod special;
mod spectral;

pub use eig::{sym_eig, sym_eigenvalues, EigenDecomposition, JACOBI_MAX_SWEEPS, JACOBI_TOL};
pub use fd::{fd_directional, fd_gradient, fd_hessian, gradient_step, hessian_step};
pub use quad::tanh_sinh;
pub use scalar::{Interval, ScalarFunction};
pub use special::gamma;
pub use spectral::{
    det, log_det, matmul, matrix_function, schatten_norm, trace, trace_pow,
    vn_entropy, weyl_check, CLAMP_WINDOW, OPEN_ENDPOINT_GUARD,
};
