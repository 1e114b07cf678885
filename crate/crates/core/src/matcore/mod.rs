//! Dense symmetric linear algebra for small matrices: Jacobi eigensolver,
//! Cholesky, PSD square roots, definite-pencil generalized eigenproblems and
//! semidefinite-order tests.
//!
//! Everything here is sized for transmit dimensions up to a few dozen; no
//! attempt is made to compete with BLAS.

mod decomp;
mod matrix;

pub use decomp::{
    cholesky, gen_eig_pencil, inverse, logdet, lstsq, lu_det, min_eigenvalue, null_space,
    psd_clamp, psd_order_leq, psd_order_margin, psd_sqrt, solve_lower, solve_lower_transpose,
    spd_inverse, svd, sym_eig, PencilSpectrum, Svd, SymEig, PSD_TOL,
};
pub use matrix::{GeneralMatrix, SymMatrix};
