//! Seeded random channel and covariance generators used by the test suites,
//! the verification sweeps and the benches.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::matcore::{GeneralMatrix, SymMatrix};

/// Matrix with i.i.d. standard normal entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> GeneralMatrix {
    GeneralMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Positive definite `A·Aᵀ/t + floor·I` with Gaussian `A`.
pub fn positive_definite<R: Rng + ?Sized>(rng: &mut R, dim: usize, floor: f64) -> SymMatrix {
    let a = gaussian_matrix(rng, dim, dim);
    a.gram()
        .scale(1.0 / dim as f64)
        .add(&SymMatrix::identity(dim).scale(floor))
        .expect("same dimension")
}

/// PSD matrix of the given rank, `A·Aᵀ` with `A` of shape `dim × rank`.
pub fn psd_of_rank<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> SymMatrix {
    gaussian_matrix(rng, dim, rank).transpose().gram()
}

/// Rank-deficient square matrix: `u·vᵀ` sums of `rank < dim` Gaussian outer
/// products.
pub fn singular_square<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> GeneralMatrix {
    let u = gaussian_matrix(rng, dim, rank);
    let v = gaussian_matrix(rng, rank, dim);
    u.matmul(&v).expect("inner dimensions agree")
}
