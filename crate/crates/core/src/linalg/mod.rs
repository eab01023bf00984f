//! Dense real linear algebra: products, Cholesky, Jacobi SVD, power
//! iteration, and a nonsymmetric eigenvalue oracle.

mod eigen;
mod matrix;
mod power;
mod svd;

pub use eigen::{eigenvalues_dense, ComplexSpectrum, MAX_DENSE_DIM};
pub use matrix::{cholesky_solve, distance, dot, norm, Matrix};
pub use power::{power_iteration_sigma1, PowerEstimate};
pub use svd::{numerical_rank, singular_values, svd, SvdResult, DEFAULT_RANK_TOL};
