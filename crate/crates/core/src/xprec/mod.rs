//! Arbitrary-precision real linear algebra kernel.
//!
//! Hankel moment pencils are severely ill-conditioned, so every solve runs
//! on [`BigReal`] values at a configurable working precision (256 bits by
//! default). The kernel provides Cholesky factorization with rank
//! detection, cyclic Jacobi eigenvalues, Sturm-sequence root isolation, and
//! exact rational bordered Hankel determinants.

mod bigreal;
mod hankel;
mod matrix;
mod roots;

pub use bigreal::{BigReal, ParseRealError, MIN_PRECISION};
pub use hankel::{bordered_char_poly, hankel_bordered_det, hankel_rank, rational_det};
pub use matrix::{
    cholesky, solve_with_pivoting, sym_eigen, LinalgError, LowerTriangular, RankReport, SymMatrix,
    MAX_JACOBI_SWEEPS,
};
pub use roots::isolate_real_roots;

/// Default rank tolerance: `2^{-(precision/2)}`, relative to the largest
/// diagonal entry. Separates genuine Krylov collapse from conditioning loss.
pub fn default_pivot_tol(prec: u32) -> BigReal {
    BigReal::two_pow(-(prec as i64 / 2), prec)
}
