//! Exact Hamiltonian moments for Gaussian-polynomial trial states, and
//! Schrödinger eigenvalue estimates built from them.
//!
//! For a one-dimensional Hamiltonian `Ĥ = -d²/dx² + V(x)` with an even
//! polynomial potential and a Gaussian seed `⟨x|φ⟩ = exp(-a x²)`, every
//! moment `μ_j = ⟨φ|Ĥʲ|φ⟩` is an exact rational number (after removing a
//! common Gaussian normalization factor). This crate computes those moments
//! symbolically and feeds them to four spectral estimators:
//!
//! * `RRVM`   — Rayleigh–Ritz in the Krylov space spanned by `Ĥʲ|φ⟩`,
//!   solved as a generalized eigenproblem on a Hankel moment pencil;
//! * `CMPA`   — the connected-moments polynomial approach: coefficients
//!   annihilating shifted moment rows, eigenvalues as polynomial roots;
//! * `BISHOP` — the bordered Hankel determinant equation;
//! * `CMX_LT` — the connected-moments expansion resummation, kept as a
//!   comparison baseline.
//!
//! The first three are algebraically equivalent and the test suite checks
//! that their outputs agree to 30 decimal digits; the variational bound and
//! monotone convergence of the RRVM roots are asserted as hard invariants.
//! Linear algebra runs in arbitrary-precision arithmetic (`xprec`), because
//! Hankel moment pencils are severely ill-conditioned.
//!
//! The `momspec` binary sweeps orders for a configured problem and emits a
//! CSV convergence study; see the crate README.

pub mod bench;
pub mod cmx_lt;
pub mod gaussian_poly;
pub mod krylov_solver;
pub mod moment_engine;
pub mod xprec;

pub use gaussian_poly::{GaussianPolyState, GaussianWidth, Polynomial, Potential};
pub use moment_engine::MomentTable;
pub use xprec::BigReal;

/// Default working precision in bits for promoted (non-rational) arithmetic.
pub const DEFAULT_PRECISION: u32 = 256;
