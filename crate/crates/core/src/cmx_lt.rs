//! CMX-LT: the connected-moments expansion resummation used as the
//! comparison baseline. The ground-state estimate at order n is
//! `I_1 - bᵀA⁻¹b` with `b_i = I_{i+1}` and `A_ij = I_{i+j+1}` for
//! `i, j = 1..n`; order 0 is the mean energy `I_1 = ν_1`.
//!
//! The connected-moment Hankel matrix `A` is indefinite in general and is
//! known to go singular — that failure mode is surfaced as an error with
//! rank evidence rather than silently skipped.

use thiserror::Error;

use crate::krylov_solver::{Method, SpectralEstimate};
use crate::moment_engine::MomentTable;
use crate::xprec::{default_pivot_tol, solve_with_pivoting, BigReal, RankReport, SymMatrix};

/// Size of the connected-moment correction block.
///
/// Order n consumes `I_1..I_{2n+1}`, i.e. `M = 2n + 2` raw moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CmxOrder(pub usize);

impl CmxOrder {
    pub fn value(&self) -> usize {
        self.0
    }

    pub fn moments_used(&self) -> usize {
        2 * self.0 + 2
    }
}

#[derive(Debug, Error)]
pub enum CmxError {
    #[error(
        "CMX-LT order {order} needs connected moments through I_{needed}, table only has {available}"
    )]
    InsufficientConnectedMoments {
        order: usize,
        needed: usize,
        available: usize,
    },
    #[error("connected-moment Hankel matrix is numerically singular (rank {})", .0.rank)]
    SingularConnectedMatrix(RankReport),
}

/// Ground-state estimate `I_1 - bᵀA⁻¹b` at the given order.
pub fn cmx_lt_estimate(
    table: &MomentTable,
    order: CmxOrder,
    prec: u32,
) -> Result<SpectralEstimate, CmxError> {
    let n = order.value();
    let connected = table.connected();
    let needed = 2 * n + 1;
    if connected.len() < needed {
        return Err(CmxError::InsufficientConnectedMoments {
            order: n,
            needed,
            available: connected.len(),
        });
    }
    // connected[k] holds I_{k+1}
    let i1 = BigReal::from_rational(&connected[0], prec);
    let estimate = if n == 0 {
        i1
    } else {
        let a = SymMatrix::from_rational_fn(n, prec, |i, j| connected[i + j + 2].clone());
        let b: Vec<BigReal> = (1..=n)
            .map(|i| BigReal::from_rational(&connected[i], prec))
            .collect();

        let exps = a.equilibration_exponents();
        let a_eq = a.scaled_by_exponents(&exps);
        let b_eq: Vec<BigReal> = b
            .iter()
            .zip(&exps)
            .map(|(bi, e)| bi * &BigReal::two_pow(-e, prec))
            .collect();
        let x_eq = solve_with_pivoting(&a_eq, &b_eq, &default_pivot_tol(prec))
            .map_err(CmxError::SingularConnectedMatrix)?;

        // undo the symmetric scaling: x = D x'
        let mut correction = BigReal::zero(prec);
        for i in 0..n {
            let xi = &x_eq[i] * &BigReal::two_pow(-exps[i], prec);
            correction = &correction + &(&b[i] * &xi);
        }
        &i1 - &correction
    };
    Ok(SpectralEstimate {
        method: Method::CmxLt,
        order: n,
        values: vec![estimate],
        moments_used: order.moments_used(),
        rank_report: None,
    })
}
