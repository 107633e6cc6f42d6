//! Eigenvalue estimates from a moment table by three equivalent routes:
//! the Rayleigh–Ritz generalized eigenproblem on the Hankel pencil, the
//! connected-moments polynomial approach, and the bordered Hankel
//! determinant. All three recover the same N roots from `μ_0..μ_{2N-1}`;
//! the test suite exercises that equivalence to 30 decimal digits.
//!
//! Pencils are built from normalized moments `ν_j = μ_j/μ_0`, which leaves
//! every estimate exactly invariant under rescaling of the raw moments, and
//! are diagonally equilibrated by exact powers of two before factorization
//! so that rank tolerances act on angles between Krylov vectors rather than
//! raw moment magnitudes.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::moment_engine::{MomentTable, TableMeta};
use crate::xprec::{
    bordered_char_poly, cholesky, default_pivot_tol, hankel_rank, isolate_real_roots, sym_eigen,
    BigReal, LinalgError, RankReport, SymMatrix,
};

/// Cap on bracket doublings while hunting for all N real roots.
const MAX_BRACKET_DOUBLINGS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Rrvm,
    Cmpa,
    Bishop,
    CmxLt,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Rrvm, Method::Cmpa, Method::Bishop, Method::CmxLt];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Rrvm => "RRVM",
            Method::Cmpa => "CMPA",
            Method::Bishop => "BISHOP",
            Method::CmxLt => "CMX_LT",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "rrvm" => Ok(Method::Rrvm),
            "cmpa" => Ok(Method::Cmpa),
            "bishop" => Ok(Method::Bishop),
            "cmx_lt" | "cmxlt" => Ok(Method::CmxLt),
            other => Err(format!(
                "unknown method {:?} (expected rrvm, cmpa, bishop or cmx_lt)",
                other
            )),
        }
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("order {order} needs moments through index {needed}, table only reaches {available}")]
    InsufficientMoments {
        order: usize,
        needed: usize,
        available: usize,
    },
    #[error("Hankel moment matrix is numerically singular (rank {})", .0.rank)]
    SingularMomentMatrix(RankReport),
    #[error("isolated {found} real roots where {expected} were expected (precision exhausted?)")]
    RootCountMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The pair of N×N Hankel matrices `H_ji = ν_{i+j+1}`, `S_ji = ν_{i+j}`
/// promoted from the exact normalized moments.
#[derive(Debug, Clone)]
pub struct HankelPencil {
    n: usize,
    h: SymMatrix,
    s: SymMatrix,
    meta: TableMeta,
}

impl HankelPencil {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> &SymMatrix {
        &self.h
    }

    pub fn s(&self) -> &SymMatrix {
        &self.s
    }

    pub fn meta(&self) -> &TableMeta {
        &self.meta
    }
}

/// Search bracket for polynomial roots: `ν_1 ± 4N√I_2`, doubled on demand.
#[derive(Debug, Clone)]
struct RootBracket {
    center: BigReal,
    half_width: BigReal,
}

fn root_bracket(table: &MomentTable, n: usize, prec: u32) -> RootBracket {
    let center = BigReal::from_rational(&table.normalized()[1], prec);
    let fallback = center.abs().max(BigReal::one(prec));
    let half_width = match table.connected().get(1) {
        Some(i2) if *i2 > BigRational::zero() => {
            let root = BigReal::from_rational(i2, prec).sqrt();
            &BigReal::from_i64(4 * n as i64, prec) * &root
        }
        _ => fallback.clone(),
    };
    let half_width = half_width.max(fallback);
    RootBracket { center, half_width }
}

/// Coefficients `p_0..p_N` (with `p_0 = 1`) annihilating the shifted moment
/// rows: `Σ_j p_j ν_{i+j} = 0` for `i = 0..N-1`.
#[derive(Debug, Clone)]
pub struct CmpaCoefficients {
    p: Vec<BigReal>,
    order: usize,
    bracket: RootBracket,
}

impl CmpaCoefficients {
    pub fn order(&self) -> usize {
        self.order
    }

    /// `p_0..p_N`, ascending powers of W.
    pub fn coefficients(&self) -> &[BigReal] {
        &self.p
    }
}

/// One method's eigenvalue estimates at one order.
#[derive(Debug, Clone)]
pub struct SpectralEstimate {
    pub method: Method,
    pub order: usize,
    /// Ascending approximate eigenvalues; fewer than `order` entries when
    /// the Krylov space collapsed.
    pub values: Vec<BigReal>,
    /// Distinct moment values consumed: `2N` here, `2n+2` for CMX-LT.
    pub moments_used: usize,
    pub rank_report: Option<RankReport>,
}

impl SpectralEstimate {
    pub fn ground(&self) -> Option<&BigReal> {
        self.values.first()
    }

    /// Krylov collapse: the overlap matrix was rank-deficient and the
    /// estimate comes from the truncated leading pencil.
    pub fn collapsed(&self) -> bool {
        self.rank_report
            .as_ref()
            .map_or(false, |r| r.rank < self.order)
    }
}

fn require_moments(table: &MomentTable, n: usize, order: usize) -> Result<(), SolverError> {
    let needed = 2 * n - 1;
    if table.order() < needed {
        return Err(SolverError::InsufficientMoments {
            order,
            needed,
            available: table.order(),
        });
    }
    Ok(())
}

/// Build the order-N Hankel pencil from a table holding `ν_0..ν_{2N-1}`.
pub fn build_pencil(table: &MomentTable, n: usize, prec: u32) -> Result<HankelPencil, SolverError> {
    assert!(n >= 1, "pencil order must be at least 1");
    require_moments(table, n, n)?;
    let nu = table.normalized();
    let h = SymMatrix::from_rational_fn(n, prec, |i, j| nu[i + j + 1].clone());
    let s = SymMatrix::from_rational_fn(n, prec, |i, j| nu[i + j].clone());
    Ok(HankelPencil {
        n,
        h,
        s,
        meta: table.meta().clone(),
    })
}

/// Rayleigh–Ritz roots of the pencil: solve `H c = W S c` via Cholesky
/// `S = L Lᵀ` and a Jacobi eigensolve of `L⁻¹ H L⁻ᵀ`.
///
/// A rank-deficient S (the seed is an exact eigenstate, or orthogonal to
/// part of the spectrum) is not an error: the pencil is truncated to its
/// leading full-rank block and the estimate carries the rank report.
pub fn rrvm_eigenvalues(pencil: &HankelPencil) -> Result<SpectralEstimate, SolverError> {
    let n = pencil.n;
    let prec = pencil.s.precision();
    let tol = default_pivot_tol(prec);

    let exps = pencil.s.equilibration_exponents();
    let s_eq = pencil.s.scaled_by_exponents(&exps);
    let h_eq = pencil.h.scaled_by_exponents(&exps);

    let (l, report) = cholesky(&s_eq, &tol)?;
    let rank = report.rank;
    if rank == 0 {
        return Err(SolverError::SingularMomentMatrix(report));
    }

    let h_r = h_eq.leading_block(rank);
    // Y = L⁻¹ H_r, column by column
    let y_cols: Vec<Vec<BigReal>> = (0..rank)
        .map(|j| {
            let col: Vec<BigReal> = (0..rank).map(|i| h_r.get(i, j).clone()).collect();
            l.solve_forward(&col)
        })
        .collect();
    // A = (L⁻¹ Yᵀ)ᵀ, row by row
    let a_rows: Vec<Vec<BigReal>> = (0..rank)
        .map(|i| {
            let row: Vec<BigReal> = (0..rank).map(|j| y_cols[j][i].clone()).collect();
            l.solve_forward(&row)
        })
        .collect();
    let a = SymMatrix::from_fn(rank, prec, |i, j| a_rows[i][j].clone());
    let values = sym_eigen(&a)?;

    Ok(SpectralEstimate {
        method: Method::Rrvm,
        order: n,
        values,
        moments_used: 2 * n,
        rank_report: Some(report),
    })
}

/// Solve the CMPA linear system `Σ_{j=1}^{N} p_j ν_{i+j} = -ν_i` with
/// `p_0 = 1`. The system matrix is the Hankel matrix `H`, factored by the
/// same Cholesky kernel as the RRVM path.
pub fn cmpa_coefficients(
    table: &MomentTable,
    n: usize,
    prec: u32,
) -> Result<CmpaCoefficients, SolverError> {
    assert!(n >= 1, "CMPA order must be at least 1");
    require_moments(table, n, n)?;
    let nu = table.normalized();
    let h = SymMatrix::from_rational_fn(n, prec, |i, j| nu[i + j + 1].clone());
    let tol = default_pivot_tol(prec);

    let exps = h.equilibration_exponents();
    let h_eq = h.scaled_by_exponents(&exps);
    let (l, report) = cholesky(&h_eq, &tol)?;
    if report.rank < n {
        return Err(SolverError::SingularMomentMatrix(report));
    }

    let rhs: Vec<BigReal> = (0..n)
        .map(|i| {
            let b = BigReal::from_rational(&nu[i], prec);
            &(-&b) * &BigReal::two_pow(-exps[i], prec)
        })
        .collect();
    let y = l.solve_forward(&rhs);
    let q = l.solve_transposed(&y);

    let mut p = Vec::with_capacity(n + 1);
    p.push(BigReal::one(prec));
    for (k, qk) in q.into_iter().enumerate() {
        p.push(&qk * &BigReal::two_pow(-exps[k], prec));
    }
    Ok(CmpaCoefficients {
        p,
        order: n,
        bracket: root_bracket(table, n, prec),
    })
}

fn roots_in_expanding_bracket(
    coeffs: &[BigReal],
    bracket: &RootBracket,
    expected: usize,
) -> Result<Vec<BigReal>, SolverError> {
    let mut half = bracket.half_width.clone();
    let two = BigReal::from_i64(2, half.precision());
    let mut found = 0;
    for _ in 0..MAX_BRACKET_DOUBLINGS {
        let lo = &bracket.center - &half;
        let hi = &bracket.center + &half;
        let roots = isolate_real_roots(coeffs, &lo, &hi)?;
        found = roots.len();
        if found == expected {
            return Ok(roots);
        }
        half = &half * &two;
    }
    Err(SolverError::RootCountMismatch {
        expected,
        found,
    })
}

/// Roots of the CMPA characteristic polynomial `Σ p_j W^j = 0`; these are
/// exactly the RRVM roots.
pub fn cmpa_roots(coeffs: &CmpaCoefficients) -> Result<SpectralEstimate, SolverError> {
    let values = roots_in_expanding_bracket(&coeffs.p, &coeffs.bracket, coeffs.order)?;
    Ok(SpectralEstimate {
        method: Method::Cmpa,
        order: coeffs.order,
        values,
        moments_used: 2 * coeffs.order,
        rank_report: None,
    })
}

/// Roots of the order-N bordered Hankel determinant, computed exactly as a
/// rational polynomial in W and then isolated.
pub fn bishop_roots(
    table: &MomentTable,
    n: usize,
    prec: u32,
) -> Result<SpectralEstimate, SolverError> {
    assert!(n >= 1, "bordered determinant order must be at least 1");
    require_moments(table, n, n)?;
    let nu = table.normalized();
    let poly = bordered_char_poly(nu, n);
    if poly.iter().all(|c| c.is_zero()) {
        // dependent Hankel rows: the determinant vanishes identically
        let (rank, pivots) = hankel_rank(nu, n);
        return Err(SolverError::SingularMomentMatrix(RankReport {
            rank,
            first_deficient_pivot: Some(rank),
            pivot_magnitudes: pivots
                .iter()
                .map(|p| BigReal::from_rational(p, prec))
                .collect(),
        }));
    }
    let coeffs: Vec<BigReal> = poly
        .iter()
        .map(|c| BigReal::from_rational(c, prec))
        .collect();
    let values = roots_in_expanding_bracket(&coeffs, &root_bracket(table, n, prec), n)?;
    Ok(SpectralEstimate {
        method: Method::Bishop,
        order: n,
        values,
        moments_used: 2 * n,
        rank_report: None,
    })
}
