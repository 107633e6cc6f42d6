//! Bordered Hankel determinants in exact rational arithmetic.
//!
//! The (N+1)×(N+1) determinant whose first N rows are moment rows
//! `(μ_i, …, μ_{i+N})` and whose last row is `(1, W, …, W^N)` is a degree-N
//! polynomial in W. Expanding along the final row reduces it to N+1 exact
//! N×N Hankel minors, each evaluated by fraction-free (Bareiss) elimination
//! after clearing denominators row-wise.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::bigreal::BigReal;

/// Determinant of a square rational matrix, exactly.
pub fn rational_det(mat: &[Vec<BigRational>]) -> BigRational {
    let n = mat.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut factor = BigRational::one();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in mat {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
        let mut l = BigInt::one();
        for e in row {
            l = l.lcm(e.denom());
        }
        let lr = BigRational::from_integer(l.clone());
        m.push(row.iter().map(|e| (e * &lr).to_integer()).collect());
        factor /= lr;
    }

    let mut sign_flip = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_flip = !sign_flip;
                }
                None => return BigRational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut det = factor * BigRational::from_integer(m[n - 1][n - 1].clone());
    if sign_flip {
        det = -det;
    }
    det
}

/// Coefficients (ascending in W) of the bordered-determinant polynomial of
/// order `n`, built from `moments[0..2n]` (`μ_0..μ_{2n-1}`). The coefficient
/// of `W^j` is `(-1)^{n+j}` times the Hankel minor that omits column `j`.
pub fn bordered_char_poly(moments: &[BigRational], n: usize) -> Vec<BigRational> {
    assert!(n >= 1, "bordered determinant needs order >= 1");
    assert!(
        moments.len() >= 2 * n,
        "bordered determinant of order {} needs moments through index {}",
        n,
        2 * n - 1
    );
    let mut coeffs = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let minor: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..=n)
                    .filter(|&col| col != j)
                    .map(|col| moments[i + col].clone())
                    .collect()
            })
            .collect();
        let mut c = rational_det(&minor);
        if (n + j) % 2 == 1 {
            c = -c;
        }
        coeffs.push(c);
    }
    coeffs
}

/// Evaluate the order-`n` bordered Hankel determinant at `w`, at `w`'s
/// working precision.
pub fn hankel_bordered_det(moments: &[BigRational], w: &BigReal, n: usize) -> BigReal {
    let prec = w.precision();
    let coeffs = bordered_char_poly(moments, n);
    let mut acc = BigReal::zero(prec);
    for c in coeffs.iter().rev() {
        acc = &(&acc * w) + &BigReal::from_rational(c, prec);
    }
    acc
}

/// Exact rank of the N×N Hankel moment matrix `S_ij = μ_{i+j}`, with the
/// elimination pivots as evidence.
pub fn hankel_rank(moments: &[BigRational], n: usize) -> (usize, Vec<BigRational>) {
    assert!(moments.len() >= 2 * n.saturating_sub(1) + 1 || n == 0);
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| moments[i + j].clone()).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for k in 0..n {
        match (k..n).find(|&i| !m[i][k].is_zero()) {
            Some(i) => {
                m.swap(k, i);
            }
            None => {
                // column exhausted below the current row: rank deficiency
                pivots.push(BigRational::zero());
                break;
            }
        }
        let pivot = m[k][k].clone();
        pivots.push(pivot.clone());
        rank += 1;
        for i in k + 1..n {
            let f = &m[i][k] / &pivot;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let update = &f * &m[k][j];
                m[i][j] -= update;
            }
        }
    }
    (rank, pivots)
}
