//! Symmetric matrices over [`BigReal`]: Cholesky factorization with rank
//! detection, cyclic Jacobi eigenvalues, and a partially pivoted linear
//! solve for the indefinite systems of the CMX baseline.

use num_rational::BigRational;
use thiserror::Error;

use super::bigreal::BigReal;

/// Cap on Jacobi sweeps before reporting non-convergence.
pub const MAX_JACOBI_SWEEPS: usize = 200;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is indefinite: pivot {pivot} is negative beyond tolerance")]
    IndefiniteMatrix { pivot: usize },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
    #[error("root search interval is empty (lo >= hi)")]
    IntervalTooSmall,
}

/// Symmetric matrix; only the lower triangle is stored, so symmetry holds by
/// construction. Entries share a working precision fixed at build time.
#[derive(Debug, Clone)]
pub struct SymMatrix {
    n: usize,
    prec: u32,
    lower: Vec<BigReal>,
}

fn tri_len(n: usize) -> usize {
    n * (n + 1) / 2
}

fn tri_idx(i: usize, j: usize) -> usize {
    debug_assert!(j <= i);
    i * (i + 1) / 2 + j
}

impl SymMatrix {
    /// Build from a callback invoked on the lower triangle (`i >= j`).
    pub fn from_fn(n: usize, prec: u32, mut f: impl FnMut(usize, usize) -> BigReal) -> Self {
        let mut lower = Vec::with_capacity(tri_len(n));
        for i in 0..n {
            for j in 0..=i {
                lower.push(f(i, j).with_precision(prec));
            }
        }
        SymMatrix { n, prec, lower }
    }

    /// Promote exact rational entries to `prec` bits.
    pub fn from_rational_fn(
        n: usize,
        prec: u32,
        mut f: impl FnMut(usize, usize) -> BigRational,
    ) -> Self {
        SymMatrix::from_fn(n, prec, |i, j| BigReal::from_rational(&f(i, j), prec))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn get(&self, i: usize, j: usize) -> &BigReal {
        assert!(i < self.n && j < self.n);
        if j <= i {
            &self.lower[tri_idx(i, j)]
        } else {
            &self.lower[tri_idx(j, i)]
        }
    }

    /// Largest entry magnitude (max norm).
    pub fn max_abs(&self) -> BigReal {
        let mut best = BigReal::zero(self.prec);
        for e in &self.lower {
            let a = e.abs();
            if a > best {
                best = a;
            }
        }
        best
    }

    pub fn trace(&self) -> BigReal {
        let mut acc = BigReal::zero(self.prec);
        for i in 0..self.n {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    /// Leading principal `k × k` submatrix.
    pub fn leading_block(&self, k: usize) -> SymMatrix {
        assert!(k <= self.n);
        SymMatrix::from_fn(k, self.prec, |i, j| self.get(i, j).clone())
    }

    /// Symmetric power-of-two equilibration: entry `(i,j)` is scaled by
    /// `2^{-(e_i+e_j)}` where `e_i` halves the magnitude exponent of the
    /// diagonal entry `(i,i)` (falling back to the row maximum when the
    /// diagonal vanishes). Scaling by powers of two is exact, and the
    /// congruence preserves generalized eigenvalues when the same exponents
    /// are applied to both matrices of a pencil. For positive definite
    /// matrices this brings every diagonal entry into `[1/4, 2)`.
    pub fn equilibration_exponents(&self) -> Vec<i64> {
        let mut exps = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut basis = self.get(i, i).abs();
            if basis.is_zero() {
                for j in 0..self.n {
                    let a = self.get(i, j).abs();
                    if a > basis {
                        basis = a;
                    }
                }
            }
            exps.push(match basis.msb() {
                Some(h) => h.div_euclid(2),
                None => 0,
            });
        }
        exps
    }

    pub fn scaled_by_exponents(&self, exps: &[i64]) -> SymMatrix {
        assert_eq!(exps.len(), self.n);
        SymMatrix::from_fn(self.n, self.prec, |i, j| {
            let e = exps[i] + exps[j];
            self.get(i, j) * &BigReal::two_pow(-e, self.prec)
        })
    }
}

/// Packed lower-triangular factor.
#[derive(Debug, Clone)]
pub struct LowerTriangular {
    n: usize,
    data: Vec<BigReal>,
}

impl LowerTriangular {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigReal {
        assert!(j <= i && i < self.n);
        &self.data[tri_idx(i, j)]
    }

    /// Solve `L y = b` by forward substitution.
    pub fn solve_forward(&self, b: &[BigReal]) -> Vec<BigReal> {
        assert_eq!(b.len(), self.n);
        let mut y: Vec<BigReal> = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut acc = b[i].clone();
            for (j, yj) in y.iter().enumerate() {
                acc = &acc - &(self.get(i, j) * yj);
            }
            y.push(&acc / self.get(i, i));
        }
        y
    }

    /// Solve `Lᵀ x = b` by back substitution.
    pub fn solve_transposed(&self, b: &[BigReal]) -> Vec<BigReal> {
        assert_eq!(b.len(), self.n);
        let mut x: Vec<Option<BigReal>> = vec![None; self.n];
        for i in (0..self.n).rev() {
            let mut acc = b[i].clone();
            for j in i + 1..self.n {
                acc = &acc - &(self.get(j, i) * x[j].as_ref().unwrap());
            }
            x[i] = Some(&acc / self.get(i, i));
        }
        x.into_iter().map(|v| v.unwrap()).collect()
    }

    /// `L·Lᵀ`, used by reconstruction tests.
    pub fn reconstruct(&self) -> SymMatrix {
        let prec = self
            .data
            .first()
            .map(|v| v.precision())
            .unwrap_or(crate::DEFAULT_PRECISION);
        SymMatrix::from_fn(self.n, prec, |i, j| {
            let mut acc = BigReal::zero(prec);
            for k in 0..=j.min(i) {
                acc = &acc + &(self.get(i, k) * self.get(j, k));
            }
            acc
        })
    }
}

/// Outcome of a rank-revealing factorization: the detected rank, the first
/// pivot that fell under tolerance (if any), and the pivot values in
/// elimination order as evidence.
#[derive(Debug, Clone)]
pub struct RankReport {
    pub rank: usize,
    pub first_deficient_pivot: Option<usize>,
    pub pivot_magnitudes: Vec<BigReal>,
}

impl RankReport {
    pub fn is_full_rank(&self, n: usize) -> bool {
        self.rank == n
    }
}

/// Cholesky factorization without pivoting, stopping at the first pivot at
/// or below `pivot_tol · max_i S_ii`. Returns the factor of the leading
/// full-rank block together with the rank evidence.
///
/// A pivot below `-pivot_tol · max_i S_ii` signals an indefinite matrix;
/// moment matrices of a positive measure must not produce this, so hitting
/// it indicates precision exhaustion.
pub fn cholesky(
    s: &SymMatrix,
    pivot_tol: &BigReal,
) -> Result<(LowerTriangular, RankReport), LinalgError> {
    assert!(!pivot_tol.is_negative(), "pivot tolerance must be nonnegative");
    let n = s.n();
    let prec = s.precision();
    let mut a: Vec<BigReal> = s.lower.clone();
    let mut max_diag = BigReal::zero(prec);
    for i in 0..n {
        let d = a[tri_idx(i, i)].abs();
        if d > max_diag {
            max_diag = d;
        }
    }
    let threshold = pivot_tol * &max_diag;
    let neg_threshold = -&threshold;

    let mut pivots: Vec<BigReal> = Vec::with_capacity(n);
    let mut rank = n;
    let mut deficient = None;
    for k in 0..n {
        let d = a[tri_idx(k, k)].clone();
        pivots.push(d.clone());
        if d <= threshold {
            if d < neg_threshold {
                return Err(LinalgError::IndefiniteMatrix { pivot: k });
            }
            rank = k;
            deficient = Some(k);
            break;
        }
        let lkk = d.sqrt();
        a[tri_idx(k, k)] = lkk.clone();
        for i in k + 1..n {
            a[tri_idx(i, k)] = &a[tri_idx(i, k)] / &lkk;
        }
        for i in k + 1..n {
            for j in k + 1..=i {
                let update = &a[tri_idx(i, k)] * &a[tri_idx(j, k)];
                a[tri_idx(i, j)] = &a[tri_idx(i, j)] - &update;
            }
        }
    }

    let mut data = Vec::with_capacity(tri_len(rank));
    for i in 0..rank {
        for j in 0..=i {
            data.push(a[tri_idx(i, j)].clone());
        }
    }
    Ok((
        LowerTriangular { n: rank, data },
        RankReport {
            rank,
            first_deficient_pivot: deficient,
            pivot_magnitudes: pivots,
        },
    ))
}

/// All eigenvalues of a symmetric matrix in ascending order, by cyclic
/// Jacobi rotations. Converged when every off-diagonal magnitude falls
/// under `2^{-(precision-8)} · max|A_ij|` of the input matrix.
pub fn sym_eigen(a: &SymMatrix) -> Result<Vec<BigReal>, LinalgError> {
    let n = a.n();
    let prec = a.precision();
    if n == 0 {
        return Ok(Vec::new());
    }
    let norm = a.max_abs();
    if norm.is_zero() {
        return Ok(vec![BigReal::zero(prec); n]);
    }
    let threshold = &norm * &BigReal::two_pow(-(prec as i64 - 8), prec);

    // dense working copy
    let mut m: Vec<BigReal> = (0..n * n)
        .map(|t| a.get(t / n, t % n).clone())
        .collect();
    let one = BigReal::one(prec);
    let two = BigReal::from_i64(2, prec);

    let mut converged = false;
    for _sweep in 0..MAX_JACOBI_SWEEPS {
        let mut off_max = BigReal::zero(prec);
        for p in 0..n {
            for q in p + 1..n {
                let v = m[p * n + q].abs();
                if v > off_max {
                    off_max = v;
                }
            }
        }
        if off_max < threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q].clone();
                if apq.is_zero() {
                    continue;
                }
                let app = m[p * n + p].clone();
                let aqq = m[q * n + q].clone();
                let tau = &(&aqq - &app) / &(&two * &apq);
                let t = if tau.is_zero() {
                    one.clone()
                } else {
                    let root = (&(&one + &(&tau * &tau))).sqrt();
                    let denom = &tau.abs() + &root;
                    let t_abs = &one / &denom;
                    if tau.is_negative() {
                        -&t_abs
                    } else {
                        t_abs
                    }
                };
                let c = &one / &(&(&one + &(&t * &t)).sqrt());
                let s = &t * &c;
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = m[i * n + p].clone();
                    let aiq = m[i * n + q].clone();
                    let new_ip = &(&c * &aip) - &(&s * &aiq);
                    let new_iq = &(&s * &aip) + &(&c * &aiq);
                    m[i * n + p] = new_ip.clone();
                    m[p * n + i] = new_ip;
                    m[i * n + q] = new_iq.clone();
                    m[q * n + i] = new_iq;
                }
                let shift = &t * &apq;
                m[p * n + p] = &app - &shift;
                m[q * n + q] = &aqq + &shift;
                m[p * n + q] = BigReal::zero(prec);
                m[q * n + p] = BigReal::zero(prec);
            }
        }
    }
    if !converged {
        return Err(LinalgError::NonConvergence {
            sweeps: MAX_JACOBI_SWEEPS,
        });
    }
    let mut eigs: Vec<BigReal> = (0..n).map(|i| m[i * n + i].clone()).collect();
    eigs.sort();
    Ok(eigs)
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting; `A` may be
/// indefinite. Fails with the rank evidence when the best remaining pivot
/// magnitude is at or below `pivot_tol · max|A_ij|`.
pub fn solve_with_pivoting(
    a: &SymMatrix,
    b: &[BigReal],
    pivot_tol: &BigReal,
) -> Result<Vec<BigReal>, RankReport> {
    let n = a.n();
    assert_eq!(b.len(), n);
    let prec = a.precision();
    let mut m: Vec<BigReal> = (0..n * n)
        .map(|t| a.get(t / n, t % n).clone())
        .collect();
    let mut rhs: Vec<BigReal> = b.to_vec();
    let threshold = &a.max_abs() * pivot_tol;

    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let mut best = k;
        let mut best_abs = m[k * n + k].abs();
        for i in k + 1..n {
            let v = m[i * n + k].abs();
            if v > best_abs {
                best_abs = v;
                best = i;
            }
        }
        if best_abs <= threshold {
            pivots.push(best_abs);
            return Err(RankReport {
                rank: k,
                first_deficient_pivot: Some(k),
                pivot_magnitudes: pivots,
            });
        }
        if best != k {
            for j in 0..n {
                m.swap(k * n + j, best * n + j);
            }
            rhs.swap(k, best);
        }
        pivots.push(best_abs);
        let pivot = m[k * n + k].clone();
        for i in k + 1..n {
            let factor = &m[i * n + k] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for j in k..n {
                let update = &factor * &m[k * n + j];
                m[i * n + j] = &m[i * n + j] - &update;
            }
            let update = &factor * &rhs[k];
            rhs[i] = &rhs[i] - &update;
        }
    }

    let mut x = vec![BigReal::zero(prec); n];
    for i in (0..n).rev() {
        let mut acc = rhs[i].clone();
        for j in i + 1..n {
            acc = &acc - &(&m[i * n + j] * &x[j]);
        }
        x[i] = &acc / &m[i * n + i];
    }
    Ok(x)
}
