//! Exact symbolic algebra for states of the form `P(x)·exp(-a x²)`.
//!
//! Applying `Ĥ = -d²/dx² + V(x)` to such a state yields another state of the
//! same form, so the whole Krylov sequence `Ĥʲ|φ⟩` stays inside this family
//! and every inner product reduces to closed-form Gaussian integrals with
//! exact rational values. The common factor `√(π/(2a))` is dropped from all
//! integrals; every downstream quantity is invariant under that scaling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Errors from constructing the domain types of this module.
#[derive(Debug, Error)]
pub enum DomainError {
    #[error("gaussian width must be positive, got {0}")]
    NonPositiveWidth(BigRational),
    #[error("potential must be an even polynomial, coefficient of x^{0} is nonzero")]
    OddPotentialTerm(usize),
    #[error("gaussian integral exponent must be positive, got {0}")]
    NonPositiveExponent(BigRational),
}

/// Dense univariate polynomial with exact rational coefficients.
///
/// `coeffs[k]` is the coefficient of `x^k`; trailing zeros are trimmed so the
/// representation is canonical. The zero polynomial has an empty coefficient
/// vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Polynomial::new(vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(k: usize, c: BigRational) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Polynomial { coeffs }
    }

    /// Convenience constructor from small integers, mostly for tests.
    pub fn from_integers(coeffs: &[i64]) -> Self {
        Polynomial::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when all odd-power coefficients vanish.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    pub fn scaled(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        Polynomial::new(coeffs)
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - rhs.coeff(k));
        }
        Polynomial::new(coeffs)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::new(coeffs)
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*x", c)?,
                _ => write!(f, "{}*x^{}", c, k)?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Exponent of the seed Gaussian `exp(-a x²)`, `a > 0` exact rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianWidth {
    a: BigRational,
}

impl GaussianWidth {
    pub fn new(a: BigRational) -> Result<Self, DomainError> {
        if a <= BigRational::zero() {
            return Err(DomainError::NonPositiveWidth(a));
        }
        Ok(GaussianWidth { a })
    }

    /// Width `p/q` from small integers; panics on non-positive values.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        GaussianWidth::new(BigRational::new(BigInt::from(p), BigInt::from(q)))
            .expect("width must be positive")
    }

    pub fn value(&self) -> &BigRational {
        &self.a
    }
}

/// Multiplicative potential `V(x)`: an even polynomial with exact rational
/// coefficients. The zero polynomial is allowed (free-particle tests).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Potential {
    v: Polynomial,
}

impl Potential {
    pub fn new(v: Polynomial) -> Result<Self, DomainError> {
        if let Some(k) = v
            .coeffs()
            .iter()
            .enumerate()
            .find(|(k, c)| k % 2 == 1 && !c.is_zero())
            .map(|(k, _)| k)
        {
            return Err(DomainError::OddPotentialTerm(k));
        }
        Ok(Potential { v })
    }

    /// The monomial `x^k` (k even).
    pub fn monomial(k: usize) -> Result<Self, DomainError> {
        Potential::new(Polynomial::monomial(k, BigRational::one()))
    }

    pub fn zero() -> Self {
        Potential {
            v: Polynomial::zero(),
        }
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.v
    }
}

impl std::fmt::Display for Potential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.v)
    }
}

/// The state `P(x)·exp(-a x²)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianPolyState {
    pub p: Polynomial,
    pub a: GaussianWidth,
}

impl GaussianPolyState {
    pub fn new(p: Polynomial, a: GaussianWidth) -> Self {
        GaussianPolyState { p, a }
    }

    /// The bare seed `exp(-a x²)` (P = 1).
    pub fn seed(a: GaussianWidth) -> Self {
        GaussianPolyState {
            p: Polynomial::one(),
            a,
        }
    }
}

/// Apply `Ĥ = -d²/dx² + V(x)` to `P(x)·exp(-a x²)` exactly.
///
/// Writing `ψ = P·e^{-ax²}`, the output polynomial is
/// `-P'' + 4a·x·P' + (2a - 4a²x²)·P + V·P`; the Gaussian factor is carried
/// along unchanged. Parity is preserved for even `P` and even `V`.
pub fn apply_hamiltonian(state: &GaussianPolyState, pot: &Potential) -> GaussianPolyState {
    let a = state.a.value();
    let p = &state.p;
    let two_a = a * BigRational::from_integer(BigInt::from(2));
    let four_a = a * BigRational::from_integer(BigInt::from(4));
    let four_a_sq = &four_a * a;

    let dp = p.derivative();
    let minus_ddp = &Polynomial::zero() - &dp.derivative();
    let drift = dp.shift_up(1).scaled(&four_a);
    let confining = &p.scaled(&two_a) - &p.shift_up(2).scaled(&four_a_sq);
    let potential_term = pot.polynomial() * p;

    let out = &(&(&minus_ddp + &drift) + &confining) + &potential_term;
    GaussianPolyState::new(out, state.a.clone())
}

/// Reduced Gaussian integral `∫x^{2k}·e^{-bx²}dx / ∫e^{-bx²}dx = (2k-1)!!/(2b)^k`.
///
/// `k` is the half-power of the integrand; the `√(π/b)` normalization common
/// to all moments is factored out.
pub fn reduced_gaussian_integral(k: usize, b: &BigRational) -> Result<BigRational, DomainError> {
    if *b <= BigRational::zero() {
        return Err(DomainError::NonPositiveExponent(b.clone()));
    }
    let mut num = BigInt::one();
    for i in 1..=k {
        num *= BigInt::from(2 * i as u64 - 1);
    }
    let two_b = b * BigRational::from_integer(BigInt::from(2));
    let mut den = BigRational::one();
    for _ in 0..k {
        den *= &two_b;
    }
    Ok(BigRational::from_integer(num) / den)
}

/// Reduced inner product `⟨φ|ket⟩` against the seed Gaussian of width
/// `bra_seed`, with the global `√(π/(2a))` factor removed.
///
/// Odd-power coefficients integrate to zero by symmetry and are skipped.
/// All Krylov vectors share the seed Gaussian, so a differing ket width is a
/// caller bug and panics.
pub fn inner_product_reduced(bra_seed: &GaussianWidth, ket: &GaussianPolyState) -> BigRational {
    assert_eq!(
        bra_seed, &ket.a,
        "inner_product_reduced: bra and ket Gaussian widths must match"
    );
    let b = bra_seed.value() * BigRational::from_integer(BigInt::from(2));
    let mut acc = BigRational::zero();
    for (idx, c) in ket.p.coeffs().iter().enumerate() {
        if idx % 2 == 1 || c.is_zero() {
            continue;
        }
        let integral = reduced_gaussian_integral(idx / 2, &b)
            .expect("width invariant guarantees positive exponent");
        acc += c * integral;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn polynomial_trims_trailing_zeros() {
        let p = Polynomial::from_integers(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Polynomial::from_integers(&[0, 0]).is_zero());
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn apply_h_x8_monomial_seed() {
        let state = GaussianPolyState::seed(GaussianWidth::from_ratio(8, 1));
        let pot = Potential::monomial(8).unwrap();
        let out = apply_hamiltonian(&state, &pot);
        let mut expect = vec![0i64; 9];
        expect[0] = 16;
        expect[2] = -256;
        expect[8] = 1;
        assert_eq!(out.p, Polynomial::from_integers(&expect));
    }

    #[test]
    fn apply_h_exact_harmonic_eigenstate() {
        // exp(-x²/2) is the ground state of -d²/dx² + x² with E = 1
        let state = GaussianPolyState::seed(GaussianWidth::from_ratio(1, 2));
        let pot = Potential::monomial(2).unwrap();
        let out = apply_hamiltonian(&state, &pot);
        assert_eq!(out.p, Polynomial::one());
    }

    #[test]
    fn apply_h_free_particle() {
        let state = GaussianPolyState::seed(GaussianWidth::from_ratio(8, 1));
        let out = apply_hamiltonian(&state, &Potential::zero());
        assert_eq!(out.p, Polynomial::from_integers(&[16, 0, -256]));
    }

    #[test]
    fn reduced_integral_values() {
        let b16 = rat(16, 1);
        assert_eq!(reduced_gaussian_integral(0, &b16).unwrap(), rat(1, 1));
        assert_eq!(reduced_gaussian_integral(1, &b16).unwrap(), rat(1, 32));
        assert_eq!(
            reduced_gaussian_integral(4, &b16).unwrap(),
            rat(105, 1048576)
        );
    }

    #[test]
    fn reduced_integral_rejects_nonpositive_exponent() {
        assert!(reduced_gaussian_integral(1, &rat(0, 1)).is_err());
        assert!(reduced_gaussian_integral(1, &rat(-3, 2)).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let a = GaussianWidth::from_ratio(8, 1);
        let seed = GaussianPolyState::seed(a.clone());
        assert_eq!(inner_product_reduced(&a, &seed), rat(1, 1));

        let kinetic = GaussianPolyState::new(Polynomial::from_integers(&[16, 0, -256]), a.clone());
        assert_eq!(inner_product_reduced(&a, &kinetic), rat(8, 1));

        let x8 = GaussianPolyState::new(
            Polynomial::monomial(8, BigRational::one()),
            a.clone(),
        );
        assert_eq!(inner_product_reduced(&a, &x8), rat(105, 1048576));
    }

    #[test]
    #[should_panic(expected = "widths must match")]
    fn inner_product_width_mismatch_panics() {
        let a = GaussianWidth::from_ratio(8, 1);
        let ket = GaussianPolyState::seed(GaussianWidth::from_ratio(2, 1));
        inner_product_reduced(&a, &ket);
    }

    #[test]
    fn potential_rejects_odd_terms() {
        assert!(Potential::new(Polynomial::from_integers(&[0, 1])).is_err());
        assert!(Potential::monomial(3).is_err());
        assert!(Potential::monomial(8).is_ok());
    }

    #[test]
    fn width_must_be_positive() {
        assert!(GaussianWidth::new(rat(-1, 2)).is_err());
        assert!(GaussianWidth::new(rat(0, 1)).is_err());
    }

    #[test]
    fn parity_preserved_for_even_inputs() {
        let pot = Potential::monomial(4).unwrap();
        let mut state = GaussianPolyState::new(
            Polynomial::from_integers(&[3, 0, -2, 0, 5]),
            GaussianWidth::from_ratio(2, 1),
        );
        for _ in 0..4 {
            state = apply_hamiltonian(&state, &pot);
            assert!(state.p.is_even());
        }
    }

    #[test]
    fn hamiltonian_is_linear() {
        let a = GaussianWidth::from_ratio(8, 1);
        let pot = Potential::monomial(8).unwrap();
        let p = Polynomial::from_integers(&[1, 0, 3]);
        let q = Polynomial::from_integers(&[2, 0, 0, 0, -7]);
        let alpha = rat(3, 5);
        let beta = rat(-9, 4);

        let combo = &p.scaled(&alpha) + &q.scaled(&beta);
        let lhs = apply_hamiltonian(&GaussianPolyState::new(combo, a.clone()), &pot);
        let hp = apply_hamiltonian(&GaussianPolyState::new(p, a.clone()), &pot);
        let hq = apply_hamiltonian(&GaussianPolyState::new(q, a.clone()), &pot);
        let rhs = &hp.p.scaled(&alpha) + &hq.p.scaled(&beta);
        assert_eq!(lhs.p, rhs);
    }
}
