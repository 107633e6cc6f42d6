//! Shared oracles for the integration suites.
//!
//! These deliberately avoid the library's closed-form Gaussian integrals
//! and symbolic operator application: moments are checked against plain
//! trapezoid sums (exponentially accurate for entire integrands with
//! Gaussian decay) and operator application against five-point finite
//! differences in 256-bit arithmetic.

// not every suite uses every oracle
#![allow(dead_code)]

use momspec::gaussian_poly::{GaussianPolyState, GaussianWidth, Polynomial, Potential};
use momspec::xprec::BigReal;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const PREC: u32 = 256;

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

pub fn promote(r: &BigRational) -> BigReal {
    BigReal::from_rational(r, PREC)
}

pub fn eval_poly(p: &Polynomial, x: &BigReal) -> BigReal {
    let mut acc = BigReal::zero(PREC);
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * x) + &promote(c);
    }
    acc
}

/// `P(x)·exp(-a x²)` at a point, in BigReal arithmetic.
pub fn eval_state(state: &GaussianPolyState, x: &BigReal) -> BigReal {
    let a = promote(state.a.value());
    let arg = -&(&a * &(x * x));
    &eval_poly(&state.p, x) * &arg.exp()
}

/// Trapezoid-sum ratio `∫P(x)e^{-bx²}dx / ∫e^{-bx²}dx` with spacing 1/16.
///
/// For entire integrands with Gaussian decay the trapezoid rule converges
/// geometrically; at this spacing the discretization error sits far below
/// 10⁻³⁰ for every exponent `b >= 1/2` used in the tests. The spacing and
/// the `√(π/b)` normalization cancel in the ratio.
pub fn quadrature_reduced_poly(p: &Polynomial, b: &BigRational) -> BigReal {
    let h = promote(&rat(1, 16));
    let b_real = promote(b);
    let tiny = BigReal::two_pow(-400, PREC);

    let mut num = promote(&p.coeff(0));
    let mut den = BigReal::one(PREC);
    let two = BigReal::from_i64(2, PREC);
    for j in 1..6000i64 {
        let x = &h * &BigReal::from_i64(j, PREC);
        let weight = (-&(&b_real * &(&x * &x))).exp();
        num = &num + &(&two * &(&eval_poly(p, &x) * &weight));
        den = &den + &(&two * &weight);
        if weight < tiny && j > 32 {
            return &num / &den;
        }
    }
    panic!("quadrature grid exhausted before the integrand decayed");
}

/// Five-point finite-difference application of `Ĥ = -d²/dx² + V` to a
/// Gaussian-polynomial state at one point, step `2^-24`.
pub fn fd_apply_hamiltonian(
    state: &GaussianPolyState,
    pot: &Potential,
    x: &BigReal,
) -> BigReal {
    let delta = BigReal::two_pow(-24, PREC);
    let two_d = &delta * &BigReal::from_i64(2, PREC);
    let f_m2 = eval_state(state, &(x - &two_d));
    let f_m1 = eval_state(state, &(x - &delta));
    let f_0 = eval_state(state, x);
    let f_p1 = eval_state(state, &(x + &delta));
    let f_p2 = eval_state(state, &(x + &two_d));

    let c16 = BigReal::from_i64(16, PREC);
    let c30 = BigReal::from_i64(30, PREC);
    let c12 = BigReal::from_i64(12, PREC);
    let mut stencil = &(&c16 * &(&f_m1 + &f_p1)) - &(&f_m2 + &f_p2);
    stencil = &stencil - &(&c30 * &f_0);
    let second = &stencil / &(&c12 * &(&delta * &delta));

    &(-&second) + &(&eval_poly(pot.polynomial(), x) * &f_0)
}

/// Deterministic corpus of confining problems: even potentials of degree
/// at most 8 with nonnegative rational coefficients (at least one quartic
/// or higher term, so the seed is never an exact eigenstate) and rational
/// widths in [1/4, 16].
pub fn random_corpus(count: usize, seed: u64) -> Vec<(GaussianWidth, Potential)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = loop {
            let num = rng.gen_range(1..=64i64);
            let den = rng.gen_range(1..=16i64);
            let value = rat(num, den);
            if value >= rat(1, 4) && value <= int(16) {
                break GaussianWidth::new(value).expect("positive by construction");
            }
        };
        let mut coeffs = vec![int(0); 9];
        for k in [2usize, 4, 6, 8] {
            if rng.gen_bool(0.7) {
                coeffs[k] = rat(rng.gen_range(0..=5), rng.gen_range(1..=3));
            }
        }
        if coeffs[4].is_zero() && coeffs[6].is_zero() && coeffs[8].is_zero() {
            coeffs[2 * rng.gen_range(2..=4usize)] = rat(rng.gen_range(1..=5), 1);
        }
        let potential = Potential::new(Polynomial::new(coeffs)).expect("even by construction");
        out.push((a, potential));
    }
    out
}
