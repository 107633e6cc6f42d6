//! Arbitrary-precision real arithmetic: a binary floating point with a
//! `BigInt` mantissa, `value = mant · 2^exp`, rounded to a per-value working
//! precision in bits.
//!
//! Mixed-precision arithmetic resolves to the maximum operand precision.
//! Rounding is to nearest (ties away from zero); operations carry 32 guard
//! bits, which is far more headroom than the 10⁻³⁰ tolerances used by the
//! solvers require at 256-bit precision.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Minimum allowed working precision in bits.
pub const MIN_PRECISION: u32 = 64;

const GUARD_BITS: u32 = 32;

#[derive(Debug, Clone)]
pub struct BigReal {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn round_shr(mag: BigUint, shift: u64) -> BigUint {
    if shift == 0 {
        return mag;
    }
    let shifted: BigUint = &mag >> (shift - 1) as usize;
    let round_up = (&shifted & BigUint::one()) == BigUint::one();
    let mut out: BigUint = shifted >> 1usize;
    if round_up {
        out += BigUint::one();
    }
    out
}

impl BigReal {
    fn normalized(mant: BigInt, mut exp: i64, prec: u32) -> Self {
        assert!(prec >= MIN_PRECISION, "precision must be at least {} bits", MIN_PRECISION);
        if mant.is_zero() {
            return BigReal { mant, exp: 0, prec };
        }
        let bits = mant.bits();
        if bits <= prec as u64 {
            return BigReal { mant, exp, prec };
        }
        let shift = bits - prec as u64;
        let (sign, mag) = mant.into_parts();
        let mut mag = round_shr(mag, shift);
        exp += shift as i64;
        if mag.bits() > prec as u64 {
            mag >>= 1usize;
            exp += 1;
        }
        BigReal {
            mant: BigInt::from_biguint(sign, mag),
            exp,
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        BigReal::normalized(BigInt::zero(), 0, prec)
    }

    pub fn one(prec: u32) -> Self {
        BigReal::normalized(BigInt::one(), 0, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        BigReal::normalized(BigInt::from(v), 0, prec)
    }

    /// `2^k` exactly.
    pub fn two_pow(k: i64, prec: u32) -> Self {
        BigReal::normalized(BigInt::one(), k, prec)
    }

    /// Round an exact rational to `prec` bits.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        if r.is_zero() {
            return BigReal::zero(prec);
        }
        let num = r.numer();
        let den = r.denom();
        let extra = den.bits() as i64 - num.bits() as i64;
        let shift = (prec + GUARD_BITS) as i64 + extra.max(0);
        let q = (num << shift as usize) / den;
        BigReal::normalized(q, -shift, prec)
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Re-round to a (possibly different) working precision.
    pub fn with_precision(&self, prec: u32) -> Self {
        BigReal::normalized(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        BigReal {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Position of the most significant bit: the unique integer `h` with
    /// `2^(h-1) <= |v| < 2^h`; `None` for zero.
    pub fn msb(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64)
        }
    }

    fn add_impl(&self, rhs: &BigReal, negate_rhs: bool) -> BigReal {
        let prec = self.prec.max(rhs.prec);
        if rhs.is_zero() {
            return self.with_precision(prec);
        }
        if self.is_zero() {
            let r = rhs.with_precision(prec);
            return if negate_rhs { -&r } else { r };
        }
        let ha = self.msb().unwrap();
        let hb = rhs.msb().unwrap();
        let window = (prec + GUARD_BITS * 2) as i64;
        if ha - hb > window {
            return self.with_precision(prec);
        }
        if hb - ha > window {
            let r = rhs.with_precision(prec);
            return if negate_rhs { -&r } else { r };
        }
        let e = self.exp.min(rhs.exp);
        let ma = &self.mant << (self.exp - e) as usize;
        let mb = &rhs.mant << (rhs.exp - e) as usize;
        let m = if negate_rhs { ma - mb } else { ma + mb };
        BigReal::normalized(m, e, prec)
    }

    fn mul_impl(&self, rhs: &BigReal) -> BigReal {
        let prec = self.prec.max(rhs.prec);
        BigReal::normalized(&self.mant * &rhs.mant, self.exp + rhs.exp, prec)
    }

    fn div_impl(&self, rhs: &BigReal) -> BigReal {
        assert!(!rhs.is_zero(), "BigReal division by zero");
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return BigReal::zero(prec);
        }
        let extra = rhs.mant.bits() as i64 - self.mant.bits() as i64;
        let shift = (prec + GUARD_BITS) as i64 + extra.max(0);
        let q = (&self.mant << shift as usize) / &rhs.mant;
        BigReal::normalized(q, self.exp - rhs.exp - shift, prec)
    }

    /// Nonnegative square root; panics on negative input (callers check
    /// signs before taking roots).
    pub fn sqrt(&self) -> BigReal {
        assert!(self.signum() >= 0, "BigReal::sqrt of a negative value");
        if self.is_zero() {
            return self.clone();
        }
        let target = 2 * (self.prec + GUARD_BITS) as i64;
        let mut k = (target - self.mant.bits() as i64).max(0);
        if (self.exp - k) % 2 != 0 {
            k += 1;
        }
        let scaled: BigInt = &self.mant << k as usize;
        let root = scaled.magnitude().sqrt();
        BigReal::normalized(
            BigInt::from_biguint(Sign::Plus, root),
            (self.exp - k) / 2,
            self.prec,
        )
    }

    /// Compare by value (representations are not canonical).
    pub fn cmp_value(&self, rhs: &BigReal) -> Ordering {
        let sa = self.signum();
        let sb = rhs.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let mag = match (self.msb().unwrap(), rhs.msb().unwrap()) {
            (ha, hb) if ha != hb => ha.cmp(&hb),
            _ => {
                let e = self.exp.min(rhs.exp);
                let ma = self.mant.magnitude() << (self.exp - e) as usize;
                let mb = rhs.mant.magnitude() << (rhs.exp - e) as usize;
                ma.cmp(&mb)
            }
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }

    pub fn min(self, other: BigReal) -> BigReal {
        if self.cmp_value(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: BigReal) -> BigReal {
        if self.cmp_value(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    /// `e^x` at the value's working precision.
    pub fn exp(&self) -> BigReal {
        let prec = self.prec;
        let work = prec + 2 * GUARD_BITS;
        if self.is_zero() {
            return BigReal::one(prec);
        }
        let negative = self.is_negative();
        let y = self.abs().with_precision(work);
        // scale until the argument is at most 1/2, Taylor, square back up
        let k = (y.msb().unwrap() + 1).max(0);
        let z = BigReal {
            mant: y.mant.clone(),
            exp: y.exp - k,
            prec: work,
        };
        let mut sum = BigReal::one(work);
        let mut term = BigReal::one(work);
        let cutoff = -((work + GUARD_BITS) as i64);
        let mut n: i64 = 1;
        loop {
            term = &(&term * &z) / &BigReal::from_i64(n, work);
            sum = &sum + &term;
            if term.is_zero() || term.msb().unwrap() < cutoff {
                break;
            }
            n += 1;
        }
        for _ in 0..k {
            sum = &sum * &sum;
        }
        let result = if negative {
            &BigReal::one(work) / &sum
        } else {
            sum
        };
        result.with_precision(prec)
    }

    /// Approximate `log10 |v|` in double precision; `None` for zero.
    /// Width-safe: works for magnitudes far outside the f64 range.
    pub fn approx_log10_abs(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        let bits = self.mant.bits();
        let take = bits.min(53);
        let top: BigUint = self.mant.magnitude() >> (bits - take) as usize;
        let frac = top.to_f64().unwrap_or(f64::NAN);
        let log2 = (self.exp as f64) + (bits - take) as f64 + frac.log2();
        Some(log2 * std::f64::consts::LOG10_2)
    }

    /// Decimal rendering with `sig` significant digits.
    ///
    /// Fixed-point notation for moderate magnitudes, scientific notation
    /// otherwise; deterministic for a given value and digit count.
    pub fn to_decimal(&self, sig: usize) -> String {
        assert!(sig >= 1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let log10 = self.approx_log10_abs().unwrap();
        let mut d = log10.floor() as i64;
        let mut found = None;
        for _ in 0..4 {
            let t = sig as i64 - 1 - d;
            let mut num: BigUint = self.mant.magnitude().clone();
            let mut den = BigUint::one();
            if t >= 0 {
                num *= num_traits::pow(BigUint::from(10u32), t as usize);
            } else {
                den *= num_traits::pow(BigUint::from(10u32), (-t) as usize);
            }
            if self.exp >= 0 {
                num <<= self.exp as usize;
            } else {
                den <<= (-self.exp) as usize;
            }
            // round half up
            let q = (&num * 2u32 + &den) / (&den * 2u32);
            let s = q.to_string();
            if s.len() == sig {
                found = Some((s, d));
                break;
            }
            // the f64 log estimate can be off by one near powers of ten
            d += s.len() as i64 - sig as i64;
        }
        let (digits, dexp) = found.expect("decimal exponent search did not stabilize");
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if dexp >= -6 && dexp < sig as i64 + 6 {
            if dexp >= 0 {
                let point = (dexp + 1) as usize;
                if point >= digits.len() {
                    out.push_str(&digits);
                    out.push_str(&"0".repeat(point - digits.len()));
                } else {
                    out.push_str(&digits[..point]);
                    out.push('.');
                    out.push_str(&digits[point..]);
                }
            } else {
                out.push_str("0.");
                out.push_str(&"0".repeat((-dexp - 1) as usize));
                out.push_str(&digits);
            }
        } else {
            out.push_str(&digits[..1]);
            out.push('.');
            out.push_str(&digits[1..]);
            out.push_str(&format!("e{}", dexp));
        }
        out
    }

    /// Parse a decimal string such as `1.225820113800492191` or `-3.5e-4`.
    pub fn from_decimal_str(s: &str, prec: u32) -> Result<BigReal, ParseRealError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRealError::new(s));
        }
        let (mantissa_part, exp_part) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], Some(&s[i + 1..])),
            None => (s, None),
        };
        let exp10: i64 = match exp_part {
            Some(e) => e.parse().map_err(|_| ParseRealError::new(s))?,
            None => 0,
        };
        let (int_part, frac_part) = match mantissa_part.find('.') {
            Some(i) => (&mantissa_part[..i], &mantissa_part[i + 1..]),
            None => (mantissa_part, ""),
        };
        let joined: String = format!("{}{}", int_part, frac_part);
        if joined.is_empty()
            || joined == "-"
            || joined == "+"
            || frac_part.contains(['+', '-'])
        {
            return Err(ParseRealError::new(s));
        }
        let digits: BigInt = joined.parse().map_err(|_| ParseRealError::new(s))?;
        let scale = frac_part.len() as i64 - exp10;
        let ten = BigInt::from(10u32);
        let mut num = digits;
        let mut den = BigInt::one();
        if scale >= 0 {
            den = num_traits::pow(ten, scale as usize);
        } else {
            num *= num_traits::pow(ten, (-scale) as usize);
        }
        Ok(BigReal::from_rational(
            &BigRational::new(num, den),
            prec,
        ))
    }
}

#[derive(Debug, thiserror::Error)]
#[error("invalid decimal number: {0:?}")]
pub struct ParseRealError(String);

impl ParseRealError {
    fn new(s: &str) -> Self {
        ParseRealError(s.to_string())
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl Eq for BigReal {}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl Ord for BigReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl std::ops::Add for &BigReal {
    type Output = BigReal;
    fn add(self, rhs: &BigReal) -> BigReal {
        self.add_impl(rhs, false)
    }
}

impl std::ops::Sub for &BigReal {
    type Output = BigReal;
    fn sub(self, rhs: &BigReal) -> BigReal {
        self.add_impl(rhs, true)
    }
}

impl std::ops::Mul for &BigReal {
    type Output = BigReal;
    fn mul(self, rhs: &BigReal) -> BigReal {
        self.mul_impl(rhs)
    }
}

impl std::ops::Div for &BigReal {
    type Output = BigReal;
    fn div(self, rhs: &BigReal) -> BigReal {
        self.div_impl(rhs)
    }
}

impl std::ops::Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(36))
    }
}
