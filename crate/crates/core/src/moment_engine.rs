//! Moment sequences `μ_j = ⟨φ|Ĥʲ|φ⟩` and the normalized and connected
//! moments derived from them, all in exact rational arithmetic.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::gaussian_poly::{
    apply_hamiltonian, inner_product_reduced, GaussianPolyState, GaussianWidth, Potential,
};

/// Default resource guard on the highest moment index.
///
/// Coefficient bit-lengths grow quickly with the moment order; desk-scale
/// studies need about M = 24.
pub const DEFAULT_MOMENT_CAP: usize = 64;

#[derive(Debug, Error)]
pub enum MomentError {
    #[error("moment order {requested} exceeds the resource cap {cap}")]
    CapExceeded { requested: usize, cap: usize },
    #[error("normalized moment sequence must start with 1")]
    UnnormalizedInput,
    #[error("zeroth moment must be positive")]
    NonPositiveNorm,
    #[error("scale factor must be positive")]
    NonPositiveScale,
}

/// Provenance of a moment table: seed width, potential, highest index.
#[derive(Debug, Clone)]
pub struct TableMeta {
    pub width: GaussianWidth,
    pub potential: Potential,
    pub order: usize,
}

/// The reduced moments `m_0..m_M`, normalized moments `ν_j = m_j/m_0`, and
/// connected moments `I_1..I_M` of one seed/potential pair.
#[derive(Debug, Clone)]
pub struct MomentTable {
    reduced: Vec<BigRational>,
    normalized: Vec<BigRational>,
    connected: Vec<BigRational>,
    meta: TableMeta,
}

impl MomentTable {
    /// Build the derived sequences from a raw reduced-moment list.
    pub fn from_reduced(reduced: Vec<BigRational>, meta: TableMeta) -> Result<Self, MomentError> {
        let m0 = reduced.first().ok_or(MomentError::NonPositiveNorm)?;
        if *m0 <= BigRational::zero() {
            return Err(MomentError::NonPositiveNorm);
        }
        let normalized: Vec<BigRational> = reduced.iter().map(|m| m / m0).collect();
        let connected = connected_from_normalized(&normalized)?;
        Ok(MomentTable {
            reduced,
            normalized,
            connected,
            meta,
        })
    }

    /// Highest moment index M.
    pub fn order(&self) -> usize {
        self.reduced.len() - 1
    }

    pub fn reduced(&self) -> &[BigRational] {
        &self.reduced
    }

    pub fn normalized(&self) -> &[BigRational] {
        &self.normalized
    }

    /// Connected moments `I_1..I_M` (index 0 holds I_1).
    pub fn connected(&self) -> &[BigRational] {
        &self.connected
    }

    pub fn meta(&self) -> &TableMeta {
        &self.meta
    }

    /// Table with every reduced moment multiplied by `c > 0`. Normalized and
    /// connected moments are invariant under this.
    pub fn scaled(&self, c: &BigRational) -> Result<Self, MomentError> {
        if *c <= BigRational::zero() {
            return Err(MomentError::NonPositiveScale);
        }
        MomentTable::from_reduced(
            self.reduced.iter().map(|m| m * c).collect(),
            self.meta.clone(),
        )
    }

    /// Table for the shifted operator `Ĥ + s·1` via the binomial transform
    /// `m'_j = Σ_i C(j,i)·s^{j-i}·m_i`.
    pub fn shifted(&self, s: &BigRational) -> Self {
        let m = self.order();
        let mut powers = vec![BigRational::one()];
        for _ in 0..m {
            powers.push(powers.last().unwrap() * s);
        }
        let mut reduced = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let mut acc = BigRational::zero();
            for i in 0..=j {
                let c = BigRational::from_integer(binomial(BigInt::from(j), BigInt::from(i)));
                acc += c * &self.reduced[i] * &powers[j - i];
            }
            reduced.push(acc);
        }
        MomentTable::from_reduced(reduced, self.meta.clone())
            .expect("shift preserves the sign of m_0")
    }

    /// Text dump of the reduced moments, one `j<TAB>numerator/denominator`
    /// line per moment.
    pub fn dump_reduced(&self) -> String {
        let mut out = String::new();
        for (j, m) in self.reduced.iter().enumerate() {
            out.push_str(&format!("{}\t{}/{}\n", j, m.numer(), m.denom()));
        }
        out
    }
}

/// Compute `m_0..m_M` for the seed `exp(-a x²)` by iterated application of
/// `Ĥ = -d²/dx² + V`, with the default resource cap.
pub fn compute_moments(
    a: &GaussianWidth,
    pot: &Potential,
    m: usize,
) -> Result<MomentTable, MomentError> {
    compute_moments_with_cap(a, pot, m, DEFAULT_MOMENT_CAP)
}

/// As [`compute_moments`] with an explicit cap on M.
pub fn compute_moments_with_cap(
    a: &GaussianWidth,
    pot: &Potential,
    m: usize,
    cap: usize,
) -> Result<MomentTable, MomentError> {
    if m > cap {
        return Err(MomentError::CapExceeded { requested: m, cap });
    }
    let mut state = GaussianPolyState::seed(a.clone());
    let mut reduced = Vec::with_capacity(m + 1);
    reduced.push(inner_product_reduced(a, &state));
    for _ in 0..m {
        state = apply_hamiltonian(&state, pot);
        reduced.push(inner_product_reduced(a, &state));
    }
    MomentTable::from_reduced(
        reduced,
        TableMeta {
            width: a.clone(),
            potential: pot.clone(),
            order: m,
        },
    )
}

/// Connected moments `I_1..I_M` from normalized moments `ν_0..ν_M` via
/// `I_{k+1} = ν_{k+1} - Σ_{p=0}^{k-1} C(k,p)·I_{p+1}·ν_{k-p}`.
pub fn connected_from_normalized(
    normalized: &[BigRational],
) -> Result<Vec<BigRational>, MomentError> {
    match normalized.first() {
        Some(nu0) if nu0.is_one() => {}
        _ => return Err(MomentError::UnnormalizedInput),
    }
    let m = normalized.len() - 1;
    let mut connected: Vec<BigRational> = Vec::with_capacity(m);
    for k in 0..m {
        let mut val = normalized[k + 1].clone();
        for p in 0..k {
            let c = BigRational::from_integer(binomial(BigInt::from(k), BigInt::from(p)));
            val -= c * &connected[p] * &normalized[k - p];
        }
        connected.push(val);
    }
    Ok(connected)
}
