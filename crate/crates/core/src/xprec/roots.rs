//! Real-root isolation for polynomials with [`BigReal`] coefficients.
//!
//! Sturm-sequence sign counting isolates the distinct roots, count-guided
//! bisection brackets each one, and a Newton step accelerates the final
//! polish. Repeated roots are recovered through the chain's terminal
//! (gcd-like) element and reported as coincident values.

use super::bigreal::BigReal;
use super::matrix::LinalgError;

/// Coefficients are ascending (index k holds the coefficient of `W^k`).
type Poly = Vec<BigReal>;

fn working_precision(coeffs: &[BigReal]) -> u32 {
    coeffs
        .iter()
        .map(|c| c.precision())
        .max()
        .unwrap_or(crate::DEFAULT_PRECISION)
}

fn trim_exact_zeros(mut p: Poly) -> Poly {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Drop leading coefficients whose magnitude is at or below `threshold`.
fn trim_below(mut p: Poly, threshold: &BigReal) -> Poly {
    while p.last().map_or(false, |c| c.abs() <= *threshold) {
        p.pop();
    }
    p
}

fn max_abs_coeff(p: &[BigReal], prec: u32) -> BigReal {
    let mut best = BigReal::zero(prec);
    for c in p {
        let a = c.abs();
        if a > best {
            best = a;
        }
    }
    best
}

/// Scale so the largest coefficient magnitude is one; sign pattern (and the
/// roots) are unchanged.
fn normalize_max(p: Poly, prec: u32) -> Poly {
    let m = max_abs_coeff(&p, prec);
    if m.is_zero() {
        return p;
    }
    p.iter().map(|c| c / &m).collect()
}

fn eval(p: &[BigReal], x: &BigReal, prec: u32) -> BigReal {
    let mut acc = BigReal::zero(prec);
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

fn derivative(p: &[BigReal], prec: u32) -> Poly {
    if p.len() <= 1 {
        return Vec::new();
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * &BigReal::from_i64(k as i64, prec))
        .collect()
}

/// Euclidean remainder of `f` by `g` (`deg g >= 1`). Leading terms are
/// removed structurally rather than by arithmetic cancellation.
fn remainder(f: &[BigReal], g: &[BigReal], prec: u32) -> Poly {
    let dg = g.len() - 1;
    let mut r: Poly = f.to_vec();
    let g_lead = g.last().unwrap();
    while r.len() > dg {
        let q = r.last().unwrap() / g_lead;
        let shift = r.len() - 1 - dg;
        r.pop();
        if !q.is_zero() {
            for (k, gc) in g.iter().take(dg).enumerate() {
                let update = &q * gc;
                r[shift + k] = &r[shift + k] - &update;
            }
        }
        r = trim_exact_zeros(r);
        if r.len() <= dg {
            break;
        }
    }
    let mut out = vec![BigReal::zero(prec); dg];
    for (k, c) in r.into_iter().enumerate() {
        out[k] = c;
    }
    trim_exact_zeros(out)
}

/// Sturm chain of a max-normalized polynomial. Remainders that vanish to
/// working precision terminate the chain early; the terminal element then
/// approximates `gcd(p, p')` and carries the repeated-root structure.
fn sturm_chain(p: Poly, prec: u32) -> Vec<Poly> {
    let zero_threshold = BigReal::two_pow(-(prec as i64 - 48), prec);
    let p0 = normalize_max(p, prec);
    let mut chain = vec![p0];
    let d = normalize_max(derivative(&chain[0], prec), prec);
    if d.is_empty() {
        return chain;
    }
    chain.push(d);
    loop {
        let g = chain.last().unwrap();
        if g.len() <= 1 {
            break;
        }
        let f = &chain[chain.len() - 2];
        let r = remainder(f, g, prec);
        let r = trim_below(r, &zero_threshold);
        if r.is_empty() {
            break;
        }
        let neg: Poly = r.iter().map(|c| -c).collect();
        chain.push(normalize_max(neg, prec));
    }
    chain
}

fn sign_variations(chain: &[Poly], x: &BigReal, prec: u32) -> usize {
    let mut last: i8 = 0;
    let mut variations = 0;
    for p in chain {
        let s = eval(p, x, prec).signum();
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            variations += 1;
        }
        last = s;
    }
    variations
}

/// Number of distinct real roots in `(lo, hi]`.
fn count_roots(chain: &[Poly], lo: &BigReal, hi: &BigReal, prec: u32) -> usize {
    sign_variations(chain, lo, prec).saturating_sub(sign_variations(chain, hi, prec))
}

/// Polish a bracket known to contain exactly one distinct root. Newton
/// iteration from the running estimate converges quadratically for simple
/// roots and terminates on the step size; Sturm-count bisection shrinks the
/// bracket as a safety net on alternate iterations, so a multiple or
/// ill-behaved root still converges. Accuracy target: `2^{-(prec-8)}`
/// relative to the bracket scale.
fn refine_root(
    chain: &[Poly],
    dp: &[BigReal],
    mut lo: BigReal,
    mut hi: BigReal,
    prec: u32,
) -> BigReal {
    let p = &chain[0];
    let one = BigReal::one(prec);
    let scale = lo.abs().max(hi.abs()).max(one.clone());
    let target = &scale * &BigReal::two_pow(-(prec as i64 - 8), prec);
    let step_target = &scale * &BigReal::two_pow(-(prec as i64 - 4), prec);
    let two = BigReal::from_i64(2, prec);
    let mut var_lo = sign_variations(chain, &lo, prec);
    let mut x = &(&lo + &hi) / &two;

    for iter in 0..(6 * prec as usize) {
        if (&hi - &lo) <= target {
            return &(&lo + &hi) / &two;
        }
        let fx = eval(p, &x, prec);
        if fx.is_zero() {
            return x;
        }
        // every fourth round bisect, so the bracket provably shrinks even
        // when Newton stalls (multiple roots converge linearly)
        let mut newton = None;
        if iter % 4 != 3 {
            let dfx = eval(dp, &x, prec);
            if !dfx.is_zero() {
                let step = &fx / &dfx;
                let cand = &x - &step;
                // the bracket is half-open (lo, hi], so hi itself is fair game
                if cand > lo && cand <= hi {
                    if step.abs() <= step_target {
                        return cand;
                    }
                    newton = Some(cand);
                }
            }
        }
        let took_newton = newton.is_some();
        let pick = newton.unwrap_or_else(|| &(&lo + &hi) / &two);
        if eval(p, &pick, prec).is_zero() {
            return pick;
        }
        let var_pick = sign_variations(chain, &pick, prec);
        if var_lo > var_pick {
            hi = pick.clone();
        } else {
            lo = pick.clone();
            var_lo = var_pick;
        }
        if took_newton {
            x = pick;
        } else if x < lo || x > hi {
            // bisection discarded the side the trajectory was on
            x = &(&lo + &hi) / &two;
        }
    }
    &(&lo + &hi) / &two
}

/// Distinct roots of the chain's polynomial inside `(lo, hi]`, ascending.
fn isolate_distinct(
    chain: &[Poly],
    dp: &[BigReal],
    lo: &BigReal,
    hi: &BigReal,
    prec: u32,
) -> Vec<BigReal> {
    let n = count_roots(chain, lo, hi, prec);
    match n {
        0 => Vec::new(),
        1 => vec![refine_root(chain, dp, lo.clone(), hi.clone(), prec)],
        _ => {
            let two = BigReal::from_i64(2, prec);
            let mid = &(lo + hi) / &two;
            let mut left = isolate_distinct(chain, dp, lo, &mid, prec);
            let mut right = isolate_distinct(chain, dp, &mid, hi, prec);
            left.append(&mut right);
            left
        }
    }
}

/// All real roots of `p` in `(lo, hi]`, with roots of multiplicity >= 2
/// reported as coincident values. The polynomial must not be identically
/// zero.
pub fn isolate_real_roots(
    coeffs: &[BigReal],
    lo: &BigReal,
    hi: &BigReal,
) -> Result<Vec<BigReal>, LinalgError> {
    assert!(
        coeffs.iter().any(|c| !c.is_zero()),
        "isolate_real_roots: polynomial must not be identically zero"
    );
    if lo >= hi {
        return Err(LinalgError::IntervalTooSmall);
    }
    let prec = working_precision(coeffs);
    let p = trim_exact_zeros(coeffs.to_vec());
    if p.len() <= 1 {
        return Ok(Vec::new());
    }
    let chain = sturm_chain(p, prec);
    let dp = derivative(&chain[0], prec);
    let mut roots = isolate_distinct(&chain, &dp, lo, hi, prec);

    // an early-terminated chain leaves gcd(p, p') with positive degree:
    // its roots are the repeated ones, recursively
    let terminal = chain.last().unwrap();
    if chain.len() > 1 && terminal.len() > 1 {
        let repeated = isolate_real_roots(terminal, lo, hi)?;
        roots.extend(repeated);
        roots.sort();
    }
    Ok(roots)
}
