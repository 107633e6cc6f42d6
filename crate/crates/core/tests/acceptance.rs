//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! Criteria, in order: the x⁸ paper reproduction (monotone RRVM error with
//! a pinned high-precision fixture), the variational bound, three-route
//! equivalence on a randomized corpus, exact-eigenstate degeneracy, the
//! harmonic even spectrum, the cross-cutting property suite, and the
//! CMX-LT baseline behavior.

mod common;

use std::time::Instant;

use common::{fd_apply_hamiltonian, eval_state, promote, random_corpus, rat, PREC};
use momspec::bench::{parse_config, run_study, ConvergenceRecord, X8_GROUND_STATE};
use momspec::cmx_lt::{cmx_lt_estimate, CmxOrder};
use momspec::gaussian_poly::{apply_hamiltonian, GaussianPolyState, GaussianWidth, Potential};
use momspec::krylov_solver::{
    bishop_roots, build_pencil, cmpa_coefficients, cmpa_roots, rrvm_eigenvalues, Method,
};
use momspec::moment_engine::{compute_moments, MomentTable};
use momspec::xprec::BigReal;
use num_rational::BigRational;
use num_traits::Zero;

/// Seed for the randomized corpus shared by criteria 3 and 6.
const CORPUS_SEED: u64 = 20250809;

fn tol(s: &str) -> BigReal {
    BigReal::from_decimal_str(s, PREC).unwrap()
}

fn args(list: &[&str]) -> Vec<String> {
    let mut v = vec!["momspec".to_string()];
    v.extend(list.iter().map(|s| s.to_string()));
    v
}

fn x8_rrvm_records() -> (Vec<ConvergenceRecord>, BigReal) {
    let config = parse_config(args(&[
        "--potential",
        "x^8",
        "--width",
        "8",
        "--nmax",
        "12",
        "--methods",
        "rrvm",
    ]))
    .unwrap();
    let reference = config.reference_energy.clone().expect("registry reference");
    (run_study(&config).unwrap(), reference)
}

fn fixture_roots() -> Vec<(usize, BigReal)> {
    let path = format!(
        "{}/tests/fixtures/x8_rrvm_ground_roots.txt",
        env!("CARGO_MANIFEST_DIR")
    );
    let text = std::fs::read_to_string(path).expect("fixture file");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut parts = l.split_whitespace();
            let n: usize = parts.next().unwrap().parse().unwrap();
            let w = BigReal::from_decimal_str(parts.next().unwrap(), PREC).unwrap();
            (n, w)
        })
        .collect()
}

#[test]
fn criterion_1_paper_reproduction() {
    let start = Instant::now();
    let (records, e0) = x8_rrvm_records();
    assert_eq!(e0, tol(X8_GROUND_STATE));
    assert_eq!(records.len(), 12);

    let errors: Vec<BigReal> = records
        .iter()
        .map(|r| &r.value.clone().expect("RRVM value at every order") - &e0)
        .collect();
    for (i, err) in errors.iter().enumerate() {
        assert!(
            *err > BigReal::zero(PREC),
            "N={}: error not strictly positive",
            i + 1
        );
    }
    for pair in errors.windows(2) {
        assert!(pair[1] < pair[0], "error sequence not strictly decreasing");
    }
    let thousand = BigReal::from_i64(1000, PREC);
    assert!(
        &errors[1] >= &(&thousand * &errors[11]),
        "N=12 error {} is not 1000x below N=2 error {}",
        errors[11].to_decimal(10),
        errors[1].to_decimal(10)
    );

    // pinned high-precision oracle values
    let fixture = fixture_roots();
    assert_eq!(fixture.len(), 12);
    let pin_tol = tol("1e-25");
    for ((n, pinned), record) in fixture.iter().zip(&records) {
        assert_eq!(*n, record.order);
        let got = record.value.clone().unwrap();
        assert!(
            (&got - pinned).abs() <= pin_tol,
            "N={}: {} deviates from pinned {}",
            n,
            got.to_decimal(32),
            pinned.to_decimal(32)
        );
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "study exceeded the 60 s budget: {:?}",
        elapsed
    );
    println!(
        "[PASS] criterion 1: x^8 RRVM error strictly decreasing over N=1..12, \
         N=12/N=2 ratio {:.1}, matches pinned fixture, {:?} elapsed",
        {
            let r = &errors[1] / &errors[11];
            r.approx_log10_abs().map(|l| 10f64.powf(l)).unwrap_or(0.0)
        },
        elapsed
    );
}

#[test]
fn criterion_2_variational_bound() {
    let (records, e0) = x8_rrvm_records();
    let slack = tol("1e-25");
    let floor = &e0 - &slack;
    for r in &records {
        let w = r.value.clone().unwrap();
        assert!(
            w >= floor,
            "N={}: W0 = {} dips below E0",
            r.order,
            w.to_decimal(32)
        );
    }
    println!("[PASS] criterion 2: every x^8 ground root stays above E0 at 1e-25 slack");
}

fn three_route_values(table: &MomentTable, n: usize) -> (Vec<BigReal>, Vec<BigReal>, Vec<BigReal>) {
    let pencil = build_pencil(table, n, PREC).unwrap();
    let rrvm = rrvm_eigenvalues(&pencil).unwrap();
    assert!(!rrvm.collapsed(), "corpus problem unexpectedly collapsed");
    let cmpa = cmpa_roots(&cmpa_coefficients(table, n, PREC).unwrap()).unwrap();
    let bishop = bishop_roots(table, n, PREC).unwrap();
    (rrvm.values, cmpa.values, bishop.values)
}

#[test]
fn criterion_3_three_route_equivalence() {
    let corpus = random_corpus(20, CORPUS_SEED);
    let bound = tol("1e-30");
    for (idx, (a, pot)) in corpus.iter().enumerate() {
        let table = compute_moments(a, pot, 11).unwrap();
        for n in 1..=6 {
            let (rrvm, cmpa, bishop) = three_route_values(&table, n);
            assert_eq!(rrvm.len(), n);
            assert_eq!(cmpa.len(), n);
            assert_eq!(bishop.len(), n);
            for i in 0..n {
                let d1 = (&rrvm[i] - &cmpa[i]).abs();
                let d2 = (&rrvm[i] - &bishop[i]).abs();
                let d3 = (&cmpa[i] - &bishop[i]).abs();
                assert!(
                    d1 <= bound && d2 <= bound && d3 <= bound,
                    "problem {} (a={}, V={}), N={}, root {}: spreads {} / {} / {}",
                    idx,
                    a.value(),
                    pot,
                    n,
                    i,
                    d1,
                    d2,
                    d3
                );
            }
        }
    }
    println!(
        "[PASS] criterion 3: RRVM/CMPA/Bishop agree pairwise within 1e-30 on \
         20 random problems up to N=6"
    );
}

#[test]
fn criterion_4_exact_eigenstate_degeneracy() {
    let a = GaussianWidth::from_ratio(1, 2);
    let pot = Potential::monomial(2).unwrap();
    let table = compute_moments(&a, &pot, 11).unwrap();
    let one = BigReal::one(PREC);
    for n in 1..=6 {
        let pencil = build_pencil(&table, n, PREC).unwrap();
        let est = rrvm_eigenvalues(&pencil).unwrap();
        assert_eq!(est.values, vec![one.clone()], "N={}: root is exactly 1", n);
        if n >= 2 {
            assert!(est.collapsed(), "N={}: collapse must be flagged", n);
            assert_eq!(est.rank_report.as_ref().unwrap().rank, 1);
        }
    }
    println!(
        "[PASS] criterion 4: exact eigenstate gives W=1 exactly with rank-1 \
         collapse flagged for every N>=2"
    );
}

#[test]
fn criterion_5_harmonic_even_spectrum() {
    // Oracle pre-run (256-bit arithmetic, reproduced bit-for-bit at 512
    // bits) pins the lowest three roots at N = 8; the worst deviation from
    // the analytic even levels (1, 5, 9) is 8.34e-3 on the third root, a
    // method-intrinsic variational error, so the tolerance calibrated from
    // that run is 1e-2 at N = 8. A 1e-4 deviation is first reached for all
    // three levels at N = 11, asserted separately below.
    let pinned_n8 = [
        "1.0000001363776896344045075600288",
        "5.0001017071358726911209378264427",
        "9.0083342593507322575733884177285",
    ];
    let a = GaussianWidth::from_ratio(1, 1);
    let pot = Potential::monomial(2).unwrap();
    let table = compute_moments(&a, &pot, 21).unwrap();

    let est = rrvm_eigenvalues(&build_pencil(&table, 8, PREC).unwrap()).unwrap();
    assert!(!est.collapsed());
    let pin_tol = tol("1e-25");
    let calibrated = tol("1e-2");
    for (i, (target, pinned)) in [1i64, 5, 9].iter().zip(pinned_n8).enumerate() {
        let value = &est.values[i];
        let pinned = tol(pinned);
        assert!(
            (value - &pinned).abs() <= pin_tol,
            "even level {}: {} deviates from the pinned oracle value",
            i,
            value.to_decimal(32)
        );
        let err = (value - &BigReal::from_i64(*target, PREC)).abs();
        assert!(
            err <= calibrated,
            "even level {}: {} is not within the calibrated 1e-2 of {}",
            i,
            value.to_decimal(20),
            target
        );
    }

    let est11 = rrvm_eigenvalues(&build_pencil(&table, 11, PREC).unwrap()).unwrap();
    let fine = tol("1e-4");
    for (i, target) in [1i64, 5, 9].iter().enumerate() {
        let err = (&est11.values[i] - &BigReal::from_i64(*target, PREC)).abs();
        assert!(
            err <= fine,
            "even level {} at N=11: {} is not within 1e-4 of {}",
            i,
            est11.values[i].to_decimal(20),
            target
        );
    }
    println!(
        "[PASS] criterion 5: harmonic even levels (1, 5, 9) recovered to the \
         oracle-pinned accuracy at N=8 (worst 8.34e-3) and to 1e-4 by N=11"
    );
}

fn rrvm_values(table: &MomentTable, n: usize) -> Vec<BigReal> {
    rrvm_eigenvalues(&build_pencil(table, n, PREC).unwrap())
        .unwrap()
        .values
}

#[test]
fn criterion_6_property_suite() {
    let corpus = random_corpus(20, CORPUS_SEED);
    let bound = tol("1e-30");
    let fd_tol = tol("1e-20");

    for (idx, (a, pot)) in corpus.iter().enumerate() {
        let table = compute_moments(a, pot, 11).unwrap();

        // I2 >= 0, exactly
        assert!(
            table.connected()[1] >= BigRational::zero(),
            "problem {}: negative energy variance",
            idx
        );

        // scale invariance: bit-identical estimates after mu_j -> c*mu_j
        let scaled = table.scaled(&rat(7, 3)).unwrap();
        let n = 4;
        let (r0, c0, b0) = three_route_values(&table, n);
        let (r1, c1, b1) = three_route_values(&scaled, n);
        assert_eq!(r0, r1, "problem {}: RRVM not scale invariant", idx);
        assert_eq!(c0, c1, "problem {}: CMPA not scale invariant", idx);
        assert_eq!(b0, b1, "problem {}: Bishop not scale invariant", idx);

        // Cauchy interlacing of consecutive RRVM orders
        for n in 1..=5 {
            let lower = rrvm_values(&table, n);
            let upper = rrvm_values(&table, n + 1);
            for i in 0..n {
                assert!(
                    &upper[i] <= &(&lower[i] + &bound),
                    "problem {}: interlacing lower bound fails at N={}, i={}",
                    idx,
                    n,
                    i
                );
                assert!(
                    &lower[i] <= &(&upper[i + 1] + &bound),
                    "problem {}: interlacing upper bound fails at N={}, i={}",
                    idx,
                    n,
                    i
                );
            }
        }

        // grid oracle on the seed and on the first Krylov vector
        let seed = GaussianPolyState::seed(a.clone());
        let first = apply_hamiltonian(&seed, pot);
        for state in [&seed, &first] {
            let applied = apply_hamiltonian(state, pot);
            let quarter = promote(&rat(1, 4));
            let mut x = BigReal::from_i64(-2, PREC);
            let mut worst = BigReal::zero(PREC);
            let mut scale = BigReal::one(PREC);
            for _ in 0..17 {
                let sym = eval_state(&applied, &x);
                let fd = fd_apply_hamiltonian(state, pot, &x);
                let d = (&sym - &fd).abs();
                if d > worst {
                    worst = d;
                }
                let m = sym.abs();
                if m > scale {
                    scale = m;
                }
                x = &x + &quarter;
            }
            assert!(
                worst <= &fd_tol * &scale,
                "problem {}: grid oracle deviation {}",
                idx,
                worst
            );
        }
    }

    // shift covariance: every root moves by exactly s (within 1e-30)
    let shift_corpus = &corpus[..5];
    for (idx, (a, pot)) in shift_corpus.iter().enumerate() {
        let table = compute_moments(a, pot, 11).unwrap();
        let n = 3;
        let base = three_route_values(&table, n);

        // positive shift keeps H positive definite: all three routes
        let s_pos = rat(5, 4);
        let shifted = table.shifted(&s_pos);
        let moved = three_route_values(&shifted, n);
        let s_real = promote(&s_pos);
        for i in 0..n {
            for (before, after) in [
                (&base.0[i], &moved.0[i]),
                (&base.1[i], &moved.1[i]),
                (&base.2[i], &moved.2[i]),
            ] {
                let err = (&(after - before) - &s_real).abs();
                assert!(
                    err <= bound,
                    "problem {}: positive shift covariance broken at root {}",
                    idx,
                    i
                );
            }
        }

        // negative shift can make H indefinite; RRVM and Bishop still apply
        let s_neg = rat(-13, 2);
        let shifted = table.shifted(&s_neg);
        let s_real = promote(&s_neg);
        let rrvm_moved = rrvm_values(&shifted, n);
        let bishop_moved = bishop_roots(&shifted, n, PREC).unwrap().values;
        for i in 0..n {
            let err_r = (&(&rrvm_moved[i] - &base.0[i]) - &s_real).abs();
            let err_b = (&(&bishop_moved[i] - &base.2[i]) - &s_real).abs();
            assert!(
                err_r <= bound && err_b <= bound,
                "problem {}: negative shift covariance broken at root {}",
                idx,
                i
            );
        }
    }

    println!(
        "[PASS] criterion 6: scale invariance (bit-identical), shift covariance, \
         interlacing, I2>=0 and the 1e-20 grid oracle hold across the corpus"
    );
}

#[test]
fn criterion_7_cmx_lt_baseline() {
    let a = GaussianWidth::from_ratio(8, 1);
    let pot = Potential::monomial(8).unwrap();
    let table = compute_moments(&a, &pot, 23).unwrap();

    // n = 0 is the mean energy, exactly
    let e0 = cmx_lt_estimate(&table, CmxOrder(0), PREC).unwrap();
    assert_eq!(e0.values[0], promote(&table.normalized()[1]));

    // n = 1 closed form I1 - I2²/I3
    let e1 = cmx_lt_estimate(&table, CmxOrder(1), PREC).unwrap();
    let c = table.connected();
    let closed = &c[0] - &(&c[1] * &c[1]) / &c[2];
    assert!((&e1.values[0] - &promote(&closed)).abs() <= tol("1e-30"));

    // the full study emits both sequences; only RRVM monotonicity is asserted
    let config = parse_config(args(&[
        "--potential",
        "x^8",
        "--width",
        "8",
        "--nmax",
        "12",
        "--methods",
        "rrvm,cmx_lt",
    ]))
    .unwrap();
    let records = run_study(&config).unwrap();
    let rrvm: Vec<&ConvergenceRecord> =
        records.iter().filter(|r| r.method == Method::Rrvm).collect();
    let cmx: Vec<&ConvergenceRecord> =
        records.iter().filter(|r| r.method == Method::CmxLt).collect();
    assert_eq!(rrvm.len(), 12);
    assert_eq!(cmx.len(), 12);
    assert!(cmx.iter().all(|r| r.value.is_some() || !r.flags.is_empty()));

    println!("       M   RRVM log10|err|   CMX-LT log10|err|");
    for (r, c) in rrvm.iter().zip(&cmx) {
        println!(
            "      {:>2}   {:>15}   {:>17}",
            r.moments_used,
            r.log10_abs_error
                .map(|e| format!("{:.6}", e))
                .unwrap_or_else(|| r.flags.clone()),
            c.log10_abs_error
                .map(|e| format!("{:.6}", e))
                .unwrap_or_else(|| c.flags.clone()),
        );
    }
    for pair in rrvm.windows(2) {
        let (a, b) = (
            pair[0].log10_abs_error.unwrap(),
            pair[1].log10_abs_error.unwrap(),
        );
        assert!(b < a, "RRVM error sequence must decrease monotonically");
    }
    println!(
        "[PASS] criterion 7: CMX-LT closed forms check out; error sequences \
         recorded side by side with RRVM monotone"
    );
}
