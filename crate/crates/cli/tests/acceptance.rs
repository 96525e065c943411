//! Acceptance suite. Each test is one acceptance criterion, runs at the full
//! stated ranges with exact-zero tolerances, and prints one pass/fail line.
//!
//! Criteria ranges are pinned here, in code: sweeps over k, n in {2,3},
//! total degree <= 4, five seeded points per case; R-matrix axioms for
//! N in {2,3} with degrees <= 3 (Yang-Baxter <= 2); structural identities
//! for k, n <= 3, D <= 6. A residual passes only when it is exactly the
//! zero matrix.

use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use kzdual_core::action::{casimir, Side};
use kzdual_core::exec::ExecMode;
use kzdual_core::matrix::lagrange_projectors;
use kzdual_core::qop::{r_eigenvalue, RMatrixCache};
use kzdual_core::rat::Rat;
use kzdual_core::verify::{run_suite, SuiteLimits, VerifyReport};
use kzdual_core::weights::{
    binomial, enumerate_compositions, enumerate_partitions, enumerate_tables, weyl_dimension,
    Margins,
};

/// The acceptance ranges: k, n in {2,3}, |lambda| <= 4, 5 points per case.
fn acceptance_limits() -> SuiteLimits {
    SuiteLimits {
        k_values: vec![2, 3],
        n_values: vec![2, 3],
        degree_max: 4,
        trials: 5,
        seed: 42,
        fixed_margins: None,
    }
}

fn run_and_require_green(
    suites: &[&str],
    limits: &SuiteLimits,
    mode: ExecMode,
) -> (usize, Duration) {
    let cache = RMatrixCache::new();
    let start = Instant::now();
    let mut total = 0;
    for suite in suites {
        let reports = run_suite(suite, limits, mode, &cache).expect("suite runs");
        let failures: Vec<&VerifyReport> = reports.iter().filter(|r| !r.passed()).collect();
        assert!(
            failures.is_empty(),
            "suite {suite}: {} of {} checks failed; first: {:?}",
            failures.len(),
            reports.len(),
            failures.first()
        );
        total += reports.len();
    }
    (total, start.elapsed())
}

#[test]
fn acceptance_1_flatness_suites_exact_zero() {
    // Rational and trigonometric KZ, trigonometric DD, and the mixed
    // rational KZ/DD family: every curvature residual is exactly zero.
    // The stated budget (under a minute on one core) is checked on the
    // sequential driver.
    let (count, elapsed) = run_and_require_green(
        &[
            "kz-flat",
            "kz-trig-flat",
            "dd-flat",
            "dd-trig-flat",
            "kz-dd",
        ],
        &acceptance_limits(),
        ExecMode::Sequential,
    );
    assert!(
        elapsed < Duration::from_secs(60),
        "flatness suites took {elapsed:?}, budget is 60 s"
    );
    println!("ACCEPTANCE 1 flatness: PASS ({count} checks in {elapsed:?})");
}

#[test]
fn acceptance_2_b_series_properties() {
    let (count, elapsed) = run_and_require_green(
        &["b-props"],
        &acceptance_limits(),
        ExecMode::Parallel { jobs: None },
    );
    println!("ACCEPTANCE 2 b-series: PASS ({count} checks in {elapsed:?})");
}

#[test]
fn acceptance_3_r_matrix_axioms() {
    let (count, elapsed) = run_and_require_green(
        &["r-props", "ybe"],
        &acceptance_limits(),
        ExecMode::Parallel { jobs: None },
    );
    println!("ACCEPTANCE 3 r-matrix axioms: PASS ({count} checks in {elapsed:?})");
}

#[test]
fn acceptance_4_difference_compatibility() {
    let (count, elapsed) = run_and_require_green(
        &["qdd-commute", "kz-qdd", "qkz-commute", "qkz-dd"],
        &acceptance_limits(),
        ExecMode::Parallel { jobs: None },
    );
    println!("ACCEPTANCE 4 difference compatibility: PASS ({count} checks in {elapsed:?})");
}

#[test]
fn acceptance_5_duality_displays() {
    let (count, elapsed) = run_and_require_green(
        &["nd", "hd", "zq"],
        &acceptance_limits(),
        ExecMode::Parallel { jobs: None },
    );
    println!("ACCEPTANCE 5 duality: PASS ({count} checks in {elapsed:?})");
}

#[test]
fn acceptance_6_bcr_and_proof_chain() {
    let (count, elapsed) = run_and_require_green(
        &["bcr", "spectral"],
        &acceptance_limits(),
        ExecMode::Parallel { jobs: None },
    );
    // Spot value of the proof chain at t = 5/2, m1 = m2 = 1, m = 0:
    // the B eigenvalue (7/3) times the C factor (3/7) is the R eigenvalue 1.
    let t = Rat::new(5, 2);
    let b_ev = (&t + &Rat::one()) / (&t - &Rat::one());
    assert_eq!(b_ev, Rat::new(7, 3));
    let c = kzdual_core::qop::c_scalar(1, 1, &t).unwrap();
    assert_eq!(c, Rat::new(3, 7));
    assert_eq!(&b_ev * &c, r_eigenvalue(1, 1, 0, &t).unwrap());
    assert_eq!(&b_ev * &c, Rat::one());
    println!("ACCEPTANCE 6 theorem BR: PASS ({count} checks in {elapsed:?})");
}

#[test]
fn acceptance_7_structural_checks() {
    let start = Instant::now();
    // Casimir spectrum matches (nu, nu + 2 rho) on projector images, with
    // rho_a = (k - 2a + 1)/2; e.g. the value 2 on V_(1,0) for gl_2.
    let rho_pairing = |k: usize, nu: &[i64]| -> i64 {
        let mut acc = Rat::zero();
        for (a, &p) in nu.iter().enumerate() {
            let rho = Rat::new(k as i64 - 2 * (a as i64 + 1) + 1, 2);
            acc += &(&Rat::from_int(p) * &(Rat::from_int(p) + &rho.scale_by(2)));
        }
        acc.to_integer().expect("integral Casimir eigenvalue")
    };
    let single = Arc::new(enumerate_tables(&Margins::new(2, 1, vec![1], vec![1, 0])));
    let c = casimir(Side::Glk, &single);
    assert_eq!(c.get(0, 0), &Rat::from_int(rho_pairing(2, &[1, 0])));
    assert_eq!(c.get(0, 0), &Rat::from_int(2));
    // On every gl_2 block the Casimir is annihilated by the (nu, nu + 2 rho)
    // spectrum over the partitions nu = (D - m, m), and the projector images
    // carry exactly those eigenvalues.
    for n in 2..=3usize {
        for d in 0..=4i64 {
            for lambda in enumerate_compositions(n, d) {
                for mu in enumerate_compositions(2, d) {
                    let margins = Margins::new(2, n, lambda.clone(), mu.clone());
                    let block = Arc::new(enumerate_tables(&margins));
                    if block.is_empty() {
                        continue;
                    }
                    let cas = casimir(Side::Glk, &block);
                    let min = mu[0].min(mu[1]);
                    let spectrum: Vec<Rat> = (0..=min)
                        .map(|m| Rat::from_int(rho_pairing(2, &[d - m, m])))
                        .collect();
                    let ps = lagrange_projectors(&cas, &spectrum)
                        .expect("spectrum annihilates the Casimir");
                    for (p, ev) in ps.iter().zip(&spectrum) {
                        assert_eq!(&(&cas * p), &p.scale(ev));
                    }
                }
            }
        }
    }
    // Lemma relating the two Casimirs: residual exactly zero.
    let (ikn_count, _) = run_and_require_green(
        &["ikn"],
        &acceptance_limits(),
        ExecMode::Parallel { jobs: None },
    );
    // Howe-dual dimension identity for k, n <= 3, D <= 6.
    for k in 1..=3usize {
        for n in 1..=3usize {
            for d in 0..=6i64 {
                let lhs: i64 = enumerate_partitions(k.min(n), d)
                    .iter()
                    .map(|nu| weyl_dimension(k, nu).unwrap() * weyl_dimension(n, nu).unwrap())
                    .sum();
                assert_eq!(
                    lhs,
                    binomial((k * n) as i64 + d - 1, d),
                    "k={k} n={n} D={d}"
                );
            }
        }
    }
    assert_eq!(
        enumerate_partitions(2, 2)
            .iter()
            .map(|nu| weyl_dimension(2, nu).unwrap().pow(2))
            .sum::<i64>(),
        10,
        "9 + 1 = 10 = C(5,2) at k = n = 2, D = 2"
    );
    println!(
        "ACCEPTANCE 7 structural: PASS ({ikn_count} ikn checks + spectra + dimensions in {:?})",
        start.elapsed()
    );
}

#[test]
fn acceptance_8_reports_are_byte_identical() {
    let start = Instant::now();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_kzdual"))
            .args(["verify", "--suite", "all", "--seed", "42"])
            .output()
            .expect("binary runs")
    };
    let a = run();
    let b = run();
    assert_eq!(a.status.code(), Some(0), "all suites pass");
    assert_eq!(b.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout, "reports are byte-identical");
    println!(
        "ACCEPTANCE 8 determinism: PASS ({} report bytes, two runs in {:?})",
        a.stdout.len(),
        start.elapsed()
    );
}

/// Small helper: scale a Rat by an integer (kept local to the test).
trait ScaleBy {
    fn scale_by(&self, f: i64) -> Rat;
}

impl ScaleBy for Rat {
    fn scale_by(&self, f: i64) -> Rat {
        self * &Rat::from_int(f)
    }
}
