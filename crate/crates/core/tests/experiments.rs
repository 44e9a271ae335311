mod common;

use num_rational::BigRational;
use num_traits::Zero;

use common::*;
use smooth_beatty::beatty::{count_smooth_in_beatty, BeattyParams};
use smooth_beatty::diophantine::{QuadIrr, QuadNum};
use smooth_beatty::expsum::{smooth_discrepancy_sum, theorem2_rhs};
use smooth_beatty::primes_smooth::SpfSieve;
use smooth_beatty::saddle::{solve_alpha, DEFAULT_TOL};
use smooth_beatty::verify::{self, Lemma21Point, Theorem1Point};

fn phi() -> QuadNum {
    QuadIrr::golden_ratio().into_value()
}

#[test]
fn theorem1_records_match_module_calls() {
    let sieve = SpfSieve::new(3_000_000).unwrap();
    let mut grid = verify::default_theorem1_grid();
    grid.retain(|p| p.x <= 1e5);
    for (p, r) in grid.iter().zip(verify::run_theorem1(&grid, &sieve)) {
        let r = r.unwrap();
        let params = BeattyParams::new(p.theta.clone(), p.psi.clone()).unwrap();
        assert_eq!(r.lhs, count_smooth_in_beatty(&params, p.x, p.y, &sieve).unwrap());
        let tx = verify::floor_theta_x(&p.theta, p.x).unwrap();
        assert_eq!(r.psi_tx_y, sieve.psi(tx as f64, p.y).unwrap().count);
        assert!(r.lhs <= p.x as u64 && r.ratio > 0.0 && r.ratio.is_finite());
    }
}

#[test]
fn theorem1_against_brute_force_at_y_2700() {
    let fixture = std::fs::read_to_string(fixtures_dir().join("theorem1_oracle.csv")).unwrap();
    let row: Vec<&str> = fixture.lines().find(|l| l.starts_with("1000000,2700,")).unwrap().split(',').collect();
    let sieve = SpfSieve::new(2_000_000).unwrap();
    let p = Theorem1Point { x: 1e6, y: 2700.0, theta: phi(), psi: BigRational::zero() };
    let r = verify::run_theorem1(&[p], &sieve).pop().unwrap().unwrap();
    assert_eq!(r.lhs.to_string(), row[2]);
    assert_eq!(r.psi_tx_y.to_string(), row[3]);
    assert!((0.95..=1.05).contains(&r.ratio));
}

#[test]
fn theorem1_everything_smooth() {
    let sieve = SpfSieve::new(20_000).unwrap();
    for x in [1000.0, 5000.0, 10_000.0] {
        let p = Theorem1Point { x, y: 20_000.0, theta: phi(), psi: BigRational::zero() };
        let r = verify::run_theorem1(&[p], &sieve).pop().unwrap().unwrap();
        let tx = (x * phi().to_f64()).floor();
        assert_eq!(r.lhs, x as u64);
        assert!((r.ratio - phi().to_f64() * x / tx).abs() < 1e-12);
        assert!((r.ratio - 1.0).abs() < 2.0 / x);
    }
}

#[test]
fn lemma21_with_y_at_x() {
    let sieve = SpfSieve::new(100_000).unwrap();
    let out = verify::run_lemma21(&[Lemma21Point { x: 1e5, y: 1e5, d: 10.0 }], &sieve);
    let r = out[0].as_ref().unwrap();
    assert_eq!(r.lhs, 10_000);
    // alpha(x, x) is close to 1
    assert!((r.scaled - 1.0).abs() < 0.2, "{}", r.scaled);
}

#[test]
fn bound_sweep_stays_below_trivial_bound() {
    let sieve = SpfSieve::new(200_000).unwrap();
    let recs = verify::run_bound_sweep(1e5, 500.0, &phi(), 10, &sieve).unwrap();
    for r in &recs {
        assert!(r.observed / r.psi_tx_y as f64 <= 0.5);
        assert_eq!(r.status, "ok");
    }
    let s = smooth_discrepancy_sum(&sieve, 1e5, 500.0, &phi(), 0).unwrap();
    assert_eq!(s.terms, recs[0].psi_tx_y);
}

#[test]
fn bound_report_reference_point() {
    // x = 10^6, y = 10^3, q = 611, delta = 10^-9
    let sieve = SpfSieve::new(1_000_000).unwrap();
    let psi = sieve.psi(1e6, 1e3).unwrap().count;
    let alpha = solve_alpha(&sieve, 1e6, 1e3, DEFAULT_TOL).unwrap();
    let r = theorem2_rhs(1e6, 1e3, 611, 1e-9, psi, &alpha, 0.0).unwrap();
    let a = alpha.alpha;
    let l: f64 = 2.0 * (1.0 + 1e-3);
    let u: f64 = 1e6f64.ln() / 1e3f64.ln();
    let m = u * u.sqrt() * u.ln() * 1e6f64.ln() * l.ln().sqrt() * (611e3f64).ln().sqrt();
    let main = psi as f64 * (611.0 * 1.001f64).powf(1.0 - 1.5 * a) * m;
    let tail = psi as f64 / 1e6f64.powf(a / 2.0) * (611.0 * l * 1e9).sqrt() * (1e3f64.ln() * 611f64.ln()).sqrt();
    assert!(((r.term_main - main) / main).abs() < 1e-12);
    assert!(((r.term_tail - tail) / tail).abs() < 1e-12);
    assert_eq!(r.l, l);
}

#[test]
fn report_round_trip_of_real_runs() {
    let sieve = SpfSieve::new(200_000).unwrap();
    let recs = verify::run_bound_sweep(1e5, 500.0, &phi(), 3, &sieve).unwrap();
    for f in [verify::Format::Csv, verify::Format::Json] {
        let text = verify::render(&recs, f);
        let back: Vec<verify::BoundRecord> = match f {
            verify::Format::Csv => verify::parse_csv(&text).unwrap(),
            verify::Format::Json => verify::parse_json(&text).unwrap(),
        };
        assert_eq!(back, recs);
    }
}
