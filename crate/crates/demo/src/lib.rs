//! Browser front end: a Beatty-sequence explorer, a Psi/alpha curve and an
//! exponential-sum walk. Each export returns JSON for the page to draw.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use smooth_beatty::beatty::BeattyParams;
use smooth_beatty::diophantine::{parse_rational, parse_real};
use smooth_beatty::expsum::{e, Phase};
use smooth_beatty::primes_smooth::SpfSieve;
use smooth_beatty::saddle::{solve_alpha, DEFAULT_TOL};

/// Keeps page interactions responsive.
pub const MAX_X: f64 = 2_000_000.0;
const MAX_TERMS: u32 = 5_000;
const MAX_WALK_POINTS: usize = 4_000;

#[derive(Debug, PartialEq, Serialize)]
pub struct Term {
    pub n: u64,
    pub value: u64,
    pub smooth: bool,
    pub largest_prime: u64,
}

#[derive(Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub y: f64,
    pub psi: u64,
    /// `Psi(x, y) / x`.
    pub density: f64,
    pub alpha: f64,
}

#[derive(Debug, PartialEq, Serialize)]
pub struct Walk {
    /// Partial sums `(re, im)` at evenly spaced summands, ending at the total.
    pub points: Vec<(f64, f64)>,
    pub terms: u64,
}

fn check_x(x: f64) -> Result<(), String> {
    if !(1.0..=MAX_X).contains(&x) {
        return Err(format!("x must lie in [1, {MAX_X}] here"));
    }
    Ok(())
}

/// The first `count` terms of `floor(theta n + psi)` with their largest
/// prime factors.
pub fn beatty_terms(theta: &str, psi: &str, count: u32, y: f64) -> Result<Vec<Term>, String> {
    let count = count.min(MAX_TERMS);
    let theta = parse_real(theta).map_err(|e| e.to_string())?;
    let psi = parse_rational(psi.strip_prefix("dec:").unwrap_or(psi)).map_err(|e| e.to_string())?;
    let params = BeattyParams::new(theta, psi).map_err(|e| e.to_string())?;
    let top = params.last_value(count as f64).map_err(|e| e.to_string())?;
    let sieve = SpfSieve::new(top.max(2)).map_err(|e| e.to_string())?;
    (1..=count as u64)
        .map(|n| {
            let value = params.term(n).map_err(|e| e.to_string())?;
            let largest_prime = if value < 2 { 1 } else { sieve.largest_prime_factor(value).map_err(|e| e.to_string())? };
            Ok(Term { n, value, smooth: largest_prime as f64 <= y, largest_prime })
        })
        .collect()
}

/// `Psi(x, y)` and `alpha(x, y)` at `points` values of `y` spaced
/// geometrically between 2 and `x`.
pub fn psi_alpha_curve(x: f64, points: u32) -> Result<Vec<CurvePoint>, String> {
    check_x(x)?;
    if x < 4.0 || points < 2 {
        return Err("need x >= 4 and at least two points".into());
    }
    let sieve = SpfSieve::new(x as u64).map_err(|e| e.to_string())?;
    let mut out: Vec<CurvePoint> = Vec::new();
    for k in 0..points {
        let y = (2f64.ln() + (x.ln() - 2f64.ln()) * k as f64 / (points - 1) as f64).exp().floor().max(2.0);
        if out.last().is_some_and(|p| p.y == y) {
            continue;
        }
        let psi = sieve.psi(x, y).map_err(|e| e.to_string())?.count;
        let alpha = solve_alpha(&sieve, x, y, DEFAULT_TOL).map_err(|e| e.to_string())?.alpha;
        out.push(CurvePoint { y, psi, density: psi as f64 / x, alpha });
    }
    Ok(out)
}

/// Partial sums of `e(n theta)` over `y`-smooth `n <= x`.
pub fn expsum_walk(x: f64, y: f64, theta: &str) -> Result<Walk, String> {
    check_x(x)?;
    let theta = parse_real(theta).map_err(|e| e.to_string())?;
    let sieve = SpfSieve::new((x as u64).max(2)).map_err(|e| e.to_string())?;
    let smooth: Vec<u64> = sieve.smooth_numbers(x, y).map_err(|e| e.to_string())?.collect();
    let phase = Phase::of(&theta);
    let stride = smooth.len().div_ceil(MAX_WALK_POINTS).max(1);
    let mut points = vec![(0.0, 0.0)];
    let (mut re, mut im) = (0.0, 0.0);
    for (i, &n) in smooth.iter().enumerate() {
        let v = e(phase.at(n));
        re += v.re;
        im += v.im;
        if (i + 1) % stride == 0 || i + 1 == smooth.len() {
            points.push((re, im));
        }
    }
    Ok(Walk { points, terms: smooth.len() as u64 })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
        .and_then(|v| serde_json::to_string(&v).map_err(|e| JsError::new(&e.to_string())))
}

#[wasm_bindgen(js_name = beattyTerms)]
pub fn beatty_terms_js(theta: &str, psi: &str, count: u32, y: f64) -> Result<String, JsError> {
    to_js(beatty_terms(theta, psi, count, y))
}

#[wasm_bindgen(js_name = psiAlphaCurve)]
pub fn psi_alpha_curve_js(x: f64, points: u32) -> Result<String, JsError> {
    to_js(psi_alpha_curve(x, points))
}

#[wasm_bindgen(js_name = expsumWalk)]
pub fn expsum_walk_js(x: f64, y: f64, theta: &str) -> Result<String, JsError> {
    to_js(expsum_walk(x, y, theta))
}
