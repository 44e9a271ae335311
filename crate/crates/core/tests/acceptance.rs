//! Acceptance checks 1-10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;
use smooth_beatty::beatty::BeattyParams;
use smooth_beatty::diophantine::{dirichlet_approx, QuadIrr, QuadNum};
use smooth_beatty::expsum::{e, erdos_turan, exp_sum, theorem2_rhs, MultFn};
use smooth_beatty::primes_smooth::{psi_dfs, SpfSieve};
use smooth_beatty::saddle::{solve_alpha, SaddleAlpha, DEFAULT_TOL};
use smooth_beatty::verify::{self, Lemma21Point, Theorem1Point};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn big_sieve() -> &'static SpfSieve {
    static S: std::sync::OnceLock<SpfSieve> = std::sync::OnceLock::new();
    S.get_or_init(|| SpfSieve::new(10_000_000).expect("sieve"))
}

fn phi() -> QuadNum {
    QuadIrr::golden_ratio().into_value()
}

fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixtures_dir().join(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

fn c1_psi_oracles() -> Outcome {
    let n = 10_000u64;
    let sieve = ok(SpfSieve::new(n))?;
    let small = eratosthenes(n as usize);
    let mut checked = 0;
    for y in [2u64, 3, 5, 7, 10, 30, 100] {
        let primes = sieve.primes_up_to(y as f64);
        let mut brute = 0u64;
        for x in 1..=n {
            if trial_smooth(x, y, &small) {
                brute += 1;
            }
            let s = ok(sieve.psi(x as f64, y as f64))?.count;
            let d = ok(psi_dfs(x as f64, y as f64, primes))?.count;
            ensure(s == brute && d == brute, || format!("x={x} y={y}: sieve {s}, dfs {d}, brute {brute}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (x, y) pairs agree"))
}

fn c2_saddle() -> Outcome {
    let sieve = big_sieve();
    let mut worst: f64 = 0.0;
    let mut points = 0;
    for k in 0..10 {
        let x = 10f64.powf(2.0 + 5.0 * k as f64 / 9.0);
        for t in [0.2, 0.35, 0.5, 0.75, 1.0] {
            let y = x.powf(t).max(2.0).floor();
            let a = ok(solve_alpha(sieve, x, y, DEFAULT_TOL))?;
            // compensated sum, independent of the solver's
            let (mut s, mut comp) = (0.0f64, 0.0f64);
            for p in eratosthenes_cached(y as usize) {
                let lp = (p as f64).ln();
                let v = lp / ((p as f64).powf(a.alpha) - 1.0) - comp;
                let t2 = s + v;
                comp = (t2 - s) - v;
                s = t2;
            }
            let r = (s - x.ln()).abs();
            worst = worst.max(r);
            ensure(r <= 1e-9, || format!("residual {r:e} at x={x}, y={y}"))?;
            points += 1;
        }
    }
    let a = ok(solve_alpha(sieve, 1e6, 3000.0, DEFAULT_TOL))?.alpha;
    ensure(a >= 2.0 / 3.0, || format!("alpha(10^6, 3000) = {a} < 2/3"))?;
    Ok(format!("{points} points, max residual {worst:.2e}; alpha(10^6, 3000) = {a:.6}"))
}

fn eratosthenes_cached(n: usize) -> Vec<u64> {
    static P: std::sync::OnceLock<Vec<u64>> = std::sync::OnceLock::new();
    P.get_or_init(|| eratosthenes(10_000_000)).iter().copied().take_while(|&p| p as usize <= n).collect()
}

fn c3_membership() -> Outcome {
    let n = 100_000u64;
    let fixtures = [
        SurdBeatty { a: 1, b: 1, d: 5, c: 2, p: 0, r: 1 },
        SurdBeatty { a: 1, b: 1, d: 5, c: 2, p: 7, r: 10 },
        SurdBeatty { a: 1, b: 1, d: 2, c: 1, p: 0, r: 1 },
        SurdBeatty { a: 1, b: 1, d: 2, c: 1, p: 1, r: 3 },
        SurdBeatty { a: 0, b: 1, d: 3, c: 1, p: 1, r: 2 },
        SurdBeatty { a: 3, b: 1, d: 7, c: 2, p: 2, r: 1 },
    ];
    for f in &fixtures {
        let theta = ok(QuadIrr::new(f.a, f.b, f.d, f.c))?.into_value();
        let params = ok(BeattyParams::new(theta, BigRational::new(f.p.into(), f.r.into())))?;
        let mut member = vec![false; n as usize + 1];
        for k in 1.. {
            let t = f.term(k);
            if t > n {
                break;
            }
            member[t as usize] = true;
        }
        for m in 1..=n {
            let c = ok(params.contains(m))?;
            ensure(c == member[m as usize], || {
                format!("theta=({}+{}sqrt{})/{}, psi={}/{}: m={m} criterion {c}", f.a, f.b, f.d, f.c, f.p, f.r)
            })?;
        }
    }
    Ok(format!("{} fixtures x {n} values of m", fixtures.len()))
}

/// `|theta - a/q| <= 1/(q cap)` for `theta = (a0 + b sqrt d)/c`, `c > 0`, exactly.
fn contract_holds(a0: i64, b: i64, d: i64, c: i64, a: &BigInt, q: u64, cap: u64) -> bool {
    if q == 0 || q > cap || !a.gcd(&BigInt::from(q)).is_one() {
        return false;
    }
    let (cap, q, c, d) = (BigInt::from(cap), BigInt::from(q), BigInt::from(c), BigInt::from(d));
    // |q(a0 + b sqrt d) - a c| <= c / cap, scaled by cap
    let u = &cap * (&q * a0 - a * &c);
    let v = &cap * &q * b;
    sign_surd(&(&u + &c), &v, &d) >= 0 && sign_surd(&(&u - &c), &v, &d) <= 0
}

fn c4_dirichlet() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0004);
    let mut done = 0;
    while done < 1000 {
        let d: i64 = rng.gen_range(2..1000);
        let r = (d as f64).sqrt() as i64;
        if r * r == d || (r + 1) * (r + 1) == d {
            continue;
        }
        let a0: i64 = rng.gen_range(-50..=50);
        let b: i64 = if rng.gen() { rng.gen_range(1..=20) } else { -rng.gen_range(1..=20) };
        let c: i64 = rng.gen_range(1..=50);
        let cap: u64 = 10u64.pow(rng.gen_range(0..=12)) * rng.gen_range(1..10);
        let theta = ok(QuadIrr::new(a0, b, d, c))?.into_value();
        let r = ok(dirichlet_approx(&theta, cap))?;
        ensure(contract_holds(a0, b, d, c, &r.a, r.q, cap), || {
            format!("theta=({a0}+{b}sqrt{d})/{c}, Q={cap}: a={}, q={}", r.a, r.q)
        })?;
        done += 1;
    }
    Ok(format!("{done} random instances"))
}

fn c5_erdos_turan() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0005);
    let mut worst = f64::INFINITY;
    for k in 0..100 {
        let n: usize = rng.gen_range(1..=2000);
        let j: u32 = rng.gen_range(1..=30);
        let rho: f64 = rng.gen_range(-1.0..1.0);
        let sigma = rho + rng.gen_range(0.0..=1.0);
        let u: Vec<f64> = match k % 4 {
            0 => (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect(),
            1 => {
                let c: f64 = rng.gen();
                (0..n).map(|_| c + rng.gen_range(-0.01..0.01)).collect()
            }
            2 => {
                let a: f64 = rng.gen();
                (1..=n).map(|i| i as f64 * a).collect()
            }
            _ => (0..n).map(|i| (i % 7) as f64 / 7.0).collect(),
        };
        let r = ok(erdos_turan(&u, j, rho, sigma))?;
        ensure(r.lhs <= r.rhs, || format!("sequence {k}: lhs {} > rhs {}", r.lhs, r.rhs))?;
        worst = worst.min(r.rhs - r.lhs);
    }
    // u_m = (m + 1 - psi)/theta over smooth m <= theta x
    let sieve = big_sieve();
    let (x, y) = (100_000.0, 500.0);
    let tx = ok(verify::floor_theta_x(&phi(), x))?;
    let smooth: Vec<u64> = ok(sieve.smooth_numbers(tx as f64, y))?.collect();
    let theta = phi().to_f64();
    let mut cases = 0;
    for psi in [0.0, 0.7] {
        let u: Vec<f64> = smooth.iter().map(|&m| (m as f64 + 1.0 - psi) / theta).collect();
        for j in [1u32, 5, 20, 50] {
            for (rho, sigma) in [(0.0, 1.0 / theta), (0.1, 0.4), (0.5, 1.2), (-0.3, 0.3)] {
                let r = ok(erdos_turan(&u, j, rho, sigma))?;
                ensure(r.lhs <= r.rhs, || format!("smooth sequence psi={psi} J={j} [{rho},{sigma}]: {} > {}", r.lhs, r.rhs))?;
                cases += 1;
            }
        }
    }
    Ok(format!("100 random sequences (min slack {worst:.3}) and {cases} smooth-sequence cases, N = {}", smooth.len()))
}

fn c6_theorem1() -> Outcome {
    let fixture = read_fixture("theorem1_oracle.csv");
    let mut rows = Vec::new();
    for line in fixture.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        rows.push((f[0].parse::<f64>().unwrap(), f[1].parse::<f64>().unwrap(), f[4].parse::<f64>().unwrap()));
    }
    let grid: Vec<Theorem1Point> = [1e4, 1e5, 1e6]
        .iter()
        .map(|&x| Theorem1Point { x, y: verify::log_cubed(x), theta: phi(), psi: BigRational::from_integer(0.into()) })
        .collect();
    let recs = verify::run_theorem1(&grid, big_sieve());
    let mut summary = Vec::new();
    for (p, r) in grid.iter().zip(recs) {
        let r = ok(r)?;
        let &(_, _, fix) = rows
            .iter()
            .find(|(x, y, _)| *x == p.x && *y == p.y)
            .ok_or_else(|| format!("no fixture for x={}, y={}", p.x, p.y))?;
        let band = 2.0 * (fix - 1.0).abs();
        ensure((r.ratio - fix).abs() <= band, || format!("x={}: ratio {} vs fixture {fix} (band {band:e})", p.x, r.ratio))?;
        summary.push(format!("{:.6}", r.ratio));
        if p.x == 1e6 {
            ensure((0.9..=1.1).contains(&r.ratio), || format!("x=10^6 ratio {} outside [0.9, 1.1]", r.ratio))?;
        }
    }
    Ok(format!("ratios {}", summary.join(", ")))
}

fn c7_lemma21() -> Outcome {
    let c: f64 = read_fixture("lemma21_constant.txt").trim().parse().map_err(|e| format!("{e}"))?;
    let mut grid = Vec::new();
    for y in [100.0, 1000.0] {
        for d in [2.0, 10.0, 100.0, 1000.0] {
            grid.push(Lemma21Point { x: 1e6, y, d });
        }
    }
    let mut worst: f64 = 0.0;
    for r in verify::run_lemma21(&grid, big_sieve()) {
        let r = ok(r)?;
        worst = worst.max(r.scaled);
        ensure(r.scaled <= c, || format!("y={} d={}: scaled {} > {c}", r.y, r.d, r.scaled))?;
    }
    Ok(format!("max scaled {worst:.4} <= C = {c}"))
}

fn c8_expsum() -> Outcome {
    let sieve = big_sieve();
    let thetas = [
        phi(),
        ok(QuadIrr::new(0, 1, 2, 1))?.into_value(),
        ok(QuadIrr::new(3, -1, 7, 2))?.into_value(),
    ];
    let fs: [MultFn; 2] = [MultFn::one(), ok("2=-1,3=e(1/3),5=0.5i,7=0.6-0.8i".parse())?];
    for t in &thetas {
        for y in [100.0, 1000.0, 1e6] {
            for f in &fs {
                let r = ok(exp_sum(sieve, 1e6, y, t, f))?;
                ensure(r.abs() <= r.terms as f64, || format!("|S| = {} > Psi = {} at theta={t}, y={y}", r.abs(), r.terms))?;
            }
        }
    }
    for y in [2.0, 100.0, 1e6] {
        let r = ok(exp_sum(sieve, 1e6, y, &QuadNum::from_integer(0), &MultFn::one()))?;
        let psi = ok(sieve.psi(1e6, y))?.count;
        ensure(r.re == psi as f64 && r.im == 0.0, || format!("theta=0, y={y}: {} + {}i vs {psi}", r.re, r.im))?;
    }
    let mut worst: f64 = 0.0;
    for (a, b, d, c) in [(0i64, 1i64, 2i64, 1i64), (1, 1, 5, 2)] {
        let theta = ok(QuadIrr::new(a, b, d, c))?.into_value();
        let y = 1000.0;
        let fast = ok(exp_sum(sieve, 1e6, y, &theta, &MultFn::one()))?;
        let mut re = 0.0;
        let mut im = 0.0;
        for n in ok(sieve.smooth_numbers(1e6, y))? {
            let v = e(frac_reference(a, b, d, c, n, 170));
            re += v.re;
            im += v.im;
        }
        let err = (fast.re - re).hypot(fast.im - im);
        worst = worst.max(err / fast.terms as f64);
        ensure(err <= 1e-6 * fast.terms as f64, || format!("theta={theta}: error {err:e} vs Psi {}", fast.terms))?;
    }
    Ok(format!("triangle bound and theta=0 exact; reference error {worst:.1e} * Psi"))
}

/// The two displayed terms, transcribed without the library's helpers.
fn transcribed_bound(x: f64, y: f64, q: u64, delta: f64, psi: f64, alpha: f64) -> (f64, f64) {
    let q = q as f64;
    let u = x.ln() / y.ln();
    let big_l = 2.0 * (1.0 + (delta * x).abs());
    let big_m = u.powf(1.5) * u.ln() * x.ln() * big_l.ln().sqrt() * (q * y).ln().sqrt();
    let main = psi * (q * (1.0 + (delta * x).abs())).powf(-0.5 + 1.5 * (1.0 - alpha)) * big_m;
    let tail = psi * x.powf(-alpha / 2.0) * (q * big_l * y * y * y).sqrt() * (y.ln() * q.ln()).sqrt();
    (main, tail)
}

fn c9_bound_sweep() -> Outcome {
    let sieve = big_sieve();
    let recs = ok(verify::run_bound_sweep(1e5, 500.0, &phi(), 10, sieve))?;
    ensure(recs.len() == 10, || format!("{} records", recs.len()))?;
    let oracle = read_fixture("bounds_oracle.csv");
    for (r, line) in recs.iter().zip(oracle.lines().skip(1)) {
        let j = r.j as i64;
        // j / phi = (-j + j sqrt 5) / 2
        ensure(contract_holds(-j, j, 5, 2, &BigInt::from(r.a), r.q, r.cap), || format!("j={j}: contract fails for {}/{}", r.a, r.q))?;
        let main = r.term_main.ok_or_else(|| format!("j={j}: {}", r.status))?;
        let tail = r.term_tail.ok_or_else(|| format!("j={j}: {}", r.status))?;
        ensure(main.is_finite() && main > 0.0 && tail.is_finite() && tail > 0.0, || format!("j={j}: terms {main}, {tail}"))?;
        ensure(r.observed <= r.psi_tx_y as f64, || format!("j={j}: observed above Psi"))?;
        let expected: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        let norm = r.observed / r.psi_tx_y as f64;
        ensure((norm - expected).abs() <= 1e-9, || format!("j={j}: |S|/Psi {norm} vs reference {expected}"))?;
    }
    let mut worst: f64 = 0.0;
    for (x, y, q, delta) in [(1e6, 1e3, 611u64, 1e-9), (1e6, 100.0, 2, 0.0), (2e6, 500.0, 97, -3.5e-5), (5e5, 50.0, 12345, 1e-3)] {
        let psi = ok(sieve.psi(x, y))?.count;
        let alpha: SaddleAlpha = ok(solve_alpha(sieve, x, y, DEFAULT_TOL))?;
        let rep = ok(theorem2_rhs(x, y, q, delta, psi, &alpha, 1.0))?;
        let (m, t) = transcribed_bound(x, y, q, delta, psi as f64, alpha.alpha);
        for (got, want) in [(rep.term_main, m), (rep.term_tail, t), (rep.rhs_total, m + t)] {
            let rel = ((got - want) / want).abs();
            worst = worst.max(rel);
            ensure(rel <= 1e-12, || format!("x={x} y={y} q={q}: {got} vs {want}"))?;
        }
    }
    Ok(format!("10 sweep records; transcription agrees to {worst:.1e}"))
}

fn c10_determinism() -> Outcome {
    let dir = ok(tempfile::tempdir())?;
    let bin = env!("CARGO_BIN_EXE_smooth-beatty");
    let mut outs = Vec::new();
    for k in 0..2 {
        let path = dir.path().join(format!("run{k}.csv"));
        let st = ok(Command::new(bin).args(["verify", "theorem1", "--out"]).arg(&path).status())?;
        ensure(st.success(), || format!("run {k} exited with {st}"))?;
        outs.push(ok(std::fs::read(&path))?);
    }
    ensure(outs[0] == outs[1], || "CSV outputs differ".into())?;
    ensure(!outs[0].is_empty(), || "empty CSV".into())?;
    let rows = outs[0].iter().filter(|&&b| b == b'\n').count() - 1;
    Ok(format!("two runs byte-identical ({rows} rows, {} bytes)", outs[0].len()))
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Outcome); 10] = [
        (1, "psi oracle equivalence", 5, c1_psi_oracles),
        (2, "saddle point", 10, c2_saddle),
        (3, "Beatty membership", 30, c3_membership),
        (4, "Dirichlet contract", 10, c4_dirichlet),
        (5, "Erdos-Turan", 30, c5_erdos_turan),
        (6, "Beatty smooth-count ratio", 300, c6_theorem1),
        (7, "scaled Psi(x/d, y) bounded", 60, c7_lemma21),
        (8, "exponential sums", 120, c8_expsum),
        (9, "bound sweep plumbing", 60, c9_bound_sweep),
        (10, "determinism", 600, c10_determinism),
    ];
    let t = Instant::now();
    big_sieve();
    println!("shared sieve to 10^7 built in {:.2}s", t.elapsed().as_secs_f64());
    let mut failed = 0;
    for (n, name, limit, f) in criteria {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let el = t.elapsed();
        let outcome = match outcome {
            Ok(msg) if el > Duration::from_secs(limit) => Err(format!("over time limit: {msg}")),
            o => o,
        };
        let (tag, msg) = match &outcome {
            Ok(m) => ("PASS", m),
            Err(m) => ("FAIL", m),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("criterion {n:>2} {tag} [{:.2}s / {limit}s] {name}: {msg}", el.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
