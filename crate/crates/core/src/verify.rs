//! Experiment harness: grids of parameters, the records computed at each
//! point, and CSV/JSON reports.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::beatty::{count_smooth_in_beatty, BeattyParams};
use crate::diophantine::{dirichlet_approx, parse_rational, parse_real, QuadIrr, QuadNum};
use crate::error::{Error, Result};
use crate::expsum::{smooth_discrepancy_sum, theorem2_rhs};
use crate::primes_smooth::SpfSieve;
use crate::saddle::{solve_alpha, DEFAULT_TOL};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Record {
    pub x: f64,
    pub y: f64,
    pub theta: String,
    pub psi: String,
    /// Number of `y`-smooth members of `B(x)`.
    pub lhs: u64,
    /// `Psi(theta x, y)`.
    pub psi_tx_y: u64,
    /// `theta lhs / Psi(theta x, y)`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma21Record {
    pub x: f64,
    pub y: f64,
    pub d: f64,
    /// `Psi(x/d, y)`.
    pub lhs: u64,
    /// `d^alpha(x,y) Psi(x/d, y) / Psi(x, y)`.
    pub scaled: f64,
}

/// One `j` of a bound sweep. Bound fields are empty when the point was
/// skipped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub x: f64,
    pub y: f64,
    pub theta: String,
    pub j: u64,
    pub a: i64,
    pub q: u64,
    pub delta: f64,
    pub cap: u64,
    /// `Psi(theta x, y)`.
    pub psi_tx_y: u64,
    /// `ok`, or the reason the bound was not evaluated.
    pub status: String,
    pub alpha: Option<f64>,
    pub u: Option<f64>,
    #[serde(rename = "L")]
    pub l: Option<f64>,
    #[serde(rename = "M")]
    pub m: Option<f64>,
    pub term_main: Option<f64>,
    pub term_tail: Option<f64>,
    pub rhs_total: Option<f64>,
    /// `|sum_{m <= theta x, P(m) <= y} e(j m / theta)|`.
    pub observed: f64,
    pub ratio: Option<f64>,
}

/// A value in a report row.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i128),
    Real(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn opt(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Real)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => fmt_real(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) if v.is_finite() => fmt_real(*v),
            Cell::Real(_) | Cell::Empty => "null".into(),
            Cell::Text(s) => serde_json::to_string(s).expect("strings serialize"),
        }
    }
}

/// 17 significant digits, `.` as separator.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// A flat record with a fixed column order.
pub trait Record: Serialize + DeserializeOwned {
    const FIELDS: &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

impl Record for Theorem1Record {
    const FIELDS: &'static [&'static str] = &["x", "y", "theta", "psi", "lhs", "psi_tx_y", "ratio"];

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Real(self.x),
            Cell::Real(self.y),
            Cell::Text(self.theta.clone()),
            Cell::Text(self.psi.clone()),
            Cell::Int(self.lhs.into()),
            Cell::Int(self.psi_tx_y.into()),
            Cell::Real(self.ratio),
        ]
    }
}

impl Record for Lemma21Record {
    const FIELDS: &'static [&'static str] = &["x", "y", "d", "lhs", "scaled"];

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Real(self.x),
            Cell::Real(self.y),
            Cell::Real(self.d),
            Cell::Int(self.lhs.into()),
            Cell::Real(self.scaled),
        ]
    }
}

impl Record for BoundRecord {
    const FIELDS: &'static [&'static str] = &[
        "x", "y", "theta", "j", "a", "q", "delta", "cap", "psi_tx_y", "status", "alpha", "u", "L", "M",
        "term_main", "term_tail", "rhs_total", "observed", "ratio",
    ];

    fn cells(&self) -> Vec<Cell> {
        vec![
            Cell::Real(self.x),
            Cell::Real(self.y),
            Cell::Text(self.theta.clone()),
            Cell::Int(self.j.into()),
            Cell::Int(self.a.into()),
            Cell::Int(self.q.into()),
            Cell::Real(self.delta),
            Cell::Int(self.cap.into()),
            Cell::Int(self.psi_tx_y.into()),
            Cell::Text(self.status.clone()),
            Cell::opt(self.alpha),
            Cell::opt(self.u),
            Cell::opt(self.l),
            Cell::opt(self.m),
            Cell::opt(self.term_main),
            Cell::opt(self.term_tail),
            Cell::opt(self.rhs_total),
            Cell::Real(self.observed),
            Cell::opt(self.ratio),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

pub fn to_csv<R: Record>(records: &[R]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(R::FIELDS).expect("in-memory write");
    for r in records {
        w.write_record(r.cells().iter().map(Cell::csv)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
}

pub fn to_json<R: Record>(records: &[R]) -> String {
    if records.is_empty() {
        return "[]\n".into();
    }
    let mut out = String::from("[\n");
    for (i, r) in records.iter().enumerate() {
        out.push_str("  {");
        for (k, (name, cell)) in R::FIELDS.iter().zip(r.cells()).enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "\"{name}\": {}", cell.json());
        }
        out.push('}');
        out.push_str(if i + 1 < records.len() { ",\n" } else { "\n" });
    }
    out.push_str("]\n");
    out
}

pub fn render<R: Record>(records: &[R], format: Format) -> String {
    match format {
        Format::Csv => to_csv(records),
        Format::Json => to_json(records),
    }
}

pub fn write_report<R: Record>(records: &[R], format: Format, path: &Path) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(render(records, format).as_bytes()).map_err(io)?;
    f.flush().map_err(io)
}

pub fn parse_csv<R: Record>(text: &str) -> Result<Vec<R>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    rd.deserialize()
        .collect::<std::result::Result<Vec<R>, _>>()
        .map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_json<R: Record>(text: &str) -> Result<Vec<R>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_report<R: Record>(path: &Path, format: Format) -> Result<Vec<R>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    match format {
        Format::Csv => parse_csv(&text),
        Format::Json => parse_json(&text),
    }
    .map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// `<experiment>_<unix seconds>.<ext>`.
pub fn default_filename(experiment: &str, format: Format) -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("{experiment}_{secs}.{}", format.extension())
}

#[derive(Clone, Debug)]
pub struct Theorem1Point {
    pub x: f64,
    pub y: f64,
    pub theta: QuadNum,
    pub psi: BigRational,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma21Point {
    pub x: f64,
    pub y: f64,
    pub d: f64,
}

#[derive(Clone, Debug)]
pub struct BoundPoint {
    pub x: f64,
    pub y: f64,
    pub theta: QuadNum,
    pub j_max: u64,
}

/// `ceil((log x)^3)`.
pub fn log_cubed(x: f64) -> f64 {
    x.ln().powi(3).ceil()
}

/// x in {10^4, 10^5, 10^6}; y in {(log x)^3, 10 (log x)^3, x^(1/3)} (rounded
/// up); theta in {(1+sqrt 5)/2, 1+sqrt 2}; psi in {0, 0.7}.
pub fn default_theorem1_grid() -> Vec<Theorem1Point> {
    let thetas = [QuadIrr::golden_ratio(), QuadIrr::new(1, 1, 2, 1).expect("1 + sqrt 2")];
    let psis = [BigRational::zero(), BigRational::new(7.into(), 10.into())];
    let mut grid = Vec::new();
    for x in [1e4, 1e5, 1e6] {
        let lc = log_cubed(x);
        for y in [lc, 10.0 * lc, x.cbrt().ceil()] {
            for theta in &thetas {
                for psi in &psis {
                    grid.push(Theorem1Point {
                        x,
                        y,
                        theta: theta.value().clone(),
                        psi: psi.clone(),
                    });
                }
            }
        }
    }
    grid
}

/// x = 10^6, y in {100, 1000}, d in {1, 2, 10, 100, 1000}.
pub fn default_lemma21_grid() -> Vec<Lemma21Point> {
    let mut grid = Vec::new();
    for y in [100.0, 1000.0] {
        for d in [1.0, 2.0, 10.0, 100.0, 1000.0] {
            grid.push(Lemma21Point { x: 1e6, y, d });
        }
    }
    grid
}

/// x = 10^5, y = 500, theta = (1+sqrt 5)/2, j <= 10.
pub fn default_bound_grid() -> Vec<BoundPoint> {
    vec![BoundPoint {
        x: 1e5,
        y: 500.0,
        theta: QuadIrr::golden_ratio().into_value(),
        j_max: 10,
    }]
}

fn exact(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::Domain(format!("{x} is not finite")))
}

/// `floor(theta x)` for `theta x >= 0`.
pub fn floor_theta_x(theta: &QuadNum, x: f64) -> Result<u64> {
    let v = theta.mul_ratio(&exact(x)?).floor();
    if v < BigInt::zero() {
        return Err(Error::Domain(format!("theta x = {theta} * {x} is negative")));
    }
    v.to_u64()
        .ok_or_else(|| Error::Range(format!("theta x = {theta} * {x} exceeds 64 bits")))
}

/// Descriptor for a shift: a decimal when it terminates, else `p/q`.
pub fn fmt_rational(r: &BigRational) -> String {
    let s = QuadNum::from_ratio(r).to_string();
    s.strip_prefix("dec:").map(str::to_string).unwrap_or(s)
}

/// Smallest sieve limit under which every point of the grid can run.
pub fn theorem1_sieve_need(grid: &[Theorem1Point]) -> Result<u64> {
    let mut need = 2;
    for p in grid {
        let top = BeattyParams::new(p.theta.clone(), p.psi.clone())?.last_value(p.x)?;
        need = need.max(top).max(floor_theta_x(&p.theta, p.x)?);
    }
    Ok(need)
}

pub fn lemma21_sieve_need(grid: &[Lemma21Point]) -> u64 {
    grid.iter()
        .map(|p| p.x.max(p.y).max(2.0).min(u64::MAX as f64) as u64)
        .max()
        .unwrap_or(2)
}

pub fn bound_sieve_need(grid: &[BoundPoint]) -> Result<u64> {
    let mut need = 2;
    for p in grid {
        need = need.max(floor_theta_x(&p.theta, p.x)?).max(p.y.min(u64::MAX as f64) as u64);
    }
    Ok(need)
}

fn theorem1_point(p: &Theorem1Point, sieve: &SpfSieve) -> Result<Theorem1Record> {
    let params = BeattyParams::new(p.theta.clone(), p.psi.clone())?;
    let lhs = count_smooth_in_beatty(&params, p.x, p.y, sieve)?;
    let tx = floor_theta_x(&p.theta, p.x)?;
    let psi_tx_y = sieve.psi(tx as f64, p.y)?.count;
    if psi_tx_y == 0 {
        return Err(Error::Domain(format!("Psi(theta x, y) = 0 at x = {}, y = {}", p.x, p.y)));
    }
    let ratio = p.theta.to_f64() * lhs as f64 / psi_tx_y as f64;
    Ok(Theorem1Record {
        x: p.x,
        y: p.y,
        theta: p.theta.to_string(),
        psi: fmt_rational(&p.psi),
        lhs,
        psi_tx_y,
        ratio,
    })
}

fn lemma21_point(p: &Lemma21Point, sieve: &SpfSieve) -> Result<Lemma21Record> {
    if !(p.d >= 1.0) || !p.d.is_finite() {
        return Err(Error::Domain(format!("d must be at least 1, got {}", p.d)));
    }
    if !(p.y >= 2.0) || !(p.x >= p.y) {
        return Err(Error::Domain(format!("need 2 <= y <= x, got x = {}, y = {}", p.x, p.y)));
    }
    let alpha = solve_alpha(sieve, p.x, p.y, DEFAULT_TOL)?;
    let full = sieve.psi(p.x, p.y)?.count;
    let lhs = sieve.psi(p.x / p.d, p.y)?.count;
    let scaled = p.d.powf(alpha.alpha) * lhs as f64 / full as f64;
    Ok(Lemma21Record {
        x: p.x,
        y: p.y,
        d: p.d,
        lhs,
        scaled,
    })
}

#[cfg(feature = "parallel")]
fn map_points<P: Sync, T: Send>(grid: &[P], f: impl Fn(&P) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    grid.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_points<P, T>(grid: &[P], f: impl Fn(&P) -> T) -> Vec<T> {
    grid.iter().map(f).collect()
}

/// One outcome per grid point, in grid order.
pub fn run_theorem1(grid: &[Theorem1Point], sieve: &SpfSieve) -> Vec<Result<Theorem1Record>> {
    map_points(grid, |p| theorem1_point(p, sieve))
}

/// One outcome per grid point, in grid order.
pub fn run_lemma21(grid: &[Lemma21Point], sieve: &SpfSieve) -> Vec<Result<Lemma21Record>> {
    map_points(grid, |p| lemma21_point(p, sieve))
}

/// For each `1 <= j <= j_max`: approximates `j/theta` with denominators up to
/// `floor(sqrt x)`, measures the smooth exponential sum at `j/theta` over
/// `m <= theta x`, and evaluates the bound at `(theta x, y, q, delta)`.
pub fn run_bound_sweep(x: f64, y: f64, theta: &QuadNum, j_max: u64, sieve: &SpfSieve) -> Result<Vec<BoundRecord>> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be at least 1, got {x}")));
    }
    let tx = floor_theta_x(theta, x)?;
    let txf = tx as f64;
    let psi_tx_y = sieve.psi(txf, y)?.count;
    let alpha = solve_alpha(sieve, txf, y, DEFAULT_TOL)?;
    let cap = x.sqrt().floor() as u64;
    let inv = theta.recip()?;
    let out = map_points(&(1..=j_max).collect::<Vec<_>>(), |&j| {
        let approx = dirichlet_approx(&inv.mul_int(j), cap)?;
        let a = approx
            .a
            .to_i64()
            .ok_or_else(|| Error::Range(format!("numerator {} exceeds 64 bits", approx.a)))?;
        let delta = approx.delta_f64();
        let observed = smooth_discrepancy_sum(sieve, x, y, theta, j)?.abs();
        let mut rec = BoundRecord {
            x,
            y,
            theta: theta.to_string(),
            j,
            a,
            q: approx.q,
            delta,
            cap,
            psi_tx_y,
            status: "ok".into(),
            alpha: None,
            u: None,
            l: None,
            m: None,
            term_main: None,
            term_tail: None,
            rhs_total: None,
            observed,
            ratio: None,
        };
        if approx.q < 2 {
            rec.status = "skipped: q = 1".into();
            return Ok(rec);
        }
        let r = theorem2_rhs(txf, y, approx.q, delta, psi_tx_y, &alpha, observed)?;
        rec.alpha = Some(r.alpha);
        rec.u = Some(r.u);
        rec.l = Some(r.l);
        rec.m = Some(r.m);
        rec.term_main = Some(r.term_main);
        rec.term_tail = Some(r.term_tail);
        rec.rhs_total = Some(r.rhs_total);
        rec.ratio = Some(r.ratio);
        Ok(rec)
    });
    out.into_iter().collect()
}

/// Runs every point of a bound grid; records are concatenated in order.
pub fn run_bound_grid(grid: &[BoundPoint], sieve: &SpfSieve) -> Vec<Result<Vec<BoundRecord>>> {
    grid.iter()
        .map(|p| run_bound_sweep(p.x, p.y, &p.theta, p.j_max, sieve))
        .collect()
}

#[derive(Deserialize)]
struct Theorem1Row {
    x: f64,
    y: f64,
    theta: String,
    psi: String,
}

#[derive(Deserialize)]
struct BoundRow {
    x: f64,
    y: f64,
    theta: String,
    j_max: u64,
}

fn grid_rows<T: DeserializeOwned>(text: &str) -> Result<Vec<T>> {
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes());
    rd.deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| Error::Parse(format!("grid: {e}")))
}

/// Parses a CSV grid with header `x,y,theta,psi`. `theta` uses the
/// `quad:`/`dec:` grammar (quote it, since `quad:` contains commas); `psi`
/// is a decimal or `p/q`.
pub fn parse_theorem1_grid(text: &str) -> Result<Vec<Theorem1Point>> {
    grid_rows::<Theorem1Row>(text)?
        .into_iter()
        .map(|r| {
            Ok(Theorem1Point {
                x: r.x,
                y: r.y,
                theta: parse_real(&r.theta)?,
                psi: parse_rational(r.psi.strip_prefix("dec:").unwrap_or(&r.psi))?,
            })
        })
        .collect()
}

/// Parses a CSV grid with header `x,y,d`.
pub fn parse_lemma21_grid(text: &str) -> Result<Vec<Lemma21Point>> {
    grid_rows::<Lemma21Point>(text)
}

/// Parses a CSV grid with header `x,y,theta,j_max`.
pub fn parse_bound_grid(text: &str) -> Result<Vec<BoundPoint>> {
    grid_rows::<BoundRow>(text)?
        .into_iter()
        .map(|r| {
            Ok(BoundPoint {
                x: r.x,
                y: r.y,
                theta: parse_real(&r.theta)?,
                j_max: r.j_max,
            })
        })
        .collect()
}

impl<'de> Deserialize<'de> for Lemma21Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Row {
            x: f64,
            y: f64,
            d: f64,
        }
        let r = Row::deserialize(d)?;
        Ok(Lemma21Point { x: r.x, y: r.y, d: r.d })
    }
}
