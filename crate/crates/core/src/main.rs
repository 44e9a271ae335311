use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use smooth_beatty::beatty::{count_smooth_in_beatty, BeattyParams};
use smooth_beatty::diophantine::{
    cf_expand_with_period, dirichlet_approx, parse_rational, parse_real, type_profile, QuadIrr, QuadNum,
    REAL_GRAMMAR,
};
use smooth_beatty::expsum::{exp_sum, theorem2_rhs, MultFn};
use smooth_beatty::primes_smooth::{psi_dfs, SpfSieve};
use smooth_beatty::saddle::{saddle_sum, solve_alpha, DEFAULT_TOL};
use smooth_beatty::verify::{self, fmt_real, Format, Record};
use smooth_beatty::{Error, Result};

#[derive(Parser)]
#[command(name = "smooth-beatty", version, about = "Smooth numbers in Beatty sequences")]
struct Cli {
    /// Largest sieve the tool may build
    #[arg(long, global = true, env = "SMOOTH_SIEVE_LIMIT", default_value_t = 20_000_000)]
    sieve_limit: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count y-smooth integers in [1, x]
    Psi {
        /// Upper end of the range (real; floored)
        #[arg(long)]
        x: f64,
        /// Smoothness bound (real; floored)
        #[arg(long)]
        y: f64,
        #[arg(long, value_enum, default_value_t = Alg::Sieve)]
        alg: Alg,
    },
    /// Saddle point alpha(x, y): sum_{p<=y} log p / (p^alpha - 1) = log x
    Alpha {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        /// Absolute tolerance on the residual
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Terms, membership and smooth counts of floor(theta n + psi)
    Beatty {
        /// Slope theta > 1: quad:a,b,d,c for (a+b*sqrt(d))/c, or dec:<digits>
        #[arg(long, value_parser = theta_arg)]
        theta: QuadNum,
        /// Shift psi >= 0: decimal or p/q
        #[arg(long, value_parser = rational_arg, default_value = "0")]
        psi: BigRational,
        #[command(flatten)]
        mode: BeattyMode,
        /// Index bound for --smooth-count
        #[arg(long, requires = "smooth_count")]
        x: Option<f64>,
        /// Smoothness bound for --smooth-count
        #[arg(long, requires = "smooth_count")]
        y: Option<f64>,
    },
    /// Partial quotients of theta
    Cf {
        /// quad:a,b,d,c for (a+b*sqrt(d))/c, or dec:<digits>
        #[arg(long, value_parser = theta_arg)]
        theta: QuadNum,
        /// Number of quotients
        #[arg(long)]
        k: usize,
    },
    /// Dirichlet approximation theta = a/q + delta with q <= cap
    Approx {
        /// quad:a,b,d,c for (a+b*sqrt(d))/c, or dec:<digits>
        #[arg(long, value_parser = theta_arg)]
        theta: QuadNum,
        #[arg(long)]
        cap: u64,
    },
    /// Largest log(1/(m ||m theta||))/log m over 2 <= m <= max-m
    Type {
        /// quad:a,b,d,c with d not a square
        #[arg(long, value_parser = theta_arg)]
        theta: QuadNum,
        #[arg(long)]
        max_m: u64,
        /// Print every sample as `m dist exponent`
        #[arg(long)]
        samples: bool,
    },
    /// sum_{n<=x, P(n)<=y} f(n) e(n theta)
    Expsum {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        /// quad:a,b,d,c for (a+b*sqrt(d))/c, or dec:<digits>
        #[arg(long, value_parser = theta_arg)]
        theta: QuadNum,
        /// Values of f at primes, `p=v,...`; v is re, re+imi, or e(t). Default 1
        #[arg(long, value_parser = mult_arg)]
        f: Option<MultFn>,
    },
    /// Both terms of the exponential-sum bound at (x, y, q, delta)
    Bound {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        /// Denominator q >= 2
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        delta: f64,
        /// Observed |S| to compare against the bound
        #[arg(long)]
        observed: Option<f64>,
    },
    /// Run an experiment grid and write a report
    Verify {
        #[arg(value_enum)]
        experiment: Experiment,
        /// CSV grid file; headers x,y,theta,psi | x,y,d | x,y,theta,j_max
        #[arg(long)]
        grid: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        format: OutFormat,
        /// Output path, `-` for stdout [default <experiment>_<unix seconds>.<ext>]
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct BeattyMode {
    /// Print the first N terms
    #[arg(long, value_name = "N")]
    count: Option<u64>,
    /// Whether m is a term
    #[arg(long, value_name = "m")]
    contains: Option<u64>,
    /// Number of n <= x whose term is y-smooth (needs --x, --y)
    #[arg(long, requires_all = ["x", "y"])]
    smooth_count: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Alg {
    Sieve,
    Dfs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    Theorem1,
    Lemma21,
    Bounds,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

fn theta_arg(s: &str) -> std::result::Result<QuadNum, String> {
    parse_real(s).map_err(|e| e.to_string())
}

fn rational_arg(s: &str) -> std::result::Result<BigRational, String> {
    parse_rational(s.strip_prefix("dec:").unwrap_or(s)).map_err(|e| format!("{e}; expected a decimal or p/q"))
}

fn mult_arg(s: &str) -> std::result::Result<MultFn, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

struct Ctx {
    cap: u64,
}

impl Ctx {
    /// A sieve covering `need`, refused when `need` exceeds the cap.
    fn sieve(&self, need: f64) -> Result<SpfSieve> {
        let need = if need.is_finite() { need.max(2.0).floor() } else { f64::INFINITY };
        if need > self.cap as f64 {
            return Err(Error::Range(format!(
                "needs a sieve up to {need}, above the limit {} (set SMOOTH_SIEVE_LIMIT)",
                self.cap
            )));
        }
        SpfSieve::new(need as u64)
    }
}

fn run(cli: Cli) -> Result<()> {
    let ctx = Ctx { cap: cli.sieve_limit };
    match cli.cmd {
        Cmd::Psi { x, y, alg } => {
            let c = match alg {
                Alg::Sieve => ctx.sieve(x)?.psi(x, y)?,
                Alg::Dfs => {
                    let s = ctx.sieve(y.min(x.max(2.0)))?;
                    psi_dfs(x, y, s.primes_up_to(y))?
                }
            };
            println!("{}", c.count);
        }
        Cmd::Alpha { x, y, tol } => {
            let s = ctx.sieve(y)?;
            let a = solve_alpha(&s, x, y, tol)?;
            println!("{}", fmt_real(a.alpha));
            println!("residual {:e}", saddle_sum(s.primes_up_to(y), a.alpha) - x.ln());
        }
        Cmd::Beatty { theta, psi, mode, x, y } => {
            let params = BeattyParams::new(theta, psi)?;
            if let Some(n) = mode.count {
                let terms = params.terms().take(n as usize).collect::<Result<Vec<u64>>>()?;
                println!("{}", terms.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
            } else if let Some(m) = mode.contains {
                println!("{}", params.contains(m)?);
            } else {
                let (x, y) = (x.expect("required by clap"), y.expect("required by clap"));
                let s = ctx.sieve(params.last_value(x)? as f64)?;
                println!("{}", count_smooth_in_beatty(&params, x, y, &s)?);
            }
        }
        Cmd::Cf { theta, k } => {
            let (q, period) = cf_expand_with_period(&theta, k);
            println!("{}", q.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
            if let Some(p) = period {
                println!("period start {} length {}", p.start, p.len);
            }
        }
        Cmd::Approx { theta, cap } => {
            let r = dirichlet_approx(&theta, cap)?;
            println!("a {}", r.a);
            println!("q {}", r.q);
            println!("delta {}", fmt_real(r.delta_f64()));
        }
        Cmd::Type { theta, max_m, samples } => {
            let t = QuadIrr::try_from(theta)?;
            let p = type_profile(&t, max_m)?;
            if samples {
                for s in &p.samples {
                    println!("{} {} {}", s.m, fmt_real(s.dist), fmt_real(s.exponent));
                }
            }
            println!("kappa_sup {}", fmt_real(p.kappa_sup));
        }
        Cmd::Expsum { x, y, theta, f } => {
            let s = ctx.sieve(x)?;
            let r = exp_sum(&s, x, y, &theta, &f.unwrap_or_default())?;
            println!("re {}", fmt_real(r.re));
            println!("im {}", fmt_real(r.im));
            println!("abs {}", fmt_real(r.abs()));
            println!("terms {}", r.terms);
        }
        Cmd::Bound { x, y, q, delta, observed } => {
            let s = ctx.sieve(x)?;
            let psi = s.psi(x, y)?.count;
            let alpha = solve_alpha(&s, x, y, DEFAULT_TOL)?;
            let r = theorem2_rhs(x, y, q, delta, psi, &alpha, observed.unwrap_or(0.0))?;
            println!("psi {psi}");
            for (k, v) in [
                ("alpha", r.alpha),
                ("u", r.u),
                ("L", r.l),
                ("M", r.m),
                ("term_main", r.term_main),
                ("term_tail", r.term_tail),
                ("rhs_total", r.rhs_total),
            ] {
                println!("{k} {}", fmt_real(v));
            }
            if observed.is_some() {
                println!("observed {}", fmt_real(r.observed));
                println!("ratio {}", fmt_real(r.ratio));
            }
        }
        Cmd::Verify {
            experiment,
            grid,
            format,
            out,
        } => run_verify(&ctx, experiment, grid, format.into(), out)?,
    }
    Ok(())
}

fn read_grid(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })
}

fn keep_ok<T>(outcomes: Vec<Result<T>>) -> Vec<T> {
    let mut ok = Vec::new();
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(r) => ok.push(r),
            Err(e) => eprintln!("grid point {}: {e}", i + 1),
        }
    }
    ok
}

fn emit<R: Record>(records: &[R], name: &str, format: Format, out: Option<PathBuf>) -> Result<()> {
    let path = out.unwrap_or_else(|| PathBuf::from(verify::default_filename(name, format)));
    if path.as_os_str() == "-" {
        print!("{}", verify::render(records, format));
        return Ok(());
    }
    verify::write_report(records, format, &path)?;
    println!("{} records written to {}", records.len(), path.display());
    Ok(())
}

fn run_verify(ctx: &Ctx, experiment: Experiment, grid: Option<PathBuf>, format: Format, out: Option<PathBuf>) -> Result<()> {
    let text = grid.as_ref().map(read_grid).transpose()?;
    match experiment {
        Experiment::Theorem1 => {
            let g = match text {
                Some(t) => verify::parse_theorem1_grid(&t)?,
                None => verify::default_theorem1_grid(),
            };
            let need = verify::theorem1_sieve_need(&g)?.min(ctx.cap);
            let s = ctx.sieve(need as f64)?;
            emit(&keep_ok(verify::run_theorem1(&g, &s)), "theorem1", format, out)
        }
        Experiment::Lemma21 => {
            let g = match text {
                Some(t) => verify::parse_lemma21_grid(&t)?,
                None => verify::default_lemma21_grid(),
            };
            let s = ctx.sieve((verify::lemma21_sieve_need(&g).min(ctx.cap)) as f64)?;
            emit(&keep_ok(verify::run_lemma21(&g, &s)), "lemma21", format, out)
        }
        Experiment::Bounds => {
            let g = match text {
                Some(t) => verify::parse_bound_grid(&t)?,
                None => verify::default_bound_grid(),
            };
            let s = ctx.sieve((verify::bound_sieve_need(&g)?.min(ctx.cap)) as f64)?;
            let recs: Vec<_> = keep_ok(verify::run_bound_grid(&g, &s)).into_iter().flatten().collect();
            emit(&recs, "bounds", format, out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::Parse(_)) => {
            eprintln!("error: {e}\n{REAL_GRAMMAR}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
