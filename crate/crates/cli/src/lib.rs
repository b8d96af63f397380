//! `gds`: compute and verify generalized Dedekind sums, Todd coefficients and
//! Kloosterman sums from the command line.
//!
//! Exit codes: `0` success, `1` at least one violation, `2` usage or input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gds_core::arith::{factorial, ExactRational};
use gds_core::bernoulli::bernoulli_number;
use gds_core::cones::{todd_coeff_from_dedekind, todd_homogeneous_lattice, todd_homogeneous_via_cf, BivariatePoly};
use gds_core::dedekind::{dedekind_sum, SumIndex};
use gds_core::equidist::{DistributionReport, FracScan};
use gds_core::expsums::{gen_kloosterman, gen_kloosterman_brute, gen_kloosterman_fast, KloostermanSpec};
use gds_core::integrality::constants_for;
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

pub mod cache;
pub mod verify;

use verify::VerificationReport;

#[derive(Debug, Parser)]
#[command(name = "gds", version, about = "Generalized Dedekind sums, Todd coefficients and Kloosterman sums")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Bernoulli cache file; falls back to $GDS_CACHE.
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    A,
    B,
    C,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    Fast,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Integrality,
    Congruence,
    Cocycle,
    Gene,
    Weil,
    Routes,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact s_ij(p, q).
    Dedekind {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long)]
        q: i64,
    },
    /// Degree-N part of the Todd series of the cone ((1,0), (p,q)).
    Todd {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long)]
        q: i64,
        #[arg(long = "N", default_value_t = 2)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Route::A)]
        route: Route,
    },
    /// Integrality constants alpha_N, beta_N, r_N and R(i, N-i).
    Constants {
        #[arg(long = "N")]
        n: u32,
    },
    /// Generalized Kloosterman sum K_ij(k, l, q).
    Kloosterman {
        #[arg(long, default_value_t = 1)]
        i: u32,
        #[arg(long, default_value_t = 1)]
        j: u32,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        l: i64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Fractional parts of normalized sums: Weyl scan, or histogram with --bins.
    Equidist {
        #[arg(long, default_value_t = 1)]
        i: u32,
        #[arg(long, default_value_t = 1)]
        j: u32,
        /// Highest harmonic.
        #[arg(long, default_value_t = 1)]
        m: i64,
        #[arg(long = "x-max")]
        x_max: u64,
        #[arg(long)]
        bins: Option<usize>,
    },
    /// Sweep an identity or bound and report violations.
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        args: VerifyArgs,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Degree; defaults to the target's standard set.
    #[arg(long = "N")]
    pub n: Option<u32>,
    #[arg(long = "q-max")]
    pub q_max: Option<u64>,
    #[arg(long = "p-max")]
    pub p_max: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Harmonic for the summed identity.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub m: i64,
}

/// Parses `argv` (program name first), runs, and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn execute(cli: Cli) -> Result<i32, String> {
    if cli.jobs == Some(0) {
        return Err("--jobs must be at least 1".into());
    }
    let cache_path = cache::resolve(cli.cache.clone());
    let loaded = match &cache_path {
        Some(p) => cache::load(p)?,
        None => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build().map_err(|e| e.to_string())?;
    let started = Instant::now();
    let (text, code) = pool.install(|| dispatch(&cli.command, cli.format))?;
    if matches!(cli.command, Command::Verify { .. }) {
        eprintln!("elapsed_ms={}", started.elapsed().as_millis());
    }
    match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    if let Some(p) = &cache_path {
        cache::store(p, loaded)?;
    }
    Ok(code)
}

fn err(e: gds_core::Error) -> String {
    e.to_string()
}

/// Renders the command's report and its exit code.
pub fn dispatch(command: &Command, format: Format) -> Result<(String, i32), String> {
    match *command {
        Command::Dedekind { i, j, p, q } => {
            let s = dedekind_sum(i, j, p, q).map_err(err)?;
            Ok((render_dedekind(format, i, j, p, q, &s), 0))
        }
        Command::Todd { p, q, n, route } => todd(format, p, q, n, route),
        Command::Constants { n } => constants(format, n).map(|t| (t, 0)),
        Command::Kloosterman { i, j, k, l, q, method } => {
            let spec = KloostermanSpec::new(i, j, k, l, q).map_err(err)?;
            let v = match method {
                Method::Brute => gen_kloosterman_brute(spec),
                Method::Fast => gen_kloosterman_fast(spec),
                Method::Auto => gen_kloosterman(spec),
            };
            Ok((render_kloosterman(format, &spec, method, v), 0))
        }
        Command::Equidist { i, j, m, x_max, bins } => equidist(format, i, j, m, x_max, bins).map(|t| (t, 0)),
        Command::Verify { target, ref args } => {
            let report = run_verify(target, args).map_err(err)?;
            let code = if report.passed() { 0 } else { 1 };
            Ok((render_report(format, &report), code))
        }
    }
}

fn degrees(n: Option<u32>, default: &[u32]) -> Vec<u32> {
    n.map(|n| vec![n]).unwrap_or_else(|| default.to_vec())
}

fn run_verify(target: Target, a: &VerifyArgs) -> Result<VerificationReport, gds_core::Error> {
    match target {
        Target::Integrality => verify::integrality(&degrees(a.n, &[2, 4, 6, 8]), a.q_max.unwrap_or(200)),
        Target::Congruence => verify::congruence(&degrees(a.n, &[2, 4, 6]), a.q_max.unwrap_or(100)),
        Target::Cocycle => {
            verify::cocycle(&degrees(a.n, &[2, 4]), a.trials.unwrap_or(50), a.q_max.unwrap_or(20) as i64, a.seed)
        }
        Target::Gene => {
            let q_max = a.q_max.unwrap_or(500);
            verify::gene(&degrees(a.n, &[2, 4, 6]), q_max, q_max.min(200), a.m)
        }
        Target::Weil => verify::weil(a.p_max.unwrap_or(10_000), a.q_max.unwrap_or(2000)),
        Target::Routes => verify::routes(&degrees(a.n, &[2, 4, 6, 8]), a.q_max.unwrap_or(100)),
    }
}

/// 17 significant digits, ASCII, locale-independent.
pub fn fmt_f64(x: f64) -> String {
    // no "-0" in reports
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn render_dedekind(format: Format, i: u32, j: u32, p: i64, q: i64, s: &ExactRational) -> String {
    match format {
        Format::Plain => format!("{s}\n"),
        Format::Csv => format!("i,j,p,q,value\n{i},{j},{p},{q},{s}\n"),
        Format::Json => to_json(&json!({ "i": i, "j": j, "p": p, "q": q, "value": s.to_string() })),
    }
}

fn todd_by_route(p: i64, q: i64, n: u32, route: Route) -> Result<BivariatePoly, String> {
    match route {
        Route::A | Route::All => todd_homogeneous_lattice(p, q, n).map_err(err),
        Route::C => todd_homogeneous_via_cf(p, q, n).map_err(err),
        Route::B => {
            // mixed terms from s_ij; the pure terms are (-1)^N B_N / N! by the multiplication theorem
            let pair = gds_core::dedekind::CoprimePair::new(p, q).map_err(err)?;
            let (p, q) = (pair.p() as i64, pair.q() as i64);
            let mut out = BivariatePoly::zero();
            let sign = BigRational::from_integer(if n % 2 == 0 { 1 } else { -1 }.into());
            let pure = bernoulli_number(n as usize) * sign / BigRational::from_integer(factorial(n));
            out.add_term(n, 0, pure.clone());
            out.add_term(0, n, pure);
            for i in 1..n {
                let t = todd_coeff_from_dedekind(p, q, SumIndex::new(i, n - i).map_err(err)?).map_err(err)?;
                out.add_term(i, n - i, t / BigRational::from_integer(factorial(i) * factorial(n - i)));
            }
            Ok(out)
        }
    }
}

fn todd(format: Format, p: i64, q: i64, n: u32, route: Route) -> Result<(String, i32), String> {
    let poly = todd_by_route(p, q, n, route)?;
    let mut code = 0;
    if route == Route::All {
        let b = todd_by_route(p, q, n, Route::B)?;
        let c = todd_by_route(p, q, n, Route::C)?;
        if b != poly || c != poly {
            code = 1;
            let msg = format!("routes disagree:\na: {poly}\nb: {b}\nc: {c}\n");
            return Ok((msg, code));
        }
    }
    let route_name = format!("{route:?}").to_lowercase();
    let text = match format {
        Format::Plain => format!("{poly}\n"),
        Format::Csv => {
            let mut s = String::from("i,j,coefficient\n");
            for i in (0..=n).rev() {
                let _ = writeln!(s, "{i},{},{}", n - i, poly.coeff(i, n - i));
            }
            s
        }
        Format::Json => {
            let coeffs: Vec<Value> = (0..=n)
                .rev()
                .map(|i| json!({ "i": i, "j": n - i, "value": poly.coeff(i, n - i).to_string() }))
                .collect();
            to_json(&json!({ "p": p, "q": q, "N": n, "route": route_name, "coefficients": coeffs }))
        }
    };
    Ok((text, code))
}

fn constants(format: Format, n: u32) -> Result<String, String> {
    let c = constants_for(n).map_err(err)?;
    let rs: Vec<(u32, String)> = (1..n).map(|i| (i, c.r_of(i).to_string())).collect();
    Ok(match format {
        Format::Plain => {
            let mut s = format!("N={n} alpha={} beta={} r={}\n", c.alpha, c.beta, c.r);
            for (i, r) in &rs {
                let _ = writeln!(s, "R({i},{})={r}", n - i);
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("N,i,j,alpha,beta,r,R\n");
            for (i, r) in &rs {
                let _ = writeln!(s, "{n},{i},{},{},{},{},{r}", n - i, c.alpha, c.beta, c.r);
            }
            s
        }
        Format::Json => {
            let r_values: Vec<Value> = rs.iter().map(|(i, r)| json!({ "i": i, "j": n - i, "value": r })).collect();
            to_json(&json!({
                "N": n,
                "alpha": c.alpha.to_string(),
                "beta": c.beta.to_string(),
                "r": c.r.to_string(),
                "R": r_values,
            }))
        }
    })
}

fn render_kloosterman(format: Format, s: &KloostermanSpec, method: Method, v: Complex64) -> String {
    let method = format!("{method:?}").to_lowercase();
    match format {
        Format::Plain => format!("{}\t{}\n", fmt_f64(v.re), fmt_f64(v.im)),
        Format::Csv => format!(
            "i,j,k,l,q,method,re,im\n{},{},{},{},{},{method},{},{}\n",
            s.i,
            s.j,
            s.k,
            s.l,
            s.q,
            fmt_f64(v.re),
            fmt_f64(v.im)
        ),
        Format::Json => to_json(
            &json!({ "i": s.i, "j": s.j, "k": s.k, "l": s.l, "q": s.q, "method": method, "value": complex_json(v) }),
        ),
    }
}

fn equidist(format: Format, i: u32, j: u32, m: i64, x_max: u64, bins: Option<usize>) -> Result<String, String> {
    let idx = SumIndex::new(i, j).map_err(err)?;
    if m < 1 {
        return Err("--m must be at least 1".into());
    }
    if bins == Some(0) {
        return Err("--bins must be at least 1".into());
    }
    let scan = FracScan::new(idx, x_max).map_err(err)?;
    let report = DistributionReport::from_scan(&scan, m, bins.unwrap_or(1)).map_err(err)?;
    let edge = |b: usize, n: usize| (b as f64 / n as f64).to_string();
    Ok(match format {
        Format::Plain => {
            let mut s = format!("samples={} discrepancy={}\n", report.samples, fmt_f64(report.discrepancy));
            for (m, e) in &report.weyl {
                let _ = writeln!(s, "E({m})\t{}\t{}\t|E|={}", fmt_f64(e.re), fmt_f64(e.im), fmt_f64(e.norm()));
            }
            if let Some(nb) = bins {
                for (b, c) in report.histogram.iter().enumerate() {
                    let _ = writeln!(s, "[{}, {})\t{c}", edge(b, nb), edge(b + 1, nb));
                }
            }
            s
        }
        Format::Csv => match bins {
            Some(nb) => {
                let mut s = String::from("bin_lo,bin_hi,count\n");
                for (b, c) in report.histogram.iter().enumerate() {
                    let _ = writeln!(s, "{},{},{c}", edge(b, nb), edge(b + 1, nb));
                }
                s
            }
            None => {
                let mut s = String::from("x_max,m,re,im,modulus\n");
                for (m, e) in &report.weyl {
                    let _ = writeln!(s, "{x_max},{m},{},{},{}", fmt_f64(e.re), fmt_f64(e.im), fmt_f64(e.norm()));
                }
                s
            }
        },
        Format::Json => {
            let weyl: Vec<Value> = report
                .weyl
                .iter()
                .map(|(m, e)| json!({ "m": m, "re": e.re, "im": e.im, "modulus": e.norm() }))
                .collect();
            to_json(&json!({
                "i": i,
                "j": j,
                "x_max": x_max,
                "samples": report.samples,
                "weyl": weyl,
                "discrepancy": report.discrepancy,
                "histogram": bins.map(|_| report.histogram.clone()),
            }))
        }
    })
}

pub fn render_report(format: Format, r: &VerificationReport) -> String {
    match format {
        Format::Plain => {
            let mut s = format!(
                "target: {}\nparameters: {}\ncases checked: {}\nviolations: {}\n",
                r.target,
                r.parameters,
                r.cases_checked,
                r.violations.len()
            );
            if let Some(seed) = r.seed {
                let _ = writeln!(s, "seed: {seed}");
            }
            for v in &r.violations {
                let _ = writeln!(s, "violation: {}; expected {}; actual {}", v.inputs, v.expected, v.actual);
            }
            s
        }
        Format::Csv => {
            let seed = r.seed.map(|s| s.to_string()).unwrap_or_default();
            format!(
                "target,cases_checked,violations,seed\n{},{},{},{seed}\n",
                r.target,
                r.cases_checked,
                r.violations.len()
            )
        }
        Format::Json => to_json(&serde_json::to_value(r).expect("serializable")),
    }
}
