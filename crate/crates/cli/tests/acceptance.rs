//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p gds-cli --test acceptance`.

use std::io::Write;
use std::time::{Duration, Instant};

use clap::Parser;
use gds_cli::verify::{self, VerificationReport};
use gds_cli::{dispatch, Cli, Format};
use gds_core::arith::gcd;
use gds_core::cones::BivariatePoly;
use gds_core::dedekind::{dedekind_sum_general, CoprimePair, SumIndex};
use gds_core::equidist::FracScan;
use gds_core::integrality::{constants_for, toddN_congruence_residual};

const SEED: u64 = 20_240_611;

/// Wall-clock ceilings, seconds.
const LIMIT_CONSTANTS: f64 = 1.0;
const LIMIT_SWEEP: f64 = 120.0;
const LIMIT_WEIL: f64 = 180.0;
const LIMIT_EQUIDIST: f64 = 300.0;

const WEYL_CONSTANT: f64 = 20.0;
const DISCREPANCY_MAX: f64 = 0.05;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn from_report(r: &VerificationReport) -> Outcome {
    let mut detail = format!("{}: {} cases, {} violations", r.target, r.cases_checked, r.violations.len());
    if let Some(v) = r.violations.first() {
        detail.push_str(&format!(" (first: {}; expected {}; actual {})", v.inputs, v.expected, v.actual));
    }
    outcome(r.passed() && r.cases_checked > 0, detail)
}

fn both(a: Outcome, b: Outcome) -> Outcome {
    outcome(a.ok && b.ok, format!("{}; {}", a.detail, b.detail))
}

fn constants() -> Outcome {
    let cli = Cli::try_parse_from(["gds", "constants", "--N", "2"]).expect("parses");
    let (text, code) = dispatch(&cli.command, Format::Plain).expect("runs");
    let mut ok = code == 0 && text.lines().any(|l| l == "R(1,1)=12") && text.contains("alpha=1 beta=6 r=1");
    for (n, a, b, r) in [(4u32, -1i64, 30i64, 1i64), (6, 1, 42, 2)] {
        let c = constants_for(n).expect("even");
        ok &= c.alpha == a.into() && c.beta == b.into() && c.r == r.into();
    }
    outcome(ok, "R(1,1)=12; (α,β,r) for N=4,6 = (-1,30,1), (1,42,2)")
}

fn congruence() -> Outcome {
    let worked = toddN_congruence_residual(5, 7, 2).map(|r| r == BivariatePoly::x().shift(0, 1)).unwrap_or(false);
    let r = verify::congruence(&[2, 4, 6], 100).expect("valid");
    both(outcome(worked, format!("(5,7,2) residual is xy: {worked}")), from_report(&r))
}

fn odd_vanishing() -> Outcome {
    let mut cases = 0u64;
    let mut bad = Vec::new();
    for n in (3..=9u32).step_by(2) {
        for idx in SumIndex::all_of_degree(n) {
            for q in 2..=60i64 {
                for p in (1..q).filter(|&p| gcd(p, q) == 1) {
                    cases += 1;
                    let s = dedekind_sum_general(idx, CoprimePair::new(p, q).expect("coprime"));
                    if !num_traits::Zero::is_zero(&s) {
                        bad.push(format!("s_{},{}({p},{q}) = {s}", idx.i(), idx.j()));
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{cases} sums, {} nonzero {}", bad.len(), bad.first().cloned().unwrap_or_default()))
}

fn equidistribution() -> Outcome {
    let xs = [250u64, 500, 1000, 2000];
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut details = Vec::new();
    for (i, j) in [(1u32, 1u32), (2, 2), (1, 3)] {
        let scan = FracScan::new(SumIndex::new(i, j).expect("positive"), 2000).expect("even degree");
        for x in xs {
            for m in 1..=3 {
                let e = scan.weyl(m, x).expect("nonempty");
                let scaled = e.norm() * (x as f64).sqrt();
                worst = worst.max(scaled);
                ok &= scaled <= WEYL_CONSTANT;
            }
        }
        let d = scan.discrepancy(2000).expect("nonempty");
        ok &= d < DISCREPANCY_MAX;
        details.push(format!("D*({i},{j})={d:.4}"));
    }
    outcome(ok, format!("max |E|·√x = {worst:.3} (≤ {WEYL_CONSTANT}), {}", details.join(" ")))
}

fn rademacher() -> Outcome {
    both(from_report(&verify::rademacher(500)), from_report(&verify::rademacher_phi(200, SEED)))
}

fn main() {
    type Check = (u32, &'static str, f64, fn() -> Outcome);
    let checks: [Check; 11] = [
        (1, "integrality constants", LIMIT_CONSTANTS, constants),
        (2, "integrality sweep q<=200, N in {2,4,6,8}", LIMIT_SWEEP, || {
            from_report(&verify::integrality(&[2, 4, 6, 8], 200).expect("valid"))
        }),
        (3, "Td^N congruence q<=100, N in {2,4,6}", LIMIT_SWEEP, congruence),
        (4, "three Todd routes q<=100, N in {2,4,6,8}", LIMIT_SWEEP, || {
            from_report(&verify::routes(&[2, 4, 6, 8], 100).expect("valid"))
        }),
        (5, "odd vanishing i+j<=9, q<=60", f64::INFINITY, odd_vanishing),
        (6, "cocycle on 50 seeded triples, det<=20", f64::INFINITY, || {
            from_report(&verify::cocycle(&[2, 4], 50, 20, SEED).expect("valid"))
        }),
        (7, "Dedekind-Kloosterman identity", f64::INFINITY, || {
            from_report(&verify::gene(&[2, 4, 6], 500, 200, 1).expect("valid"))
        }),
        (8, "Weil-type bounds", LIMIT_WEIL, || from_report(&verify::weil(10_000, 2000).expect("valid"))),
        (9, "fast path = brute force q<=2000", f64::INFINITY, || from_report(&verify::fast_path(2000))),
        (10, "equidistribution trend", LIMIT_EQUIDIST, equidistribution),
        (11, "Rademacher classical case", f64::INFINITY, rademacher),
    ];

    let mut out = std::io::stdout().lock();
    let mut failed = 0;
    for (id, name, limit, check) in checks {
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs_f64(limit.min(1e9));
        let ok = o.ok && in_time;
        failed += usize::from(!ok);
        let timing = if limit.is_finite() {
            format!("{:.2}s / {limit}s", elapsed.as_secs_f64())
        } else {
            format!("{:.2}s", elapsed.as_secs_f64())
        };
        writeln!(out, "[{}] criterion {id:>2}: {name}: {} ({timing})", if ok { "PASS" } else { "FAIL" }, o.detail)
            .unwrap();
    }
    writeln!(out, "acceptance: {} of 11 criteria passed", 11 - failed).unwrap();
    if failed > 0 {
        std::process::exit(1);
    }
}
