//! Sweeps behind `gds verify <target>`. Work is split by modulus across the
//! rayon pool and merged in ascending order, so reports do not depend on
//! the worker count.

use std::fmt::Display;

use gds_core::arith::{gcd, is_prime, ExactRational};
use gds_core::cones::{cocycle_residual, det, todd_coeff_from_dedekind, todd_homogeneous_via_cf, LatticeTables, Vec2};
use gds_core::dedekind::{CoprimePair, DedekindKernel, SumIndex};
use gds_core::expsums::{
    frac_identity_sides, gen_kloosterman_brute, gen_kloosterman_fast, kloosterman_classical, prime_bound,
    prime_power_bound, weil_bound, weyl_kloosterman_aggregate, KloostermanSpec,
};
use gds_core::integrality::{constants_for, integrality_witness_with, toddN_congruence_residual};
use gds_core::Error;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// `(i, j)` pairs swept by the bound and fast-path checks.
pub const GRID_IJ: [(u32, u32); 3] = [(1, 1), (1, 3), (2, 2)];
/// `(k, l)` pairs swept by the bound and fast-path checks.
pub const GRID_KL: [(i64, i64); 3] = [(1, 1), (1, 2), (6, 4)];

/// Absolute slack on the exact side of bound checks.
pub const BOUND_SLACK: f64 = 1e-9;
/// Identity tolerance, scaled by `max(1, sqrt(q))`.
pub const IDENTITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub inputs: String,
    pub expected: String,
    pub actual: String,
}

impl Violation {
    fn new(inputs: impl Display, expected: impl Display, actual: impl Display) -> Self {
        Violation { inputs: inputs.to_string(), expected: expected.to_string(), actual: actual.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub target: String,
    pub parameters: String,
    pub cases_checked: u64,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Per-chunk partial result.
#[derive(Default)]
struct Tally {
    cases: u64,
    violations: Vec<Violation>,
}

impl Tally {
    fn check(&mut self, ok: bool, v: impl FnOnce() -> Violation) {
        self.cases += 1;
        if !ok {
            self.violations.push(v());
        }
    }

    fn merge(parts: Vec<Tally>) -> Tally {
        parts.into_iter().fold(Tally::default(), |mut acc, t| {
            acc.cases += t.cases;
            acc.violations.extend(t.violations);
            acc
        })
    }
}

fn report(target: &str, parameters: String, tally: Tally, seed: Option<u64>) -> VerificationReport {
    VerificationReport {
        target: target.into(),
        parameters,
        cases_checked: tally.cases,
        violations: tally.violations,
        seed,
    }
}

fn units(q: u64) -> impl Iterator<Item = u64> {
    (1..q).filter(move |&p| gcd(p as i64, q as i64) == 1)
}

fn check_degrees(ns: &[u32]) -> Result<(), Error> {
    for &n in ns {
        constants_for(n)?;
    }
    Ok(())
}

/// `R q^{N-2} s_ij - α r (C(N-1,i) p'^i + C(N-1,j) p^j)/q ∈ Z` over coprime `0 < p < q <= q_max`.
pub fn integrality(ns: &[u32], q_max: u64) -> Result<VerificationReport, Error> {
    check_degrees(ns)?;
    let parts: Vec<Tally> = (2..=q_max)
        .into_par_iter()
        .map(|q| {
            let mut t = Tally::default();
            for &n in ns {
                let consts = constants_for(n).expect("checked");
                for idx in SumIndex::all_of_degree(n) {
                    let kernel = DedekindKernel::new(idx, q);
                    for p in units(q) {
                        let pair = CoprimePair::new(p as i64, q as i64).expect("coprime");
                        let r = integrality_witness_with(&consts, &kernel, idx, pair);
                        t.check(r.is_ok(), || {
                            Violation::new(
                                format!("i={} j={} p={p} q={q}", idx.i(), idx.j()),
                                "integer",
                                r.unwrap_err(),
                            )
                        });
                    }
                }
            }
            t
        })
        .collect();
    Ok(report("integrality", format!("N={ns:?} q_max={q_max}"), Tally::merge(parts), None))
}

/// `Td^N` congruence modulo `q Z[x, y]`.
pub fn congruence(ns: &[u32], q_max: u64) -> Result<VerificationReport, Error> {
    check_degrees(ns)?;
    let parts: Vec<Tally> = (2..=q_max)
        .into_par_iter()
        .map(|q| {
            let mut t = Tally::default();
            for &n in ns {
                for p in units(q) {
                    let r = toddN_congruence_residual(p as i64, q as i64, n);
                    t.check(r.is_ok(), || {
                        Violation::new(format!("N={n} p={p} q={q}"), "divisible by q", r.unwrap_err())
                    });
                }
            }
            t
        })
        .collect();
    Ok(report("congruence", format!("N={ns:?} q_max={q_max}"), Tally::merge(parts), None))
}

fn primitive(rng: &mut ChaCha8Rng, r: i64) -> Vec2 {
    loop {
        let v = (rng.gen_range(0..=r), rng.gen_range(-r..=r));
        if gcd(v.0, v.1) == 1 {
            return v;
        }
    }
}

/// `count` admissible triples `v1, v2, v3` (consecutive and outer determinants
/// in `1..=det_max`), drawn deterministically from `seed`.
pub fn random_triples(seed: u64, count: usize, det_max: i64) -> Vec<[Vec2; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = (det_max / 2).clamp(2, 12);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v = [primitive(&mut rng, r), primitive(&mut rng, r), primitive(&mut rng, r)];
        if [det(v[0], v[1]), det(v[1], v[2]), det(v[0], v[2])].iter().all(|d| (1..=det_max).contains(d)) {
            out.push(v);
        }
    }
    out
}

/// Cocycle additivity on seeded random triples.
pub fn cocycle(ns: &[u32], trials: usize, det_max: i64, seed: u64) -> Result<VerificationReport, Error> {
    for &n in ns {
        if n % 2 == 1 {
            return Err(Error::OddDegree(n));
        }
        if n == 0 {
            return Err(Error::OutOfRange("degree must be at least 2".into()));
        }
    }
    if det_max < 1 {
        return Err(Error::OutOfRange("determinant bound must be positive".into()));
    }
    let triples = random_triples(seed, trials, det_max);
    let parts: Vec<Tally> = triples
        .par_iter()
        .map(|v| {
            let mut t = Tally::default();
            for &n in ns {
                let r = cocycle_residual(v[0], v[1], v[2], n);
                let ok = matches!(&r, Ok(poly) if poly.is_zero());
                t.check(ok, || {
                    let actual = match &r {
                        Ok(poly) => poly.to_string(),
                        Err(e) => e.to_string(),
                    };
                    Violation::new(format!("N={n} v1={:?} v2={:?} v3={:?}", v[0], v[1], v[2]), "0", actual)
                });
            }
            t
        })
        .collect();
    Ok(report("cocycle", format!("N={ns:?} trials={trials} det_max={det_max}"), Tally::merge(parts), Some(seed)))
}

/// Exact fractional identity for `q <= q_max`, and the summed Weyl/Kloosterman
/// identity with harmonic `m` for `q <= aggregate_max`.
pub fn gene(ns: &[u32], q_max: u64, aggregate_max: u64, m: i64) -> Result<VerificationReport, Error> {
    check_degrees(ns)?;
    if m == 0 {
        return Err(Error::OutOfRange("harmonic m must be nonzero".into()));
    }
    let parts: Vec<Tally> = (2..=q_max.max(aggregate_max))
        .into_par_iter()
        .map(|q| {
            let mut t = Tally::default();
            for &n in ns {
                let consts = constants_for(n).expect("checked");
                for idx in SumIndex::all_of_degree(n) {
                    if q <= q_max {
                        let kernel = DedekindKernel::new(idx, q);
                        for p in units(q) {
                            let pair = CoprimePair::new(p as i64, q as i64).expect("coprime");
                            let (lhs, rhs) = frac_identity_sides(&consts, &kernel, idx, pair);
                            t.check(lhs == rhs, || {
                                Violation::new(format!("i={} j={} p={p} q={q}", idx.i(), idx.j()), &rhs, &lhs)
                            });
                        }
                    }
                    if q <= aggregate_max {
                        let (a, b) = weyl_kloosterman_aggregate(idx, m, q).expect("validated");
                        let tol = IDENTITY_TOL * (q as f64).sqrt().max(1.0);
                        t.check((a - b).norm() <= tol, || {
                            Violation::new(format!("aggregate i={} j={} m={m} q={q}", idx.i(), idx.j()), b, a)
                        });
                    }
                }
            }
            t
        })
        .collect();
    let params = format!("N={ns:?} q_max={q_max} aggregate_q_max={aggregate_max} m={m}");
    Ok(report("gene", params, Tally::merge(parts), None))
}

fn spec(i: u32, j: u32, k: i64, l: i64, q: u64) -> KloostermanSpec {
    KloostermanSpec::new(i, j, k, l, q).expect("valid grid")
}

/// Prime, prime-power and composite bounds.
///
/// * primes `p <= p_max`: `|K_11(1,1,p)| <= 2 sqrt(p)`, and each grid sum with
///   `p` not dividing `ijkl` against `weil_bound`;
/// * prime powers `p^α <= p_max`, `α >= 2`: the prime-power bound over the grid;
/// * all `q <= q_max`: `weil_bound` over the grid.
pub fn weil(p_max: u64, q_max: u64) -> Result<VerificationReport, Error> {
    let top = p_max.max(q_max);
    let parts: Vec<Tally> = (2..=top)
        .into_par_iter()
        .map(|q| {
            let mut t = Tally::default();
            let prime = is_prime(q);
            if prime && q <= p_max {
                let v = kloosterman_classical(1, 1, q).norm();
                let b = prime_bound(1, 1, q);
                t.check(v <= b + BOUND_SLACK, || Violation::new(format!("K(1,1,{q})"), format!("<= {b}"), v));
                for (i, j) in GRID_IJ {
                    for (k, l) in GRID_KL {
                        if (i as i64 * j as i64 * k * l) % q as i64 == 0 {
                            continue;
                        }
                        let s = spec(i, j, k, l, q);
                        let v = gen_kloosterman_brute(s).norm();
                        let b = weil_bound(s).expect("nonzero pair");
                        t.check(v <= b + BOUND_SLACK, || Violation::new(format!("{s:?}"), format!("<= {b}"), v));
                    }
                }
            }
            if !prime && q <= p_max && is_prime_power(q) {
                for (i, j) in GRID_IJ {
                    for (k, l) in GRID_KL {
                        let s = spec(i, j, k, l, q);
                        let v = gen_kloosterman_fast(s).norm();
                        let b = prime_power_bound(s);
                        t.check(v <= b + BOUND_SLACK, || Violation::new(format!("{s:?}"), format!("<= {b}"), v));
                    }
                }
            }
            if q <= q_max {
                for (i, j) in GRID_IJ {
                    for (k, l) in GRID_KL {
                        let s = spec(i, j, k, l, q);
                        let v = gen_kloosterman_fast(s).norm();
                        let b = weil_bound(s).expect("nonzero pair");
                        t.check(v <= b + BOUND_SLACK, || Violation::new(format!("{s:?}"), format!("<= {b}"), v));
                    }
                }
            }
            t
        })
        .collect();
    Ok(report("weil", format!("p_max={p_max} q_max={q_max}"), Tally::merge(parts), None))
}

fn is_prime_power(q: u64) -> bool {
    gds_core::arith::factorize(q).len() == 1
}

/// Fast path against brute force over the grid for `q <= q_max`.
pub fn fast_path(q_max: u64) -> VerificationReport {
    let parts: Vec<Tally> = (1..=q_max)
        .into_par_iter()
        .map(|q| {
            let mut t = Tally::default();
            for (i, j) in GRID_IJ {
                for (k, l) in GRID_KL {
                    let s = spec(i, j, k, l, q);
                    let (f, b) = (gen_kloosterman_fast(s), gen_kloosterman_brute(s));
                    t.check((f - b).norm() < IDENTITY_TOL, || Violation::new(format!("{s:?}"), b, f));
                }
            }
            t
        })
        .collect();
    report("fast", format!("q_max={q_max}"), Tally::merge(parts), None)
}

/// Coefficientwise agreement of the lattice, Dedekind and continued-fraction routes.
pub fn routes(ns: &[u32], q_max: u64) -> Result<VerificationReport, Error> {
    for &n in ns {
        if n % 2 == 1 {
            return Err(Error::OddDegree(n));
        }
        if n == 0 {
            return Err(Error::OutOfRange("degree must be at least 2".into()));
        }
    }
    let max_n = ns.iter().copied().max().unwrap_or(0);
    let parts: Vec<Tally> = (2..=q_max)
        .into_par_iter()
        .map(|q| {
            let mut t = Tally::default();
            let tables = LatticeTables::new(q, max_n);
            for p in units(q) {
                for &n in ns {
                    let cf = todd_homogeneous_via_cf(p as i64, q as i64, n).expect("valid pair");
                    for i in 0..=n {
                        let j = n - i;
                        let fact =
                            BigRational::from_integer(gds_core::arith::factorial(i) * gds_core::arith::factorial(j));
                        let a: ExactRational = tables.coefficient(p, i, j);
                        let c = cf.coeff(i, j) * &fact;
                        let b = if i >= 1 && j >= 1 {
                            todd_coeff_from_dedekind(p as i64, q as i64, SumIndex::new(i, j).expect("positive"))
                                .expect("valid pair")
                        } else {
                            a.clone()
                        };
                        t.check(a == b && a == c, || {
                            Violation::new(format!("p={p} q={q} i={i} j={j}"), &a, format!("dedekind {b}, cf {c}"))
                        });
                    }
                }
            }
            t
        })
        .collect();
    Ok(report("routes", format!("N={ns:?} q_max={q_max}"), Tally::merge(parts), None))
}

/// `12 s(p, q) - (p + p')/q` for coprime `0 < p < q <= q_max`.
pub fn rademacher(q_max: u64) -> VerificationReport {
    let parts: Vec<Tally> = (2..=q_max)
        .into_par_iter()
        .map(|q| {
            let mut t = Tally::default();
            for p in units(q) {
                let w =
                    gds_core::integrality::rademacher_witness(CoprimePair::new(p as i64, q as i64).expect("coprime"));
                t.check(w.is_integer(), || Violation::new(format!("p={p} q={q}"), "integer", &w));
            }
            t
        })
        .collect();
    report("rademacher", format!("q_max={q_max}"), Tally::merge(parts), None)
}

/// `12 φ(A)` for `count` seeded random matrices in SL2(Z).
pub fn rademacher_phi(count: usize, seed: u64) -> VerificationReport {
    use gds_core::dedekind::{rademacher_phi, ModularMatrix};
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::default();
    let twelve = BigRational::from_integer(BigInt::from(12));
    while (t.cases as usize) < count {
        let (a, c) = (rng.gen_range(-1000i64..=1000), rng.gen_range(-1000i64..=1000));
        if gcd(a, c) != 1 {
            continue;
        }
        let (_, s, u) = gds_core::arith::ext_gcd(a, c);
        let k = rng.gen_range(-50i64..=50);
        let m = ModularMatrix::new(a, -u + k * a, c, s + k * c).expect("as + cu = 1");
        let v = rademacher_phi(m) * &twelve;
        t.check(v.is_integer(), || Violation::new(format!("{m:?}"), "integer", &v));
    }
    report("rademacher-phi", format!("count={count}"), t, Some(seed))
}
