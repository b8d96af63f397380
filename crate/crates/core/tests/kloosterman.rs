use gds_core::arith::{euler_phi, gcd, is_prime, mod_inverse, rat};
use gds_core::dedekind::{CoprimePair, DedekindKernel, SumIndex};
use gds_core::equidist::FracScan;
use gds_core::expsums::{
    frac_identity_with, gen_kloosterman_brute, gen_kloosterman_fast, kloosterman_classical, kloosterman_pair,
    prime_bound, prime_power_bound, reduce_big, unit_root, weil_bound, weyl_kloosterman_aggregate, KloostermanSpec,
};
use gds_core::integrality::{constants_for, integrality_witness_with, toddN_congruence_residual, witness_value};
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GRID_IJ: [(u32, u32); 3] = [(1, 1), (1, 3), (2, 2)];
const GRID_KL: [(i64, i64); 3] = [(1, 1), (1, 2), (6, 4)];

fn spec(i: u32, j: u32, k: i64, l: i64, q: u64) -> KloostermanSpec {
    KloostermanSpec::new(i, j, k, l, q).unwrap()
}

#[test]
fn integrality_small_sweep() {
    for n in [2u32, 4, 6, 8] {
        let consts = constants_for(n).unwrap();
        for q in 2..=80u64 {
            for idx in SumIndex::all_of_degree(n) {
                let kernel = DedekindKernel::new(idx, q);
                for p in (1..q).filter(|&p| gcd(p as i64, q as i64) == 1) {
                    let pair = CoprimePair::new(p as i64, q as i64).unwrap();
                    integrality_witness_with(&consts, &kernel, idx, pair).unwrap();
                }
            }
        }
    }
}

#[test]
fn congruence_small_sweep() {
    for n in [2u32, 4, 6] {
        for q in 2..=40i64 {
            for p in (1..q).filter(|&p| gcd(p, q) == 1) {
                let r = toddN_congruence_residual(p, q, n).unwrap();
                assert!(r.is_integral());
            }
        }
    }
}

#[test]
fn witness_lift_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let q = rng.gen_range(2i64..300);
        let p = rng.gen_range(1..q);
        if gcd(p, q) != 1 {
            continue;
        }
        let n = [2u32, 4, 6][rng.gen_range(0..3)];
        let i = rng.gen_range(1..n);
        let idx = SumIndex::new(i, n - i).unwrap();
        let pair = CoprimePair::new(p, q).unwrap();
        let consts = constants_for(n).unwrap();
        let s = DedekindKernel::new(idx, q as u64).sum(pair.p());
        let lift = BigInt::from(pair.p_inverse());
        let lifts = [lift.clone() + q, lift.clone() + 7 * q, lift.clone() - q];
        let base = witness_value(&consts, idx, pair, &s, &lift);
        for other in lifts {
            let w = witness_value(&consts, idx, pair, &s, &other);
            assert!((&w - &base).is_integer());
            assert!(w.is_integer());
        }
        let (k, l) = (rng.gen_range(-50i64..50), rng.gen_range(-50i64..50));
        let frac = |pi: &BigInt| {
            gds_core::arith::frac_part(&num_rational::BigRational::new(
                num_traits::pow(pi.clone(), i as usize) * k + num_traits::pow(BigInt::from(p), (n - i) as usize) * l,
                BigInt::from(q),
            ))
        };
        assert_eq!(frac(&lift), frac(&(lift.clone() + 3 * q)));
    }
}

#[test]
fn conjugate_symmetry() {
    for q in 1..=200u64 {
        for k in [1i64, 2, 5] {
            let s = gen_kloosterman_brute(spec(1, 1, k, k, q));
            assert!(s.im.abs() < 1e-9, "q = {q}");
            let s = kloosterman_classical(k, 3, q);
            assert!(s.im.abs() < 1e-9, "q = {q}");
        }
        // even i, j: p -> q - p fixes each term
        let s = gen_kloosterman_brute(spec(2, 2, 3, 1, q));
        let t = gen_kloosterman_brute(spec(2, 2, -3, -1, q));
        assert!((s - t.conj()).norm() < 1e-9);
    }
}

#[test]
fn fast_matches_brute() {
    for q in 1..=600u64 {
        for (i, j) in GRID_IJ {
            for (k, l) in GRID_KL {
                let s = spec(i, j, k, l, q);
                let (f, b) = (gen_kloosterman_fast(s), gen_kloosterman_brute(s));
                assert!((f - b).norm() < 1e-6, "{s:?}: fast {f} brute {b}");
            }
        }
    }
}

#[test]
fn prime_power_extraction() {
    for p in [3u64, 5] {
        for alpha in 2..=4u32 {
            for beta in 1..alpha {
                for (k, l) in [(1i64, 1i64), (1, 2), (2, 3), (4, 1)] {
                    if gcd(k, p as i64) != 1 || gcd(l, p as i64) != 1 {
                        continue;
                    }
                    for (i, j) in GRID_IJ {
                        let pb = p.pow(beta) as i64;
                        let lhs = gen_kloosterman_brute(spec(i, j, k * pb, l * pb, p.pow(alpha)));
                        let rhs = gen_kloosterman_brute(spec(i, j, k, l, p.pow(alpha - beta))) * pb as f64;
                        assert!((lhs - rhs).norm() < 1e-8, "p={p} α={alpha} β={beta}");
                    }
                }
            }
        }
    }
}

fn twisted(s: KloostermanSpec, q1: u64, q2: u64) -> Complex64 {
    let c1 = mod_inverse(q2 as i64, q1).unwrap().value() as i64;
    let c2 = mod_inverse(q1 as i64, q2).unwrap().value() as i64;
    gen_kloosterman_brute(spec(s.i, s.j, c1 * s.k, c1 * s.l, q1))
        * gen_kloosterman_brute(spec(s.i, s.j, c2 * s.k, c2 * s.l, q2))
}

#[test]
fn twisted_crt_holds_and_untwisted_fails() {
    let mut worst_untwisted: f64 = 0.0;
    for (q1, q2) in [(3u64, 5u64), (4, 9), (5, 7), (7, 8), (9, 11), (8, 25)] {
        for (i, j) in GRID_IJ {
            for (k, l) in GRID_KL {
                let s = spec(i, j, k, l, q1 * q2);
                let whole = gen_kloosterman_brute(s);
                assert!((whole - twisted(s, q1, q2)).norm() < 1e-8);
                let plain = gen_kloosterman_brute(spec(i, j, k, l, q1)) * gen_kloosterman_brute(spec(i, j, k, l, q2));
                worst_untwisted = worst_untwisted.max((whole - plain).norm());
            }
        }
    }
    // the untwisted product is not a valid factorization
    assert!(worst_untwisted > 1.0, "{worst_untwisted}");
}

#[test]
fn weil_bounds_small() {
    for q in 2..=2000u64 {
        if is_prime(q) {
            let b = kloosterman_classical(1, 1, q).norm();
            assert!(b <= prime_bound(1, 1, q) + 1e-9, "q = {q}");
        }
        for (i, j) in GRID_IJ {
            for (k, l) in GRID_KL {
                let s = spec(i, j, k, l, q);
                let v = gen_kloosterman_fast(s).norm();
                assert!(v <= weil_bound(s).unwrap() + 1e-9, "{s:?}");
            }
        }
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        let mut pa = p;
        while pa <= 2000 {
            for (i, j) in GRID_IJ {
                for (k, l) in GRID_KL {
                    let s = spec(i, j, k, l, pa);
                    assert!(gen_kloosterman_fast(s).norm() <= prime_power_bound(s) + 1e-9, "{s:?}");
                }
            }
            pa *= p;
        }
    }
}

#[test]
fn trivial_kloosterman_is_totient() {
    for q in 2..=100 {
        let s = gen_kloosterman_fast(spec(3, 2, 0, 0, q));
        assert!((s - Complex64::new(euler_phi(q) as f64, 0.0)).norm() < 1e-9);
    }
}

#[test]
fn fractional_identity_small() {
    for n in [2u32, 4, 6] {
        let consts = constants_for(n).unwrap();
        for q in 2..=120u64 {
            for idx in SumIndex::all_of_degree(n) {
                let kernel = DedekindKernel::new(idx, q);
                for p in (1..q).filter(|&p| gcd(p as i64, q as i64) == 1) {
                    let pair = CoprimePair::new(p as i64, q as i64).unwrap();
                    assert!(frac_identity_with(&consts, &kernel, idx, pair), "{idx:?} ({p},{q})");
                }
            }
        }
    }
}

#[test]
fn aggregate_small() {
    for q in 2..=60u64 {
        for (i, j) in GRID_IJ {
            for m in [1i64, 2, -1] {
                let (a, b) = weyl_kloosterman_aggregate(SumIndex::new(i, j).unwrap(), m, q).unwrap();
                assert!((a - b).norm() < 1e-6 * (q as f64).sqrt().max(1.0), "({i},{j}) m={m} q={q}");
            }
        }
    }
}

#[test]
fn weyl_rows_match_kloosterman_side() {
    for (i, j) in GRID_IJ {
        let idx = SumIndex::new(i, j).unwrap();
        let consts = constants_for(idx.degree()).unwrap();
        let scan = FracScan::new(idx, 201).unwrap();
        for m in [1i64, 3] {
            for q in 2..=200u64 {
                let from_frac = scan.row_sum(q, m).unwrap();
                let (k, l) = kloosterman_pair(&consts, idx, m);
                let s = spec(i, j, reduce_big(&k, q) as i64, reduce_big(&l, q) as i64, q);
                assert!((from_frac - gen_kloosterman_fast(s)).norm() < 1e-6, "({i},{j}) m={m} q={q}");
            }
        }
    }
}

#[test]
fn scan_denominators_divide_q() {
    // FracScan refuses values whose denominator does not divide q
    for (i, j) in [(1, 1), (1, 3), (2, 2), (3, 1)] {
        let scan = FracScan::new(SumIndex::new(i, j).unwrap(), 301).unwrap();
        assert_eq!(scan.samples().count(), (2..=300).map(euler_phi).sum::<u64>() as usize);
        for (_, q, a) in scan.samples() {
            assert!(a < q);
        }
    }
    let sample =
        gds_core::equidist::fractional_dedekind(SumIndex::new(2, 2).unwrap(), CoprimePair::new(3, 10).unwrap())
            .unwrap();
    assert!((sample.value.clone() * rat(10, 1)).is_integer());
}

#[test]
fn unit_root_reduces_exactly() {
    assert!((unit_root(0, 7) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    assert!((unit_root(1, 4) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
}
