use gds_core::arith::{frac_part, gcd, rat, ExactRational};
use gds_core::bernoulli::periodic_bernoulli;
use gds_core::dedekind::{
    dedekind_sum, dedekind_sum_classical, dedekind_sum_general, rademacher_phi, CoprimePair, DedekindKernel,
    ModularMatrix, SumIndex,
};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pairs(q_max: i64) -> impl Iterator<Item = (i64, i64)> {
    (2..=q_max).flat_map(|q| (1..q).filter(move |&p| gcd(p, q) == 1).map(move |p| (p, q)))
}

/// Definition, term by term.
fn direct(i: usize, j: usize, p: i64, q: i64) -> ExactRational {
    (0..q).fold(ExactRational::zero(), |acc, k| {
        acc + periodic_bernoulli(i, &rat(k, q)) * periodic_bernoulli(j, &rat(p * k, q))
    })
}

#[test]
fn odd_vanishing() {
    for n in (3..=9u32).step_by(2) {
        for idx in SumIndex::all_of_degree(n) {
            for (p, q) in pairs(60) {
                let s = dedekind_sum_general(idx, CoprimePair::new(p, q).unwrap());
                assert!(s.is_zero(), "s_{},{}({p},{q}) = {s}", idx.i(), idx.j());
            }
        }
    }
}

#[test]
fn reciprocity() {
    for (p, q) in pairs(60) {
        let lhs = dedekind_sum(1, 1, p, q).unwrap() + dedekind_sum(1, 1, q, p).unwrap();
        let rhs = rat(-1, 4) + (rat(p, q) + rat(q, p) + rat(1, p * q)) / BigRational::from_integer(12.into());
        assert_eq!(lhs, rhs, "({p},{q})");
    }
}

#[test]
fn periodicity_in_p() {
    for q in 2..=50i64 {
        for p in (1..q).filter(|&p| gcd(p, q) == 1) {
            for (i, j) in [(1, 1), (1, 3), (2, 2), (2, 3)] {
                assert_eq!(dedekind_sum(i, j, p + q, q).unwrap(), dedekind_sum(i, j, p, q).unwrap());
            }
        }
    }
}

#[test]
fn kernel_matches_definition() {
    for (p, q) in pairs(20) {
        for n in 2..=6u32 {
            for idx in SumIndex::all_of_degree(n) {
                let got = DedekindKernel::new(idx, q as u64).sum(p as u64);
                assert_eq!(got, direct(idx.i() as usize, idx.j() as usize, p, q));
            }
        }
    }
}

#[test]
fn large_modulus_falls_back_exactly() {
    // degrees high enough that the scaled tables leave i128
    let (p, q) = (1234, 4001);
    let idx = SumIndex::new(7, 9).unwrap();
    let fast = dedekind_sum_general(idx, CoprimePair::new(p, q).unwrap());
    assert_eq!(fast, direct(7, 9, p, q));
}

#[test]
fn swap_symmetry() {
    // s_ij(p, q) = s_ji(p', q) by substituting k -> p'k
    for (p, q) in pairs(40) {
        let pair = CoprimePair::new(p, q).unwrap();
        let inv = CoprimePair::new(pair.p_inverse() as i64, q).unwrap();
        for idx in [SumIndex::new(1, 3).unwrap(), SumIndex::new(2, 4).unwrap()] {
            assert_eq!(dedekind_sum_general(idx, pair), dedekind_sum_general(idx.swapped(), inv));
        }
    }
}

#[test]
fn classical_examples() {
    assert_eq!(dedekind_sum_classical(CoprimePair::new(5, 7).unwrap()), rat(-1, 14));
    assert_eq!(dedekind_sum_classical(CoprimePair::new(1, 3).unwrap()), rat(1, 18));
}

#[test]
fn rademacher_phi_in_twelfths() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut checked = 0;
    while checked < 200 {
        let (a, c) = (rng.gen_range(-500i64..500), rng.gen_range(-500i64..500));
        if gcd(a, c) != 1 {
            continue;
        }
        let (_, s, t) = gds_core::arith::ext_gcd(a, c);
        // a s + c t = 1, so [[a, -t], [c, s]] is unimodular
        let k = rng.gen_range(-20i64..20);
        let m = ModularMatrix::new(a, -t + k * a, c, s + k * c).unwrap();
        let v = rademacher_phi(m) * BigRational::from_integer(12.into());
        assert!(v.is_integer(), "{m:?}");
        checked += 1;
    }
}

proptest! {
    #[test]
    fn fractional_part_rademacher(q in 2i64..400, p in 1i64..400) {
        prop_assume!(p < q && gcd(p, q) == 1);
        let pair = CoprimePair::new(p, q).unwrap();
        let s = dedekind_sum_classical(pair);
        let lhs = frac_part(&(s * BigRational::from_integer(12.into())));
        let rhs = frac_part(&rat(p + pair.p_inverse() as i64, q));
        prop_assert_eq!(lhs, rhs);
    }
}
