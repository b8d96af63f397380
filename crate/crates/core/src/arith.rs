//! Exact integer/rational helpers and elementary modular arithmetic.
//!
//! Rationals are `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision reduced fraction.
pub type ExactRational = BigRational;

/// Builds `n/d` from machine integers. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `<x> = x - floor(x)`, always in `[0, 1)`.
pub fn frac_part(x: &ExactRational) -> ExactRational {
    x - x.floor()
}

/// A residue class `value mod modulus` with `0 <= value < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(a: i64, modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        Residue { value: reduce(a, modulus), modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

/// `a mod q` in `[0, q)`.
pub fn reduce(a: i64, q: u64) -> u64 {
    (a as i128).rem_euclid(q as i128) as u64
}

pub fn reduce_i128(a: i128, q: u64) -> u64 {
    a.rem_euclid(q as i128) as u64
}

pub fn mul_mod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

/// Extended Euclid on machine integers: returns `(g, s, t)` with `a*s + b*t = g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let qt = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - qt * r1);
        (s0, s1) = (s1, s0 - qt * s1);
        (t0, t1) = (t1, t0 - qt * t1);
    }
    if r0 < 0 {
        (r0, s0, t0) = (-r0, -s0, -t0);
    }
    (r0 as i64, s0 as i64, t0 as i64)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// The inverse of `a` modulo `q`. For `q = 1` this is `0`.
pub fn mod_inverse(a: i64, q: u64) -> Result<Residue> {
    if q == 0 {
        return Err(Error::OutOfRange("modulus must be positive".into()));
    }
    if q == 1 {
        return Ok(Residue { value: 0, modulus: 1 });
    }
    let a_red = reduce(a, q);
    let (g, s, _) = ext_gcd(a_red as i64, q as i64);
    if g != 1 {
        return Err(Error::NonInvertible { a, q });
    }
    Ok(Residue::new(s, q))
}

/// `a^e mod q` by square-and-multiply.
pub fn mod_pow(a: i64, e: u64, q: u64) -> Residue {
    assert!(q >= 1, "modulus must be positive");
    Residue { value: pow_mod_u64(reduce(a, q), e, q), modulus: q }
}

pub(crate) fn pow_mod_u64(base: u64, mut e: u64, q: u64) -> u64 {
    if q == 1 {
        return 0;
    }
    let mut b = base % q;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, q);
        }
        b = mul_mod(b, b, q);
        e >>= 1;
    }
    acc
}

/// `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for t in 0..k {
        acc *= n - t;
        acc /= t + 1;
    }
    acc
}

/// Least common multiple of positive integers; the empty sequence gives 1.
pub fn lcm_all<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a BigInt>,
{
    values.into_iter().fold(BigInt::one(), |acc, v| {
        debug_assert!(v.is_positive());
        acc.lcm(v)
    })
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, t| acc * t)
}

/// Trial-division factorization, primes ascending.
pub fn factorize(mut q: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= q {
        if q % p == 0 {
            let mut e = 0;
            while q % p == 0 {
                q /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if q > 1 {
        out.push((q, 1));
    }
    out
}

pub fn is_prime(q: u64) -> bool {
    q >= 2 && factorize(q).len() == 1 && factorize(q)[0].1 == 1
}

pub fn euler_phi(q: u64) -> u64 {
    factorize(q).iter().fold(q, |acc, &(p, _)| acc / p * (p - 1))
}
