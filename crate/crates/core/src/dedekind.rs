//! Generalized and classical Dedekind sums and the Rademacher φ-function.
//!
//! `s_ij(p, q) = sum_{k=0}^{q-1} B̄_i(k/q) B̄_j(pk/q)`.
//!
//! Sums are accumulated over integers: `B̄_i(k/q)` is scaled by
//! `L_i q^i` (see [`ScaledBernoulli`]) so that a whole sum costs `q`
//! integer multiply-adds and one final reduction. The machine-word path is
//! overflow-checked and falls back to big integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{gcd, int, mod_inverse, rat, reduce, ExactRational};
use crate::bernoulli::ScaledBernoulli;
use crate::error::{Error, Result};

/// Coprime `(p, q)` with `q >= 1` and `p` reduced into `[0, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoprimePair {
    p: u64,
    q: u64,
}

impl CoprimePair {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q < 1 {
            return Err(Error::OutOfRange(format!("q = {q} must be positive")));
        }
        if gcd(p, q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        Ok(CoprimePair { p: reduce(p, q as u64), q: q as u64 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `p'` with `p p' ≡ 1 (mod q)`, in `[0, q)`.
    pub fn p_inverse(&self) -> u64 {
        mod_inverse(self.p as i64, self.q).expect("coprime by construction").value()
    }
}

/// Index pair `(i, j)` with `i, j >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SumIndex {
    i: u32,
    j: u32,
}

impl SumIndex {
    pub fn new(i: u32, j: u32) -> Result<Self> {
        if i == 0 || j == 0 {
            return Err(Error::OutOfRange(format!("indices ({i}, {j}) must be >= 1")));
        }
        Ok(SumIndex { i, j })
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// `N = i + j`.
    pub fn degree(&self) -> u32 {
        self.i + self.j
    }

    pub fn swapped(&self) -> Self {
        SumIndex { i: self.j, j: self.i }
    }

    /// All `(i, j)` with `i, j >= 1` and `i + j = n`.
    pub fn all_of_degree(n: u32) -> Vec<SumIndex> {
        (1..n).map(|i| SumIndex { i, j: n - i }).collect()
    }
}

/// An element of SL2(Z).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModularMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl ModularMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::NotUnimodular { a, b, c, d, det: det as i64 });
        }
        Ok(ModularMatrix { a, b, c, d })
    }

    pub fn identity() -> Self {
        ModularMatrix { a: 1, b: 0, c: 0, d: 1 }
    }
}

/// Precomputed tables for `s_ij(·, q)` at a fixed modulus.
///
/// Sweeps over many `p` at the same `q` should build one of these and call
/// [`DedekindKernel::sum`] repeatedly.
#[derive(Debug, Clone)]
pub struct DedekindKernel {
    q: u64,
    small: Option<SmallTables>,
    left: ScaledBernoulli,
    right: ScaledBernoulli,
}

#[derive(Debug, Clone)]
struct SmallTables {
    scale: i128,
    left: Vec<i128>,
    right: Vec<i128>,
}

impl DedekindKernel {
    pub fn new(idx: SumIndex, q: u64) -> Self {
        let left = ScaledBernoulli::new(idx.i as usize, q, true);
        let right = ScaledBernoulli::new(idx.j as usize, q, true);
        let small = match (left.to_i128(), right.to_i128()) {
            (Some((sl, l)), Some((sr, r))) => sl.checked_mul(sr).map(|scale| SmallTables { scale, left: l, right: r }),
            _ => None,
        };
        DedekindKernel { q, small, left, right }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `s_ij(p, q)`; `p` must be coprime to `q` (not rechecked).
    pub fn sum(&self, p: u64) -> ExactRational {
        let (num, den) = self.numerator(p);
        BigRational::new(num, den)
    }

    /// Unreduced `(numerator, denominator)` of the sum.
    pub fn numerator(&self, p: u64) -> (BigInt, BigInt) {
        if let Some(t) = &self.small {
            if let Some(n) = t.accumulate(p % self.q, self.q) {
                return (BigInt::from(n), BigInt::from(t.scale));
            }
        }
        let q = self.q;
        let p = p % q;
        let mut acc = BigInt::zero();
        let mut r = 0u64;
        for k in 0..q as usize {
            acc += &self.left.values[k] * &self.right.values[r as usize];
            r += p;
            if r >= q {
                r -= q;
            }
        }
        (acc, &self.left.scale * &self.right.scale)
    }
}

impl SmallTables {
    fn accumulate(&self, p: u64, q: u64) -> Option<i128> {
        let mut acc: i128 = 0;
        let mut r = 0u64;
        for &a in &self.left {
            acc = acc.checked_add(a.checked_mul(self.right[r as usize])?)?;
            r += p;
            if r >= q {
                r -= q;
            }
        }
        Some(acc)
    }
}

/// `s_ij(p, q)` from the defining sum.
pub fn dedekind_sum_general(idx: SumIndex, pair: CoprimePair) -> ExactRational {
    DedekindKernel::new(idx, pair.q).sum(pair.p)
}

/// Classical `s(p, q) = s_11(p, q)`.
pub fn dedekind_sum_classical(pair: CoprimePair) -> ExactRational {
    dedekind_sum_general(SumIndex { i: 1, j: 1 }, pair)
}

/// Convenience wrapper validating raw integers.
pub fn dedekind_sum(i: u32, j: u32, p: i64, q: i64) -> Result<ExactRational> {
    Ok(dedekind_sum_general(SumIndex::new(i, j)?, CoprimePair::new(p, q)?))
}

/// Rademacher's φ: `(a+d)/(12c) - sign(c) s(a, |c|)` for `c != 0`, `b/(12d)` for `c = 0`.
pub fn rademacher_phi(m: ModularMatrix) -> ExactRational {
    let ModularMatrix { a, b, c, d } = m;
    if c == 0 {
        return rat(b, 12 * d);
    }
    let s = dedekind_sum_classical(CoprimePair::new(a, c.abs()).expect("ad - bc = 1 forces gcd(a, c) = 1"));
    rat(a + d, 12 * c) - int(c.signum()) * s
}
