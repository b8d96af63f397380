//! Bernoulli numbers, Bernoulli polynomials at rational points, and the
//! periodic Bernoulli functions.
//!
//! Numbers come from the recurrence `sum_{m=0}^{k} C(k+1, m) B_m = 0` and are
//! memoized in a process-wide grow-only table. The table can be seeded from,
//! and dumped to, a text cache with one `k<TAB>num/den` record per line.

use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{binomial, frac_part, int, ExactRational};

/// Grow-only cache of `B_0 .. B_max`.
#[derive(Debug)]
pub struct BernoulliTable {
    values: RwLock<Vec<ExactRational>>,
}

static TABLE: LazyLock<BernoulliTable> = LazyLock::new(BernoulliTable::new);

/// The shared table used by every free function in this crate.
pub fn table() -> &'static BernoulliTable {
    &TABLE
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliTable {
    pub fn new() -> Self {
        BernoulliTable { values: RwLock::new(vec![int(1)]) }
    }

    pub fn len(&self) -> usize {
        self.values.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, k: usize) -> ExactRational {
        if let Some(v) = self.values.read().unwrap().get(k) {
            return v.clone();
        }
        let mut values = self.values.write().unwrap();
        // another writer may have filled it meanwhile; extending is idempotent
        while values.len() <= k {
            let next = next_bernoulli(&values);
            values.push(next);
        }
        values[k].clone()
    }

    /// Copy of all cached entries.
    pub fn snapshot(&self) -> Vec<ExactRational> {
        self.values.read().unwrap().clone()
    }

    /// Seeds the table with a contiguous prefix `B_0..`. Entries already
    /// present are kept; the rest are appended.
    pub fn preload(&self, prefix: &[ExactRational]) -> Result<(), CacheError> {
        check_prefix(prefix)?;
        let mut values = self.values.write().unwrap();
        for (k, v) in prefix.iter().enumerate() {
            if k < values.len() {
                if &values[k] != v {
                    return Err(CacheError::Mismatch(k));
                }
            } else {
                values.push(v.clone());
            }
        }
        Ok(())
    }
}

fn next_bernoulli(prev: &[ExactRational]) -> ExactRational {
    let k = prev.len();
    if k >= 3 && k % 2 == 1 {
        return ExactRational::zero();
    }
    let mut acc = ExactRational::zero();
    for (m, b) in prev.iter().enumerate() {
        if !b.is_zero() {
            acc += b * BigRational::from_integer(binomial(k as u64 + 1, m as i64));
        }
    }
    -acc / BigRational::from_integer(BigInt::from(k + 1))
}

/// `B_k` with the convention `B_1 = -1/2`.
pub fn bernoulli_number(k: usize) -> ExactRational {
    TABLE.get(k)
}

/// `B_k(x) = sum_m C(k, m) B_m x^{k-m}`.
pub fn bernoulli_polynomial(k: usize, x: &ExactRational) -> ExactRational {
    // Horner in x over the coefficients C(k,m) B_m, highest power first
    let mut acc = ExactRational::zero();
    for m in 0..=k {
        acc = acc * x + BigRational::from_integer(binomial(k as u64, m as i64)) * bernoulli_number(m);
    }
    acc
}

/// The periodic Bernoulli function: `B_k(<x>)` off the integers, `B_k` on the
/// integers for `k >= 2`, and `0` on the integers for `k = 1`.
pub fn periodic_bernoulli(k: usize, x: &ExactRational) -> ExactRational {
    assert!(k >= 1, "periodic Bernoulli functions start at k = 1");
    if x.is_integer() {
        if k == 1 {
            ExactRational::zero()
        } else {
            bernoulli_number(k)
        }
    } else {
        bernoulli_polynomial(k, &frac_part(x))
    }
}

/// `lcm` of the denominators of `B_0..=B_k`.
pub fn denominator_lcm(k: usize) -> BigInt {
    (0..=k).fold(BigInt::one(), |acc, m| acc.lcm(bernoulli_number(m).denom()))
}

/// The values `scale * B_k(r/q)` for `r = 0..q`, all integers.
///
/// `scale = L * q^k` with `L` the denominator lcm of `B_0..=B_k`. With
/// `periodic` set, the `r = 0` entry of `k = 1` uses `B̄_1(0) = 0`.
#[derive(Debug, Clone)]
pub struct ScaledBernoulli {
    pub scale: BigInt,
    pub values: Vec<BigInt>,
}

impl ScaledBernoulli {
    pub fn new(k: usize, q: u64, periodic: bool) -> Self {
        assert!(q >= 1);
        let lcm = denominator_lcm(k);
        let qb = BigInt::from(q);
        // c_m = C(k,m) * B_m * L * q^m, integers
        let coeffs: Vec<BigInt> = (0..=k)
            .map(|m| {
                let c = bernoulli_number(m)
                    * BigRational::from_integer(binomial(k as u64, m as i64) * &lcm * num_traits::pow(qb.clone(), m));
                debug_assert!(c.is_integer());
                c.to_integer()
            })
            .collect();
        let values = (0..q)
            .map(|r| {
                if periodic && r == 0 && k == 1 {
                    return BigInt::zero();
                }
                let rb = BigInt::from(r);
                coeffs.iter().fold(BigInt::zero(), |acc, c| acc * &rb + c)
            })
            .collect();
        ScaledBernoulli { scale: lcm * num_traits::pow(qb, k), values }
    }

    /// Machine-word copy, if every entry and the scale fit in `i128`.
    pub fn to_i128(&self) -> Option<(i128, Vec<i128>)> {
        let scale = self.scale.to_i128()?;
        let values = self.values.iter().map(|v| v.to_i128()).collect::<Option<Vec<_>>>()?;
        Some((scale, values))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CacheError {
    #[error("line {0}: expected `k<TAB>num/den`")]
    Malformed(usize),
    #[error("cache entries are not a contiguous prefix starting at k = 0")]
    NotContiguous,
    #[error("cached B_{0} disagrees with the recurrence")]
    Mismatch(usize),
}

fn check_prefix(prefix: &[ExactRational]) -> Result<(), CacheError> {
    for (k, v) in prefix.iter().enumerate() {
        let ok = match k {
            0 => v.is_one(),
            1 => *v == crate::arith::rat(-1, 2),
            _ if k % 2 == 1 => v.is_zero(),
            _ => !v.is_zero(),
        };
        if !ok {
            return Err(CacheError::Mismatch(k));
        }
    }
    Ok(())
}

/// Renders table entries in the cache format.
pub fn format_cache(values: &[ExactRational]) -> String {
    let mut out = String::new();
    for (k, v) in values.iter().enumerate() {
        out.push_str(&format!("{k}\t{}/{}\n", v.numer(), v.denom()));
    }
    out
}

/// Parses the cache format. Blank lines are ignored.
pub fn parse_cache(text: &str) -> Result<Vec<ExactRational>, CacheError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = || CacheError::Malformed(lineno + 1);
        let (k, frac) = line.split_once('\t').ok_or_else(bad)?;
        let k: usize = k.parse().map_err(|_| bad())?;
        let (n, d) = frac.split_once('/').ok_or_else(bad)?;
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() || frac.contains(char::is_whitespace) {
            return Err(bad());
        }
        if k != out.len() {
            return Err(CacheError::NotContiguous);
        }
        out.push(BigRational::new(n, d));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn number_examples() {
        assert_eq!(bernoulli_number(0), int(1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
        for k in (3..=31).step_by(2) {
            assert!(bernoulli_number(k).is_zero(), "B_{k}");
        }
    }

    #[test]
    fn polynomial_examples() {
        assert_eq!(bernoulli_polynomial(1, &rat(1, 3)), rat(-1, 6));
        assert_eq!(bernoulli_polynomial(2, &rat(1, 5)), rat(1, 150));
        for k in 0..=20 {
            assert_eq!(bernoulli_polynomial(k, &int(0)), bernoulli_number(k));
        }
    }

    #[test]
    fn periodic_examples() {
        assert_eq!(periodic_bernoulli(1, &int(0)), int(0));
        assert_eq!(periodic_bernoulli(1, &int(-3)), int(0));
        assert_eq!(periodic_bernoulli(2, &int(0)), rat(1, 6));
        assert_eq!(periodic_bernoulli(2, &rat(7, 3)), rat(-1, 18));
        // floor-based fractional part: <-1/3> = 2/3
        assert_eq!(periodic_bernoulli(1, &rat(-1, 3)), rat(1, 6));
    }

    #[test]
    fn scaled_tables_match_rationals() {
        for k in 0..=6 {
            for q in 1..=9u64 {
                for periodic in [false, true] {
                    let t = ScaledBernoulli::new(k, q, periodic);
                    for r in 0..q {
                        let x = rat(r as i64, q as i64);
                        let expect =
                            if periodic && k >= 1 { periodic_bernoulli(k, &x) } else { bernoulli_polynomial(k, &x) };
                        assert_eq!(BigRational::new(t.values[r as usize].clone(), t.scale.clone()), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn cache_round_trip() {
        let vals: Vec<_> = (0..15).map(bernoulli_number).collect();
        let text = format_cache(&vals);
        assert!(text.starts_with("0\t1/1\n1\t-1/2\n2\t1/6\n"));
        assert_eq!(parse_cache(&text).unwrap(), vals);
        let t = BernoulliTable::new();
        t.preload(&vals).unwrap();
        assert_eq!(t.len(), 15);
        assert_eq!(t.get(20), bernoulli_number(20));
    }

    #[test]
    fn cache_rejects_bad_input() {
        assert_eq!(parse_cache("0\t1/1\n2\t1/6\n"), Err(CacheError::NotContiguous));
        assert_eq!(parse_cache("0 1/1\n"), Err(CacheError::Malformed(1)));
        assert_eq!(parse_cache("0\t1/0\n"), Err(CacheError::Malformed(1)));
        let t = BernoulliTable::new();
        assert_eq!(t.preload(&[int(1), rat(1, 2)]), Err(CacheError::Mismatch(1)));
    }
}
