//! Fractional parts `<R(i,j) q^{N-2} s_ij(p,q)>`, Weyl sums over them and
//! simple distribution diagnostics.
//!
//! Each fractional part has denominator dividing `q`, so a scan stores one
//! integer numerator per pair and every Weyl term is `e(a/q)` with `a` exact.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{frac_part, mul_mod, ExactRational};
use crate::dedekind::{CoprimePair, DedekindKernel, SumIndex};
use crate::error::{Error, Result};
use crate::expsums::{unit_root, CompensatedSum};
use crate::integrality::constants_for;

/// `<x> = x - floor(x)`.
pub fn frac_exact(x: &ExactRational) -> ExactRational {
    frac_part(x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracSample {
    pub p: u64,
    pub q: u64,
    pub value: ExactRational,
}

/// `<R q^{N-2} s>` from the unreduced `num/den` of `s`, as a numerator over `q`.
fn frac_numerator(norm: &BigInt, num: &BigInt, den: &BigInt, q: u64) -> Result<u64> {
    let a = (norm * num).mod_floor(den);
    let g = a.gcd(den);
    let den_red = den / &g;
    let qb = BigInt::from(q);
    if !(&qb % &den_red).is_zero() {
        return Err(Error::NotAnInteger(format!(
            "fractional part {}/{} has denominator not dividing q = {q}",
            a / &g,
            den_red
        )));
    }
    Ok(((a / g) * (qb / den_red)).to_u64().expect("below q"))
}

fn normalizer(idx: SumIndex, q: u64) -> Result<BigInt> {
    let consts = constants_for(idx.degree())?;
    Ok(consts.r_of(idx.i()) * num_traits::pow(BigInt::from(q), (consts.n - 2) as usize))
}

/// `<R(i,j) q^{N-2} s_ij(p,q)>`, exactly.
pub fn fractional_dedekind(idx: SumIndex, pair: CoprimePair) -> Result<FracSample> {
    let norm = normalizer(idx, pair.q())?;
    let s = DedekindKernel::new(idx, pair.q()).sum(pair.p());
    let value = frac_exact(&(BigRational::from_integer(norm) * s));
    Ok(FracSample { p: pair.p(), q: pair.q(), value })
}

/// Fractional parts for every coprime `0 < p < q`, `2 <= q < x_max`, in
/// `(q, p)` ascending order. Row `q` holds numerators over `q`.
#[derive(Debug, Clone)]
pub struct FracScan {
    idx: SumIndex,
    x_max: u64,
    rows: Vec<(u64, Vec<(u64, u64)>)>,
}

impl FracScan {
    pub fn new(idx: SumIndex, x_max: u64) -> Result<Self> {
        constants_for(idx.degree())?;
        let rows: Result<Vec<_>> = (2..x_max.max(2))
            .into_par_iter()
            .map(|q| {
                let norm = normalizer(idx, q)?;
                let kernel = DedekindKernel::new(idx, q);
                let mut row = Vec::new();
                for p in (1..q).filter(|p| p.gcd(&q) == 1) {
                    let (num, den) = kernel.numerator(p);
                    row.push((p, frac_numerator(&norm, &num, &den, q)?));
                }
                Ok((q, row))
            })
            .collect();
        Ok(FracScan { idx, x_max, rows: rows? })
    }

    pub fn index(&self) -> SumIndex {
        self.idx
    }

    pub fn x_max(&self) -> u64 {
        self.x_max
    }

    /// Number of pairs with `q < x`.
    pub fn count_below(&self, x: u64) -> usize {
        self.rows_below(x).map(|(_, r)| r.len()).sum()
    }

    fn rows_below(&self, x: u64) -> impl Iterator<Item = &(u64, Vec<(u64, u64)>)> {
        self.rows.iter().take_while(move |(q, _)| *q < x)
    }

    /// `(p, q, a)` with value `a/q`.
    pub fn samples(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        self.rows.iter().flat_map(|(q, row)| row.iter().map(move |&(p, a)| (p, *q, a)))
    }

    pub fn sample_values(&self) -> Vec<ExactRational> {
        self.samples().map(|(_, q, a)| BigRational::new(a.into(), q.into())).collect()
    }

    /// `sum_p e(m a_p / q)` for one row.
    pub fn row_sum(&self, q: u64, m: i64) -> Option<Complex64> {
        let (_, row) = self.rows.iter().find(|(r, _)| *r == q)?;
        Some(weyl_row(row, q, m))
    }

    /// Weyl average over the pairs with `q < x`, `x <= x_max`.
    pub fn weyl(&self, m: i64, x: u64) -> Result<Complex64> {
        if x > self.x_max {
            return Err(Error::OutOfRange(format!("x = {x} exceeds the scanned range {}", self.x_max)));
        }
        let count = self.count_below(x);
        if count == 0 {
            return Err(Error::EmptyRange(x));
        }
        let partials: Vec<Complex64> = self.rows_below(x).map(|(q, row)| weyl_row(row, *q, m)).collect();
        let total: CompensatedSum = partials.into_iter().collect();
        Ok(total.value() / count as f64)
    }

    /// Star discrepancy of all samples with `q < x`.
    pub fn discrepancy(&self, x: u64) -> Result<f64> {
        let mut vals: Vec<f64> =
            self.rows_below(x).flat_map(|(q, row)| row.iter().map(move |&(_, a)| a as f64 / *q as f64)).collect();
        vals.sort_by(f64::total_cmp);
        star_discrepancy(&vals)
    }

    pub fn histogram(&self, bins: usize) -> Vec<u64> {
        let mut counts = vec![0u64; bins];
        for (_, q, a) in self.samples() {
            counts[bin_of(a, q, bins)] += 1;
        }
        counts
    }
}

fn weyl_row(row: &[(u64, u64)], q: u64, m: i64) -> Complex64 {
    let mq = m.rem_euclid(q as i64) as u64;
    row.iter().map(|&(_, a)| unit_root(mul_mod(a, mq, q), q)).collect::<CompensatedSum>().value()
}

/// `floor(bins a / q)` for `a/q` in `[0, 1)`.
fn bin_of(a: u64, q: u64, bins: usize) -> usize {
    ((a as u128 * bins as u128) / q as u128) as usize
}

/// `E_ij(m, x)`: the average of `e(m <R q^{N-2} s_ij(p,q)>)` over coprime `0 < p < q < x_max`.
#[allow(non_snake_case)]
pub fn weyl_E(idx: SumIndex, m: i64, x_max: u64) -> Result<Complex64> {
    if m == 0 {
        return Err(Error::OutOfRange("harmonic m must be nonzero".into()));
    }
    constants_for(idx.degree())?;
    if x_max <= 2 {
        return Err(Error::EmptyRange(x_max));
    }
    FracScan::new(idx, x_max)?.weyl(m, x_max)
}

/// `D* = max_k max(k/n - u_k, u_k - (k-1)/n)` over sorted samples.
pub fn star_discrepancy(sorted: &[f64]) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = sorted.len() as f64;
    let d = sorted.iter().enumerate().fold(0.0f64, |acc, (k, &u)| {
        let k = k as f64;
        acc.max((k + 1.0) / n - u).max(u - k / n)
    });
    Ok(d.clamp(0.0, 1.0))
}

/// Counts of samples in `[b/bins, (b+1)/bins)`, compared exactly.
pub fn histogram(samples: &[ExactRational], bins: usize) -> Result<Vec<u64>> {
    if bins == 0 {
        return Err(Error::OutOfRange("bins must be positive".into()));
    }
    let mut counts = vec![0u64; bins];
    let nb = BigInt::from(bins);
    for s in samples {
        if s < &BigRational::zero() || s >= &BigRational::one() {
            return Err(Error::OutOfRange(format!("sample {s} outside [0, 1)")));
        }
        let b = (s.numer() * &nb).div_floor(s.denom());
        counts[b.to_usize().expect("below bins")] += 1;
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionReport {
    pub samples: usize,
    /// `(m, E(m, x))` for `m = 1..=M`.
    pub weyl: Vec<(i64, Complex64)>,
    pub discrepancy: f64,
    pub histogram: Vec<u64>,
}

impl DistributionReport {
    pub fn from_scan(scan: &FracScan, harmonics: i64, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::OutOfRange("bins must be positive".into()));
        }
        let x = scan.x_max();
        let weyl = (1..=harmonics).map(|m| Ok((m, scan.weyl(m, x)?))).collect::<Result<Vec<_>>>()?;
        Ok(DistributionReport {
            samples: scan.count_below(x),
            weyl,
            discrepancy: scan.discrepancy(x)?,
            histogram: scan.histogram(bins),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn idx(i: u32, j: u32) -> SumIndex {
        SumIndex::new(i, j).unwrap()
    }

    fn pair(p: i64, q: i64) -> CoprimePair {
        CoprimePair::new(p, q).unwrap()
    }

    #[test]
    fn fractional_parts() {
        assert_eq!(frac_exact(&rat(-6, 7)), rat(1, 7));
        assert_eq!(frac_exact(&rat(5, 3)), rat(2, 3));
        assert_eq!(frac_exact(&int(2)), int(0));
        assert_eq!(fractional_dedekind(idx(1, 1), pair(5, 7)).unwrap().value, rat(1, 7));
        assert_eq!(fractional_dedekind(idx(1, 1), pair(1, 2)).unwrap().value, int(0));
        assert_eq!(fractional_dedekind(idx(1, 1), pair(1, 3)).unwrap().value, rat(2, 3));
    }

    #[test]
    fn scan_matches_pointwise() {
        for (i, j) in [(1, 1), (1, 3), (2, 2)] {
            let scan = FracScan::new(idx(i, j), 30).unwrap();
            for (p, q, a) in scan.samples() {
                let direct = fractional_dedekind(idx(i, j), pair(p as i64, q as i64)).unwrap().value;
                assert_eq!(direct, rat(a as i64, q as i64));
            }
        }
    }

    #[test]
    fn weyl_examples() {
        let e = weyl_E(idx(1, 1), 1, 4).unwrap();
        assert!(e.norm() < 1e-12);
        let e = weyl_E(idx(1, 1), 1, 3).unwrap();
        assert!((e - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(weyl_E(idx(1, 1), 1, 2), Err(Error::EmptyRange(2)));
        assert_eq!(weyl_E(idx(1, 2), 1, 10), Err(Error::OddN(3)));
    }

    #[test]
    fn discrepancy_examples() {
        assert_eq!(star_discrepancy(&[0.5]).unwrap(), 0.5);
        let grid: Vec<f64> = (0..5).map(|k| (2 * k + 1) as f64 / 10.0).collect();
        assert!((star_discrepancy(&grid).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(star_discrepancy(&[]), Err(Error::EmptySample));
    }

    #[test]
    fn histogram_examples() {
        assert_eq!(histogram(&[int(0), rat(1, 2)], 2).unwrap(), vec![1, 1]);
        assert_eq!(histogram(&[rat(1, 3)], 3).unwrap(), vec![0, 1, 0]);
        assert_eq!(histogram(&[], 4).unwrap(), vec![0, 0, 0, 0]);
        assert!(histogram(&[int(1)], 2).is_err());
    }

    #[test]
    fn report_is_consistent() {
        let scan = FracScan::new(idx(1, 1), 40).unwrap();
        let report = DistributionReport::from_scan(&scan, 3, 7).unwrap();
        assert_eq!(report.histogram.iter().sum::<u64>() as usize, report.samples);
        assert_eq!(histogram(&scan.sample_values(), 7).unwrap(), report.histogram);
        assert!((0.0..=1.0).contains(&report.discrepancy));
    }
}
