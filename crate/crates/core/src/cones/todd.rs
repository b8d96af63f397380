//! Todd-series coefficients of `σ_pq = σ((1,0), (p,q))` by three routes.
//!
//! Writing `Td_pq = sum t_ij/(i! j!) x^i y^j`:
//!
//! * lattice route: `t_ij = q^{-1} (-q)^{i+j} sum_{k<q} B_i(k/q) B_j(<pk/q>)`,
//!   summing over the lattice points of the half-open fundamental
//!   parallelogram of the dual cone;
//! * Dedekind route: `t_ij = -(-q)^{i+j-1} (s_ij(p,q) + δ(i,j) B_i B_j)` for `i, j >= 1`;
//! * continued-fraction route: the degree-`N` part assembled from the
//!   nonsingular cones `σ(v_k, v_{k+1})` of the expansion of `q/p`, using
//!   only Bernoulli numbers and the forms `M_k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{factorial, gcd, int, reduce, ExactRational};
use crate::bernoulli::{bernoulli_number, ScaledBernoulli};
use crate::dedekind::{dedekind_sum_general, CoprimePair, SumIndex};
use crate::error::{Error, Result};

use super::cf::{continued_fraction, linear_forms_from_cf};
use super::poly::{powers, BivariatePoly};

fn check_pair(p: i64, q: i64) -> Result<()> {
    if q < 1 {
        return Err(Error::OutOfRange(format!("q = {q} must be positive")));
    }
    if gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    Ok(())
}

/// Non-periodic scaled Bernoulli tables `B_k(r/q)` for one modulus, shared
/// across all coefficients of that modulus.
#[derive(Debug, Clone)]
pub struct LatticeTables {
    q: u64,
    tables: Vec<ScaledBernoulli>,
}

impl LatticeTables {
    pub fn new(q: u64, max_degree: u32) -> Self {
        let tables = (0..=max_degree as usize).map(|k| ScaledBernoulli::new(k, q, false)).collect();
        LatticeTables { q, tables }
    }

    /// `t_ij(p, q)` for `i + j <= max_degree`.
    pub fn coefficient(&self, p: u64, i: u32, j: u32) -> ExactRational {
        let q = self.q;
        let (ti, tj) = (&self.tables[i as usize], &self.tables[j as usize]);
        let mut acc = BigInt::zero();
        let mut r = 0u64;
        let p = p % q;
        for k in 0..q as usize {
            acc += &ti.values[k] * &tj.values[r as usize];
            r += p;
            if r >= q {
                r -= q;
            }
        }
        let qi = BigInt::from(q);
        let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
        let num = acc * num_traits::pow(qi.clone(), (i + j) as usize) * sign;
        BigRational::new(num, &ti.scale * &tj.scale * qi)
    }
}

/// `t_ij(p, q)` via the parallelogram lattice-point formula.
pub fn todd_coeff_lattice(p: i64, q: i64, i: u32, j: u32) -> Result<ExactRational> {
    check_pair(p, q)?;
    Ok(LatticeTables::new(q as u64, i.max(j)).coefficient(reduce(p, q as u64), i, j))
}

/// Degree-`n` homogeneous part of `Td_pq` from the lattice route.
pub fn todd_homogeneous_lattice(p: i64, q: i64, n: u32) -> Result<BivariatePoly> {
    check_pair(p, q)?;
    let tables = LatticeTables::new(q as u64, n);
    let pr = reduce(p, q as u64);
    let mut out = BivariatePoly::zero();
    for i in 0..=n {
        let t = tables.coefficient(pr, i, n - i);
        out.add_term(i, n - i, t / BigRational::from_integer(factorial(i) * factorial(n - i)));
    }
    Ok(out)
}

/// `t_ij(p, q) = -(-q)^{i+j-1} (s_ij(p, q) + δ(i,j) B_i B_j)`.
pub fn todd_coeff_from_dedekind(p: i64, q: i64, idx: SumIndex) -> Result<ExactRational> {
    let pair = CoprimePair::new(p, q)?;
    let (i, j) = (idx.i() as usize, idx.j() as usize);
    let mut s = dedekind_sum_general(idx, pair);
    if i == 1 || j == 1 {
        s += bernoulli_number(i) * bernoulli_number(j);
    }
    let e = idx.degree() - 1;
    // -(-q)^e = (-1)^{e+1} q^e
    let sign = if e % 2 == 1 { 1 } else { -1 };
    Ok(s * int(sign) * BigRational::from_integer(num_traits::pow(BigInt::from(q), e as usize)))
}

/// Degree-`n` part of `Td_pq` (even `n >= 2`) from the continued fraction of `q/p`.
pub fn todd_homogeneous_via_cf(p: i64, q: i64, n: u32) -> Result<BivariatePoly> {
    if n % 2 == 1 {
        return Err(Error::OddDegree(n));
    }
    if n == 0 {
        return Err(Error::OutOfRange("degree must be at least 2".into()));
    }
    let cf = continued_fraction(q, p)?;
    let len = cf.len();
    let forms = linear_forms_from_cf(&cf);
    // m_pows[k + 1][e] = M_k^e
    let m_pows: Vec<Vec<BivariatePoly>> = forms.iter().map(|f| powers(&f.to_poly(), n)).collect();
    let m = |k: isize, e: u32| &m_pows[(k + 1) as usize][e as usize];
    let bn_over = bernoulli_number(n as usize) / BigRational::from_integer(factorial(n));
    let qr = int(q);

    // weights B_{i+1} B_{N-i-1} / ((i+1)! (N-i-1)!), i = 0..=N-2; N even so (-1)^N = 1
    let weights: Vec<ExactRational> = (0..=n - 2)
        .map(|i| {
            bernoulli_number(i as usize + 1) * bernoulli_number((n - i - 1) as usize)
                / BigRational::from_integer(factorial(i + 1) * factorial(n - i - 1))
        })
        .collect();

    let mut inner = BivariatePoly::zero();
    for k in -1..len as isize {
        let sign = if (k + 1) % 2 == 0 { ExactRational::one() } else { -ExactRational::one() };
        for (i, w) in weights.iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            let i = i as u32;
            inner = inner + (m(k, n - 2 - i) * m(k + 1, i)).scale(&(w * &sign));
        }
    }

    let mut chain = BivariatePoly::zero();
    for k in 0..len as isize {
        let coeff = int(if k % 2 == 0 { 1 } else { -1 } * cf.a(k as usize + 1));
        for i in 0..=n - 2 {
            chain = chain + (m(k - 1, n - 2 - i) * m(k + 1, i)).scale(&coeff);
        }
    }

    let xy_part = (inner + chain.scale(&bn_over)).scale(&qr).shift(1, 1);
    let boundary = m(0, n - 1).shift(1, 0) + m(len as isize - 1, n - 1).shift(0, 1);
    Ok(xy_part + boundary.scale(&bn_over))
}
