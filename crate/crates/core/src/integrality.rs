//! Integrality constants `(α_N, β_N, r_N)`, `R(i, j)`, and the scalar and
//! polynomial integrality statements they normalize.
//!
//! `α_N/β_N` is `B_N` in lowest terms and
//! `r_N = lcm{ den(β_N C(N, i+1) B_{i+1} B_{N-i-1}) : i odd, 0 <= i <= N-2 }`.
//! For even `N = i + j`,
//!
//! ```text
//! R(i,j) q^{N-2} s_ij(p,q) - α_N r_N (C(N-1,i) p'^i + C(N-1,j) p^j) / q  ∈ Z
//! ```
//!
//! with `R(i,j) = C(N,i) β_N r_N`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::arith::{binomial, factorial, lcm_all, ExactRational};
use crate::bernoulli::bernoulli_number;
use crate::cones::{continued_fraction, todd_homogeneous_lattice, BivariatePoly, LinearForm};
use crate::dedekind::{CoprimePair, DedekindKernel, SumIndex};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralityConstants {
    pub n: u32,
    pub alpha: BigInt,
    pub beta: BigInt,
    pub r: BigInt,
}

impl IntegralityConstants {
    /// `R(i, j) = C(N, i) β_N r_N` for `i + j = N`.
    pub fn r_of(&self, i: u32) -> BigInt {
        binomial(self.n as u64, i as i64) * &self.beta * &self.r
    }

    /// `α_N r_N C(N-1, i)`, the Kloosterman coefficient paired with `p'^i`.
    pub fn kloosterman_coeff(&self, i: u32) -> BigInt {
        &self.alpha * &self.r * binomial(self.n as u64 - 1, i as i64)
    }
}

fn check_even(n: u32) -> Result<()> {
    if n % 2 == 1 {
        return Err(Error::OddN(n));
    }
    if n < 2 {
        return Err(Error::OutOfRange(format!("N = {n} must be at least 2")));
    }
    Ok(())
}

pub fn constants_for(n: u32) -> Result<IntegralityConstants> {
    check_even(n)?;
    let b_n = bernoulli_number(n as usize);
    let alpha = b_n.numer().clone();
    let beta = b_n.denom().clone();
    let beta_r = BigRational::from_integer(beta.clone());
    let dens: Vec<BigInt> = (1..=n - 2)
        .step_by(2)
        .map(|i| {
            let term = &beta_r
                * BigRational::from_integer(binomial(n as u64, i as i64 + 1))
                * bernoulli_number(i as usize + 1)
                * bernoulli_number((n - i - 1) as usize);
            // reduced, positive; zero gives 1
            term.denom().clone()
        })
        .collect();
    Ok(IntegralityConstants { n, alpha, beta, r: lcm_all(&dens) })
}

/// `R(i, j) = C(N, i) β_N r_N`.
pub fn r_constant(idx: SumIndex) -> Result<BigInt> {
    Ok(constants_for(idx.degree())?.r_of(idx.i()))
}

fn check_pair_nontrivial(pair: CoprimePair) -> Result<()> {
    if pair.q() < 2 {
        return Err(Error::OutOfRange("q = 1: the statement is vacuous".into()));
    }
    Ok(())
}

/// The witness expression as a rational, with an explicit lift `p_inv` of `p'`.
pub fn witness_value(
    consts: &IntegralityConstants,
    idx: SumIndex,
    pair: CoprimePair,
    s: &ExactRational,
    p_inv: &BigInt,
) -> ExactRational {
    let q = BigInt::from(pair.q());
    let p = BigInt::from(pair.p());
    let scaled =
        BigRational::from_integer(consts.r_of(idx.i()) * num_traits::pow(q.clone(), (consts.n - 2) as usize)) * s;
    let tail = consts.kloosterman_coeff(idx.i()) * num_traits::pow(p_inv.clone(), idx.i() as usize)
        + consts.kloosterman_coeff(idx.j()) * num_traits::pow(p, idx.j() as usize);
    scaled - BigRational::new(tail, q)
}

/// Evaluates the integrality witness with a prepared kernel for `(idx, q)`.
pub fn integrality_witness_with(
    consts: &IntegralityConstants,
    kernel: &DedekindKernel,
    idx: SumIndex,
    pair: CoprimePair,
) -> Result<BigInt> {
    debug_assert_eq!(kernel.q(), pair.q());
    let s = kernel.sum(pair.p());
    let w = witness_value(consts, idx, pair, &s, &BigInt::from(pair.p_inverse()));
    if !w.is_integer() {
        return Err(Error::NotAnInteger(format!(
            "witness for (i,j)=({},{}), (p,q)=({},{}) is {w}",
            idx.i(),
            idx.j(),
            pair.p(),
            pair.q()
        )));
    }
    Ok(w.to_integer())
}

/// `R(i,j) q^{N-2} s_ij(p,q) - α_N r_N (C(N-1,i) p'^i + C(N-1,j) p^j)/q`,
/// which must be an integer. `p'` is taken in `[1, q)`.
pub fn integrality_witness(idx: SumIndex, pair: CoprimePair) -> Result<BigInt> {
    let consts = constants_for(idx.degree())?;
    check_pair_nontrivial(pair)?;
    integrality_witness_with(&consts, &DedekindKernel::new(idx, pair.q()), idx, pair)
}

/// `(N! β_N r_N Td^N_pq - α_N r_N (x+py)^{N-1} x - α_N r_N ((-1)^{n-1} q_{n-1} x + y)^{N-1} y) / q`,
/// which must have integer coefficients.
#[allow(non_snake_case)]
pub fn toddN_congruence_residual(p: i64, q: i64, n: u32) -> Result<BivariatePoly> {
    let consts = constants_for(n)?;
    let cf = continued_fraction(q, p)?;
    if p == 0 {
        return Err(Error::OutOfRange("q = 1: the statement is vacuous".into()));
    }
    let len = cf.len() as isize;
    let (_, q_prev) = cf.convergent(len - 1);
    let sign = if (len - 1) % 2 == 0 { 1 } else { -1 };
    let ar = BigRational::from_integer(&consts.alpha * &consts.r);
    let lead = BigRational::from_integer(factorial(n) * &consts.beta * &consts.r);

    let td = todd_homogeneous_lattice(p, q, n)?;
    let first = LinearForm::from_ints(1, p).expect("nonzero").to_poly().pow(n - 1).shift(1, 0);
    let last = LinearForm::from_ints(sign * q_prev, 1).expect("nonzero").to_poly().pow(n - 1).shift(0, 1);
    let total = td.scale(&lead) - (first + last).scale(&ar);
    let residual = total.scale(&BigRational::new(BigInt::one(), BigInt::from(q)));
    if let Some(((i, j), c)) = residual.terms().find(|(_, c)| !c.is_integer()) {
        return Err(Error::NotDivisible(format!("x^{i} y^{j}: {}", c * BigRational::from_integer(q.into())), q as u64));
    }
    Ok(residual)
}

/// Rademacher's classical statement `12 s(p,q) - (p + p')/q ∈ Z`, returned as a rational.
pub fn rademacher_witness(pair: CoprimePair) -> ExactRational {
    let s = crate::dedekind::dedekind_sum_classical(pair);
    let q = BigInt::from(pair.q());
    s * BigRational::from_integer(12.into()) - BigRational::new(BigInt::from(pair.p() + pair.p_inverse()), q)
}
