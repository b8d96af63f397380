//! Classical and generalized Kloosterman sums
//!
//! ```text
//! K_ij(k, l, q) = sum_{0<p<q, (p,q)=1} e((k p'^i + l p^j) / q),   e(t) = exp(2πi t)
//! ```
//!
//! Exponents are reduced modulo `q` in exact integer arithmetic; each term
//! costs one `sin_cos` of an angle already in `[0, 2π)`. Terms are added with
//! Neumaier compensation, in fixed-size blocks combined in ascending order,
//! so results do not depend on the thread count.
//!
//! The fast path factors `q`, multiplies twisted prime-power sums
//! (`K(k,l,q1 q2) = K(q2* k, q2* l, q1) K(q1* k, q1* l, q2)` with
//! `q2 q2* ≡ 1 mod q1` and `q1 q1* ≡ 1 mod q2`), pulls common `p`-powers out
//! of `(k, l)`, and evaluates odd prime powers `p^α`, `α >= 2`, by stationary
//! phase over the critical points `i k x^{i+j} ≡ j l (mod p^β)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{euler_phi, factorize, frac_part, gcd, mod_inverse, mul_mod, pow_mod_u64, reduce, ExactRational};
use crate::dedekind::{CoprimePair, DedekindKernel, SumIndex};
use crate::error::{Error, Result};
use crate::integrality::{constants_for, IntegralityConstants};

pub type ComplexValue = Complex64;

/// Terms per block in the brute-force sums.
pub const BLOCK: u64 = 4096;

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let (s, c) = *acc;
    let t = s + x;
    let err = if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
    *acc = (t, c + err);
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for z in iter {
            s.add(z);
        }
        s
    }
}

/// `e(a/q)` for `0 <= a < q`.
pub fn unit_root(a: u64, q: u64) -> Complex64 {
    debug_assert!(a < q);
    let (s, c) = (std::f64::consts::TAU * (a as f64 / q as f64)).sin_cos();
    Complex64::new(c, s)
}

/// `e(x)` of an exact rational, reducing `x` mod 1 first.
pub fn unit_root_rational(x: &ExactRational) -> Complex64 {
    let f = frac_part(x);
    match (f.numer().to_u64(), f.denom().to_u64()) {
        (Some(a), Some(q)) => unit_root(a, q),
        _ => {
            let t = f.numer().to_f64().unwrap_or(0.0) / f.denom().to_f64().unwrap_or(1.0);
            let (s, c) = (std::f64::consts::TAU * t).sin_cos();
            Complex64::new(c, s)
        }
    }
}

/// Parameters of `K_ij(k, l, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KloostermanSpec {
    pub i: u32,
    pub j: u32,
    pub k: i64,
    pub l: i64,
    pub q: u64,
}

impl KloostermanSpec {
    pub fn new(i: u32, j: u32, k: i64, l: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::OutOfRange("q must be positive".into()));
        }
        if i == 0 || j == 0 {
            return Err(Error::OutOfRange(format!("indices ({i}, {j}) must be >= 1")));
        }
        Ok(KloostermanSpec { i, j, k, l, q })
    }
}

/// Sums `term(x)` over units `x` of `Z/q` in fixed blocks; large ranges are
/// split across the rayon pool. `q = 1` counts the single unit `0`.
fn unit_block_sum<F>(q: u64, term: F) -> Complex64
where
    F: Fn(u64) -> Complex64 + Sync,
{
    if q == 1 {
        return term(0);
    }
    let blocks = q.div_ceil(BLOCK);
    let block = |b: u64| -> CompensatedSum {
        let lo = (b * BLOCK).max(1);
        let hi = ((b + 1) * BLOCK).min(q);
        (lo..hi).filter(|&x| x.gcd(&q) == 1).map(&term).collect()
    };
    let partials: Vec<CompensatedSum> =
        if blocks > 1 { (0..blocks).into_par_iter().map(block).collect() } else { vec![block(0)] };
    partials.iter().map(|s| s.value()).collect::<CompensatedSum>().value()
}

fn inv_unchecked(x: u64, q: u64) -> u64 {
    mod_inverse(x as i64, q).expect("unit").value()
}

/// `sum_{x unit mod q} e((k x^{-i} + l x^j)/q)`, with one term at `q = 1`.
fn unit_sum(i: u32, j: u32, k: i64, l: i64, q: u64) -> Complex64 {
    let (kr, lr) = (reduce(k, q), reduce(l, q));
    unit_block_sum(q, |x| {
        if q == 1 {
            return Complex64::new(1.0, 0.0);
        }
        let xi = inv_unchecked(x, q);
        let a = (mul_mod(kr, pow_mod_u64(xi, i as u64, q), q) + mul_mod(lr, pow_mod_u64(x, j as u64, q), q)) % q;
        unit_root(a, q)
    })
}

/// Classical `K(k, l, q) = sum_{x in (Z/q)^*} e((k x + l x^{-1})/q)`.
///
/// At `q = 1` the unit group is `{0}` and the sum is `1`.
pub fn kloosterman_classical(k: i64, l: i64, q: u64) -> Complex64 {
    assert!(q >= 1);
    let (kr, lr) = (reduce(k, q), reduce(l, q));
    unit_block_sum(q, |x| {
        if q == 1 {
            return Complex64::new(1.0, 0.0);
        }
        let a = (mul_mod(kr, x, q) + mul_mod(lr, inv_unchecked(x, q), q)) % q;
        unit_root(a, q)
    })
}

/// `K_ij(k, l, q)` by direct summation over `0 < p < q`; empty (zero) at `q = 1`.
pub fn gen_kloosterman_brute(spec: KloostermanSpec) -> Complex64 {
    if spec.q == 1 {
        return Complex64::zero();
    }
    unit_sum(spec.i, spec.j, spec.k, spec.l, spec.q)
}

fn valuation(x: u64, p: u64) -> u32 {
    if x == 0 {
        return u32::MAX;
    }
    let (mut x, mut v) = (x, 0);
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// `y^e mod m` for a unit `y` and signed `e`.
fn pow_signed(y: u64, e: i64, m: u64, y_inv: u64) -> u64 {
    if e >= 0 {
        pow_mod_u64(y, e as u64, m)
    } else {
        pow_mod_u64(y_inv, e.unsigned_abs(), m)
    }
}

/// Unit sum over `Z/p^α` (`α >= 1`).
fn prime_power_sum(i: u32, j: u32, k: u64, l: u64, p: u64, alpha: u32) -> Complex64 {
    let q = p.pow(alpha);
    let (k, l) = (k % q, l % q);
    let beta = valuation(k, p).min(valuation(l, p));
    if beta >= alpha {
        return Complex64::new(euler_phi(q) as f64, 0.0);
    }
    if beta >= 1 {
        let pb = p.pow(beta);
        return prime_power_sum(i, j, k / pb, l / pb, p, alpha - beta) * pb as f64;
    }
    if p == 2 || alpha == 1 {
        return unit_sum(i, j, k as i64, l as i64, q);
    }
    stationary_phase(i, j, k, l, p, alpha)
}

/// `p^β sum_{x crit} e(f(x)/p^α) [G_p(x)]` with `f(x) = k x^i + l x^{-j}` and
/// `β = floor(α/2)`; the Gauss-type factor `G_p` only for odd `α`.
fn stationary_phase(i: u32, j: u32, k: u64, l: u64, p: u64, alpha: u32) -> Complex64 {
    let q = p.pow(alpha);
    let beta = alpha / 2;
    let pb = p.pow(beta);
    let (ii, jj) = (i as u64 % q, j as u64 % q);
    let mut acc = CompensatedSum::new();
    for y in 1..pb {
        if y % p == 0 {
            continue;
        }
        let y_inv = inv_unchecked(y, q);
        // f'(y) = i k y^{i-1} - j l y^{-j-1}
        let d1 = mul_mod(mul_mod(ii, k, q), pow_signed(y, i as i64 - 1, q, y_inv), q);
        let d2 = mul_mod(mul_mod(jj, l, q), pow_signed(y, -(j as i64) - 1, q, y_inv), q);
        let fp = (d1 + q - d2) % q;
        if fp % pb != 0 {
            continue;
        }
        let f = (mul_mod(k, pow_mod_u64(y, i as u64, q), q) + mul_mod(l, pow_signed(y, -(j as i64), q, y_inv), q)) % q;
        let mut term = unit_root(f, q);
        if alpha % 2 == 1 {
            // d = f''/2 = k C(i,2) y^{i-2} + l C(j+1,2) y^{-j-2}, h = f'/p^β, both mod p
            let ci = (i as u64 * (i as u64 - 1) / 2) % p;
            let cj = ((j as u64 + 1) * j as u64 / 2) % p;
            let y_inv_p = y_inv % p;
            let d = (mul_mod(mul_mod(k % p, ci, p), pow_signed(y % p, i as i64 - 2, p, y_inv_p), p)
                + mul_mod(mul_mod(l % p, cj, p), pow_signed(y % p, -(j as i64) - 2, p, y_inv_p), p))
                % p;
            let h = (fp / pb) % p;
            let gauss: CompensatedSum = (0..p).map(|z| unit_root((mul_mod(d, z * z % p, p) + h * z) % p, p)).collect();
            term *= gauss.value();
        }
        acc.add(term);
    }
    acc.value() * pb as f64
}

/// `K_ij(k, l, q)` via twisted CRT, `p`-power extraction and stationary phase.
/// Agrees with [`gen_kloosterman_brute`], including `0` at `q = 1`.
pub fn gen_kloosterman_fast(spec: KloostermanSpec) -> Complex64 {
    let q = spec.q;
    if q == 1 {
        return Complex64::zero();
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for (p, alpha) in factorize(q) {
        let qt = p.pow(alpha);
        let twist = inv_unchecked((q / qt) % qt, qt);
        let k = mul_mod(reduce(spec.k, qt), twist, qt);
        let l = mul_mod(reduce(spec.l, qt), twist, qt);
        prod *= prime_power_sum(spec.i, spec.j, k, l, p, alpha);
    }
    prod
}

/// Picks the fast path for large moduli.
pub fn gen_kloosterman(spec: KloostermanSpec) -> Complex64 {
    if spec.q > 64 {
        gen_kloosterman_fast(spec)
    } else {
        gen_kloosterman_brute(spec)
    }
}

/// Number of distinct prime factors; `ω(1) = 0`.
pub fn omega(q: u64) -> u32 {
    factorize(q).len() as u32
}

/// `ij (i+j)^{3/2}`.
fn shape_constant(i: u32, j: u32) -> f64 {
    let (i, j) = (i as f64, j as f64);
    i * j * (i + j).powf(1.5)
}

/// `(ij (i+j)^{3/2} sqrt(gcd(k,l)))^{ω(q)} sqrt(q)`.
pub fn weil_bound(spec: KloostermanSpec) -> Result<f64> {
    if spec.k == 0 && spec.l == 0 {
        return Err(Error::ZeroPair);
    }
    let g = gcd(spec.k, spec.l) as f64;
    Ok((shape_constant(spec.i, spec.j) * g.sqrt()).powi(omega(spec.q) as i32) * (spec.q as f64).sqrt())
}

/// `ij (i+j)^{3/2} gcd(k, l, q)^{1/2} q^{1/2}` for a prime power `q`.
pub fn prime_power_bound(spec: KloostermanSpec) -> f64 {
    let g = gcd(gcd(spec.k, spec.l), spec.q as i64) as f64;
    shape_constant(spec.i, spec.j) * g.sqrt() * (spec.q as f64).sqrt()
}

/// `(i + j) sqrt(p)` for a prime `p` not dividing `i, j, k, l`.
pub fn prime_bound(i: u32, j: u32, p: u64) -> f64 {
    (i + j) as f64 * (p as f64).sqrt()
}

fn check_even(idx: SumIndex) -> Result<IntegralityConstants> {
    constants_for(idx.degree())
}

/// The Kloosterman parameters `(α r C(N-1,i), α r C(N-1,j))` attached to `idx`, times `m`.
pub fn kloosterman_pair(consts: &IntegralityConstants, idx: SumIndex, m: i64) -> (BigInt, BigInt) {
    (consts.kloosterman_coeff(idx.i()) * m, consts.kloosterman_coeff(idx.j()) * m)
}

/// `<R q^{N-2} s_ij(p,q)>` against `<α r (C(N-1,i) p'^i + C(N-1,j) p^j)/q>`, exactly.
pub fn frac_identity_check(idx: SumIndex, pair: CoprimePair) -> Result<bool> {
    let consts = check_even(idx)?;
    let kernel = DedekindKernel::new(idx, pair.q());
    Ok(frac_identity_with(&consts, &kernel, idx, pair))
}

/// Both sides of the fractional identity, with a prepared kernel.
pub fn frac_identity_sides(
    consts: &IntegralityConstants,
    kernel: &DedekindKernel,
    idx: SumIndex,
    pair: CoprimePair,
) -> (ExactRational, ExactRational) {
    use num_rational::BigRational;
    let q = BigInt::from(pair.q());
    let s = kernel.sum(pair.p());
    let lhs = frac_part(
        &(BigRational::from_integer(consts.r_of(idx.i()) * num_traits::pow(q.clone(), (consts.n - 2) as usize)) * s),
    );
    let p_inv = BigInt::from(pair.p_inverse());
    let p = BigInt::from(pair.p());
    let rhs_num = consts.kloosterman_coeff(idx.i()) * num_traits::pow(p_inv, idx.i() as usize)
        + consts.kloosterman_coeff(idx.j()) * num_traits::pow(p, idx.j() as usize);
    let rhs = frac_part(&BigRational::new(rhs_num, q));
    (lhs, rhs)
}

pub fn frac_identity_with(
    consts: &IntegralityConstants,
    kernel: &DedekindKernel,
    idx: SumIndex,
    pair: CoprimePair,
) -> bool {
    let (lhs, rhs) = frac_identity_sides(consts, kernel, idx, pair);
    lhs == rhs
}

/// `(sum_p e(m R q^{N-2} s_ij(p,q)), K_ij(m α r C(N-1,i), m α r C(N-1,j), q))`.
pub fn weyl_kloosterman_aggregate(idx: SumIndex, m: i64, q: u64) -> Result<(Complex64, Complex64)> {
    let consts = check_even(idx)?;
    if m == 0 {
        return Err(Error::OutOfRange("harmonic m must be nonzero".into()));
    }
    if q < 2 {
        return Err(Error::OutOfRange("q must be at least 2".into()));
    }
    let kernel = DedekindKernel::new(idx, q);
    let norm = consts.r_of(idx.i()) * num_traits::pow(BigInt::from(q), (consts.n - 2) as usize) * m;
    let norm = num_rational::BigRational::from_integer(norm);
    let dedekind_side: CompensatedSum =
        (1..q).filter(|p| p.gcd(&q) == 1).map(|p| unit_root_rational(&(&norm * kernel.sum(p)))).collect();
    let (k, l) = kloosterman_pair(&consts, idx, m);
    let (k, l) = (reduce_big(&k, q), reduce_big(&l, q));
    let spec = KloostermanSpec::new(idx.i(), idx.j(), k as i64, l as i64, q)?;
    Ok((dedekind_side.value(), gen_kloosterman_brute(spec)))
}

/// `x mod q` in `[0, q)` for a big integer.
pub fn reduce_big(x: &BigInt, q: u64) -> u64 {
    x.mod_floor(&BigInt::from(q)).to_u64().expect("reduced below q")
}
