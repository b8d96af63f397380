use crate::arith::gcd;
use crate::error::{Error, Result};

use super::poly::LinearForm;

/// Positive continued fraction `q/p = [a_1; a_2, ..., a_n]` with its convergents.
///
/// Convergents are `(p_k, q_k)` for `k = -1..=n`, starting from `(1, 0)` and
/// `(0, 1)`, so that `(p_n, q_n) = (p, q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFractionData {
    p: i64,
    q: i64,
    a: Vec<i64>,
    convergents: Vec<(i64, i64)>,
}

impl ContinuedFractionData {
    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Partial quotients `a_1..a_n`.
    pub fn coefficients(&self) -> &[i64] {
        &self.a
    }

    /// `a_k` for `1 <= k <= n`.
    pub fn a(&self, k: usize) -> i64 {
        self.a[k - 1]
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `(p_k, q_k)` for `-1 <= k <= n`.
    pub fn convergent(&self, k: isize) -> (i64, i64) {
        self.convergents[(k + 1) as usize]
    }

    pub fn convergents(&self) -> &[(i64, i64)] {
        &self.convergents
    }
}

/// Euclidean expansion of `q/p` for coprime `0 < p < q`; `(q, p) = (1, 0)`
/// gives the empty expansion.
pub fn continued_fraction(q: i64, p: i64) -> Result<ContinuedFractionData> {
    if q < 1 || p < 0 {
        return Err(Error::OutOfRange(format!("need 0 <= p < q, got p = {p}, q = {q}")));
    }
    if gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    if p >= q {
        return Err(Error::OutOfRange(format!("need p < q, got p = {p}, q = {q}")));
    }
    let mut a = Vec::new();
    let (mut num, mut den) = (q, p);
    while den != 0 {
        a.push(num / den);
        (num, den) = (den, num % den);
    }
    let mut convergents = vec![(1, 0), (0, 1)];
    for &ak in &a {
        let (p1, q1) = convergents[convergents.len() - 2];
        let (p0, q0) = convergents[convergents.len() - 1];
        convergents.push((ak * p0 + p1, ak * q0 + q1));
    }
    debug_assert_eq!(*convergents.last().unwrap(), (p, q));
    Ok(ContinuedFractionData { p, q, a, convergents })
}

/// [`linear_forms_from_cf`] for the expansion of `q/p`.
pub fn linear_forms_m(p: i64, q: i64) -> Result<Vec<LinearForm>> {
    Ok(linear_forms_from_cf(&continued_fraction(q, p)?))
}

/// The forms `M_k = (-1)^k (q_k x + (p q_k - q p_k) y)` for `k = -1..=n`
/// (index `k + 1` in the returned vector). The endpoints come out as `q y`
/// and `(-1)^n q x`.
pub fn linear_forms_from_cf(cf: &ContinuedFractionData) -> Vec<LinearForm> {
    let (p, q) = (cf.p, cf.q);
    (-1..=cf.len() as isize)
        .map(|k| {
            let (pk, qk) = cf.convergent(k);
            let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
            LinearForm::from_ints(sign * qk, sign * (p * qk - q * pk)).expect("convergents are nonzero")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn expansions() {
        let cf = continued_fraction(7, 5).unwrap();
        assert_eq!(cf.coefficients(), &[1, 2, 2]);
        assert_eq!(cf.convergents(), &[(1, 0), (0, 1), (1, 1), (2, 3), (5, 7)]);
        let cf = continued_fraction(3, 1).unwrap();
        assert_eq!(cf.coefficients(), &[3]);
        assert_eq!(cf.convergents(), &[(1, 0), (0, 1), (1, 3)]);
        assert_eq!(continued_fraction(2, 1).unwrap().coefficients(), &[2]);
        let cf = continued_fraction(1, 0).unwrap();
        assert!(cf.is_empty());
        assert_eq!(cf.convergents(), &[(1, 0), (0, 1)]);
    }

    #[test]
    fn expansion_errors() {
        assert_eq!(continued_fraction(6, 4), Err(Error::NotCoprime { p: 4, q: 6 }));
        assert!(matches!(continued_fraction(5, 7), Err(Error::OutOfRange(_))));
        assert!(matches!(continued_fraction(5, 0), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn forms_for_five_sevenths() {
        let m = linear_forms_m(5, 7).unwrap();
        let expect = [(0, 7), (1, 5), (-1, 2), (3, 1), (-7, 0)];
        for (form, (cx, cy)) in m.iter().zip(expect) {
            assert_eq!((form.cx(), form.cy()), (&int(cx), &int(cy)));
        }
        // M_0 - M_2 = a_2 M_1
        assert_eq!(m[1].minus(&m[3]).unwrap(), m[2].scale(&int(2)).unwrap());
    }

    #[test]
    fn forms_for_one_half() {
        let m = linear_forms_m(1, 2).unwrap();
        let got: Vec<_> = m.iter().map(|f| f.to_string()).collect();
        assert_eq!(got, ["2*y", "x + y", "-2*x"]);
    }
}
