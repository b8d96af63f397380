use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::ExactRational;

/// Sparse polynomial in `x, y` with exact rational coefficients.
///
/// Keys are exponent pairs `(i, j)` for `x^i y^j`; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), ExactRational>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(ExactRational::one(), 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(ExactRational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(ExactRational::one(), 0, 1)
    }

    pub fn monomial(c: ExactRational, i: u32, j: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `x^i y^j`.
    pub fn coeff(&self, i: u32, j: u32) -> ExactRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ExactRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: ExactRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(ExactRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BivariatePoly { terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect() }
    }

    /// Multiplies by `x^a y^b`.
    pub fn shift(&self, a: u32, b: u32) -> Self {
        BivariatePoly { terms: self.terms.iter().map(|(&(i, j), v)| ((i + a, j + b), v.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Largest total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// `self(fx, fy)`: substitutes linear forms for both variables.
    pub fn compose_linear(&self, fx: &LinearForm, fy: &LinearForm) -> Self {
        let px = fx.to_poly();
        let py = fy.to_poly();
        let max_i = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let pows_x = powers(&px, max_i);
        let pows_y = powers(&py, max_j);
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            out = out + (&pows_x[i as usize] * &pows_y[j as usize]).scale(c);
        }
        out
    }
}

/// `[1, p, p^2, ..., p^max]`.
pub(crate) fn powers(p: &BivariatePoly, max: u32) -> Vec<BivariatePoly> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(BivariatePoly::one());
    for e in 1..=max as usize {
        let next = &out[e - 1] * p;
        out.push(next);
    }
    out
}

impl Add for BivariatePoly {
    type Output = BivariatePoly;
    fn add(mut self, rhs: BivariatePoly) -> BivariatePoly {
        for ((i, j), c) in rhs.terms {
            self.add_term(i, j, c);
        }
        self
    }
}

impl Sub for BivariatePoly {
    type Output = BivariatePoly;
    fn sub(self, rhs: BivariatePoly) -> BivariatePoly {
        self + (-rhs)
    }
}

impl Neg for BivariatePoly {
    type Output = BivariatePoly;
    fn neg(self) -> BivariatePoly {
        BivariatePoly { terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect() }
    }
}

impl Mul for &BivariatePoly {
    type Output = BivariatePoly;
    fn mul(self, rhs: &BivariatePoly) -> BivariatePoly {
        let mut out = BivariatePoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for BivariatePoly {
    /// Terms in descending powers of `x`, e.g. `1/12*x^2 + 5/4*x*y + 1/12*y^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let mut factors = Vec::new();
            if !abs.is_one() || (i == 0 && j == 0) {
                factors.push(abs.to_string());
            }
            for (var, e) in [("x", i), ("y", j)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// `c_x x + c_y y`, not both coefficients zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    cx: ExactRational,
    cy: ExactRational,
}

impl LinearForm {
    pub fn new(cx: ExactRational, cy: ExactRational) -> Option<Self> {
        if cx.is_zero() && cy.is_zero() {
            None
        } else {
            Some(LinearForm { cx, cy })
        }
    }

    pub fn from_ints(cx: i64, cy: i64) -> Option<Self> {
        Self::new(BigRational::from_integer(cx.into()), BigRational::from_integer(cy.into()))
    }

    pub fn cx(&self) -> &ExactRational {
        &self.cx
    }

    pub fn cy(&self) -> &ExactRational {
        &self.cy
    }

    pub fn scale(&self, c: &ExactRational) -> Option<Self> {
        Self::new(&self.cx * c, &self.cy * c)
    }

    pub fn to_poly(&self) -> BivariatePoly {
        let mut p = BivariatePoly::zero();
        p.add_term(1, 0, self.cx.clone());
        p.add_term(0, 1, self.cy.clone());
        p
    }

    /// Coefficientwise `self - other`; `None` when the difference vanishes.
    pub fn minus(&self, other: &LinearForm) -> Option<LinearForm> {
        Self::new(&self.cx - &other.cx, &self.cy - &other.cy)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}
