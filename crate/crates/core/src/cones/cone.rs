use num_rational::BigRational;

use crate::arith::{ext_gcd, gcd, int};
use crate::dedekind::ModularMatrix;
use crate::error::{Error, Result};

use super::poly::{BivariatePoly, LinearForm};
use super::todd::todd_homogeneous_lattice;

pub type Vec2 = (i64, i64);

pub fn det(v1: Vec2, v2: Vec2) -> i64 {
    v1.0 * v2.1 - v1.1 * v2.0
}

fn check_vector(v: Vec2) -> Result<()> {
    if gcd(v.0, v.1) != 1 {
        return Err(Error::NotPrimitive(v.0, v.1));
    }
    if v.0 < 0 {
        return Err(Error::OutsideHalfPlane(v.0, v.1));
    }
    Ok(())
}

/// Oriented cone `σ(v1, v2)` on primitive vectors of the closed right
/// half-plane with `det(v1 | v2) > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeCone {
    v1: Vec2,
    v2: Vec2,
}

impl LatticeCone {
    pub fn new(v1: Vec2, v2: Vec2) -> Result<Self> {
        check_vector(v1)?;
        check_vector(v2)?;
        let d = det(v1, v2);
        if d <= 0 {
            return Err(Error::DegenerateCone(d));
        }
        Ok(LatticeCone { v1, v2 })
    }

    pub fn v1(&self) -> Vec2 {
        self.v1
    }

    pub fn v2(&self) -> Vec2 {
        self.v2
    }

    /// `det(v1 | v2)`, the order of `Z^2 / (Z v1 + Z v2)`.
    pub fn det(&self) -> i64 {
        det(self.v1, self.v2)
    }
}

/// Normal form `σ((1,0), (p,q))` of a cone, with the change of basis `U`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonicalCone {
    pub p: i64,
    pub q: i64,
    pub u: ModularMatrix,
}

pub fn apply(u: &ModularMatrix, v: Vec2) -> Vec2 {
    (u.a * v.0 + u.b * v.1, u.c * v.0 + u.d * v.1)
}

/// Finds `U` in SL2(Z) with `U v1 = (1, 0)` and `U v2 = (p, q)`, `0 <= p < q`.
pub fn canonicalize_cone(cone: &LatticeCone) -> CanonicalCone {
    let (a, b) = cone.v1;
    let (g, s, t) = ext_gcd(a, b);
    debug_assert_eq!(g, 1);
    // rows (s, t) and (-b, a): det = sa + tb = 1
    let (r1, r2) = ((s, t), (-b, a));
    let (c, e) = cone.v2;
    let q = r2.0 * c + r2.1 * e;
    let p0 = r1.0 * c + r1.1 * e;
    let shift = p0.div_euclid(q);
    // [[1, -shift], [0, 1]] fixes (1, 0) and moves p0 into [0, q)
    let u =
        ModularMatrix::new(r1.0 - shift * r2.0, r1.1 - shift * r2.1, r2.0, r2.1).expect("unimodular by construction");
    CanonicalCone { p: p0 - shift * q, q, u }
}

/// `l_v = v_y x - v_x y`, the primitive form vanishing on `v`.
pub fn orthogonal_form(v: Vec2) -> LinearForm {
    LinearForm::from_ints(v.1, -v.0).expect("primitive vectors are nonzero")
}

/// Degree `n - 2` part of the Todd cocycle `Φ(σ) = S_σ(A_σ^{-1}(x, y))`,
/// held as `numerator / (l_{v1} l_{v2})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocyclePart {
    pub numerator: BivariatePoly,
    pub denominator: (LinearForm, LinearForm),
}

/// With `d = det σ` and `A_σ^{-1}(x, y) = (l_{v2}/d, -l_{v1}/d)`, the part is
/// `-d Td^n_σ(l_{v2}/d, -l_{v1}/d) / (l_{v1} l_{v2})`; `Td_σ` is read off the
/// normal form by SL2(Z) invariance.
pub fn cocycle_part(cone: &LatticeCone, n: u32) -> Result<CocyclePart> {
    let canon = canonicalize_cone(cone);
    let td = todd_homogeneous_lattice(canon.p, canon.q, n)?;
    let d = int(cone.det());
    let inv_d = BigRational::new(1.into(), cone.det().into());
    let (l1, l2) = (orthogonal_form(cone.v1), orthogonal_form(cone.v2));
    let fx = l2.scale(&inv_d).expect("nonzero");
    let fy = l1.scale(&(-inv_d)).expect("nonzero");
    let numerator = td.compose_linear(&fx, &fy).scale(&(-d));
    Ok(CocyclePart { numerator, denominator: (l1, l2) })
}

/// `l1 l2 l3 [Φ_N(σ(v1,v3)) - Φ_N(σ(v1,v2)) - Φ_N(σ(v2,v3))]`, zero exactly
/// when the cocycle identity holds in degree `n`.
pub fn cocycle_residual(v1: Vec2, v2: Vec2, v3: Vec2, n: u32) -> Result<BivariatePoly> {
    if n % 2 == 1 {
        return Err(Error::OddDegree(n));
    }
    if n == 0 {
        return Err(Error::OutOfRange("degree must be at least 2".into()));
    }
    let outer = LatticeCone::new(v1, v3)?;
    let left = LatticeCone::new(v1, v2)?;
    let right = LatticeCone::new(v2, v3)?;
    let ell = |v: Vec2| orthogonal_form(v).to_poly();
    let term = |cone: &LatticeCone| -> Result<BivariatePoly> { Ok(cocycle_part(cone, n)?.numerator) };
    Ok(&ell(v2) * &term(&outer)? - &ell(v3) * &term(&left)? - &ell(v1) * &term(&right)?)
}
