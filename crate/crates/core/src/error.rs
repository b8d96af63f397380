use thiserror::Error;

/// Errors raised by the library operations.
///
/// `NotAnInteger` and `NotDivisible` are not input errors: they report a
/// falsified instance of an integrality theorem and should never fire.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{a} is not invertible modulo {q}")]
    NonInvertible { a: i64, q: u64 },
    #[error("gcd({p}, {q}) != 1")]
    NotCoprime { p: i64, q: i64 },
    #[error("matrix ({a} {b}; {c} {d}) has determinant {det}, expected 1")]
    NotUnimodular { a: i64, b: i64, c: i64, d: i64, det: i64 },
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("odd degree {0}: only even degrees are supported")]
    OddDegree(u32),
    #[error("degenerate cone: determinant {0} is not positive")]
    DegenerateCone(i64),
    #[error("vector ({0}, {1}) lies outside the closed right half-plane")]
    OutsideHalfPlane(i64, i64),
    #[error("vector ({0}, {1}) is not primitive")]
    NotPrimitive(i64, i64),
    #[error("index sum {0} is odd")]
    OddN(u32),
    #[error("integrality violated: {0} is not an integer")]
    NotAnInteger(String),
    #[error("congruence violated: coefficient {0} is not divisible by {1}")]
    NotDivisible(String, u64),
    #[error("k = l = 0: the bound does not apply")]
    ZeroPair,
    #[error("no coprime pairs below x_max = {0}")]
    EmptyRange(u64),
    #[error("empty sample")]
    EmptySample,
}

pub type Result<T> = std::result::Result<T, Error>;
