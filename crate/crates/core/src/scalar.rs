//! Exact rational scalars and the small field abstraction shared by the
//! coefficient table.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Scalar = BigRational;

/// Field operations needed to evaluate Gelfand-Tsetlin coefficients.
///
/// Implemented by [`Scalar`] for numeric evaluation and by
/// [`RatFunc`](crate::ratfunc::RatFunc) for symbolic evaluation in the
/// row-two entries.
pub trait Field:
    Clone
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_scalar(s: &Scalar) -> Self;

    fn from_int(i: i64) -> Self {
        Self::from_scalar(&int(i))
    }
}

impl Field for Scalar {
    fn from_scalar(s: &Scalar) -> Self {
        s.clone()
    }
}

/// Integer as a scalar.
pub fn int(i: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(i))
}

/// `p/q` as a scalar. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Exact division reporting division by zero as an error.
pub fn checked_div(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    if b.is_zero() {
        Err(Error::DivisionByZero)
    } else {
        Ok(a / b)
    }
}

/// Parses `p/q`, `-p/q` or an integer literal.
pub fn parse(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid scalar `{s}`"));
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Scalar::new(p, q))
}

/// Canonical text form: `p/q` or `p` for integers.
pub fn format(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// `Some(i)` when `s` is an integer fitting in `i64`.
pub fn as_int(s: &Scalar) -> Option<i64> {
    if s.is_integer() {
        s.numer().to_i64()
    } else {
        None
    }
}

pub fn is_int(s: &Scalar) -> bool {
    s.is_integer()
}

/// Integer square root of a nonnegative rational square, if it is one.
pub fn sqrt_exact(s: &Scalar) -> Option<Scalar> {
    if s.is_negative() {
        return None;
    }
    let rp = s.numer().sqrt();
    let rq = s.denom().sqrt();
    if &rp * &rp == *s.numer() && &rq * &rq == *s.denom() {
        Some(Scalar::new(rp, rq))
    } else {
        None
    }
}

/// Least common multiple of the denominators, useful for test generators.
pub fn denom_lcm<'a>(it: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, s| acc.lcm(s.denom()))
}
