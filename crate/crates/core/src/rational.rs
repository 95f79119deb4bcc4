//! Exact rational scalars and their string form.
//!
//! Literals are `"n"` or `"p/q"` with `q > 0`; output is always gcd-reduced.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

pub fn parse(text: &str) -> Result<Scalar> {
    let bad = || Error::Parse(format!("invalid rational literal {text:?}"));
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), Some(q.trim())),
        None => (text, None),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    match den {
        None => Ok(BigRational::from_integer(num)),
        Some(q) => {
            let den: BigInt = q.parse().map_err(|_| bad())?;
            if !den.is_positive() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
    }
}

pub fn format(value: &Scalar) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Multiplies a row of rationals by the lcm of its denominators.
pub(crate) fn clear_denominators(row: &[Scalar]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect()
}
