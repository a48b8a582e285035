//! Exact coefficient rings: arbitrary-precision integers and rationals.

use std::fmt::Debug;
use std::ops::{AddAssign, Mul, Neg, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_bigint(v: BigInt) -> Self;
    fn to_rational(&self) -> BigRational;
    /// Canonical decimal text: `"-12"` for integers, `"3/4"` or `"5"` for rationals.
    fn to_decimal(&self) -> String;
    fn parse_decimal(s: &str) -> Option<Self>;
    /// `self / d` when the quotient is exact in this ring.
    fn div_exact(&self, d: &BigInt) -> Option<Self>;
}

impl Coeff for BigInt {
    fn from_bigint(v: BigInt) -> Self {
        v
    }
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }
    fn to_decimal(&self) -> String {
        self.to_string()
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        s.parse().ok()
    }
    fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }
}

impl Coeff for BigRational {
    fn from_bigint(v: BigInt) -> Self {
        BigRational::from_integer(v)
    }
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
    fn to_decimal(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
    fn parse_decimal(s: &str) -> Option<Self> {
        match s.split_once('/') {
            None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
            Some((n, d)) => {
                let d: BigInt = d.parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n.parse().ok()?, d))
            }
        }
    }
    fn div_exact(&self, d: &BigInt) -> Option<Self> {
        (!d.is_zero()).then(|| self / BigRational::from_integer(d.clone()))
    }
}

/// Returns the integer value of `r`, or `None` if it has a denominator.
pub fn as_integer(r: &BigRational) -> Option<BigInt> {
    r.is_integer().then(|| r.numer().clone())
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn is_one<C: Coeff>(c: &C) -> bool {
    *c == C::one()
}
