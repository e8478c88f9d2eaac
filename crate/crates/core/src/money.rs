//! Exact profit values.
//!
//! Every profit quantity in the crate (edge weights once widened, cover values,
//! imputations, coalition worths) is a [`Money`]: an arbitrary-precision
//! rational kept in lowest terms. There is no floating point anywhere.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid fraction `{0}`: expected `a` or `a/b` with b > 0")]
pub struct ParseMoneyError(pub String);

/// Exact rational monetary value, always reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Money(BigRational);

impl Money {
    pub fn zero() -> Self {
        Money(BigRational::zero())
    }

    pub fn one() -> Self {
        Money(BigRational::one())
    }

    pub fn from_int<T: Into<BigInt>>(value: T) -> Self {
        Money(BigRational::from_integer(value.into()))
    }

    /// `numer / denom`, reduced. Panics if `denom` is zero.
    pub fn ratio<N: Into<BigInt>, D: Into<BigInt>>(numer: N, denom: D) -> Self {
        Money(BigRational::new(numer.into(), denom.into()))
    }

    /// Half of an integer, the natural unit of the doubled graph.
    pub fn halves<T: Into<BigInt>>(half_units: T) -> Self {
        Self::ratio(half_units, 2)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Money {
    fn from(r: BigRational) -> Self {
        Money(r)
    }
}

impl From<u64> for Money {
    fn from(v: u64) -> Self {
        Money::from_int(v)
    }
}

impl From<i64> for Money {
    fn from(v: i64) -> Self {
        Money::from_int(v)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Money {
    type Err = ParseMoneyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseMoneyError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let numer: BigInt = n.parse().map_err(|_| err())?;
        let denom: BigInt = d.parse().map_err(|_| err())?;
        if !denom.is_positive() {
            return Err(err());
        }
        Ok(Money::ratio(numer, denom))
    }
}

impl Serialize for Money {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Money {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Money> for Money {
            type Output = Money;
            fn $method(self, rhs: Money) -> Money {
                Money($tr::$method(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a Money> for Money {
            type Output = Money;
            fn $method(self, rhs: &'a Money) -> Money {
                Money($tr::$method(self.0, &rhs.0))
            }
        }
        impl<'a> $tr<&'a Money> for &'a Money {
            type Output = Money;
            fn $method(self, rhs: &'a Money) -> Money {
                Money($tr::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Money> for Money {
    fn add_assign(&mut self, rhs: &Money) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Money> for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Money> for Money {
    fn sum<I: Iterator<Item = &'a Money>>(iter: I) -> Money {
        iter.fold(Money::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}
