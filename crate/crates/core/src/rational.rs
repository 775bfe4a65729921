//! Arbitrary-precision exact fractions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A fraction kept in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Self {
        let den = denominator.into();
        assert!(!den.is_zero(), "zero denominator");
        ExactRational(BigRational::new(numerator.into(), den))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.to_integer().and_then(|n| n.to_u64())
    }

    pub fn recip(&self) -> Self {
        ExactRational(self.0.recip())
    }

    /// `(numerator, denominator)` when both fit in `i128`.
    pub fn to_i128_parts(&self) -> Option<(i128, i128)> {
        Some((self.0.numer().to_i128()?, self.0.denom().to_i128()?))
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }
}

impl From<u64> for ExactRational {
    fn from(n: u64) -> Self {
        ExactRational::from_integer(n)
    }
}

impl From<i64> for ExactRational {
    fn from(n: i64) -> Self {
        ExactRational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($tr::$method(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational($tr::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl PartialEq<u64> for ExactRational {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}

impl PartialOrd<u64> for ExactRational {
    fn partial_cmp(&self, other: &u64) -> Option<Ordering> {
        self.0
            .partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[derive(Serialize, Deserialize)]
struct RationalParts {
    numerator: i128,
    denominator: i128,
}

// Machine formats carry numerator and denominator as separate integers.
impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (numerator, denominator) = self
            .to_i128_parts()
            .ok_or_else(|| serde::ser::Error::custom("rational exceeds 128-bit range"))?;
        RationalParts {
            numerator,
            denominator,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = RationalParts::deserialize(d)?;
        if parts.denominator <= 0 {
            return Err(D::Error::custom("denominator must be positive"));
        }
        let r = ExactRational::new(parts.numerator, parts.denominator);
        if r.to_i128_parts() != Some((parts.numerator, parts.denominator)) {
            return Err(D::Error::custom("rational not in lowest terms"));
        }
        Ok(r)
    }
}
