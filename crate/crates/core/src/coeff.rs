//! Exact coefficient domains.
//!
//! Every polynomial in the crate is generic over [`Coefficient`]. The two
//! supported domains are the integers ([`BigInt`]) and the rationals
//! ([`BigRational`]); the aliases at the crate root pick one of them.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The coefficient domain tag used by spec files and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Domain {
    #[serde(rename = "ZZ")]
    Integers,
    #[serde(rename = "QQ")]
    Rationals,
}

impl Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Domain::Integers => write!(f, "ZZ"),
            Domain::Rationals => write!(f, "QQ"),
        }
    }
}

/// An exact commutative coefficient ring.
pub trait Coefficient:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
    + Send
    + Sync
    + 'static
{
    const DOMAIN: Domain;

    /// Multiplicative inverse when `self` is a unit of the ring.
    fn unit_inverse(&self) -> Option<Self>;

    fn is_unit(&self) -> bool {
        self.unit_inverse().is_some()
    }

    fn from_bigint(value: BigInt) -> Self;

    fn from_i64(value: i64) -> Self {
        Self::from_bigint(BigInt::from(value))
    }

    /// Embedding into the rationals, used by the linear-algebra oracle.
    fn to_rational(&self) -> BigRational;
}

impl Coefficient for BigInt {
    const DOMAIN: Domain = Domain::Integers;

    fn unit_inverse(&self) -> Option<Self> {
        if self.abs().is_one() {
            Some(self.clone())
        } else {
            None
        }
    }

    fn from_bigint(value: BigInt) -> Self {
        value
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }
}

impl Coefficient for BigRational {
    const DOMAIN: Domain = Domain::Rationals;

    fn unit_inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_bigint(value: BigInt) -> Self {
        BigRational::from_integer(value)
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }
}
