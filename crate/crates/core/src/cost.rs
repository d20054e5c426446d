//! Extended nonnegative cost arithmetic: finite energy values plus an
//! absorbing `Infinite` element.
//!
//! All solver arithmetic is exact integer arithmetic. `Infinite` is a real
//! enum variant, never a numeric sentinel, so equality tests against it are
//! exact. Addition saturates: `x + Infinite = Infinite`.

use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// A nonnegative integer cost extended with `Infinite`.
///
/// The derived `Ord` gives the total order `Finite(a) < Finite(b)` iff
/// `a < b`, and `Finite(_) < Infinite` (variant order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedCost {
    Finite(u64),
    Infinite,
}

pub use ExtendedCost::{Finite, Infinite};

impl ExtendedCost {
    pub const ZERO: ExtendedCost = Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Infinite)
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<u64> {
        match self {
            Finite(v) => Some(v),
            Infinite => None,
        }
    }
}

impl Add for ExtendedCost {
    type Output = ExtendedCost;

    fn add(self, rhs: ExtendedCost) -> ExtendedCost {
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a.saturating_add(b)),
            _ => Infinite,
        }
    }
}

impl Add<u64> for ExtendedCost {
    type Output = ExtendedCost;

    fn add(self, rhs: u64) -> ExtendedCost {
        self + Finite(rhs)
    }
}

impl Sum for ExtendedCost {
    fn sum<I: Iterator<Item = ExtendedCost>>(iter: I) -> ExtendedCost {
        iter.fold(Finite(0), |acc, x| acc + x)
    }
}

impl From<u64> for ExtendedCost {
    fn from(v: u64) -> Self {
        Finite(v)
    }
}

impl fmt::Display for ExtendedCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finite(v) => write!(f, "{v}"),
            Infinite => write!(f, "inf"),
        }
    }
}

// JSON encoding: a plain number for finite values, the string "inf" otherwise.
impl Serialize for ExtendedCost {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Finite(v) => serializer.serialize_u64(*v),
            Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedCost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct CostVisitor;

        impl Visitor<'_> for CostVisitor {
            type Value = ExtendedCost;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative integer or the string \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtendedCost, E> {
                Ok(Finite(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtendedCost, E> {
                u64::try_from(v)
                    .map(Finite)
                    .map_err(|_| E::custom("cost must be nonnegative"))
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<ExtendedCost, E> {
                if s == "inf" {
                    Ok(Infinite)
                } else {
                    Err(E::custom(format!("expected \"inf\", got {s:?}")))
                }
            }
        }

        deserializer.deserialize_any(CostVisitor)
    }
}
