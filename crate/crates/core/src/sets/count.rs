use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Value of the divisor-count function: a nonnegative integer, or infinite
/// (every element of an infinite set divides 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Count {
    Finite(BigUint),
    Infinite,
}

impl Count {
    pub fn finite(n: u64) -> Self {
        Count::Finite(BigUint::from(n))
    }

    pub fn zero() -> Self {
        Count::Finite(BigUint::ZERO)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Count::Infinite)
    }

    /// `|self - other|`, with `|∞ - ∞| = 0`.
    pub fn abs_diff(&self, other: &Count) -> Count {
        match (self, other) {
            (Count::Finite(u), Count::Finite(v)) => {
                Count::Finite(if u >= v { u - v } else { v - u })
            }
            (Count::Infinite, Count::Infinite) => Count::zero(),
            _ => Count::Infinite,
        }
    }

    /// Count is at least `k` (always true for `Infinite`).
    pub fn at_least(&self, k: &BigUint) -> bool {
        match self {
            Count::Finite(v) => v >= k,
            Count::Infinite => true,
        }
    }
}

impl From<u64> for Count {
    fn from(n: u64) -> Self {
        Count::finite(n)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(v) => write!(f, "{v}"),
            Count::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Count {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Count::Infinite);
        }
        s.parse::<BigUint>()
            .map(Count::Finite)
            .map_err(|_| format!("not a count: {s:?}"))
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Count {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_algebra() {
        assert_eq!(Count::finite(3).abs_diff(&Count::finite(7)), Count::finite(4));
        assert_eq!(Count::finite(7).abs_diff(&Count::finite(3)), Count::finite(4));
        assert_eq!(Count::Infinite.abs_diff(&Count::finite(5)), Count::Infinite);
        assert_eq!(Count::finite(5).abs_diff(&Count::Infinite), Count::Infinite);
        assert_eq!(Count::Infinite.abs_diff(&Count::Infinite), Count::zero());
    }

    #[test]
    fn ordering_puts_infinite_last() {
        assert!(Count::finite(u64::MAX) < Count::Infinite);
        assert!(Count::finite(2) < Count::finite(3));
    }

    #[test]
    fn text_form() {
        assert_eq!(Count::Infinite.to_string(), "inf");
        assert_eq!("12".parse::<Count>().unwrap(), Count::finite(12));
        assert_eq!("inf".parse::<Count>().unwrap(), Count::Infinite);
        assert!("-1".parse::<Count>().is_err());
        let json = serde_json::to_string(&Count::finite(9)).unwrap();
        assert_eq!(json, "\"9\"");
    }
}
