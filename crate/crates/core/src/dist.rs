use std::fmt;
use std::ops::Add;

use serde::{Serialize, Serializer};

/// A distance in `N ∪ {∞}` with `c + ∞ = ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtDist {
    Finite(u64),
    Infinite,
}

impl ExtDist {
    pub const ZERO: ExtDist = ExtDist::Finite(0);

    pub fn new(v: u64) -> Self {
        ExtDist::Finite(v)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtDist::Finite(v) => Some(v),
            ExtDist::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == ExtDist::Infinite
    }

    pub fn as_f64(self) -> f64 {
        self.finite().map_or(f64::INFINITY, |v| v as f64)
    }
}

impl From<u64> for ExtDist {
    fn from(v: u64) -> Self {
        ExtDist::new(v)
    }
}

impl Add for ExtDist {
    type Output = ExtDist;

    fn add(self, rhs: ExtDist) -> ExtDist {
        match (self.finite(), rhs.finite()) {
            (Some(a), Some(b)) => ExtDist::new(a + b),
            _ => ExtDist::Infinite,
        }
    }
}

impl fmt::Display for ExtDist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.finite() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtDist {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.finite() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str("inf"),
        }
    }
}

/// A distance together with whether it is exact or only an upper bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Measured {
    pub value: ExtDist,
    pub certified: bool,
}

impl Measured {
    pub fn exact(value: impl Into<ExtDist>) -> Self {
        Measured {
            value: value.into(),
            certified: true,
        }
    }

    pub fn bound(value: impl Into<ExtDist>) -> Self {
        Measured {
            value: value.into(),
            certified: false,
        }
    }
}

impl From<ExtDist> for Measured {
    fn from(d: ExtDist) -> Self {
        Measured::exact(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_arithmetic() {
        let inf = ExtDist::Infinite;
        assert_eq!(ExtDist::new(3) + inf, inf);
        assert_eq!(ExtDist::new(3) + ExtDist::new(4), ExtDist::new(7));
        assert!(ExtDist::new(u64::MAX / 2) < inf);
        assert!(ExtDist::ZERO < ExtDist::new(1));
        assert_eq!(serde_json::to_string(&inf).unwrap(), "\"inf\"");
    }
}
