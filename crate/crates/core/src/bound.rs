use std::fmt;

use serde::{Serialize, Serializer};

/// A non-negative quantity that may be `+∞`. Infinity is a flag, never a
/// large float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Finite(f64),
    Infinite,
}

impl Bound {
    pub fn is_finite(&self) -> bool {
        matches!(self, Bound::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            Bound::Finite(x) => Some(*x),
            Bound::Infinite => None,
        }
    }

    pub fn min(self, other: Bound) -> Bound {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a.min(b)),
            (Bound::Infinite, x) | (x, Bound::Infinite) => x,
        }
    }

    pub fn max(self, other: Bound) -> Bound {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a.max(b)),
            _ => Bound::Infinite,
        }
    }

    /// `true` when strictly positive (infinity counts as positive).
    pub fn is_positive(&self) -> bool {
        match self {
            Bound::Finite(x) => *x > 0.0,
            Bound::Infinite => true,
        }
    }
}

impl std::ops::Add for Bound {
    type Output = Bound;

    fn add(self, other: Bound) -> Bound {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => Bound::Finite(a + b),
            _ => Bound::Infinite,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(x) => write!(f, "{x}"),
            Bound::Infinite => write!(f, "inf"),
        }
    }
}

/// Finite values serialize as numbers, infinity as the string `"inf"`.
impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(x) => serializer.serialize_f64(*x),
            Bound::Infinite => serializer.serialize_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_max_with_infinity() {
        assert_eq!(Bound::Infinite.min(Bound::Finite(2.0)), Bound::Finite(2.0));
        assert_eq!(Bound::Infinite.max(Bound::Finite(2.0)), Bound::Infinite);
        assert_eq!(Bound::Finite(1.0) + Bound::Finite(2.0), Bound::Finite(3.0));
        assert!(Bound::Infinite.is_positive());
        assert!(!Bound::Finite(0.0).is_positive());
    }
}
