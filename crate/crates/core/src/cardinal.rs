//! Cardinals up to ℵ₀ with the divisibility convention used for
//! equipartite parameters: for infinite `m`, `m' | m` iff `m' <= m` and
//! `m / m' = m`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cardinal {
    Finite(u64),
    CountablyInfinite,
}

impl Cardinal {
    pub fn is_finite(self) -> bool {
        matches!(self, Cardinal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        !self.is_finite()
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Cardinal::Finite(n) => Some(n),
            Cardinal::CountablyInfinite => None,
        }
    }

    /// Cardinal product. Saturates to ℵ₀ on overflow, which cannot happen
    /// for the group orders this crate builds.
    pub fn product(self, other: Cardinal) -> Cardinal {
        match (self, other) {
            (Cardinal::Finite(0), _) | (_, Cardinal::Finite(0)) => Cardinal::Finite(0),
            (Cardinal::Finite(a), Cardinal::Finite(b)) => match a.checked_mul(b) {
                Some(p) => Cardinal::Finite(p),
                None => Cardinal::CountablyInfinite,
            },
            _ => Cardinal::CountablyInfinite,
        }
    }

    /// `self | m` under the extended convention.
    pub fn divides(self, m: Cardinal) -> bool {
        match (self, m) {
            (Cardinal::Finite(0), _) => false,
            (_, Cardinal::CountablyInfinite) => true,
            (Cardinal::CountablyInfinite, Cardinal::Finite(_)) => false,
            (Cardinal::Finite(d), Cardinal::Finite(m)) => m % d == 0,
        }
    }

    /// `m / self`, defined when `self | m`.
    pub fn quotient_of(self, m: Cardinal) -> Option<Cardinal> {
        if !self.divides(m) {
            return None;
        }
        Some(match (self, m) {
            (_, Cardinal::CountablyInfinite) => Cardinal::CountablyInfinite,
            (Cardinal::Finite(d), Cardinal::Finite(m)) => Cardinal::Finite(m / d),
            (Cardinal::CountablyInfinite, Cardinal::Finite(_)) => unreachable!(),
        })
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::CountablyInfinite => write!(f, "aleph0"),
        }
    }
}

impl FromStr for Cardinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        match t {
            "aleph0" | "inf" | "ℵ₀" | "omega" => Ok(Cardinal::CountablyInfinite),
            _ => t
                .parse::<u64>()
                .ok()
                .filter(|&n| n >= 1)
                .map(Cardinal::Finite)
                .ok_or_else(|| Error::Parse {
                    pos: 0,
                    msg: format!("expected a positive integer or 'aleph0', found '{t}'"),
                }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Cardinal::*;

    #[test]
    fn divisibility_convention() {
        assert!(Finite(3).divides(CountablyInfinite));
        assert!(CountablyInfinite.divides(CountablyInfinite));
        assert!(!Finite(3).divides(Finite(4)));
        assert!(Finite(2).divides(Finite(4)));
        assert!(!CountablyInfinite.divides(Finite(4)));
        assert_eq!(
            Finite(3).quotient_of(CountablyInfinite),
            Some(CountablyInfinite)
        );
        assert_eq!(Finite(2).quotient_of(Finite(6)), Some(Finite(3)));
        assert_eq!(Finite(3).quotient_of(Finite(4)), None);
    }

    #[test]
    fn quotient_times_divisor_is_dividend() {
        for (d, m) in [
            (Finite(1), Finite(1)),
            (Finite(2), Finite(8)),
            (Finite(5), CountablyInfinite),
            (CountablyInfinite, CountablyInfinite),
        ] {
            assert_eq!(d.quotient_of(m).unwrap().product(d), m);
        }
    }

    #[test]
    fn parse() {
        assert_eq!("aleph0".parse::<Cardinal>().unwrap(), CountablyInfinite);
        assert_eq!("4".parse::<Cardinal>().unwrap(), Finite(4));
        assert!("0".parse::<Cardinal>().is_err());
        assert!("x".parse::<Cardinal>().is_err());
    }
}
