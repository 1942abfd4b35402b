//! Exact scalar arithmetic: arbitrary-precision rationals and roots of
//! unity stored as reduced fractions of a full turn.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumberError {
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in rational literal `{0}`")]
    ZeroDenominator(String),
}

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Renders as `p/q`, or just `p` when the denominator is 1.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_str(s: &str) -> Result<Rat, NumberError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n = BigInt::from_str(num).map_err(|_| NumberError::Malformed(s.to_string()))?;
    let d = match den {
        Some(d) => BigInt::from_str(d).map_err(|_| NumberError::Malformed(s.to_string()))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(NumberError::ZeroDenominator(s.to_string()));
    }
    Ok(Rat::new(n, d))
}

/// Fractional part of `r`, normalized into `[0, 1)`.
pub fn frac_part(r: &Rat) -> Rat {
    r - r.floor()
}

/// A root of unity `exp(2 pi sqrt(-1) e)` stored by its turn fraction
/// `e`, reduced and normalized into `[0, 1)`. The order of the root is
/// the denominator of `e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    turns: Rat,
}

impl RootOfUnity {
    /// Normalizes an arbitrary turn fraction into `[0, 1)`.
    pub fn new(turns: Rat) -> Self {
        RootOfUnity {
            turns: frac_part(&turns),
        }
    }

    pub fn one() -> Self {
        RootOfUnity { turns: Rat::zero() }
    }

    pub fn from_fraction(u: i64, d: i64) -> Self {
        Self::new(rat(u, d))
    }

    pub fn turns(&self) -> &Rat {
        &self.turns
    }

    /// Multiplicative order: the denominator of the reduced turn fraction.
    pub fn order(&self) -> u64 {
        self.turns
            .denom()
            .to_u64()
            .expect("root-of-unity order fits in u64")
    }

    /// Numerator of the reduced turn fraction, in `0..order`.
    pub fn turn_numer(&self) -> u64 {
        self.turns
            .numer()
            .abs()
            .to_u64()
            .expect("turn numerator fits in u64")
    }

    pub fn parse(s: &str) -> Result<Self, NumberError> {
        Ok(Self::new(rat_from_str(s)?))
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rat_to_string(&self.turns))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn string_round_trip() {
        assert_eq!(rat_to_string(&rat(5, 6)), "5/6");
        assert_eq!(rat_to_string(&rat(-7, 6)), "-7/6");
        assert_eq!(rat_to_string(&rat_int(3)), "3");
        assert_eq!(rat_from_str("5/6").unwrap(), rat(5, 6));
        assert_eq!(rat_from_str("-7/6").unwrap(), rat(-7, 6));
        assert_eq!(rat_from_str("42").unwrap(), rat_int(42));
        assert_eq!(rat_from_str("4/6").unwrap(), rat(2, 3));
    }

    #[test]
    fn malformed_literals() {
        assert!(matches!(
            rat_from_str("a/b"),
            Err(NumberError::Malformed(_))
        ));
        assert!(matches!(
            rat_from_str("1/0"),
            Err(NumberError::ZeroDenominator(_))
        ));
    }

    #[test]
    fn frac_part_negative() {
        assert_eq!(frac_part(&rat(-7, 6)), rat(5, 6));
        assert_eq!(frac_part(&rat(-2, 1)), rat_int(0));
        assert_eq!(frac_part(&rat(11, 6)), rat(5, 6));
    }

    #[test]
    fn root_of_unity_order() {
        assert_eq!(RootOfUnity::from_fraction(5, 6).order(), 6);
        assert_eq!(RootOfUnity::from_fraction(-1, 6).turns(), &rat(5, 6));
        assert_eq!(RootOfUnity::one().order(), 1);
        assert_eq!(RootOfUnity::parse("3/10").unwrap().order(), 10);
    }
}
