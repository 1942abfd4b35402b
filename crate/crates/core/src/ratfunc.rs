//! Univariate rational functions over the rationals, kept in a normal
//! form (coprime numerator/denominator, monic denominator) so that
//! equality is plain structural comparison.

use crate::poly::UniPoly;
use crate::rational::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatFuncError {
    #[error("division by zero polynomial")]
    ZeroDenominator,
    #[error("non-linear denominator factor")]
    NonLinearDenominator,
    #[error("pole order mismatch: expected order {expected} at {at}, found {found}")]
    PoleOrderMismatch {
        at: String,
        expected: usize,
        found: usize,
    },
}

/// A rational function `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: UniPoly,
    den: UniPoly,
}

impl RationalFunction {
    /// Normalizing constructor; the only way to build a value.
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self, RatFuncError> {
        if den.is_zero() {
            return Err(RatFuncError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                num: UniPoly::zero(),
                den: UniPoly::one(),
            });
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g);
        let den = den.exact_div(&g);
        let (den, lead) = den.into_monic();
        let num = num.scale(&(Rat::one() / lead));
        Ok(RationalFunction { num, den })
    }

    /// Constructor for callers that have already cancelled every common
    /// factor (e.g. by dividing out known linear roots); only rescales
    /// to a monic denominator.
    pub(crate) fn from_coprime(num: UniPoly, den: UniPoly) -> Result<Self, RatFuncError> {
        if den.is_zero() {
            return Err(RatFuncError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                num: UniPoly::zero(),
                den: UniPoly::one(),
            });
        }
        debug_assert!(num.gcd(&den).degree() == Some(0));
        let (den, lead) = den.into_monic();
        let num = num.scale(&(Rat::one() / lead));
        Ok(RationalFunction { num, den })
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: UniPoly::zero(),
            den: UniPoly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RationalFunction {
            num: UniPoly::constant(c),
            den: UniPoly::one(),
        }
    }

    pub fn from_poly(p: UniPoly) -> Self {
        RationalFunction {
            num: p,
            den: UniPoly::one(),
        }
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RationalFunction::new(num, den).expect("nonzero denominators")
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("nonzero denominators")
    }

    pub fn scale(&self, c: &Rat) -> Self {
        RationalFunction::new(self.num.scale(c), self.den.clone()).expect("nonzero denominator")
    }

    /// Exact evaluation; `None` at a zero of the denominator.
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    /// Order of the pole at `s0` (0 when `s0` is not a pole). On the
    /// normal form this is just the root multiplicity of the denominator.
    pub fn pole_order_at(&self, s0: &Rat) -> usize {
        self.den.root_multiplicity(s0)
    }

    /// All rational poles with multiplicities, sorted ascending.
    ///
    /// The denominators produced by the zeta engine split into rational
    /// linear factors; an irreducible factor of degree >= 2 is reported
    /// as an error.
    pub fn poles(&self) -> Result<Vec<(Rat, usize)>, RatFuncError> {
        let mut out = Vec::new();
        let mut rem = self.den.clone();
        while rem.degree().unwrap_or(0) >= 1 {
            let root = match rational_root(&rem) {
                Some(r) => r,
                None => return Err(RatFuncError::NonLinearDenominator),
            };
            let mult = rem.root_multiplicity(&root);
            let linear = UniPoly::affine(-root.clone(), Rat::one());
            for _ in 0..mult {
                rem = rem.exact_div(&linear);
            }
            out.push((root, mult));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// Coefficient of `(s - s0)^(-k)` in the Laurent expansion at a pole
    /// `s0` of order exactly `k`; for `k = 1` this is the residue.
    pub fn laurent_leading(&self, s0: &Rat, k: usize) -> Result<Rat, RatFuncError> {
        let found = self.pole_order_at(s0);
        if found != k || k == 0 {
            return Err(RatFuncError::PoleOrderMismatch {
                at: crate::rational::rat_to_string(s0),
                expected: k,
                found,
            });
        }
        let linear = UniPoly::affine(-s0.clone(), Rat::one());
        let mut den = self.den.clone();
        for _ in 0..k {
            den = den.exact_div(&linear);
        }
        Ok(self.num.eval(s0) / den.eval(s0))
    }
}

/// Finds one rational root of `p`, if any.
fn rational_root(p: &UniPoly) -> Option<Rat> {
    debug_assert!(!p.is_zero());
    if p.coeff(0).is_zero() {
        return Some(Rat::zero());
    }
    // Clear denominators to an integer polynomial, then use the rational
    // root bound: roots are +-(divisor of constant)/(divisor of leading).
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * &lcm / c.denom())
        .collect();
    let a0 = ints.first().unwrap().abs();
    let an = ints.last().unwrap().abs();
    let num_divs = divisors(&a0)?;
    let den_divs = divisors(&an)?;
    for nd in &num_divs {
        for dd in &den_divs {
            let cand = Rat::new(nd.clone(), dd.clone());
            if p.eval(&cand).is_zero() {
                return Some(cand);
            }
            let neg = -cand;
            if p.eval(&neg).is_zero() {
                return Some(neg);
            }
        }
    }
    None
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u64()?;
    debug_assert!(n > 0);
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            out.push(BigInt::from(i));
            if i != n / i {
                out.push(BigInt::from(n / i));
            }
        }
        i += 1;
    }
    Some(out)
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(UniPoly::from_ints(num), UniPoly::from_ints(den)).unwrap()
    }

    #[test]
    fn cancels_common_factor() {
        // (s^2 - 1)/(s - 1) = s + 1
        let r = rf(&[-1, 0, 1], &[-1, 1]);
        assert_eq!(r, rf(&[1, 1], &[1]));
    }

    #[test]
    fn constant_result() {
        // (2 + 2s)/(1 + s) = 2
        let r = rf(&[2, 2], &[1, 1]);
        assert_eq!(r, RationalFunction::constant(rat_int(2)));
    }

    #[test]
    fn zero_denominator_rejected() {
        let e = RationalFunction::new(UniPoly::one(), UniPoly::zero());
        assert_eq!(e.unwrap_err(), RatFuncError::ZeroDenominator);
    }

    #[test]
    fn normalization_idempotent() {
        let r = rf(&[5, 4], &[5, 11, 6]);
        let again = RationalFunction::new(r.num().clone(), r.den().clone()).unwrap();
        assert_eq!(r, again);
        assert!(r.den().is_monic());
    }

    #[test]
    fn poles_of_baby_example() {
        // 1/(N N' (b + s d)^2) with N=2, N'=3, b=1, d=5.
        let lin = UniPoly::from_ints(&[1, 5]);
        let den = (&lin * &lin).scale(&rat_int(6));
        let r = RationalFunction::new(UniPoly::one(), den).unwrap();
        assert_eq!(r.poles().unwrap(), vec![(rat(-1, 5), 2)]);
    }

    #[test]
    fn poles_of_cusp_zeta() {
        // (5 + 4s)/((5 + 6s)(1 + s))
        let den = &UniPoly::from_ints(&[5, 6]) * &UniPoly::from_ints(&[1, 1]);
        let r = RationalFunction::new(UniPoly::from_ints(&[5, 4]), den).unwrap();
        assert_eq!(r.poles().unwrap(), vec![(rat_int(-1), 1), (rat(-5, 6), 1)]);
    }

    #[test]
    fn constant_has_no_poles() {
        assert!(RationalFunction::constant(rat_int(7))
            .poles()
            .unwrap()
            .is_empty());
    }

    #[test]
    fn nonlinear_denominator_flagged() {
        let r = rf(&[1], &[1, 0, 1]); // 1/(s^2 + 1)
        assert_eq!(r.poles().unwrap_err(), RatFuncError::NonLinearDenominator);
    }

    #[test]
    fn laurent_simple_pole_of_linear_reciprocal() {
        // 1/(b + sN): residue at -b/N is 1/N.
        for (b, n) in [(1i64, 2i64), (3, 4), (5, 6)] {
            let r = rf(&[1], &[b, n]);
            assert_eq!(r.laurent_leading(&rat(-b, n), 1).unwrap(), rat(1, n));
        }
    }

    #[test]
    fn laurent_double_pole() {
        // (1 + 9s)/(3 (1+s)^2) at s0 = -1, k = 2 -> (1-9)/3 = -8/3.
        let den = UniPoly::from_ints(&[1, 1]).pow(2).scale(&rat_int(3));
        let r = RationalFunction::new(UniPoly::from_ints(&[1, 9]), den).unwrap();
        assert_eq!(r.laurent_leading(&rat_int(-1), 2).unwrap(), rat(-8, 3));
    }

    #[test]
    fn laurent_order_mismatch() {
        let r = rf(&[1], &[1, 1]);
        assert!(matches!(
            r.laurent_leading(&rat_int(-1), 2),
            Err(RatFuncError::PoleOrderMismatch { .. })
        ));
        assert!(matches!(
            r.laurent_leading(&rat_int(0), 1),
            Err(RatFuncError::PoleOrderMismatch { .. })
        ));
    }

    #[test]
    fn normalizes_shared_linear_factor() {
        // ((5+4s)(1+s)) / ((5+6s)(1+s)^2) -> (5+4s) / ((5+6s)(1+s))
        let num = &UniPoly::from_ints(&[5, 4]) * &UniPoly::from_ints(&[1, 1]);
        let den = &UniPoly::from_ints(&[5, 6]) * &UniPoly::from_ints(&[1, 1]).pow(2);
        let r = RationalFunction::new(num, den).unwrap();
        let want = RationalFunction::new(
            UniPoly::from_ints(&[5, 4]),
            &UniPoly::from_ints(&[5, 6]) * &UniPoly::from_ints(&[1, 1]),
        )
        .unwrap();
        assert_eq!(r, want);
    }

    #[test]
    fn residue_matches_cleared_evaluation() {
        // laurent_leading(r, s0, 1) = ((s - s0) r)(s0) after cancellation.
        let den = &UniPoly::from_ints(&[5, 6]) * &UniPoly::from_ints(&[1, 1]);
        let r = RationalFunction::new(UniPoly::from_ints(&[5, 4]), den).unwrap();
        let s0 = rat(-5, 6);
        let cleared = RationalFunction::new(
            &r.num().clone() * &UniPoly::affine(-s0.clone(), rat_int(1)),
            r.den().clone(),
        )
        .unwrap();
        assert_eq!(
            r.laurent_leading(&s0, 1).unwrap(),
            cleared.eval(&s0).unwrap()
        );
    }
}
