//! Dense univariate polynomials over the rationals.
//!
//! Degrees stay tiny here (bounded by the number of components of a
//! resolution), so a dense coefficient vector is the right shape.

use crate::rational::{rat_int, Rat};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Polynomial in one variable, coefficients indexed by degree.
/// The zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    /// The linear polynomial `c0 + c1 s`.
    pub fn affine(c0: Rat, c1: Rat) -> Self {
        UniPoly::new(vec![c0, c1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient; returns the monic polynomial
    /// together with the leading coefficient that was removed.
    pub fn into_monic(self) -> (Self, Rat) {
        match self.leading().cloned() {
            None => (self, Rat::one()),
            Some(lead) => {
                let inv = Rat::one() / lead.clone();
                (self.scale(&inv), lead)
            }
        }
    }

    /// Euclidean division: returns `(quotient, remainder)`.
    /// Panics if `divisor` is zero.
    pub fn divrem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dlead = divisor.leading().unwrap().clone();
        let ddeg = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - ddeg];
        for i in (ddeg..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let factor = rem[i].clone() / dlead.clone();
            let shift = i - ddeg;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let prod = dc * &factor;
                rem[shift + j] -= prod;
            }
            quot[shift] = factor;
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &UniPoly) -> UniPoly {
        let (q, r) = self.divrem(divisor);
        assert!(r.is_zero(), "non-exact polynomial division");
        q
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.into_monic().0
    }

    /// Multiplicity of `root` as a zero of this polynomial.
    pub fn root_multiplicity(&self, root: &Rat) -> usize {
        if self.is_zero() {
            return 0;
        }
        let linear = UniPoly::affine(-root.clone(), Rat::one());
        let mut mult = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(&linear);
            if !r.is_zero() {
                return mult;
            }
            mult += 1;
            cur = q;
        }
    }

    pub fn pow(&self, mut e: u32) -> UniPoly {
        let mut result = UniPoly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        UniPoly::new(out)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        UniPoly::new(out)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cs = crate::rational::rat_to_string(c);
            let (sign, mag) = match cs.strip_prefix('-') {
                Some(m) => ("-", m.to_string()),
                None => ("+", cs),
            };
            if first {
                first = false;
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match i {
                0 => write!(f, "{mag}")?,
                1 if mag == "1" => write!(f, "s")?,
                1 => write!(f, "{mag}*s")?,
                _ if mag == "1" => write!(f, "s^{i}")?,
                _ => write!(f, "{mag}*s^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn arithmetic_basics() {
        let p = UniPoly::from_ints(&[1, 2]); // 1 + 2s
        let q = UniPoly::from_ints(&[-1, 2]); // -1 + 2s
        assert_eq!(&p * &q, UniPoly::from_ints(&[-1, 0, 4]));
        assert_eq!(&p + &q, UniPoly::from_ints(&[0, 4]));
        assert_eq!(&p - &p, UniPoly::zero());
        assert_eq!(p.eval(&rat(1, 2)), rat_int(2));
    }

    #[test]
    fn divrem_and_gcd() {
        // s^2 - 1 = (s - 1)(s + 1)
        let p = UniPoly::from_ints(&[-1, 0, 1]);
        let d = UniPoly::from_ints(&[-1, 1]);
        let (q, r) = p.divrem(&d);
        assert_eq!(q, UniPoly::from_ints(&[1, 1]));
        assert!(r.is_zero());
        let g = p.gcd(&UniPoly::from_ints(&[1, 1]));
        assert_eq!(g, UniPoly::from_ints(&[1, 1]));
    }

    #[test]
    fn root_multiplicity_counts() {
        // (s + 1)^2 (s - 3)
        let p = &UniPoly::from_ints(&[1, 1]).pow(2) * &UniPoly::from_ints(&[-3, 1]);
        assert_eq!(p.root_multiplicity(&rat_int(-1)), 2);
        assert_eq!(p.root_multiplicity(&rat_int(3)), 1);
        assert_eq!(p.root_multiplicity(&rat_int(0)), 0);
    }

    #[test]
    fn trim_keeps_invariant() {
        let p = UniPoly::new(vec![rat_int(1), rat_int(0), rat_int(0)]);
        assert_eq!(p.degree(), Some(0));
        assert!(!p.leading().unwrap().is_zero());
        assert_eq!(UniPoly::from_ints(&[0]).degree(), None);
    }
}
