//! Formal products of cyclotomic-style factors `(t^N - 1)^e`.
//!
//! Monodromy zeta functions live here: exponents may be negative, and the
//! only queries we ever need are exponent lookups, vanishing orders at
//! roots of unity, and merges.

use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt;

/// `prod_N (t^N - 1)^(e_N)` with all stored exponents nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CyclotomicDivisor {
    factors: BTreeMap<u64, i64>,
}

impl CyclotomicDivisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: &[(u64, i64)]) -> Self {
        let mut d = Self::new();
        for &(n, e) in pairs {
            d.insert(n, e);
        }
        d
    }

    /// Merges `(t^n - 1)^e` into the product, pruning zero exponents.
    pub fn insert(&mut self, n: u64, e: i64) {
        assert!(n >= 1, "factor exponent base must be positive");
        if e == 0 {
            return;
        }
        let entry = self.factors.entry(n).or_insert(0);
        *entry += e;
        if *entry == 0 {
            self.factors.remove(&n);
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, n: u64) -> i64 {
        self.factors.get(&n).copied().unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.factors.iter().map(|(&n, &e)| (n, e))
    }

    pub fn to_pairs(&self) -> Vec<(u64, i64)> {
        self.factors().collect()
    }

    /// Order of vanishing at any primitive `d`-th root of unity:
    /// `sum of e_N over N divisible by d` (negative means a pole).
    pub fn order_at(&self, d: u64) -> i64 {
        assert!(d >= 1);
        self.factors()
            .filter(|(n, _)| n % d == 0)
            .map(|(_, e)| e)
            .sum()
    }

    /// Degree `sum e_N * N`, i.e. zeros minus poles counted with
    /// multiplicity.
    pub fn degree(&self) -> i64 {
        self.factors().map(|(n, e)| e * n as i64).sum()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (n, e) in rhs.factors() {
            out.insert(n, e);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.factors()
                .map(|(n, e)| Value::Array(vec![Value::from(n), Value::from(e)]))
                .collect(),
        )
    }
}

impl fmt::Display for CyclotomicDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "1");
        }
        for (n, e) in self.factors() {
            write!(f, "(t^{n}-1)")?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}
