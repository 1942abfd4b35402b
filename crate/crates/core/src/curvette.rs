//! Curvette multiplicity matrices.
//!
//! The pullback of a curvette image decomposes as
//! `pi^* Cbar_i = sum_j a_ij E_j + C_i`; the integer matrix `a` is
//! unimodular with coprime columns. On a surface it is the exact inverse
//! of minus the intersection matrix; in higher dimension the trailing
//! column and diagonal entry follow a recursion over the centre's
//! incidence set while the remaining lower-row data is geometric input.

use crate::factory::IntersectionMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CurvetteError {
    #[error("non-unimodular intersection matrix (det(-M) = {0})")]
    NonUnimodular(String),
    #[error("internal consistency error: {0}")]
    Inconsistent(String),
    #[error("inconsistent lower-row data: {0}")]
    InconsistentLowerRows(String),
}

/// Integer matrix of curvette pullback multiplicities; row `i` lists the
/// multiplicities of each exceptional component in the pullback of the
/// `i`-th curvette image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvetteMatrix {
    entries: Vec<Vec<u64>>,
}

impl CurvetteMatrix {
    pub fn from_rows(entries: Vec<Vec<u64>>) -> Self {
        let n = entries.len();
        assert!(
            entries.iter().all(|r| r.len() == n),
            "square matrix required"
        );
        CurvetteMatrix { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        self.entries.iter().map(|r| r[j]).collect()
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn det(&self) -> BigInt {
        let rows: Vec<Vec<i64>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect();
        det_exact(&rows)
    }
}

/// Fraction-free Bareiss determinant over exact integers.
pub fn det_exact(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&i| !a[i][k].is_zero());
            match swap {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// Exact inverse over the rationals via Gauss-Jordan; `None` if singular.
fn invert_exact(m: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| BigRational::from(BigInt::from(x)))
                .collect()
        })
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= p.clone();
            inv[col][j] /= p.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..n {
                let t = &factor * &a[col][j];
                a[r][j] -= t;
                let t = &factor * &inv[col][j];
                inv[r][j] -= t;
            }
        }
    }
    Some(inv)
}

fn assert_invariants(a: &CurvetteMatrix, dim: u32) -> Result<(), CurvetteError> {
    let det = a.det();
    if det != BigInt::one() {
        return Err(CurvetteError::Inconsistent(format!(
            "curvette matrix determinant {det} != 1"
        )));
    }
    let n = a.size();
    for j in 0..n {
        let g = a.column(j).iter().fold(0u64, |acc, &x| acc.gcd(&x));
        if g != 1 {
            return Err(CurvetteError::Inconsistent(format!(
                "column {j} gcd {g} != 1"
            )));
        }
    }
    if dim == 2 && !a.is_symmetric() {
        return Err(CurvetteError::Inconsistent(
            "surface curvette matrix must be symmetric".to_string(),
        ));
    }
    Ok(())
}

/// Curvette matrix of a surface resolution: the exact inverse of minus
/// the intersection matrix. Every invariant (integrality, positivity,
/// unimodularity, column gcds, symmetry) is asserted before returning.
pub fn curvette_matrix_2d(m: &IntersectionMatrix) -> Result<CurvetteMatrix, CurvetteError> {
    let neg: Vec<Vec<i64>> = m
        .rows()
        .iter()
        .map(|row| row.iter().map(|&x| -x).collect())
        .collect();
    let det = det_exact(&neg);
    if det != BigInt::one() {
        return Err(CurvetteError::NonUnimodular(det.to_string()));
    }
    let inv = invert_exact(&neg)
        .ok_or_else(|| CurvetteError::Inconsistent("singular matrix with det 1".into()))?;
    let mut rows = Vec::with_capacity(inv.len());
    for r in &inv {
        let mut row = Vec::with_capacity(r.len());
        for x in r {
            if !x.denom().is_one() || x.is_negative() || x.is_zero() {
                return Err(CurvetteError::Inconsistent(format!(
                    "inverse entry {x} is not a positive integer"
                )));
            }
            row.push(x.numer().to_u64().ok_or_else(|| {
                CurvetteError::Inconsistent("inverse entry overflows u64".into())
            })?);
        }
        rows.push(row);
    }
    let a = CurvetteMatrix::from_rows(rows);
    assert_invariants(&a, 2)?;
    Ok(a)
}

/// Completes a higher-dimensional curvette matrix from the centres'
/// incidence sets and the supplied lower-row data.
///
/// `j_sets[k]` lists the earlier components (0-based) through the centre
/// of the `k`-th blow-up; `lower_rows[k]` supplies `a[k][j]` for `j < k`.
/// The trailing column is `a[i][k] = sum over j in J_k of a[i][j]` and
/// the diagonal is that sum over the row itself plus one.
pub fn curvette_matrix_hd(
    j_sets: &[Vec<usize>],
    lower_rows: &[Vec<u64>],
) -> Result<CurvetteMatrix, CurvetteError> {
    let n = j_sets.len();
    if lower_rows.len() != n {
        return Err(CurvetteError::InconsistentLowerRows(format!(
            "{} lower rows for {} centres",
            lower_rows.len(),
            n
        )));
    }
    let mut a: Vec<Vec<u64>> = vec![vec![0; n]; n];
    for k in 0..n {
        if lower_rows[k].len() != k {
            return Err(CurvetteError::InconsistentLowerRows(format!(
                "row {} must supply exactly {} entries, got {}",
                k + 1,
                k,
                lower_rows[k].len()
            )));
        }
        if j_sets[k].iter().any(|&j| j >= k) {
            return Err(CurvetteError::InconsistentLowerRows(format!(
                "centre {} references a non-earlier component",
                k + 1
            )));
        }
        if k == 0 && !j_sets[0].is_empty() {
            return Err(CurvetteError::InconsistentLowerRows(
                "first centre must have empty incidence set".into(),
            ));
        }
        if k > 0 && j_sets[k].is_empty() {
            return Err(CurvetteError::InconsistentLowerRows(format!(
                "centre {} has empty incidence set",
                k + 1
            )));
        }
        for (j, &v) in lower_rows[k].iter().enumerate() {
            a[k][j] = v;
        }
        for row in a.iter_mut().take(k) {
            row[k] = j_sets[k].iter().map(|&j| row[j]).sum();
        }
        a[k][k] = j_sets[k].iter().map(|&j| a[k][j]).sum::<u64>() + 1;
    }
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v == 0 {
                return Err(CurvetteError::InconsistentLowerRows(format!(
                    "entry ({}, {}) is zero; all multiplicities must be positive",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let a = CurvetteMatrix::from_rows(a);
    let det = a.det();
    if det != BigInt::one() {
        return Err(CurvetteError::InconsistentLowerRows(format!(
            "completed matrix has determinant {det}"
        )));
    }
    Ok(a)
}

/// Diagnostic report for the determinant / column-gcd / symmetry theorems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub det: BigInt,
    pub column_gcds: Vec<u64>,
    pub symmetric: bool,
    pub pass: bool,
}

pub fn check_theorems(a: &CurvetteMatrix, dim: u32) -> TheoremReport {
    let det = a.det();
    let n = a.size();
    let column_gcds: Vec<u64> = (0..n)
        .map(|j| a.column(j).iter().fold(0u64, |acc, &x| acc.gcd(&x)))
        .collect();
    let symmetric = a.is_symmetric();
    let pass =
        det == BigInt::one() && column_gcds.iter().all(|&g| g == 1) && (dim != 2 || symmetric);
    TheoremReport {
        det,
        column_gcds,
        symmetric,
        pass,
    }
}
