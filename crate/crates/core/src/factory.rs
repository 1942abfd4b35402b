//! Builds curve resolution data from a combinatorial blow-up program.
//!
//! A program lists point blow-ups in order. Each centre records which
//! previously created exceptional curves pass through it (none for the
//! first centre, one for a free point, two for a satellite point) and
//! the multiplicity of the strict transform of `f` there. Strict
//! transform branches attach afterwards as curvettes of their host.

use crate::model::{BranchRef, Component, ComponentKind, ModelError, ResolutionData, Stratum};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FactoryError {
    #[error("invalid centre {index}: {reason}")]
    InvalidCenter { index: usize, reason: String },
    #[error("satellite center on non-adjacent pair: centre {index} lists E{a} and E{b}")]
    SatelliteNonAdjacent { index: usize, a: usize, b: usize },
    #[error("component not in divisor of f: E{index} has N = 0")]
    ComponentNotInDivisor { index: usize },
    #[error("invalid branch: {0}")]
    InvalidBranch(String),
    #[error(transparent)]
    Document(#[from] ModelError),
}

/// One blow-up centre: `j` lists the 1-based indices of the exceptional
/// curves through it, `m` is the multiplicity of the strict transform of
/// `f` at the centre.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Center {
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub m: u64,
}

/// A strict-transform branch attached transversally at a generic point
/// of its host curve; `mult` is its multiplicity in `f`. A branch with
/// no host sits at the origin itself, which is only meaningful for a
/// program with no centres (the smooth and normal-crossings cases).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Branch {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub host: Option<usize>,
    pub mult: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupProgram {
    pub centers: Vec<Center>,
    #[serde(default)]
    pub branches: Vec<Branch>,
}

/// Symmetric intersection matrix of the exceptional curves on the final
/// surface; minus it is positive definite with determinant 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    rows: Vec<Vec<i64>>,
}

impl IntersectionMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "square matrix required");
        IntersectionMatrix { rows }
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }
}

impl BlowupProgram {
    pub fn new(centers: Vec<Center>, branches: Vec<Branch>) -> Self {
        BlowupProgram { centers, branches }
    }

    pub fn to_document_string(&self) -> String {
        serde_json::to_value(self)
            .expect("program serializes")
            .to_string()
    }

    pub fn from_document_str(doc: &str) -> Result<Self, FactoryError> {
        let p: BlowupProgram =
            serde_json::from_str(doc).map_err(|e| ModelError::Parse(e.to_string()))?;
        Ok(p)
    }
}

/// Replays the program and returns the final dual-graph edges between
/// exceptional curves (1-based pairs), validating every centre.
fn replay_edges(program: &BlowupProgram) -> Result<BTreeSet<(usize, usize)>, FactoryError> {
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (idx0, center) in program.centers.iter().enumerate() {
        let i = idx0 + 1;
        if center.j.len() > 2 {
            return Err(FactoryError::InvalidCenter {
                index: i,
                reason: "more than two curves through a point centre".into(),
            });
        }
        if i == 1 && !center.j.is_empty() {
            return Err(FactoryError::InvalidCenter {
                index: i,
                reason: "first centre must be the origin (empty J)".into(),
            });
        }
        if i > 1 && center.j.is_empty() {
            return Err(FactoryError::InvalidCenter {
                index: i,
                reason: "centre must lie on the exceptional locus (empty J)".into(),
            });
        }
        if center.j.iter().any(|&j| j == 0 || j >= i) {
            return Err(FactoryError::InvalidCenter {
                index: i,
                reason: "J references a curve not created earlier".into(),
            });
        }
        if center.j.len() == 2 && center.j[0] == center.j[1] {
            return Err(FactoryError::InvalidCenter {
                index: i,
                reason: "J repeats a curve".into(),
            });
        }
        match center.j.as_slice() {
            [] => {}
            [a] => {
                edges.insert(ordered(*a, i));
            }
            [a, b] => {
                let key = ordered(*a, *b);
                if !edges.remove(&key) {
                    return Err(FactoryError::SatelliteNonAdjacent {
                        index: i,
                        a: key.0,
                        b: key.1,
                    });
                }
                edges.insert(ordered(*a, i));
                edges.insert(ordered(*b, i));
            }
            _ => unreachable!(),
        }
    }
    Ok(edges)
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn validate_branches(program: &BlowupProgram) -> Result<(), FactoryError> {
    let n = program.centers.len();
    for b in &program.branches {
        match b.host {
            Some(h) => {
                if h == 0 || h > n {
                    return Err(FactoryError::InvalidBranch(format!(
                        "host E{h} does not exist"
                    )));
                }
            }
            None => {
                if n > 0 {
                    return Err(FactoryError::InvalidBranch(
                        "branch without a host in a resolved program".into(),
                    ));
                }
            }
        }
        if b.mult == 0 {
            return Err(FactoryError::InvalidBranch(
                "branch multiplicity must be positive".into(),
            ));
        }
    }
    if n == 0 && program.branches.len() > 2 {
        return Err(FactoryError::InvalidBranch(
            "more than two branches through the origin is not a normal crossings curve".into(),
        ));
    }
    Ok(())
}

/// Multiplicities `N_i` of the exceptional curves in the pullback of `f`:
/// `N_i = m_i + sum of N_j over j in J_i`.
pub fn multiplicities(program: &BlowupProgram) -> Result<Vec<u64>, FactoryError> {
    let mut n_vals: Vec<u64> = Vec::with_capacity(program.centers.len());
    for (idx0, center) in program.centers.iter().enumerate() {
        let n = center.m + center.j.iter().map(|&j| n_vals[j - 1]).sum::<u64>();
        if n == 0 {
            return Err(FactoryError::ComponentNotInDivisor { index: idx0 + 1 });
        }
        n_vals.push(n);
    }
    Ok(n_vals)
}

/// Discrepancies `k_i = nu_i - 1`: `k_i = 1 + sum of k_j over j in J_i`.
fn discrepancies(program: &BlowupProgram) -> Vec<u64> {
    let mut k_vals: Vec<u64> = Vec::with_capacity(program.centers.len());
    for center in &program.centers {
        let k = 1 + center.j.iter().map(|&j| k_vals[j - 1]).sum::<u64>();
        k_vals.push(k);
    }
    k_vals
}

/// Builds resolution data for the curve described by a blow-up program.
///
/// Strata: one singleton per component (`chi = 2 - valence` for an
/// exceptional curve, 0 for a strict branch whose only fibre point is
/// its crossing), one pair stratum per dual-graph edge and per branch
/// attachment, each a single point. With no centres at all the branches
/// describe a normal crossings curve through the origin.
pub fn build_from_program(program: &BlowupProgram) -> Result<ResolutionData, FactoryError> {
    let edges = replay_edges(program)?;
    validate_branches(program)?;
    let n_vals = multiplicities(program)?;
    let k_vals = discrepancies(program);
    let m = program.centers.len();

    let mut components = Vec::new();
    for i in 0..m {
        components.push(Component {
            id: format!("E{}", i + 1),
            kind: ComponentKind::Exceptional,
            n: n_vals[i],
            nu: k_vals[i] + 1,
        });
    }
    for (bi, b) in program.branches.iter().enumerate() {
        components.push(Component {
            id: format!("B{}", bi + 1),
            kind: ComponentKind::Strict,
            n: b.mult,
            nu: 1,
        });
    }

    let mut valence = vec![0i64; m];
    for &(a, b) in &edges {
        valence[a - 1] += 1;
        valence[b - 1] += 1;
    }
    for b in &program.branches {
        if let Some(h) = b.host {
            valence[h - 1] += 1;
        }
    }

    let mut strata = Vec::new();
    for (i, v) in valence.iter().enumerate() {
        strata.push(Stratum::new(vec![format!("E{}", i + 1)], 2 - v).with_global(2 - v));
    }
    for (bi, b) in program.branches.iter().enumerate() {
        // With no blow-ups the origin itself lies on the branch; its
        // fibre stratum is that point when the branch is alone, and the
        // crossing stratum of the two axes otherwise.
        let chi = if m == 0 && program.branches.len() == 1 {
            1
        } else {
            0
        };
        strata.push(Stratum::new(vec![format!("B{}", bi + 1)], chi).with_global(chi));
        if let Some(h) = b.host {
            strata.push(
                Stratum::new(vec![format!("E{h}"), format!("B{}", bi + 1)], 1).with_global(1),
            );
        }
    }
    if m == 0 && program.branches.len() == 2 {
        strata.push(Stratum::new(vec!["B1".into(), "B2".into()], 1).with_global(1));
    }
    for &(a, b) in &edges {
        strata.push(Stratum::new(vec![format!("E{a}"), format!("E{b}")], 1).with_global(1));
    }

    let mut rd = ResolutionData::new(2, components, strata);
    let hosted: Vec<BranchRef> = program
        .branches
        .iter()
        .filter_map(|b| {
            b.host.map(|h| BranchRef {
                host: format!("E{h}"),
                mult: b.mult,
            })
        })
        .collect();
    if !hosted.is_empty() {
        rd.branches = Some(hosted);
    }
    Ok(rd)
}

/// Intersection matrix of the exceptional curves: the diagonal entry of
/// `E_i` is `-1` minus the number of later centres lying on `E_i`, the
/// off-diagonal entries count final dual-graph edges.
pub fn intersection_matrix(program: &BlowupProgram) -> Result<IntersectionMatrix, FactoryError> {
    let edges = replay_edges(program)?;
    let m = program.centers.len();
    let mut rows = vec![vec![0i64; m]; m];
    for (i, row) in rows.iter_mut().enumerate() {
        let later = program
            .centers
            .iter()
            .enumerate()
            .filter(|(c, center)| *c > i && center.j.contains(&(i + 1)))
            .count();
        row[i] = -1 - later as i64;
    }
    for &(a, b) in &edges {
        rows[a - 1][b - 1] = 1;
        rows[b - 1][a - 1] = 1;
    }
    Ok(IntersectionMatrix::from_rows(rows))
}
