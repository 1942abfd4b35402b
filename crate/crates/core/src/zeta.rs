//! Zeta functions of resolution data: the monodromy zeta function as a
//! formal cyclotomic product, eigenvalue-order bookkeeping, differential
//! form application through curvette multiplicities, and the exact local
//! (or global) topological zeta function as a strata sum.

use crate::curvette::CurvetteMatrix;
use crate::cyclotomic::CyclotomicDivisor;
use crate::model::{Component, ComponentKind, FormSpec, ResolutionData, Stratum};
use crate::poly::UniPoly;
use crate::ratfunc::{RatFuncError, RationalFunction};
use crate::rational::{rat_int, rat_to_string, Rat};
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ZetaError {
    #[error("form host `{0}` is not an exceptional component")]
    HostNotExceptional(String),
    #[error("form host `{0}` does not exist")]
    UnknownHost(String),
    #[error("curvette matrix is {got}x{got} but the data has {expected} exceptional components")]
    MatrixMismatch { got: usize, expected: usize },
    #[error("form application in ambient dimension {0} requires family-supplied strata data")]
    HigherDimensionalForm(u32),
    #[error("stratum {0:?} is missing chi_global, required for the global zeta function")]
    MissingGlobalChi(Vec<String>),
    #[error("the global zeta function is only supported for surface data")]
    GlobalUnsupported,
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
}

/// Monodromy zeta function in A'Campo form: one factor `(t^N - 1)^chi`
/// per component with `N >= 1`, with `chi` the local Euler
/// characteristic of its open stratum.
pub fn acampo_zeta(rd: &ResolutionData) -> CyclotomicDivisor {
    let mut z = CyclotomicDivisor::new();
    for c in &rd.components {
        if c.n == 0 {
            continue;
        }
        let chi = rd.singleton_chi(&c.id).unwrap_or(0);
        z.insert(c.n, chi);
    }
    z
}

/// Divisors of `n`, ascending.
fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            out.push(i);
            if i != n / i {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out.sort_unstable();
    out
}

/// Zero/pole orders of the monodromy zeta function at each candidate
/// root-of-unity order, together with the set of realized eigenvalue
/// orders (including the degree-zero contribution from the strict
/// transform multiplicities).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenvalueReport {
    pub zeta: CyclotomicDivisor,
    pub orders: BTreeMap<u64, i64>,
    pub eigenvalue_orders: BTreeSet<u64>,
}

impl EigenvalueReport {
    pub fn to_json(&self) -> Value {
        json!({
            "orders": self.orders.iter().map(|(&d, &o)| json!([d, o])).collect::<Vec<_>>(),
            "eigenvalue_orders": self.eigenvalue_orders.iter().copied().collect::<Vec<_>>(),
        })
    }
}

pub fn eigenvalue_report(rd: &ResolutionData) -> EigenvalueReport {
    let zeta = acampo_zeta(rd);
    let mut candidates: BTreeSet<u64> = BTreeSet::new();
    for c in &rd.components {
        if c.n >= 1 {
            candidates.extend(divisors(c.n));
        }
    }
    let orders: BTreeMap<u64, i64> = candidates.iter().map(|&d| (d, zeta.order_at(d))).collect();
    let mut eigenvalue_orders: BTreeSet<u64> = orders
        .iter()
        .filter(|(_, &o)| o != 0)
        .map(|(&d, _)| d)
        .collect();
    eigenvalue_orders.extend(divisors(rd.strict_gcd()));
    EigenvalueReport {
        zeta,
        orders,
        eigenvalue_orders,
    }
}

fn fresh_curvette_id(taken: &BTreeSet<String>, counter: &mut usize) -> String {
    loop {
        *counter += 1;
        let id = format!("C{counter}");
        if !taken.contains(&id) {
            return id;
        }
    }
}

/// Applies a differential form specification, shifting the `nu`
/// multiplicities through the curvette matrix and attaching one fresh
/// generic curvette component per copy.
///
/// On data with no exceptional components at all (smooth or normal
/// crossings input), a term may name a strict component instead: the
/// factor is then a power of that component's own equation, which only
/// shifts its `nu`.
pub fn apply_form(
    rd: &ResolutionData,
    a: &CurvetteMatrix,
    w: &FormSpec,
) -> Result<ResolutionData, ZetaError> {
    if w.is_empty() {
        return Ok(rd.clone());
    }
    let exceptional: Vec<usize> = rd
        .components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind == ComponentKind::Exceptional)
        .map(|(i, _)| i)
        .collect();

    if exceptional.is_empty() {
        // Monomial form in the equations of the normal crossings data.
        let mut out = rd.clone();
        for term in &w.terms {
            let idx = out
                .index_of(&term.host)
                .ok_or_else(|| ZetaError::UnknownHost(term.host.clone()))?;
            if out.components[idx].kind != ComponentKind::Strict {
                return Err(ZetaError::HostNotExceptional(term.host.clone()));
            }
            out.components[idx].nu += term.m * term.copies as u64;
        }
        return Ok(out);
    }

    if rd.ambient_dim != 2 {
        return Err(ZetaError::HigherDimensionalForm(rd.ambient_dim));
    }
    if a.size() != exceptional.len() {
        return Err(ZetaError::MatrixMismatch {
            got: a.size(),
            expected: exceptional.len(),
        });
    }

    let host_row = |id: &str| -> Result<usize, ZetaError> {
        let idx = rd
            .index_of(id)
            .ok_or_else(|| ZetaError::UnknownHost(id.to_string()))?;
        exceptional
            .iter()
            .position(|&e| e == idx)
            .ok_or_else(|| ZetaError::HostNotExceptional(id.to_string()))
    };

    let mut out = rd.clone();
    // nu shifts: nu_i += sum over terms of copies * m * a[host][i]
    for term in &w.terms {
        let row = host_row(&term.host)?;
        for (pos, &comp_idx) in exceptional.iter().enumerate() {
            out.components[comp_idx].nu += term.m * term.copies as u64 * a.entry(row, pos);
        }
    }

    let mut taken: BTreeSet<String> = rd.components.iter().map(|c| c.id.clone()).collect();
    let mut counter = 0usize;
    for term in &w.terms {
        host_row(&term.host)?;
        for _ in 0..term.copies {
            let id = fresh_curvette_id(&taken, &mut counter);
            taken.insert(id.clone());
            out.components.push(Component {
                id: id.clone(),
                kind: ComponentKind::Curvette,
                n: 0,
                nu: term.m + 1,
            });
            // The crossing point leaves the host's open stratum. A
            // missing singleton stratum counts as chi 0.
            if out.singleton_mut(&term.host).is_none() {
                out.strata.push(Stratum::new(vec![term.host.clone()], 0));
            }
            let host_stratum = out.singleton_mut(&term.host).unwrap();
            host_stratum.chi_local -= 1;
            if let Some(g) = host_stratum.chi_global.as_mut() {
                *g -= 1;
            }
            out.strata
                .push(Stratum::new(vec![term.host.clone(), id.clone()], 1).with_global(1));
            out.strata.push(Stratum::new(vec![id], 0).with_global(0));
        }
    }
    out.canonicalize();
    Ok(out)
}

/// One pole of a zeta function with its order and the leading Laurent
/// coefficient (the residue when the order is 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleInfo {
    pub location: Rat,
    pub order: usize,
    pub leading: Rat,
}

/// Topological zeta function together with the factored candidate
/// denominator retained for display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaResult {
    pub rf: RationalFunction,
    pub factored_denominator: Vec<(u64, u64)>,
    pub poles: Vec<PoleInfo>,
}

impl ZetaResult {
    pub fn to_json(&self) -> Value {
        let coeffs = |p: &UniPoly| -> Vec<Value> {
            p.coeffs()
                .iter()
                .map(|c| Value::String(rat_to_string(c)))
                .collect()
        };
        json!({
            "rf": {
                "num": coeffs(self.rf.num()),
                "den": coeffs(self.rf.den()),
            },
            "factored_denominator": self
                .factored_denominator
                .iter()
                .map(|&(nu, n)| json!([nu, n]))
                .collect::<Vec<_>>(),
            "poles": self
                .poles
                .iter()
                .map(|p| {
                    json!({
                        "s0": rat_to_string(&p.location),
                        "order": p.order,
                        "leading": rat_to_string(&p.leading),
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

fn stratum_chi(s: &Stratum, local: bool) -> Result<i64, ZetaError> {
    if local {
        Ok(s.chi_local)
    } else {
        s.chi_global
            .ok_or_else(|| ZetaError::MissingGlobalChi(s.components.clone()))
    }
}

/// Exact strata sum `sum over I of chi(E_I) prod over i in I of
/// 1/(nu_i + s N_i)`, normalized, with poles confined to the candidates
/// `-nu_i/N_i` of components with `N_i >= 1`.
pub fn topological_zeta(rd: &ResolutionData, local: bool) -> Result<ZetaResult, ZetaError> {
    if !local && rd.ambient_dim != 2 {
        return Err(ZetaError::GlobalUnsupported);
    }
    // Sum over a common denominator (the product of every component's
    // linear factor) and normalize once at the end.
    let factors: Vec<UniPoly> = rd
        .components
        .iter()
        .map(|c| UniPoly::affine(rat_int(c.nu as i64), rat_int(c.n as i64)))
        .collect();
    let mut den_full = UniPoly::one();
    for f in &factors {
        den_full = &den_full * f;
    }
    fn add_term(
        rd: &ResolutionData,
        factors: &[UniPoly],
        num: &mut UniPoly,
        chi: i64,
        members: &[String],
    ) {
        if chi == 0 {
            return;
        }
        let in_set: Vec<usize> = members
            .iter()
            .map(|id| rd.index_of(id).expect("validated component reference"))
            .collect();
        let mut term = UniPoly::constant(rat_int(chi));
        for (i, f) in factors.iter().enumerate() {
            if !in_set.contains(&i) {
                term = &term * f;
            }
        }
        *num = &*num + &term;
    }

    let mut num = UniPoly::zero();
    for s in &rd.strata {
        add_term(
            rd,
            &factors,
            &mut num,
            stratum_chi(s, local)?,
            &s.components,
        );
    }
    if !local {
        // Empty stratum of the ambient surface germ: a ball blown up in
        // as many points as there are exceptional curves.
        let ambient_chi = 1 + rd.exceptional().count() as i64;
        let covered: i64 = rd
            .strata
            .iter()
            .map(|s| stratum_chi(s, false))
            .sum::<Result<i64, _>>()?;
        add_term(rd, &factors, &mut num, ambient_chi - covered, &[]);
    }
    // The denominator splits into the known linear factors, so the
    // normal form is reached by cancelling each of its roots directly
    // instead of running a general gcd.
    let mut den = den_full;
    let roots: BTreeSet<Rat> = rd
        .components
        .iter()
        .filter(|c| c.n >= 1)
        .map(|c| -Rat::new((c.nu as i64).into(), (c.n as i64).into()))
        .collect();
    if !num.is_zero() {
        for r in &roots {
            let linear = UniPoly::affine(-r.clone(), rat_int(1));
            let shared = num.root_multiplicity(r).min(den.root_multiplicity(r));
            for _ in 0..shared {
                num = num.exact_div(&linear);
                den = den.exact_div(&linear);
            }
        }
    }
    let sum = RationalFunction::from_coprime(num, den)?;

    let factored_denominator: Vec<(u64, u64)> = rd
        .components
        .iter()
        .filter(|c| c.n >= 1)
        .map(|c| (c.nu, c.n))
        .collect();

    let mut candidates: BTreeSet<Rat> = BTreeSet::new();
    for &(nu, n) in &factored_denominator {
        candidates.insert(-Rat::new((nu as i64).into(), (n as i64).into()));
    }
    let mut poles = Vec::new();
    for s0 in candidates {
        let order = sum.pole_order_at(&s0);
        if order >= 1 {
            let leading = sum.laurent_leading(&s0, order)?;
            poles.push(PoleInfo {
                location: s0,
                order,
                leading,
            });
        }
    }
    Ok(ZetaResult {
        rf: sum,
        factored_denominator,
        poles,
    })
}

/// Direct unreduced evaluation of the strata sum at a rational point;
/// `None` when some factor vanishes there. Test oracle for the
/// normalized result.
pub fn strata_sum_at(rd: &ResolutionData, local: bool, s: &Rat) -> Option<Rat> {
    let mut total = Rat::zero();
    for st in &rd.strata {
        let chi = if local { st.chi_local } else { st.chi_global? };
        let mut term = rat_int(chi);
        for id in &st.components {
            let c = rd.component(id)?;
            let factor = rat_int(c.nu as i64) + rat_int(c.n as i64) * s;
            if factor.is_zero() {
                return None;
            }
            term /= factor;
        }
        total += term;
    }
    Some(total)
}

/// Applies a form specification to resolution data. Surface data (and
/// normal crossings data) is handled generically through the curvette
/// matrix; higher-dimensional families carry their own strata updates.
pub trait FormApplier {
    fn apply(&self, rd: &ResolutionData, form: &FormSpec) -> Result<ResolutionData, ZetaError>;
}

/// The generic applier backed by a curvette multiplicity matrix.
pub struct CurvetteFormApplier<'a> {
    pub matrix: &'a CurvetteMatrix,
}

impl FormApplier for CurvetteFormApplier<'_> {
    fn apply(&self, rd: &ResolutionData, form: &FormSpec) -> Result<ResolutionData, ZetaError> {
        apply_form(rd, self.matrix, form)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::rational::rat;

    fn cusp_data() -> ResolutionData {
        families::cusp().unwrap().data
    }

    fn cusp_matrix() -> CurvetteMatrix {
        families::cusp().unwrap().curvette.unwrap()
    }

    #[test]
    fn acampo_cusp() {
        let z = acampo_zeta(&cusp_data());
        assert_eq!(z.to_pairs(), vec![(2, 1), (3, 1), (6, -1)]);
    }

    #[test]
    fn eigenvalues_cusp() {
        let r = eigenvalue_report(&cusp_data());
        assert_eq!(
            r.eigenvalue_orders.iter().copied().collect::<Vec<_>>(),
            vec![1, 6]
        );
        assert_eq!(r.orders.get(&2), Some(&0));
        assert_eq!(r.orders.get(&6), Some(&-1));
    }

    #[test]
    fn apply_form_cusp_example() {
        let rd = cusp_data();
        let a = cusp_matrix();
        let w = FormSpec::single("E1", 1);
        let rd2 = apply_form(&rd, &a, &w).unwrap();
        let nus: Vec<u64> = ["E1", "E2", "E3"]
            .iter()
            .map(|id| rd2.component(id).unwrap().nu)
            .collect();
        assert_eq!(nus, vec![3, 4, 7]);
        let c = rd2.component("C1").unwrap();
        assert_eq!((c.kind, c.nu, c.n), (ComponentKind::Curvette, 2, 0));
        assert_eq!(rd2.singleton_chi("E1"), Some(0));
        assert_eq!(rd2.singleton_chi("C1"), Some(0));
        assert!(rd2.pair_partners("C1").contains(&("E1", 1)));
        assert!(rd2.validate().is_empty());
    }

    #[test]
    fn apply_form_empty_is_identity() {
        let rd = cusp_data();
        let a = cusp_matrix();
        assert_eq!(apply_form(&rd, &a, &FormSpec::empty()).unwrap(), rd);
    }

    #[test]
    fn apply_form_linearity() {
        let rd = cusp_data();
        let a = cusp_matrix();
        let w1 = FormSpec::single("E1", 2);
        let w2 = FormSpec::single("E2", 1);
        let seq = apply_form(&apply_form(&rd, &a, &w1).unwrap(), &a, &w2).unwrap();
        let merged = apply_form(&rd, &a, &w1.merged(&w2)).unwrap();
        assert_eq!(seq, merged);
    }

    #[test]
    fn apply_form_rejects_strict_host_on_resolved_data() {
        let rd = cusp_data();
        let a = cusp_matrix();
        let w = FormSpec::single("B1", 1);
        assert!(matches!(
            apply_form(&rd, &a, &w),
            Err(ZetaError::HostNotExceptional(_))
        ));
    }

    #[test]
    fn cusp_zeta_compact_form() {
        let z = topological_zeta(&cusp_data(), true).unwrap();
        // (5 + 4s)/((5 + 6s)(1 + s))
        let den = &UniPoly::from_ints(&[5, 6]) * &UniPoly::from_ints(&[1, 1]);
        let expected = RationalFunction::new(UniPoly::from_ints(&[5, 4]), den).unwrap();
        assert_eq!(z.rf, expected);
        let locs: Vec<Rat> = z.poles.iter().map(|p| p.location.clone()).collect();
        assert_eq!(locs, vec![rat_int(-1), rat(-5, 6)]);
    }

    #[test]
    fn zeta_matches_unreduced_sum_at_random_points() {
        let rd = cusp_data();
        let z = topological_zeta(&rd, true).unwrap();
        // a small deterministic spread of rational sample points
        for k in 1..=20i64 {
            let s = rat(3 * k - 10, 7 + (k % 5));
            if let Some(direct) = strata_sum_at(&rd, true, &s) {
                assert_eq!(z.rf.eval(&s).unwrap(), direct)
            }
        }
    }

    #[test]
    fn global_zeta_of_cusp_equals_local() {
        // Germ over a ball: everything sits over the origin except the
        // strict branch, whose off-origin piece has chi 0.
        let rd = cusp_data();
        let local = topological_zeta(&rd, true).unwrap();
        let global = topological_zeta(&rd, false).unwrap();
        assert_eq!(local.rf, global.rf);
    }

    #[test]
    fn candidate_pole_confinement() {
        let rd = cusp_data();
        let a = cusp_matrix();
        for m in [(0, 0, 0), (1, 0, 0), (2, 1, 0), (0, 3, 2)] {
            let mut w = FormSpec::empty();
            for (host, e) in [("E1", m.0), ("E2", m.1), ("E3", m.2)] {
                if e > 0 {
                    w.push(host, e, 1);
                }
            }
            let rd2 = apply_form(&rd, &a, &w).unwrap();
            let z = topological_zeta(&rd2, true).unwrap();
            let candidates: BTreeSet<Rat> = rd2
                .components
                .iter()
                .filter(|c| c.n >= 1)
                .map(|c| -Rat::new((c.nu as i64).into(), (c.n as i64).into()))
                .collect();
            for pole in &z.poles {
                assert!(candidates.contains(&pole.location));
            }
        }
    }

    #[test]
    fn acampo_ex28_divisor() {
        // E4 has an open stratum of characteristic zero and drops out
        let e = families::ex28().unwrap();
        let z = acampo_zeta(&e.data);
        assert_eq!(
            z.to_pairs(),
            vec![(4, 1), (6, 1), (12, -1), (15, 1), (30, -1)]
        );
    }

    #[test]
    fn apply_form_rejects_mismatched_matrix() {
        let rd = cusp_data();
        let wrong = CurvetteMatrix::from_rows(vec![vec![1]]);
        assert!(matches!(
            apply_form(&rd, &wrong, &FormSpec::single("E1", 1)),
            Err(ZetaError::MatrixMismatch { .. })
        ));
    }

    #[test]
    fn global_zeta_requires_global_data() {
        let mut rd = cusp_data();
        for s in &mut rd.strata {
            s.chi_global = None;
        }
        assert!(matches!(
            topological_zeta(&rd, false),
            Err(ZetaError::MissingGlobalChi(_))
        ));
        let fermat = families::fermat(3).unwrap();
        assert!(matches!(
            topological_zeta(&fermat.data, false),
            Err(ZetaError::GlobalUnsupported)
        ));
    }

    #[test]
    fn eigenvalue_orders_of_power_of_coordinate() {
        // f = x^N: every divisor of N is an eigenvalue order
        let f = families::xn(12).unwrap();
        let r = eigenvalue_report(&f.data);
        assert_eq!(
            r.eigenvalue_orders.iter().copied().collect::<Vec<_>>(),
            vec![1, 2, 3, 4, 6, 12]
        );
        assert_eq!(acampo_zeta(&f.data).to_pairs(), vec![(12, 1)]);
    }

    #[test]
    fn monomial_form_shifts_central_multiplicity_to_ip_plus_jq() {
        for (p, q) in [(2u64, 3u64), (3, 5), (4, 7)] {
            let f = families::pq(p, q).unwrap();
            let a = f.curvette.as_ref().unwrap();
            let central = format!("E{}", f.program.as_ref().unwrap().centers.len());
            for (i, j) in [(1u64, 1u64), (2, 1), (3, 2)] {
                if i > q - 1 || j > p - 1 {
                    continue;
                }
                let rd2 = apply_form(&f.data, a, &f.omega_ij(i, j).unwrap()).unwrap();
                assert_eq!(
                    rd2.component(&central).unwrap().nu,
                    i * p + j * q,
                    "({p},{q}) omega_({i},{j})"
                );
            }
        }
    }

    #[test]
    fn trivial_curvette_leaves_zeta_unchanged() {
        // a curvette with exponent 0 refines the stratification but its
        // factor is 1/(1 + 0 s), so the strata sum telescopes back
        let rd = cusp_data();
        let a = cusp_matrix();
        let with_marker = apply_form(&rd, &a, &FormSpec::single("E2", 0)).unwrap();
        assert_eq!(with_marker.component("C1").unwrap().nu, 1);
        let plain = topological_zeta(&rd, true).unwrap();
        let marked = topological_zeta(&with_marker, true).unwrap();
        assert_eq!(plain.rf, marked.rf);
    }

    #[test]
    fn multi_copy_strata_bookkeeping() {
        let rd = cusp_data();
        let a = cusp_matrix();
        let mut w = FormSpec::empty();
        w.push("E1", 3, 2);
        let rd2 = apply_form(&rd, &a, &w).unwrap();
        // two copies, each shifting by 3 * row(E1)
        assert_eq!(rd2.component("E1").unwrap().nu, 2 + 6);
        assert_eq!(rd2.component("E3").unwrap().nu, 5 + 12);
        assert_eq!(rd2.singleton_chi("E1"), Some(1 - 2));
        assert_eq!(
            rd2.components
                .iter()
                .filter(|c| c.kind == ComponentKind::Curvette)
                .count(),
            2
        );
    }
}
