//! Constructive realization of monodromy eigenvalues as poles of
//! twisted topological zeta functions.
//!
//! Given a target root of unity, pick a component whose multiplicity is
//! divisible by the target order and whose open stratum has the right
//! Euler characteristic, solve the exponent congruence through the
//! curvette matrix column, and search the nonnegative lattice of
//! congruent exponent vectors for one whose candidate pole survives as a
//! genuine pole of the fully recomputed zeta function.

use crate::curvette::CurvetteMatrix;
use crate::model::{ComponentKind, FormSpec, ResolutionData};
use crate::rational::{frac_part, rat_int, rat_to_string, Rat, RootOfUnity};
use crate::zeta::{eigenvalue_report, topological_zeta, FormApplier, ZetaError, ZetaResult};
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RealizeError {
    #[error("eigenvalue order not realizable from this data: {0}")]
    NotRealizable(String),
    #[error("search radius exhausted after {tried} candidates (radius {radius})")]
    RadiusExhausted { tried: u64, radius: u64 },
    #[error("collision at neighbor `{0}`")]
    CollisionAtNeighbor(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    RatFunc(#[from] crate::ratfunc::RatFuncError),
}

/// Picks the component hosting the candidate pole: an exceptional
/// component with order-divisible multiplicity and negative (surface) or
/// nonzero (higher-dimensional) open-stratum characteristic. When the
/// order divides the strict-transform gcd, the divisibility constraint
/// is dropped (it then holds for every component automatically).
pub fn select_component(rd: &ResolutionData, d: u64) -> Result<String, RealizeError> {
    let chi_ok = |chi: i64| {
        if rd.ambient_dim == 2 {
            chi < 0
        } else {
            chi != 0
        }
    };
    let qualifying: Vec<&crate::model::Component> = rd
        .exceptional()
        .filter(|c| chi_ok(rd.singleton_chi(&c.id).unwrap_or(0)))
        .collect();
    let mut pool: Vec<&&crate::model::Component> =
        qualifying.iter().filter(|c| c.n % d == 0).collect();
    if pool.is_empty() && rd.strict_gcd().is_multiple_of(d) {
        pool = qualifying.iter().collect();
    }
    pool.iter()
        .min_by_key(|c| c.n)
        .map(|c| c.id.clone())
        .ok_or_else(|| {
            RealizeError::NotRealizable(format!(
                "no exceptional component with d = {d} dividing N and qualifying chi"
            ))
        })
}

fn gcd64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd64(b, a % b)
    }
}

/// Lexicographically smallest nonnegative exponent vector solving
/// `nu + sum(coeffs[l] * m[l]) = -u * N/d (mod N)` for a target with
/// turn fraction `u/d`, `d | N`. Adding any multiple of `N` to an entry
/// stays in the solution class.
pub fn solve_congruence(
    coeffs: &[u64],
    nu_j0: u64,
    n_j0: u64,
    target: &RootOfUnity,
) -> Result<Vec<u64>, RealizeError> {
    let n = n_j0;
    let d = target.order();
    if !n.is_multiple_of(d) {
        return Err(RealizeError::NotRealizable(format!(
            "order {d} does not divide N = {n}"
        )));
    }
    let u = target.turn_numer() % d;
    // required residue: -u*(N/d) - nu (mod N)
    let shift = (u * (n / d)) % n;
    let target_residue = (2 * n - shift - nu_j0 % n) % n;

    // gcd of the coefficient suffix together with the modulus, used to
    // prune the lexicographic search
    let k = coeffs.len();
    let mut suffix_gcd = vec![n; k + 1];
    for i in (0..k).rev() {
        suffix_gcd[i] = gcd64(coeffs[i] % n, suffix_gcd[i + 1]);
    }
    let col_gcd = coeffs.iter().fold(0u64, |acc, &c| gcd64(acc, c));
    if k > 0 && col_gcd != 1 {
        return Err(RealizeError::Internal(format!(
            "curvette column gcd {col_gcd} != 1"
        )));
    }
    let solvable = |g: u64, t: u64| {
        if g == 0 {
            t == 0
        } else {
            t.is_multiple_of(g)
        }
    };
    if !solvable(suffix_gcd[0], target_residue) {
        return Err(RealizeError::Internal(format!(
            "congruence unsolvable: residue {target_residue} not divisible by {}",
            suffix_gcd[0]
        )));
    }
    let mut base = vec![0u64; k];
    let mut t = target_residue;
    for i in 0..k {
        let c = coeffs[i] % n;
        let mut chosen = None;
        for m in 0..n {
            let rest = (t + n * n - (c * m) % n) % n;
            if solvable(suffix_gcd[i + 1], rest) {
                chosen = Some((m, rest));
                break;
            }
        }
        let (m, rest) =
            chosen.ok_or_else(|| RealizeError::Internal("no congruence branch".into()))?;
        base[i] = m;
        t = rest;
    }
    if t != 0 {
        return Err(RealizeError::Internal(
            "congruence residue left over".into(),
        ));
    }
    Ok(base)
}

/// Shifted multiplicities `nu'_i = nu_i + sum(a[l][i] m[l])` over all
/// components (only exceptional ones shift).
fn shifted_nus(rd: &ResolutionData, a: &CurvetteMatrix, m: &[u64]) -> Vec<u64> {
    let exceptional: Vec<usize> = rd
        .components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.kind == ComponentKind::Exceptional)
        .map(|(i, _)| i)
        .collect();
    let mut nus: Vec<u64> = rd.components.iter().map(|c| c.nu).collect();
    for (row, &ml) in m.iter().enumerate() {
        if ml == 0 {
            continue;
        }
        for (pos, &idx) in exceptional.iter().enumerate() {
            nus[idx] += ml * a.entry(row, pos);
        }
    }
    nus
}

fn candidate_pole(nu: u64, n: u64) -> Rat {
    -Rat::new((nu as i64).into(), (n as i64).into())
}

/// True iff the candidate pole of `j0` differs from the candidate pole
/// of every other component with positive `N` after the shift by `m`.
pub fn collision_filter(rd: &ResolutionData, a: &CurvetteMatrix, j0: &str, m: &[u64]) -> bool {
    let nus = shifted_nus(rd, a, m);
    let j0_idx = match rd.index_of(j0) {
        Some(i) => i,
        None => return false,
    };
    let j0_comp = &rd.components[j0_idx];
    if j0_comp.n == 0 {
        return false;
    }
    let s0 = candidate_pole(nus[j0_idx], j0_comp.n);
    for (i, c) in rd.components.iter().enumerate() {
        if i == j0_idx || c.n == 0 {
            continue;
        }
        if candidate_pole(nus[i], c.n) == s0 {
            return false;
        }
    }
    true
}

/// Residue of the candidate pole of `j0` as a simple pole, computed from
/// the stratification around `j0` rather than from the normalized
/// rational function:
/// `(chi(E_j0) - 1 + 1/(1+m_j0) + sum over neighbors of count/alpha_i) / N_j0`
/// with `alpha_i = nu'_i + s0 N_i`. The `-1 + 1/(1+m)` pair accounts for
/// the curvette copy attached to `j0` itself and cancels when `m_j0 = 0`.
pub fn residue_formula(
    rd: &ResolutionData,
    a: &CurvetteMatrix,
    j0: &str,
    m: &[u64],
) -> Result<Rat, RealizeError> {
    let j0_idx = rd
        .index_of(j0)
        .ok_or_else(|| RealizeError::Internal(format!("unknown component `{j0}`")))?;
    let j0_comp = &rd.components[j0_idx];
    if j0_comp.n == 0 {
        return Err(RealizeError::Internal("pole host has N = 0".into()));
    }
    let exceptional_ids: Vec<&str> = rd.exceptional().map(|c| c.id.as_str()).collect();
    let host_pos = exceptional_ids
        .iter()
        .position(|&id| id == j0)
        .ok_or_else(|| RealizeError::Internal("pole host must be exceptional".into()))?;
    let nus = shifted_nus(rd, a, m);
    let s0 = candidate_pole(nus[j0_idx], j0_comp.n);

    let chi = rat_int(rd.singleton_chi(j0).unwrap_or(0));
    let m_j0 = m.get(host_pos).copied().unwrap_or(0);
    let curvette_terms = rat_int(-1) + Rat::new(1.into(), (m_j0 as i64 + 1).into());

    let mut neighbor_sum = Rat::zero();
    for (other, count) in rd.pair_partners(j0) {
        let idx = rd
            .index_of(other)
            .ok_or_else(|| RealizeError::Internal(format!("unknown neighbor `{other}`")))?;
        let c = &rd.components[idx];
        let alpha = rat_int(nus[idx] as i64) + rat_int(c.n as i64) * &s0;
        if alpha.is_zero() {
            return Err(RealizeError::CollisionAtNeighbor(other.to_string()));
        }
        neighbor_sum += rat_int(count) / alpha;
    }
    let total = chi + curvette_terms + neighbor_sum;
    Ok(total / rat_int(j0_comp.n as i64))
}

/// Certificate pairing a target eigenvalue with a verified pole of a
/// twisted zeta function.
#[derive(Debug, Clone)]
pub struct RealizationCertificate {
    pub target: RootOfUnity,
    pub j0: String,
    pub form: FormSpec,
    pub s0: Rat,
    pub pole_order: usize,
    pub residue: Rat,
    pub zeta: ZetaResult,
    pub candidates_tried: u64,
    pub radius_used: u64,
}

impl RealizationCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "target": self.target.to_string(),
            "j0": self.j0,
            "form": self.form.to_json(),
            "s0": rat_to_string(&self.s0),
            "pole_order": self.pole_order,
            "residue": rat_to_string(&self.residue),
            "zeta": self.zeta.to_json(),
            "search": {
                "tried": self.candidates_tried,
                "radius": self.radius_used,
            },
        })
    }
}

/// All vectors in `{0..=radius}^len` ordered by total degree, then
/// lexicographically ascending.
fn graded_lex_vectors(len: usize, radius: u64) -> Vec<Vec<u64>> {
    let mut all: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for v in &all {
            for x in 0..=radius {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        all = next;
    }
    all.sort_by_key(|v| (v.iter().sum::<u64>(), v.clone()));
    all
}

/// Splits a total exponent into `copies` parts, as equal as possible,
/// remainders on earlier copies; zero parts are dropped.
fn split_exponent(total: u64, copies: u64) -> Vec<u64> {
    let q = total / copies;
    let r = total % copies;
    let mut out = Vec::new();
    for k in 0..copies {
        let m = if k < r { q + 1 } else { q };
        if m > 0 {
            out.push(m);
        }
    }
    out
}

fn form_from_exponents(hosts: &[&str], m: &[u64], copies: u64) -> FormSpec {
    let mut w = FormSpec::empty();
    for (l, &ml) in m.iter().enumerate() {
        if ml == 0 {
            continue;
        }
        // group equal copy exponents into one term
        let mut parts: BTreeMap<u64, u32> = BTreeMap::new();
        for p in split_exponent(ml, copies) {
            *parts.entry(p).or_insert(0) += 1;
        }
        for (&part, &count) in parts.iter().rev() {
            w.push(hosts[l], part, count);
        }
    }
    w
}

/// Runs the full search: congruence base, graded-lexicographic lattice
/// walk with collision screening, full zeta recomputation per candidate,
/// multi-copy fallback, and certificate assembly. The first acceptance
/// in the fixed order wins, so the result is deterministic.
pub fn realize(
    rd: &ResolutionData,
    a: &CurvetteMatrix,
    applier: &dyn FormApplier,
    target: &RootOfUnity,
    radius: u64,
) -> Result<RealizationCertificate, RealizeError> {
    let d = target.order();
    let report = eigenvalue_report(rd);
    if !report.eigenvalue_orders.contains(&d) {
        return Err(RealizeError::NotRealizable(format!(
            "order {d} is not a monodromy eigenvalue order of this data"
        )));
    }

    match select_component(rd, d) {
        Ok(j0) => realize_on_component(rd, a, applier, target, radius, &j0),
        Err(select_err) => {
            // Trivial cases: the plain zeta function may already carry the
            // pole (Morse), or the data is smooth/normal crossings and a
            // monomial in the component equations does the job.
            if let Some(cert) = try_trivial_form(rd, target)? {
                return Ok(cert);
            }
            if let Some(cert) = try_normal_crossings(rd, a, target)? {
                return Ok(cert);
            }
            Err(select_err)
        }
    }
}

fn realize_on_component(
    rd: &ResolutionData,
    a: &CurvetteMatrix,
    applier: &dyn FormApplier,
    target: &RootOfUnity,
    radius: u64,
    j0: &str,
) -> Result<RealizationCertificate, RealizeError> {
    let hosts: Vec<&str> = rd.exceptional().map(|c| c.id.as_str()).collect();
    let j0_pos = hosts
        .iter()
        .position(|&h| h == j0)
        .ok_or_else(|| RealizeError::Internal("selected component not exceptional".into()))?;
    let j0_comp = rd.component(j0).unwrap();
    let coeffs = a.column(j0_pos);
    let base = solve_congruence(&coeffs, j0_comp.nu, j0_comp.n, target)?;

    let mut tried = 0u64;
    let shells = graded_lex_vectors(hosts.len(), radius);
    for copies in 1..=rd.ambient_dim as u64 {
        for k in &shells {
            let m: Vec<u64> = base
                .iter()
                .zip(k)
                .map(|(&b, &ki)| b + j0_comp.n * ki)
                .collect();
            tried += 1;
            if !collision_filter(rd, a, j0, &m) {
                continue;
            }
            let form = form_from_exponents(&hosts, &m, copies);
            let rd2 = applier.apply(rd, &form)?;
            let zeta = topological_zeta(&rd2, true)?;
            let nu_shifted = rd2.component(j0).unwrap().nu;
            let s0 = candidate_pole(nu_shifted, j0_comp.n);
            let order = zeta.rf.pole_order_at(&s0);
            if order >= 1 {
                let residue = zeta.rf.laurent_leading(&s0, order)?;
                debug_assert_eq!(frac_part(&s0), *target.turns());
                let radius_used = k.iter().copied().max().unwrap_or(0);
                return Ok(RealizationCertificate {
                    target: target.clone(),
                    j0: j0.to_string(),
                    form,
                    s0,
                    pole_order: order,
                    residue,
                    zeta,
                    candidates_tried: tried,
                    radius_used,
                });
            }
        }
    }
    Err(RealizeError::RadiusExhausted { tried, radius })
}

/// Checks whether the untwisted zeta function already exhibits a pole in
/// the right exponential class (the even-dimensional Morse case).
fn try_trivial_form(
    rd: &ResolutionData,
    target: &RootOfUnity,
) -> Result<Option<RealizationCertificate>, RealizeError> {
    let zeta = topological_zeta(rd, true)?;
    for pole in &zeta.poles {
        if frac_part(&pole.location) == *target.turns() {
            let j0 = rd
                .components
                .iter()
                .find(|c| c.n >= 1 && candidate_pole(c.nu, c.n) == pole.location)
                .map(|c| c.id.clone())
                .unwrap_or_default();
            return Ok(Some(RealizationCertificate {
                target: target.clone(),
                j0,
                form: FormSpec::empty(),
                s0: pole.location.clone(),
                pole_order: pole.order,
                residue: pole.leading.clone(),
                zeta,
                candidates_tried: 1,
                radius_used: 0,
            }));
        }
    }
    Ok(None)
}

/// Smooth / normal crossings data: raise each component equation to
/// `b * N_i / d - 1` so that every candidate pole coincides at `-b/d`,
/// which is then a genuine pole of full order.
fn try_normal_crossings(
    rd: &ResolutionData,
    a: &CurvetteMatrix,
    target: &RootOfUnity,
) -> Result<Option<RealizationCertificate>, RealizeError> {
    if rd.exceptional().count() > 0 {
        return Ok(None);
    }
    let d = target.order();
    if !rd.strict_gcd().is_multiple_of(d) {
        return Ok(None);
    }
    let u = target.turn_numer() % d;
    let b = if u == 0 { d } else { d - u };
    let mut form = FormSpec::empty();
    for c in rd.strict() {
        let m = b * (c.n / d) - 1;
        if m > 0 {
            form.push(&c.id, m, 1);
        }
    }
    let rd2 = crate::zeta::apply_form(rd, a, &form)?;
    let zeta = topological_zeta(&rd2, true)?;
    let s0 = -Rat::new((b as i64).into(), (d as i64).into());
    let order = zeta.rf.pole_order_at(&s0);
    if order == 0 {
        return Ok(None);
    }
    let residue = zeta.rf.laurent_leading(&s0, order)?;
    let j0 = rd.strict().next().map(|c| c.id.clone()).unwrap_or_default();
    Ok(Some(RealizationCertificate {
        target: target.clone(),
        j0,
        form,
        s0,
        pole_order: order,
        residue,
        zeta,
        candidates_tried: 1,
        radius_used: 0,
    }))
}

/// Evidence report for the two-clause principle: (1) every pole of every
/// supplied form's zeta function lies over a monodromy eigenvalue, and
/// (2) every eigenvalue order is hit by some pole.
#[derive(Debug, Clone)]
pub struct PrincipleReport {
    pub poles_are_eigenvalues: bool,
    pub eigenvalues_covered: bool,
    pub violations: Vec<(usize, Rat)>,
    pub missing_orders: Vec<u64>,
    pub witnesses: BTreeMap<u64, (usize, Rat)>,
}

impl PrincipleReport {
    pub fn holds(&self) -> bool {
        self.poles_are_eigenvalues && self.eigenvalues_covered
    }

    pub fn to_json(&self) -> Value {
        json!({
            "poles_are_eigenvalues": self.poles_are_eigenvalues,
            "eigenvalues_covered": self.eigenvalues_covered,
            "violations": self
                .violations
                .iter()
                .map(|(i, s)| json!([i, rat_to_string(s)]))
                .collect::<Vec<_>>(),
            "missing_orders": self.missing_orders,
            "witnesses": self
                .witnesses
                .iter()
                .map(|(d, (i, s))| json!([d, i, rat_to_string(s)]))
                .collect::<Vec<_>>(),
        })
    }
}

pub fn verify_principle(
    rd: &ResolutionData,
    applier: &dyn FormApplier,
    forms: &[FormSpec],
) -> Result<PrincipleReport, RealizeError> {
    let report = eigenvalue_report(rd);
    let mut violations = Vec::new();
    let mut witnesses: BTreeMap<u64, (usize, Rat)> = BTreeMap::new();
    for (idx, form) in forms.iter().enumerate() {
        let rd2 = applier.apply(rd, form)?;
        let zeta = topological_zeta(&rd2, true)?;
        for pole in &zeta.poles {
            let class = RootOfUnity::new(pole.location.clone());
            let order = class.order();
            if report.eigenvalue_orders.contains(&order) {
                witnesses
                    .entry(order)
                    .or_insert((idx, pole.location.clone()));
            } else {
                violations.push((idx, pole.location.clone()));
            }
        }
    }
    let missing_orders: Vec<u64> = report
        .eigenvalue_orders
        .iter()
        .copied()
        .filter(|d| !witnesses.contains_key(d))
        .collect();
    Ok(PrincipleReport {
        poles_are_eigenvalues: violations.is_empty(),
        eigenvalues_covered: missing_orders.is_empty(),
        violations,
        missing_orders,
        witnesses,
    })
}
