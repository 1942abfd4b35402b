//! The central data model: decorated resolution data (components with
//! `(nu, N)` and stratified local Euler characteristics), differential
//! form specifications, and the on-disk document format shared by all
//! commands.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed document: {0}")]
    Parse(String),
    #[error("unknown component reference `{0}`")]
    UnknownComponent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Exceptional,
    Strict,
    Curvette,
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKind::Exceptional => write!(f, "exceptional"),
            ComponentKind::Strict => write!(f, "strict"),
            ComponentKind::Curvette => write!(f, "curvette"),
        }
    }
}

/// One irreducible component of the total transform, carrying its
/// multiplicity `N` in the pullback of `f` and `nu = 1 +` its
/// multiplicity in the pullback of the differential form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub id: String,
    pub kind: ComponentKind,
    #[serde(rename = "N")]
    pub n: u64,
    pub nu: u64,
}

/// A locally closed stratum: points lying on exactly the listed
/// components. `chi_local` is the Euler characteristic of the stratum
/// intersected with the fibre over the base point; `chi_global` is the
/// optional unrestricted value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stratum {
    pub components: Vec<String>,
    pub chi_local: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_global: Option<i64>,
}

impl Stratum {
    pub fn new(mut components: Vec<String>, chi_local: i64) -> Self {
        components.sort();
        Stratum {
            components,
            chi_local,
            chi_global: None,
        }
    }

    pub fn with_global(mut self, chi_global: i64) -> Self {
        self.chi_global = Some(chi_global);
        self
    }
}

/// Record of a strict-transform branch attachment, preserved in
/// documents produced by the blow-up factory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchRef {
    pub host: String,
    pub mult: u64,
}

/// Combinatorial resolution data: the sole input to both zeta functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionData {
    pub ambient_dim: u32,
    pub components: Vec<Component>,
    pub strata: Vec<Stratum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvette_matrix: Option<Vec<Vec<u64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branches: Option<Vec<BranchRef>>,
}

impl ResolutionData {
    pub fn new(ambient_dim: u32, components: Vec<Component>, strata: Vec<Stratum>) -> Self {
        let mut rd = ResolutionData {
            ambient_dim,
            components,
            strata,
            curvette_matrix: None,
            branches: None,
        };
        rd.canonicalize();
        rd
    }

    /// Sorts strata by (size, component ids); components keep their
    /// declaration order. Serialization of a canonical value is
    /// byte-stable.
    pub fn canonicalize(&mut self) {
        for s in &mut self.strata {
            s.components.sort();
        }
        self.strata.sort_by(|a, b| {
            (a.components.len(), &a.components).cmp(&(b.components.len(), &b.components))
        });
    }

    pub fn component(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    pub fn exceptional(&self) -> impl Iterator<Item = &Component> {
        self.components
            .iter()
            .filter(|c| c.kind == ComponentKind::Exceptional)
    }

    pub fn strict(&self) -> impl Iterator<Item = &Component> {
        self.components
            .iter()
            .filter(|c| c.kind == ComponentKind::Strict)
    }

    /// gcd of `N` over strict components; 1 when there are none (the
    /// trivial eigenvalue is always present on degree-zero cohomology).
    pub fn strict_gcd(&self) -> u64 {
        let g = self.strict().fold(0u64, |acc, c| acc.gcd(&c.n));
        if g == 0 {
            1
        } else {
            g
        }
    }

    pub fn singleton_chi(&self, id: &str) -> Option<i64> {
        self.strata
            .iter()
            .find(|s| s.components.len() == 1 && s.components[0] == id)
            .map(|s| s.chi_local)
    }

    pub fn singleton_mut(&mut self, id: &str) -> Option<&mut Stratum> {
        self.strata
            .iter_mut()
            .find(|s| s.components.len() == 1 && s.components[0] == id)
    }

    /// Pair strata containing `id`, as (other component id, chi_local).
    pub fn pair_partners(&self, id: &str) -> Vec<(&str, i64)> {
        let mut out = Vec::new();
        for s in &self.strata {
            if s.components.len() == 2 && s.components.iter().any(|c| c == id) {
                let other = s.components.iter().find(|c| *c != id);
                if let Some(o) = other {
                    out.push((o.as_str(), s.chi_local));
                }
            }
        }
        out
    }

    /// Checks every type invariant; violations are data, not errors.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen_ids = BTreeSet::new();
        for c in &self.components {
            if !seen_ids.insert(&c.id) {
                out.push(format!("duplicate component id `{}`", c.id));
            }
            match c.kind {
                ComponentKind::Curvette => {
                    if c.n != 0 {
                        out.push(format!("curvette with nonzero N: `{}` has N={}", c.id, c.n));
                    }
                }
                _ => {
                    if c.n == 0 {
                        out.push(format!(
                            "{} component `{}` with N=0 (must be >= 1)",
                            c.kind, c.id
                        ));
                    }
                }
            }
            if c.nu == 0 {
                out.push(format!("component `{}` with nu=0 (must be >= 1)", c.id));
            }
        }
        let mut seen_sets: BTreeSet<Vec<&str>> = BTreeSet::new();
        for s in &self.strata {
            if s.components.is_empty() {
                out.push("stratum with empty component set".to_string());
                continue;
            }
            let mut key: Vec<&str> = s.components.iter().map(|c| c.as_str()).collect();
            key.sort();
            key.dedup();
            if key.len() != s.components.len() {
                out.push(format!("stratum {:?} repeats a component", s.components));
            }
            if !seen_sets.insert(key.clone()) {
                out.push(format!("duplicate stratum {:?}", key));
            }
            for id in &s.components {
                if self.component(id).is_none() {
                    out.push(format!("stratum references unknown component `{id}`"));
                }
            }
            if self.ambient_dim == 2 {
                if s.components.len() > 2 {
                    out.push(format!(
                        "stratum {:?} has {} components in ambient dimension 2",
                        s.components,
                        s.components.len()
                    ));
                }
                if s.components.len() == 2 && s.chi_local < 1 {
                    out.push(format!(
                        "pair stratum {:?} with non-positive point count {}",
                        s.components, s.chi_local
                    ));
                }
            }
        }
        if let Some(m) = &self.curvette_matrix {
            let k = self.exceptional().count();
            if m.len() != k || m.iter().any(|row| row.len() != k) {
                out.push(format!(
                    "curvette matrix shape {}x? does not match {} exceptional components",
                    m.len(),
                    k
                ));
            }
        }
        out
    }

    /// Canonical document bytes: JSON with sorted keys, components in
    /// declaration order, strata in canonical order.
    pub fn to_document_string(&self) -> String {
        let value = serde_json::to_value(self).expect("resolution data serializes");
        value.to_string()
    }

    pub fn from_document_str(doc: &str) -> Result<Self, ModelError> {
        let mut rd: ResolutionData =
            serde_json::from_str(doc).map_err(|e| ModelError::Parse(e.to_string()))?;
        for s in &rd.strata {
            for id in &s.components {
                if rd.components.iter().all(|c| &c.id != id) {
                    return Err(ModelError::UnknownComponent(id.clone()));
                }
            }
        }
        if let Some(branches) = &rd.branches {
            for b in branches {
                if rd.components.iter().all(|c| c.id != b.host) {
                    return Err(ModelError::UnknownComponent(b.host.clone()));
                }
            }
        }
        rd.canonicalize();
        Ok(rd)
    }
}

/// One factor `g^m` of a differential form, where `g` cuts out a
/// curvette of `host`; `copies` generic curvettes each carry the same
/// exponent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormTerm {
    pub host: String,
    pub m: u64,
    #[serde(default = "default_copies")]
    pub copies: u32,
}

fn default_copies() -> u32 {
    1
}

/// A differential form `(prod_l g_l^(m_l)) dx_1 ^ ... ^ dx_n`; the
/// standard volume factor is always included.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub terms: Vec<FormTerm>,
}

impl FormSpec {
    pub fn empty() -> Self {
        FormSpec::default()
    }

    pub fn single(host: &str, m: u64) -> Self {
        FormSpec {
            terms: vec![FormTerm {
                host: host.to_string(),
                m,
                copies: 1,
            }],
        }
    }

    pub fn push(&mut self, host: &str, m: u64, copies: u32) {
        self.terms.push(FormTerm {
            host: host.to_string(),
            m,
            copies,
        });
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total exponent contributed on each host (copies included).
    pub fn totals(&self) -> BTreeMap<&str, u64> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            *out.entry(t.host.as_str()).or_insert(0) += t.m * t.copies as u64;
        }
        out
    }

    pub fn merged(&self, other: &FormSpec) -> FormSpec {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        FormSpec { terms }
    }

    pub fn to_document_string(&self) -> String {
        serde_json::to_value(self)
            .expect("form spec serializes")
            .to_string()
    }

    pub fn from_document_str(doc: &str) -> Result<Self, ModelError> {
        serde_json::from_str(doc).map_err(|e| ModelError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("form spec serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cusp_data() -> ResolutionData {
        let comps = vec![
            Component {
                id: "E1".into(),
                kind: ComponentKind::Exceptional,
                n: 2,
                nu: 2,
            },
            Component {
                id: "E2".into(),
                kind: ComponentKind::Exceptional,
                n: 3,
                nu: 3,
            },
            Component {
                id: "E3".into(),
                kind: ComponentKind::Exceptional,
                n: 6,
                nu: 5,
            },
            Component {
                id: "B1".into(),
                kind: ComponentKind::Strict,
                n: 1,
                nu: 1,
            },
        ];
        let strata = vec![
            Stratum::new(vec!["E1".into()], 1),
            Stratum::new(vec!["E2".into()], 1),
            Stratum::new(vec!["E3".into()], -1),
            Stratum::new(vec!["B1".into()], 0),
            Stratum::new(vec!["E1".into(), "E3".into()], 1),
            Stratum::new(vec!["E2".into(), "E3".into()], 1),
            Stratum::new(vec!["E3".into(), "B1".into()], 1),
        ];
        ResolutionData::new(2, comps, strata)
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<ResolutionData>();
        assert_send_sync::<FormSpec>();
        assert_send_sync::<crate::ratfunc::RationalFunction>();
        assert_send_sync::<crate::cyclotomic::CyclotomicDivisor>();
        assert_send_sync::<crate::rational::RootOfUnity>();
    }

    #[test]
    fn cusp_data_validates() {
        assert!(cusp_data().validate().is_empty());
        assert_eq!(cusp_data().strict_gcd(), 1);
    }

    #[test]
    fn curvette_with_nonzero_n_flagged() {
        let mut rd = cusp_data();
        rd.components.push(Component {
            id: "C1".into(),
            kind: ComponentKind::Curvette,
            n: 2,
            nu: 2,
        });
        let violations = rd.validate();
        assert!(violations
            .iter()
            .any(|v| v.contains("curvette with nonzero N")));
    }

    #[test]
    fn duplicate_stratum_flagged() {
        let mut rd = cusp_data();
        rd.strata
            .push(Stratum::new(vec!["E1".into(), "E3".into()], 1));
        let violations = rd.validate();
        assert!(violations.iter().any(|v| v.contains("duplicate stratum")));
    }

    #[test]
    fn document_round_trip() {
        let rd = cusp_data();
        let doc = rd.to_document_string();
        let back = ResolutionData::from_document_str(&doc).unwrap();
        assert_eq!(rd, back);
        // serialize . parse . serialize is byte-stable
        assert_eq!(back.to_document_string(), doc);
    }

    #[test]
    fn unknown_reference_rejected() {
        let mut rd = cusp_data();
        rd.strata.push(Stratum::new(vec!["E9".into()], 1));
        let doc = serde_json::to_value(&rd).unwrap().to_string();
        assert!(matches!(
            ResolutionData::from_document_str(&doc),
            Err(ModelError::UnknownComponent(id)) if id == "E9"
        ));
    }

    #[test]
    fn unknown_keys_rejected() {
        let doc = r#"{"ambient_dim":2,"components":[],"strata":[],"mystery":1}"#;
        assert!(matches!(
            ResolutionData::from_document_str(doc),
            Err(ModelError::Parse(_))
        ));
    }

    #[test]
    fn parse_reads_specific_values() {
        let doc = r#"{"ambient_dim":2,"components":[{"id":"E6","kind":"exceptional","N":30,"nu":13}],"strata":[{"chi_local":-1,"components":["E6"]}]}"#;
        let rd = ResolutionData::from_document_str(doc).unwrap();
        let e6 = rd.component("E6").unwrap();
        assert_eq!((e6.nu, e6.n), (13, 30));
    }

    #[test]
    fn form_spec_round_trip_and_defaults() {
        let f = FormSpec::single("E1", 2);
        let doc = f.to_document_string();
        assert_eq!(FormSpec::from_document_str(&doc).unwrap(), f);
        // copies defaults to 1 when omitted
        let g = FormSpec::from_document_str(r#"{"terms":[{"host":"E1","m":3}]}"#).unwrap();
        assert_eq!(g.terms[0].copies, 1);
        assert_eq!(g.totals().get("E1"), Some(&3));
    }
}
