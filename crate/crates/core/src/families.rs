//! Named families of resolution data reproducing classical examples:
//! powers of a coordinate, normal crossings of two axes, the coprime
//! curve family `y^p - x^q`, an irreducible curve with two Puiseux
//! pairs, the Fermat surface singularity `x^d + y^d + z^d`, and the
//! even-dimensional Morse point.

use crate::curvette::{curvette_matrix_2d, CurvetteMatrix};
use crate::factory::{build_from_program, intersection_matrix, BlowupProgram, Branch, Center};
use crate::model::{Component, ComponentKind, FormSpec, ResolutionData, Stratum};
use crate::zeta::{apply_form, FormApplier, ZetaError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("family `{family}` does not define the form `{form}`")]
    UnsupportedForm { family: String, form: String },
    #[error(transparent)]
    Factory(#[from] crate::factory::FactoryError),
    #[error(transparent)]
    Curvette(#[from] crate::curvette::CurvetteError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    /// A plane curve resolved by a blow-up program.
    Curve,
    /// Smooth or normal crossings input with no exceptional curves.
    NormalCrossings,
    /// Fermat cone `x^d + y^d + z^d` resolved by one point blow-up.
    Fermat { d: u64 },
    /// Morse point in `n` (even) variables.
    Morse { n: u32 },
}

/// A named fixture: resolution data plus whatever extras the family can
/// provide (the originating program, its curvette matrix, and the hosts
/// whose curvettes realize the coordinate axes).
#[derive(Debug, Clone)]
pub struct Family {
    pub name: String,
    pub data: ResolutionData,
    pub program: Option<BlowupProgram>,
    pub curvette: Option<CurvetteMatrix>,
    pub x_host: Option<String>,
    pub y_host: Option<String>,
    pub kind: FamilyKind,
}

impl Family {
    /// Monomial form `x^(i-1) y^(j-1) dx ^ dy`, encoded on the curvette
    /// hosts of the two axes.
    pub fn omega_ij(&self, i: u64, j: u64) -> Result<FormSpec, FamilyError> {
        if i < 1 || j < 1 {
            return Err(FamilyError::InvalidParams(
                "omega_ij requires i, j >= 1".into(),
            ));
        }
        let (x, y) = match (&self.x_host, &self.y_host) {
            (Some(x), Some(y)) => (x.clone(), y.clone()),
            _ => {
                return Err(FamilyError::UnsupportedForm {
                    family: self.name.clone(),
                    form: "omega_ij".into(),
                })
            }
        };
        let mut w = FormSpec::empty();
        if i > 1 {
            w.push(&x, i - 1, 1);
        }
        if j > 1 {
            w.push(&y, j - 1, 1);
        }
        Ok(w)
    }

    /// Form `omega_b` of the smooth / normal crossings examples: the
    /// product of each axis raised to `b * (N_axis / d0) - 1`, where
    /// `d0` is the gcd of the strict multiplicities and `1 <= b <= d0`.
    pub fn omega_b(&self, b: u64) -> Result<FormSpec, FamilyError> {
        if self.kind != FamilyKind::NormalCrossings {
            return Err(FamilyError::UnsupportedForm {
                family: self.name.clone(),
                form: "omega_b".into(),
            });
        }
        let d0 = self.data.strict_gcd();
        if b < 1 || b > d0 {
            return Err(FamilyError::InvalidParams(format!(
                "omega_b requires 1 <= b <= {d0}"
            )));
        }
        let mut w = FormSpec::empty();
        for c in self.data.strict() {
            let m = b * (c.n / d0) - 1;
            if m > 0 {
                w.push(&c.id, m, 1);
            }
        }
        Ok(w)
    }

    /// Form `omega_i = x^(i-1) dx ^ dy ^ dz` of the Fermat family.
    pub fn omega_i(&self, i: u64) -> Result<FormSpec, FamilyError> {
        match self.kind {
            FamilyKind::Fermat { .. } if i >= 1 => Ok(if i > 1 {
                FormSpec::single("E", i - 1)
            } else {
                FormSpec::empty()
            }),
            FamilyKind::Fermat { .. } => {
                Err(FamilyError::InvalidParams("omega_i requires i >= 1".into()))
            }
            _ => Err(FamilyError::UnsupportedForm {
                family: self.name.clone(),
                form: "omega_i".into(),
            }),
        }
    }

    /// The applier that knows how to attach this family's curvettes.
    pub fn applier(&self) -> Box<dyn FormApplier + '_> {
        match self.kind {
            FamilyKind::Fermat { d } => Box::new(FermatApplier { d }),
            _ => Box::new(GenericApplier {
                matrix: self.curvette.clone(),
            }),
        }
    }
}

struct GenericApplier {
    matrix: Option<CurvetteMatrix>,
}

impl FormApplier for GenericApplier {
    fn apply(&self, rd: &ResolutionData, form: &FormSpec) -> Result<ResolutionData, ZetaError> {
        let empty = CurvetteMatrix::from_rows(vec![]);
        let m = self.matrix.as_ref().unwrap_or(&empty);
        apply_form(rd, m, form)
    }
}

/// `f = x^n`: a single smooth strict component, no exceptional curves.
pub fn xn(n: u64) -> Result<Family, FamilyError> {
    if n < 1 {
        return Err(FamilyError::InvalidParams("xn requires n >= 1".into()));
    }
    let program = BlowupProgram::new(
        vec![],
        vec![Branch {
            host: None,
            mult: n,
        }],
    );
    let data = build_from_program(&program)?;
    Ok(Family {
        name: format!("xn_{n}"),
        data,
        program: Some(program),
        curvette: None,
        x_host: Some("B1".into()),
        y_host: None,
        kind: FamilyKind::NormalCrossings,
    })
}

/// `f = x^(d n1) y^(d n2)` with coprime `n1, n2`: two axes crossing at
/// the origin.
pub fn xy(d: u64, n1: u64, n2: u64) -> Result<Family, FamilyError> {
    if d < 1 || n1 < 1 || n2 < 1 {
        return Err(FamilyError::InvalidParams(
            "xy requires positive d, n1, n2".into(),
        ));
    }
    if gcd(n1, n2) != 1 {
        return Err(FamilyError::InvalidParams(format!(
            "xy requires gcd(n1, n2) = 1, got gcd({n1}, {n2}) = {}",
            gcd(n1, n2)
        )));
    }
    let program = BlowupProgram::new(
        vec![],
        vec![
            Branch {
                host: None,
                mult: d * n1,
            },
            Branch {
                host: None,
                mult: d * n2,
            },
        ],
    );
    let data = build_from_program(&program)?;
    Ok(Family {
        name: format!("xy_{d}_{n1}_{n2}"),
        data,
        program: Some(program),
        curvette: None,
        x_host: Some("B1".into()),
        y_host: Some("B2".into()),
        kind: FamilyKind::NormalCrossings,
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Minimal embedded resolution program of `y^p - x^q` for coprime
/// `2 <= p < q`, driven by the subtractive Euclidean algorithm.
///
/// The running state is the local equation `y^a = x^b` of the strict
/// transform at the current point, together with the identities of the
/// two curves `{x = 0}` and `{y = 0}` through that point (an exceptional
/// curve once created, or the strict transform of the original axis).
/// Blowing up replaces `(a, b)` by `(a, b - a)` or `(a - b, b)` and
/// keeps the axis labels in step, until the transversal `(1, 1)` state
/// at a crossing of two exceptional curves is blown up once more and
/// the strict transform lands on a free point of the last curve.
pub fn pq(p: u64, q: u64) -> Result<Family, FamilyError> {
    if p < 2 || p >= q || gcd(p, q) != 1 {
        return Err(FamilyError::InvalidParams(format!(
            "pq requires coprime 2 <= p < q, got ({p}, {q})"
        )));
    }
    let mut centers: Vec<Center> = Vec::new();
    let mut label_x: Option<usize> = None; // exceptional curve carrying {x=0}'s point
    let mut label_y: Option<usize> = None;
    let mut y_host = 1usize;
    let (mut a, mut b) = (p, q);
    loop {
        let i = centers.len() + 1;
        let mut j: Vec<usize> = label_x.into_iter().chain(label_y).collect();
        j.sort_unstable();
        centers.push(Center { j, m: a.min(b) });
        if label_y.is_none() {
            y_host = i;
        }
        if a == b {
            break; // transversal crossing blown up; strict transform is free on E_i
        } else if a < b {
            b -= a;
            label_x = Some(i);
        } else {
            a -= b;
            label_y = Some(i);
        }
    }
    let last = centers.len();
    let program = BlowupProgram::new(
        centers,
        vec![Branch {
            host: Some(last),
            mult: 1,
        }],
    );
    let data = build_from_program(&program)?;
    let m = intersection_matrix(&program)?;
    let curvette = curvette_matrix_2d(&m)?;
    Ok(Family {
        name: format!("pq_{p}_{q}"),
        data,
        program: Some(program),
        curvette: Some(curvette),
        x_host: Some("E1".into()),
        y_host: Some(format!("E{y_host}")),
        kind: FamilyKind::Curve,
    })
}

/// The irreducible curve `(y^2 - x^3)^2 - x^6 y`, one of the simplest
/// singularities with two Puiseux pairs. The program is pinned by the
/// published numerical data `(nu_i, N_i)` and dual graph.
pub fn ex28() -> Result<Family, FamilyError> {
    let program = BlowupProgram::new(
        vec![
            Center { j: vec![], m: 4 },
            Center { j: vec![1], m: 2 },
            Center {
                j: vec![1, 2],
                m: 2,
            },
            Center { j: vec![3], m: 2 },
            Center { j: vec![4], m: 1 },
            Center {
                j: vec![4, 5],
                m: 1,
            },
        ],
        vec![Branch {
            host: Some(6),
            mult: 1,
        }],
    );
    let data = build_from_program(&program)?;
    let m = intersection_matrix(&program)?;
    let curvette = curvette_matrix_2d(&m)?;
    Ok(Family {
        name: "ex28".into(),
        data,
        program: Some(program),
        curvette: Some(curvette),
        x_host: Some("E1".into()),
        y_host: Some("E2".into()),
        kind: FamilyKind::Curve,
    })
}

/// The cusp `y^2 - x^3`.
pub fn cusp() -> Result<Family, FamilyError> {
    let mut f = pq(2, 3)?;
    f.name = "cusp".into();
    Ok(f)
}

/// `f = x^d + y^d + z^d` with `d >= 3`, resolved by blowing up the
/// origin: one exceptional plane `E` with `(nu, N) = (3, d)` meeting the
/// strict transform `F` in a smooth degree-`d` curve.
pub fn fermat(d: u64) -> Result<Family, FamilyError> {
    if d < 3 {
        return Err(FamilyError::InvalidParams("fermat requires d >= 3".into()));
    }
    let di = d as i64;
    let components = vec![
        Component {
            id: "E".into(),
            kind: ComponentKind::Exceptional,
            n: d,
            nu: 3,
        },
        Component {
            id: "F".into(),
            kind: ComponentKind::Strict,
            n: 1,
            nu: 1,
        },
    ];
    let strata = vec![
        Stratum::new(vec!["E".into()], di * di - 3 * di + 3),
        Stratum::new(vec!["F".into()], 0),
        Stratum::new(vec!["E".into(), "F".into()], 3 * di - di * di),
    ];
    let mut data = ResolutionData::new(3, components, strata);
    data.curvette_matrix = Some(vec![vec![1]]);
    Ok(Family {
        name: format!("fermat_{d}"),
        data,
        program: None,
        curvette: Some(CurvetteMatrix::from_rows(vec![vec![1]])),
        x_host: Some("E".into()),
        y_host: None,
        kind: FamilyKind::Fermat { d },
    })
}

/// Morse point `y_1^2 + ... + y_n^2` for even `n`: one blow-up, the
/// exceptional projective space meeting the smooth quadric strict
/// transform in an even-dimensional quadric of Euler characteristic `n`.
pub fn morse(n: u32) -> Result<Family, FamilyError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(FamilyError::InvalidParams(
            "morse fixture requires even n >= 2".into(),
        ));
    }
    let components = vec![
        Component {
            id: "E".into(),
            kind: ComponentKind::Exceptional,
            n: 2,
            nu: n as u64,
        },
        Component {
            id: "F".into(),
            kind: ComponentKind::Strict,
            n: 1,
            nu: 1,
        },
    ];
    let strata = vec![
        Stratum::new(vec!["E".into()], 0),
        Stratum::new(vec!["F".into()], 0),
        Stratum::new(vec!["E".into(), "F".into()], n as i64),
    ];
    let data = ResolutionData::new(n, components, strata);
    Ok(Family {
        name: format!("morse_{n}"),
        data,
        program: None,
        curvette: None,
        x_host: None,
        y_host: None,
        kind: FamilyKind::Morse { n },
    })
}

/// Attaches hyperplane-section curvettes on the Fermat family: each copy
/// is the strict transform of a generic plane through the origin, meeting
/// the exceptional plane in a line. Strata are recomputed by
/// inclusion-exclusion over the line arrangement.
pub struct FermatApplier {
    pub d: u64,
}

impl FormApplier for FermatApplier {
    fn apply(&self, rd: &ResolutionData, form: &FormSpec) -> Result<ResolutionData, ZetaError> {
        if form.is_empty() {
            return Ok(rd.clone());
        }
        let d = self.d as i64;
        // expand terms into one exponent per copy
        let mut exponents: Vec<u64> = Vec::new();
        for term in &form.terms {
            if term.host != "E" {
                return Err(ZetaError::HostNotExceptional(term.host.clone()));
            }
            for _ in 0..term.copies {
                exponents.push(term.m);
            }
        }
        let t = exponents.len() as i64;
        let total: u64 = exponents.iter().sum();

        let mut components = vec![
            Component {
                id: "E".into(),
                kind: ComponentKind::Exceptional,
                n: self.d,
                nu: 3 + total,
            },
            Component {
                id: "F".into(),
                kind: ComponentKind::Strict,
                n: 1,
                nu: 1,
            },
        ];
        for (k, &m) in exponents.iter().enumerate() {
            components.push(Component {
                id: format!("H{}", k + 1),
                kind: ComponentKind::Curvette,
                n: 0,
                nu: m + 1,
            });
        }

        let mut strata = Vec::new();
        // E minus the degree-d curve and t generic lines
        let chi_e = 3 - (3 * d - d * d) - 2 * t + d * t + t * (t - 1) / 2;
        strata.push(Stratum::new(vec!["E".into()], chi_e));
        strata.push(Stratum::new(vec!["F".into()], 0));
        strata.push(Stratum::new(
            vec!["E".into(), "F".into()],
            (3 * d - d * d) - t * d,
        ));
        for k in 0..exponents.len() {
            let h = format!("H{}", k + 1);
            strata.push(Stratum::new(vec![h.clone()], 0));
            // the line, minus its d points on F and its crossings with the other lines
            strata.push(Stratum::new(vec!["E".into(), h.clone()], 2 - d - (t - 1)));
            strata.push(Stratum::new(vec!["E".into(), "F".into(), h.clone()], d));
            for k2 in k + 1..exponents.len() {
                let h2 = format!("H{}", k2 + 1);
                strata.push(Stratum::new(vec!["E".into(), h.clone(), h2], 1));
            }
        }
        let mut out = ResolutionData::new(3, components, strata);
        out.curvette_matrix = rd.curvette_matrix.clone();
        Ok(out)
    }
}

/// Builds a family by CLI name with positional or `key=value` parameters.
pub fn by_name(name: &str, params: &[(Option<String>, u64)]) -> Result<Family, FamilyError> {
    let get = |idx: usize, key: &str| -> Result<u64, FamilyError> {
        for (k, v) in params {
            if k.as_deref().is_some_and(|k| k.eq_ignore_ascii_case(key)) {
                return Ok(*v);
            }
        }
        params
            .iter()
            .filter(|(k, _)| k.is_none())
            .nth(idx)
            .map(|(_, v)| *v)
            .ok_or_else(|| {
                FamilyError::InvalidParams(format!("missing parameter `{key}` for `{name}`"))
            })
    };
    match name {
        "xn" => xn(get(0, "n")?),
        "xy" => xy(get(0, "d")?, get(1, "n1")?, get(2, "n2")?),
        "pq" => pq(get(0, "p")?, get(1, "q")?),
        "cusp" => cusp(),
        "ex28" => ex28(),
        "fermat" => fermat(get(0, "d")?),
        "morse" => {
            let n = get(0, "n")?;
            let n = u32::try_from(n)
                .map_err(|_| FamilyError::InvalidParams(format!("n = {n} is out of range")))?;
            morse(n)
        }
        other => Err(FamilyError::UnknownFamily(other.to_string())),
    }
}
