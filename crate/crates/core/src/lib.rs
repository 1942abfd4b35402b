//! Exact-arithmetic workbench for the combinatorics of resolved
//! singularities.
//!
//! The crate computes monodromy zeta functions (as formal cyclotomic
//! products) and local topological zeta functions (as exact rational
//! functions) from decorated resolution data, builds such data for plane
//! curves from blow-up programs, derives curvette multiplicity matrices,
//! and constructively realizes any prescribed monodromy eigenvalue as a
//! pole of a topological zeta function twisted by a differential form.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so everything here is safe to share across threads.

pub mod curvette;
pub mod cyclotomic;
pub mod factory;
pub mod families;
pub mod model;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod realize;
pub mod zeta;

pub use curvette::{check_theorems, curvette_matrix_2d, curvette_matrix_hd, CurvetteMatrix};
pub use cyclotomic::CyclotomicDivisor;
pub use factory::{build_from_program, intersection_matrix, BlowupProgram, IntersectionMatrix};
pub use model::{Component, ComponentKind, FormSpec, ResolutionData, Stratum};
pub use poly::UniPoly;
pub use ratfunc::RationalFunction;
pub use rational::{Rat, RootOfUnity};
pub use realize::{
    collision_filter, realize, residue_formula, select_component, solve_congruence,
    verify_principle, RealizationCertificate, RealizeError,
};
pub use zeta::{
    acampo_zeta, apply_form, eigenvalue_report, topological_zeta, CurvetteFormApplier,
    EigenvalueReport, FormApplier, ZetaResult,
};
