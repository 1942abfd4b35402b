//! Property tests for the spec-level invariants: normal-form stability
//! of rational functions, divisor order additivity, curvette matrix
//! theorems on random programs, zeta/strata-sum agreement, form
//! linearity, and congruence solvability.

mod common;

use common::{random_program, Rng};
use proptest::prelude::*;
use reszeta::curvette::check_theorems;
use reszeta::cyclotomic::CyclotomicDivisor;
use reszeta::factory::build_from_program;
use reszeta::model::FormSpec;
use reszeta::poly::UniPoly;
use reszeta::ratfunc::RationalFunction;
use reszeta::rational::{rat, rat_int};
use reszeta::realize::solve_congruence;
use reszeta::zeta::{apply_form, strata_sum_at, topological_zeta};
use reszeta::RootOfUnity;

fn small_poly() -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-6i64..=6, 1..5).prop_map(|c| UniPoly::from_ints(&c))
}

fn nonzero_poly() -> impl Strategy<Value = UniPoly> {
    small_poly().prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #[test]
    fn normalize_idempotent(num in small_poly(), den in nonzero_poly()) {
        let r = RationalFunction::new(num, den).unwrap();
        let again = RationalFunction::new(r.num().clone(), r.den().clone()).unwrap();
        prop_assert_eq!(&again, &r);
        prop_assert!(r.is_zero() || r.den().is_monic());
    }

    #[test]
    fn normalize_equality_stable(
        num in small_poly(),
        den in nonzero_poly(),
        scale in nonzero_poly(),
    ) {
        // a/b and (a g)/(b g) have identical normal forms
        let plain = RationalFunction::new(num.clone(), den.clone()).unwrap();
        let scaled = RationalFunction::new(&num * &scale, &den * &scale).unwrap();
        prop_assert_eq!(plain, scaled);
    }

    #[test]
    fn residue_is_cleared_evaluation(b in 1i64..=9, n in 1i64..=9, num in nonzero_poly()) {
        // laurent_leading(r, s0, 1) = ((s - s0) r)(s0) whenever s0 is a
        // simple pole
        let s0 = rat(-b, n);
        let den = UniPoly::affine(rat_int(b), rat_int(n));
        let r = RationalFunction::new(num, den).unwrap();
        if r.pole_order_at(&s0) == 1 {
            let cleared = RationalFunction::new(
                &r.num().clone() * &UniPoly::affine(-s0.clone(), rat_int(1)),
                r.den().clone(),
            )
            .unwrap();
            prop_assert_eq!(
                r.laurent_leading(&s0, 1).unwrap(),
                cleared.eval(&s0).unwrap()
            );
        }
    }

    #[test]
    fn divisor_order_additive(
        a in prop::collection::vec((1u64..40, -3i64..=3), 0..6),
        b in prop::collection::vec((1u64..40, -3i64..=3), 0..6),
        d in 1u64..20,
    ) {
        let za = CyclotomicDivisor::from_pairs(&a);
        let zb = CyclotomicDivisor::from_pairs(&b);
        prop_assert_eq!(za.mul(&zb).order_at(d), za.order_at(d) + zb.order_at(d));
    }

    #[test]
    fn curvette_theorems_on_random_programs(seed in 1u64..u64::MAX) {
        let mut rng = Rng::new(seed);
        let (program, m_mat, a) = random_program(&mut rng);
        prop_assert!(check_theorems(&a, 2).pass);
        let k = a.size();
        for i in 0..k {
            for j in 0..k {
                let dot: i64 = (0..k)
                    .map(|l| -m_mat.rows()[i][l] * a.entry(l, j) as i64)
                    .sum();
                prop_assert_eq!(dot, i64::from(i == j));
            }
        }
        // the dual graph is a tree: satellite centres sever exactly the
        // edge they subdivide, so pair strata count centres minus one
        let rd = build_from_program(&program).unwrap();
        let n_centres = program.centers.len();
        let exc_pairs = rd
            .strata
            .iter()
            .filter(|s| {
                s.components.len() == 2 && s.components.iter().all(|id| id.starts_with('E'))
            })
            .count();
        prop_assert_eq!(exc_pairs, n_centres - 1);

        // column recursion: a[i][m] = sum over j in J_m of a[i][j] for
        // every earlier curve i < m (later curvettes pass through the
        // centre itself and pick up an extra unit)
        for (m_idx, center) in program.centers.iter().enumerate() {
            if center.j.is_empty() {
                continue;
            }
            for i in 0..m_idx {
                let sum: u64 = center.j.iter().map(|&j| a.entry(i, j - 1)).sum();
                prop_assert_eq!(a.entry(i, m_idx), sum);
            }
        }
    }

    #[test]
    fn zeta_agrees_with_unreduced_sum(seed in 1u64..u64::MAX) {
        let mut rng = Rng::new(seed);
        let (program, _m, _a) = random_program(&mut rng);
        let rd = build_from_program(&program).unwrap();
        let z = topological_zeta(&rd, true).unwrap();
        for k in 1..=20i64 {
            let s = rat(5 * k - 31, 3 + (k % 7));
            if let Some(direct) = strata_sum_at(&rd, true, &s) {
                prop_assert_eq!(z.rf.eval(&s).unwrap(), direct);
            }
        }
    }

    #[test]
    fn form_application_linear(seed in 1u64..u64::MAX, m1 in 0u64..4, m2 in 0u64..4) {
        let mut rng = Rng::new(seed);
        let (program, _m, a) = random_program(&mut rng);
        let rd = build_from_program(&program).unwrap();
        let hosts: Vec<String> = rd.exceptional().map(|c| c.id.clone()).collect();
        let h1 = &hosts[0];
        let h2 = &hosts[hosts.len() / 2];
        let w1 = FormSpec::single(h1, m1);
        let w2 = FormSpec::single(h2, m2);
        let sequential = apply_form(&apply_form(&rd, &a, &w1).unwrap(), &a, &w2).unwrap();
        let merged = apply_form(&rd, &a, &w1.merged(&w2)).unwrap();
        prop_assert_eq!(sequential, merged);
    }

    #[test]
    fn congruence_always_solvable_on_valid_columns(
        seed in 1u64..u64::MAX,
        u in 0u64..30,
    ) {
        let mut rng = Rng::new(seed);
        let (program, _m, a) = random_program(&mut rng);
        let rd = build_from_program(&program).unwrap();
        let hosts: Vec<String> = rd.exceptional().map(|c| c.id.clone()).collect();
        let j0 = rng.below(hosts.len() as u64) as usize;
        let c = rd.component(&hosts[j0]).unwrap();
        // any divisor of N as target order
        let divisors: Vec<u64> = (1..=c.n).filter(|d| c.n.is_multiple_of(*d)).collect();
        let d = divisors[(u % divisors.len() as u64) as usize];
        let target = RootOfUnity::new(rat((u % d) as i64, d as i64));
        let base = solve_congruence(&a.column(j0), c.nu, c.n, &target).unwrap();
        // base really solves the congruence (against the reduced target)
        let lhs: u64 = c.nu
            + base
                .iter()
                .enumerate()
                .map(|(l, &m)| a.entry(l, j0) * m)
                .sum::<u64>();
        let ord = target.order();
        let want = (2 * c.n - (target.turn_numer() * (c.n / ord)) % c.n) % c.n;
        prop_assert_eq!(lhs % c.n, want % c.n);
    }
}
