mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tpa_core::action::{restrict_global, verify_tpa};
use tpa_core::crossprod::{build_crossed_product, verify_associativity};
use tpa_core::exactalg::linalg::Matrix;
use tpa_core::exactalg::{FieldSpec, Scalar};
use tpa_core::exel::Semigroupoid;
use tpa_core::groupoid::{verify_groupoid, Groupoid};
use tpa_core::ksemigroup::{
    build_semigroup_crossed_product, check_k_cancellative, generate, ring_to_semigroup, semigroup_to_ring,
    verify_ksemigroup, verify_semigroup_tpa, SEMIGROUP_CAP,
};
use tpa_core::partrep::{category_factor_sets, equivalent_factor_sets, project_semigroup, MatrixSemigroup};
use tpa_core::Error;

fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(2u64), Just(3), Just(5), Just(7), Just(11)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prime_field_axioms(p in prime(), a in -50i64..50, b in -50i64..50, c in -50i64..50) {
        let f = FieldSpec::Prime(p);
        let (a, b, c) = (f.from_i64(a), f.from_i64(b), f.from_i64(c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if let Some(inv) = a.inv() {
            prop_assert!((&a * &inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn rational_inverses(n in -40i64..40, d in 1i64..40) {
        let q = FieldSpec::Rational;
        let x = &q.from_i64(n) * &q.from_i64(d).inv().unwrap();
        match x.inv() {
            Some(y) => prop_assert!((&x * &y).is_one()),
            None => prop_assert_eq!(n, 0),
        }
    }

    #[test]
    fn generated_groupoids_are_groupoids(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert!(verify_groupoid(&common::random_groupoid(&mut rng)).passed());
    }

    #[test]
    fn one_entry_mutations_break_groupoids(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_groupoid(&mut rng);
        prop_assert!(!verify_groupoid(&common::mutate_groupoid(&mut rng, &g)).passed());
    }

    #[test]
    fn restrictions_of_global_actions_are_partial_actions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = common::random_groupoid(&mut rng);
        let field = common::FIELDS[rng.gen_range(0..common::FIELDS.len())];
        let b = common::random_global_action(&mut rng, &g, field);
        prop_assert!(verify_tpa(&b).unwrap().passed());
        let ideal = common::random_unital_ideal(&mut rng, b.algebra());
        let a = restrict_global(&b, &ideal).unwrap();
        prop_assert!(verify_tpa(&a).unwrap().passed());
    }

    #[test]
    fn crossed_products_of_restrictions_are_unital_and_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Groupoid::transitive(rng.gen_range(1..=2), rng.gen_range(1..=2)).unwrap();
        let b = common::random_global_action(&mut rng, &g, FieldSpec::Prime(5));
        let a = restrict_global(&b, &common::random_unital_ideal(&mut rng, b.algebra())).unwrap();
        let cp = build_crossed_product(&a).unwrap();
        prop_assert!(verify_associativity(&cp).passed());
        let u = cp.unit().unwrap().clone();
        for i in 0..cp.dim() {
            let e = cp.algebra().basis_element(i);
            prop_assert_eq!(cp.mul(&u, &e), e.clone());
            prop_assert_eq!(cp.mul(&e, &u), e);
        }
    }

    #[test]
    fn scalar_twists_survive_forgetting_addition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Groupoid::transitive(rng.gen_range(1..=2), 1).unwrap();
        let b = common::random_global_action(&mut rng, &g, FieldSpec::Prime(3));
        prop_assume!(b.algebra().dim() <= 6);
        let a = restrict_global(&b, &common::random_unital_ideal(&mut rng, b.algebra())).unwrap();
        match ring_to_semigroup(&a) {
            Ok(rs) => {
                prop_assert!(verify_semigroup_tpa(&rs.tpa).passed());
                prop_assert_eq!(semigroup_to_ring(&rs.tpa, &rs.algebra, &rs.vectors).unwrap(), a);
                let scp = build_semigroup_crossed_product(&rs.tpa).unwrap();
                prop_assert!(scp.report().passed());
            }
            Err(Error::Unsupported(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn twisted_factor_sets_are_recognized(seed in any::<u64>(), p in prop_oneof![Just(3u64), Just(5)]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FieldSpec::Prime(p);
        let g = if rng.gen_bool(0.5) { Groupoid::single_arrow() } else { Groupoid::transitive(1, 2).unwrap() };
        let pool = category_factor_sets(&Semigroupoid::from_groupoid(&g), f, 100_000).unwrap();
        let rho = &pool[rng.gen_range(0..pool.len())];
        let nu: Vec<Scalar> = (0..rho.len()).map(|_| common::random_unit(&mut rng, f)).collect();
        let twisted = rho.twisted_by(&nu).unwrap();
        let found = equivalent_factor_sets(rho, &twisted).unwrap().unwrap();
        prop_assert_eq!(rho.twisted_by(&found).unwrap(), twisted);
    }

    #[test]
    fn generated_matrix_semigroups_project_onto_a_section(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FieldSpec::Prime(2);
        let target = MatrixSemigroup { field: f, dim: 2 };
        let gens: Vec<Matrix> = (0..rng.gen_range(1..=2))
            .map(|_| {
                let mut m = Matrix::zeros(f, 2, 2);
                for i in 0..2 {
                    for j in 0..2 {
                        m.set(i, j, f.from_i64(rng.gen_range(0..2)));
                    }
                }
                m
            })
            .collect();
        let s = generate(&target, &gens, SEMIGROUP_CAP).unwrap();
        prop_assert!(verify_ksemigroup(&s.semigroup).passed());
        prop_assert!(check_k_cancellative(&s.semigroup).passed());
        let proj = project_semigroup(&s.semigroup);
        prop_assert!(proj.report.passed());
    }
}
