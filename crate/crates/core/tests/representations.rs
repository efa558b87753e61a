use tpa_core::exactalg::linalg::Matrix;
use tpa_core::exactalg::FieldSpec;
use tpa_core::exel::build_exel_category;
use tpa_core::fixtures::partial_single_arrow;
use tpa_core::groupoid::Groupoid;
use tpa_core::ksemigroup::{
    check_separating, generate, rep_from_theta, ring_to_semigroup, roundtrip_from_rep, theta_from_rep, SEMIGROUP_CAP,
};
use tpa_core::partrep::{
    compute_nx, enumerate_pm, monomial_representation, project_semigroup, rep_through_exel, MatrixSemigroup, SchurCaps,
};
use tpa_core::Error;

fn f3() -> FieldSpec {
    FieldSpec::Prime(3)
}

#[test]
fn monomial_matrices_project_onto_their_supports() {
    let f = f3();
    let target = MatrixSemigroup { field: f, dim: 2 };
    let mut swap = Matrix::zeros(f, 2, 2);
    swap.set(0, 1, f.one());
    swap.set(1, 0, f.one());
    let mut corner = Matrix::zeros(f, 2, 2);
    corner.set(0, 0, f.from_i64(2));
    let s = generate(&target, &[swap, corner], SEMIGROUP_CAP).unwrap();
    let proj = project_semigroup(&s.semigroup);
    assert!(proj.report.passed());
    // Nonzero elements fall into classes of size |K^*| = 2.
    assert_eq!(proj.classes.len(), (s.semigroup.len() - 1) / 2 + 1);
    for &x in &proj.section {
        assert_eq!(proj.class_of[x], proj.class_of[proj.section[proj.class_of[x]]]);
    }
}

#[test]
fn exel_lifts_induce_actions_that_recover_the_representation() {
    let g = Groupoid::single_arrow();
    let exel = build_exel_category(&g).unwrap();
    let pm = enumerate_pm(&g, f3(), SchurCaps::default()).unwrap();
    let mut built = 0;
    for comp in &pm.components {
        for lift in &comp.lifts {
            let rep = rep_through_exel(&exel, &monomial_representation(lift).unwrap());
            match theta_from_rep(&rep, SEMIGROUP_CAP) {
                Ok(ra) => {
                    assert!(ra.report.passed(), "{:?}", ra.report.first_failure());
                    assert!(roundtrip_from_rep(&rep, SEMIGROUP_CAP).unwrap().passed());
                    built += 1;
                }
                Err(Error::Refused(_)) => assert!(!compute_nx(&rep).report.passed()),
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }
    assert!(built > 0);
}

#[test]
fn crossed_product_representation_is_separating() {
    let rs = ring_to_semigroup(&partial_single_arrow(f3()).unwrap()).unwrap();
    let tr = rep_from_theta(&rs.tpa).unwrap();
    assert!(check_separating(&tr.rep, SEMIGROUP_CAP).unwrap().passed());
    let nx = compute_nx(&tr.rep);
    assert!(nx.report.passed());
}
