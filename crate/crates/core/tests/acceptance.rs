//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.

mod common;

use std::collections::HashSet;
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tpa_core::action::{is_global, restrict_global, verify_tpa};
use tpa_core::crossprod::{build_crossed_product, delta_product, morita_context, verify_associativity};
use tpa_core::exactalg::linalg::{add_vectors, scale_vector, Matrix};
use tpa_core::exactalg::{FieldSpec, Scalar};
use tpa_core::exel::{
    build_exel_category, check_partial_hom, exel_by_closure, semigroupoid_ideals, standard_forms,
    verify_inverse_category, Semigroupoid,
};
use tpa_core::fixtures::{partial_single_arrow, single_arrow_extension, trivial_action, D_G, G, G_INV, R_G};
use tpa_core::globalize::{
    build_globalization, verify_enveloping, verify_extension_data, verify_rerestriction, verify_step_identities,
    StarReading,
};
use tpa_core::groupoid::{verify_groupoid, Groupoid};
use tpa_core::ksemigroup::{
    embed_semigroup_cp, rep_from_theta, ring_to_semigroup, roundtrip_from_action, roundtrip_from_rep,
    semigroup_to_ring, verify_semigroup_tpa, SEMIGROUP_CAP,
};
use tpa_core::partrep::{
    category_factor_sets, enumerate_pm, equivalent_factor_sets, ideal_of_partial_idempotent, monomial_representation,
    partial_idempotent_of_ideal, verify_category_factor_set, verify_idempotent_criterion, FactorSet, SchurCaps,
};
use tpa_core::AxiomReport;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passed(rep: &AxiomReport) -> Outcome {
    ensure(rep.passed(), || {
        let names: Vec<String> = rep.failed_checks().map(|c| c.name.clone()).collect();
        format!("{}: failed {:?}", rep.subject, names)
    })
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn f3() -> FieldSpec {
    FieldSpec::Prime(3)
}

fn fixture_action_end_to_end() -> Outcome {
    for field in [FieldSpec::Rational, f3()] {
        let a = partial_single_arrow(field).map_err(err)?;
        let rep = verify_tpa(&a).map_err(err)?;
        passed(&rep)?;
        for c in [
            "(i) D_g^2 = D_g",
            "(ii) alpha_e is the identity",
            "(iii) alpha_g(D_g^-1 D_h) = D_g D_gh",
            "(iv) alpha_g alpha_h = w alpha_gh w^-1",
            "(v) w_{r(g),g} = w_{g,d(g)} = 1_g",
            "(vi) twisted cocycle identity",
        ] {
            ensure(rep.check(c).is_some_and(|k| k.evaluated > 0), || format!("{c} never evaluated"))?;
        }
        // (vi) at (g, g^-1, g) for a = x e3: both sides are -x e1.
        let alg = a.algebra();
        let (e1, e3) = (alg.basis_element(0), alg.basis_element(2));
        for x in [1i64, 2, -1] {
            let xs = field.from_i64(x);
            let av = scale_vector(&xs, &e3);
            let lhs = alg.mul(&a.alpha(G, &alg.mul(&av, a.twist(G_INV, G))).map_err(err)?, a.twist(G, D_G));
            let rhs = alg.mul_all(&[&a.alpha(G, &av).map_err(err)?, a.twist(G, G_INV), a.twist(R_G, G)]);
            let expected = scale_vector(&-xs.clone(), &e1);
            ensure(lhs == expected && rhs == expected, || format!("(vi) instance: {lhs:?} / {rhs:?}"))?;
        }
        let bad = a.with_twist(G_INV, G, e3.clone());
        let rep = verify_tpa(&bad).map_err(err)?;
        let vi = rep.check("(vi) twisted cocycle identity").ok_or("missing (vi)")?;
        ensure(!vi.passed(), || "mutation undetected".into())?;
        let want = vec!["g".to_string(), "g^-1".into(), "g".into()];
        ensure(vi.witnesses.iter().any(|w| w.tuple == want), || format!("witnesses {:?}", vi.witnesses))?;
    }
    Ok(())
}

fn fixture_crossed_product() -> Outcome {
    for field in [FieldSpec::Rational, f3()] {
        let a = partial_single_arrow(field).map_err(err)?;
        let cp = build_crossed_product(&a).map_err(err)?;
        ensure(cp.dim() == 6, || format!("dimension {}", cp.dim()))?;
        let assoc = verify_associativity(&cp);
        passed(&assoc)?;
        let n = assoc.check("associativity").map(|c| c.evaluated).unwrap_or(0);
        ensure(n == 216, || format!("{n} triples"))?;
        let mut unit = cp.algebra().zero();
        for e in a.groupoid().identities() {
            unit = add_vectors(&unit, &cp.element(e, &a.unit(e).map_err(err)?).map_err(err)?);
        }
        for i in 0..cp.dim() {
            let b = cp.algebra().basis_element(i);
            ensure(cp.mul(&unit, &b) == b && cp.mul(&b, &unit) == b, || format!("unit fails on basis {i}"))?;
        }
        ensure(cp.unit() == Some(&unit), || "stored unit differs".into())?;
        let alg = a.algebra();
        let (e1, e3) = (alg.basis_element(0), alg.basis_element(2));
        let lhs = cp.mul(&cp.element(G, &e1).map_err(err)?, &cp.element(G_INV, &e3).map_err(err)?);
        let minus_e1 = scale_vector(&-field.one(), &e1);
        let rhs = cp.element(R_G, &minus_e1).map_err(err)?;
        ensure(lhs == rhs, || format!("product {}", cp.render(&lhs)))?;
        // alpha_g(alpha_g^-1(e1) e3) w_{g,g^-1}
        let by_hand =
            alg.mul(&a.alpha(G, &alg.mul(&a.alpha_inv(G, &e1).map_err(err)?, &e3)).map_err(err)?, a.twist(G, G_INV));
        ensure(by_hand == minus_e1, || "formula does not give -e1".into())?;
        let dp = delta_product(&a, G, &e1, G_INV, &e3).map_err(err)?;
        ensure(dp == Some((R_G, minus_e1)), || format!("delta product {dp:?}"))?;
    }
    Ok(())
}

fn globalization() -> Outcome {
    for field in [FieldSpec::Rational, f3()] {
        let a = partial_single_arrow(field).map_err(err)?;
        let wt = single_arrow_extension(&a).map_err(err)?;
        passed(&verify_extension_data(&a, &wt, StarReading::Corrected).map_err(err)?)?;
        let res = build_globalization(&a, &wt).map_err(err)?;
        passed(&verify_enveloping(&a, &res).map_err(err)?)?;
        ensure(is_global(&res.global), || "beta is not global".into())?;
        passed(&verify_tpa(&res.global).map_err(err)?)?;
        passed(&verify_step_identities(&a, &res).map_err(err)?)?;
        passed(&verify_rerestriction(&a, &res).map_err(err)?)?;
    }
    Ok(())
}

fn morita() -> Outcome {
    for field in [FieldSpec::Rational, f3()] {
        let a = partial_single_arrow(field).map_err(err)?;
        let res = build_globalization(&a, &single_arrow_extension(&a).map_err(err)?).map_err(err)?;
        let m = morita_context(&a, &res).map_err(err)?;
        for c in ["B 1_A = N", "1_A B = M", "1_A B 1_A = A", "B 1_A B = B", "span(MN) = A", "span(NM) = B"] {
            ensure(m.checks.check_passed(c), || format!("{c} fails"))?;
        }
        passed(&m.checks)?;
    }
    Ok(())
}

fn exel_category() -> Outcome {
    let g = Groupoid::single_arrow();
    let by_closure: HashSet<_> = exel_by_closure(&g).map_err(err)?.into_iter().collect();
    let by_forms: HashSet<_> = standard_forms(&g).map_err(err)?.into_iter().collect();
    ensure(by_closure == by_forms, || format!("{} vs {} elements", by_closure.len(), by_forms.len()))?;
    let exel = build_exel_category(&g).map_err(err)?;
    ensure(exel.len() == by_forms.len(), || "category size differs".into())?;
    passed(&verify_inverse_category(exel.semigroupoid()))?;
    passed(&check_partial_hom(&g, exel.semigroupoid(), &exel.inclusion()).map_err(err)?)
}

fn factor_sets() -> Outcome {
    let g = Groupoid::single_arrow();
    let exel = build_exel_category(&g).map_err(err)?;
    for field in [FieldSpec::Prime(2), f3()] {
        let pm = enumerate_pm(&g, field, SchurCaps::default()).map_err(err)?;
        passed(&pm.report)?;
        let mut rhos: Vec<FactorSet> = pm.components.iter().flat_map(|c| c.lifts.iter().cloned()).collect();
        rhos.extend(category_factor_sets(&Semigroupoid::from_groupoid(&g), field, 100_000).map_err(err)?);
        ensure(!rhos.is_empty(), || "no factor sets".into())?;
        for rho in &rhos {
            passed(&verify_category_factor_set(rho).map_err(err)?)?;
            let gamma = monomial_representation(rho).map_err(err)?;
            let s = rho.carrier();
            for x in 0..s.len() {
                for y in 0..s.len() {
                    let prod: Matrix = gamma.get(x).mul(gamma.get(y));
                    let ok = match s.mul(x, y) {
                        Some(xy) => prod == gamma.get(xy).scale(rho.get(x, y)),
                        None => prod.is_zero(),
                    };
                    ensure(ok, || format!("monomial relation fails at ({}, {})", s.name(x), s.name(y)))?;
                }
            }
        }
        let ideals = semigroupoid_ideals(exel.semigroupoid()).map_err(err)?;
        let idems: Vec<_> = pm.idempotents().cloned().collect();
        ensure(ideals.len() == idems.len(), || format!("{} ideals, {} idempotents", ideals.len(), idems.len()))?;
        let mut from_ideals = HashSet::new();
        for i in &ideals {
            let eps = partial_idempotent_of_ideal(&exel, field, i);
            let mut back = ideal_of_partial_idempotent(&exel, &eps);
            back.sort_unstable();
            ensure(&back == i, || format!("ideal {i:?} returns as {back:?}"))?;
            from_ideals.insert(eps);
        }
        let idem_set: HashSet<_> = idems.iter().cloned().collect();
        ensure(from_ideals == idem_set, || "idempotents and ideal images differ".into())?;
        for eps in &idems {
            let i = ideal_of_partial_idempotent(&exel, eps);
            ensure(&partial_idempotent_of_ideal(&exel, field, &i) == eps, || "idempotent round trip fails".into())?;
        }
        let ids = g.identities();
        for sigma in pm.members() {
            if !ids.iter().all(|&e| sigma.get(e, e).is_one()) {
                continue;
            }
            let square = &sigma.product(sigma).map_err(err)? == sigma;
            let criterion = verify_idempotent_criterion(sigma).map_err(err)?.passed();
            let from_ideal = from_ideals.contains(sigma);
            ensure(square == criterion && criterion == from_ideal, || {
                format!(
                    "disagreement: square {square}, criterion {criterion}, ideal {from_ideal}\n{}",
                    sigma.render().join("\n")
                )
            })?;
        }
    }
    Ok(())
}

fn semigroup_round_trips() -> Outcome {
    let rs = ring_to_semigroup(&partial_single_arrow(f3()).map_err(err)?).map_err(err)?;
    passed(&verify_semigroup_tpa(&rs.tpa))?;
    let tr = rep_from_theta(&rs.tpa).map_err(err)?;
    let rep = roundtrip_from_rep(&tr.rep, SEMIGROUP_CAP).map_err(err)?;
    passed(&rep)?;
    ensure(rep.check_passed("psi(Gamma_theta(x)) = Gamma(x)"), || "psi check missing".into())?;
    let act = roundtrip_from_action(&rs.tpa).map_err(err)?;
    passed(&act.report)?;
    for c in [
        "n_x = 1_x d[r(x)]",
        "phi is injective",
        "phi is multiplicative",
        "phi intertwines theta",
        "phi(S) is the part generated by the 1_x",
        "phi(S_x) = T-bar ∩ T_x",
    ] {
        ensure(act.report.check(c).is_some_and(|k| k.passed() && k.evaluated > 0), || format!("{c} not established"))?;
    }
    Ok(())
}

fn ring_semigroup_correspondence() -> Outcome {
    let a = partial_single_arrow(f3()).map_err(err)?;
    let rs = ring_to_semigroup(&a).map_err(err)?;
    let minus = -f3().one();
    ensure(rs.tpa.sigma().get(G, G_INV) == &minus && rs.tpa.sigma().get(G_INV, G) == &minus, || {
        "twists are not -1".into()
    })?;
    let back = semigroup_to_ring(&rs.tpa, &rs.algebra, &rs.vectors).map_err(err)?;
    ensure(back == a, || "conversion does not round-trip".into())?;
    let e = embed_semigroup_cp(&a).map_err(err)?;
    passed(&e.report)?;
    ensure(e.injective && e.multiplicative && !e.surjective, || format!("fixture embedding {e:?}"))?;
    ensure(e.witness.is_some(), || "no witness outside the image".into())?;
    let t = embed_semigroup_cp(&trivial_action(f3()).map_err(err)?).map_err(err)?;
    passed(&t.report)?;
    ensure(t.injective && t.multiplicative && t.surjective, || format!("trivial embedding {t:?}"))
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a11);
    for run in 0..100 {
        let g = common::random_groupoid(&mut rng);
        let field = common::FIELDS[rng.gen_range(0..common::FIELDS.len())];
        let b = common::random_global_action(&mut rng, &g, field);
        let ideal = common::random_unital_ideal(&mut rng, b.algebra());
        let a = restrict_global(&b, &ideal).map_err(err)?;
        let rep = verify_tpa(&a).map_err(err)?;
        ensure(rep.passed(), || format!("restriction run {run} fails {:?}", rep.first_failure().map(|c| &c.name)))?;
    }
    let f5 = FieldSpec::Prime(5);
    let g = Groupoid::single_arrow();
    let mut pool: Vec<FactorSet> = category_factor_sets(&Semigroupoid::from_groupoid(&g), f5, 100_000).map_err(err)?;
    pool.extend(enumerate_pm(&g, f5, SchurCaps::default()).map_err(err)?.members().cloned());
    for run in 0..100 {
        let rho = &pool[rng.gen_range(0..pool.len())];
        let nu: Vec<Scalar> = (0..rho.len()).map(|_| common::random_unit(&mut rng, f5)).collect();
        let twisted = rho.twisted_by(&nu).map_err(err)?;
        let found =
            equivalent_factor_sets(rho, &twisted).map_err(err)?.ok_or(format!("twist run {run} not recovered"))?;
        ensure(rho.twisted_by(&found).map_err(err)? == twisted, || {
            format!("twist run {run}: witness does not reproduce")
        })?;
    }
    for run in 0..100 {
        let g = common::random_groupoid(&mut rng);
        let bad = common::mutate_groupoid(&mut rng, &g);
        ensure(!verify_groupoid(&bad).passed(), || format!("mutation run {run} undetected"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("fixture action: axioms, cocycle instance, mutation witness", fixture_action_end_to_end),
        ("fixture crossed product: dimension, associativity, unit, product", fixture_crossed_product),
        ("globalization: extension data, enveloping action, step identities, re-restriction", globalization),
        ("Morita context: corners and spans", morita),
        ("Exel category: two constructions, inverse category, partial homomorphism", exel_category),
        ("factor sets: monomial relation, idempotent bijection, three-way agreement", factor_sets),
        ("semigroup round trips over GF(3)", semigroup_round_trips),
        ("ring and semigroup correspondence, crossed product embedding", ring_semigroup_correspondence),
        ("randomized property suites", property_suites),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        match f() {
            Ok(()) => println!("PASS {} {name} ({:.1}s)", i + 1, start.elapsed().as_secs_f64()),
            Err(e) => {
                failures += 1;
                println!("FAIL {} {name}: {e}", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
