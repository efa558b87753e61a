//! Enumeration of factor sets over small prime fields and the decomposition of `pm(G)`.
//!
//! Factor sets of a category with zero-set an ideal `I` are solutions of the multiplicative
//! 2-cocycle equations on the pairs outside `I`. Taking discrete logarithms turns these into a
//! homogeneous linear system over `Z/(q-1)`, solved by diagonalization. Groupoid factor sets are
//! produced from those of the Exel category through the quotient formula and then verified by
//! lifting to a monomial representation.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::zmod::{kernel_generators, span_group, DiscreteLog};
use super::{
    check_domain_closure, equivalent_factor_sets, ideal_of_partial_idempotent, monomial_representation_unchecked,
    partial_idempotent_of_ideal, rep_through_exel, verify_idempotent_criterion, verify_partial_rep, FactorSet,
    PartialFactorSet,
};
use crate::error::{Error, Result};
use crate::exactalg::FieldSpec;
use crate::exel::{build_exel_category, ideal_closure, semigroupoid_ideals, ExelCategory, Semigroupoid};
use crate::groupoid::{Arrow, Groupoid};
use crate::report::AxiomReport;

/// Guards for [`enumerate_pm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchurCaps {
    pub max_arrows: usize,
    pub max_field: u64,
    /// Largest number of cocycles materialized for one ideal.
    pub max_cocycles: usize,
}

impl Default for SchurCaps {
    fn default() -> Self {
        SchurCaps { max_arrows: 4, max_field: 5, max_cocycles: 200_000 }
    }
}

/// Log-vector of a factor set over the pairs of its carrier; `None` marks zero.
type Key = Vec<Option<u64>>;

struct CocycleSystem {
    vars: Vec<(usize, usize)>,
    var_index: HashMap<(usize, usize), usize>,
    gens: Vec<Vec<u64>>,
}

/// Multiplicative cocycles of a category vanishing exactly on pairs with product in `ideal`.
fn cocycle_system(s: &Semigroupoid, ideal: &[usize], m: u64) -> CocycleSystem {
    let n = s.len();
    let mut member = vec![false; n];
    for &i in ideal {
        member[i] = true;
    }
    let vars: Vec<(usize, usize)> = s.defined_pairs().filter(|&(_, _, z)| !member[z]).map(|(x, y, _)| (x, y)).collect();
    let var_index: HashMap<(usize, usize), usize> = vars.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for &(x, y) in &vars {
        let xy = s.mul(x, y).expect("defined");
        for z in 0..n {
            let (Some(yz), Some(xyz)) = (s.mul(y, z), s.mul(xy, z)) else { continue };
            if member[xyz] {
                continue;
            }
            let mut row = vec![0i64; vars.len()];
            row[var_index[&(x, y)]] += 1;
            row[var_index[&(xy, z)]] += 1;
            row[var_index[&(x, yz)]] -= 1;
            row[var_index[&(y, z)]] -= 1;
            if row.iter().any(|&v| v != 0) {
                rows.push(row);
            }
        }
    }
    let gens = kernel_generators(&rows, vars.len(), m);
    CocycleSystem { vars, var_index, gens }
}

fn factor_set_from_logs(
    s: &Semigroupoid,
    dl: &DiscreteLog,
    field: FieldSpec,
    vars: &[(usize, usize)],
    logs: &[u64],
) -> FactorSet {
    let n = s.len();
    let mut values = vec![field.zero(); n * n];
    for (&(x, y), &l) in vars.iter().zip(logs) {
        values[x * n + y] = dl.exp(l);
    }
    FactorSet::new(s.clone(), field, values).expect("shape")
}

fn require_prime(field: FieldSpec, max: u64) -> Result<()> {
    match field {
        FieldSpec::Prime(p) if p <= max => Ok(()),
        FieldSpec::Prime(p) => Err(Error::Capacity(format!("field of order {p} exceeds the cap {max}"))),
        FieldSpec::Rational => Err(Error::Unsupported("enumeration needs a finite prime field".into())),
    }
}

/// Every factor set of a finite category over a prime field.
///
/// The zero-set of a factor set is `{(x,y) : xy in I}` for an ideal `I`, so the enumeration runs
/// over ideals and solves the cocycle equations on the remaining pairs.
pub fn category_factor_sets(carrier: &Semigroupoid, field: FieldSpec, cap: usize) -> Result<Vec<FactorSet>> {
    if !carrier.is_category() {
        return Err(Error::Argument("carrier is not flagged as a category".into()));
    }
    require_prime(field, u64::MAX)?;
    let dl = DiscreteLog::new(field)?;
    let m = dl.order();
    let mut out = Vec::new();
    for ideal in semigroupoid_ideals(carrier)? {
        let sys = cocycle_system(carrier, &ideal, m);
        let room = cap.saturating_sub(out.len());
        for logs in span_group(&sys.gens, sys.vars.len(), m, room.max(1))? {
            if out.len() >= cap {
                return Err(Error::Capacity(format!("more than {cap} factor sets")));
            }
            out.push(factor_set_from_logs(carrier, &dl, field, &sys.vars, &logs));
        }
    }
    Ok(out)
}

/// `sigma(x,y) = rho([x],[y]) rho([x^-1],[x][y]) / rho([x^-1],[xy])` on pairs with
/// `rho([x],[y]) != 0`, zero elsewhere.
pub fn quotient_factor_set(exel: &ExelCategory, rho: &FactorSet) -> Result<PartialFactorSet> {
    let e = exel.semigroupoid();
    if rho.carrier() != e {
        return Err(Error::Argument("factor set does not live on the Exel category".into()));
    }
    let g = exel.groupoid();
    let field = rho.field();
    let mut values = vec![field.zero(); g.len() * g.len()];
    for (x, y, xy) in g.defined_products() {
        let (bx, by, bxi, bxy) = (exel.generator(x), exel.generator(y), exel.generator(g.inv(x)), exel.generator(xy));
        let v = rho.get(bx, by);
        if v.is_zero() {
            continue;
        }
        let p = e.mul(bx, by).expect("composable generators");
        let den = rho.get(bxi, bxy).inv().ok_or_else(|| {
            Error::Structure(format!("rho([{}^-1],[{}]) vanishes on a domain pair", g.name(x), g.name(xy)))
        })?;
        values[x * g.len() + y] = &(v * rho.get(bxi, p)) * &den;
    }
    FactorSet::new(Semigroupoid::from_groupoid(g), field, values)
}

/// One zero-set class of `pm(G)`.
#[derive(Clone, Debug)]
pub struct PmComponent {
    /// Composable pairs outside the domain.
    pub zero_pairs: Vec<(Arrow, Arrow)>,
    pub members: Vec<PartialFactorSet>,
    /// A factor set of `E(G)` lifting each member.
    pub lifts: Vec<FactorSet>,
    pub idempotent: Option<PartialFactorSet>,
    /// The ideal of `E(G)` matching the idempotent.
    pub ideal: Vec<usize>,
    /// One member per equivalence class.
    pub class_representatives: Vec<PartialFactorSet>,
}

/// The enumerated semigroup `pm(G)` with its components and the checks run on it.
#[derive(Clone, Debug)]
pub struct PmDecomposition {
    pub groupoid: Groupoid,
    pub field: FieldSpec,
    pub exel_size: usize,
    /// Number of ideals of `E(G)`, including the empty one.
    pub exel_ideal_count: usize,
    /// Ideals of `E(G)` generated by their products `[x][y]`.
    pub generated_ideals: Vec<Vec<usize>>,
    pub components: Vec<PmComponent>,
    pub report: AxiomReport,
}

impl PmDecomposition {
    pub fn len(&self) -> usize {
        self.components.iter().map(|c| c.members.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn members(&self) -> impl Iterator<Item = &PartialFactorSet> {
        self.components.iter().flat_map(|c| c.members.iter())
    }

    pub fn idempotents(&self) -> impl Iterator<Item = &PartialFactorSet> {
        self.components.iter().filter_map(|c| c.idempotent.as_ref())
    }

    pub fn class_count(&self) -> usize {
        self.components.iter().map(|c| c.class_representatives.len()).sum()
    }
}

fn key_of(dl: &DiscreteLog, f: &FactorSet) -> Key {
    f.values().iter().map(|v| dl.log(v)).collect()
}

fn add_keys(a: &Key, b: &Key, m: u64) -> Key {
    a.iter().zip(b).map(|(x, y)| Some((x.as_ref()? + y.as_ref()?) % m)).collect()
}

/// Enumerates `pm(G)` over a prime field, groups it into components by zero-set, finds the
/// idempotents and equivalence classes, and checks the correspondences with ideals of `E(G)`.
pub fn enumerate_pm(g: &Groupoid, field: FieldSpec, caps: SchurCaps) -> Result<PmDecomposition> {
    if g.len() > caps.max_arrows {
        return Err(Error::Capacity(format!("{} arrows exceed the cap {}", g.len(), caps.max_arrows)));
    }
    require_prime(field, caps.max_field)?;
    let exel = build_exel_category(g)?;
    let e = exel.semigroupoid();
    let dl = DiscreteLog::new(field)?;
    let m = dl.order();
    let n = g.len();
    let ideals = semigroupoid_ideals(e)?;
    let pairs: Vec<(Arrow, Arrow, Arrow)> = g.defined_products().collect();
    let mut report = AxiomReport::new(format!("pm over GF({})", field.order().unwrap_or(0)));

    // sigma keys with a lifting rho, first seen wins.
    let mut found: Vec<(Key, Vec<u64>, usize)> = Vec::new();
    let mut systems: Vec<CocycleSystem> = Vec::new();
    let mut seen: HashSet<Key> = HashSet::new();
    for ideal in &ideals {
        let sys = cocycle_system(e, ideal, m);
        let mut member = vec![false; e.len()];
        for &i in ideal {
            member[i] = true;
        }
        // sigma log as a linear form in the cocycle variables, per domain pair.
        let forms: Vec<Option<[(usize, i64); 3]>> = (0..n * n)
            .map(|i| {
                let (x, y) = (i / n, i % n);
                let xy = g.compose(x, y)?;
                let (bx, by) = (exel.generator(x), exel.generator(y));
                let p = e.mul(bx, by).expect("composable generators");
                if member[p] {
                    return None;
                }
                let (bxi, bxy) = (exel.generator(g.inv(x)), exel.generator(xy));
                Some([(sys.var_index[&(bx, by)], 1), (sys.var_index[&(bxi, p)], 1), (sys.var_index[&(bxi, bxy)], -1)])
            })
            .collect();
        let image = |logs: &[u64]| -> Key {
            forms
                .iter()
                .map(|f| {
                    f.map(|terms| {
                        terms.iter().map(|&(v, c)| (c * logs[v] as i64).rem_euclid(m as i64) as u64).sum::<u64>() % m
                    })
                })
                .collect()
        };
        let zero_logs = vec![0u64; sys.vars.len()];
        let mut queue: VecDeque<(Key, Vec<u64>)> = VecDeque::from([(image(&zero_logs), zero_logs)]);
        let mut local: HashSet<Key> = HashSet::new();
        local.insert(queue[0].0.clone());
        while let Some((key, logs)) = queue.pop_front() {
            if seen.insert(key.clone()) {
                if found.len() >= caps.max_cocycles {
                    return Err(Error::Capacity(format!("more than {} factor sets", caps.max_cocycles)));
                }
                found.push((key.clone(), logs.clone(), systems.len()));
            }
            for gen in &sys.gens {
                let next: Vec<u64> = logs.iter().zip(gen).map(|(a, b)| (a + b) % m).collect();
                let k = image(&next);
                if local.insert(k.clone()) {
                    queue.push_back((k, next));
                }
            }
        }
        systems.push(sys);
    }

    // Verify each sigma by lifting to a monomial representation of E(G).
    report.declare("lift reproduces sigma");
    report.declare("lift is a category factor set");
    report.declare("domain closure");
    let mut entries: Vec<(Key, PartialFactorSet, FactorSet)> = Vec::new();
    for (key, logs, si) in &found {
        let sys = &systems[*si];
        let rho = factor_set_from_logs(e, &dl, field, &sys.vars, logs);
        let sigma = quotient_factor_set(&exel, &rho)?;
        debug_assert_eq!(&key_of(&dl, &sigma), key);
        let cat = super::verify_category_factor_set(&rho)?;
        report.record("lift is a category factor set", cat.passed(), sigma.render(), || "lift fails its axioms".into());
        let rep = rep_through_exel(&exel, &monomial_representation_unchecked(&rho));
        let (r, extracted) = verify_partial_rep(&rep);
        let ok = r.passed() && extracted == sigma;
        report.record("lift reproduces sigma", ok, sigma.render(), || match r.first_failure() {
            Some(c) => format!("lifted representation fails '{}'", c.name),
            None => "extracted factor set differs".into(),
        });
        let closure = check_domain_closure(&sigma)?;
        report.record("domain closure", closure.passed(), sigma.render(), || "domain chain broken".into());
        entries.push((key.clone(), sigma, rho));
    }

    let all_keys: HashSet<Key> = entries.iter().map(|(k, _, _)| k.clone()).collect();
    report.declare("closed under pointwise product");
    for (a, _, _) in &entries {
        for (b, _, _) in &entries {
            let p = add_keys(a, b, m);
            report.record("closed under pointwise product", all_keys.contains(&p), Vec::<String>::new(), || {
                "product of two factor sets was not enumerated".into()
            });
        }
    }

    // Components by zero-set.
    let grouped = super::group_by_key(entries.into_iter().map(|(k, s, r)| {
        let z: Vec<bool> = k.iter().map(Option::is_none).collect();
        (z, (k, s, r))
    }));
    let generated_ideals: Vec<Vec<usize>> = ideals
        .iter()
        .filter(|ideal| {
            let member: HashSet<usize> = ideal.iter().copied().collect();
            let gens: Vec<usize> = pairs
                .iter()
                .map(|&(x, y, _)| e.mul(exel.generator(x), exel.generator(y)).expect("composable"))
                .filter(|p| member.contains(p))
                .collect();
            ideal_closure(e, &gens) == **ideal
        })
        .cloned()
        .collect();

    report.declare("one idempotent per component");
    report.declare("idempotent round trip through ideals");
    report.declare("twist orbits stay in the component");
    report.declare("members equivalent to their class representative");
    report.declare("class representatives pairwise inequivalent");
    let mut components = Vec::new();
    for (zero, items) in grouped {
        let zero_pairs: Vec<(Arrow, Arrow)> =
            pairs.iter().filter(|&&(x, y, _)| zero[x * n + y]).map(|&(x, y, _)| (x, y)).collect();
        let idems: Vec<&PartialFactorSet> = items.iter().map(|(_, s, _)| s).filter(|s| s.is_idempotent()).collect();
        report.record(
            "one idempotent per component",
            idems.len() == 1,
            zero_pairs.iter().map(|&(x, y)| format!("({}, {})", g.name(x), g.name(y))),
            || format!("{} idempotents", idems.len()),
        );
        let idempotent = idems.first().map(|s| (*s).clone());
        let ideal = idempotent.as_ref().map(|eps| ideal_of_partial_idempotent(&exel, eps)).unwrap_or_default();
        if let Some(eps) = &idempotent {
            let back = partial_idempotent_of_ideal(&exel, field, &ideal);
            report.record(
                "idempotent round trip through ideals",
                &back == eps && generated_ideals.contains(&ideal),
                eps.render(),
                || "ideal does not reproduce the idempotent".into(),
            );
        }
        // Equivalence classes as orbits under elementary twists nu = generator at one arrow.
        let keys: HashMap<Key, usize> = items.iter().enumerate().map(|(i, (k, _, _))| (k.clone(), i)).collect();
        let shifts: Vec<Key> = (0..n)
            .map(|v| {
                (0..n * n)
                    .map(|i| {
                        let (x, y) = (i / n, i % n);
                        if zero[i] {
                            return None;
                        }
                        let z = g.compose(x, y).expect("domain pairs compose");
                        let d = i64::from(x == v) + i64::from(y == v) - i64::from(z == v);
                        Some(d.rem_euclid(m as i64) as u64)
                    })
                    .collect()
            })
            .collect();
        let mut class_of = vec![usize::MAX; items.len()];
        let mut reps: Vec<usize> = Vec::new();
        for start in 0..items.len() {
            if class_of[start] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(start);
            class_of[start] = c;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for sh in &shifts {
                    let next = add_keys(&items[i].0, sh, m);
                    match keys.get(&next) {
                        Some(&j) => {
                            if class_of[j] == usize::MAX {
                                class_of[j] = c;
                                queue.push_back(j);
                            }
                        }
                        None => report.record("twist orbits stay in the component", false, items[i].1.render(), || {
                            "twisted factor set was not enumerated".into()
                        }),
                    }
                }
            }
        }
        report.record("twist orbits stay in the component", true, Vec::<String>::new(), String::new);
        for (i, (_, s, _)) in items.iter().enumerate() {
            let r = &items[reps[class_of[i]]].1;
            let ok = equivalent_factor_sets(r, s)?.is_some();
            report
                .record("members equivalent to their class representative", ok, s.render(), || "no twist found".into());
        }
        for (a, &ra) in reps.iter().enumerate() {
            for &rb in &reps[a + 1..] {
                let ok = equivalent_factor_sets(&items[ra].1, &items[rb].1)?.is_none();
                report.record("class representatives pairwise inequivalent", ok, items[rb].1.render(), || {
                    "representatives are equivalent".into()
                });
            }
        }
        let class_representatives = reps.iter().map(|&i| items[i].1.clone()).collect();
        let (members, lifts) = items.into_iter().map(|(_, s, r)| (s, r)).unzip();
        components.push(PmComponent { zero_pairs, members, lifts, idempotent, ideal, class_representatives });
    }
    components
        .sort_by(|a, b| a.zero_pairs.len().cmp(&b.zero_pairs.len()).then_with(|| a.zero_pairs.cmp(&b.zero_pairs)));

    // Idempotents versus generated ideals, as semilattices.
    let idem_ideals: Vec<&Vec<usize>> =
        components.iter().filter(|c| c.idempotent.is_some()).map(|c| &c.ideal).collect();
    let distinct: BTreeSet<&Vec<usize>> = idem_ideals.iter().copied().collect();
    report.fact(
        "idempotents biject with generated ideals",
        distinct.len() == idem_ideals.len() && distinct.len() == generated_ideals.len(),
        format!("{} idempotents, {} generated ideals", idem_ideals.len(), generated_ideals.len()),
    );
    report.declare("product of idempotents matches union of ideals");
    for a in components.iter().filter(|c| c.idempotent.is_some()) {
        for b in components.iter().filter(|c| c.idempotent.is_some()) {
            let (ea, eb) = (a.idempotent.as_ref().expect("filtered"), b.idempotent.as_ref().expect("filtered"));
            let prod = ea.product(eb)?;
            let union: Vec<usize> =
                a.ideal.iter().chain(&b.ideal).copied().collect::<BTreeSet<_>>().into_iter().collect();
            let ok = ideal_of_partial_idempotent(&exel, &prod) == union
                && partial_idempotent_of_ideal(&exel, field, &union) == prod;
            report.record("product of idempotents matches union of ideals", ok, prod.render(), || {
                "union mismatch".into()
            });
        }
    }

    // Pointwise square, criterion and ideal construction agree on normalized members.
    let ideal_idems: HashSet<PartialFactorSet> =
        generated_ideals.iter().map(|j| partial_idempotent_of_ideal(&exel, field, j)).collect();
    report.declare("three-way idempotent agreement");
    for c in &components {
        for s in &c.members {
            if !g.identities().iter().all(|&e0| s.get(e0, e0).is_one()) {
                continue;
            }
            let square = s.product(s)? == *s;
            let crit = verify_idempotent_criterion(s)?.passed();
            let from_ideal = ideal_idems.contains(s);
            report.record("three-way idempotent agreement", square == crit && crit == from_ideal, s.render(), || {
                format!("square {square}, criterion {crit}, ideal {from_ideal}")
            });
        }
    }

    Ok(PmDecomposition {
        groupoid: g.clone(),
        field,
        exel_size: exel.len(),
        exel_ideal_count: ideals.len(),
        generated_ideals,
        components,
        report: report.finish(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partrep::verify_category_factor_set;

    fn brute_force(s: &Semigroupoid, field: FieldSpec) -> HashSet<FactorSet> {
        let pairs: Vec<(usize, usize)> = s.defined_pairs().map(|(x, y, _)| (x, y)).collect();
        let elems = field.elements();
        let q = elems.len();
        let mut out = HashSet::new();
        for code in 0..q.pow(pairs.len() as u32) {
            let mut c = code;
            let mut values = vec![field.zero(); s.len() * s.len()];
            for &(x, y) in &pairs {
                values[x * s.len() + y] = elems[c % q].clone();
                c /= q;
            }
            let f = FactorSet::new(s.clone(), field, values).unwrap();
            if verify_category_factor_set(&f).unwrap().passed() {
                out.insert(f);
            }
        }
        out
    }

    #[test]
    fn category_enumeration_matches_brute_force() {
        let f3 = FieldSpec::Prime(3);
        for g in [Groupoid::trivial(), Groupoid::discrete(2).unwrap(), Groupoid::transitive(1, 2).unwrap()] {
            let s = Semigroupoid::from_groupoid(&g);
            let fast: HashSet<FactorSet> = category_factor_sets(&s, f3, 100_000).unwrap().into_iter().collect();
            assert_eq!(fast, brute_force(&s, f3), "{:?}", g.names());
        }
    }

    #[test]
    fn discrete_two_objects_over_f2() {
        let g = Groupoid::discrete(2).unwrap();
        let pm = enumerate_pm(&g, FieldSpec::Prime(2), SchurCaps::default()).unwrap();
        assert!(pm.report.passed(), "{:?}", pm.report.failed_checks().collect::<Vec<_>>());
        assert_eq!(pm.components.len(), 4);
        assert_eq!(pm.exel_ideal_count, 4);
    }

    #[test]
    fn trivial_group_over_f2() {
        let pm = enumerate_pm(&Groupoid::trivial(), FieldSpec::Prime(2), SchurCaps::default()).unwrap();
        assert!(pm.report.passed());
        let normalized: Vec<_> = pm.members().filter(|s| s.get(0, 0).is_one()).collect();
        assert_eq!(normalized.len(), 1);
    }

    #[test]
    fn caps_are_enforced() {
        let g = Groupoid::transitive(1, 5).unwrap();
        assert!(matches!(enumerate_pm(&g, FieldSpec::Prime(2), SchurCaps::default()), Err(Error::Capacity(_))));
        let g = Groupoid::single_arrow();
        assert!(matches!(enumerate_pm(&g, FieldSpec::Prime(7), SchurCaps::default()), Err(Error::Capacity(_))));
    }
}
