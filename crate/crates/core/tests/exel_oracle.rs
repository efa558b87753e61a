//! The Exel category against its action by partial bijections on subsets: `[x]` sends a set
//! `A` of arrows with range `d(x)` containing `d(x)` and `x^-1` to `xA`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use tpa_core::exel::{build_exel_category, verify_inverse_category, ExelElement};
use tpa_core::groupoid::{Arrow, Groupoid};

type Point = Vec<Arrow>;
type PartialMap = BTreeMap<Point, Point>;

fn points(g: &Groupoid) -> Vec<Point> {
    let mut out = Vec::new();
    for e in g.identities() {
        let rest: Vec<Arrow> = g.with_range(e).into_iter().filter(|&a| a != e).collect();
        for mask in 0u32..1 << rest.len() {
            let mut p: Vec<Arrow> = (0..rest.len()).filter(|&i| mask >> i & 1 == 1).map(|i| rest[i]).collect();
            p.push(e);
            p.sort_unstable();
            out.push(p);
        }
    }
    out
}

fn generator_map(g: &Groupoid, x: Arrow, pts: &[Point]) -> PartialMap {
    pts.iter()
        .filter(|p| p.contains(&g.d(x)) && p.contains(&g.inv(x)))
        .map(|p| {
            let moved: BTreeSet<Arrow> = p.iter().map(|&a| g.compose(x, a).unwrap()).collect();
            (p.clone(), moved.into_iter().collect())
        })
        .collect()
}

/// `f` after `h`.
fn compose(f: &PartialMap, h: &PartialMap) -> PartialMap {
    h.iter().filter_map(|(p, q)| f.get(q).map(|r| (p.clone(), r.clone()))).collect()
}

fn realize(g: &Groupoid, e: &ExelElement, gens: &[PartialMap]) -> PartialMap {
    let mut m = gens[e.base].clone();
    for &a in e.markers.iter().rev() {
        let eps = compose(&gens[a], &gens[g.inv(a)]);
        m = compose(&eps, &m);
    }
    m
}

fn check(g: &Groupoid) {
    let exel = build_exel_category(g).unwrap();
    assert!(verify_inverse_category(exel.semigroupoid()).passed());
    let pts = points(g);
    let gens: Vec<PartialMap> = g.arrows().map(|x| generator_map(g, x, &pts)).collect();

    // Closure of the generators under composition along composable bases.
    let mut closure: BTreeSet<(Arrow, PartialMap)> = g.arrows().map(|x| (x, gens[x].clone())).collect();
    loop {
        let cur: Vec<_> = closure.iter().cloned().collect();
        let before = closure.len();
        for (x, f) in &cur {
            for (y, h) in &cur {
                if let Some(xy) = g.compose(*x, *y) {
                    closure.insert((xy, compose(f, h)));
                }
            }
        }
        if closure.len() == before {
            break;
        }
    }

    let images: Vec<(Arrow, PartialMap)> = exel.elements().iter().map(|e| (e.base, realize(g, e, &gens))).collect();
    let distinct: BTreeSet<_> = images.iter().cloned().collect();
    assert_eq!(distinct.len(), images.len(), "standard forms must act differently");
    assert_eq!(distinct, closure, "standard forms must be exactly the generated partial bijections");

    let pos: HashMap<&(Arrow, PartialMap), usize> = images.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let s = exel.semigroupoid();
    for i in 0..s.len() {
        for j in 0..s.len() {
            let expected = g.compose(images[i].0, images[j].0).map(|xy| (xy, compose(&images[i].1, &images[j].1)));
            assert_eq!(s.mul(i, j), expected.as_ref().map(|m| pos[m]), "product of {} and {}", s.name(i), s.name(j));
        }
        let star = s.star(i).unwrap();
        let inv: PartialMap = images[i].1.iter().map(|(p, q)| (q.clone(), p.clone())).collect();
        assert_eq!(images[star], (g.inv(images[i].0), inv));
    }
}

#[test]
fn single_arrow_groupoid_acts_faithfully_on_subsets() {
    check(&Groupoid::single_arrow());
}

#[test]
fn small_groups_act_faithfully_on_subsets() {
    check(&Groupoid::trivial());
    check(&Groupoid::transitive(1, 2).unwrap());
    check(&Groupoid::transitive(1, 3).unwrap());
}

#[test]
fn larger_groupoids_act_faithfully_on_subsets() {
    check(&Groupoid::discrete(2).unwrap());
    check(&Groupoid::transitive(2, 2).unwrap());
    check(&Groupoid::single_arrow().disjoint_union(&Groupoid::transitive(1, 2).unwrap()));
}
