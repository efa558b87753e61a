#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use tpa_core::action::TwistedPartialAction;
use tpa_core::exactalg::linalg::Vector;
use tpa_core::exactalg::{Algebra, FieldSpec, LinearMap, Scalar, Subspace};
use tpa_core::groupoid::{Arrow, Groupoid};

pub const FIELDS: [FieldSpec; 4] = [FieldSpec::Rational, FieldSpec::Prime(3), FieldSpec::Prime(5), FieldSpec::Prime(7)];

pub fn random_unit<R: Rng>(rng: &mut R, field: FieldSpec) -> Scalar {
    match field.order() {
        Some(p) => field.from_i64(rng.gen_range(1..p) as i64),
        None => {
            let v = rng.gen_range(1..=3i64);
            field.from_i64(if rng.gen_bool(0.5) { v } else { -v })
        }
    }
}

/// A disjoint union of one or two connected pieces with cyclic isotropy.
pub fn random_groupoid<R: Rng>(rng: &mut R) -> Groupoid {
    let piece = |rng: &mut R| Groupoid::transitive(rng.gen_range(1..=2), rng.gen_range(1..=3)).unwrap();
    let mut g = piece(rng);
    if rng.gen_bool(0.4) {
        g = g.disjoint_union(&piece(rng));
    }
    g
}

/// A finite G-set: each point sits over an identity and `act[x][i]` is `x . i` for points over `d(x)`.
struct GSet {
    base: Vec<Arrow>,
    act: Vec<HashMap<usize, usize>>,
}

fn random_gset<R: Rng>(rng: &mut R, g: &Groupoid) -> GSet {
    let mut base = Vec::new();
    let mut act: Vec<HashMap<usize, usize>> = vec![HashMap::new(); g.len()];
    for comp in g.components() {
        let idents: Vec<Arrow> = comp.iter().copied().filter(|&x| g.is_identity(x)).collect();
        for _ in 0..rng.gen_range(1..=2) {
            if rng.gen_bool(0.5) {
                // Left translation on the arrows of the component, each sitting over its range.
                let start = base.len();
                let pos: HashMap<Arrow, usize> = comp.iter().enumerate().map(|(i, &a)| (a, start + i)).collect();
                base.extend(comp.iter().map(|&a| g.r(a)));
                for &x in &comp {
                    for &a in &comp {
                        if let Some(xa) = g.compose(x, a) {
                            act[x].insert(pos[&a], pos[&xa]);
                        }
                    }
                }
            } else {
                // One point per object.
                let start = base.len();
                let pos: HashMap<Arrow, usize> = idents.iter().enumerate().map(|(i, &e)| (e, start + i)).collect();
                base.extend(idents.iter().copied());
                for &x in &comp {
                    act[x].insert(pos[&g.d(x)], pos[&g.r(x)]);
                }
            }
        }
    }
    GSet { base, act }
}

fn inverse_on_support(field: FieldSpec, v: &[Scalar]) -> Vector {
    v.iter().map(|c| c.inv().unwrap_or_else(|| field.zero())).collect()
}

/// A global action on a split algebra, permuting idempotents along a random G-set, with the
/// coboundary twists `u_{g,h} = c_g beta_g(c_h) c_gh^-1`.
pub fn random_global_action<R: Rng>(rng: &mut R, g: &Groupoid, field: FieldSpec) -> TwistedPartialAction {
    let gs = random_gset(rng, g);
    let n = gs.base.len();
    let alg = Algebra::split(n, field).unwrap();
    let over = |e: Arrow| -> Vec<usize> { (0..n).filter(|&i| gs.base[i] == e).collect() };
    let span = |idx: &[usize]| alg.span(idx.iter().map(|&i| alg.basis_element(i)).collect::<Vec<_>>().iter());
    let domains: Vec<Subspace> = g.arrows().map(|x| span(&over(g.r(x)))).collect();
    let maps: Vec<LinearMap> = g
        .arrows()
        .map(|x| {
            let src = over(g.d(x));
            let sources: Vec<Vector> = src.iter().map(|&i| alg.basis_element(i)).collect();
            let targets: Vec<Vector> = src.iter().map(|i| alg.basis_element(gs.act[x][i])).collect();
            LinearMap::from_images(domains[g.inv(x)].clone(), domains[x].clone(), &sources, &targets).unwrap()
        })
        .collect();
    let c: Vec<Vector> = g
        .arrows()
        .map(|x| {
            let mut v = alg.zero();
            for i in over(g.r(x)) {
                v[i] = if g.is_identity(x) { field.one() } else { random_unit(rng, field) };
            }
            v
        })
        .collect();
    let mut twists = HashMap::new();
    for (x, y, xy) in g.defined_products() {
        let moved = maps[x].apply(&c[y]).unwrap();
        twists.insert((x, y), alg.mul_all(&[&c[x], &moved, &inverse_on_support(field, &c[xy])]));
    }
    TwistedPartialAction::assemble(g.clone(), alg, domains, maps.into_iter().map(Some).collect(), &twists).unwrap()
}

/// A nonzero ideal spanned by a random set of idempotents.
pub fn random_unital_ideal<R: Rng>(rng: &mut R, alg: &Algebra) -> Subspace {
    let n = alg.dim();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let k = rng.gen_range(1..=n);
    alg.span(idx[..k].iter().map(|&i| alg.basis_element(i)).collect::<Vec<_>>().iter())
}

/// Changes one product or inverse entry to a different value.
pub fn mutate_groupoid<R: Rng>(rng: &mut R, g: &Groupoid) -> Groupoid {
    let n = g.len();
    loop {
        let x = rng.gen_range(0..n);
        if rng.gen_bool(0.3) {
            let v = rng.gen_range(0..n);
            if v != g.inv(x) {
                return g.with_inverse(x, v);
            }
        } else {
            let y = rng.gen_range(0..n);
            let v = if rng.gen_bool(0.2) { None } else { Some(rng.gen_range(0..n)) };
            if v != g.compose(x, y) {
                return g.with_product(x, y, v);
            }
        }
    }
}
