//! Finite groupoids given by composition and inverse tables.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::report::AxiomReport;

/// Dense arrow identifier, the position of the arrow in input order.
pub type Arrow = usize;

/// Largest groupoid accepted by [`groupoid_ideals`].
pub const IDEAL_CAP: usize = 64;

/// A finite groupoid. Domain, range and identities are derived from the tables.
///
/// Construction only checks shapes; [`verify_groupoid`] checks the axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Groupoid {
    names: Vec<String>,
    compose: Vec<Option<Arrow>>,
    inverse: Vec<Arrow>,
}

impl Groupoid {
    /// Builds a groupoid from composition triples `(x, y, xy)` and the inverse of each arrow.
    pub fn from_tables(names: Vec<String>, products: &[(Arrow, Arrow, Arrow)], inverse: Vec<Arrow>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Structure("a groupoid needs at least one arrow".into()));
        }
        if inverse.len() != n {
            return Err(Error::Structure(format!("inverse table has {} entries for {n} arrows", inverse.len())));
        }
        if let Some(&bad) = inverse.iter().find(|&&x| x >= n) {
            return Err(Error::Structure(format!("inverse refers to arrow id {bad} out of range")));
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if let Some(j) = seen.insert(name.clone(), i) {
                return Err(Error::Structure(format!("arrow name {name:?} used twice (ids {j} and {i})")));
            }
        }
        let mut compose = vec![None; n * n];
        for &(x, y, z) in products {
            if x >= n || y >= n || z >= n {
                return Err(Error::Structure(format!("composition ({x}, {y}, {z}) refers to an arrow out of range")));
            }
            match compose[x * n + y] {
                Some(old) if old != z => {
                    return Err(Error::Structure(format!(
                        "composition {}*{} declared twice with different results",
                        names[x], names[y]
                    )))
                }
                _ => compose[x * n + y] = Some(z),
            }
        }
        Ok(Groupoid { names, compose, inverse })
    }

    /// Builds a groupoid from named triples `"x*y=z"` style data and inverse pairs `(x, x^-1)`.
    pub fn from_named(names: &[&str], products: &[(&str, &str, &str)], inverses: &[(&str, &str)]) -> Result<Self> {
        let index: HashMap<&str, Arrow> = names.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let look = |s: &str| index.get(s).copied().ok_or_else(|| Error::Structure(format!("unknown arrow {s:?}")));
        let triples =
            products.iter().map(|&(x, y, z)| Ok((look(x)?, look(y)?, look(z)?))).collect::<Result<Vec<_>>>()?;
        let mut inverse: Vec<Option<Arrow>> = vec![None; names.len()];
        for &(x, y) in inverses {
            let (x, y) = (look(x)?, look(y)?);
            for (a, b) in [(x, y), (y, x)] {
                match inverse[a] {
                    Some(old) if old != b => {
                        return Err(Error::Structure(format!("conflicting inverse for {:?}", names[a])))
                    }
                    _ => inverse[a] = Some(b),
                }
            }
        }
        let inverse = inverse
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Structure(format!("no inverse declared for {:?}", names[i]))))
            .collect::<Result<Vec<_>>>()?;
        Groupoid::from_tables(names.iter().map(|s| s.to_string()).collect(), &triples, inverse)
    }

    /// The trivial group `{e}`.
    pub fn trivial() -> Self {
        Groupoid::from_tables(vec!["e".into()], &[(0, 0, 0)], vec![0]).expect("valid")
    }

    /// The connected groupoid with two objects and trivial isotropy: `g, g^-1, r(g), d(g)` in that order.
    pub fn single_arrow() -> Self {
        Groupoid::from_named(
            &["g", "g^-1", "r(g)", "d(g)"],
            &[
                ("g", "g^-1", "r(g)"),
                ("g^-1", "g", "d(g)"),
                ("r(g)", "g", "g"),
                ("g", "d(g)", "g"),
                ("d(g)", "g^-1", "g^-1"),
                ("g^-1", "r(g)", "g^-1"),
                ("r(g)", "r(g)", "r(g)"),
                ("d(g)", "d(g)", "d(g)"),
            ],
            &[("g", "g^-1"), ("r(g)", "r(g)"), ("d(g)", "d(g)")],
        )
        .expect("valid")
    }

    /// `objects x objects x Z/order` with `(i,j,a)(j,k,b) = (i,k,a+b)`.
    ///
    /// Every finite connected groupoid with cyclic isotropy is of this form.
    pub fn transitive(objects: usize, order: usize) -> Result<Self> {
        if objects == 0 || order == 0 {
            return Err(Error::Argument("need at least one object and a nontrivial group order".into()));
        }
        let id = |i: usize, j: usize, a: usize| (i * objects + j) * order + a;
        let mut names = Vec::new();
        let mut inverse = Vec::new();
        let mut triples = Vec::new();
        for i in 0..objects {
            for j in 0..objects {
                for a in 0..order {
                    names.push(format!("{i}>{j}:{a}"));
                    inverse.push(id(j, i, (order - a) % order));
                    for k in 0..objects {
                        for b in 0..order {
                            triples.push((id(i, j, a), id(j, k, b), id(i, k, (a + b) % order)));
                        }
                    }
                }
            }
        }
        Groupoid::from_tables(names, &triples, inverse)
    }

    /// `n` objects and nothing but their identities.
    pub fn discrete(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("need at least one object".into()));
        }
        let names = (1..=n).map(|i| format!("e{i}")).collect();
        let triples: Vec<_> = (0..n).map(|i| (i, i, i)).collect();
        Groupoid::from_tables(names, &triples, (0..n).collect())
    }

    /// Disjoint union; arrows of `other` follow those of `self` and get a suffix when names clash.
    pub fn disjoint_union(&self, other: &Groupoid) -> Self {
        let shift = self.len();
        let mut names = self.names.clone();
        for n in &other.names {
            let mut name = n.clone();
            while names.contains(&name) {
                name.push('\'');
            }
            names.push(name);
        }
        let mut triples = Vec::new();
        for (g, h, z) in
            self.defined_products().chain(other.defined_products().map(|(g, h, z)| (g + shift, h + shift, z + shift)))
        {
            triples.push((g, h, z));
        }
        let mut inverse = self.inverse.clone();
        inverse.extend(other.inverse.iter().map(|&x| x + shift));
        Groupoid::from_tables(names, &triples, inverse).expect("union of valid tables")
    }

    /// Copy with one inverse entry replaced. Used to build mutated inputs.
    pub fn with_inverse(&self, g: Arrow, inv: Arrow) -> Self {
        let mut out = self.clone();
        out.inverse[g] = inv;
        out
    }

    /// Copy with one product entry replaced.
    pub fn with_product(&self, g: Arrow, h: Arrow, value: Option<Arrow>) -> Self {
        let mut out = self.clone();
        let n = self.len();
        out.compose[g * n + h] = value;
        out
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn arrows(&self) -> std::ops::Range<Arrow> {
        0..self.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: Arrow) -> &str {
        &self.names[g]
    }

    pub fn find(&self, name: &str) -> Option<Arrow> {
        self.names.iter().position(|n| n == name)
    }

    pub fn arrow(&self, name: &str) -> Result<Arrow> {
        self.find(name).ok_or_else(|| Error::Argument(format!("unknown arrow {name:?}")))
    }

    pub fn compose(&self, g: Arrow, h: Arrow) -> Option<Arrow> {
        self.compose[g * self.len() + h]
    }

    /// Composition of a word, `None` if some step is undefined.
    pub fn compose_all(&self, word: &[Arrow]) -> Option<Arrow> {
        let (&first, rest) = word.split_first()?;
        rest.iter().try_fold(first, |acc, &x| self.compose(acc, x))
    }

    pub fn defined_products(&self) -> impl Iterator<Item = (Arrow, Arrow, Arrow)> + '_ {
        let n = self.len();
        (0..n * n).filter_map(move |k| self.compose[k].map(|z| (k / n, k % n, z)))
    }

    pub fn inv(&self, g: Arrow) -> Arrow {
        self.inverse[g]
    }

    /// `g^-1 g`. Falls back to `g` itself when the table leaves it undefined.
    pub fn d(&self, g: Arrow) -> Arrow {
        self.compose(self.inv(g), g).unwrap_or(g)
    }

    /// `g g^-1`. Falls back to `g` itself when the table leaves it undefined.
    pub fn r(&self, g: Arrow) -> Arrow {
        self.compose(g, self.inv(g)).unwrap_or(g)
    }

    /// Whether `gh` should exist, i.e. `d(g) = r(h)`.
    pub fn composable(&self, g: Arrow, h: Arrow) -> bool {
        self.d(g) == self.r(h)
    }

    pub fn is_identity(&self, g: Arrow) -> bool {
        self.d(g) == g
    }

    /// The identities, in arrow order.
    pub fn identities(&self) -> Vec<Arrow> {
        let mut ids: Vec<Arrow> = self.arrows().map(|g| self.d(g)).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Arrows with range `e`, in arrow order.
    pub fn with_range(&self, e: Arrow) -> Vec<Arrow> {
        self.arrows().filter(|&h| self.r(h) == e).collect()
    }

    /// Connected components as sorted arrow lists, ordered by their least arrow.
    pub fn components(&self) -> Vec<Vec<Arrow>> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for g in self.arrows() {
            for other in [self.d(g), self.r(g), self.inv(g)] {
                let (a, b) = (find(&mut parent, g), find(&mut parent, other));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: Vec<Vec<Arrow>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for g in self.arrows() {
            let root = find(&mut parent, g);
            let i = *slot.entry(root).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[i].push(g);
        }
        groups
    }

    pub fn render_tuple(&self, t: &[Arrow]) -> Vec<String> {
        t.iter().map(|&x| self.names[x].clone()).collect()
    }
}

/// Checks the groupoid axioms on the tables, with a witness for each failure.
pub fn verify_groupoid(g: &Groupoid) -> AxiomReport {
    let mut rep = AxiomReport::new("groupoid");
    let n = g.len();
    let name = |x: Arrow| g.name(x).to_string();
    for x in g.arrows() {
        let inv = g.inv(x);
        rep.record("inverse is an involution", g.inv(inv) == x, [name(x)], || {
            format!("inverse of inverse is {}", name(g.inv(inv)))
        });
        let left = g.compose(inv, x);
        let right = g.compose(x, inv);
        rep.record("g^-1 g and g g^-1 are defined", left.is_some() && right.is_some(), [name(x)], || {
            "missing product with the inverse".into()
        });
        if let (Some(dx), Some(rx)) = (left, right) {
            let ok = g.compose(dx, dx) == Some(dx)
                && g.inv(dx) == dx
                && g.compose(rx, rx) == Some(rx)
                && g.inv(rx) == rx
                && g.compose(x, dx) == Some(x)
                && g.compose(rx, x) == Some(x);
            rep.record("d(g), r(g) are identities acting on g", ok, [name(x)], || {
                format!("d = {}, r = {}", name(dx), name(rx))
            });
            let r_inv = g.compose(inv, g.inv(inv));
            rep.record("d(g) = r(g^-1)", r_inv == Some(dx), [name(x)], || format!("r(g^-1) = {:?}", r_inv.map(name)));
        }
    }
    for x in 0..n {
        for y in 0..n {
            let defined = g.compose(x, y).is_some();
            rep.record("gh exists iff d(g) = r(h)", defined == g.composable(x, y), [name(x), name(y)], || {
                format!("defined = {defined}, d(g) = {}, r(h) = {}", name(g.d(x)), name(g.r(y)))
            });
            if let Some(z) = g.compose(x, y) {
                let ok = g.d(z) == g.d(y) && g.r(z) == g.r(x);
                rep.record("d(gh) = d(h) and r(gh) = r(g)", ok, [name(x), name(y)], || format!("product {}", name(z)));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            let xy = g.compose(x, y);
            for z in 0..n {
                let yz = g.compose(y, z);
                let left = xy.and_then(|p| g.compose(p, z));
                let right = yz.and_then(|p| g.compose(x, p));
                if left.is_none() && right.is_none() {
                    continue;
                }
                rep.record("associativity", left == right, [name(x), name(y), name(z)], || {
                    format!("(xy)z = {:?}, x(yz) = {:?}", left.map(name), right.map(name))
                });
            }
        }
    }
    rep.declare("associativity");
    rep.finish()
}

/// Checks the axioms and fails with a structural error naming the first broken one.
pub fn require_groupoid(g: &Groupoid) -> Result<()> {
    let rep = verify_groupoid(g);
    match rep.first_failure() {
        None => Ok(()),
        Some(c) => Err(Error::Structure(format!(
            "groupoid axiom failed: {} at {:?}",
            c.name,
            c.witnesses.first().map(|w| w.tuple.clone()).unwrap_or_default()
        ))),
    }
}

/// All `n`-tuples `(x1, ..., xn)` whose product `x1 ... xn` exists, in lexicographic order.
pub fn composable_tuples(g: &Groupoid, n: usize) -> Result<Vec<Vec<Arrow>>> {
    if n < 2 {
        return Err(Error::Argument("tuples need length at least 2".into()));
    }
    let mut out: Vec<Vec<Arrow>> = g.arrows().map(|x| vec![x]).collect();
    for _ in 1..n {
        let mut next = Vec::new();
        for t in &out {
            let last = *t.last().expect("nonempty");
            for y in g.arrows() {
                if g.compose(last, y).is_some() {
                    let mut u = t.clone();
                    u.push(y);
                    next.push(u);
                }
            }
        }
        out = next;
    }
    Ok(out)
}

/// True if `set` (a membership mask) absorbs products on both sides.
pub fn is_groupoid_ideal(g: &Groupoid, set: &[bool]) -> bool {
    g.defined_products().all(|(x, y, z)| !(set[x] || set[y]) || set[z])
}

/// All two-sided ideals, each a sorted arrow list. These are the unions of connected components.
///
/// Ordered by the bitmask of included components, so the empty ideal comes first.
pub fn groupoid_ideals(g: &Groupoid) -> Result<Vec<Vec<Arrow>>> {
    if g.len() > IDEAL_CAP {
        return Err(Error::Capacity(format!("ideal enumeration is capped at {IDEAL_CAP} arrows")));
    }
    let comps = g.components();
    if comps.len() > 20 {
        return Err(Error::Capacity("too many connected components to enumerate ideals".into()));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1 << comps.len()) {
        let mut set = vec![false; g.len()];
        for (i, c) in comps.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for &x in c {
                    set[x] = true;
                }
            }
        }
        if is_groupoid_ideal(g, &set) {
            out.push(g.arrows().filter(|&x| set[x]).collect());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: filter every subset of arrows.
    fn brute_force_ideals(g: &Groupoid) -> Vec<Vec<Arrow>> {
        let n = g.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let mut ok = true;
            for x in 0..n {
                for y in 0..n {
                    if let Some(z) = g.compose(x, y) {
                        let hit = mask >> x & 1 == 1 || mask >> y & 1 == 1;
                        if hit && mask >> z & 1 == 0 {
                            ok = false;
                        }
                    }
                }
            }
            if ok {
                out.push((0..n).filter(|&x| mask >> x & 1 == 1).collect());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn trivial_group() {
        let g = Groupoid::trivial();
        assert!(verify_groupoid(&g).passed());
        assert_eq!(composable_tuples(&g, 3).unwrap(), vec![vec![0, 0, 0]]);
        assert_eq!(groupoid_ideals(&g).unwrap(), vec![vec![], vec![0]]);
    }

    #[test]
    fn single_arrow_groupoid() {
        let g = Groupoid::single_arrow();
        assert!(verify_groupoid(&g).passed());
        let (a, ai, r, d) = (0, 1, 2, 3);
        assert_eq!(g.identities(), vec![r, d]);
        assert_eq!((g.d(a), g.r(a)), (d, r));
        let pairs = composable_tuples(&g, 2).unwrap();
        for p in [[a, ai], [ai, a], [r, a], [a, d]] {
            assert!(pairs.contains(&p.to_vec()));
        }
        assert!(!pairs.contains(&vec![a, a]));
        let expected: Vec<Vec<Arrow>> =
            (0..4).flat_map(|x| (0..4).map(move |y| vec![x, y])).filter(|p| g.d(p[0]) == g.r(p[1])).collect();
        assert_eq!(pairs, expected);
        assert!(composable_tuples(&g, 3).unwrap().contains(&vec![a, ai, a]));
        assert!(composable_tuples(&g, 1).is_err());
        assert_eq!(groupoid_ideals(&g).unwrap(), vec![vec![], vec![0, 1, 2, 3]]);
    }

    #[test]
    fn redeclared_inverse_is_caught() {
        let g = Groupoid::single_arrow().with_inverse(0, 0);
        let rep = verify_groupoid(&g);
        assert!(!rep.passed());
        let w = rep.first_witness("g^-1 g and g g^-1 are defined").unwrap();
        assert_eq!(w.tuple, vec!["g"]);
    }

    #[test]
    fn out_of_range_is_structural() {
        assert!(matches!(Groupoid::from_tables(vec!["e".into()], &[(0, 0, 1)], vec![0]), Err(Error::Structure(_))));
        assert!(matches!(Groupoid::from_tables(vec![], &[], vec![]), Err(Error::Structure(_))));
    }

    #[test]
    fn union_of_two_copies() {
        let g = Groupoid::single_arrow();
        let u = g.disjoint_union(&g);
        assert!(verify_groupoid(&u).passed());
        let ideals = groupoid_ideals(&u).unwrap();
        assert_eq!(ideals.len(), 4);
        let mut sorted = ideals.clone();
        sorted.sort();
        assert_eq!(sorted, brute_force_ideals(&u));
    }

    #[test]
    fn transitive_and_discrete() {
        let t = Groupoid::transitive(2, 3).unwrap();
        assert_eq!(t.len(), 12);
        assert!(verify_groupoid(&t).passed());
        assert_eq!(t.identities().len(), 2);
        let d = Groupoid::discrete(3).unwrap();
        assert!(verify_groupoid(&d).passed());
        let mut ideals = groupoid_ideals(&d).unwrap();
        ideals.sort();
        assert_eq!(ideals, brute_force_ideals(&d));
        assert_eq!(ideals.len(), 8);
    }
}
