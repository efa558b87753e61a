//! Finite semigroupoids, the Exel inverse category of a groupoid in standard form, partial
//! homomorphisms and ideal enumeration.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{require_groupoid, Arrow, Groupoid};
use crate::report::AxiomReport;

/// Largest carrier for the exhaustive subset search in [`semigroupoid_ideals`].
pub const SUBSET_CAP: usize = 20;
/// Largest number of ideals returned by the principal-ideal generation mode.
pub const IDEAL_LIST_CAP: usize = 1 << 16;
/// Largest Exel category built.
pub const EXEL_CAP: usize = 4096;

/// A finite set with a partial associative product, optionally with an involution and
/// range/domain identities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Semigroupoid {
    names: Vec<String>,
    product: Vec<Option<usize>>,
    star: Option<Vec<usize>>,
    ends: Option<Vec<(usize, usize)>>,
}

impl Semigroupoid {
    /// `product[x * n + y]` is `xy` when defined. `ends[x] = (r(x), d(x))` flags a category.
    pub fn new(
        names: Vec<String>,
        product: Vec<Option<usize>>,
        star: Option<Vec<usize>>,
        ends: Option<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        let n = names.len();
        if product.len() != n * n {
            return Err(Error::Structure(format!("product table needs {} entries", n * n)));
        }
        if product.iter().flatten().any(|&z| z >= n) {
            return Err(Error::Structure("product refers to an element out of range".into()));
        }
        if let Some(s) = &star {
            if s.len() != n || s.iter().any(|&z| z >= n) {
                return Err(Error::Structure("involution table has the wrong shape".into()));
            }
        }
        if let Some(e) = &ends {
            if e.len() != n || e.iter().any(|&(a, b)| a >= n || b >= n) {
                return Err(Error::Structure("identity table has the wrong shape".into()));
            }
        }
        Ok(Semigroupoid { names, product, star, ends })
    }

    /// A groupoid as an inverse category.
    pub fn from_groupoid(g: &Groupoid) -> Self {
        let n = g.len();
        let mut product = vec![None; n * n];
        for (x, y, z) in g.defined_products() {
            product[x * n + y] = Some(z);
        }
        Semigroupoid {
            names: g.names().to_vec(),
            product,
            star: Some(g.arrows().map(|x| g.inv(x)).collect()),
            ends: Some(g.arrows().map(|x| (g.r(x), g.d(x))).collect()),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn mul(&self, x: usize, y: usize) -> Option<usize> {
        self.product[x * self.len() + y]
    }

    pub fn mul_all(&self, xs: &[usize]) -> Option<usize> {
        let (&first, rest) = xs.split_first()?;
        rest.iter().try_fold(first, |acc, &y| self.mul(acc, y))
    }

    pub fn star(&self, x: usize) -> Option<usize> {
        self.star.as_ref().map(|s| s[x])
    }

    pub fn is_category(&self) -> bool {
        self.ends.is_some()
    }

    /// `r(x)`; panics unless the semigroupoid is flagged as a category.
    pub fn r(&self, x: usize) -> usize {
        self.ends.as_ref().expect("category")[x].0
    }

    pub fn d(&self, x: usize) -> usize {
        self.ends.as_ref().expect("category")[x].1
    }

    /// Elements `e` with `ee = e` that act as the identity wherever they multiply.
    pub fn identities(&self) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&e| {
                self.mul(e, e) == Some(e)
                    && (0..n).all(|x| self.mul(e, x).is_none_or(|z| z == x) && self.mul(x, e).is_none_or(|z| z == x))
            })
            .collect()
    }

    pub fn is_idempotent(&self, x: usize) -> bool {
        self.mul(x, x) == Some(x)
    }

    pub fn defined_pairs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let n = self.len();
        (0..n * n).filter_map(move |i| self.product[i].map(|z| (i / n, i % n, z)))
    }
}

/// Associativity wherever defined: `(xy)z` exists iff `x(yz)` does, and then they agree.
pub fn verify_semigroupoid(s: &Semigroupoid) -> AxiomReport {
    let n = s.len();
    let mut rep = AxiomReport::new("semigroupoid");
    rep.declare("associativity");
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let left = s.mul(x, y).and_then(|xy| s.mul(xy, z));
                let right = s.mul(y, z).and_then(|yz| s.mul(x, yz));
                if left.is_none() && right.is_none() {
                    continue;
                }
                rep.record("associativity", left == right, [s.name(x), s.name(y), s.name(z)], || {
                    format!("{left:?} vs {right:?}")
                });
            }
        }
    }
    rep.finish()
}

/// Unique partner `y` with `xyx = x`, `yxy = y` for every `x`, agreement with the stored involution,
/// and the category axioms when the semigroupoid is flagged as one.
pub fn verify_inverse_category(s: &Semigroupoid) -> AxiomReport {
    let n = s.len();
    let mut rep = verify_semigroupoid(s);
    rep.subject = "inverse category".into();
    for x in 0..n {
        let partners: Vec<usize> =
            (0..n).filter(|&y| s.mul_all(&[x, y, x]) == Some(x) && s.mul_all(&[y, x, y]) == Some(y)).collect();
        rep.record("unique inverse partner", partners.len() == 1, [s.name(x)], || {
            format!("{} partners", partners.len())
        });
        if let Some(st) = s.star(x) {
            rep.record("x x* x = x and x* x x* = x*", partners == [st], [s.name(x)], || {
                format!("stored partner {}", s.name(st))
            });
        }
    }
    if s.is_category() {
        let ids: HashSet<usize> = s.identities().into_iter().collect();
        for x in 0..n {
            let (r, d) = (s.r(x), s.d(x));
            let ok = ids.contains(&r) && ids.contains(&d) && s.mul(r, x) == Some(x) && s.mul(x, d) == Some(x);
            rep.record("r(x) x = x = x d(x)", ok, [s.name(x)], || "identity laws fail".into());
            let left: Vec<usize> = ids.iter().copied().filter(|&e| s.mul(e, x).is_some()).collect();
            let right: Vec<usize> = ids.iter().copied().filter(|&e| s.mul(x, e).is_some()).collect();
            rep.record("r(x) and d(x) are unique", left == [r] && right == [d], [s.name(x)], || {
                format!("{} left and {} right identities", left.len(), right.len())
            });
            for y in 0..n {
                let ok = s.mul(x, y).is_some() == (d == s.r(y));
                rep.record("xy exists iff d(x) = r(y)", ok, [s.name(x), s.name(y)], || "mismatch".into());
            }
        }
    }
    rep.finish()
}

/// Checks that `f` (indexed by arrow) is a partial homomorphism from `g` into `s`.
pub fn check_partial_hom(g: &Groupoid, s: &Semigroupoid, f: &[usize]) -> Result<AxiomReport> {
    if f.len() != g.len() || f.iter().any(|&v| v >= s.len()) {
        return Err(Error::Argument("map must send every arrow to an element of the target".into()));
    }
    let mut rep = AxiomReport::new("partial homomorphism");
    rep.declare("f(x) f(y) exists");
    rep.declare("f(x^-1) f(x) f(y) = f(x^-1) f(xy)");
    rep.declare("f(x) f(y) f(y^-1) = f(xy) f(y^-1)");
    for (x, y, xy) in g.defined_products() {
        let (fx, fy, fxy, fxi, fyi) = (f[x], f[y], f[xy], f[g.inv(x)], f[g.inv(y)]);
        let t = [g.name(x), g.name(y)];
        rep.record("f(x) f(y) exists", s.mul(fx, fy).is_some(), t, || "undefined".into());
        let (l, r) = (s.mul_all(&[fxi, fx, fy]), s.mul_all(&[fxi, fxy]));
        rep.record("f(x^-1) f(x) f(y) = f(x^-1) f(xy)", l.is_some() && l == r, t, || format!("{l:?} vs {r:?}"));
        let (l, r) = (s.mul_all(&[fx, fy, fyi]), s.mul_all(&[fxy, fyi]));
        rep.record("f(x) f(y) f(y^-1) = f(xy) f(y^-1)", l.is_some() && l == r, t, || format!("{l:?} vs {r:?}"));
    }
    Ok(rep.finish())
}

fn is_ideal(s: &Semigroupoid, member: &[bool]) -> bool {
    s.defined_pairs().all(|(x, y, z)| !(member[x] || member[y]) || member[z])
}

/// Smallest ideal containing `gens`.
pub fn ideal_closure(s: &Semigroupoid, gens: &[usize]) -> Vec<usize> {
    let n = s.len();
    let mut member = vec![false; n];
    let mut queue: VecDeque<usize> = gens.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        if member[x] {
            continue;
        }
        member[x] = true;
        for y in 0..n {
            for z in [s.mul(x, y), s.mul(y, x)].into_iter().flatten() {
                if !member[z] {
                    queue.push_back(z);
                }
            }
        }
    }
    (0..n).filter(|&i| member[i]).collect()
}

/// All two-sided ideals including the empty one, sorted by size and then lexicographically.
///
/// Up to [`SUBSET_CAP`] elements every subset is tested; beyond that ideals are generated as unions
/// of principal ideals.
pub fn semigroupoid_ideals(s: &Semigroupoid) -> Result<Vec<Vec<usize>>> {
    let n = s.len();
    let mut out: Vec<Vec<usize>> = if n <= SUBSET_CAP {
        (0u32..1 << n)
            .filter_map(|mask| {
                let member: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                is_ideal(s, &member).then(|| (0..n).filter(|&i| member[i]).collect())
            })
            .collect()
    } else {
        let principal: Vec<BTreeSet<usize>> = (0..n).map(|x| ideal_closure(s, &[x]).into_iter().collect()).collect();
        let mut seen: HashSet<BTreeSet<usize>> = HashSet::new();
        let mut queue = VecDeque::from([BTreeSet::new()]);
        seen.insert(BTreeSet::new());
        while let Some(cur) = queue.pop_front() {
            for p in &principal {
                if p.is_subset(&cur) {
                    continue;
                }
                let next: BTreeSet<usize> = cur.union(p).copied().collect();
                if seen.insert(next.clone()) {
                    if seen.len() > IDEAL_LIST_CAP {
                        return Err(Error::Capacity(format!("more than {IDEAL_LIST_CAP} ideals")));
                    }
                    queue.push_back(next);
                }
            }
        }
        seen.into_iter().map(|s| s.into_iter().collect()).collect()
    };
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// `eps_{a_1} ... eps_{a_k} [base]` with markers sorted, free of identities and of `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExelElement {
    pub base: Arrow,
    pub markers: Vec<Arrow>,
}

impl ExelElement {
    pub fn generator(x: Arrow) -> Self {
        ExelElement { base: x, markers: Vec::new() }
    }

    pub fn render(&self, g: &Groupoid) -> String {
        let mut s: String = self.markers.iter().map(|&a| format!("eps({})", g.name(a))).collect();
        s.push_str(&format!("[{}]", g.name(self.base)));
        s
    }
}

/// Drops identities and the base arrow from the markers, then sorts them.
pub fn normalize(g: &Groupoid, markers: impl IntoIterator<Item = Arrow>, base: Arrow) -> ExelElement {
    let set: BTreeSet<Arrow> = markers.into_iter().filter(|&a| a != base && !g.is_identity(a)).collect();
    ExelElement { base, markers: set.into_iter().collect() }
}

/// `(A, g)(B, h) = (A ∪ gB ∪ {g}, gh)` when `d(g) = r(h)`.
pub fn exel_product(g: &Groupoid, a: &ExelElement, b: &ExelElement) -> Option<ExelElement> {
    let gh = g.compose(a.base, b.base)?;
    let moved = b.markers.iter().map(|&m| g.compose(a.base, m).expect("r(m) = r(h) = d(g)"));
    Some(normalize(g, a.markers.iter().copied().chain(moved).chain([a.base]), gh))
}

/// `(A, g)* = (g^-1 A ∪ {g^-1}, g^-1)`.
pub fn exel_star(g: &Groupoid, a: &ExelElement) -> ExelElement {
    let gi = g.inv(a.base);
    let moved = a.markers.iter().map(|&m| g.compose(gi, m).expect("r(m) = r(g)"));
    normalize(g, moved.chain([gi]), gi)
}

/// Every standard form, listed by base arrow and then marker set.
pub fn standard_forms(g: &Groupoid) -> Result<Vec<ExelElement>> {
    let mut out = Vec::new();
    for base in g.arrows() {
        let pool: Vec<Arrow> =
            g.with_range(g.r(base)).into_iter().filter(|&a| a != base && !g.is_identity(a)).collect();
        if pool.len() >= 32 || out.len() + (1usize << pool.len()) > EXEL_CAP {
            return Err(Error::Capacity(format!("Exel category has more than {EXEL_CAP} elements")));
        }
        for mask in 0u32..1 << pool.len() {
            let markers = (0..pool.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pool[i]).collect();
            out.push(ExelElement { base, markers });
        }
    }
    out.sort();
    Ok(out)
}

/// Closure of the generators `[x]` under the normalized product.
pub fn exel_by_closure(g: &Groupoid) -> Result<Vec<ExelElement>> {
    let gens: Vec<ExelElement> = g.arrows().map(ExelElement::generator).collect();
    let mut seen: BTreeSet<ExelElement> = gens.iter().cloned().collect();
    let mut queue: VecDeque<ExelElement> = gens.iter().cloned().collect();
    while let Some(a) = queue.pop_front() {
        for x in &gens {
            for p in [exel_product(g, &a, x), exel_product(g, x, &a)].into_iter().flatten() {
                if seen.insert(p.clone()) {
                    if seen.len() > EXEL_CAP {
                        return Err(Error::Capacity(format!("Exel category has more than {EXEL_CAP} elements")));
                    }
                    queue.push_back(p);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// The Exel inverse category with its multiplication table.
#[derive(Clone, Debug)]
pub struct ExelCategory {
    groupoid: Groupoid,
    elements: Vec<ExelElement>,
    index: HashMap<ExelElement, usize>,
    semigroupoid: Semigroupoid,
}

impl ExelCategory {
    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn elements(&self) -> &[ExelElement] {
        &self.elements
    }

    pub fn semigroupoid(&self) -> &Semigroupoid {
        &self.semigroupoid
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, e: &ExelElement) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Position of `[x]`.
    pub fn generator(&self, x: Arrow) -> usize {
        self.index[&ExelElement::generator(x)]
    }

    /// The inclusion `x -> [x]`, indexed by arrow.
    pub fn inclusion(&self) -> Vec<usize> {
        self.groupoid.arrows().map(|x| self.generator(x)).collect()
    }

    /// Positions of `eps_A [e]` with `e` an identity.
    pub fn epsilon_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.groupoid.is_identity(self.elements[i].base)).collect()
    }
}

/// Builds `E(G)` by standard-form enumeration and the normalized product.
pub fn build_exel_category(g: &Groupoid) -> Result<ExelCategory> {
    require_groupoid(g)?;
    let elements = standard_forms(g)?;
    let index: HashMap<ExelElement, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let n = elements.len();
    let mut product = vec![None; n * n];
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            if let Some(p) = exel_product(g, a, b) {
                product[i * n + j] = Some(index[&p]);
            }
        }
    }
    let star = elements.iter().map(|a| index[&exel_star(g, a)]).collect();
    let ends = elements
        .iter()
        .map(|a| (index[&ExelElement::generator(g.r(a.base))], index[&ExelElement::generator(g.d(a.base))]))
        .collect();
    let names = elements.iter().map(|a| a.render(g)).collect();
    let semigroupoid = Semigroupoid::new(names, product, Some(star), Some(ends))?;
    Ok(ExelCategory { groupoid: g.clone(), elements, index, semigroupoid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{D_G, G, G_INV, R_G};

    #[test]
    fn single_arrow_has_six_standard_forms() {
        let g = Groupoid::single_arrow();
        let e = build_exel_category(&g).unwrap();
        let expect: BTreeSet<ExelElement> =
            [(G, vec![]), (G_INV, vec![]), (R_G, vec![]), (R_G, vec![G]), (D_G, vec![]), (D_G, vec![G_INV])]
                .into_iter()
                .map(|(base, markers)| ExelElement { base, markers })
                .collect();
        assert_eq!(e.elements().iter().cloned().collect::<BTreeSet<_>>(), expect);
        assert_eq!(exel_by_closure(&g).unwrap(), e.elements());
        assert!(verify_inverse_category(e.semigroupoid()).passed());
        assert!(check_partial_hom(&g, e.semigroupoid(), &e.inclusion()).unwrap().passed());
    }

    #[test]
    fn trivial_group_has_one_element() {
        let g = Groupoid::trivial();
        let e = build_exel_category(&g).unwrap();
        assert_eq!(e.len(), 1);
        assert!(verify_inverse_category(e.semigroupoid()).passed());
    }

    #[test]
    fn g_gi_g_is_g() {
        let g = Groupoid::single_arrow();
        let x = ExelElement::generator(G);
        let xi = ExelElement::generator(G_INV);
        let w = exel_product(&g, &exel_product(&g, &x, &xi).unwrap(), &x).unwrap();
        assert_eq!(w, x);
    }

    #[test]
    fn inverse_swap_is_not_a_partial_hom() {
        let g = Groupoid::single_arrow();
        let e = build_exel_category(&g).unwrap();
        let mut f = e.inclusion();
        f[G] = e.generator(G_INV);
        assert!(!check_partial_hom(&g, e.semigroupoid(), &f).unwrap().passed());
    }

    #[test]
    fn groupoid_is_inverse_category() {
        let g = Groupoid::transitive(2, 2).unwrap();
        let s = Semigroupoid::from_groupoid(&g);
        assert!(verify_inverse_category(&s).passed());
        let id: Vec<usize> = g.arrows().collect();
        assert!(check_partial_hom(&g, &s, &id).unwrap().passed());
    }

    #[test]
    fn ideals_of_small_semigroupoids() {
        let zero = Semigroupoid::new(vec!["0".into()], vec![Some(0)], None, None).unwrap();
        assert_eq!(semigroupoid_ideals(&zero).unwrap(), vec![vec![], vec![0]]);
        let e = build_exel_category(&Groupoid::single_arrow()).unwrap();
        let ideals = semigroupoid_ideals(e.semigroupoid()).unwrap();
        let a = e.index_of(&ExelElement { base: R_G, markers: vec![G] }).unwrap();
        let b = e.index_of(&ExelElement { base: D_G, markers: vec![G_INV] }).unwrap();
        assert!(ideals.contains(&ideal_closure(e.semigroupoid(), &[a, b])));
    }

    #[test]
    fn epsilons_are_the_idempotents() {
        let g = Groupoid::transitive(2, 2).unwrap();
        let e = build_exel_category(&g).unwrap();
        let idem: Vec<usize> = (0..e.len()).filter(|&i| e.semigroupoid().is_idempotent(i)).collect();
        assert_eq!(idem, e.epsilon_elements());
    }
}
