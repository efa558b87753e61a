//! Finite K-semigroups over prime fields, twisted partial actions on them and their crossed
//! products, the passage to and from algebras whose twists are scalars, and the constructions
//! linking partial projective representations with twisted partial actions.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use crate::action::{require_tpa, TwistedPartialAction};
use crate::crossprod::build_crossed_product;
use crate::error::{Error, Result};
use crate::exactalg::linalg::{scale_vector, Vector};
use crate::exactalg::{Algebra, FieldSpec, LinearMap, Scalar};
use crate::groupoid::{Arrow, Groupoid};
use crate::partrep::{compute_nx, FactorSet, KTarget, NxData, PartialRep};
use crate::report::AxiomReport;

/// Largest semigroup materialized.
pub const SEMIGROUP_CAP: usize = 4096;

/// A finite semigroup with zero and a compatible action of a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KSemigroup {
    field: FieldSpec,
    names: Vec<String>,
    zero: usize,
    product: Vec<usize>,
    /// `scalar[k * n + x]` is `k x` for the residue `k`.
    scalar: Vec<usize>,
}

fn prime_of(field: FieldSpec) -> Result<u64> {
    match field {
        FieldSpec::Prime(p) => Ok(p),
        FieldSpec::Rational => {
            Err(Error::Unsupported("K-semigroups are only materialized over prime fields, not over Q".into()))
        }
    }
}

impl KSemigroup {
    pub fn new(
        field: FieldSpec,
        names: Vec<String>,
        zero: usize,
        product: Vec<usize>,
        scalar: Vec<usize>,
    ) -> Result<Self> {
        let p = prime_of(field)? as usize;
        let n = names.len();
        if zero >= n || product.len() != n * n || scalar.len() != p * n {
            return Err(Error::Structure("semigroup tables have the wrong shape".into()));
        }
        if product.iter().chain(&scalar).any(|&z| z >= n) {
            return Err(Error::Structure("semigroup table refers to an element out of range".into()));
        }
        Ok(KSemigroup { field, names, zero, product, scalar })
    }

    /// `(K, .)` with the field acting by multiplication.
    pub fn of_field(field: FieldSpec) -> Result<Self> {
        let p = prime_of(field)? as usize;
        let names = (0..p).map(|i| i.to_string()).collect();
        let product: Vec<usize> = (0..p * p).map(|i| (i / p) * (i % p) % p).collect();
        Self::new(field, names, 0, product.clone(), product)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
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

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.product[x * self.len() + y]
    }

    pub fn scale(&self, k: &Scalar, x: usize) -> usize {
        self.scale_residue(k.residue().expect("prime field scalar") as usize, x)
    }

    pub fn scale_residue(&self, k: usize, x: usize) -> usize {
        self.scalar[k * self.len() + x]
    }

    /// Subsemigroup generated by `gens` and closed under scalars, zero included, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let p = self.field.order().expect("prime") as usize;
        let mut seeds: Vec<usize> =
            gens.iter().flat_map(|&g| (1..p).map(move |k| (k, g))).map(|(k, g)| self.scale_residue(k, g)).collect();
        seeds.sort_unstable();
        seeds.dedup();
        let mut member = vec![false; self.len()];
        member[self.zero] = true;
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in &seeds {
            if !member[s] {
                member[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(a) = queue.pop_front() {
            for &s in &seeds {
                let b = self.mul(a, s);
                if !member[b] {
                    member[b] = true;
                    queue.push_back(b);
                }
            }
        }
        (0..self.len()).filter(|&i| member[i]).collect()
    }

    /// The subsemigroup on `elems` (which must contain zero and be closed), with the map from its
    /// indices back to `self`.
    pub fn restrict(&self, elems: &[usize]) -> Result<KSemigroup> {
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let look = |v: usize| pos.get(&v).copied().ok_or_else(|| Error::Structure("subset is not closed".into()));
        let m = elems.len();
        let p = self.field.order().expect("prime") as usize;
        let mut product = Vec::with_capacity(m * m);
        for &a in elems {
            for &b in elems {
                product.push(look(self.mul(a, b))?);
            }
        }
        let mut scalar = Vec::with_capacity(p * m);
        for k in 0..p {
            for &a in elems {
                scalar.push(look(self.scale_residue(k, a))?);
            }
        }
        let names = elems.iter().map(|&e| self.names[e].clone()).collect();
        KSemigroup::new(self.field, names, look(self.zero)?, product, scalar)
    }

    /// The identity of the subset `elems` if it is a monoid under the product.
    pub fn unit_of(&self, elems: &[usize]) -> Option<usize> {
        elems.iter().copied().find(|&u| elems.iter().all(|&s| self.mul(u, s) == s && self.mul(s, u) == s))
    }
}

impl KTarget for KSemigroup {
    type Elem = usize;

    fn field(&self) -> FieldSpec {
        self.field
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        KSemigroup::mul(self, *a, *b)
    }

    fn scale(&self, k: &Scalar, a: &usize) -> usize {
        KSemigroup::scale(self, k, *a)
    }

    fn is_zero(&self, a: &usize) -> bool {
        *a == self.zero
    }

    fn zero(&self) -> usize {
        self.zero
    }

    fn render(&self, a: &usize) -> String {
        self.names[*a].clone()
    }

    fn ratio(&self, a: &usize, b: &usize) -> Option<Scalar> {
        let p = self.field.order().expect("prime") as usize;
        (0..p).find(|&k| self.scale_residue(k, *b) == *a).map(|k| self.field.from_i64(k as i64))
    }
}

/// Semigroup axioms, the zero and the scalar action.
pub fn verify_ksemigroup(s: &KSemigroup) -> AxiomReport {
    let n = s.len();
    let p = s.field.order().expect("prime") as usize;
    let mut rep = AxiomReport::new("K-semigroup");
    for c in ["associativity", "0 is absorbing", "a(bx) = (ab)x", "1x = x", "a(xy) = (ax)y = x(ay)", "0x = 0"] {
        rep.declare(c);
    }
    for x in 0..n {
        for y in 0..n {
            let xy = s.mul(x, y);
            for z in 0..n {
                let ok = s.mul(xy, z) == s.mul(x, s.mul(y, z));
                rep.record("associativity", ok, [s.name(x), s.name(y), s.name(z)], || "products differ".into());
            }
            for k in 0..p {
                let a = s.scale_residue(k, xy);
                let ok = a == s.mul(s.scale_residue(k, x), y) && a == s.mul(x, s.scale_residue(k, y));
                rep.record("a(xy) = (ax)y = x(ay)", ok, [k.to_string(), s.name(x).into(), s.name(y).into()], || {
                    "scalars do not move".into()
                });
            }
        }
        let ok = s.mul(x, s.zero) == s.zero && s.mul(s.zero, x) == s.zero;
        rep.record("0 is absorbing", ok, [s.name(x)], || "zero is not absorbing".into());
        rep.record("1x = x", s.scale_residue(1, x) == x, [s.name(x)], || "unit scalar moves x".into());
        rep.record("0x = 0", s.scale_residue(0, x) == s.zero, [s.name(x)], || "zero scalar misses 0".into());
        for a in 0..p {
            for b in 0..p {
                let ok = s.scale_residue(a, s.scale_residue(b, x)) == s.scale_residue(a * b % p, x);
                rep.record("a(bx) = (ab)x", ok, [a.to_string(), b.to_string(), s.name(x).into()], || {
                    "scalar action not multiplicative".into()
                });
            }
        }
    }
    rep.finish()
}

/// `ax = bx` with `x != 0` forces `a = b`.
pub fn check_k_cancellative(s: &KSemigroup) -> AxiomReport {
    let p = s.field.order().expect("prime") as usize;
    let mut rep = AxiomReport::new("K-cancellative");
    rep.declare("K-cancellative");
    for x in (0..s.len()).filter(|&x| x != s.zero) {
        let images: HashSet<usize> = (0..p).map(|k| s.scale_residue(k, x)).collect();
        rep.record("K-cancellative", images.len() == p, [s.name(x)], || "two scalars agree on x".into());
    }
    rep.finish()
}

/// A finite subsemigroup of some K-semigroup target, with its elements.
#[derive(Clone, Debug)]
pub struct Generated<E> {
    pub semigroup: KSemigroup,
    pub elements: Vec<E>,
    index: HashMap<E, usize>,
}

impl<E: Clone + Eq + Hash> Generated<E> {
    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// Subsemigroup of `target` generated by the scalar multiples of `gens`, with zero.
pub fn generate<T: KTarget>(target: &T, gens: &[T::Elem], cap: usize) -> Result<Generated<T::Elem>> {
    let field = target.field();
    let p = prime_of(field)?;
    let mut elements = vec![target.zero()];
    let mut index: HashMap<T::Elem, usize> = HashMap::from([(target.zero(), 0)]);
    let mut seeds: Vec<T::Elem> = Vec::new();
    for g in gens {
        for k in 1..p {
            let s = target.scale(&field.from_i64(k as i64), g);
            if !seeds.contains(&s) {
                seeds.push(s);
            }
        }
    }
    let push = |e: T::Elem, elements: &mut Vec<T::Elem>, index: &mut HashMap<T::Elem, usize>| -> Result<bool> {
        if index.contains_key(&e) {
            return Ok(false);
        }
        if elements.len() >= cap {
            return Err(Error::Capacity(format!("generated semigroup exceeds {cap} elements")));
        }
        index.insert(e.clone(), elements.len());
        elements.push(e);
        Ok(true)
    };
    for s in &seeds {
        push(s.clone(), &mut elements, &mut index)?;
    }
    let mut i = 1;
    while i < elements.len() {
        let a = elements[i].clone();
        for s in &seeds {
            push(target.mul(&a, s), &mut elements, &mut index)?;
        }
        i += 1;
    }
    let n = elements.len();
    let look = |e: &T::Elem| index.get(e).copied().ok_or_else(|| Error::Structure("closure is not closed".into()));
    let mut product = Vec::with_capacity(n * n);
    for a in &elements {
        for b in &elements {
            product.push(look(&target.mul(a, b))?);
        }
    }
    let mut scalar = Vec::with_capacity(p as usize * n);
    for k in 0..p {
        let k = field.from_i64(k as i64);
        for a in &elements {
            scalar.push(look(&target.scale(&k, a))?);
        }
    }
    let names = elements.iter().map(|e| target.render(e).replace('\n', "; ")).collect();
    let semigroup = KSemigroup::new(field, names, 0, product, scalar)?;
    Ok(Generated { semigroup, elements, index })
}

/// Ideals `S_x`, isomorphisms `theta_x: S_{x^-1} -> S_x` and a K-valued twisting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupTPA {
    groupoid: Groupoid,
    semigroup: KSemigroup,
    ideals: Vec<Vec<usize>>,
    member: Vec<Vec<bool>>,
    theta: Vec<Vec<Option<usize>>>,
    theta_inv: Vec<Vec<Option<usize>>>,
    units: Vec<Option<usize>>,
    sigma: FactorSet,
}

impl SemigroupTPA {
    /// `theta[x]` is indexed by element and defined on `S_{x^-1}`. Shapes only are checked here.
    pub fn new(
        groupoid: Groupoid,
        semigroup: KSemigroup,
        ideals: Vec<Vec<usize>>,
        theta: Vec<Vec<Option<usize>>>,
        sigma: FactorSet,
    ) -> Result<Self> {
        let n = groupoid.len();
        let m = semigroup.len();
        if ideals.len() != n || theta.len() != n || sigma.len() != n {
            return Err(Error::Structure(format!("expected {n} ideals, maps and a factor set on {n} arrows")));
        }
        if sigma.field() != semigroup.field() {
            return Err(Error::Argument("twisting over another field".into()));
        }
        if ideals.iter().flatten().any(|&s| s >= m)
            || theta.iter().any(|t| t.len() != m || t.iter().flatten().any(|&s| s >= m))
        {
            return Err(Error::Structure("ideal or map refers to an element out of range".into()));
        }
        let ideals: Vec<Vec<usize>> = ideals
            .into_iter()
            .map(|mut v| {
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        let member = ideals
            .iter()
            .map(|v| {
                let mut b = vec![false; m];
                for &s in v {
                    b[s] = true;
                }
                b
            })
            .collect();
        let theta_inv = theta
            .iter()
            .map(|t| {
                let mut inv = vec![None; m];
                for (s, v) in t.iter().enumerate() {
                    if let Some(v) = v {
                        inv[*v].get_or_insert(s);
                    }
                }
                inv
            })
            .collect();
        let units = ideals.iter().map(|v| semigroup.unit_of(v)).collect();
        Ok(SemigroupTPA { groupoid, semigroup, ideals, member, theta, theta_inv, units, sigma })
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn semigroup(&self) -> &KSemigroup {
        &self.semigroup
    }

    pub fn ideal(&self, x: Arrow) -> &[usize] {
        &self.ideals[x]
    }

    pub fn contains(&self, x: Arrow, s: usize) -> bool {
        self.member[x][s]
    }

    pub fn theta(&self, x: Arrow, s: usize) -> Option<usize> {
        self.theta[x][s]
    }

    pub fn theta_inv(&self, x: Arrow, a: usize) -> Option<usize> {
        self.theta_inv[x][a]
    }

    /// `1_x`, if `S_x` is a monoid.
    pub fn unit(&self, x: Arrow) -> Option<usize> {
        self.units[x]
    }

    pub fn sigma(&self) -> &FactorSet {
        &self.sigma
    }

    pub fn with_sigma(&self, x: Arrow, y: Arrow, v: Scalar) -> Self {
        let mut out = self.clone();
        out.sigma = out.sigma.with_value(x, y, v);
        out
    }

    fn intersection(&self, xs: &[Arrow]) -> Vec<usize> {
        (0..self.semigroup.len()).filter(|&s| xs.iter().all(|&x| self.member[x][s])).collect()
    }

    fn is_zero_set(&self, v: &[usize]) -> bool {
        v.iter().all(|&s| s == self.semigroup.zero)
    }
}

/// Exhaustive check of the partial action axioms, the twisting axioms and
/// `S_x ∩ S_y = S_x S_y`.
pub fn verify_semigroup_tpa(t: &SemigroupTPA) -> AxiomReport {
    let g = &t.groupoid;
    let s = &t.semigroup;
    let m = s.len();
    let p = s.field().order().expect("prime") as usize;
    let names = |xs: &[Arrow]| g.render_tuple(xs);
    let mut rep = AxiomReport::new("twisted partial action on a K-semigroup");
    for c in [
        "S_x is an ideal",
        "S_x is a monoid",
        "theta_x is a bijection onto S_x",
        "theta_x is multiplicative",
        "theta_x is a K-map",
        "(i) S_x inside S_r(x)",
        "(i) theta_e = id",
        "(ii) theta_x(S_x^-1 ∩ S_y) = S_x ∩ S_xy",
        "(iii) theta_x theta_y = theta_xy",
        "(iv) sigma(x,y) = 0 iff S_x ∩ S_xy = 0",
        "(v) sigma(x,d(x)) = sigma(r(x),x) = 1",
        "(vi) conditional 2-cocycle",
        "S_x ∩ S_y = S_x S_y",
    ] {
        rep.declare(c);
    }
    for x in g.arrows() {
        let ok = t.member[x][s.zero]
            && t.ideals[x].iter().all(|&a| (0..m).all(|b| t.member[x][s.mul(a, b)] && t.member[x][s.mul(b, a)]));
        rep.record("S_x is an ideal", ok, names(&[x]), || "not closed under multiplication by S".into());
        rep.record("S_x is a monoid", t.units[x].is_some(), names(&[x]), || "no identity element".into());
        let xi = g.inv(x);
        let dom_ok = (0..m).all(|a| t.theta[x][a].is_some() == t.member[xi][a]);
        let vals: Vec<usize> = t.ideals[xi].iter().filter_map(|&a| t.theta[x][a]).collect();
        let distinct: HashSet<usize> = vals.iter().copied().collect();
        let onto =
            vals.iter().all(|&v| t.member[x][v]) && distinct.len() == vals.len() && distinct.len() == t.ideals[x].len();
        rep.record("theta_x is a bijection onto S_x", dom_ok && onto, names(&[x]), || {
            "not a bijection S_x^-1 -> S_x".into()
        });
        for &a in &t.ideals[xi] {
            for &b in &t.ideals[xi] {
                let ok = t.theta[x][s.mul(a, b)] == t.theta[x][a].zip(t.theta[x][b]).map(|(u, v)| s.mul(u, v));
                rep.record("theta_x is multiplicative", ok, [g.name(x), s.name(a), s.name(b)], || {
                    "theta(ab) != theta(a)theta(b)".into()
                });
            }
            for k in 0..p {
                let ok = t.theta[x][s.scale_residue(k, a)] == t.theta[x][a].map(|u| s.scale_residue(k, u));
                rep.record(
                    "theta_x is a K-map",
                    ok,
                    [g.name(x).to_string(), k.to_string(), s.name(a).to_string()],
                    || "scalar not preserved".into(),
                );
            }
        }
        let r = g.r(x);
        rep.record("(i) S_x inside S_r(x)", t.ideals[x].iter().all(|&a| t.member[r][a]), names(&[x]), || {
            "element outside S_r(x)".into()
        });
        if g.is_identity(x) {
            let ok = t.ideals[x].iter().all(|&a| t.theta[x][a] == Some(a));
            rep.record("(i) theta_e = id", ok, names(&[x]), || "theta_e moves an element".into());
        }
        // On S_x = 0 the twisting acts on nothing and (iv) forces zero.
        if t.is_zero_set(&t.ideals[x]) {
            continue;
        }
        let one = |v: &Scalar| v.is_one();
        let ok = one(t.sigma.get(x, g.d(x))) && one(t.sigma.get(g.r(x), x));
        rep.record("(v) sigma(x,d(x)) = sigma(r(x),x) = 1", ok, names(&[x]), || {
            format!("sigma(x,d(x)) = {}, sigma(r(x),x) = {}", t.sigma.get(x, g.d(x)), t.sigma.get(g.r(x), x))
        });
    }
    for x in g.arrows() {
        for y in g.arrows() {
            let sxy: HashSet<usize> =
                t.ideals[x].iter().flat_map(|&a| t.ideals[y].iter().map(move |&b| s.mul(a, b))).collect();
            let cap: HashSet<usize> = t.intersection(&[x, y]).into_iter().collect();
            rep.record("S_x ∩ S_y = S_x S_y", sxy == cap, names(&[x, y]), || {
                format!("{} products, {} common elements", sxy.len(), cap.len())
            });
            let Some(xy) = g.compose(x, y) else {
                rep.record(
                    "(iv) sigma(x,y) = 0 iff S_x ∩ S_xy = 0",
                    t.sigma.get(x, y).is_zero(),
                    names(&[x, y]),
                    || "twisting nonzero on a non-composable pair".into(),
                );
                continue;
            };
            let xi = g.inv(x);
            let left: HashSet<usize> = t.intersection(&[xi, y]).into_iter().filter_map(|a| t.theta[x][a]).collect();
            let right: HashSet<usize> = t.intersection(&[x, xy]).into_iter().collect();
            rep.record("(ii) theta_x(S_x^-1 ∩ S_y) = S_x ∩ S_xy", left == right, names(&[x, y]), || {
                "sets differ".into()
            });
            let yi = g.inv(y);
            let xyi = g.inv(xy);
            for a in t.intersection(&[yi, xyi]) {
                let lhs = t.theta[y][a].and_then(|b| t.theta[x][b]);
                let rhs = t.theta[xy][a];
                rep.record("(iii) theta_x theta_y = theta_xy", lhs == rhs, [g.name(x), g.name(y), s.name(a)], || {
                    format!("{lhs:?} vs {rhs:?}")
                });
            }
            let vanishes = t.is_zero_set(&t.intersection(&[x, xy]));
            rep.record(
                "(iv) sigma(x,y) = 0 iff S_x ∩ S_xy = 0",
                t.sigma.get(x, y).is_zero() == vanishes,
                names(&[x, y]),
                || format!("sigma = {}, intersection zero: {vanishes}", t.sigma.get(x, y)),
            );
            for z in g.arrows() {
                let Some(yz) = g.compose(y, z) else { continue };
                let xyz = g.compose(xy, z).expect("associative");
                if t.is_zero_set(&t.intersection(&[x, xy, xyz])) {
                    continue;
                }
                let lhs = t.sigma.get(x, y) * t.sigma.get(xy, z);
                let rhs = t.sigma.get(y, z) * t.sigma.get(x, yz);
                rep.record("(vi) conditional 2-cocycle", lhs == rhs, names(&[x, y, z]), || format!("{lhs} vs {rhs}"));
            }
        }
    }
    rep.finish()
}

fn require_semigroup_tpa(t: &SemigroupTPA) -> Result<()> {
    let rep = verify_semigroup_tpa(t);
    match rep.first_failure() {
        Some(c) => Err(Error::Refused(format!("semigroup action fails '{}'", c.name))),
        None => Ok(()),
    }
}

/// `{ a d[x] : a in S_x, a != 0 } ∪ {0}` with the twisted product.
#[derive(Clone, Debug)]
pub struct SemigroupCrossedProduct {
    tpa: SemigroupTPA,
    semigroup: KSemigroup,
    elements: Vec<Option<(usize, Arrow)>>,
    index: HashMap<(usize, Arrow), usize>,
    report: AxiomReport,
}

impl SemigroupCrossedProduct {
    pub fn tpa(&self) -> &SemigroupTPA {
        &self.tpa
    }

    pub fn semigroup(&self) -> &KSemigroup {
        &self.semigroup
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of `a d[x]`; zero when `a` is zero, `None` when `a` is outside `S_x`.
    pub fn element(&self, a: usize, x: Arrow) -> Option<usize> {
        if a == self.tpa.semigroup.zero {
            return Some(0);
        }
        self.index.get(&(a, x)).copied()
    }

    /// `(a, x)` for `a d[x]`, `None` for zero.
    pub fn delta(&self, i: usize) -> Option<(usize, Arrow)> {
        self.elements[i]
    }

    /// Associativity and K-semigroup checks run at construction.
    pub fn report(&self) -> &AxiomReport {
        &self.report
    }
}

fn twisted_product(t: &SemigroupTPA, a: usize, x: Arrow, b: usize, y: Arrow) -> Option<(usize, Arrow)> {
    let g = &t.groupoid;
    let s = &t.semigroup;
    let xy = g.compose(x, y)?;
    let pre = t.theta_inv(x, a)?;
    let inner = t.theta(x, s.mul(pre, b))?;
    let c = s.scale(t.sigma.get(x, y), inner);
    (c != s.zero).then_some((c, xy))
}

/// Builds the crossed product of a verified action and checks associativity on all triples.
pub fn build_semigroup_crossed_product(t: &SemigroupTPA) -> Result<SemigroupCrossedProduct> {
    require_semigroup_tpa(t)?;
    let g = &t.groupoid;
    let s = &t.semigroup;
    let mut elements: Vec<Option<(usize, Arrow)>> = vec![None];
    let mut names = vec!["0".to_string()];
    for x in g.arrows() {
        for &a in &t.ideals[x] {
            if a != s.zero {
                elements.push(Some((a, x)));
                names.push(format!("{} d[{}]", s.name(a), g.name(x)));
            }
        }
    }
    if elements.len() > SEMIGROUP_CAP {
        return Err(Error::Capacity(format!("crossed product exceeds {SEMIGROUP_CAP} elements")));
    }
    let index: HashMap<(usize, Arrow), usize> =
        elements.iter().enumerate().filter_map(|(i, e)| e.map(|k| (k, i))).collect();
    let n = elements.len();
    let look = |e: Option<(usize, Arrow)>| -> Result<usize> {
        match e {
            None => Ok(0),
            Some(k) => {
                index.get(&k).copied().ok_or_else(|| Error::Structure("product left the crossed product".into()))
            }
        }
    };
    let mut product = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let v = match (elements[i], elements[j]) {
                (Some((a, x)), Some((b, y))) => twisted_product(t, a, x, b, y),
                _ => None,
            };
            product.push(look(v)?);
        }
    }
    let p = s.field().order().expect("prime") as usize;
    let mut scalar = Vec::with_capacity(p * n);
    for k in 0..p {
        for e in &elements {
            scalar.push(look(e.and_then(|(a, x)| {
                let b = s.scale_residue(k, a);
                (b != s.zero).then_some((b, x))
            }))?);
        }
    }
    let semigroup = KSemigroup::new(s.field(), names, 0, product, scalar)?;
    let mut report = AxiomReport::new("semigroup crossed product");
    report.absorb("", verify_ksemigroup(&semigroup));
    Ok(SemigroupCrossedProduct { tpa: t.clone(), semigroup, elements, index, report: report.finish() })
}

/// The multiplicative semigroup of a finite algebra, with the action and twists carried over.
#[derive(Clone, Debug)]
pub struct RingSemigroup {
    pub tpa: SemigroupTPA,
    pub algebra: Algebra,
    pub vectors: Vec<Vector>,
    index: HashMap<Vector, usize>,
}

impl RingSemigroup {
    pub fn index_of(&self, v: &Vector) -> Option<usize> {
        self.index.get(v).copied()
    }
}

/// The scalar `k` with `w = k u`.
fn scalar_multiple(field: FieldSpec, w: &[Scalar], u: &[Scalar]) -> Option<Scalar> {
    let Some(i) = u.iter().position(|v| !v.is_zero()) else {
        return w.iter().all(Scalar::is_zero).then(|| field.zero());
    };
    let k = &w[i] * &u[i].inv().expect("nonzero");
    (scale_vector(&k, u) == w).then_some(k)
}

/// Forgets the addition of a verified action whose twists are scalar multiples of the units
/// `1_x 1_xy`, materializing every element of the algebra.
pub fn ring_to_semigroup(a: &TwistedPartialAction) -> Result<RingSemigroup> {
    let alg = a.algebra();
    let field = alg.field();
    let p = prime_of(field)?;
    require_tpa(a)?;
    let dim = alg.dim();
    let size = (p as u128).checked_pow(dim as u32).filter(|&s| s <= SEMIGROUP_CAP as u128);
    let Some(size) = size else {
        return Err(Error::Capacity(format!("algebra has more than {SEMIGROUP_CAP} elements")));
    };
    let size = size as usize;
    let vectors: Vec<Vector> = (0..size)
        .map(|mut i| {
            (0..dim)
                .map(|_| {
                    let d = i % p as usize;
                    i /= p as usize;
                    field.from_i64(d as i64)
                })
                .collect()
        })
        .collect();
    let index: HashMap<Vector, usize> = vectors.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let look = |v: &Vector| index.get(v).copied().ok_or_else(|| Error::Structure("vector outside the algebra".into()));
    let mut product = Vec::with_capacity(size * size);
    for u in &vectors {
        for v in &vectors {
            product.push(look(&alg.mul(u, v))?);
        }
    }
    let mut scalar = Vec::with_capacity(p as usize * size);
    for k in 0..p {
        let k = field.from_i64(k as i64);
        for v in &vectors {
            scalar.push(look(&scale_vector(&k, v))?);
        }
    }
    let names = vectors.iter().map(|v| alg.render(v)).collect();
    let semigroup = KSemigroup::new(field, names, 0, product, scalar)?;
    let g = a.groupoid();
    let ideals: Vec<Vec<usize>> =
        g.arrows().map(|x| (0..size).filter(|&i| a.domain(x).contains(&vectors[i])).collect()).collect();
    let mut theta = Vec::with_capacity(g.len());
    for x in g.arrows() {
        let mut t = vec![None; size];
        for &i in &ideals[g.inv(x)] {
            t[i] = Some(look(&a.alpha(x, &vectors[i])?)?);
        }
        theta.push(t);
    }
    let mut sigma_vals = vec![field.zero(); g.len() * g.len()];
    for (x, y, _) in g.defined_products() {
        let w = a.twist(x, y);
        let ideal = a.twist_ideal(x, y)?;
        let u = if ideal.is_zero() { alg.zero() } else { alg.unit_of(&ideal).unwrap_or_else(|| alg.zero()) };
        let k = scalar_multiple(field, w, &u).ok_or_else(|| {
            Error::Unsupported(format!("twist at ({}, {}) is not a scalar multiple of the unit", g.name(x), g.name(y)))
        })?;
        sigma_vals[x * g.len() + y] = k;
    }
    let sigma = FactorSet::new(crate::exel::Semigroupoid::from_groupoid(g), field, sigma_vals)?;
    let tpa = SemigroupTPA::new(g.clone(), semigroup, ideals, theta, sigma)?;
    Ok(RingSemigroup { tpa, algebra: alg.clone(), vectors, index })
}

/// Restores the addition: `D_x` spanned by `S_x`, `alpha_x` the linear extension of `theta_x` and
/// `w_{x,y} = sigma(x,y) 1_x 1_xy`. Fails unless every `S_x` and `theta_x` is additive.
pub fn semigroup_to_ring(t: &SemigroupTPA, algebra: &Algebra, vectors: &[Vector]) -> Result<TwistedPartialAction> {
    let s = t.semigroup();
    let g = t.groupoid();
    let field = algebra.field();
    let p = prime_of(field)?;
    if vectors.len() != s.len() {
        return Err(Error::Argument("one vector per semigroup element is needed".into()));
    }
    for a in 0..s.len() {
        for b in 0..s.len() {
            if algebra.mul(&vectors[a], &vectors[b]) != vectors[s.mul(a, b)] {
                return Err(Error::Argument("vectors do not realize the semigroup product".into()));
            }
        }
    }
    let index: HashMap<&Vector, usize> = vectors.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut domains = Vec::with_capacity(g.len());
    for x in g.arrows() {
        let d = algebra.span(t.ideal(x).iter().map(|&i| &vectors[i]));
        if (p as u128).pow(d.dim() as u32) != t.ideal(x).len() as u128 {
            return Err(Error::Unsupported(format!("S_{} is not additively closed", g.name(x))));
        }
        domains.push(d);
    }
    let mut maps = Vec::with_capacity(g.len());
    for x in g.arrows() {
        let src = domains[g.inv(x)].clone();
        let sources: Vec<Vector> = src.basis().to_vec();
        let targets = sources
            .iter()
            .map(|v| {
                let i = index.get(v).ok_or_else(|| Error::Argument("basis vector is not an element".into()))?;
                let j = t.theta(x, *i).ok_or_else(|| Error::Structure("theta undefined on its domain".into()))?;
                Ok(vectors[j].clone())
            })
            .collect::<Result<Vec<_>>>()?;
        let m = LinearMap::from_images(src, domains[x].clone(), &sources, &targets)?;
        for &i in t.ideal(g.inv(x)) {
            let expected = t.theta(x, i).map(|j| &vectors[j]);
            if expected != Some(&m.apply(&vectors[i])?) {
                return Err(Error::Unsupported(format!("theta_{} is not additive", g.name(x))));
            }
        }
        maps.push(m);
    }
    let n = g.len();
    let mut twists = vec![algebra.zero(); n * n];
    for (x, y, xy) in g.defined_products() {
        let ideal = algebra.product(&domains[x], &domains[xy])?;
        let k = t.sigma().get(x, y);
        twists[x * n + y] = if k.is_zero() {
            algebra.zero()
        } else {
            let u = algebra.unit_of(&ideal).ok_or_else(|| Error::Structure("D_x D_xy has no unit".into()))?;
            scale_vector(k, &u)
        };
    }
    TwistedPartialAction::new(g.clone(), algebra.clone(), domains, maps, twists)
}

/// Outcome of comparing the semigroup crossed product with the algebra crossed product.
#[derive(Clone, Debug)]
pub struct EmbeddingReport {
    pub semigroup_size: usize,
    pub ring_size: u128,
    pub image_size: usize,
    pub injective: bool,
    pub multiplicative: bool,
    pub surjective: bool,
    /// A sum of two deltas outside the image, when one exists.
    pub witness: Option<String>,
    pub report: AxiomReport,
}

/// Checks that `a d[x] -> a d[x]` embeds the semigroup crossed product in the multiplicative
/// semigroup of the algebra crossed product, and that it is onto only for the trivial group.
pub fn embed_semigroup_cp(a: &TwistedPartialAction) -> Result<EmbeddingReport> {
    let rs = ring_to_semigroup(a)?;
    let scp = build_semigroup_crossed_product(&rs.tpa)?;
    let cp = build_crossed_product(a)?;
    let g = a.groupoid();
    let p = prime_of(a.algebra().field())?;
    let image: Vec<Vector> = (0..scp.len())
        .map(|i| match scp.delta(i) {
            None => Ok(cp.algebra().zero()),
            Some((s, x)) => cp.element(x, &rs.vectors[s]),
        })
        .collect::<Result<_>>()?;
    let mut report = AxiomReport::new("semigroup crossed product embedding");
    let distinct: HashSet<&Vector> = image.iter().collect();
    let injective = distinct.len() == image.len();
    report.fact("phi is injective", injective, format!("{} images of {} elements", distinct.len(), image.len()));
    report.declare("phi is multiplicative");
    let sg = scp.semigroup();
    for i in 0..scp.len() {
        for j in 0..scp.len() {
            let ok = cp.mul(&image[i], &image[j]) == image[sg.mul(i, j)];
            report.record("phi is multiplicative", ok, [sg.name(i), sg.name(j)], || "products differ".into());
        }
    }
    let multiplicative = report.check_passed("phi is multiplicative");
    let ring_size = (p as u128).pow(cp.dim() as u32);
    let surjective = distinct.len() as u128 == ring_size;
    let trivial = g.len() == 1;
    let mut witness = None;
    if !surjective {
        let nonzero: Vec<Arrow> =
            g.arrows().filter(|&x| rs.tpa.unit(x).is_some_and(|u| u != rs.tpa.semigroup().zero())).collect();
        if let [x, y, ..] = nonzero[..] {
            let v = crate::exactalg::linalg::add_vectors(
                &cp.element(x, &rs.vectors[rs.tpa.unit(x).expect("unit")])?,
                &cp.element(y, &rs.vectors[rs.tpa.unit(y).expect("unit")])?,
            );
            if !distinct.contains(&v) {
                witness = Some(cp.render(&v));
            }
        }
    }
    report.fact(
        "onto exactly for the trivial group",
        surjective == trivial,
        format!("{} of {ring_size} elements reached", distinct.len()),
    );
    Ok(EmbeddingReport {
        semigroup_size: scp.len(),
        ring_size,
        image_size: distinct.len(),
        injective,
        multiplicative,
        surjective,
        witness,
        report: report.finish(),
    })
}

/// `x -> 1_x d[x]` in the crossed product of a verified action.
#[derive(Clone, Debug)]
pub struct ThetaRep {
    pub crossed: SemigroupCrossedProduct,
    pub rep: PartialRep<KSemigroup>,
}

pub fn rep_from_theta(t: &SemigroupTPA) -> Result<ThetaRep> {
    let crossed = build_semigroup_crossed_product(t)?;
    let images = t
        .groupoid()
        .arrows()
        .map(|x| {
            let u = t.unit(x).ok_or_else(|| Error::Structure("S_x has no identity".into()))?;
            crossed.element(u, x).ok_or_else(|| Error::Structure("1_x d[x] missing".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let rep = PartialRep::new(t.groupoid().clone(), crossed.semigroup().clone(), images)?;
    Ok(ThetaRep { crossed, rep })
}

/// `S'_x Gamma(x) ∩ S'_y Gamma(y) = 0` for `x != y`, with `S'` generated by the scalar multiples of
/// the `n_x`.
pub fn check_separating<T: KTarget>(rep: &PartialRep<T>, cap: usize) -> Result<AxiomReport> {
    let nx = compute_nx(rep);
    let g = rep.groupoid();
    let t = rep.target();
    let sg = generate(t, &nx.n, cap)?;
    let mut report = AxiomReport::new("separating");
    report.declare("S'_x Gamma(x) are disjoint off zero");
    let blocks: Vec<HashSet<T::Elem>> = g
        .arrows()
        .map(|x| sg.elements.iter().map(|s| t.mul(&t.mul(s, &nx.n[x]), rep.get(x))).filter(|v| !t.is_zero(v)).collect())
        .collect();
    for x in g.arrows() {
        for y in g.arrows() {
            if x < y {
                let ok = blocks[x].is_disjoint(&blocks[y]);
                report.record("S'_x Gamma(x) are disjoint off zero", ok, g.render_tuple(&[x, y]), || {
                    "common nonzero element".into()
                });
            }
        }
    }
    Ok(report.finish())
}

/// The action built from a partial projective representation, with `psi`.
#[derive(Clone, Debug)]
pub struct RepAction<E> {
    /// `Gamma(G)`, generated by the scalar multiples of the images.
    pub image: Generated<E>,
    /// Indices into `image` of the elements of `S`, in the order used by `tpa`.
    pub s_elements: Vec<usize>,
    pub tpa: SemigroupTPA,
    pub crossed: SemigroupCrossedProduct,
    /// `psi(a d[x]) = a Gamma(x)`, crossed-product index to `image` index.
    pub psi: Vec<usize>,
    pub nx: NxData<E>,
    pub report: AxiomReport,
}

/// `S` generated by the scalar multiples of `n_x`, `S_x = S n_x`,
/// `theta_x(s) = Gamma(x) s Gamma(x^-1) sigma(x^-1,x)^-1`, and `psi: S x G -> Gamma(G)`.
pub fn theta_from_rep<T: KTarget>(rep: &PartialRep<T>, cap: usize) -> Result<RepAction<T::Elem>> {
    prime_of(rep.target().field())?;
    let nx = compute_nx(rep);
    if let Some(c) = nx.report.first_failure() {
        return Err(Error::Refused(format!("representation fails '{}'", c.name)));
    }
    let g = rep.groupoid();
    let t = rep.target();
    let image = generate(t, rep.images(), cap)?;
    let big = &image.semigroup;
    let idx = |e: &T::Elem| image.index_of(e).ok_or_else(|| Error::Structure("element outside Gamma(G)".into()));
    let n_idx = nx.n.iter().map(idx).collect::<Result<Vec<_>>>()?;
    let gamma_idx = rep.images().iter().map(idx).collect::<Result<Vec<_>>>()?;
    let s_elements = big.closure(&n_idx);
    let small = big.restrict(&s_elements)?;
    let pos: HashMap<usize, usize> = s_elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let to_s = |e: usize| pos.get(&e).copied().ok_or_else(|| Error::Structure("theta leaves S".into()));
    let ideals: Vec<Vec<usize>> = g
        .arrows()
        .map(|x| {
            let mut v: Vec<usize> = s_elements.iter().map(|&s| big.mul(s, n_idx[x])).map(|e| pos[&e]).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let sigma = nx.sigma.clone();
    let mut theta = Vec::with_capacity(g.len());
    for x in g.arrows() {
        let xi = g.inv(x);
        let mut map = vec![None; s_elements.len()];
        for &a in &ideals[xi] {
            let v = if big.mul(gamma_idx[xi], gamma_idx[xi]) == big.zero() && gamma_idx[xi] == big.zero() {
                big.zero()
            } else {
                let k = sigma.get(xi, x).inv().ok_or_else(|| Error::Structure("sigma(x^-1,x) vanishes".into()))?;
                big.scale(&k, big.mul(big.mul(gamma_idx[x], s_elements[a]), gamma_idx[xi]))
            };
            map[a] = Some(to_s(v)?);
        }
        theta.push(map);
    }
    let tpa = SemigroupTPA::new(g.clone(), small, ideals, theta, sigma)?;
    let mut report = AxiomReport::new("action from a partial projective representation");
    report.absorb("action: ", verify_semigroup_tpa(&tpa));
    if let Some(c) = report.first_failure() {
        return Err(Error::Refused(format!("constructed action fails '{}'", c.name)));
    }
    let crossed = build_semigroup_crossed_product(&tpa)?;
    let psi: Vec<usize> = (0..crossed.len())
        .map(|i| match crossed.delta(i) {
            None => big.zero(),
            Some((a, x)) => big.mul(s_elements[a], gamma_idx[x]),
        })
        .collect();
    report.declare("psi is a homomorphism");
    let cs = crossed.semigroup();
    for i in 0..crossed.len() {
        for j in 0..crossed.len() {
            let ok = psi[cs.mul(i, j)] == big.mul(psi[i], psi[j]);
            report.record("psi is a homomorphism", ok, [cs.name(i), cs.name(j)], || "psi(ab) != psi(a)psi(b)".into());
        }
    }
    let reached: HashSet<usize> = psi.iter().copied().collect();
    report.fact(
        "psi is onto Gamma(G)",
        reached.len() == big.len(),
        format!("{} of {} elements reached", reached.len(), big.len()),
    );
    Ok(RepAction { image, s_elements, tpa, crossed, psi, nx, report: report.finish() })
}

/// Rebuilds `Gamma` from the action it induces: `psi(Gamma_{theta^Gamma}(x)) = Gamma(x)`.
pub fn roundtrip_from_rep<T: KTarget>(rep: &PartialRep<T>, cap: usize) -> Result<AxiomReport> {
    let ra = theta_from_rep(rep, cap)?;
    let back = rep_from_theta(&ra.tpa)?;
    let mut report = AxiomReport::new("representation round trip");
    report.absorb("", ra.report.clone());
    let g = rep.groupoid();
    report.declare("psi(Gamma_theta(x)) = Gamma(x)");
    report.declare("Gamma_theta(x) = n_x d[x]");
    for x in g.arrows() {
        let gx = *back.rep.get(x);
        let ok = ra.image.index_of(rep.get(x)) == Some(ra.psi[gx]);
        report.record("psi(Gamma_theta(x)) = Gamma(x)", ok, g.render_tuple(&[x]), || {
            "psi does not recover Gamma(x)".into()
        });
        let n = ra.image.index_of(&ra.nx.n[x]).and_then(|i| ra.s_elements.iter().position(|&e| e == i));
        let expected = n.and_then(|n| ra.crossed.element(n, x));
        report.record("Gamma_theta(x) = n_x d[x]", expected == Some(gx), g.render_tuple(&[x]), || {
            "unit of S_x differs from n_x".into()
        });
    }
    Ok(report.finish())
}

/// Outcome of rebuilding an action from its representation.
#[derive(Clone, Debug)]
pub struct ActionRoundTrip {
    /// The semigroup is generated by the scalar multiples of the `1_x`.
    pub adjusted: bool,
    pub t_size: usize,
    pub phi_image_size: usize,
    pub report: AxiomReport,
}

/// `n_x = 1_x d[r(x)]` in the crossed product, and `phi: S -> T` with
/// `phi(theta^{Gamma_theta}_x(a)) = theta_x(phi(a))`, onto the part generated by the `1_x`.
pub fn roundtrip_from_action(t: &SemigroupTPA) -> Result<ActionRoundTrip> {
    let tr = rep_from_theta(t)?;
    let g = t.groupoid();
    let ts = t.semigroup();
    let mut report = AxiomReport::new("action round trip");
    let sep = check_separating(&tr.rep, SEMIGROUP_CAP)?;
    report.absorb("", sep);
    let nx = compute_nx(&tr.rep);
    report.declare("n_x = 1_x d[r(x)]");
    for x in g.arrows() {
        let expected = t.unit(x).and_then(|u| tr.crossed.element(u, g.r(x)));
        report.record("n_x = 1_x d[r(x)]", expected == Some(nx.n[x]), g.render_tuple(&[x]), || "n_x differs".into());
    }
    let ra = theta_from_rep(&tr.rep, SEMIGROUP_CAP)?;
    report.absorb("", ra.report.clone());
    // phi: S -> T, b d[e] -> b.
    let cs = tr.crossed.semigroup();
    let mut phi = Vec::with_capacity(ra.s_elements.len());
    report.declare("S sits in the identity blocks");
    for &e in &ra.s_elements {
        let c = ra.image.elements[e];
        let v = match tr.crossed.delta(c) {
            None => ts.zero(),
            Some((b, x)) => {
                report.record("S sits in the identity blocks", g.is_identity(x), [cs.name(c)], || {
                    "element off an identity block".into()
                });
                b
            }
        };
        phi.push(v);
    }
    let distinct: HashSet<usize> = phi.iter().copied().collect();
    report.fact(
        "phi is injective",
        distinct.len() == phi.len(),
        format!("{} images of {} elements", distinct.len(), phi.len()),
    );
    let ss = ra.tpa.semigroup();
    report.declare("phi is multiplicative");
    report.declare("phi is a K-map");
    for a in 0..ss.len() {
        for b in 0..ss.len() {
            let ok = phi[ss.mul(a, b)] == ts.mul(phi[a], phi[b]);
            report.record("phi is multiplicative", ok, [ss.name(a), ss.name(b)], || "phi(ab) != phi(a)phi(b)".into());
        }
        let p = ts.field().order().expect("prime") as usize;
        for k in 0..p {
            let ok = phi[ss.scale_residue(k, a)] == ts.scale_residue(k, phi[a]);
            report.record("phi is a K-map", ok, [k.to_string(), ss.name(a).to_string()], || {
                "scalar not preserved".into()
            });
        }
    }
    // The part of T generated by the units.
    let units: Vec<usize> = g.arrows().filter_map(|x| t.unit(x)).collect();
    let tbar = ts.closure(&units);
    let tbar_set: HashSet<usize> = tbar.iter().copied().collect();
    report.fact(
        "phi(S) is the part generated by the 1_x",
        distinct == tbar_set,
        format!("{} vs {} elements", distinct.len(), tbar.len()),
    );
    report.declare("phi(S_x) = T-bar ∩ T_x");
    report.declare("phi(1) = 1_x on S_x");
    report.declare("phi intertwines theta");
    for x in g.arrows() {
        let img: HashSet<usize> = ra.tpa.ideal(x).iter().map(|&a| phi[a]).collect();
        let target: HashSet<usize> = tbar.iter().copied().filter(|&b| t.contains(x, b)).collect();
        report.record("phi(S_x) = T-bar ∩ T_x", img == target, g.render_tuple(&[x]), || {
            format!("{} vs {} elements", img.len(), target.len())
        });
        let ok = ra.tpa.unit(x).map(|u| phi[u]) == t.unit(x);
        report.record("phi(1) = 1_x on S_x", ok, g.render_tuple(&[x]), || "units differ".into());
        for &a in ra.tpa.ideal(g.inv(x)) {
            let lhs = ra.tpa.theta(x, a).map(|b| phi[b]);
            let rhs = t.theta(x, phi[a]);
            report
                .record("phi intertwines theta", lhs == rhs, [g.name(x), ss.name(a)], || format!("{lhs:?} vs {rhs:?}"));
        }
    }
    Ok(ActionRoundTrip {
        adjusted: tbar.len() == ts.len(),
        t_size: ts.len(),
        phi_image_size: distinct.len(),
        report: report.finish(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{partial_single_arrow, trivial_action, G, G_INV, R_G};
    use crate::partrep::verify_partial_rep;

    fn f3() -> FieldSpec {
        FieldSpec::Prime(3)
    }

    #[test]
    fn field_is_a_cancellative_k_semigroup() {
        let k = KSemigroup::of_field(f3()).unwrap();
        assert!(verify_ksemigroup(&k).passed());
        assert!(check_k_cancellative(&k).passed());
        assert!(matches!(KSemigroup::of_field(FieldSpec::Rational), Err(Error::Unsupported(_))));
    }

    #[test]
    fn partial_fixture_becomes_a_semigroup_action() {
        let a = partial_single_arrow(f3()).unwrap();
        let rs = ring_to_semigroup(&a).unwrap();
        assert_eq!(rs.tpa.semigroup().len(), 81);
        assert!(verify_semigroup_tpa(&rs.tpa).passed());
        assert_eq!(rs.tpa.sigma().get(G, G_INV), &-f3().one());
        assert_eq!(rs.tpa.sigma().get(G_INV, G), &-f3().one());
        let back = semigroup_to_ring(&rs.tpa, &rs.algebra, &rs.vectors).unwrap();
        for x in a.groupoid().arrows() {
            for y in a.groupoid().arrows() {
                assert_eq!(back.twist(x, y), a.twist(x, y));
            }
            assert_eq!(back.domain(x), a.domain(x));
        }
        let scp = build_semigroup_crossed_product(&rs.tpa).unwrap();
        assert_eq!(scp.len(), 21);
        assert!(scp.report().passed());
        // (1_g d[g])(1_g^-1 d[g^-1]) = sigma(g,g^-1) 1_g d[r(g)]
        let (ug, ugi) = (rs.tpa.unit(G).unwrap(), rs.tpa.unit(G_INV).unwrap());
        let lhs = scp.semigroup().mul(scp.element(ug, G).unwrap(), scp.element(ugi, G_INV).unwrap());
        let minus_ug = rs.tpa.semigroup().scale(&-f3().one(), ug);
        assert_eq!(Some(lhs), scp.element(minus_ug, R_G));
    }

    #[test]
    fn zeroed_twist_breaks_condition_iv() {
        let rs = ring_to_semigroup(&partial_single_arrow(f3()).unwrap()).unwrap();
        let bad = rs.tpa.with_sigma(G, G_INV, f3().zero());
        let rep = verify_semigroup_tpa(&bad);
        assert!(!rep.check_passed("(iv) sigma(x,y) = 0 iff S_x ∩ S_xy = 0"));
        assert!(matches!(build_semigroup_crossed_product(&bad), Err(Error::Refused(_))));
    }

    #[test]
    fn embedding_is_proper_for_the_fixture_and_onto_for_the_trivial_group() {
        let e = embed_semigroup_cp(&partial_single_arrow(f3()).unwrap()).unwrap();
        assert!(e.injective && e.multiplicative && !e.surjective);
        assert!(e.witness.is_some());
        assert!(e.report.passed());
        let t = embed_semigroup_cp(&trivial_action(f3()).unwrap()).unwrap();
        assert!(t.injective && t.multiplicative && t.surjective);
        assert!(t.report.passed());
    }

    #[test]
    fn theta_rep_has_the_input_twisting() {
        let rs = ring_to_semigroup(&partial_single_arrow(f3()).unwrap()).unwrap();
        let tr = rep_from_theta(&rs.tpa).unwrap();
        let (rep, sigma) = verify_partial_rep(&tr.rep);
        assert!(rep.passed(), "{:?}", rep.failed_checks().collect::<Vec<_>>());
        let g = rs.tpa.groupoid();
        for (x, y, _) in g.defined_products() {
            if sigma.in_domain(x, y) {
                assert_eq!(sigma.get(x, y), rs.tpa.sigma().get(x, y));
            }
        }
        for x in g.arrows() {
            assert!(tr.rep.identity_convention_at(x));
        }
    }

    #[test]
    fn round_trips_on_the_fixture() {
        let rs = ring_to_semigroup(&partial_single_arrow(f3()).unwrap()).unwrap();
        let act = roundtrip_from_action(&rs.tpa).unwrap();
        assert!(act.report.passed(), "{:?}", act.report.failed_checks().collect::<Vec<_>>());
        assert!(!act.adjusted);
        assert!(act.phi_image_size < act.t_size);
        let tr = rep_from_theta(&rs.tpa).unwrap();
        let rep = roundtrip_from_rep(&tr.rep, SEMIGROUP_CAP).unwrap();
        assert!(rep.passed(), "{:?}", rep.failed_checks().collect::<Vec<_>>());
    }

    #[test]
    fn trivial_group_round_trips_are_identities() {
        let rs = ring_to_semigroup(&trivial_action(f3()).unwrap()).unwrap();
        let act = roundtrip_from_action(&rs.tpa).unwrap();
        assert!(act.report.passed());
        assert!(act.adjusted);
        assert_eq!(act.phi_image_size, act.t_size);
    }
}
