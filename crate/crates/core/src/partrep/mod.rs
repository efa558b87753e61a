//! Factor sets of categories and groupoids, monomial and partial projective representations,
//! equivalence of factor sets, idempotents and the `eta`/`n` families.
//!
//! Partial maps are stored as total tables where 0 marks "undefined".

pub mod schur;
pub mod zmod;

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::exactalg::{FieldSpec, Matrix, Scalar};
use crate::exel::{ideal_closure, ExelCategory, Semigroupoid};
use crate::groupoid::{Arrow, Groupoid};
use crate::ksemigroup::KSemigroup;
use crate::report::AxiomReport;

pub use schur::{category_factor_sets, enumerate_pm, quotient_factor_set, PmComponent, PmDecomposition, SchurCaps};

/// Bound on `|carrier| * log2 |K*|` for the exhaustive equivalence search.
pub const EQUIVALENCE_BITS_CAP: f64 = 48.0;

/// A K-valued map on pairs of a finite (semi)groupoid, zero meaning undefined.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactorSet {
    carrier: Semigroupoid,
    field: FieldSpec,
    values: Vec<Scalar>,
}

/// Factor sets of groupoids use the groupoid as carrier.
pub type PartialFactorSet = FactorSet;

impl FactorSet {
    /// `values[x * n + y]`; values must live in `field`.
    pub fn new(carrier: Semigroupoid, field: FieldSpec, values: Vec<Scalar>) -> Result<Self> {
        let n = carrier.len();
        if values.len() != n * n {
            return Err(Error::Structure(format!("factor set needs {} values", n * n)));
        }
        if values.iter().any(|v| v.field() != field) {
            return Err(Error::Argument("factor set values from another field".into()));
        }
        Ok(FactorSet { carrier, field, values })
    }

    /// Values from `f` on defined pairs, zero elsewhere.
    pub fn from_fn(carrier: Semigroupoid, field: FieldSpec, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let n = carrier.len();
        let values = (0..n * n)
            .map(|i| if carrier.mul(i / n, i % n).is_some() { f(i / n, i % n) } else { field.zero() })
            .collect();
        FactorSet { carrier, field, values }
    }

    /// The constant 1 on defined pairs.
    pub fn ones(carrier: Semigroupoid, field: FieldSpec) -> Self {
        Self::from_fn(carrier, field, |_, _| field.one())
    }

    pub fn on_groupoid(g: &Groupoid, field: FieldSpec, f: impl FnMut(Arrow, Arrow) -> Scalar) -> Self {
        Self::from_fn(Semigroupoid::from_groupoid(g), field, f)
    }

    pub fn carrier(&self) -> &Semigroupoid {
        &self.carrier
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> &Scalar {
        &self.values[x * self.len() + y]
    }

    pub fn in_domain(&self, x: usize, y: usize) -> bool {
        !self.get(x, y).is_zero()
    }

    /// Copy with one value replaced, defined or not. Used to plant failures.
    pub fn with_value(&self, x: usize, y: usize, v: Scalar) -> Self {
        let mut out = self.clone();
        let n = self.len();
        out.values[x * n + y] = v;
        out
    }

    /// Pairs where the value is zero.
    pub fn zero_set(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n * n).filter(|&i| self.values[i].is_zero()).map(|i| (i / n, i % n)).collect()
    }

    /// Pointwise product.
    pub fn product(&self, other: &FactorSet) -> Result<FactorSet> {
        if self.carrier != other.carrier || self.field != other.field {
            return Err(Error::Argument("factor sets live on different carriers".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(FactorSet { carrier: self.carrier.clone(), field: self.field, values })
    }

    pub fn is_idempotent(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }

    /// `(x, y) -> nu(x) nu(xy)^-1 nu(y) rho(x, y)`; `nu` must be invertible.
    pub fn twisted_by(&self, nu: &[Scalar]) -> Result<FactorSet> {
        if nu.len() != self.len() || nu.iter().any(Scalar::is_zero) {
            return Err(Error::Argument("twist needs one invertible scalar per element".into()));
        }
        let n = self.len();
        let mut values = self.values.clone();
        for (x, y, z) in self.carrier.defined_pairs() {
            let k = &(&nu[x] * &nu[y]) * &nu[z].inv().expect("nonzero");
            values[x * n + y] = &k * &self.values[x * n + y];
        }
        Ok(FactorSet { carrier: self.carrier.clone(), field: self.field, values })
    }

    /// Rows `x: y=value` of the nonzero entries.
    pub fn render(&self) -> Vec<String> {
        let n = self.len();
        (0..n * n)
            .filter(|&i| !self.values[i].is_zero())
            .map(|i| format!("({}, {}) = {}", self.carrier.name(i / n), self.carrier.name(i % n), self.values[i]))
            .collect()
    }
}

fn pair_names(s: &Semigroupoid, t: &[usize]) -> Vec<String> {
    t.iter().map(|&x| s.name(x).to_string()).collect()
}

fn require_category(s: &Semigroupoid) -> Result<()> {
    if s.is_category() {
        Ok(())
    } else {
        Err(Error::Argument("carrier is not flagged as a category".into()))
    }
}

fn require_groupoid_carrier(s: &Semigroupoid) -> Result<()> {
    if s.is_category() && s.star(0).is_some() || s.is_empty() {
        Ok(())
    } else {
        Err(Error::Argument("carrier is not a groupoid".into()))
    }
}

/// The 2-cocycle equality on composable triples and `rho(x,y) = 0 iff rho(r(x), xy) = 0`.
pub fn verify_category_factor_set(rho: &FactorSet) -> Result<AxiomReport> {
    let s = rho.carrier();
    require_category(s)?;
    let n = s.len();
    let mut rep = AxiomReport::new("category factor set");
    rep.declare("zero off composable pairs");
    rep.declare("2-cocycle equality");
    rep.declare("rho(x,y) = 0 iff rho(r(x),xy) = 0");
    for x in 0..n {
        for y in 0..n {
            if s.mul(x, y).is_none() {
                rep.record("zero off composable pairs", rho.get(x, y).is_zero(), pair_names(s, &[x, y]), || {
                    format!("value {}", rho.get(x, y))
                });
            }
        }
    }
    for (x, y, xy) in s.defined_pairs() {
        let lhs_zero = rho.get(x, y).is_zero();
        let rhs_zero = rho.get(s.r(x), xy).is_zero();
        rep.record("rho(x,y) = 0 iff rho(r(x),xy) = 0", lhs_zero == rhs_zero, pair_names(s, &[x, y]), || {
            format!("rho(x,y) = {}, rho(r(x),xy) = {}", rho.get(x, y), rho.get(s.r(x), xy))
        });
        for z in 0..n {
            let (Some(yz), Some(xyz)) = (s.mul(y, z), s.mul(xy, z)) else { continue };
            let lhs = rho.get(x, y) * rho.get(xy, z);
            let rhs = rho.get(x, yz) * rho.get(y, z);
            debug_assert_eq!(s.mul(x, yz), Some(xyz));
            rep.record("2-cocycle equality", lhs == rhs, pair_names(s, &[x, y, z]), || format!("{lhs} vs {rhs}"));
        }
    }
    Ok(rep.finish())
}

/// A map from a carrier to square matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialRep {
    field: FieldSpec,
    matrices: Vec<Matrix>,
}

impl MonomialRep {
    pub fn get(&self, x: usize) -> &Matrix {
        &self.matrices[x]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn dim(&self) -> usize {
        self.matrices.first().map_or(0, Matrix::rows)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }
}

/// `gamma_{u,v}(x) = rho(u, x)` when `ux = v`, else 0. Refuses unverified input.
pub fn monomial_representation(rho: &FactorSet) -> Result<MonomialRep> {
    let rep = verify_category_factor_set(rho)?;
    if let Some(c) = rep.first_failure() {
        return Err(Error::Refused(format!("factor set fails '{}'", c.name)));
    }
    Ok(monomial_representation_unchecked(rho))
}

pub fn monomial_representation_unchecked(rho: &FactorSet) -> MonomialRep {
    let s = rho.carrier();
    let n = s.len();
    let matrices = (0..n)
        .map(|x| {
            let mut m = Matrix::zeros(rho.field(), n, n);
            for u in 0..n {
                if let Some(v) = s.mul(u, x) {
                    m.set(u, v, rho.get(u, x).clone());
                }
            }
            m
        })
        .collect();
    MonomialRep { field: rho.field(), matrices }
}

/// `Gamma(x)Gamma(y) = Gamma(xy) rho(x,y)` when `xy` exists, 0 otherwise, and vanishing exactly on
/// the zero-set of `rho`.
pub fn verify_monomial_relation(rho: &FactorSet, gamma: &MonomialRep) -> AxiomReport {
    let s = rho.carrier();
    let n = s.len();
    let mut rep = AxiomReport::new("monomial representation");
    rep.declare("row monomial");
    rep.declare("Gamma(x)Gamma(y) = Gamma(xy)rho(x,y)");
    rep.declare("Gamma(x)Gamma(y) = 0 iff rho(x,y) = 0");
    for x in 0..n {
        let m = gamma.get(x);
        let ok = (0..m.rows()).all(|i| m.row(i).iter().filter(|v| !v.is_zero()).count() <= 1);
        rep.record("row monomial", ok, [s.name(x)], || "row with two nonzero entries".into());
    }
    for x in 0..n {
        for y in 0..n {
            let p = gamma.get(x).mul(gamma.get(y));
            let expected = match s.mul(x, y) {
                Some(xy) => gamma.get(xy).scale(rho.get(x, y)),
                None => Matrix::zeros(gamma.field(), p.rows(), p.cols()),
            };
            rep.record("Gamma(x)Gamma(y) = Gamma(xy)rho(x,y)", p == expected, pair_names(s, &[x, y]), || {
                "products differ".into()
            });
            rep.record(
                "Gamma(x)Gamma(y) = 0 iff rho(x,y) = 0",
                p.is_zero() == rho.get(x, y).is_zero(),
                pair_names(s, &[x, y]),
                || format!("product zero: {}, rho = {}", p.is_zero(), rho.get(x, y)),
            );
        }
    }
    rep.finish()
}

/// A K-semigroup used as the target of a partial projective representation.
pub trait KTarget: Clone + std::fmt::Debug {
    type Elem: Clone + Eq + Hash + Debug;
    fn field(&self) -> FieldSpec;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, k: &Scalar, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn zero(&self) -> Self::Elem;
    fn render(&self, a: &Self::Elem) -> String;

    /// The unique `k` with `a = k b`, if any. `b` must be nonzero for a unique answer.
    fn ratio(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Scalar>;

    fn mul_all(&self, xs: &[&Self::Elem]) -> Self::Elem {
        let (first, rest) = xs.split_first().expect("nonempty product");
        rest.iter().fold((*first).clone(), |acc, b| self.mul(&acc, b))
    }
}

/// Square matrices of a fixed size under multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixSemigroup {
    pub field: FieldSpec,
    pub dim: usize,
}

impl KTarget for MatrixSemigroup {
    type Elem = Matrix;

    fn field(&self) -> FieldSpec {
        self.field
    }

    fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a.mul(b)
    }

    fn scale(&self, k: &Scalar, a: &Matrix) -> Matrix {
        a.scale(k)
    }

    fn is_zero(&self, a: &Matrix) -> bool {
        a.is_zero()
    }

    fn zero(&self) -> Matrix {
        Matrix::zeros(self.field, self.dim, self.dim)
    }

    fn render(&self, a: &Matrix) -> String {
        a.to_string()
    }

    fn ratio(&self, a: &Matrix, b: &Matrix) -> Option<Scalar> {
        let (i, j) =
            (0..b.rows()).flat_map(|i| (0..b.cols()).map(move |j| (i, j))).find(|&(i, j)| !b.get(i, j).is_zero())?;
        let k = a.get(i, j) * &b.get(i, j).inv().expect("nonzero");
        (b.scale(&k) == *a).then_some(k)
    }
}

/// A map from a groupoid into a K-semigroup.
#[derive(Clone, Debug)]
pub struct PartialRep<T: KTarget> {
    groupoid: Groupoid,
    target: T,
    images: Vec<T::Elem>,
}

impl<T: KTarget> PartialRep<T> {
    pub fn new(groupoid: Groupoid, target: T, images: Vec<T::Elem>) -> Result<Self> {
        if images.len() != groupoid.len() {
            return Err(Error::Structure(format!("need {} images", groupoid.len())));
        }
        Ok(PartialRep { groupoid, target, images })
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn target(&self) -> &T {
        &self.target
    }

    pub fn get(&self, x: Arrow) -> &T::Elem {
        &self.images[x]
    }

    pub fn images(&self) -> &[T::Elem] {
        &self.images
    }

    /// Copy with one image replaced.
    pub fn with_image(&self, x: Arrow, v: T::Elem) -> Self {
        let mut out = self.clone();
        out.images[x] = v;
        out
    }

    fn prod(&self, xs: &[Arrow]) -> T::Elem {
        let refs: Vec<&T::Elem> = xs.iter().map(|&x| &self.images[x]).collect();
        self.target.mul_all(&refs)
    }

    /// `Gamma(r(x)) Gamma(x) = Gamma(x) = Gamma(x) Gamma(d(x))`.
    pub fn identity_convention_at(&self, x: Arrow) -> bool {
        let g = &self.groupoid;
        self.prod(&[g.r(x), x]) == self.images[x] && self.prod(&[x, g.d(x)]) == self.images[x]
    }
}

/// `Gamma = Gamma_bar o f`: a projective representation of `E(G)` composed with `x -> [x]`.
pub fn rep_through_exel(exel: &ExelCategory, gamma: &MonomialRep) -> PartialRep<MatrixSemigroup> {
    let target = MatrixSemigroup { field: gamma.field(), dim: gamma.dim() };
    let images = exel.inclusion().into_iter().map(|i| gamma.get(i).clone()).collect();
    PartialRep { groupoid: exel.groupoid().clone(), target, images }
}

/// Checks the vanishing conditions, extracts the factor set from the two displayed identities and
/// checks the conditional 2-cocycle and `sigma(x,x^-1) = sigma(x^-1,x)` where the identity
/// convention holds.
pub fn verify_partial_rep<T: KTarget>(rep: &PartialRep<T>) -> (AxiomReport, PartialFactorSet) {
    let g = &rep.groupoid;
    let t = &rep.target;
    let field = t.field();
    let names = |xs: &[Arrow]| g.render_tuple(xs);
    let mut report = AxiomReport::new("partial projective representation");
    for c in [
        "Gamma(x)Gamma(y) = 0 when xy is undefined",
        "simultaneous vanishing",
        "sigma exists",
        "conditional 2-cocycle",
        "sigma(x,x^-1) = sigma(x^-1,x)",
    ] {
        report.declare(c);
    }
    let mut sigma = FactorSet::on_groupoid(g, field, |_, _| field.zero());
    let n = g.len();
    for x in g.arrows() {
        for y in g.arrows() {
            let Some(xy) = g.compose(x, y) else {
                let z = t.is_zero(&rep.prod(&[x, y]));
                report.record("Gamma(x)Gamma(y) = 0 when xy is undefined", z, names(&[x, y]), || {
                    "nonzero product".into()
                });
                continue;
            };
            let (xi, yi) = (g.inv(x), g.inv(y));
            let z1 = t.is_zero(&rep.prod(&[xi, xy]));
            let z2 = t.is_zero(&rep.prod(&[x, y]));
            let z3 = t.is_zero(&rep.prod(&[xy, yi]));
            report.record("simultaneous vanishing", z1 == z2 && z2 == z3, names(&[x, y]), || {
                format!("Gamma(x^-1)Gamma(xy) zero: {z1}, Gamma(x)Gamma(y) zero: {z2}, Gamma(xy)Gamma(y^-1) zero: {z3}")
            });
            if z2 {
                continue;
            }
            let s1 = t.ratio(&rep.prod(&[xi, x, y]), &rep.prod(&[xi, xy]));
            let s2 = t.ratio(&rep.prod(&[x, y, yi]), &rep.prod(&[xy, yi]));
            let ok = matches!((&s1, &s2), (Some(a), Some(b)) if a == b && !a.is_zero());
            report.record("sigma exists", ok, names(&[x, y]), || format!("left ratio {s1:?}, right ratio {s2:?}"));
            if ok {
                sigma.values[x * n + y] = s1.expect("checked");
            }
        }
    }
    for (x, y, xy) in g.defined_products() {
        for z in g.arrows() {
            let Some(yz) = g.compose(y, z) else { continue };
            if t.is_zero(&rep.prod(&[x, y, z])) {
                continue;
            }
            let xyz = g.compose(xy, z).expect("associative");
            let lhs = sigma.get(x, y) * sigma.get(xy, z);
            let rhs = sigma.get(x, yz) * sigma.get(y, z);
            report.record("conditional 2-cocycle", lhs == rhs, names(&[x, y, z]), || format!("{lhs} vs {rhs}"));
            let _ = xyz;
        }
    }
    for x in g.arrows() {
        if rep.identity_convention_at(x) && rep.identity_convention_at(g.inv(x)) {
            let xi = g.inv(x);
            let ok = sigma.get(x, xi) == sigma.get(xi, x);
            report.record("sigma(x,x^-1) = sigma(x^-1,x)", ok, names(&[x]), || {
                format!("{} vs {}", sigma.get(x, xi), sigma.get(xi, x))
            });
        }
    }
    (report.finish(), sigma)
}

/// The two chains of equivalent domain memberships.
pub fn check_domain_closure(sigma: &PartialFactorSet) -> Result<AxiomReport> {
    let s = sigma.carrier();
    require_groupoid_carrier(s)?;
    let n = s.len();
    let inv = |x: usize| s.star(x).expect("groupoid");
    let mut rep = AxiomReport::new("domain closure");
    rep.declare("domain inside composable pairs");
    rep.declare("six-way pair chain");
    rep.declare("four-way identity chain");
    for x in 0..n {
        for y in 0..n {
            let Some(xy) = s.mul(x, y) else {
                rep.record("domain inside composable pairs", !sigma.in_domain(x, y), pair_names(s, &[x, y]), || {
                    "nonzero value off composable pairs".into()
                });
                continue;
            };
            let (xi, yi) = (inv(x), inv(y));
            let yixi = s.mul(yi, xi).expect("groupoid");
            let chain = [(x, y), (xi, xy), (xy, yi), (y, yixi), (yi, xi), (yixi, x)];
            let memb: Vec<bool> = chain.iter().map(|&(a, b)| sigma.in_domain(a, b)).collect();
            rep.record("six-way pair chain", memb.iter().all(|&m| m == memb[0]), pair_names(s, &[x, y]), || {
                format!("memberships {memb:?}")
            });
        }
    }
    for x in 0..n {
        let (r, d, xi) = (s.r(x), s.d(x), inv(x));
        let chain = [(x, d), (xi, x), (d, xi), (r, x)];
        let memb: Vec<bool> = chain.iter().map(|&(a, b)| sigma.in_domain(a, b)).collect();
        rep.record("four-way identity chain", memb.iter().all(|&m| m == memb[0]), pair_names(s, &[x]), || {
            format!("memberships {memb:?}")
        });
    }
    Ok(rep.finish())
}

/// Values in {0, 1}, `sigma(e,e) = 1`, and `(x,y)` in the domain forcing `(xy,y^-1)`, `(y^-1,x^-1)` and
/// `(x,d(x))` into it.
pub fn verify_idempotent_criterion(sigma: &PartialFactorSet) -> Result<AxiomReport> {
    let s = sigma.carrier();
    require_groupoid_carrier(s)?;
    let n = s.len();
    let mut rep = AxiomReport::new("idempotent criterion");
    rep.declare("values are 0 and 1");
    rep.declare("sigma(e,e) = 1");
    rep.declare("domain closure (12)");
    for x in 0..n {
        for y in 0..n {
            let v = sigma.get(x, y);
            rep.record("values are 0 and 1", v.is_zero() || v.is_one(), pair_names(s, &[x, y]), || {
                format!("value {v}")
            });
        }
    }
    for e in s.identities() {
        rep.record("sigma(e,e) = 1", sigma.get(e, e).is_one(), [s.name(e)], || format!("value {}", sigma.get(e, e)));
    }
    for x in 0..n {
        for y in 0..n {
            if !sigma.in_domain(x, y) {
                continue;
            }
            let Some(xy) = s.mul(x, y) else {
                rep.record("domain closure (12)", false, pair_names(s, &[x, y]), || {
                    "value on a non-composable pair".into()
                });
                continue;
            };
            let (xi, yi) = (s.star(x).expect("groupoid"), s.star(y).expect("groupoid"));
            let need = [(xy, yi), (yi, xi), (x, s.d(x))];
            let missing: Vec<String> = need
                .iter()
                .filter(|&&(a, b)| !sigma.in_domain(a, b))
                .map(|&(a, b)| format!("({}, {})", s.name(a), s.name(b)))
                .collect();
            rep.record("domain closure (12)", missing.is_empty(), pair_names(s, &[x, y]), || {
                format!("missing {}", missing.join(", "))
            });
        }
    }
    Ok(rep.finish())
}

/// `eps(x,y) = 1` when `xy` exists outside `ideal`, else 0.
pub fn idempotent_of_ideal(carrier: &Semigroupoid, field: FieldSpec, ideal: &[usize]) -> FactorSet {
    let mut member = vec![false; carrier.len()];
    for &i in ideal {
        member[i] = true;
    }
    FactorSet::from_fn(carrier.clone(), field, |x, y| {
        let xy = carrier.mul(x, y).expect("defined");
        if member[xy] {
            field.zero()
        } else {
            field.one()
        }
    })
}

/// `{ y : eps(r(y), y) = 0 }`.
pub fn ideal_of_idempotent(eps: &FactorSet) -> Result<Vec<usize>> {
    let s = eps.carrier();
    require_category(s)?;
    if !eps.is_idempotent() {
        return Err(Error::Argument("factor set is not idempotent".into()));
    }
    Ok((0..s.len()).filter(|&y| eps.get(s.r(y), y).is_zero()).collect())
}

/// The groupoid factor set `sigma(x,y) = 1` iff `xy` exists and `[x][y]` is outside `ideal` of `E(G)`.
pub fn partial_idempotent_of_ideal(exel: &ExelCategory, field: FieldSpec, ideal: &[usize]) -> PartialFactorSet {
    let e = exel.semigroupoid();
    let mut member = vec![false; e.len()];
    for &i in ideal {
        member[i] = true;
    }
    let g = exel.groupoid();
    FactorSet::on_groupoid(g, field, |x, y| {
        let p = e.mul(exel.generator(x), exel.generator(y)).expect("composable generators");
        if member[p] {
            field.zero()
        } else {
            field.one()
        }
    })
}

/// The ideal of `E(G)` generated by `[x][y]` over composable pairs outside the domain.
pub fn ideal_of_partial_idempotent(exel: &ExelCategory, sigma: &PartialFactorSet) -> Vec<usize> {
    let e = exel.semigroupoid();
    let g = exel.groupoid();
    let gens: Vec<usize> = g
        .defined_products()
        .filter(|&(x, y, _)| !sigma.in_domain(x, y))
        .map(|(x, y, _)| e.mul(exel.generator(x), exel.generator(y)).expect("composable generators"))
        .collect();
    ideal_closure(e, &gens)
}

/// Searches for `nu` with `b(x,y) = nu(x) nu(xy)^-1 nu(y) a(x,y)` on all defined pairs.
///
/// Zero-sets must coincide. The search assigns `nu` element by element and propagates every
/// constraint whose three elements are assigned or whose last unknown is forced.
pub fn equivalent_factor_sets(a: &FactorSet, b: &FactorSet) -> Result<Option<Vec<Scalar>>> {
    if a.carrier() != b.carrier() || a.field() != b.field() {
        return Err(Error::Argument("factor sets live on different carriers".into()));
    }
    let field = a.field();
    let Some(order) = field.order() else {
        return Err(Error::Unsupported("equivalence search needs a finite field".into()));
    };
    let s = a.carrier();
    let n = s.len();
    let bits = n as f64 * ((order - 1) as f64).log2();
    if bits > EQUIVALENCE_BITS_CAP {
        return Err(Error::Capacity(format!("search space of {bits:.1} bits")));
    }
    if a.zero_set() != b.zero_set() {
        return Ok(None);
    }
    // ratio c(x,y) = b/a must equal nu(x) nu(y) / nu(xy).
    let mut cons: Vec<(usize, usize, usize, Scalar)> = Vec::new();
    for (x, y, z) in s.defined_pairs() {
        if !a.in_domain(x, y) {
            continue;
        }
        cons.push((x, y, z, b.get(x, y) * &a.get(x, y).inv().expect("nonzero")));
    }
    let mut by_elem: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(x, y, z, _)) in cons.iter().enumerate() {
        for v in [x, y, z] {
            if !by_elem[v].contains(&i) {
                by_elem[v].push(i);
            }
        }
    }
    let units = field.units();
    let mut nu: Vec<Option<Scalar>> = vec![None; n];
    if search(&cons, &by_elem, &units, &mut nu) {
        Ok(Some(nu.into_iter().map(|v| v.unwrap_or_else(|| field.one())).collect()))
    } else {
        Ok(None)
    }
}

fn propagate(
    cons: &[(usize, usize, usize, Scalar)],
    by_elem: &[Vec<usize>],
    nu: &mut [Option<Scalar>],
    trail: &mut Vec<usize>,
    start: usize,
) -> bool {
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &ci in &by_elem[v] {
            let (x, y, z, ref c) = cons[ci];
            // nu(x) nu(y) = c nu(z)
            match (&nu[x], &nu[y], &nu[z]) {
                (Some(p), Some(q), Some(r)) => {
                    if p * q != c * r {
                        return false;
                    }
                }
                (Some(p), Some(q), None) => {
                    let val = &(p * q) * &c.inv().expect("nonzero");
                    nu[z] = Some(val);
                    trail.push(z);
                    stack.push(z);
                }
                (Some(p), None, Some(r)) if x != y => {
                    let val = &(c * r) * &p.inv().expect("nonzero");
                    nu[y] = Some(val);
                    trail.push(y);
                    stack.push(y);
                }
                (None, Some(q), Some(r)) if x != y => {
                    let val = &(c * r) * &q.inv().expect("nonzero");
                    nu[x] = Some(val);
                    trail.push(x);
                    stack.push(x);
                }
                _ => {}
            }
        }
    }
    true
}

fn search(
    cons: &[(usize, usize, usize, Scalar)],
    by_elem: &[Vec<usize>],
    units: &[Scalar],
    nu: &mut Vec<Option<Scalar>>,
) -> bool {
    let Some(v) = nu.iter().position(Option::is_none) else {
        return true;
    };
    for u in units {
        let mut trail = vec![v];
        nu[v] = Some(u.clone());
        if propagate(cons, by_elem, nu, &mut trail, v) && search(cons, by_elem, units, nu) {
            return true;
        }
        for t in trail {
            nu[t] = None;
        }
    }
    false
}

/// The `eta` and `n` families of a partial projective representation.
#[derive(Clone, Debug)]
pub struct NxData<E> {
    pub sigma: PartialFactorSet,
    pub eta: Vec<E>,
    pub n: Vec<E>,
    pub report: AxiomReport,
}

/// `eta_x = Gamma(x)Gamma(x^-1)`, `n_x = eta_x sigma(x^-1,x)^-1` (0 when `Gamma(x) = 0`), with the
/// identity convention and the standard properties checked.
pub fn compute_nx<T: KTarget>(rep: &PartialRep<T>) -> NxData<T::Elem> {
    let g = &rep.groupoid;
    let t = &rep.target;
    let (base, sigma) = verify_partial_rep(rep);
    let mut report = AxiomReport::new("eta and n");
    report.absorb("partial rep: ", base);
    let names = |xs: &[Arrow]| g.render_tuple(xs);
    report.declare("identity convention");
    for x in g.arrows() {
        report.record("identity convention", rep.identity_convention_at(x), names(&[x]), || {
            "Gamma(r(x)), Gamma(d(x)) are not one-sided identities".into()
        });
    }
    let eta: Vec<T::Elem> = g.arrows().map(|x| rep.prod(&[x, g.inv(x)])).collect();
    let n: Vec<T::Elem> = g
        .arrows()
        .map(|x| {
            let s = sigma.get(g.inv(x), x);
            match (t.is_zero(rep.get(x)), s.inv()) {
                (true, _) => t.zero(),
                (false, Some(k)) => t.scale(&k, &eta[x]),
                // sigma(x^-1, x) = 0 with Gamma(x) != 0: the properties below fail.
                (false, None) => t.zero(),
            }
        })
        .collect();
    for c in [
        "eta_x^2 = eta_x sigma(x,x^-1)",
        "n_x^2 = n_x",
        "four-way zero equivalence",
        "eta/n products vanish together",
        "Gamma(x) n_y = n_xy Gamma(x)",
        "n_x n_y = n_y n_x",
    ] {
        report.declare(c);
    }
    for x in g.arrows() {
        let xi = g.inv(x);
        let lhs = t.mul(&eta[x], &eta[x]);
        let rhs = t.scale(sigma.get(x, xi), &eta[x]);
        report.record("eta_x^2 = eta_x sigma(x,x^-1)", lhs == rhs, names(&[x]), || {
            format!("{} vs {}", t.render(&lhs), t.render(&rhs))
        });
        let nn = t.mul(&n[x], &n[x]);
        report.record("n_x^2 = n_x", nn == n[x], names(&[x]), || t.render(&nn));
        let zs = [t.is_zero(&eta[x]), sigma.get(x, xi).is_zero(), t.is_zero(rep.get(x)), t.is_zero(&n[x])];
        report.record("four-way zero equivalence", zs.iter().all(|&z| z == zs[0]), names(&[x]), || {
            format!("eta, sigma(x,x^-1), Gamma, n zero: {zs:?}")
        });
    }
    for x in g.arrows() {
        for y in g.arrows() {
            if g.r(x) == g.r(y) {
                let zs = [
                    t.is_zero(&t.mul(&eta[x], &eta[y])),
                    t.is_zero(&t.mul(&eta[y], &eta[x])),
                    t.is_zero(&t.mul(&n[x], &n[y])),
                ];
                report.record("eta/n products vanish together", zs.iter().all(|&z| z == zs[0]), names(&[x, y]), || {
                    format!("{zs:?}")
                });
                let (a, b) = (t.mul(&n[x], &n[y]), t.mul(&n[y], &n[x]));
                report.record("n_x n_y = n_y n_x", a == b, names(&[x, y]), || {
                    format!("{} vs {}", t.render(&a), t.render(&b))
                });
            }
            if let Some(xy) = g.compose(x, y) {
                let a = t.mul(rep.get(x), &n[y]);
                let b = t.mul(&n[xy], rep.get(x));
                report.record("Gamma(x) n_y = n_xy Gamma(x)", a == b, names(&[x, y]), || {
                    format!("{} vs {}", t.render(&a), t.render(&b))
                });
            }
        }
    }
    NxData { sigma, eta, n, report: report.finish() }
}

/// The quotient `S / lambda` of a finite K-semigroup by scalar proportionality.
#[derive(Clone, Debug)]
pub struct Projection {
    /// Classes sorted by least member.
    pub classes: Vec<Vec<usize>>,
    /// `xi`: element to class.
    pub class_of: Vec<usize>,
    /// `xi'`: least member of each class.
    pub section: Vec<usize>,
    /// Product of classes.
    pub product: Vec<usize>,
    pub report: AxiomReport,
}

/// `x lambda y` iff `x = a y` for a unit `a`; checks that `lambda` is a congruence, that `xi` is a
/// homomorphism and that `xi o xi' = id`.
pub fn project_semigroup(s: &KSemigroup) -> Projection {
    let n = s.len();
    let units = s.field().units();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let mut members: Vec<usize> = units.iter().map(|a| s.scale(a, x)).collect();
        members.push(x);
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            class_of[m] = classes.len();
        }
        classes.push(members);
    }
    let section: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let k = classes.len();
    let mut report = AxiomReport::new("projectivization");
    report.declare("lambda is a congruence");
    report.declare("xi is a homomorphism");
    report.declare("xi xi' = id");
    for x in 0..n {
        let cx = class_of[x];
        for &y in &classes[cx] {
            for z in 0..n {
                let ok =
                    class_of[s.mul(x, z)] == class_of[s.mul(y, z)] && class_of[s.mul(z, x)] == class_of[s.mul(z, y)];
                report.record("lambda is a congruence", ok, [s.name(x), s.name(y), s.name(z)], || {
                    "classes of products differ".into()
                });
            }
        }
    }
    let product: Vec<usize> = (0..k * k).map(|i| class_of[s.mul(section[i / k], section[i % k])]).collect();
    for x in 0..n {
        for y in 0..n {
            let ok = class_of[s.mul(x, y)] == product[class_of[x] * k + class_of[y]];
            report.record("xi is a homomorphism", ok, [s.name(x), s.name(y)], || "class product differs".into());
        }
    }
    for (c, &r) in section.iter().enumerate() {
        report.record("xi xi' = id", class_of[r] == c, [s.name(r)], || "section leaves its class".into());
    }
    Projection { classes, class_of, section, product, report: report.finish() }
}

/// Groups values by equal keys, preserving first-seen order.
pub(crate) fn group_by_key<K: Eq + Hash + Clone, V>(items: impl IntoIterator<Item = (K, V)>) -> Vec<(K, Vec<V>)> {
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut out: Vec<(K, Vec<V>)> = Vec::new();
    for (k, v) in items {
        match index.get(&k) {
            Some(&i) => out[i].1.push(v),
            None => {
                index.insert(k.clone(), out.len());
                out.push((k, vec![v]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exel::build_exel_category;
    use crate::fixtures::{D_G, G, G_INV, R_G};

    fn f3() -> FieldSpec {
        FieldSpec::Prime(3)
    }

    fn single() -> Groupoid {
        Groupoid::single_arrow()
    }

    #[test]
    fn constant_one_is_a_factor_set() {
        let rho = FactorSet::ones(Semigroupoid::from_groupoid(&single()), f3());
        assert!(verify_category_factor_set(&rho).unwrap().passed());
        let gamma = monomial_representation(&rho).unwrap();
        assert_eq!(gamma.dim(), 4);
        assert!(verify_monomial_relation(&rho, &gamma).passed());
    }

    #[test]
    fn zero_on_one_pair_breaks_condition_four() {
        let rho = FactorSet::ones(Semigroupoid::from_groupoid(&single()), f3()).with_value(G, G_INV, f3().zero());
        let rep = verify_category_factor_set(&rho).unwrap();
        assert!(!rep.check_passed("rho(x,y) = 0 iff rho(r(x),xy) = 0"));
        assert!(matches!(monomial_representation(&rho), Err(Error::Refused(_))));
    }

    #[test]
    fn identity_rep_of_a_group_has_trivial_data() {
        let g = Groupoid::trivial();
        let target = MatrixSemigroup { field: f3(), dim: 2 };
        let rep = PartialRep::new(g, target, vec![Matrix::identity(f3(), 2)]).unwrap();
        let (r, sigma) = verify_partial_rep(&rep);
        assert!(r.passed());
        assert!(sigma.get(0, 0).is_one());
        let nx = compute_nx(&rep);
        assert!(nx.report.passed());
        assert_eq!(nx.n[0], Matrix::identity(f3(), 2));
    }

    #[test]
    fn lift_through_exel_recovers_quotient_formula() {
        let g = single();
        let exel = build_exel_category(&g).unwrap();
        let rho = FactorSet::ones(exel.semigroupoid().clone(), f3());
        let gamma = monomial_representation(&rho).unwrap();
        let rep = rep_through_exel(&exel, &gamma);
        let (r, sigma) = verify_partial_rep(&rep);
        assert!(r.passed(), "{r:?}");
        assert!(check_domain_closure(&sigma).unwrap().passed());
        // Every pair of a connected groupoid lies in the domain of the trivial lift.
        assert!(g.defined_products().all(|(x, y, _)| sigma.get(x, y).is_one()));
        assert!(compute_nx(&rep).report.passed());
    }

    #[test]
    fn narrow_domain_breaks_chain() {
        let g = single();
        let sigma =
            FactorSet::on_groupoid(&g, f3(), |x, y| if (x, y) == (G, G_INV) { f3().one() } else { f3().zero() });
        assert!(!check_domain_closure(&sigma).unwrap().passed());
        let crit = verify_idempotent_criterion(&sigma).unwrap();
        assert!(!crit.check_passed("domain closure (12)"));
    }

    #[test]
    fn ideal_idempotents_round_trip() {
        let s = Semigroupoid::from_groupoid(&single());
        for ideal in crate::exel::semigroupoid_ideals(&s).unwrap() {
            let eps = idempotent_of_ideal(&s, f3(), &ideal);
            assert!(verify_category_factor_set(&eps).unwrap().passed());
            assert_eq!(eps.product(&eps).unwrap(), eps);
            assert_eq!(ideal_of_idempotent(&eps).unwrap(), ideal);
        }
        let empty = idempotent_of_ideal(&s, f3(), &[]);
        assert_eq!(empty, FactorSet::ones(s.clone(), f3()));
    }

    #[test]
    fn equivalence_recovers_planted_twist() {
        let s = Semigroupoid::from_groupoid(&single());
        let f5 = FieldSpec::Prime(5);
        let a = FactorSet::ones(s, f5);
        let nu: Vec<Scalar> = [2, 3, 4, 1].iter().map(|&v| f5.from_i64(v)).collect();
        let b = a.twisted_by(&nu).unwrap();
        let found = equivalent_factor_sets(&a, &b).unwrap().expect("equivalent");
        assert_eq!(a.twisted_by(&found).unwrap(), b);
        let c = b.with_value(R_G, R_G, f5.zero());
        assert_eq!(equivalent_factor_sets(&a, &c).unwrap(), None);
        let _ = D_G;
    }

    #[test]
    fn mutated_image_breaks_vanishing() {
        let g = single();
        let exel = build_exel_category(&g).unwrap();
        let rho = FactorSet::ones(exel.semigroupoid().clone(), f3());
        let rep = rep_through_exel(&exel, &monomial_representation(&rho).unwrap());
        let zero = rep.target().zero();
        let broken = rep.with_image(G_INV, zero);
        let nx = compute_nx(&broken);
        assert!(!nx.report.passed());
        assert!(!nx.report.first_failure().unwrap().witnesses.is_empty());
    }
}
