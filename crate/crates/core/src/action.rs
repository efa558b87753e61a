//! Twisted partial actions of a finite groupoid on a finite-dimensional algebra.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exactalg::linalg::{Subspace, Vector};
use crate::exactalg::{Algebra, LinearMap};
use crate::groupoid::{composable_tuples, Arrow, Groupoid};
use crate::report::AxiomReport;

/// Ideals `D_g`, isomorphisms `alpha_g: D_{g^-1} -> D_g` and twists `w_{g,h}` in `D_g D_{gh}`.
///
/// Twists are stored as a total table; entries for non-composable pairs are zero.
/// Construction checks shapes only, [`verify_tpa`] checks the axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPartialAction {
    groupoid: Groupoid,
    algebra: Algebra,
    domains: Vec<Subspace>,
    maps: Vec<LinearMap>,
    inverses: Vec<Option<LinearMap>>,
    twists: Vec<Vector>,
}

impl TwistedPartialAction {
    /// Assembles an action. Identity arrows without a map get the identity; missing twists default
    /// to the unit of `D_g D_{gh}`.
    pub fn assemble(
        groupoid: Groupoid,
        algebra: Algebra,
        domains: Vec<Subspace>,
        maps: Vec<Option<LinearMap>>,
        twists: &HashMap<(Arrow, Arrow), Vector>,
    ) -> Result<Self> {
        let n = groupoid.len();
        if domains.len() != n || maps.len() != n {
            return Err(Error::Structure(format!("expected {n} domains and maps")));
        }
        for (g, d) in domains.iter().enumerate() {
            if d.ambient_dim() != algebra.dim() || d.field() != algebra.field() {
                return Err(Error::Structure(format!("domain of {} is not in the algebra", groupoid.name(g))));
            }
        }
        let maps = maps
            .into_iter()
            .enumerate()
            .map(|(g, m)| match m {
                Some(m) => Ok(m),
                None if groupoid.is_identity(g) => Ok(LinearMap::identity(domains[g].clone())),
                None => Err(Error::Structure(format!("no map given for arrow {}", groupoid.name(g)))),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = vec![algebra.zero(); n * n];
        for g in groupoid.arrows() {
            for h in groupoid.arrows() {
                let Some(gh) = groupoid.compose(g, h) else { continue };
                table[g * n + h] = match twists.get(&(g, h)) {
                    Some(w) => w.clone(),
                    None => {
                        let ideal = algebra.product(&domains[g], &domains[gh])?;
                        algebra.unit_of(&ideal).ok_or_else(|| {
                            Error::Unsupported(format!(
                                "no twist given for ({}, {}) and D_g D_gh has no unit",
                                groupoid.name(g),
                                groupoid.name(h)
                            ))
                        })?
                    }
                };
            }
        }
        Self::new(groupoid, algebra, domains, maps, table)
    }

    /// Builds an action from complete tables.
    pub fn new(
        groupoid: Groupoid,
        algebra: Algebra,
        domains: Vec<Subspace>,
        maps: Vec<LinearMap>,
        twists: Vec<Vector>,
    ) -> Result<Self> {
        let n = groupoid.len();
        if domains.len() != n || maps.len() != n || twists.len() != n * n {
            return Err(Error::Structure("action tables do not match the groupoid size".into()));
        }
        for g in groupoid.arrows() {
            let m = &maps[g];
            if m.domain() != &domains[groupoid.inv(g)] || m.codomain() != &domains[g] {
                return Err(Error::Structure(format!(
                    "map for {} must go from D of the inverse to D of the arrow",
                    groupoid.name(g)
                )));
            }
        }
        if let Some(bad) = twists.iter().position(|w| w.len() != algebra.dim()) {
            return Err(Error::Structure(format!("twist entry {bad} has the wrong length")));
        }
        let inverses = maps.iter().map(LinearMap::inverse).collect();
        let mut twists = twists;
        for g in groupoid.arrows() {
            for h in groupoid.arrows() {
                if groupoid.compose(g, h).is_none() {
                    twists[g * n + h] = algebra.zero();
                }
            }
        }
        Ok(TwistedPartialAction { groupoid, algebra, domains, maps, inverses, twists })
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn domain(&self, g: Arrow) -> &Subspace {
        &self.domains[g]
    }

    pub fn domains(&self) -> &[Subspace] {
        &self.domains
    }

    pub fn map(&self, g: Arrow) -> &LinearMap {
        &self.maps[g]
    }

    pub fn twist(&self, g: Arrow, h: Arrow) -> &Vector {
        &self.twists[g * self.groupoid.len() + h]
    }

    /// Copy with one twist replaced. Used to build mutated inputs.
    pub fn with_twist(&self, g: Arrow, h: Arrow, w: Vector) -> Self {
        let mut out = self.clone();
        let n = self.groupoid.len();
        out.twists[g * n + h] = w;
        out
    }

    /// Unit of `D_g`.
    pub fn unit(&self, g: Arrow) -> Result<Vector> {
        self.algebra
            .unit_of(&self.domains[g])
            .ok_or_else(|| Error::Unsupported(format!("D_{} has no unit", self.groupoid.name(g))))
    }

    pub fn alpha(&self, g: Arrow, a: &[crate::Scalar]) -> Result<Vector> {
        self.maps[g].apply(a)
    }

    /// `alpha_g^-1: D_g -> D_{g^-1}`. Not the same as `alpha_{g^-1}` when twisted.
    pub fn alpha_inv(&self, g: Arrow, a: &[crate::Scalar]) -> Result<Vector> {
        self.inverses[g]
            .as_ref()
            .ok_or_else(|| Error::Argument(format!("map for {} is not invertible", self.groupoid.name(g))))?
            .apply(a)
    }

    /// `D_g D_{gh}`, where the twist `w_{g,h}` lives.
    pub fn twist_ideal(&self, g: Arrow, h: Arrow) -> Result<Subspace> {
        let gh = self.groupoid.compose(g, h).ok_or_else(|| Error::Argument("pair is not composable".into()))?;
        self.algebra.product(&self.domains[g], &self.domains[gh])
    }

    /// Inverse of `w_{g,h}` inside `D_g D_{gh}`, `None` if it is not invertible there.
    pub fn twist_inverse(&self, g: Arrow, h: Arrow) -> Result<Option<Vector>> {
        let ideal = self.twist_ideal(g, h)?;
        let w = self.twist(g, h);
        if !ideal.contains(w) {
            return Ok(None);
        }
        self.algebra.invert_in(w, &ideal)
    }
}

/// Checks every axiom of a twisted partial action on canonical bases of the ideals involved.
///
/// Fails with an unsupported-case error when some `D_g` or `D_g D_{gh}` is nonzero without a unit.
pub fn verify_tpa(a: &TwistedPartialAction) -> Result<AxiomReport> {
    let g = a.groupoid();
    let alg = a.algebra();
    let full = alg.full();
    let nm = |x: Arrow| g.name(x).to_string();
    let show = |v: &Vector| alg.render(v);
    let mut rep = AxiomReport::new("twisted partial action");

    let units = g.arrows().map(|x| a.unit(x)).collect::<Result<Vec<_>>>()?;
    for x in g.arrows() {
        let rx = g.r(x);
        rep.record("D_r(g) is an ideal of R", alg.is_ideal_in(a.domain(rx), &full), [nm(x)], || {
            "not a two-sided ideal".into()
        });
        rep.record("D_g is an ideal of D_r(g)", alg.is_ideal_in(a.domain(x), a.domain(rx)), [nm(x)], || {
            "not an ideal of D_r(g)".into()
        });
        let m = a.map(x);
        let iso = m.is_bijective() && m.multiplicativity_failure(alg).is_none();
        rep.record("alpha_g is a ring isomorphism", iso, [nm(x)], || "not bijective or not multiplicative".into());
    }

    for x in g.arrows() {
        let sq = alg.product(a.domain(x), a.domain(x))?;
        rep.record("(i) D_g^2 = D_g", &sq == a.domain(x), [nm(x)], || format!("dim D_g^2 = {}", sq.dim()));
        for y in g.arrows() {
            let xy = alg.product(a.domain(x), a.domain(y))?;
            let yx = alg.product(a.domain(y), a.domain(x))?;
            rep.record("(i) D_g D_h = D_h D_g", xy == yx, [nm(x), nm(y)], || "products differ".into());
        }
    }

    for e in g.identities() {
        let id = LinearMap::identity(a.domain(e).clone());
        rep.record("(ii) alpha_e is the identity", a.map(e) == &id, [nm(e)], || "not the identity".into());
    }

    let pairs = composable_tuples(g, 2)?;
    let mut twist_inv: HashMap<(Arrow, Arrow), Vector> = HashMap::new();
    for p in &pairs {
        let (x, y) = (p[0], p[1]);
        let xy = g.compose(x, y).expect("composable");
        let ideal = alg.product(a.domain(x), a.domain(xy))?;
        if alg.unit_of(&ideal).is_none() {
            return Err(Error::Unsupported(format!("D_g D_gh has no unit at ({}, {})", nm(x), nm(y))));
        }
        let w = a.twist(x, y);
        let inside = ideal.contains(w);
        rep.record("w_{g,h} lies in D_g D_gh", inside, [nm(x), nm(y)], || show(w));
        let inv = if inside { alg.invert_in(w, &ideal)? } else { None };
        rep.record("w_{g,h} is invertible in D_g D_gh", inv.is_some(), [nm(x), nm(y)], || show(w));
        if let Some(i) = inv {
            twist_inv.insert((x, y), i);
        }

        let src = alg.product(a.domain(g.inv(x)), a.domain(y))?;
        let ok = matches!(a.map(x).image_of(&src), Ok(s) if s == ideal);
        rep.record("(iii) alpha_g(D_g^-1 D_h) = D_g D_gh", ok, [nm(x), nm(y)], || "image differs".into());
    }

    for p in &pairs {
        let (x, y) = (p[0], p[1]);
        let xy = g.compose(x, y).expect("composable");
        let Some(winv) = twist_inv.get(&(x, y)) else { continue };
        let w = a.twist(x, y);
        let yi = g.inv(y);
        let xyi = g.inv(xy);
        let dom = alg.product(a.domain(yi), a.domain(xyi))?;
        for b in dom.basis() {
            let lhs = a.alpha(y, b).and_then(|t| a.alpha(x, &t));
            let rhs = a.alpha(xy, b).map(|t| alg.mul_all(&[w, &t, winv]));
            let ok = matches!((&lhs, &rhs), (Ok(l), Ok(r)) if l == r);
            rep.record("(iv) alpha_g alpha_h = w alpha_gh w^-1", ok, [nm(x), nm(y)], || {
                format!("a = {}: {:?} vs {:?}", show(b), lhs.as_ref().map(show), rhs.as_ref().map(show))
            });
        }
        rep.declare("(iv) alpha_g alpha_h = w alpha_gh w^-1");
    }

    for x in g.arrows() {
        let left = a.twist(g.r(x), x);
        let right = a.twist(x, g.d(x));
        let ok = left == &units[x] && right == &units[x];
        rep.record("(v) w_{r(g),g} = w_{g,d(g)} = 1_g", ok, [nm(x)], || {
            format!("{} and {} vs {}", show(left), show(right), show(&units[x]))
        });
    }

    for t3 in composable_tuples(g, 3)? {
        let (x, y, z) = (t3[0], t3[1], t3[2]);
        let xy = g.compose(x, y).expect("composable");
        let yz = g.compose(y, z).expect("composable");
        let dom = alg.product_all(&[a.domain(g.inv(x)), a.domain(y), a.domain(yz)])?;
        for b in dom.basis() {
            let lhs = a.alpha(x, &alg.mul(b, a.twist(y, z))).map(|t| alg.mul(&t, a.twist(x, yz)));
            let rhs = a.alpha(x, b).map(|t| alg.mul_all(&[&t, a.twist(x, y), a.twist(xy, z)]));
            let ok = matches!((&lhs, &rhs), (Ok(l), Ok(r)) if l == r);
            rep.record("(vi) twisted cocycle identity", ok, [nm(x), nm(y), nm(z)], || {
                format!("a = {}: lhs {:?}, rhs {:?}", show(b), lhs.as_ref().map(show), rhs.as_ref().map(show))
            });
        }
    }
    rep.declare("(vi) twisted cocycle identity");
    Ok(rep.finish())
}

/// Verifies and converts a failed report into a refusal.
pub fn require_tpa(a: &TwistedPartialAction) -> Result<()> {
    let rep = verify_tpa(a)?;
    match rep.first_failure() {
        None => Ok(()),
        Some(c) => Err(Error::Refused(format!("action fails {}", c.name))),
    }
}

/// `D_g = D_r(g)` for every arrow.
pub fn is_global(b: &TwistedPartialAction) -> bool {
    let g = b.groupoid();
    g.arrows().all(|x| b.domain(x) == b.domain(g.r(x)))
}

/// Restricts a global action to a unital ideal `ideal` of its algebra.
///
/// `D_r(g) = ideal * E_r(g)`, `D_g = D_r(g) * beta_g(D_d(g))`, `alpha_g` is `beta_g` restricted and
/// `w_{g,h} = u_{g,h} 1_g 1_gh`. The result lives in the same algebra.
pub fn restrict_global(b: &TwistedPartialAction, ideal: &Subspace) -> Result<TwistedPartialAction> {
    if !is_global(b) {
        return Err(Error::Argument("restriction needs a global action".into()));
    }
    let alg = b.algebra();
    if ideal.ambient_dim() != alg.dim() || !alg.is_ideal_in(ideal, &alg.full()) {
        return Err(Error::Argument("restriction target is not an ideal of the algebra".into()));
    }
    if alg.unit_of(ideal).is_none() {
        return Err(Error::Argument("restriction target has no unit".into()));
    }
    let g = b.groupoid();
    let n = g.len();
    let mut domains = vec![alg.zero_ideal(); n];
    for e in g.identities() {
        domains[e] = alg.product(ideal, b.domain(e))?;
    }
    for x in g.arrows() {
        if g.is_identity(x) {
            continue;
        }
        let moved = b.map(x).image_of(&domains[g.d(x)])?;
        domains[x] = alg.product(&domains[g.r(x)], &moved)?;
    }
    let mut maps = Vec::with_capacity(n);
    for x in g.arrows() {
        maps.push(b.map(x).restrict(domains[g.inv(x)].clone(), domains[x].clone())?);
    }
    let units = domains
        .iter()
        .map(|d| alg.unit_of(d).ok_or_else(|| Error::Unsupported("restricted domain has no unit".into())))
        .collect::<Result<Vec<_>>>()?;
    let mut twists = vec![alg.zero(); n * n];
    for x in g.arrows() {
        for y in g.arrows() {
            if let Some(xy) = g.compose(x, y) {
                twists[x * n + y] = alg.mul_all(&[b.twist(x, y), &units[x], &units[xy]]);
            }
        }
    }
    TwistedPartialAction::new(g.clone(), alg.clone(), domains, maps, twists)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::FieldSpec;
    use crate::fixtures;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn partial_fixture_passes() {
        let a = fixtures::partial_single_arrow(q()).unwrap();
        let rep = verify_tpa(&a).unwrap();
        assert!(rep.passed(), "{:?}", rep.failed_checks().collect::<Vec<_>>());
        assert!(!is_global(&a));
    }

    #[test]
    fn trivial_action_passes() {
        let a = fixtures::trivial_action(q()).unwrap();
        assert!(verify_tpa(&a).unwrap().passed());
        assert!(is_global(&a));
    }

    #[test]
    fn global_fixture_is_global() {
        let a = fixtures::global_single_arrow(q(), q().from_i64(2), q().from_i64(-3)).unwrap();
        let rep = verify_tpa(&a).unwrap();
        assert!(rep.passed(), "{:?}", rep.failed_checks().collect::<Vec<_>>());
        assert!(is_global(&a));
    }

    #[test]
    fn sign_flip_breaks_cocycle() {
        let a = fixtures::partial_single_arrow(q()).unwrap();
        let (g, gi) = (0, 1);
        let e3 = a.algebra().basis_element(2);
        let bad = a.with_twist(gi, g, e3);
        let rep = verify_tpa(&bad).unwrap();
        let c = rep.check("(vi) twisted cocycle identity").unwrap();
        assert!(!c.passed());
        assert!(c.witnesses.iter().any(|w| w.tuple == ["g", "g^-1", "g"]));
    }

    #[test]
    fn restriction_of_global() {
        let b = fixtures::global_single_arrow(q(), q().from_i64(2), q().from_i64(5)).unwrap();
        let alg = b.algebra().clone();
        let r = alg.span([alg.basis_element(2), alg.basis_element(3)].iter());
        let a = restrict_global(&b, &r).unwrap();
        assert!(verify_tpa(&a).unwrap().passed());
        let same = restrict_global(&b, &alg.full()).unwrap();
        assert_eq!(same, b);
        for x in 0..4 {
            for y in 0..4 {
                if let Some(xy) = b.groupoid().compose(x, y) {
                    let expect = alg.mul_all(&[b.twist(x, y), &a.unit(x).unwrap(), &a.unit(xy).unwrap()]);
                    assert_eq!(a.twist(x, y), &expect);
                }
            }
        }
        let nonunital = Subspace::zero(q(), 3);
        assert!(restrict_global(&b, &nonunital).is_err());
        assert!(restrict_global(&fixtures::partial_single_arrow(q()).unwrap(), &r).is_err());
    }
}
