//! The twisted crossed product `R x_{alpha,w} G` as a structure-constant algebra, and the Morita
//! context between a partial action's crossed product and that of its globalization.

use serde::Serialize;

use crate::action::{require_tpa, TwistedPartialAction};
use crate::error::{Error, Result};
use crate::exactalg::linalg::{add_vectors, is_zero_vector, Subspace, Vector};
use crate::exactalg::{Algebra, LinearMap, Scalar};
use crate::globalize::GlobalizationResult;
use crate::groupoid::Arrow;
use crate::report::AxiomReport;

/// `⊕_g D_g δ_g` with basis `(g, b)` for `b` running over the canonical basis of `D_g`.
#[derive(Clone, Debug)]
pub struct CrossedProduct {
    action: TwistedPartialAction,
    /// First coordinate of the `δ_g` block.
    offsets: Vec<usize>,
    algebra: Algebra,
    unit: Option<Vector>,
}

impl CrossedProduct {
    pub fn action(&self) -> &TwistedPartialAction {
        &self.action
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// `sum_e 1_e δ_e`, present when every `D_e` is unital.
    pub fn unit(&self) -> Option<&Vector> {
        self.unit.as_ref()
    }

    /// Block range of `δ_g`.
    pub fn block(&self, g: Arrow) -> std::ops::Range<usize> {
        self.offsets[g]..self.offsets[g] + self.action.domain(g).dim()
    }

    /// `a δ_g` as a coordinate vector; `a` must lie in `D_g`.
    pub fn element(&self, g: Arrow, a: &[Scalar]) -> Result<Vector> {
        let c =
            self.action.domain(g).coordinates(a).ok_or_else(|| {
                Error::Argument(format!("coefficient is not in D_{}", self.action.groupoid().name(g)))
            })?;
        let mut out = self.algebra.zero();
        out[self.block(g)].clone_from_slice(&c);
        Ok(out)
    }

    /// Sum of `a_g δ_g` over the given components.
    pub fn from_components(&self, parts: &[(Arrow, Vector)]) -> Result<Vector> {
        parts.iter().try_fold(self.algebra.zero(), |acc, (g, a)| Ok(add_vectors(&acc, &self.element(*g, a)?)))
    }

    /// The coefficient of `δ_g`, as an element of `R`.
    pub fn component(&self, x: &[Scalar], g: Arrow) -> Vector {
        self.action.domain(g).from_coordinates(&x[self.block(g)])
    }

    /// Nonzero components of `x`.
    pub fn components(&self, x: &[Scalar]) -> Vec<(Arrow, Vector)> {
        self.action.groupoid().arrows().map(|g| (g, self.component(x, g))).filter(|(_, a)| !is_zero_vector(a)).collect()
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        self.algebra.mul(x, y)
    }

    /// Readable form such as `(-1)*e1 d[r(g)]`.
    pub fn render(&self, x: &[Scalar]) -> String {
        let parts = self.components(x);
        if parts.is_empty() {
            return "0".into();
        }
        let g = self.action.groupoid();
        parts
            .iter()
            .map(|(h, a)| format!("({}) d[{}]", self.action.algebra().render(a), g.name(*h)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `(a δ_g)(b δ_h) = alpha_g(alpha_g^-1(a) b) w_{g,h} δ_{gh}` when `gh` exists, else zero.
pub fn delta_product(
    a: &TwistedPartialAction,
    g: Arrow,
    av: &[Scalar],
    h: Arrow,
    bv: &[Scalar],
) -> Result<Option<(Arrow, Vector)>> {
    let Some(gh) = a.groupoid().compose(g, h) else { return Ok(None) };
    let r = a.algebra();
    let inner = r.mul(&a.alpha_inv(g, av)?, bv);
    let moved = a.alpha(g, &inner)?;
    Ok(Some((gh, r.mul(&moved, a.twist(g, h)))))
}

/// Builds the crossed product of a verified action.
pub fn build_crossed_product(a: &TwistedPartialAction) -> Result<CrossedProduct> {
    require_tpa(a)?;
    build_crossed_product_unchecked(a)
}

/// Builds the structure constants without checking the action axioms. Used for diagnostics on
/// mutated input, where the associativity check is expected to report the damage.
pub fn build_crossed_product_unchecked(a: &TwistedPartialAction) -> Result<CrossedProduct> {
    let g = a.groupoid();
    let r = a.algebra();
    let field = r.field();
    let mut offsets = Vec::with_capacity(g.len());
    let mut basis: Vec<(Arrow, Vector)> = Vec::new();
    let mut labels = Vec::new();
    for x in g.arrows() {
        offsets.push(basis.len());
        for b in a.domain(x).basis() {
            labels.push(format!("({}) d[{}]", r.render(b), g.name(x)));
            basis.push((x, b.clone()));
        }
    }
    let dim = basis.len();
    let mut table = Vec::with_capacity(dim * dim);
    for (x, av) in &basis {
        for (y, bv) in &basis {
            let mut out = vec![field.zero(); dim];
            if let Some((xy, c)) = delta_product(a, *x, av, *y, bv)? {
                let coords = a.domain(xy).coordinates(&c).ok_or_else(|| {
                    Error::Structure(format!(
                        "product of d[{}] and d[{}] leaves D_{}",
                        g.name(*x),
                        g.name(*y),
                        g.name(xy)
                    ))
                })?;
                out[offsets[xy]..offsets[xy] + coords.len()].clone_from_slice(&coords);
            }
            table.push(out);
        }
    }
    let algebra = Algebra::new_unchecked(field, labels, table)?;
    let mut cp = CrossedProduct { action: a.clone(), offsets, algebra, unit: None };
    let mut unit = cp.algebra.zero();
    let mut unital = true;
    for e in g.identities() {
        match r.unit_of(a.domain(e)) {
            Some(u) => unit = add_vectors(&unit, &cp.element(e, &u)?),
            None => unital = false,
        }
    }
    if unital {
        cp.unit = Some(unit);
    }
    Ok(cp)
}

/// Associativity on every basis triple, plus the unit law when a unit is present.
pub fn verify_associativity(cp: &CrossedProduct) -> AxiomReport {
    let alg = &cp.algebra;
    let n = alg.dim();
    let labels = alg.labels();
    let mut rep = AxiomReport::new("crossed product");
    rep.declare("associativity");
    let basis: Vec<Vector> = (0..n).map(|i| alg.basis_element(i)).collect();
    for i in 0..n {
        for j in 0..n {
            let ij = alg.mul(&basis[i], &basis[j]);
            for k in 0..n {
                let lhs = alg.mul(&ij, &basis[k]);
                let rhs = alg.mul(&basis[i], &alg.mul(&basis[j], &basis[k]));
                rep.record("associativity", lhs == rhs, [&labels[i], &labels[j], &labels[k]], || {
                    format!("{} vs {}", cp.render(&lhs), cp.render(&rhs))
                });
            }
        }
    }
    if let Some(u) = &cp.unit {
        for (i, b) in basis.iter().enumerate() {
            let ok = &alg.mul(u, b) == b && &alg.mul(b, u) == b;
            rep.record("sum of 1_e d[e] is a unit", ok, [&labels[i]], || "unit law fails".into());
        }
    }
    rep.finish()
}

/// Dimensions and verdicts of the Morita context.
#[derive(Clone, Debug, Serialize)]
pub struct MoritaReport {
    pub dim_a: usize,
    pub dim_b: usize,
    pub dim_m: usize,
    pub dim_n: usize,
    pub dim_corner: usize,
    pub checks: AxiomReport,
}

impl MoritaReport {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

/// Morita context between `A = R x G` and `B = T x G` for a verified globalization.
pub fn morita_context(a: &TwistedPartialAction, res: &GlobalizationResult) -> Result<MoritaReport> {
    morita_from_parts(a, &res.global, &res.phi_t)
}

/// Same with an explicit global action `b` and embeddings `phi_e: D_e -> ` (algebra of `b`),
/// given at every identity.
pub fn morita_from_parts(
    a: &TwistedPartialAction,
    b: &TwistedPartialAction,
    phi: &[Option<LinearMap>],
) -> Result<MoritaReport> {
    let g = a.groupoid();
    if b.groupoid() != g {
        return Err(Error::Argument("the two actions are over different groupoids".into()));
    }
    let phi_at = |e: Arrow| {
        phi.get(e)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::Refused(format!("no embedding given at {}", g.name(e))))
    };
    let ca = build_crossed_product(a)?;
    let cb = build_crossed_product(b)?;
    let unit_a =
        ca.unit().ok_or_else(|| Error::Unsupported("crossed product of the partial action has no unit".into()))?;
    let balg = cb.algebra();

    // a δ_x |-> phi_{r(x)}(a) δ_x
    let embed = |x: &[Scalar]| -> Result<Vector> {
        let mut out = balg.zero();
        for (h, c) in ca.components(x) {
            let img = phi_at(g.r(h))?.apply(&c)?;
            out = add_vectors(&out, &cb.element(h, &img)?);
        }
        Ok(out)
    };
    let a_basis: Vec<Vector> = (0..ca.dim()).map(|i| ca.algebra().basis_element(i)).collect();
    let a_img = a_basis.iter().map(|x| embed(x)).collect::<Result<Vec<_>>>()?;
    let a_sub = balg.span(a_img.iter());
    let one_a = embed(unit_a)?;
    let one_sub = balg.span([one_a.clone()].iter());

    let mut m_gens = Vec::new();
    let mut n_gens = Vec::new();
    for x in g.arrows() {
        let top = phi_at(g.r(x))?.image();
        for v in top.basis() {
            m_gens.push(cb.element(x, v)?);
        }
        let bottom = b.map(x).image_of(&phi_at(g.d(x))?.image())?;
        for v in bottom.basis() {
            n_gens.push(cb.element(x, v)?);
        }
    }
    let m = balg.span(m_gens.iter());
    let n = balg.span(n_gens.iter());
    let full = balg.full();

    let mut rep = AxiomReport::new("morita context");
    let labels = ca.algebra().labels();
    for (i, x) in a_basis.iter().enumerate() {
        for (j, y) in a_basis.iter().enumerate() {
            let ok = balg.mul(&a_img[i], &a_img[j]) == embed(&ca.mul(x, y))?;
            rep.record("A embeds multiplicatively in B", ok, [&labels[i], &labels[j]], || {
                "product not preserved".into()
            });
        }
    }
    rep.fact("A embeds injectively in B", a_sub.dim() == ca.dim(), format!("image dimension {}", a_sub.dim()));
    let b1 = balg.product(&full, &one_sub)?;
    let onb = balg.product(&one_sub, &full)?;
    let corner = balg.product_all(&[&one_sub, &full, &one_sub])?;
    let two_sided = balg.product_all(&[&full, &one_sub, &full])?;
    let mn = balg.product(&m, &n)?;
    let nm = balg.product(&n, &m)?;
    let eq = |s: &Subspace, t: &Subspace| format!("dimensions {} and {}", s.dim(), t.dim());
    rep.fact("B 1_A = N", b1 == n, eq(&b1, &n));
    rep.fact("1_A B = M", onb == m, eq(&onb, &m));
    rep.fact("1_A B 1_A = A", corner == a_sub, eq(&corner, &a_sub));
    rep.fact("B 1_A B = B", two_sided == full, eq(&two_sided, &full));
    rep.fact("span(MN) = A", mn == a_sub, eq(&mn, &a_sub));
    rep.fact("span(NM) = B", nm == full, eq(&nm, &full));
    rep.fact("AM in M", balg.product(&a_sub, &m)?.is_subspace_of(&m), "");
    rep.fact("NA in N", balg.product(&n, &a_sub)?.is_subspace_of(&n), "");
    rep.fact("M is a right ideal of B", balg.product(&m, &full)?.is_subspace_of(&m), "");
    rep.fact("N is a left ideal of B", balg.product(&full, &n)?.is_subspace_of(&n), "");
    Ok(MoritaReport {
        dim_a: ca.dim(),
        dim_b: cb.dim(),
        dim_m: m.dim(),
        dim_n: n.dim(),
        dim_corner: corner.dim(),
        checks: rep.finish(),
    })
}

/// Identity embeddings, for a global action taken as its own globalization.
pub fn identity_embeddings(a: &TwistedPartialAction) -> Vec<Option<LinearMap>> {
    let g = a.groupoid();
    g.arrows().map(|x| g.is_identity(x).then(|| LinearMap::identity(a.domain(x).clone()))).collect()
}
