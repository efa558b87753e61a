//! Extension data, the enveloping action on the function space `R^G`, and its verification.

use std::collections::HashMap;

use serde::Serialize;

use crate::action::{is_global, require_tpa, restrict_global, verify_tpa, TwistedPartialAction};
use crate::error::{Error, Result};
use crate::exactalg::linalg::{Subspace, Vector};
use crate::exactalg::{Algebra, LinearMap, Scalar};
use crate::groupoid::{composable_tuples, Arrow};
use crate::report::AxiomReport;

/// Which form of the extension cocycle condition to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarReading {
    /// `alpha_g(wt_{h,t} 1_{g^-1}) wt_{g,ht} = 1_g wt_{g,h} wt_{gh,t}`
    Corrected,
    /// Same with `wt_{g,t}` in place of `wt_{h,t}`; undefined when `(g,t)` is not composable.
    Literal,
}

/// Invertible elements `wt_{g,h}` of `D_r(g)` extending the twists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionData {
    n: usize,
    values: Vec<Vector>,
}

impl ExtensionData {
    /// Missing composable pairs default to the unit of `D_r(g)`.
    pub fn assemble(action: &TwistedPartialAction, explicit: &HashMap<(Arrow, Arrow), Vector>) -> Result<Self> {
        let g = action.groupoid();
        let n = g.len();
        let alg = action.algebra();
        let mut values = vec![alg.zero(); n * n];
        for x in g.arrows() {
            for y in g.arrows() {
                if g.compose(x, y).is_none() {
                    continue;
                }
                values[x * n + y] = match explicit.get(&(x, y)) {
                    Some(v) if v.len() == alg.dim() => v.clone(),
                    Some(_) => return Err(Error::Structure("extension value has the wrong length".into())),
                    None => action.unit(g.r(x))?,
                };
            }
        }
        Ok(ExtensionData { n, values })
    }

    pub fn get(&self, g: Arrow, h: Arrow) -> &Vector {
        &self.values[g * self.n + h]
    }

    pub fn with_value(&self, g: Arrow, h: Arrow, v: Vector) -> Self {
        let mut out = self.clone();
        out.values[g * self.n + h] = v;
        out
    }
}

/// Checks invertibility in `D_r(g)`, compatibility `wt_{g,h} 1_g 1_gh = w_{g,h}` and the cocycle condition.
pub fn verify_extension_data(
    a: &TwistedPartialAction,
    wt: &ExtensionData,
    reading: StarReading,
) -> Result<AxiomReport> {
    let g = a.groupoid();
    let alg = a.algebra();
    let nm = |x: Arrow| g.name(x).to_string();
    let show = |v: &Vector| alg.render(v);
    let units = g.arrows().map(|x| a.unit(x)).collect::<Result<Vec<_>>>()?;
    let mut rep = AxiomReport::new(match reading {
        StarReading::Corrected => "extension data (inner index h,t)",
        StarReading::Literal => "extension data (inner index g,t)",
    });
    for p in composable_tuples(g, 2)? {
        let (x, y) = (p[0], p[1]);
        let xy = g.compose(x, y).expect("composable");
        let v = wt.get(x, y);
        let dom = a.domain(g.r(x));
        let inv = if dom.contains(v) { alg.invert_in(v, dom)? } else { None };
        rep.record("wt_{g,h} invertible in D_r(g)", inv.is_some(), [nm(x), nm(y)], || show(v));
        let lhs = alg.mul_all(&[v, &units[x], &units[xy]]);
        rep.record("wt_{g,h} 1_g 1_gh = w_{g,h}", &lhs == a.twist(x, y), [nm(x), nm(y)], || {
            format!("{} vs {}", show(&lhs), show(a.twist(x, y)))
        });
    }
    let name = "cocycle condition on wt";
    rep.declare(name);
    for t3 in composable_tuples(g, 3)? {
        let (x, y, z) = (t3[0], t3[1], t3[2]);
        let xy = g.compose(x, y).expect("composable");
        let yz = g.compose(y, z).expect("composable");
        let inner = match reading {
            StarReading::Corrected => Some(wt.get(y, z)),
            StarReading::Literal => g.compose(x, z).map(|_| wt.get(x, z)),
        };
        let Some(inner) = inner else {
            rep.record(name, false, [nm(x), nm(y), nm(z)], || "wt_{g,t} is undefined for this triple".into());
            continue;
        };
        let lhs = a.alpha(x, &alg.mul(inner, &units[g.inv(x)])).map(|v| alg.mul(&v, wt.get(x, yz)));
        let rhs = alg.mul_all(&[&units[x], wt.get(x, y), wt.get(xy, z)]);
        let ok = matches!(&lhs, Ok(l) if *l == rhs);
        rep.record(name, ok, [nm(x), nm(y), nm(z)], || format!("lhs {:?}, rhs {}", lhs.as_ref().map(show), show(&rhs)));
    }
    Ok(rep.finish())
}

/// The enveloping action built on `F = R^G` and restricted to `T = sum of E_e`.
#[derive(Clone, Debug)]
pub struct GlobalizationResult {
    /// `R^G` with coordinatewise product; coordinate block `h` holds `f(h)`.
    pub function_space: Algebra,
    /// `Y_g` inside `F`.
    pub y: Vec<Subspace>,
    /// `beta_g: Y_{g^-1} -> Y_g` inside `F`.
    pub beta: Vec<LinearMap>,
    /// `u_{g,h}` in `F`, zero for non-composable pairs.
    pub u: Vec<Vector>,
    /// `E_g` inside `F`.
    pub e: Vec<Subspace>,
    /// `T` inside `F`.
    pub t: Subspace,
    /// `phi_e: D_e -> F` for identities, `None` elsewhere.
    pub phi: Vec<Option<LinearMap>>,
    /// The global action on `T` in the coordinates of `T`'s canonical basis.
    pub global: TwistedPartialAction,
    /// `phi_e` with values in `T` coordinates.
    pub phi_t: Vec<Option<LinearMap>>,
    wt: ExtensionData,
    wt_inv: Vec<Vector>,
    block: usize,
}

impl GlobalizationResult {
    pub fn block(&self, f: &[Scalar], h: Arrow) -> Vector {
        f[h * self.block..(h + 1) * self.block].to_vec()
    }

    pub fn extension(&self) -> &ExtensionData {
        &self.wt
    }

    pub fn u(&self, g: Arrow, h: Arrow) -> &Vector {
        &self.u[g * self.global.groupoid().len() + h]
    }

    /// The coordinate formula for `beta_g`, applied to any `f` in `F`.
    pub fn beta_formula(&self, g: Arrow, f: &[Scalar]) -> Vector {
        let gr = self.global.groupoid();
        let r = self.function_space.field();
        let mut out = vec![r.zero(); self.function_space.dim()];
        for h in gr.arrows().filter(|&h| gr.r(h) == gr.r(g)) {
            let hi = gr.inv(h);
            let src = self.block(f, gr.compose(gr.inv(g), h).expect("r(h) = r(g)"));
            let (w, wi) = (self.wt.get(hi, g), self.wt_inv_at(hi, g));
            let val = self.base_mul_all(&[w, &src, wi]);
            out[h * self.block..(h + 1) * self.block].clone_from_slice(&val);
        }
        out
    }

    /// The coordinate formula for `beta_g^-1: Y_g -> Y_{g^-1}`.
    pub fn beta_inv_formula(&self, g: Arrow, f: &[Scalar]) -> Vector {
        let gr = self.global.groupoid();
        let mut out = vec![self.function_space.field().zero(); self.function_space.dim()];
        let gi = gr.inv(g);
        for h in gr.arrows().filter(|&h| gr.r(h) == gr.r(gi)) {
            let k = gr.compose(gr.inv(h), gi).expect("composable");
            let src = self.block(f, gr.compose(g, h).expect("composable"));
            let val = self.base_mul_all(&[self.wt_inv_at(k, g), &src, self.wt.get(k, g)]);
            out[h * self.block..(h + 1) * self.block].clone_from_slice(&val);
        }
        out
    }

    fn wt_inv_at(&self, g: Arrow, h: Arrow) -> &Vector {
        &self.wt_inv[g * self.global.groupoid().len() + h]
    }

    fn base_mul_all(&self, xs: &[&Vector]) -> Vector {
        base_mul_all(&self.function_space, self.block, xs)
    }

    pub fn phi(&self, e: Arrow, a: &[Scalar]) -> Result<Vector> {
        self.phi[e].as_ref().ok_or_else(|| Error::Argument("phi is defined on identities only".into()))?.apply(a)
    }

    /// Coordinates of an element of `T`.
    pub fn to_t(&self, f: &[Scalar]) -> Option<Vector> {
        self.t.coordinates(f)
    }

    pub fn from_t(&self, c: &[Scalar]) -> Vector {
        self.t.from_coordinates(c)
    }
}

/// Multiplies elements of `R`, using the first block of `F` as a copy of `R`.
fn base_mul_all(f: &Algebra, block: usize, xs: &[&Vector]) -> Vector {
    let lift = |x: &Vector| {
        let mut v = vec![f.field().zero(); f.dim()];
        v[..block].clone_from_slice(x);
        v
    };
    let lifted: Vec<Vector> = xs.iter().map(|x| lift(x)).collect();
    let refs: Vec<&Vector> = lifted.iter().collect();
    f.mul_all(&refs)[..block].to_vec()
}

/// Builds the enveloping action. Refuses input that fails the action axioms or the extension checks.
pub fn build_globalization(a: &TwistedPartialAction, wt: &ExtensionData) -> Result<GlobalizationResult> {
    require_tpa(a)?;
    let rep = verify_extension_data(a, wt, StarReading::Corrected)?;
    if let Some(c) = rep.first_failure() {
        return Err(Error::Refused(format!("extension data fails {}", c.name)));
    }
    let g = a.groupoid();
    let n = g.len();
    let r = a.algebra();
    let m = r.dim();
    let field = r.field();
    let f = r.power(n, |c| g.name(c).to_string());
    let units = g.arrows().map(|x| a.unit(x)).collect::<Result<Vec<_>>>()?;

    let mut wt_inv = vec![r.zero(); n * n];
    for x in g.arrows() {
        for y in g.arrows() {
            if g.compose(x, y).is_some() {
                wt_inv[x * n + y] = r
                    .invert_in(wt.get(x, y), a.domain(g.r(x)))?
                    .ok_or_else(|| Error::Refused("extension value is not invertible".into()))?;
            }
        }
    }

    let place = |h: Arrow, v: &Vector| {
        let mut out = vec![field.zero(); n * m];
        out[h * m..(h + 1) * m].clone_from_slice(v);
        out
    };
    let y: Vec<Subspace> = g
        .arrows()
        .map(|x| {
            let gens: Vec<Vector> = g
                .arrows()
                .filter(|&h| g.r(h) == g.r(x))
                .flat_map(|h| a.domain(g.d(h)).basis().iter().map(move |b| place(h, b)).collect::<Vec<_>>())
                .collect();
            f.span(gens.iter())
        })
        .collect();

    // Partially filled result so the coordinate formulas can be shared.
    let mut res = GlobalizationResult {
        function_space: f.clone(),
        y: y.clone(),
        beta: Vec::new(),
        u: vec![f.zero(); n * n],
        e: Vec::new(),
        t: f.zero_ideal(),
        phi: vec![None; n],
        global: a.clone(),
        phi_t: vec![None; n],
        wt: wt.clone(),
        wt_inv,
        block: m,
    };

    let mut beta = Vec::with_capacity(n);
    for x in g.arrows() {
        beta.push(LinearMap::from_fn(y[g.inv(x)].clone(), y[x].clone(), |v| res.beta_formula(x, v))?);
    }
    res.beta = beta;

    for x in g.arrows() {
        for z in g.arrows() {
            let Some(xz) = g.compose(x, z) else { continue };
            let mut out = f.zero();
            for t in g.arrows().filter(|&t| g.r(t) == g.r(x)) {
                let ti = g.inv(t);
                let tix = g.compose(ti, x).expect("composable");
                let val = res.base_mul_all(&[wt.get(ti, x), wt.get(tix, z), res.wt_inv_at(ti, xz)]);
                out[t * m..(t + 1) * m].clone_from_slice(&val);
            }
            res.u[x * n + z] = out;
        }
    }

    for e in g.identities() {
        let phi = LinearMap::from_fn(a.domain(e).clone(), y[e].clone(), |v| {
            let mut out = f.zero();
            for h in g.arrows().filter(|&h| g.r(h) == e) {
                let val = a.alpha(g.inv(h), &r.mul(v, &units[h])).expect("a 1_h lies in D_h");
                out[h * m..(h + 1) * m].clone_from_slice(&val);
            }
            out
        })?;
        res.phi[e] = Some(phi);
    }

    let mut e_of_identity: HashMap<Arrow, Subspace> = HashMap::new();
    for e in g.identities() {
        let mut gens = Vec::new();
        for h in g.arrows().filter(|&h| g.r(h) == e) {
            let img = res.phi[g.d(h)].as_ref().expect("identity").image();
            for b in img.basis() {
                gens.push(res.beta[h].apply(b)?);
            }
        }
        e_of_identity.insert(e, f.subring_closure(&gens));
    }
    res.e = g.arrows().map(|x| e_of_identity[&g.r(x)].clone()).collect();
    let t = g.identities().iter().fold(f.zero_ideal(), |acc, e| acc.sum(&e_of_identity[e]));
    res.t = t.clone();

    let labels = (1..=t.dim()).map(|i| format!("t{i}")).collect();
    let t_alg = f.subalgebra(&t, labels)?;
    let k = t.dim();
    let to_t = |v: &Vector| t.coordinates(v).ok_or_else(|| Error::Structure("element escapes T".into()));
    let to_t_space = |s: &Subspace| -> Result<Subspace> {
        let coords = s.basis().iter().map(to_t).collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span(field, k, coords.iter()))
    };
    let domains = res.e.iter().map(to_t_space).collect::<Result<Vec<_>>>()?;
    let mut maps = Vec::with_capacity(n);
    for x in g.arrows() {
        let dom = domains[g.inv(x)].clone();
        let sources = dom.basis().to_vec();
        let targets =
            sources.iter().map(|c| to_t(&res.beta[x].apply(&t.from_coordinates(c))?)).collect::<Result<Vec<_>>>()?;
        maps.push(LinearMap::from_images(dom, domains[x].clone(), &sources, &targets)?);
    }
    let mut twists = vec![t_alg.zero(); n * n];
    for x in g.arrows() {
        let unit = f.unit_of(&res.e[x]).ok_or_else(|| Error::Unsupported(format!("E_{} has no unit", g.name(x))))?;
        for z in g.arrows() {
            if g.compose(x, z).is_some() {
                twists[x * n + z] = to_t(&f.mul(&res.u[x * n + z], &unit))?;
            }
        }
    }
    for e in g.identities() {
        let phi = res.phi[e].as_ref().expect("identity");
        let sources = a.domain(e).basis().to_vec();
        let targets = sources.iter().map(|s| to_t(&phi.apply(s)?)).collect::<Result<Vec<_>>>()?;
        res.phi_t[e] = Some(LinearMap::from_images(a.domain(e).clone(), Subspace::full(field, k), &sources, &targets)?);
    }
    res.global = TwistedPartialAction::new(g.clone(), t_alg, domains, maps, twists)?;
    Ok(res)
}

/// Checks the enveloping-action conditions of `res` with respect to `a`, plus the action axioms of
/// the packaged global action.
pub fn verify_enveloping(a: &TwistedPartialAction, res: &GlobalizationResult) -> Result<AxiomReport> {
    let g = a.groupoid();
    let r = a.algebra();
    let f = &res.function_space;
    let nm = |x: Arrow| g.name(x).to_string();
    let mut rep = AxiomReport::new("enveloping action");
    let phi_img = |e: Arrow, s: &Subspace| -> Result<Subspace> {
        res.phi[e].as_ref().ok_or_else(|| Error::Argument("phi on identities only".into()))?.image_of(s)
    };

    for e in g.identities() {
        let phi = res.phi[e].as_ref().expect("identity");
        rep.record("phi_e is injective", phi.matrix().rank() == a.domain(e).dim(), [nm(e)], || "rank deficit".into());
        let mult = phi.domain().basis().iter().all(|x| {
            phi.domain().basis().iter().all(|y| {
                phi.apply(&r.mul(x, y)).ok()
                    == Some(f.mul(&phi.apply(x).expect("basis"), &phi.apply(y).expect("basis")))
            })
        });
        rep.record("phi_e is multiplicative", mult, [nm(e)], || "product not preserved".into());
        for b in a.domain(e).basis() {
            let img = phi.apply(b)?;
            rep.record("phi_e(a) at coordinate e is a", res.block(&img, e) == *b, [nm(e)], || r.render(b));
        }
        let image = phi.image();
        rep.record("(i) phi_e(D_e) is an ideal of E_e", f.is_ideal_in(&image, &res.e[e]), [nm(e)], || {
            format!("dim phi(D_e) = {}, dim E_e = {}", image.dim(), res.e[e].dim())
        });
    }

    for x in g.arrows() {
        let mut sum = f.zero_ideal();
        for h in g.arrows().filter(|&h| g.r(h) == g.r(x)) {
            sum = sum.sum(&res.beta[h].image_of(&phi_img(g.d(h), a.domain(g.d(h)))?)?);
        }
        rep.record("(ii) E_g is the sum of the beta_h phi(D_d(h))", sum == res.e[x], [nm(x)], || {
            format!("dim sum = {}, dim E_g = {}", sum.dim(), res.e[x].dim())
        });

        let left = phi_img(g.r(x), a.domain(x))?;
        let moved = res.beta[x].image_of(&phi_img(g.d(x), a.domain(g.d(x)))?)?;
        let right = phi_img(g.r(x), a.domain(g.r(x)))?.intersection(&moved);
        rep.record("(iii) phi(D_g) = phi(D_r(g)) meet beta_g(phi(D_d(g)))", left == right, [nm(x)], || {
            format!("dims {} vs {}", left.dim(), right.dim())
        });

        for b in a.domain(g.inv(x)).basis() {
            let lhs = res.beta[x].apply(&res.phi(g.d(x), b)?)?;
            let rhs = res.phi(g.r(x), &a.alpha(x, b)?)?;
            rep.record("(iv) beta_g phi_d(g) = phi_r(g) alpha_g", lhs == rhs, [nm(x)], || r.render(b));
        }
    }

    for p in composable_tuples(g, 2)? {
        let (x, z) = (p[0], p[1]);
        let u = res.u(x, z);
        let w = a.twist(x, z);
        for b in a.twist_ideal(x, z)?.basis() {
            let right_ok = res.phi(g.r(x), &r.mul(b, w))? == f.mul(&res.phi(g.r(x), b)?, u);
            let left_ok = res.phi(g.r(x), &r.mul(w, b))? == f.mul(u, &res.phi(g.r(x), b)?);
            rep.record("(v) phi(a w) = phi(a) u and phi(w a) = u phi(a)", right_ok && left_ok, [nm(x), nm(z)], || {
                r.render(b)
            });
        }
        let eg = &res.e[x];
        let left = eg.map(f.dim(), |v| f.mul(u, v));
        let right = eg.map(f.dim(), |v| f.mul(v, u));
        rep.record("u E_g = E_g = E_g u", &left == eg && &right == eg, [nm(x), nm(z)], || {
            format!("dims {} / {} / {}", left.dim(), eg.dim(), right.dim())
        });
    }
    rep.declare("(v) phi(a w) = phi(a) u and phi(w a) = u phi(a)");

    let inner = verify_tpa(&res.global)?;
    rep.absorb("global action: ", inner);
    rep.fact("global action is global", is_global(&res.global), "some E_g differs from E_r(g)");
    Ok(rep.finish())
}

/// The identities used inside the construction: the three step identities, the inverse formula for
/// `beta_g`, the conjugation rule for `beta_g beta_h` and the normalization of `u`.
pub fn verify_step_identities(a: &TwistedPartialAction, res: &GlobalizationResult) -> Result<AxiomReport> {
    let g = a.groupoid();
    let r = a.algebra();
    let f = &res.function_space;
    let wt = res.extension();
    let nm = |x: Arrow| g.name(x).to_string();
    let mut rep = AxiomReport::new("globalization identities");

    for p in composable_tuples(g, 2)? {
        let (x, z) = (p[0], p[1]);
        for b in a.domain(g.r(x)).basis() {
            let lhs = f.mul(res.u(x, z), &res.phi(g.r(x), b)?);
            let rhs = res.phi(g.r(x), &r.mul(wt.get(x, z), b))?;
            rep.record("step 1: u phi(a) = phi(wt a)", lhs == rhs, [nm(x), nm(z)], || r.render(b));
        }
    }

    for x in g.arrows() {
        let xi = g.inv(x);
        let u = res.u(xi, x);
        let yi = &res.y[xi];
        let u_inv = f.invert_in(u, yi)?.ok_or_else(|| Error::Structure("u is not invertible in Y".into()));
        let Ok(u_inv) = u_inv else {
            rep.record("step 2: beta_t^-1 = u^-1 beta_t^-1 u", false, [nm(x)], || "u not invertible".into());
            continue;
        };
        for b in res.y[x].basis() {
            let lhs = res.beta_inv_formula(x, b);
            let rhs = f.mul_all(&[&u_inv, &res.beta[xi].apply(b)?, u]);
            rep.record("step 2: beta_t^-1 = u^-1 beta_t^-1 u", lhs == rhs, [nm(x)], || "basis function".into());
            let back = res.beta[x].apply(&lhs)?;
            rep.record("beta_g beta_g^-1 = id on Y_g", &back == b, [nm(x)], || "basis function".into());
        }
        for b in res.y[xi].basis() {
            let there = res.beta[x].apply(b)?;
            rep.record("beta_g^-1 beta_g = id on Y_g^-1", &res.beta_inv_formula(x, &there) == b, [nm(x)], || {
                "basis function".into()
            });
        }
        let one = f.unit_of(&res.y[x]).ok_or_else(|| Error::Structure("Y_g has no unit".into()))?;
        let ok = res.u(g.r(x), x) == &one && res.u(x, g.d(x)) == &one;
        rep.record("u_{r(g),g} = u_{g,d(g)} = 1 of Y_g", ok, [nm(x)], || "normalization fails".into());
    }

    for p in composable_tuples(g, 2)? {
        let (x, z) = (p[0], p[1]);
        let xz = g.compose(x, z).expect("composable");
        let u = res.u(x, z);
        let Some(u_inv) = f.invert_in(u, &res.y[x])? else {
            rep.record("beta_g beta_h = u beta_gh u^-1", false, [nm(x), nm(z)], || "u not invertible".into());
            continue;
        };
        for b in res.y[g.inv(z)].basis() {
            let lhs = res.beta[x].apply(&res.beta[z].apply(b)?)?;
            let rhs = f.mul_all(&[u, &res.beta[xz].apply(b)?, &u_inv]);
            rep.record("beta_g beta_h = u beta_gh u^-1", lhs == rhs, [nm(x), nm(z)], || "basis function".into());
        }
    }

    for t3 in composable_tuples(g, 3)? {
        let (x, y, z) = (t3[0], t3[1], t3[2]);
        let xy = g.compose(x, y).expect("composable");
        let yz = g.compose(y, z).expect("composable");
        let lhs = f.mul(&res.beta[x].apply(res.u(y, z))?, res.u(x, yz));
        let rhs = f.mul(res.u(x, y), res.u(xy, z));
        rep.record("step 3: beta_g(u_{h,t}) u_{g,ht} = u_{g,h} u_{gh,t}", lhs == rhs, [nm(x), nm(y), nm(z)], || {
            "functions differ".into()
        });
    }
    Ok(rep.finish())
}

/// Restricts the packaged global action to `sum phi_e(D_e)` and compares the result with `a`
/// through `phi`: domains, maps and twists must correspond exactly.
pub fn verify_rerestriction(a: &TwistedPartialAction, res: &GlobalizationResult) -> Result<AxiomReport> {
    let g = a.groupoid();
    let t_alg = res.global.algebra();
    let nm = |x: Arrow| g.name(x).to_string();
    let mut rep = AxiomReport::new("re-restriction");
    let phi = |e: Arrow| res.phi_t[e].as_ref().expect("identity");
    let ideal = g.identities().iter().fold(t_alg.zero_ideal(), |acc, &e| acc.sum(&phi(e).image()));
    let back = restrict_global(&res.global, &ideal)?;
    let inner = verify_tpa(&back)?;
    rep.absorb("restricted action: ", inner);
    for x in g.arrows() {
        let expect = phi(g.r(x)).image_of(a.domain(x))?;
        rep.record("D_g corresponds", back.domain(x) == &expect, [nm(x)], || {
            format!("dims {} vs {}", back.domain(x).dim(), expect.dim())
        });
        for b in a.domain(g.inv(x)).basis() {
            let lhs = back.alpha(x, &phi(g.d(x)).apply(b)?);
            let rhs = phi(g.r(x)).apply(&a.alpha(x, b)?)?;
            rep.record("alpha_g corresponds", lhs.as_ref().ok() == Some(&rhs), [nm(x)], || a.algebra().render(b));
        }
        for z in g.arrows() {
            if g.compose(x, z).is_none() {
                continue;
            }
            let expect = phi(g.r(x)).apply(a.twist(x, z))?;
            rep.record("w_{g,h} corresponds", back.twist(x, z) == &expect, [nm(x), nm(z)], || {
                t_alg.render(back.twist(x, z))
            });
        }
    }
    Ok(rep.finish())
}

/// Reads extension data off a globalization: `wt_{g,h}` is the element of `D_r(g)` with
/// `phi(wt_{g,h}) = u_{g,h} phi(1_r(g))`.
pub fn extension_from_globalization(a: &TwistedPartialAction, res: &GlobalizationResult) -> Result<ExtensionData> {
    let g = a.groupoid();
    let mut explicit = HashMap::new();
    for p in composable_tuples(g, 2)? {
        let (x, z) = (p[0], p[1]);
        let e = g.r(x);
        let phi = res.phi[e].as_ref().expect("identity");
        let target = res.function_space.mul(res.u(x, z), &phi.apply(&a.unit(e)?)?);
        let inv = phi.inverse_on_image(&target)?;
        explicit.insert((x, z), inv);
    }
    ExtensionData::assemble(a, &explicit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::FieldSpec;
    use crate::fixtures::{self, G, G_INV, R_G};

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn extension_fixture_passes() {
        let a = fixtures::partial_single_arrow(q()).unwrap();
        let wt = fixtures::single_arrow_extension(&a).unwrap();
        let rep = verify_extension_data(&a, &wt, StarReading::Corrected).unwrap();
        assert!(rep.passed(), "{:?}", rep.failed_checks().collect::<Vec<_>>());
    }

    #[test]
    fn flipped_extension_breaks_compatibility() {
        let a = fixtures::partial_single_arrow(q()).unwrap();
        let wt = fixtures::single_arrow_extension(&a).unwrap();
        let one = a.unit(R_G).unwrap();
        let bad = wt.with_value(G, G_INV, one);
        let rep = verify_extension_data(&a, &bad, StarReading::Corrected).unwrap();
        let w = rep.first_witness("wt_{g,h} 1_g 1_gh = w_{g,h}").unwrap();
        assert_eq!(w.tuple, vec!["g", "g^-1"]);
    }

    #[test]
    fn literal_reading_is_undefined_on_some_triples() {
        let a = fixtures::partial_single_arrow(q()).unwrap();
        let wt = fixtures::single_arrow_extension(&a).unwrap();
        let rep = verify_extension_data(&a, &wt, StarReading::Literal).unwrap();
        assert!(!rep.check_passed("cocycle condition on wt"));
    }

    #[test]
    fn trivial_globalization() {
        let a = fixtures::trivial_action(q()).unwrap();
        let wt = ExtensionData::assemble(&a, &HashMap::new()).unwrap();
        let res = build_globalization(&a, &wt).unwrap();
        assert_eq!(res.global.algebra().dim(), 1);
        assert!(verify_enveloping(&a, &res).unwrap().passed());
        assert!(verify_step_identities(&a, &res).unwrap().passed());
        assert!(verify_rerestriction(&a, &res).unwrap().passed());
    }

    #[test]
    fn single_arrow_globalization() {
        let a = fixtures::partial_single_arrow(q()).unwrap();
        let wt = fixtures::single_arrow_extension(&a).unwrap();
        let res = build_globalization(&a, &wt).unwrap();
        assert_eq!(res.function_space.dim(), 16);
        assert_eq!(res.y[G].dim(), 4);
        for e in [R_G, fixtures::D_G] {
            for b in a.domain(e).basis() {
                assert_eq!(res.block(&res.phi(e, b).unwrap(), e), *b);
            }
        }
        let env = verify_enveloping(&a, &res).unwrap();
        assert!(env.passed(), "{:?}", env.failed_checks().collect::<Vec<_>>());
        let steps = verify_step_identities(&a, &res).unwrap();
        assert!(steps.passed(), "{:?}", steps.failed_checks().collect::<Vec<_>>());
        let back = verify_rerestriction(&a, &res).unwrap();
        assert!(back.passed(), "{:?}", back.failed_checks().collect::<Vec<_>>());
        let recovered = extension_from_globalization(&a, &res).unwrap();
        assert!(verify_extension_data(&a, &recovered, StarReading::Corrected).unwrap().passed());
        assert_eq!(recovered, wt);
    }
}
