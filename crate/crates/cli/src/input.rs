//! The TOML workspace file and its translation into library objects.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use tpa_core::action::TwistedPartialAction;
use tpa_core::exactalg::linalg::Matrix;
use tpa_core::exactalg::{Algebra, FieldSpec, LinearMap, Scalar, Subspace, Vector};
use tpa_core::exel::Semigroupoid;
use tpa_core::globalize::ExtensionData;
use tpa_core::groupoid::{Arrow, Groupoid};
use tpa_core::ksemigroup::{KSemigroup, SemigroupTPA};
use tpa_core::partrep::{FactorSet, MatrixSemigroup, PartialRep};

use crate::CliError;

/// Basis label to scalar string; missing labels are zero.
pub type VectorSpec = BTreeMap<String, String>;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    pub field: String,
    pub groupoid: GroupoidBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension: Option<Vec<PairVector>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor_set: Option<Vec<PairScalar>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepresentationBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semigroup: Option<SemigroupBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semigroup_action: Option<SemigroupActionBlock>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidBlock {
    pub arrows: Vec<String>,
    /// `"x*y=z"`.
    pub products: Vec<String>,
    pub inverses: Vec<[String; 2]>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraBlock {
    pub basis: Vec<String>,
    /// Orthogonal idempotents; `products` must then be empty.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub split: bool,
    /// `"a*b"` to the product; missing products are zero.
    #[serde(default)]
    pub products: BTreeMap<String, VectorSpec>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ActionBlock {
    /// Spanning vectors of each `D_x`.
    pub domains: BTreeMap<String, Vec<VectorSpec>>,
    /// `[source, image]` pairs spanning `D_{x^-1}`; identities may be omitted.
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<[VectorSpec; 2]>>,
    /// Missing composable pairs get the unit of `D_x D_xy`.
    #[serde(default)]
    pub twists: Vec<PairVector>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PairVector {
    pub pair: [String; 2],
    pub value: VectorSpec,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PairScalar {
    pub pair: [String; 2],
    pub value: String,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationBlock {
    pub dim: usize,
    /// Matrix rows of scalar strings, one matrix per arrow.
    pub images: BTreeMap<String, Vec<Vec<String>>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupBlock {
    pub elements: Vec<String>,
    pub zero: String,
    /// Row `a`, column `b` holds `ab`.
    pub product: Vec<Vec<String>>,
    /// Row `k` holds `k x` for the residue `k`.
    pub scalar: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupActionBlock {
    pub ideals: BTreeMap<String, Vec<String>>,
    /// `[s, theta_x(s)]` for `s` in `S_{x^-1}`.
    pub theta: BTreeMap<String, Vec<[String; 2]>>,
    /// Missing composable pairs are 1 where `S_x ∩ S_xy` is nonzero and 0 elsewhere.
    #[serde(default)]
    pub sigma: Vec<PairScalar>,
}

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

impl WorkspaceFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| schema(format!("invalid workspace file: {e}")))
    }

    pub fn field(&self) -> Result<FieldSpec, CliError> {
        self.field.parse::<FieldSpec>().map_err(|e| schema(e.to_string()))
    }

    pub fn groupoid(&self) -> Result<Groupoid, CliError> {
        let b = &self.groupoid;
        if b.arrows.is_empty() {
            return Err(schema("the groupoid has no arrows"));
        }
        let triples = b
            .products
            .iter()
            .map(|t| {
                let (lhs, z) =
                    t.split_once('=').ok_or_else(|| schema(format!("product {t:?} is not of the form x*y=z")))?;
                let (x, y) =
                    lhs.split_once('*').ok_or_else(|| schema(format!("product {t:?} is not of the form x*y=z")))?;
                Ok((x.trim(), y.trim(), z.trim()))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let names: Vec<&str> = b.arrows.iter().map(String::as_str).collect();
        let inverses: Vec<(&str, &str)> = b.inverses.iter().map(|[x, y]| (x.as_str(), y.as_str())).collect();
        Groupoid::from_named(&names, &triples, &inverses).map_err(CliError::from)
    }
}

fn arrow(g: &Groupoid, name: &str) -> Result<Arrow, CliError> {
    g.find(name).ok_or_else(|| schema(format!("unknown arrow {name:?}")))
}

fn vector(field: FieldSpec, alg: &Algebra, v: &VectorSpec) -> Result<Vector, CliError> {
    let mut out = alg.zero();
    for (label, value) in v {
        let i = alg
            .labels()
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| schema(format!("unknown basis label {label:?}")))?;
        out[i] = field.parse(value).map_err(CliError::from)?;
    }
    Ok(out)
}

pub fn algebra(file: &WorkspaceFile, field: FieldSpec) -> Result<Algebra, CliError> {
    let b = file.algebra.as_ref().ok_or_else(|| schema("missing [algebra] block"))?;
    let n = b.basis.len();
    if n == 0 {
        return Err(schema("the algebra has an empty basis"));
    }
    if b.split {
        if !b.products.is_empty() {
            return Err(schema("a split algebra takes no products"));
        }
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut v = vec![field.zero(); n];
                if i == j {
                    v[i] = field.one();
                }
                table.push(v);
            }
        }
        return Ok(Algebra::new(field, b.basis.clone(), table)?);
    }
    let zero = Algebra::new_unchecked(field, b.basis.clone(), vec![vec![field.zero(); n]; n * n])?;
    let mut table = vec![vec![field.zero(); n]; n * n];
    for (key, value) in &b.products {
        let (x, y) =
            key.split_once('*').ok_or_else(|| schema(format!("product key {key:?} is not of the form a*b")))?;
        let pos = |l: &str| {
            b.basis.iter().position(|s| s == l.trim()).ok_or_else(|| schema(format!("unknown basis label {l:?}")))
        };
        table[pos(x)? * n + pos(y)?] = vector(field, &zero, value)?;
    }
    Ok(Algebra::new(field, b.basis.clone(), table)?)
}

pub fn action(file: &WorkspaceFile, field: FieldSpec, g: &Groupoid) -> Result<TwistedPartialAction, CliError> {
    let alg = algebra(file, field)?;
    let b = file.action.as_ref().ok_or_else(|| schema("missing [action] block"))?;
    for name in b.domains.keys().chain(b.maps.keys()) {
        arrow(g, name)?;
    }
    let domains = g
        .arrows()
        .map(|x| {
            let vs = b.domains.get(g.name(x)).ok_or_else(|| schema(format!("no domain for arrow {:?}", g.name(x))))?;
            let vs = vs.iter().map(|v| vector(field, &alg, v)).collect::<Result<Vec<_>, _>>()?;
            Ok(alg.span(vs.iter()))
        })
        .collect::<Result<Vec<Subspace>, CliError>>()?;
    let mut maps = Vec::with_capacity(g.len());
    for x in g.arrows() {
        match b.maps.get(g.name(x)) {
            None if g.is_identity(x) => maps.push(None),
            None => return Err(schema(format!("no map for arrow {:?}", g.name(x)))),
            Some(pairs) => {
                let mut src = Vec::new();
                let mut dst = Vec::new();
                for [s, t] in pairs {
                    src.push(vector(field, &alg, s)?);
                    dst.push(vector(field, &alg, t)?);
                }
                let m = LinearMap::from_images(domains[g.inv(x)].clone(), domains[x].clone(), &src, &dst)?;
                maps.push(Some(m));
            }
        }
    }
    let mut twists = HashMap::new();
    for t in &b.twists {
        let (x, y) = (arrow(g, &t.pair[0])?, arrow(g, &t.pair[1])?);
        if !g.composable(x, y) {
            return Err(schema(format!("twist given on non-composable pair ({}, {})", t.pair[0], t.pair[1])));
        }
        twists.insert((x, y), vector(field, &alg, &t.value)?);
    }
    Ok(TwistedPartialAction::assemble(g.clone(), alg, domains, maps, &twists)?)
}

pub fn extension(file: &WorkspaceFile, a: &TwistedPartialAction) -> Result<ExtensionData, CliError> {
    let entries = file.extension.as_ref().ok_or_else(|| schema("missing [[extension]] entries"))?;
    let g = a.groupoid();
    let field = a.algebra().field();
    let mut explicit = HashMap::new();
    for e in entries {
        let (x, y) = (arrow(g, &e.pair[0])?, arrow(g, &e.pair[1])?);
        explicit.insert((x, y), vector(field, a.algebra(), &e.value)?);
    }
    Ok(ExtensionData::assemble(a, &explicit)?)
}

/// A factor set on the groupoid; composable pairs default to 1.
pub fn factor_set(file: &WorkspaceFile, field: FieldSpec, g: &Groupoid) -> Result<Option<FactorSet>, CliError> {
    let Some(entries) = &file.factor_set else { return Ok(None) };
    let carrier = Semigroupoid::from_groupoid(g);
    let n = g.len();
    let mut values = vec![field.zero(); n * n];
    for (x, y, _) in g.defined_products() {
        values[x * n + y] = field.one();
    }
    for e in entries {
        let (x, y) = (arrow(g, &e.pair[0])?, arrow(g, &e.pair[1])?);
        values[x * n + y] = field.parse(&e.value)?;
    }
    Ok(Some(FactorSet::new(carrier, field, values)?))
}

pub fn representation(
    file: &WorkspaceFile,
    field: FieldSpec,
    g: &Groupoid,
) -> Result<Option<PartialRep<MatrixSemigroup>>, CliError> {
    let Some(b) = &file.representation else { return Ok(None) };
    for name in b.images.keys() {
        arrow(g, name)?;
    }
    let images = g
        .arrows()
        .map(|x| {
            let rows = b.images.get(g.name(x)).ok_or_else(|| schema(format!("no image for arrow {:?}", g.name(x))))?;
            if rows.len() != b.dim || rows.iter().any(|r| r.len() != b.dim) {
                return Err(schema(format!("image of {:?} is not {}x{}", g.name(x), b.dim, b.dim)));
            }
            let rows = rows
                .iter()
                .map(|r| r.iter().map(|s| field.parse(s)).collect::<Result<Vec<Scalar>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Matrix::from_rows(field, b.dim, &rows))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Some(PartialRep::new(g.clone(), MatrixSemigroup { field, dim: b.dim }, images)?))
}

fn semigroup(b: &SemigroupBlock, field: FieldSpec) -> Result<KSemigroup, CliError> {
    let n = b.elements.len();
    let pos = |s: &str| {
        b.elements.iter().position(|e| e == s).ok_or_else(|| schema(format!("unknown semigroup element {s:?}")))
    };
    let p = field.order().ok_or_else(|| schema("semigroups need a prime field"))? as usize;
    if b.product.len() != n || b.scalar.len() != p {
        return Err(schema(format!("expected {n} product rows and {p} scalar rows")));
    }
    let mut product = Vec::with_capacity(n * n);
    for row in &b.product {
        if row.len() != n {
            return Err(schema("product row of the wrong length"));
        }
        for s in row {
            product.push(pos(s)?);
        }
    }
    let mut scalar = Vec::with_capacity(p * n);
    for row in &b.scalar {
        if row.len() != n {
            return Err(schema("scalar row of the wrong length"));
        }
        for s in row {
            scalar.push(pos(s)?);
        }
    }
    Ok(KSemigroup::new(field, b.elements.clone(), pos(&b.zero)?, product, scalar)?)
}

/// An explicit semigroup action, when the file has one.
pub fn semigroup_action(
    file: &WorkspaceFile,
    field: FieldSpec,
    g: &Groupoid,
) -> Result<Option<SemigroupTPA>, CliError> {
    let (Some(sb), Some(ab)) = (&file.semigroup, &file.semigroup_action) else {
        if file.semigroup.is_some() || file.semigroup_action.is_some() {
            return Err(schema("[semigroup] and [semigroup_action] go together"));
        }
        return Ok(None);
    };
    let s = semigroup(sb, field)?;
    let pos = |name: &str| s.find(name).ok_or_else(|| schema(format!("unknown semigroup element {name:?}")));
    let ideals = g
        .arrows()
        .map(|x| {
            let v = ab.ideals.get(g.name(x)).ok_or_else(|| schema(format!("no ideal for arrow {:?}", g.name(x))))?;
            v.iter().map(|e| pos(e)).collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut theta = vec![vec![None; s.len()]; g.len()];
    for (name, pairs) in &ab.theta {
        let x = arrow(g, name)?;
        for [a, b] in pairs {
            theta[x][pos(a)?] = Some(pos(b)?);
        }
    }
    for x in g.arrows() {
        if g.is_identity(x) && !ab.theta.contains_key(g.name(x)) {
            for &a in &ideals[x] {
                theta[x][a] = Some(a);
            }
        }
    }
    let n = g.len();
    let member = |x: Arrow, a: usize| ideals[x].contains(&a);
    let mut values = vec![field.zero(); n * n];
    for (x, y, xy) in g.defined_products() {
        let meet = (0..s.len()).any(|a| a != s.zero() && member(x, a) && member(xy, a));
        if meet {
            values[x * n + y] = field.one();
        }
    }
    for e in &ab.sigma {
        let (x, y) = (arrow(g, &e.pair[0])?, arrow(g, &e.pair[1])?);
        values[x * n + y] = field.parse(&e.value)?;
    }
    let sigma = FactorSet::new(Semigroupoid::from_groupoid(g), field, values)?;
    Ok(Some(SemigroupTPA::new(g.clone(), s, ideals, theta, sigma)?))
}

/// Nonzero coordinates as exact strings.
pub fn vector_spec(alg: &Algebra, v: &[Scalar]) -> VectorSpec {
    alg.labels().iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(l, c)| (l.clone(), c.to_string())).collect()
}

/// The action in the input schema, every twist and structure constant written out.
pub fn action_to_file(a: &TwistedPartialAction) -> WorkspaceFile {
    let g = a.groupoid();
    let alg = a.algebra();
    let n = alg.dim();
    let labels = alg.labels();
    let mut products = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let v = &alg.structure_constants()[i * n + j];
            if v.iter().any(|c| !c.is_zero()) {
                products.insert(format!("{}*{}", labels[i], labels[j]), vector_spec(alg, v));
            }
        }
    }
    let domains = g
        .arrows()
        .map(|x| (g.name(x).to_string(), a.domain(x).basis().iter().map(|b| vector_spec(alg, b)).collect()))
        .collect();
    let maps = g
        .arrows()
        .filter(|&x| !g.is_identity(x))
        .map(|x| {
            let pairs = a
                .domain(g.inv(x))
                .basis()
                .iter()
                .map(|b| [vector_spec(alg, b), vector_spec(alg, &a.map(x).apply(b).expect("basis of the domain"))])
                .collect();
            (g.name(x).to_string(), pairs)
        })
        .collect();
    let twists = g
        .defined_products()
        .map(|(x, y, _)| PairVector {
            pair: [g.name(x).to_string(), g.name(y).to_string()],
            value: vector_spec(alg, a.twist(x, y)),
        })
        .collect();
    WorkspaceFile {
        field: alg.field().to_string(),
        groupoid: GroupoidBlock {
            arrows: g.names().to_vec(),
            products: g
                .defined_products()
                .map(|(x, y, z)| format!("{}*{}={}", g.name(x), g.name(y), g.name(z)))
                .collect(),
            inverses: g
                .arrows()
                .filter(|&x| x <= g.inv(x))
                .map(|x| [g.name(x).to_string(), g.name(g.inv(x)).to_string()])
                .collect(),
        },
        algebra: Some(AlgebraBlock { basis: labels.to_vec(), split: false, products }),
        action: Some(ActionBlock { domains, maps, twists }),
        extension: None,
        factor_set: None,
        representation: None,
        semigroup: None,
        semigroup_action: None,
    }
}

/// Element list with product and scalar tables.
pub fn semigroup_block(s: &KSemigroup) -> SemigroupBlock {
    let n = s.len();
    let p = s.field().order().expect("prime") as usize;
    SemigroupBlock {
        elements: s.names().to_vec(),
        zero: s.name(s.zero()).to_string(),
        product: (0..n).map(|a| (0..n).map(|b| s.name(s.mul(a, b)).to_string()).collect()).collect(),
        scalar: (0..p).map(|k| (0..n).map(|a| s.name(s.scale_residue(k, a)).to_string()).collect()).collect(),
    }
}
