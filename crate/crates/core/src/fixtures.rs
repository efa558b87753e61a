//! Built-in actions on `K^4` over the two-object groupoid with one non-identity arrow pair.
//!
//! Arrow order is `g, g^-1, r(g), d(g)` and the basis of `K^4` is `e1..e4`.

use std::collections::HashMap;

use crate::action::TwistedPartialAction;
use crate::error::Result;
use crate::exactalg::linalg::{add_vectors, scale_vector, Vector};
use crate::exactalg::{Algebra, FieldSpec, LinearMap, Scalar};
use crate::globalize::ExtensionData;
use crate::groupoid::Groupoid;

pub const G: usize = 0;
pub const G_INV: usize = 1;
pub const R_G: usize = 2;
pub const D_G: usize = 3;

/// The trivial group acting on the field itself with unit twist.
pub fn trivial_action(field: FieldSpec) -> Result<TwistedPartialAction> {
    let alg = Algebra::split(1, field)?;
    TwistedPartialAction::assemble(Groupoid::trivial(), alg.clone(), vec![alg.full()], vec![None], &HashMap::new())
}

fn e(alg: &Algebra, i: usize) -> Vector {
    alg.basis_element(i - 1)
}

/// `D_r(g) = <e1,e2>`, `D_d(g) = <e3,e4>`, `D_g = <e1>`, `D_g^-1 = <e3>`, `alpha_g(e3) = e1`,
/// twists `w_{g,g^-1} = -e1`, `w_{g^-1,g} = -e3` and units elsewhere.
pub fn partial_single_arrow(field: FieldSpec) -> Result<TwistedPartialAction> {
    let alg = Algebra::split(4, field)?;
    let span = |idx: &[usize]| alg.span(idx.iter().map(|&i| e(&alg, i)).collect::<Vec<_>>().iter());
    let domains = vec![span(&[1]), span(&[3]), span(&[1, 2]), span(&[3, 4])];
    let alpha_g = LinearMap::from_images(domains[G_INV].clone(), domains[G].clone(), &[e(&alg, 3)], &[e(&alg, 1)])?;
    let alpha_gi = LinearMap::from_images(domains[G].clone(), domains[G_INV].clone(), &[e(&alg, 1)], &[e(&alg, 3)])?;
    let minus = -field.one();
    let mut twists = HashMap::new();
    twists.insert((G, G_INV), scale_vector(&minus, &e(&alg, 1)));
    twists.insert((G_INV, G), scale_vector(&minus, &e(&alg, 3)));
    TwistedPartialAction::assemble(
        Groupoid::single_arrow(),
        alg,
        domains,
        vec![Some(alpha_g), Some(alpha_gi), None, None],
        &twists,
    )
}

/// Global action with `E_g = E_r(g) = <e3,e4>`, `E_g^-1 = E_d(g) = <e1,e2>`, `beta_g(e1) = e3`,
/// `beta_g(e2) = e4`, and twists `u_{g,g^-1} = a e3 + b e4`, `u_{g^-1,g} = a e1 + b e2` for units `a, b`.
pub fn global_single_arrow(field: FieldSpec, a: Scalar, b: Scalar) -> Result<TwistedPartialAction> {
    let alg = Algebra::split(4, field)?;
    let span = |idx: &[usize]| alg.span(idx.iter().map(|&i| e(&alg, i)).collect::<Vec<_>>().iter());
    let top = span(&[3, 4]);
    let bottom = span(&[1, 2]);
    let domains = vec![top.clone(), bottom.clone(), top.clone(), bottom.clone()];
    let beta_g =
        LinearMap::from_images(bottom.clone(), top.clone(), &[e(&alg, 1), e(&alg, 2)], &[e(&alg, 3), e(&alg, 4)])?;
    let beta_gi = LinearMap::from_images(top, bottom, &[e(&alg, 3), e(&alg, 4)], &[e(&alg, 1), e(&alg, 2)])?;
    let mut twists = HashMap::new();
    twists.insert((G, G_INV), add_vectors(&scale_vector(&a, &e(&alg, 3)), &scale_vector(&b, &e(&alg, 4))));
    twists.insert((G_INV, G), add_vectors(&scale_vector(&a, &e(&alg, 1)), &scale_vector(&b, &e(&alg, 2))));
    TwistedPartialAction::assemble(
        Groupoid::single_arrow(),
        alg,
        domains,
        vec![Some(beta_g), Some(beta_gi), None, None],
        &twists,
    )
}

/// Extension data for [`partial_single_arrow`]: `-(e1+e2)` at `(g,g^-1)`, `-(e3+e4)` at `(g^-1,g)`,
/// and the unit of `D_r(x)` at every other pair `(x, y)`.
pub fn single_arrow_extension(action: &TwistedPartialAction) -> Result<ExtensionData> {
    let alg = action.algebra();
    let field = alg.field();
    let minus = -field.one();
    let mut values = HashMap::new();
    values.insert((G, G_INV), scale_vector(&minus, &add_vectors(&e(alg, 1), &e(alg, 2))));
    values.insert((G_INV, G), scale_vector(&minus, &add_vectors(&e(alg, 3), &e(alg, 4))));
    ExtensionData::assemble(action, &values)
}
