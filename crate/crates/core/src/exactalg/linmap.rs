//! Linear maps between subspaces, stored against canonical bases.

use crate::error::{Error, Result};

use super::algebra::Algebra;
use super::field::Scalar;
use super::linalg::{Matrix, Subspace, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    domain: Subspace,
    codomain: Subspace,
    /// `codomain.dim() x domain.dim()`
    matrix: Matrix,
}

impl LinearMap {
    pub fn from_matrix(domain: Subspace, codomain: Subspace, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != codomain.dim() || matrix.cols() != domain.dim() {
            return Err(Error::Structure(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                codomain.dim(),
                domain.dim()
            )));
        }
        Ok(LinearMap { domain, codomain, matrix })
    }

    /// The map sending each `sources[i]` to `targets[i]`.
    ///
    /// Sources must span the domain, and the targets must respect every linear relation among them.
    pub fn from_images(domain: Subspace, codomain: Subspace, sources: &[Vector], targets: &[Vector]) -> Result<Self> {
        if sources.len() != targets.len() {
            return Err(Error::Structure("sources and targets differ in length".into()));
        }
        let field = domain.field();
        let src_coords = sources
            .iter()
            .map(|s| domain.coordinates(s).ok_or_else(|| Error::Structure("map source outside its domain".into())))
            .collect::<Result<Vec<_>>>()?;
        let tgt_coords = targets
            .iter()
            .map(|t| codomain.coordinates(t).ok_or_else(|| Error::Structure("map image outside its codomain".into())))
            .collect::<Result<Vec<_>>>()?;
        // columns = source coordinates; solve S c = e_i for each domain basis vector
        let s = Matrix::from_columns(field, domain.dim(), &src_coords);
        let t = Matrix::from_columns(field, codomain.dim(), &tgt_coords);
        for rel in s.nullspace() {
            if !t.mul_vector(&rel).iter().all(Scalar::is_zero) {
                return Err(Error::Structure("map images violate a relation among the sources".into()));
            }
        }
        let mut matrix = Matrix::zeros(field, codomain.dim(), domain.dim());
        for i in 0..domain.dim() {
            let mut e = vec![field.zero(); domain.dim()];
            e[i] = field.one();
            let c = s.solve(&e).ok_or_else(|| Error::Structure("map sources do not span the domain".into()))?;
            let img = t.mul_vector(&c);
            for (r, x) in img.into_iter().enumerate() {
                matrix.set(r, i, x);
            }
        }
        Ok(LinearMap { domain, codomain, matrix })
    }

    /// Map defined by a function on ambient vectors; images must land in the codomain.
    pub fn from_fn<F: Fn(&Vector) -> Vector>(domain: Subspace, codomain: Subspace, f: F) -> Result<Self> {
        let sources = domain.basis().to_vec();
        let targets: Vec<Vector> = sources.iter().map(f).collect();
        Self::from_images(domain, codomain, &sources, &targets)
    }

    pub fn identity(space: Subspace) -> Self {
        let matrix = Matrix::identity(space.field(), space.dim());
        LinearMap { domain: space.clone(), codomain: space, matrix }
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn codomain(&self) -> &Subspace {
        &self.codomain
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, a: &[Scalar]) -> Result<Vector> {
        let c =
            self.domain.coordinates(a).ok_or_else(|| Error::Argument("argument outside the map's domain".into()))?;
        Ok(self.codomain.from_coordinates(&self.matrix.mul_vector(&c)))
    }

    /// Image of a subspace of the domain.
    pub fn image_of(&self, s: &Subspace) -> Result<Subspace> {
        let imgs = s.basis().iter().map(|b| self.apply(b)).collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span(self.codomain.field(), self.codomain.ambient_dim(), imgs.iter()))
    }

    pub fn image(&self) -> Subspace {
        self.image_of(&self.domain.clone()).expect("domain maps into codomain")
    }

    /// Some preimage of `target`, an error if `target` is outside the image.
    pub fn inverse_on_image(&self, target: &[Scalar]) -> Result<Vector> {
        let c = self
            .codomain
            .coordinates(target)
            .and_then(|c| self.matrix.solve(&c))
            .ok_or_else(|| Error::Argument("element is not in the image".into()))?;
        Ok(self.domain.from_coordinates(&c))
    }

    pub fn is_bijective(&self) -> bool {
        self.domain.dim() == self.codomain.dim() && self.matrix.rank() == self.domain.dim()
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        let inv = self.matrix.inverse()?;
        Some(LinearMap { domain: self.codomain.clone(), codomain: self.domain.clone(), matrix: inv })
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &LinearMap) -> Result<LinearMap> {
        if !first.codomain.is_subspace_of(&self.domain) {
            return Err(Error::Argument("maps are not composable".into()));
        }
        LinearMap::from_fn(first.domain.clone(), self.codomain.clone(), |v| {
            self.apply(&first.apply(v).expect("in domain")).expect("in domain")
        })
    }

    /// Restriction to a subspace of the domain, landing in `codomain`.
    pub fn restrict(&self, domain: Subspace, codomain: Subspace) -> Result<LinearMap> {
        if !domain.is_subspace_of(&self.domain) {
            return Err(Error::Argument("restriction domain is not inside the map's domain".into()));
        }
        let sources = domain.basis().to_vec();
        let targets = sources.iter().map(|s| self.apply(s)).collect::<Result<Vec<_>>>()?;
        LinearMap::from_images(domain, codomain, &sources, &targets)
    }

    /// First basis pair `(i, j)` with `f(b_i b_j) != f(b_i) f(b_j)`.
    pub fn multiplicativity_failure(&self, alg: &Algebra) -> Option<(usize, usize)> {
        let basis = self.domain.basis();
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let ab = alg.mul(a, b);
                let lhs = match self.apply(&ab) {
                    Ok(x) => x,
                    Err(_) => return Some((i, j)),
                };
                let rhs = alg.mul(&self.apply(a).expect("basis"), &self.apply(b).expect("basis"));
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::FieldSpec;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| FieldSpec::Rational.from_i64(x)).collect()
    }

    #[test]
    fn shift_map() {
        let r = Algebra::split(4, FieldSpec::Rational).unwrap();
        let d3 = r.span([v(&[0, 0, 1, 0])].iter());
        let d1 = r.span([v(&[1, 0, 0, 0])].iter());
        let m = LinearMap::from_images(d3.clone(), d1.clone(), &[v(&[0, 0, 2, 0])], &[v(&[2, 0, 0, 0])]).unwrap();
        assert_eq!(m.apply(&v(&[0, 0, 5, 0])).unwrap(), v(&[5, 0, 0, 0]));
        assert!(m.apply(&v(&[1, 0, 0, 0])).is_err());
        assert!(m.multiplicativity_failure(&r).is_none());
        let inv = m.inverse().unwrap();
        assert_eq!(inv.apply(&v(&[3, 0, 0, 0])).unwrap(), v(&[0, 0, 3, 0]));
        assert_eq!(inv.compose(&m).unwrap(), LinearMap::identity(d3));
    }

    #[test]
    fn inconsistent_images_rejected() {
        let r = Algebra::split(2, FieldSpec::Rational).unwrap();
        let full = r.full();
        let err = LinearMap::from_images(
            full.clone(),
            full.clone(),
            &[v(&[1, 0]), v(&[0, 1]), v(&[1, 1])],
            &[v(&[1, 0]), v(&[0, 1]), v(&[0, 0])],
        );
        assert!(err.is_err());
        let scaled = LinearMap::from_fn(full.clone(), full, |x| x.iter().map(|c| c + c).collect()).unwrap();
        assert!(scaled.multiplicativity_failure(&r).is_some());
    }
}
