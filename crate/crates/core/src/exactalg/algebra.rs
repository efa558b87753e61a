//! Structure-constant algebras and their ideals.

use crate::error::{Error, Result};

use super::field::{FieldSpec, Scalar};
use super::linalg::{axpy, combine, is_zero_vector, unit_vector, zero_vector, Matrix, Subspace, Vector};

/// A finite-dimensional associative algebra given by structure constants `e_i e_j = sum_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: FieldSpec,
    labels: Vec<String>,
    table: Vec<Vector>,
}

impl Algebra {
    /// Builds an algebra and checks associativity on all basis triples.
    pub fn new(field: FieldSpec, labels: Vec<String>, table: Vec<Vector>) -> Result<Self> {
        let alg = Self::new_unchecked(field, labels, table)?;
        if let Some((i, j, k)) = alg.associativity_failure() {
            return Err(Error::Structure(format!(
                "multiplication is not associative on ({}, {}, {})",
                alg.labels[i], alg.labels[j], alg.labels[k]
            )));
        }
        Ok(alg)
    }

    /// Builds an algebra without the associativity sweep. Shapes are still checked.
    pub fn new_unchecked(field: FieldSpec, labels: Vec<String>, table: Vec<Vector>) -> Result<Self> {
        let n = labels.len();
        if table.len() != n * n {
            return Err(Error::Structure(format!("expected {} products, got {}", n * n, table.len())));
        }
        if let Some(bad) = table.iter().position(|v| v.len() != n) {
            return Err(Error::Structure(format!("product {bad} has wrong length")));
        }
        if table.iter().flatten().any(|s| s.field() != field) {
            return Err(Error::Structure("structure constant outside the base field".into()));
        }
        Ok(Algebra { field, labels, table })
    }

    /// `K^n` with orthogonal idempotents `e_i e_j = delta_ij e_i`.
    pub fn split(n: usize, field: FieldSpec) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("split algebra needs n >= 1".into()));
        }
        let labels = (1..=n).map(|i| format!("e{i}")).collect();
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(if i == j { unit_vector(field, n, i) } else { zero_vector(field, n) });
            }
        }
        Ok(Algebra { field, labels, table })
    }

    /// Direct product of `copies` copies of `self`, coordinate block `c` occupying indices `c*dim..(c+1)*dim`.
    pub fn power(&self, copies: usize, label: impl Fn(usize) -> String) -> Algebra {
        let n = self.dim();
        let big = n * copies;
        let mut labels = Vec::with_capacity(big);
        for c in 0..copies {
            for l in &self.labels {
                labels.push(format!("{}@{}", l, label(c)));
            }
        }
        let mut table = vec![zero_vector(self.field, big); big * big];
        for c in 0..copies {
            for i in 0..n {
                for j in 0..n {
                    let mut v = zero_vector(self.field, big);
                    v[c * n..(c + 1) * n].clone_from_slice(&self.table[i * n + j]);
                    table[(c * n + i) * big + c * n + j] = v;
                }
            }
        }
        Algebra { field: self.field, labels, table }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure_constants(&self) -> &[Vector] {
        &self.table
    }

    pub fn zero(&self) -> Vector {
        zero_vector(self.field, self.dim())
    }

    pub fn basis_element(&self, i: usize) -> Vector {
        unit_vector(self.field, self.dim(), i)
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(self.field, self.dim())
    }

    pub fn zero_ideal(&self) -> Subspace {
        Subspace::zero(self.field, self.dim())
    }

    pub fn span<'a, I: IntoIterator<Item = &'a Vector>>(&self, vectors: I) -> Subspace {
        Subspace::span(self.field, self.dim(), vectors)
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vector {
        let n = self.dim();
        debug_assert!(a.len() == n && b.len() == n);
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                axpy(&mut out, &(x * y), &self.table[i * n + j]);
            }
        }
        out
    }

    /// Product of several elements, left to right.
    pub fn mul_all(&self, factors: &[&Vector]) -> Vector {
        let mut it = factors.iter();
        let first = it.next().expect("at least one factor");
        it.fold((*first).clone(), |acc, f| self.mul(&acc, f))
    }

    pub fn associativity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = &self.table[i * n + j];
                for k in 0..n {
                    let left = self.mul(ij, &self.basis_element(k));
                    let right = self.mul(&self.basis_element(i), &self.table[j * n + k]);
                    if left != right {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    fn check_ambient(&self, s: &Subspace) -> Result<()> {
        if s.ambient_dim() != self.dim() || s.field() != self.field {
            return Err(Error::Argument("subspace does not live in this algebra".into()));
        }
        Ok(())
    }

    /// Span of all products `ab` with `a` in `i` and `b` in `j`.
    pub fn product(&self, i: &Subspace, j: &Subspace) -> Result<Subspace> {
        self.check_ambient(i)?;
        self.check_ambient(j)?;
        let prods: Vec<Vector> = i.basis().iter().flat_map(|a| j.basis().iter().map(move |b| self.mul(a, b))).collect();
        Ok(self.span(prods.iter()))
    }

    /// Product of a list of subspaces, left to right.
    pub fn product_all(&self, parts: &[&Subspace]) -> Result<Subspace> {
        let (first, rest) = parts.split_first().ok_or_else(|| Error::Argument("empty product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, p| self.product(&acc, p))
    }

    /// True if `outer * inner` and `inner * outer` both lie in `inner`.
    pub fn is_ideal_in(&self, inner: &Subspace, outer: &Subspace) -> bool {
        inner.is_subspace_of(outer)
            && outer.basis().iter().all(|x| {
                inner.basis().iter().all(|a| inner.contains(&self.mul(x, a)) && inner.contains(&self.mul(a, x)))
            })
    }

    pub fn is_closed(&self, s: &Subspace) -> bool {
        s.basis().iter().all(|a| s.basis().iter().all(|b| s.contains(&self.mul(a, b))))
    }

    /// The two-sided identity of `ideal`, if any. The zero ideal has unit `0`.
    pub fn unit_of(&self, ideal: &Subspace) -> Option<Vector> {
        if ideal.is_zero() {
            return Some(self.zero());
        }
        let basis = ideal.basis();
        let n = self.dim();
        let k = basis.len();
        // unknowns: coordinates of u in the basis; equations u b = b and b u = b for every basis b
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for b in basis {
            let left: Vec<Vector> = basis.iter().map(|c| self.mul(c, b)).collect();
            let right: Vec<Vector> = basis.iter().map(|c| self.mul(b, c)).collect();
            for prods in [&left, &right] {
                for coord in 0..n {
                    rows.push((0..k).map(|j| prods[j][coord].clone()).collect::<Vector>());
                    rhs.push(b[coord].clone());
                }
            }
        }
        let coeffs = Matrix::from_rows(self.field, k, &rows).solve(&rhs)?;
        Some(combine(self.field, n, &coeffs, basis))
    }

    /// The inverse of `a` inside the unital ideal `ideal`, if it exists.
    pub fn invert_in(&self, a: &[Scalar], ideal: &Subspace) -> Result<Option<Vector>> {
        if !ideal.contains(a) {
            return Err(Error::Argument("element is not in the ideal".into()));
        }
        let unit = self
            .unit_of(ideal)
            .ok_or_else(|| Error::Unsupported("ideal has no unit, inverses are not modeled".into()))?;
        if ideal.is_zero() {
            return Ok(Some(self.zero()));
        }
        let basis = ideal.basis();
        let n = self.dim();
        let k = basis.len();
        let left: Vec<Vector> = basis.iter().map(|c| self.mul(a, c)).collect();
        let right: Vec<Vector> = basis.iter().map(|c| self.mul(c, a)).collect();
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for prods in [&left, &right] {
            for coord in 0..n {
                rows.push((0..k).map(|j| prods[j][coord].clone()).collect::<Vector>());
                rhs.push(unit[coord].clone());
            }
        }
        Ok(Matrix::from_rows(self.field, k, &rows).solve(&rhs).map(|c| combine(self.field, n, &c, basis)))
    }

    /// Smallest multiplicatively closed subspace containing `gens`.
    pub fn subring_closure(&self, gens: &[Vector]) -> Subspace {
        let mut s = self.span(gens.iter());
        loop {
            let mut all: Vec<Vector> = s.basis().to_vec();
            for a in s.basis() {
                for b in s.basis() {
                    let p = self.mul(a, b);
                    if !is_zero_vector(&p) {
                        all.push(p);
                    }
                }
            }
            let next = self.span(all.iter());
            if next.dim() == s.dim() {
                return s;
            }
            s = next;
        }
    }

    /// The closed subspace `s` as an algebra in its own right, using its canonical basis.
    pub fn subalgebra(&self, s: &Subspace, labels: Vec<String>) -> Result<Algebra> {
        self.check_ambient(s)?;
        if labels.len() != s.dim() {
            return Err(Error::Argument("one label per basis vector required".into()));
        }
        let mut table = Vec::with_capacity(s.dim() * s.dim());
        for a in s.basis() {
            for b in s.basis() {
                let p = self.mul(a, b);
                let c = s
                    .coordinates(&p)
                    .ok_or_else(|| Error::Argument("subspace is not closed under multiplication".into()))?;
                table.push(c);
            }
        }
        Algebra::new_unchecked(self.field, labels, table)
    }

    /// Human-readable form such as `-1*e1 + 2*e3`.
    pub fn render(&self, v: &[Scalar]) -> String {
        let terms: Vec<String> = v
            .iter()
            .zip(&self.labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| if c.is_one() { l.clone() } else { format!("({c})*{l}") })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}
