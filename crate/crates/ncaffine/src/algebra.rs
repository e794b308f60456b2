//! Finite-dimensional associative unital algebras given by structure
//! constants, with the standard constructors (matrix, group, function,
//! truncated-polynomial and polynomial-quotient algebras) and the
//! opposite / tensor / enveloping constructions.
//!
//! Elements are always coordinate vectors in the chosen basis; tensor
//! products use the lexicographic basis convention `e_i (x) e_j  ->  i*dim2 + j`.

use crate::exactlin::{kernel_of_constraints, Field, Mat, SVec, Scalar};
use crate::{Result, WbError};
use std::sync::Arc;

/// An associative unital algebra over `Q` or `F_p`, presented by the
/// structure-constant tensor `e_i e_j = sum_k sc[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    pub field: Field,
    pub dim: usize,
    /// `sc[i * dim + j]` is the dense coordinate vector of `e_i e_j`.
    sc: Vec<Vec<Scalar>>,
    /// Coordinates of the unit element.
    pub unit: Vec<Scalar>,
}

impl Algebra {
    /// Validates associativity and unitality of the supplied data.
    pub fn new(field: Field, dim: usize, sc: Vec<Vec<Scalar>>, unit: Vec<Scalar>) -> Result<Algebra> {
        if dim == 0 {
            return Err(WbError::BadInput("algebra of dimension 0".into()));
        }
        if sc.len() != dim * dim || sc.iter().any(|v| v.len() != dim) || unit.len() != dim {
            return Err(WbError::DimMismatch("structure constant tensor shape".into()));
        }
        let a = Algebra { field, dim, sc, unit };
        a.validate()?;
        Ok(a)
    }

    /// Convenience constructor from `c[i][j][k]` nested data.
    pub fn from_nested(field: Field, c: Vec<Vec<Vec<Scalar>>>, unit: Vec<Scalar>) -> Result<Algebra> {
        let dim = c.len();
        let mut sc = Vec::with_capacity(dim * dim);
        for row in c {
            if row.len() != dim {
                return Err(WbError::DimMismatch("structure constant tensor shape".into()));
            }
            for cell in row {
                sc.push(cell);
            }
        }
        Algebra::new(field, dim, sc, unit)
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim;
        // unit axioms
        for i in 0..d {
            let e = SVec::unit(i, self.field);
            let u = SVec::from_dense(&self.unit);
            if self.mul(&u, &e) != e || self.mul(&e, &u) != e {
                return Err(WbError::Validation(format!("NotUnital: basis element {i}")));
            }
        }
        // associativity on basis triples
        for i in 0..d {
            for j in 0..d {
                let ij = SVec::from_dense(self.mul_basis(i, j));
                for k in 0..d {
                    let jk = SVec::from_dense(self.mul_basis(j, k));
                    let lhs = self.mul(&ij, &SVec::unit(k, self.field));
                    let rhs = self.mul(&SVec::unit(i, self.field), &jk);
                    if lhs != rhs {
                        return Err(WbError::Validation(format!(
                            "NotAssociative: triple ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Dense coordinates of `e_i e_j`.
    pub fn mul_basis(&self, i: usize, j: usize) -> &[Scalar] {
        &self.sc[i * self.dim + j]
    }

    /// Product of two coordinate vectors.
    pub fn mul(&self, x: &SVec, y: &SVec) -> SVec {
        let mut pairs = Vec::new();
        for (i, a) in &x.entries {
            for (j, b) in &y.entries {
                let ab = a.mul(b);
                for (k, c) in self.mul_basis(*i, *j).iter().enumerate() {
                    if !c.is_zero() {
                        pairs.push((k, ab.mul(c)));
                    }
                }
            }
        }
        SVec::from_pairs(pairs)
    }

    pub fn unit_svec(&self) -> SVec {
        SVec::from_dense(&self.unit)
    }

    /// Matrix of left multiplication by `e_i`.
    pub fn left_mult(&self, i: usize) -> Mat {
        Mat::from_fn(self.field, self.dim, self.dim, |k, j| self.mul_basis(i, j)[k].clone())
    }

    /// Matrix of right multiplication by `e_i`.
    pub fn right_mult(&self, i: usize) -> Mat {
        Mat::from_fn(self.field, self.dim, self.dim, |k, j| self.mul_basis(j, i)[k].clone())
    }

    /// Matrix of left multiplication by an arbitrary element.
    pub fn left_mult_of(&self, a: &SVec) -> Mat {
        let mut m = Mat::zeros(self.field, self.dim, self.dim);
        for (i, c) in &a.entries {
            m = m.add(&self.left_mult(*i).scale(c)).expect("shape");
        }
        m
    }

    pub fn right_mult_of(&self, a: &SVec) -> Mat {
        let mut m = Mat::zeros(self.field, self.dim, self.dim);
        for (i, c) in &a.entries {
            m = m.add(&self.right_mult(*i).scale(c)).expect("shape");
        }
        m
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| self.mul_basis(i, j) == self.mul_basis(j, i))
        })
    }

    /// The opposite algebra (`sc'[i][j] = sc[j][i]`).
    pub fn opposite(&self) -> Algebra {
        let d = self.dim;
        let mut sc = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                sc.push(self.sc[j * d + i].clone());
            }
        }
        Algebra { field: self.field, dim: d, sc, unit: self.unit.clone() }
    }

    /// Tensor product of algebras, basis `e_i (x) f_j -> i * other.dim + j`.
    pub fn tensor(&self, other: &Algebra) -> Result<Algebra> {
        if self.field != other.field {
            return Err(WbError::FieldMismatch("algebra tensor product".into()));
        }
        let (d1, d2) = (self.dim, other.dim);
        let d = d1 * d2;
        let mut sc = vec![vec![self.field.zero(); d]; d * d];
        for i1 in 0..d1 {
            for i2 in 0..d2 {
                let i = i1 * d2 + i2;
                for j1 in 0..d1 {
                    for j2 in 0..d2 {
                        let j = j1 * d2 + j2;
                        let p1 = self.mul_basis(i1, j1);
                        let p2 = other.mul_basis(i2, j2);
                        let cell = &mut sc[i * d + j];
                        for (k1, a) in p1.iter().enumerate() {
                            if a.is_zero() {
                                continue;
                            }
                            for (k2, b) in p2.iter().enumerate() {
                                if !b.is_zero() {
                                    cell[k1 * d2 + k2] = cell[k1 * d2 + k2].add(&a.mul(b));
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut unit = vec![self.field.zero(); d];
        for (k1, a) in self.unit.iter().enumerate() {
            for (k2, b) in other.unit.iter().enumerate() {
                unit[k1 * d2 + k2] = a.mul(b);
            }
        }
        // inputs are valid algebras, so the product is too; still validate to
        // keep the constructor contract uniform
        Algebra::new(self.field, d, sc, unit)
    }

    /// The enveloping algebra `A^op (x) A`, basis `e_i^op (x) e_j` in
    /// lexicographic order.
    pub fn enveloping(&self) -> Algebra {
        self.opposite().tensor(self).expect("same field")
    }

    /// Basis of the center `{z : z e_i = e_i z for all i}`.
    pub fn center_basis(&self) -> Vec<SVec> {
        let mut rows = Vec::new();
        for i in 0..self.dim {
            let c = self.left_mult(i).sub(&self.right_mult(i)).expect("shape");
            for r in 0..self.dim {
                rows.push(c.row_svec(r));
            }
        }
        kernel_of_constraints(self.field, self.dim, &rows)
    }

    /// `center_basis` as a matrix of columns.
    pub fn center_mat(&self) -> Mat {
        Mat::from_cols(self.field, self.dim, &self.center_basis())
    }

    pub fn shared(self) -> Arc<Algebra> {
        Arc::new(self)
    }

    // ---- standard constructors ----

    /// Full matrix algebra, basis `e_{rs} -> r * n + s` (matrix units).
    pub fn matrix_algebra(field: Field, n: usize) -> Algebra {
        let d = n * n;
        let mut sc = vec![vec![field.zero(); d]; d * d];
        for r in 0..n {
            for s in 0..n {
                for t in 0..n {
                    for u in 0..n {
                        if s == t {
                            let (i, j) = (r * n + s, t * n + u);
                            sc[i * d + j][r * n + u] = field.one();
                        }
                    }
                }
            }
        }
        let mut unit = vec![field.zero(); d];
        for r in 0..n {
            unit[r * n + r] = field.one();
        }
        Algebra { field, dim: d, sc, unit }
    }

    /// Group algebra from a multiplication table `table[g][h] = gh`
    /// (index 0 must be the neutral element).
    pub fn group_algebra(field: Field, table: &[Vec<usize>]) -> Result<Algebra> {
        let n = table.len();
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(WbError::BadInput("malformed group table".into()));
        }
        let mut sc = vec![vec![field.zero(); n]; n * n];
        for g in 0..n {
            for h in 0..n {
                sc[g * n + h][table[g][h]] = field.one();
            }
        }
        let mut unit = vec![field.zero(); n];
        unit[0] = field.one();
        Algebra::new(field, n, sc, unit)
    }

    /// `Map(S, K)` for a finite set of size `n`: pointwise product on the
    /// indicator basis, unit = constant function 1.
    pub fn function_algebra(field: Field, n: usize) -> Algebra {
        let mut sc = vec![vec![field.zero(); n]; n * n];
        for i in 0..n {
            sc[i * n + i][i] = field.one();
        }
        Algebra { field, dim: n, sc, unit: vec![field.one(); n] }
    }

    /// `K[x]/(x^n)`, basis `1, x, ..., x^{n-1}`.
    pub fn truncated_polynomial(field: Field, n: usize) -> Algebra {
        let mut sc = vec![vec![field.zero(); n]; n * n];
        for i in 0..n {
            for j in 0..n {
                if i + j < n {
                    sc[i * n + j][i + j] = field.one();
                }
            }
        }
        let mut unit = vec![field.zero(); n];
        unit[0] = field.one();
        Algebra { field, dim: n, sc, unit }
    }

    /// `K[x]/(f)` for a monic polynomial `f = x^d - (c_{d-1} x^{d-1} + ... + c_0)`,
    /// supplied as the coefficients `c_0..c_{d-1}` of the reduction of `x^d`.
    /// With `f` irreducible this is the field extension by `f`.
    pub fn polynomial_quotient(field: Field, xd: &[Scalar]) -> Result<Algebra> {
        let d = xd.len();
        if d == 0 {
            return Err(WbError::BadInput("degree must be positive".into()));
        }
        // powers[k] = coordinates of x^k for k < 2d
        let mut powers: Vec<Vec<Scalar>> = Vec::new();
        for k in 0..d {
            let mut v = vec![field.zero(); d];
            v[k] = field.one();
            powers.push(v);
        }
        for _k in d..(2 * d) {
            // x^k = x * x^{k-1}; multiply by x and reduce via xd
            let prev = powers.last().expect("nonempty").clone();
            let mut v = vec![field.zero(); d];
            for (i, c) in prev.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if i + 1 < d {
                    v[i + 1] = v[i + 1].add(c);
                } else {
                    for (t, r) in xd.iter().enumerate() {
                        v[t] = v[t].add(&c.mul(r));
                    }
                }
            }
            powers.push(v);
        }
        let mut sc = vec![vec![field.zero(); d]; d * d];
        for i in 0..d {
            for j in 0..d {
                sc[i * d + j] = powers[i + j].clone();
            }
        }
        let mut unit = vec![field.zero(); d];
        unit[0] = field.one();
        Algebra::new(field, d, sc, unit)
    }

    /// Upper-triangular `n x n` matrices, basis = matrix units `e_{rs}` with
    /// `r <= s`, ordered lexicographically.
    pub fn upper_triangular(field: Field, n: usize) -> Algebra {
        let mut idx = Vec::new();
        for r in 0..n {
            for s in r..n {
                idx.push((r, s));
            }
        }
        let d = idx.len();
        let pos = |r: usize, s: usize| idx.iter().position(|&p| p == (r, s)).expect("basis");
        let mut sc = vec![vec![field.zero(); d]; d * d];
        for (i, &(r, s)) in idx.iter().enumerate() {
            for (j, &(t, u)) in idx.iter().enumerate() {
                if s == t {
                    sc[i * d + j][pos(r, u)] = field.one();
                }
            }
        }
        let mut unit = vec![field.zero(); d];
        for r in 0..n {
            unit[pos(r, r)] = field.one();
        }
        Algebra { field, dim: d, sc, unit }
    }
}

/// A linear map between algebras, validated as a unital homomorphism.
#[derive(Debug, Clone)]
pub struct AlgebraMap {
    pub source: Arc<Algebra>,
    pub target: Arc<Algebra>,
    pub matrix: Mat,
}

impl AlgebraMap {
    pub fn new(source: Arc<Algebra>, target: Arc<Algebra>, matrix: Mat) -> Result<AlgebraMap> {
        if matrix.rows != target.dim || matrix.cols != source.dim {
            return Err(WbError::DimMismatch("algebra map matrix shape".into()));
        }
        let m = AlgebraMap { source, target, matrix };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let u = self.matrix.apply(&self.source.unit_svec());
        if u != self.target.unit_svec() {
            return Err(WbError::Validation("algebra map does not preserve the unit".into()));
        }
        for i in 0..self.source.dim {
            let fi = self.matrix.apply(&SVec::unit(i, self.source.field));
            for j in 0..self.source.dim {
                let fj = self.matrix.apply(&SVec::unit(j, self.source.field));
                let lhs = self.matrix.apply(&SVec::from_dense(self.source.mul_basis(i, j)));
                let rhs = self.target.mul(&fi, &fj);
                if lhs != rhs {
                    return Err(WbError::Validation(format!(
                        "algebra map not multiplicative at basis pair ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.matrix.rows == self.matrix.cols && self.matrix.rank() == self.matrix.rows
    }
}

/// Checks whether `m` defines a unital algebra isomorphism `a -> b`.
pub fn is_algebra_iso(a: &Arc<Algebra>, b: &Arc<Algebra>, m: &Mat) -> bool {
    matches!(AlgebraMap::new(a.clone(), b.clone(), m.clone()), Ok(am) if am.is_isomorphism())
}
