//! A-bimodules (central over the base field), bimodule maps, the tensor
//! product over A presented as an explicit subquotient of the K-tensor
//! square, bimodule Hom spaces, the trace functor with its flip symmetry,
//! and the center functor.
//!
//! Iterated tensor products are built left-associated by a [`ChainTower`]
//! which keeps, per level, the quotient presentation, the induced actions,
//! and the expansion of the chosen basis into the full K-tensor ambient
//! space.  Maps defined on ambient representatives are always pushed through
//! [`map_on_quotients`], which verifies that the source kernel dies.

use crate::algebra::Algebra;
use crate::exactlin::{kernel_of_constraints, ColMat, Field, Mat, SVec, Scalar, Subquotient};
use crate::{Result, WbError};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A bimodule over an algebra `A`, with sparse action matrices per algebra
/// basis element (left action `lam[i]`, right action `rho[i]`).
#[derive(Debug, Clone)]
pub struct Bimodule {
    pub alg: Arc<Algebra>,
    pub dim: usize,
    left: Vec<ColMat>,
    right: Vec<ColMat>,
}

impl Bimodule {
    pub fn new(alg: Arc<Algebra>, dim: usize, left: Vec<ColMat>, right: Vec<ColMat>) -> Result<Bimodule> {
        let b = Bimodule { alg, dim, left, right };
        b.validate()?;
        Ok(b)
    }

    pub fn from_dense_actions(alg: Arc<Algebra>, left: Vec<Mat>, right: Vec<Mat>) -> Result<Bimodule> {
        let dim = left.first().map(|m| m.rows).unwrap_or(0);
        Bimodule::new(
            alg,
            dim,
            left.iter().map(ColMat::from_dense).collect(),
            right.iter().map(ColMat::from_dense).collect(),
        )
    }

    fn validate(&self) -> Result<()> {
        let d = self.alg.dim;
        if self.left.len() != d || self.right.len() != d {
            return Err(WbError::DimMismatch("one action matrix per algebra basis element".into()));
        }
        for m in self.left.iter().chain(&self.right) {
            if m.rows != self.dim || m.cols() != self.dim {
                return Err(WbError::DimMismatch("action matrix shape".into()));
            }
        }
        // unitality
        if !self.left_of(&self.alg.unit_svec()).is_identity()
            || !self.right_of(&self.alg.unit_svec()).is_identity()
        {
            return Err(WbError::Validation("action not unital".into()));
        }
        for i in 0..d {
            for j in 0..d {
                let prod = SVec::from_dense(self.alg.mul_basis(i, j));
                // left action: lam(e_i e_j) = lam(e_i) lam(e_j)
                let lhs = self.left_of(&prod);
                let rhs = self.left[i].compose(&self.left[j])?;
                if lhs != rhs {
                    return Err(WbError::Validation(format!(
                        "left action not multiplicative at ({i},{j})"
                    )));
                }
                // right action: rho(e_i e_j) = rho(e_j) rho(e_i)
                let rhs = self.right[j].compose(&self.right[i])?;
                if self.right_of(&prod) != rhs {
                    return Err(WbError::Validation(format!(
                        "right action not multiplicative at ({i},{j})"
                    )));
                }
                // commutation of the two actions
                if self.left[i].compose(&self.right[j])? != self.right[j].compose(&self.left[i])? {
                    return Err(WbError::Validation(format!(
                        "left and right actions do not commute at ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.alg.field
    }

    pub fn left_mat(&self, i: usize) -> &ColMat {
        &self.left[i]
    }

    pub fn right_mat(&self, i: usize) -> &ColMat {
        &self.right[i]
    }

    /// Action of an arbitrary algebra element on the left.
    pub fn left_of(&self, a: &SVec) -> ColMat {
        let mut out = ColMat::zeros(self.field(), self.dim, self.dim);
        for (i, c) in &a.entries {
            out = out.add(&self.left[*i].scale(c)).expect("shape");
        }
        out
    }

    pub fn right_of(&self, a: &SVec) -> ColMat {
        let mut out = ColMat::zeros(self.field(), self.dim, self.dim);
        for (i, c) in &a.entries {
            out = out.add(&self.right[*i].scale(c)).expect("shape");
        }
        out
    }

    pub fn act_left(&self, i: usize, v: &SVec) -> SVec {
        self.left[i].apply(v)
    }

    pub fn act_right(&self, i: usize, v: &SVec) -> SVec {
        self.right[i].apply(v)
    }

    /// `a . v` for an arbitrary algebra element, without materializing the
    /// combined action matrix.
    pub fn apply_left_elem(&self, a: &SVec, v: &SVec) -> SVec {
        let mut out = SVec::zero();
        for (t, c) in &a.entries {
            out = out.add_scaled(c, &self.left[*t].apply(v));
        }
        out
    }

    pub fn apply_right_elem(&self, a: &SVec, v: &SVec) -> SVec {
        let mut out = SVec::zero();
        for (t, c) in &a.entries {
            out = out.add_scaled(c, &self.right[*t].apply(v));
        }
        out
    }

    /// `A` acting on itself by multiplication on both sides.
    pub fn regular(alg: Arc<Algebra>) -> Bimodule {
        let d = alg.dim;
        let left = (0..d).map(|i| ColMat::from_dense(&alg.left_mult(i))).collect();
        let right = (0..d).map(|i| ColMat::from_dense(&alg.right_mult(i))).collect();
        Bimodule::new(alg, d, left, right).expect("regular bimodule is valid")
    }

    /// `A (x)_K A` with the outer actions (left on the first factor, right
    /// on the second); basis `e_i (x) e_j -> i * dim + j`.
    pub fn outer_square(alg: Arc<Algebra>) -> Bimodule {
        let d = alg.dim;
        let id = Mat::identity(alg.field, d);
        let left = (0..d).map(|i| ColMat::from_dense(&alg.left_mult(i).kron(&id))).collect();
        let right = (0..d).map(|i| ColMat::from_dense(&id.kron(&alg.right_mult(i)))).collect();
        Bimodule::new(alg, d * d, left, right).expect("outer square is valid")
    }

    pub fn same_shape_as(&self, other: &Bimodule) -> bool {
        self.dim == other.dim && Arc::ptr_eq(&self.alg, &other.alg)
    }
}

/// A linear map intertwining both actions.
#[derive(Debug, Clone)]
pub struct BimoduleMap {
    pub source: Bimodule,
    pub target: Bimodule,
    pub matrix: ColMat,
}

impl BimoduleMap {
    pub fn new(source: Bimodule, target: Bimodule, matrix: ColMat) -> Result<BimoduleMap> {
        if matrix.cols() != source.dim || matrix.rows != target.dim {
            return Err(WbError::DimMismatch("bimodule map shape".into()));
        }
        for i in 0..source.alg.dim {
            if matrix.compose(source.left_mat(i))? != target.left_mat(i).compose(&matrix)? {
                return Err(WbError::Validation(format!(
                    "map does not intertwine the left action of basis element {i}"
                )));
            }
            if matrix.compose(source.right_mat(i))? != target.right_mat(i).compose(&matrix)? {
                return Err(WbError::Validation(format!(
                    "map does not intertwine the right action of basis element {i}"
                )));
            }
        }
        Ok(BimoduleMap { source, target, matrix })
    }

    pub fn is_invertible(&self) -> bool {
        self.matrix.rows == self.matrix.cols() && self.matrix.rank() == self.matrix.rows
    }
}

/// A bimodule presented as a subquotient of a K-tensor ambient space.
#[derive(Debug, Clone)]
pub struct ConstructedBimodule {
    pub space: Bimodule,
    pub pres: Subquotient,
    pub ambient_factors: Vec<usize>,
}

/// Left-associated iterated tensor product over `A`:
/// `base (x)_A f_1 (x)_A ... (x)_A f_k`, with per-level presentations.
#[derive(Debug, Clone)]
pub struct ChainTower {
    pub alg: Arc<Algebra>,
    levels: Vec<Level>,
}

#[derive(Debug, Clone)]
struct Level {
    space: Bimodule,
    /// Presentation over `(previous level basis) x (new factor)` coordinates;
    /// `None` at level 0.
    pres: Option<Subquotient>,
    /// Expansion of each basis vector into the full K-tensor ambient space.
    expansion: Vec<SVec>,
    /// K-tensor factor dimensions accumulated so far.
    factor_dims: Vec<usize>,
}

impl ChainTower {
    pub fn new(base: Bimodule) -> ChainTower {
        let field = base.field();
        let expansion = (0..base.dim).map(|i| SVec::unit(i, field)).collect();
        let factor_dims = vec![base.dim];
        ChainTower {
            alg: base.alg.clone(),
            levels: vec![Level { space: base, pres: None, expansion, factor_dims }],
        }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn space(&self, level: usize) -> &Bimodule {
        &self.levels[level].space
    }

    pub fn pres(&self, level: usize) -> Option<&Subquotient> {
        self.levels[level].pres.as_ref()
    }

    pub fn factor_dims(&self, level: usize) -> &[usize] {
        &self.levels[level].factor_dims
    }

    /// Expansion of the `b`-th basis vector of `level` into the K-tensor
    /// ambient space.
    pub fn expansion(&self, level: usize, b: usize) -> &SVec {
        &self.levels[level].expansion[b]
    }

    pub fn expand(&self, level: usize, v: &SVec) -> SVec {
        let mut out = SVec::zero();
        for (b, c) in &v.entries {
            out = out.add_scaled(c, self.expansion(level, *b));
        }
        out
    }

    /// Appends `(x)_A factor` to the chain.
    pub fn extend(&mut self, factor: &Bimodule) -> Result<()> {
        if !Arc::ptr_eq(&self.alg, &factor.alg) && *self.alg != *factor.alg {
            return Err(WbError::BadInput("tensor over A requires the same algebra".into()));
        }
        let field = factor.field();
        let prev = self.levels.last().expect("nonempty");
        let (pd, fd) = (prev.space.dim, factor.dim);
        let ambient = pd * fd;
        // middle relations (m . a) (x) n - m (x) (a . n)
        let mut relations = Vec::new();
        for t in 0..self.alg.dim {
            let rt = prev.space.right_mat(t);
            let lt = factor.left_mat(t);
            for i in 0..pd {
                for j in 0..fd {
                    let a = rt.cols_v[i].map_indices(|k| k * fd + j);
                    let b = lt.cols_v[j].map_indices(|l| i * fd + l);
                    let r = a.sub(&b);
                    if !r.is_zero() {
                        relations.push(r);
                    }
                }
            }
        }
        let pres = Subquotient::cokernel(field, ambient, relations);
        let q = pres.dim();
        // induced outer actions, with descent verified by induced_map
        let mut left = Vec::with_capacity(self.alg.dim);
        let mut right = Vec::with_capacity(self.alg.dim);
        for t in 0..self.alg.dim {
            let lt = prev.space.left_mat(t);
            let amb_left = ColMat {
                field,
                rows: ambient,
                cols_v: (0..ambient)
                    .map(|x| {
                        let (i, j) = (x / fd, x % fd);
                        lt.cols_v[i].map_indices(|k| k * fd + j)
                    })
                    .collect(),
            };
            left.push(Subquotient::induced_map(&pres, &pres, &amb_left)?);
            let rt = factor.right_mat(t);
            let amb_right = ColMat {
                field,
                rows: ambient,
                cols_v: (0..ambient)
                    .map(|x| {
                        let (i, j) = (x / fd, x % fd);
                        rt.cols_v[j].map_indices(|l| i * fd + l)
                    })
                    .collect(),
            };
            right.push(Subquotient::induced_map(&pres, &pres, &amb_right)?);
        }
        let space = Bimodule::new(self.alg.clone(), q, left, right)?;
        // expansions: section rows live in (prev basis) x (factor) coordinates
        let mut expansion = Vec::with_capacity(q);
        let prev_full: usize = prev.factor_dims.iter().product();
        for b in 0..q {
            let mut out = SVec::zero();
            for (x, c) in &pres.section(b).entries {
                let (i, j) = (x / fd, x % fd);
                let e = prev.expansion[i].map_indices(|p| p * fd + j);
                out = out.add_scaled(c, &e);
            }
            let _ = prev_full;
            expansion.push(out);
        }
        let mut factor_dims = prev.factor_dims.clone();
        factor_dims.push(fd);
        self.levels.push(Level { space, pres: Some(pres), expansion, factor_dims });
        Ok(())
    }

    /// Canonical projection of a full-K-tensor-ambient vector onto the basis
    /// of `level`, applying the per-level presentations innermost-first.
    pub fn project_full(&self, level: usize, v: &SVec) -> Result<SVec> {
        let dims = &self.levels[level].factor_dims;
        let mut cur = v.clone(); // flat over (f_0, ..., f_level)
        for step in 1..=level {
            let trailing: usize = dims[step + 1..].iter().product();
            let pres = self.levels[step].pres.as_ref().expect("level > 0");
            // group entries by the trailing suffix
            let mut groups: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
            for (idx, c) in cur.entries {
                groups.entry(idx % trailing).or_default().push((idx / trailing, c));
            }
            let mut pairs = Vec::new();
            for (suffix, head) in groups {
                let sub = SVec::from_pairs(head);
                let p = pres.project(&sub)?;
                for (b, c) in p.entries {
                    pairs.push((b * trailing + suffix, c));
                }
            }
            cur = SVec::from_pairs(pairs);
        }
        Ok(cur)
    }

    /// Generators of the kernel of (full K-tensor ambient of `level`) ->
    /// (basis of `level`), expanded into the ambient space.  Intended for
    /// small chains; grows with the product of the trailing factor
    /// dimensions.
    pub fn kernel_generators(&self, level: usize) -> Vec<SVec> {
        let mut gens: Vec<SVec> = Vec::new();
        let dims = &self.levels[level].factor_dims;
        for step in 1..=level {
            let trailing: usize = dims[step + 1..].iter().product();
            let pres = self.levels[step].pres.as_ref().expect("level > 0");
            let fd = dims[step];
            for d in pres.denom_basis() {
                // expand the (prev basis) coordinate, keep the factor index
                let mut base = SVec::zero();
                for (x, c) in &d.entries {
                    let (i, j) = (x / fd, x % fd);
                    let e = self.levels[step - 1].expansion[i].map_indices(|p| p * fd + j);
                    base = base.add_scaled(c, &e);
                }
                for suffix in 0..trailing {
                    gens.push(base.map_indices(|p| p * trailing + suffix));
                }
            }
        }
        gens
    }
}

/// `f1 (x)_A f2` as an explicit subquotient of the K-tensor square.
pub fn tensor_over_a(f1: &Bimodule, f2: &Bimodule) -> Result<ConstructedBimodule> {
    let mut tower = ChainTower::new(f1.clone());
    tower.extend(f2)?;
    let pres = tower.pres(1).expect("level 1").clone();
    Ok(ConstructedBimodule {
        space: tower.space(1).clone(),
        pres,
        ambient_factors: vec![f1.dim, f2.dim],
    })
}

/// Space of linear maps intertwining the given pairs `(source action,
/// target action)`: `{ phi : phi . s = t . phi }`.  Maps are flattened
/// row-major: `phi[r][c] -> r * sdim + c`.
pub fn intertwiner_space(
    field: Field,
    sdim: usize,
    tdim: usize,
    pairs: &[(ColMat, ColMat)],
) -> Vec<Mat> {
    let mut rows = Vec::new();
    for (s, t) in pairs {
        // (phi . s - t . phi)[r][c] = sum_k phi[r][k] s[k][c] - sum_k t[r][k] phi[k][c]
        for r in 0..tdim {
            for c in 0..sdim {
                let mut pairs_row: Vec<(usize, Scalar)> = Vec::new();
                for (k, v) in &s.cols_v[c].entries {
                    pairs_row.push((r * sdim + k, v.clone()));
                }
                // t[r][k]: entry r of column k
                for k in 0..tdim {
                    if let Some(v) = t.cols_v[k].get(r) {
                        pairs_row.push((k * sdim + c, v.neg()));
                    }
                }
                let row = SVec::from_pairs(pairs_row);
                if !row.is_zero() {
                    rows.push(row);
                }
            }
        }
    }
    let ker = kernel_of_constraints(field, tdim * sdim, &rows);
    ker.iter()
        .map(|v| {
            let dense = v.to_dense(tdim * sdim, field);
            Mat::from_fn(field, tdim, sdim, |r, c| dense[r * sdim + c].clone())
        })
        .collect()
}

/// Basis (as matrices `D -> M`) of the bimodule maps `Hom_A(D, M)_A`.
pub fn hom_aa(d: &Bimodule, m: &Bimodule) -> Vec<Mat> {
    let mut pairs = Vec::new();
    for t in 0..d.alg.dim {
        pairs.push((d.left_mat(t).clone(), m.left_mat(t).clone()));
        pairs.push((d.right_mat(t).clone(), m.right_mat(t).clone()));
    }
    intertwiner_space(d.field(), d.dim, m.dim, &pairs)
}

/// Trace `F / span{a . f - f . a}` with projection and section.
pub fn trace(f: &Bimodule) -> Subquotient {
    let mut relations = Vec::new();
    for t in 0..f.alg.dim {
        for i in 0..f.dim {
            let r = f.left_mat(t).cols_v[i].sub(&f.right_mat(t).cols_v[i]);
            if !r.is_zero() {
                relations.push(r);
            }
        }
    }
    Subquotient::cokernel(f.field(), f.dim, relations)
}

/// Basis of the center `{z in M : a . z = z . a for all a}`.
pub fn center_submodule(m: &Bimodule) -> Vec<SVec> {
    let mut rows = Vec::new();
    for t in 0..m.alg.dim {
        let diff = m.left_mat(t).sub(m.right_mat(t)).expect("shape");
        // constraints are the rows of diff
        let mut r: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); m.dim];
        for (j, col) in diff.cols_v.iter().enumerate() {
            for (i, c) in &col.entries {
                r[*i].push((j, c.clone()));
            }
        }
        rows.extend(r.into_iter().map(SVec::from_pairs).filter(|v| !v.is_zero()));
    }
    kernel_of_constraints(m.field(), m.dim, &rows)
}

/// Builds the matrix of a map between iterated quotients: `ambient_map` is
/// applied to the stored ambient representative of each source basis vector
/// and the result is pushed through `target_project`.  Every generator of
/// the source kernel must die in the target — verified, not assumed.
pub fn map_on_quotients(
    field: Field,
    target_dim: usize,
    src_basis_reps: &[SVec],
    src_kernel_gens: &[SVec],
    ambient_map: impl Fn(&SVec) -> SVec,
    target_project: impl Fn(&SVec) -> Result<SVec>,
) -> Result<ColMat> {
    for g in src_kernel_gens {
        let img = target_project(&ambient_map(g)).map_err(|_| {
            WbError::NotWellDefined("kernel generator leaves the target subspace".into())
        })?;
        if !img.is_zero() {
            return Err(WbError::NotWellDefined(
                "kernel generator survives in the target quotient".into(),
            ));
        }
    }
    let mut cols = Vec::with_capacity(src_basis_reps.len());
    for rep in src_basis_reps {
        cols.push(target_project(&ambient_map(rep))?);
    }
    Ok(ColMat { field, rows: target_dim, cols_v: cols })
}

/// The flip isomorphism `Tr(f1 (x)_A f2) -> Tr(f2 (x)_A f1)` induced by
/// `f (x) g -> g (x) f` on K-tensor representatives.
pub fn flip_iso(f1: &Bimodule, f2: &Bimodule) -> Result<ColMat> {
    let t12 = tensor_over_a(f1, f2)?;
    let t21 = tensor_over_a(f2, f1)?;
    let tr12 = trace(&t12.space);
    let tr21 = trace(&t21.space);
    let (d1, d2) = (f1.dim, f2.dim);
    let flip = |v: &SVec| v.map_indices(|x| (x % d2) * d1 + x / d2);
    // representatives and kernel generators of Tr(f1 (x) f2) in the K-ambient
    let reps: Vec<SVec> =
        (0..tr12.dim()).map(|b| t12.pres.section_of(tr12.section(b))).collect();
    let mut gens: Vec<SVec> = t12.pres.denom_basis().into_iter().cloned().collect();
    for dnm in tr12.denom_basis() {
        gens.push(t12.pres.section_of(dnm));
    }
    let project = |v: &SVec| -> Result<SVec> { tr21.project(&t21.pres.project(v)?) };
    let m = map_on_quotients(f1.field(), tr21.dim(), &reps, &gens, flip, project)?;
    if m.rows != m.cols() || m.rank() != m.rows {
        return Err(WbError::NotInvertible("trace flip failed to invert".into()));
    }
    Ok(m)
}

/// A right A-module with sparse action matrices per algebra basis element.
#[derive(Debug, Clone)]
pub struct RightModule {
    pub alg: Arc<Algebra>,
    pub dim: usize,
    action: Vec<ColMat>,
}

impl RightModule {
    pub fn new(alg: Arc<Algebra>, dim: usize, action: Vec<ColMat>) -> Result<RightModule> {
        if action.len() != alg.dim {
            return Err(WbError::DimMismatch("one action matrix per algebra basis element".into()));
        }
        for m in &action {
            if m.rows != dim || m.cols() != dim {
                return Err(WbError::DimMismatch("action matrix shape".into()));
            }
        }
        let rm = RightModule { alg, dim, action };
        if !rm.act_of(&rm.alg.unit_svec()).is_identity() {
            return Err(WbError::Validation("right action not unital".into()));
        }
        for i in 0..rm.alg.dim {
            for j in 0..rm.alg.dim {
                let prod = SVec::from_dense(rm.alg.mul_basis(i, j));
                if rm.act_of(&prod) != rm.action[j].compose(&rm.action[i])? {
                    return Err(WbError::Validation(format!(
                        "right action not multiplicative at ({i},{j})"
                    )));
                }
            }
        }
        Ok(rm)
    }

    pub fn field(&self) -> Field {
        self.alg.field
    }

    pub fn act_mat(&self, i: usize) -> &ColMat {
        &self.action[i]
    }

    pub fn act_of(&self, a: &SVec) -> ColMat {
        let mut out = ColMat::zeros(self.field(), self.dim, self.dim);
        for (i, c) in &a.entries {
            out = out.add(&self.action[*i].scale(c)).expect("shape");
        }
        out
    }

    /// `A` as a right module over itself.
    pub fn regular(alg: Arc<Algebra>) -> RightModule {
        let d = alg.dim;
        let action = (0..d).map(|i| ColMat::from_dense(&alg.right_mult(i))).collect();
        RightModule::new(alg, d, action).expect("regular module is valid")
    }

    /// Column space of a matrix algebra (`n x n` matrices acting on row
    /// vectors of length `n` from the right — equivalently the standard
    /// right module of dimension `n`).
    pub fn matrix_columns(alg: Arc<Algebra>, n: usize) -> Result<RightModule> {
        if alg.dim != n * n {
            return Err(WbError::BadInput("expected the full matrix algebra".into()));
        }
        let f = alg.field;
        // basis v_0..v_{n-1}; v_k . e_{rs} = [k == r] v_s
        let action = (0..n * n)
            .map(|x| {
                let (r, s) = (x / n, x % n);
                ColMat {
                    field: f,
                    rows: n,
                    cols_v: (0..n)
                        .map(|k| if k == r { SVec::unit(s, f) } else { SVec::zero() })
                        .collect(),
                }
            })
            .collect();
        RightModule::new(alg, n, action)
    }
}

/// `p (x)_A f` for a right module `p` and a bimodule `f`; the result is a
/// right module via the right action on `f`.
pub fn right_tensor(p: &RightModule, f: &Bimodule) -> Result<(Subquotient, RightModule)> {
    let field = p.field();
    let (pd, fd) = (p.dim, f.dim);
    let mut relations = Vec::new();
    for t in 0..p.alg.dim {
        let rt = p.act_mat(t);
        let lt = f.left_mat(t);
        for i in 0..pd {
            for j in 0..fd {
                let r = rt.cols_v[i].map_indices(|k| k * fd + j)
                    .sub(&lt.cols_v[j].map_indices(|l| i * fd + l));
                if !r.is_zero() {
                    relations.push(r);
                }
            }
        }
    }
    let pres = Subquotient::cokernel(field, pd * fd, relations);
    let mut action = Vec::with_capacity(p.alg.dim);
    for t in 0..p.alg.dim {
        let rt = f.right_mat(t);
        let amb = ColMat {
            field,
            rows: pd * fd,
            cols_v: (0..pd * fd)
                .map(|x| {
                    let (i, j) = (x / fd, x % fd);
                    rt.cols_v[j].map_indices(|l| i * fd + l)
                })
                .collect(),
        };
        action.push(Subquotient::induced_map(&pres, &pres, &amb)?);
    }
    let module = RightModule::new(p.alg.clone(), pres.dim(), action)?;
    Ok((pres, module))
}

/// A left A-module with sparse action matrices per algebra basis element.
#[derive(Debug, Clone)]
pub struct LeftModule {
    pub alg: Arc<Algebra>,
    pub dim: usize,
    action: Vec<ColMat>,
}

impl LeftModule {
    pub fn new(alg: Arc<Algebra>, dim: usize, action: Vec<ColMat>) -> Result<LeftModule> {
        if action.len() != alg.dim {
            return Err(WbError::DimMismatch("one action matrix per algebra basis element".into()));
        }
        for m in &action {
            if m.rows != dim || m.cols() != dim {
                return Err(WbError::DimMismatch("action matrix shape".into()));
            }
        }
        let lm = LeftModule { alg, dim, action };
        if !lm.act_of(&lm.alg.unit_svec()).is_identity() {
            return Err(WbError::Validation("left action not unital".into()));
        }
        for i in 0..lm.alg.dim {
            for j in 0..lm.alg.dim {
                let prod = SVec::from_dense(lm.alg.mul_basis(i, j));
                if lm.act_of(&prod) != lm.action[i].compose(&lm.action[j])? {
                    return Err(WbError::Validation(format!(
                        "left action not multiplicative at ({i},{j})"
                    )));
                }
            }
        }
        Ok(lm)
    }

    pub fn field(&self) -> Field {
        self.alg.field
    }

    pub fn act_mat(&self, i: usize) -> &ColMat {
        &self.action[i]
    }

    pub fn act_of(&self, a: &SVec) -> ColMat {
        let mut out = ColMat::zeros(self.field(), self.dim, self.dim);
        for (i, c) in &a.entries {
            out = out.add(&self.action[*i].scale(c)).expect("shape");
        }
        out
    }
}

/// `f (x)_A q` for a bimodule `f` and a left module `q`; the result is a
/// left module via the left action on `f`.
pub fn left_tensor(f: &Bimodule, q: &LeftModule) -> Result<(Subquotient, LeftModule)> {
    let field = q.field();
    let (fd, qd) = (f.dim, q.dim);
    let mut relations = Vec::new();
    for t in 0..q.alg.dim {
        let rt = f.right_mat(t);
        let lt = q.act_mat(t);
        for i in 0..fd {
            for j in 0..qd {
                let r = rt.cols_v[i].map_indices(|k| k * qd + j)
                    .sub(&lt.cols_v[j].map_indices(|l| i * qd + l));
                if !r.is_zero() {
                    relations.push(r);
                }
            }
        }
    }
    let pres = Subquotient::cokernel(field, fd * qd, relations);
    let mut action = Vec::with_capacity(q.alg.dim);
    for t in 0..q.alg.dim {
        let lt = f.left_mat(t);
        let amb = ColMat {
            field,
            rows: fd * qd,
            cols_v: (0..fd * qd)
                .map(|x| {
                    let (i, j) = (x / qd, x % qd);
                    lt.cols_v[i].map_indices(|k| k * qd + j)
                })
                .collect(),
        };
        action.push(Subquotient::induced_map(&pres, &pres, &amb)?);
    }
    let module = LeftModule::new(q.alg.clone(), pres.dim(), action)?;
    Ok((pres, module))
}

/// Projects the leading mixed-radix block of `v`: flat index `h * trailing
/// + s` with `h` ranging over the presentation's ambient space.
pub fn project_head(pres: &Subquotient, trailing: usize, v: &SVec) -> Result<SVec> {
    let mut groups: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
    for (idx, c) in &v.entries {
        groups.entry(idx % trailing).or_default().push((idx / trailing, c.clone()));
    }
    let mut pairs = Vec::new();
    for (suffix, head) in groups {
        let p = pres.project(&SVec::from_pairs(head))?;
        for (b, c) in p.entries {
            pairs.push((b * trailing + suffix, c));
        }
    }
    Ok(SVec::from_pairs(pairs))
}

/// Reorders the mixed-radix digits of the indices of `v`.  `dims` are the
/// input digit sizes (row-major); output digit `k` is input digit `perm[k]`.
pub fn permute_digits(v: &SVec, dims: &[usize], perm: &[usize]) -> SVec {
    let n = dims.len();
    assert_eq!(perm.len(), n);
    v.map_indices(|mut idx| {
        let mut digits = vec![0usize; n];
        for k in (0..n).rev() {
            digits[k] = idx % dims[k];
            idx /= dims[k];
        }
        let mut out = 0usize;
        for k in 0..n {
            out = out * dims[perm[k]] + digits[perm[k]];
        }
        out
    })
}
