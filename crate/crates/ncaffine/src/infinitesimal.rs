//! Differential filtrations and adic towers.
//!
//! Two dual constructions on finite-dimensional modules.  The increasing
//! filtration takes a bimodule and repeatedly extends by the sub-bimodule
//! generated by the center of the successive quotients; applied to
//! `Hom_K(M, N)` with the action `(a . phi . b)(m) = a . phi(b . m)` its
//! steps are the differential operators of order `<= p`, which on a
//! commutative base agree with the classical bracket recursion ("`[a, D]`
//! has order `<= p - 1`").  The decreasing side takes a module `G` and a
//! two-sided ideal `I` and produces the tower of quotients `G / I^p G`
//! with its connecting surjections; for nilpotent `I` the tower stabilizes
//! at `G` itself.

use crate::algebra::Algebra;
use crate::bimod::{center_submodule, Bimodule, LeftModule};
use crate::exactlin::{
    kernel_of_constraints, ColMat, Echelon, Field, Mat, RowTag, SVec, Subquotient,
};
use crate::{Result, WbError};
use std::sync::Arc;

/// An increasing chain of sub-bimodules `F_0 <= F_1 <= ... <= ambient`,
/// each step stored as an echelonized basis of ambient vectors.
#[derive(Debug, Clone)]
pub struct Filtration {
    pub ambient: Bimodule,
    pub steps: Vec<Vec<SVec>>,
    pub stabilized: bool,
}

impl Filtration {
    /// Dimensions of the recorded steps, starting with `F_0`.
    pub fn dims(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.len()).collect()
    }

    /// Basis of `F_p`; past the last recorded step the filtration is
    /// constant, so the final basis is returned.
    pub fn step(&self, p: usize) -> &[SVec] {
        let i = p.min(self.steps.len() - 1);
        &self.steps[i]
    }
}

/// Smallest sub-bimodule of `m` containing the given vectors: the closure
/// of their span under both actions, echelonized for a deterministic basis.
fn bimodule_closure(m: &Bimodule, gens: &[SVec]) -> Vec<SVec> {
    let mut ech = Echelon::new(m.field(), m.dim);
    let mut frontier: Vec<SVec> = gens.to_vec();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in frontier {
            if ech.insert(v.clone(), RowTag::Denominator).is_some() {
                for t in 0..m.alg.dim {
                    next.push(m.act_left(t, &v));
                    next.push(m.act_right(t, &v));
                }
            }
        }
        frontier = next;
    }
    ech.rows
}

/// The increasing filtration `F_p` of a bimodule: `F_p` is the preimage of
/// the sub-bimodule generated by the center of `ambient / F_{p-1}`, with
/// `F_{-1} = 0`.  Stops at `p_max` or as soon as a step repeats.
pub fn differential_filtration(f: &Bimodule, p_max: usize) -> Result<Filtration> {
    let field = f.field();
    let dim = f.dim;
    let mut steps: Vec<Vec<SVec>> = Vec::new();
    let mut prev: Vec<SVec> = Vec::new();
    let mut stabilized = false;
    for _p in 0..=p_max {
        let q = Subquotient::cokernel(field, dim, prev.iter().cloned());
        let mut left = Vec::with_capacity(f.alg.dim);
        let mut right = Vec::with_capacity(f.alg.dim);
        for t in 0..f.alg.dim {
            left.push(Subquotient::induced_map(&q, &q, f.left_mat(t))?);
            right.push(Subquotient::induced_map(&q, &q, f.right_mat(t))?);
        }
        let qbim = Bimodule::new(f.alg.clone(), q.dim(), left, right)?;
        let central = center_submodule(&qbim);
        let generated = bimodule_closure(&qbim, &central);
        let mut ech = Echelon::new(field, dim);
        for v in &prev {
            ech.insert(v.clone(), RowTag::Denominator);
        }
        for w in &generated {
            ech.insert(q.section_of(w), RowTag::Denominator);
        }
        let cur = ech.rows;
        if cur.len() == prev.len() {
            stabilized = true;
            if steps.is_empty() {
                steps.push(cur);
            }
            break;
        }
        steps.push(cur.clone());
        prev = cur;
        if prev.len() == dim {
            stabilized = true;
            break;
        }
    }
    Ok(Filtration { ambient: f.clone(), steps, stabilized })
}

/// `Hom_K(M, N)` as a bimodule over the common ground algebra: the basis
/// operator with index `r * dim M + c` sends the `c`-th basis vector of `M`
/// to the `r`-th basis vector of `N`, and `(a . phi . b)(m) = a . phi(b . m)`.
pub fn hom_bimodule(m: &LeftModule, n: &LeftModule) -> Result<Bimodule> {
    if !Arc::ptr_eq(&m.alg, &n.alg) {
        return Err(WbError::BadInput("both modules must live over the same algebra".into()));
    }
    let field = m.field();
    let mut left = Vec::with_capacity(m.alg.dim);
    let mut right = Vec::with_capacity(m.alg.dim);
    for t in 0..m.alg.dim {
        let post = n.act_mat(t).to_dense().kron(&Mat::identity(field, m.dim));
        let pre = Mat::identity(field, n.dim).kron(&m.act_mat(t).to_dense().transpose());
        left.push(ColMat::from_dense(&post));
        right.push(ColMat::from_dense(&pre));
    }
    Bimodule::new(m.alg.clone(), m.dim * n.dim, left, right)
}

/// Reads a vector of the hom bimodule back as the matrix of the operator.
pub fn operator_matrix(v: &SVec, m_dim: usize, n_dim: usize, field: Field) -> Mat {
    let mut out = Mat::zeros(field, n_dim, m_dim);
    for (i, c) in &v.entries {
        out.set(i / m_dim, i % m_dim, c.clone());
    }
    out
}

/// Flattens an operator matrix `M -> N` into the hom-bimodule indexing.
pub fn operator_svec(mat: &Mat) -> SVec {
    let mut pairs = Vec::new();
    for r in 0..mat.rows {
        for c in 0..mat.cols {
            let v = mat.get(r, c);
            if !v.is_zero() {
                pairs.push((r * mat.cols + c, v.clone()));
            }
        }
    }
    SVec::from_pairs(pairs)
}

/// Basis of the operators `M -> N` of order `<= p`: step `p` of the
/// filtration of `Hom_K(M, N)`.
pub fn diff_operators(m: &LeftModule, n: &LeftModule, p: usize) -> Result<Vec<SVec>> {
    let hom = hom_bimodule(m, n)?;
    let filt = differential_filtration(&hom, p)?;
    Ok(filt.step(p).to_vec())
}

/// Independent recursion for commutative base algebras: `D` has order
/// `<= p` iff `[a, D] = a . D - D . a` has order `<= p - 1` for every `a`,
/// with order `<= -1` meaning zero.  Computed by iterated preimages.
pub fn grothendieck_oracle(m: &LeftModule, n: &LeftModule, p: usize) -> Result<Vec<SVec>> {
    if !m.alg.is_commutative() {
        return Err(WbError::Validation("the bracket recursion needs a commutative algebra".into()));
    }
    let hom = hom_bimodule(m, n)?;
    let field = hom.field();
    let dim = hom.dim;
    let brackets: Vec<Mat> = (0..hom.alg.dim)
        .map(|t| hom.left_mat(t).sub(hom.right_mat(t)).map(|c| c.to_dense()))
        .collect::<Result<_>>()?;
    let mut cur: Vec<SVec> = Vec::new();
    for _ in 0..=p {
        let q = Subquotient::cokernel(field, dim, cur.iter().cloned());
        let proj = q.proj_mat()?;
        let mut rows = Vec::new();
        for b in &brackets {
            let constraint = proj.mul(b)?;
            for r in 0..constraint.rows {
                let row = constraint.row_svec(r);
                if !row.is_zero() {
                    rows.push(row);
                }
            }
        }
        cur = kernel_of_constraints(field, dim, &rows);
    }
    Ok(cur)
}

/// The quotients `G / I^p G` for `p = 1, 2, ...` together with the
/// connecting surjections, recorded until the power of the ideal repeats
/// or `p_max` is reached.
#[derive(Debug, Clone)]
pub struct Tower {
    pub base_dim: usize,
    pub ideal: Vec<SVec>,
    pub quotients: Vec<Subquotient>,
    /// `maps[k]` is the surjection `G / I^{k+2} G -> G / I^{k+1} G`.
    pub maps: Vec<ColMat>,
    pub stabilized: bool,
}

impl Tower {
    pub fn dims(&self) -> Vec<usize> {
        self.quotients.iter().map(|q| q.dim()).collect()
    }

    /// Dimension of the last recorded quotient; once the tower has
    /// stabilized this is the dimension of the limit.
    pub fn limit_dim(&self) -> usize {
        self.quotients.last().map(|q| q.dim()).unwrap_or(0)
    }
}

/// The adic tower of a left module with respect to a two-sided ideal,
/// given by a spanning set of the ideal inside the algebra.
pub fn adic_tower(g: &LeftModule, i_basis: &[SVec], p_max: usize) -> Result<Tower> {
    let field = g.field();
    let alg: &Algebra = &g.alg;
    let mut ideal_ech = Echelon::new(field, alg.dim);
    for u in i_basis {
        ideal_ech.insert(u.clone(), RowTag::Denominator);
    }
    for t in 0..alg.dim {
        let e = SVec::unit(t, field);
        for u in i_basis {
            if !ideal_ech.contains(&alg.mul(&e, u)) || !ideal_ech.contains(&alg.mul(u, &e)) {
                return Err(WbError::Validation(
                    "the given subspace is not a two-sided ideal".into(),
                ));
            }
        }
    }
    let mut power: Vec<SVec> = (0..g.dim).map(|i| SVec::unit(i, field)).collect();
    let mut quotients = Vec::new();
    let mut stabilized = false;
    for _p in 1..=p_max {
        let mut ech = Echelon::new(field, g.dim);
        for u in i_basis {
            let act = g.act_of(u);
            for w in &power {
                ech.insert(act.apply(w), RowTag::Denominator);
            }
        }
        let next = ech.rows;
        if next.len() == power.len() {
            stabilized = true;
            if quotients.is_empty() {
                quotients.push(Subquotient::cokernel(field, g.dim, next));
            }
            break;
        }
        quotients.push(Subquotient::cokernel(field, g.dim, next.iter().cloned()));
        power = next;
    }
    let mut maps = Vec::new();
    for k in 0..quotients.len().saturating_sub(1) {
        let fine = &quotients[k + 1];
        let coarse = &quotients[k];
        let cols: Vec<SVec> = (0..fine.dim())
            .map(|j| coarse.project(fine.section(j)))
            .collect::<Result<_>>()?;
        maps.push(ColMat { field, rows: coarse.dim(), cols_v: cols });
    }
    Ok(Tower { base_dim: g.dim, ideal: i_basis.to_vec(), quotients, maps, stabilized })
}
