//! Morita theory through convolution representations.
//!
//! A progenerator (finitely generated projective generator) right module `P`
//! over `A` yields a representation of its endomorphism ring `B = End(P)_A`
//! on the coalgebra `P* (x)_K P`, and a dual representation of `A` over `B`
//! on `P (x)_K P*`.  Composing the two in either order recovers the Sweedler
//! coalgebras of `A` and of `B`; together with the bimodule isomorphisms
//! `P* (x)_B P = A` and `P (x)_A P* = B` this certifies the Morita
//! equivalence mechanically, with every candidate map verified to descend.

use std::sync::Arc;

use crate::algebra::Algebra;
use crate::bimod::{intertwiner_space, map_on_quotients, RightModule};
use crate::coalg::{
    compose_representations, endomorphism_coalgebra, flatten_mat, is_coalgebra_iso,
    make_representation, sweedler_coalgebra, DualBasis, Representation,
};
use crate::exactlin::{coords_in_span, ColMat, Mat, SVec, Subquotient};
use crate::{Result, WbError};

/// A right module together with evidence that it is a progenerator: a dual
/// basis (projectivity) and coordinates expressing `1` in the trace ideal
/// (generator property).
#[derive(Debug, Clone)]
pub struct Progenerator {
    pub module: RightModule,
    pub dual: DualBasis,
    /// Coordinates `c_(s,k)` (flat index `s * dim(P) + k`) with
    /// `sum c_(s,k) phi_s(p_k) = 1`.
    pub trace_witness: SVec,
}

impl Progenerator {
    pub fn new(module: RightModule) -> Result<Progenerator> {
        let field = module.field();
        let dual = crate::coalg::dual_basis(&module)
            .map_err(|e| WbError::Validation(format!("NotProgenerator: {e}")))?;
        let n = module.dim;
        let mut evals = Vec::with_capacity(dual.hom_basis.len() * n);
        for h in &dual.hom_basis {
            for k in 0..n {
                evals.push(h.col_svec(k));
            }
        }
        let trace_witness =
            coords_in_span(field, module.alg.dim, &evals, &module.alg.unit_svec()).ok_or_else(
                || {
                    WbError::Validation(
                        "NotProgenerator: the unit is not in the trace ideal".into(),
                    )
                },
            )?;
        Ok(Progenerator { module, dual, trace_witness })
    }
}

/// Basis of `End(P)_A` as matrices on `P`.
pub fn endo_space(p: &RightModule) -> Vec<Mat> {
    let pairs: Vec<(ColMat, ColMat)> =
        (0..p.alg.dim).map(|t| (p.act_mat(t).clone(), p.act_mat(t).clone())).collect();
    intertwiner_space(p.field(), p.dim, p.dim, &pairs)
}

/// The endomorphism ring `B = End(P)_A` as an abstract algebra on the
/// computed matrix basis, with multiplication by composition.
pub fn endomorphism_ring(p: &RightModule) -> Result<(Arc<Algebra>, Vec<Mat>)> {
    let field = p.field();
    let endos = endo_space(p);
    let b = endos.len();
    let flat: Vec<SVec> = endos.iter().map(flatten_mat).collect();
    let ambient = p.dim * p.dim;
    let coords = |m: &Mat| -> Result<SVec> {
        coords_in_span(field, ambient, &flat, &flatten_mat(m))
            .ok_or_else(|| WbError::Validation("composite leaves the endomorphism span".into()))
    };
    let mut sc = Vec::with_capacity(b * b);
    for i in 0..b {
        for j in 0..b {
            sc.push(coords(&endos[i].mul(&endos[j])?)?.to_dense(b, field));
        }
    }
    let unit = coords(&Mat::identity(field, p.dim))?.to_dense(b, field);
    Ok((Algebra::new(field, b, sc, unit)?.shared(), endos))
}

/// The Morita representation of a progenerator: `B = End(P)_A` represented
/// on `D = P* (x)_K P` by `f_b(phi (x) p) = phi(b(p))`.
#[derive(Debug, Clone)]
pub struct MoritaRepresentation {
    pub rep: Representation,
    /// Matrix basis of `B` on `P`, in the order used by `rep.ring`.
    pub endo_basis: Vec<Mat>,
    /// Dual basis of `P`; `rep.coalg` uses the basis `h_s (x) p_k`.
    pub dual: DualBasis,
}

pub fn morita_representation(p: &Progenerator) -> Result<MoritaRepresentation> {
    let field = p.module.field();
    let (ring, endos) = endomorphism_ring(&p.module)?;
    let (coalg, dual) = endomorphism_coalgebra(&p.module)?;
    let n = p.module.dim;
    let m = dual.hom_basis.len();
    let da = p.module.alg.dim;
    let mut functionals = Vec::with_capacity(endos.len());
    for g in &endos {
        let mut cols = Vec::with_capacity(m * n);
        for s in 0..m {
            for k in 0..n {
                let mut v = SVec::zero();
                for (r, c) in &g.col_svec(k).entries {
                    v = v.add_scaled(c, &dual.hom_basis[s].col_svec(*r));
                }
                cols.push(v);
            }
        }
        functionals.push(Mat::from_cols(field, da, &cols));
    }
    let rep = make_representation(ring, coalg.shared(), functionals)?;
    Ok(MoritaRepresentation { rep, endo_basis: endos, dual })
}

/// The dual side of a Morita context: `P*` as a right `B`-module, the
/// representation of `A` on `Q* (x)_K Q` for `Q = P*`, and the change-of-
/// leg data identifying `Q*` with `P` and elementary tensors `p . phi`
/// with elements of `B`.
struct DualSide {
    rep: Representation,
    /// `endo_b[k][s]` = `B`-coordinates of the endomorphism `q -> p_k . phi_s(q)`.
    endo_b: Vec<Vec<SVec>>,
    /// `pcoords[s2]` = coordinates in `P` of the `Q*`-basis functional `psi_(s2)`.
    pcoords: Vec<SVec>,
    /// Left `A`-action on `P*`: `lact[t]` col `s` = coordinates of `e_t . phi_s`.
    lact: Vec<ColMat>,
}

fn dual_side(p: &Progenerator, mrep: &MoritaRepresentation) -> Result<DualSide> {
    let field = p.module.field();
    let alg = p.module.alg.clone();
    let (da, n) = (alg.dim, p.module.dim);
    let hb = &mrep.dual.hom_basis;
    let m = hb.len();
    let ring = mrep.rep.ring.clone();
    let b = ring.dim;
    let flat_hb: Vec<SVec> = hb.iter().map(flatten_mat).collect();
    let hom_coords = |mat: &Mat| -> Result<SVec> {
        coords_in_span(field, da * n, &flat_hb, &flatten_mat(mat))
            .ok_or_else(|| WbError::Validation("map leaves the dual space".into()))
    };
    // Q = P* as a right B-module: phi . b = phi o b
    let mut qact = Vec::with_capacity(b);
    for g in &mrep.endo_basis {
        let mut cols = Vec::with_capacity(m);
        for h in hb {
            cols.push(hom_coords(&h.mul(g)?)?);
        }
        qact.push(ColMat { field, rows: m, cols_v: cols });
    }
    let q = RightModule::new(ring.clone(), m, qact)?;
    let (ecoalg, edual) = endomorphism_coalgebra(&q)?;
    // left A-action on P*: (a . phi)(q) = a phi(q)
    let mut lact = Vec::with_capacity(da);
    for t in 0..da {
        let lt = alg.left_mult(t);
        let mut cols = Vec::with_capacity(m);
        for h in hb {
            cols.push(hom_coords(&lt.mul(h)?)?);
        }
        lact.push(ColMat { field, rows: m, cols_v: cols });
    }
    // functionals of the A-representation: f_a(psi (x) phi) = psi(a . phi)
    let hb2 = &edual.hom_basis;
    let m2 = hb2.len();
    let mut functionals = Vec::with_capacity(da);
    for t in 0..da {
        let mut cols = Vec::with_capacity(m2 * m);
        for s2 in 0..m2 {
            for s in 0..m {
                let mut v = SVec::zero();
                for (r, c) in &lact[t].cols_v[s].entries {
                    v = v.add_scaled(c, &hb2[s2].col_svec(*r));
                }
                cols.push(v);
            }
        }
        functionals.push(Mat::from_cols(field, b, &cols));
    }
    let rep = make_representation(alg.clone(), ecoalg.shared(), functionals)?;
    // endo_b[k][s] and the identification Q* = P through p -> (phi -> p . phi)
    let flat_endos: Vec<SVec> = mrep.endo_basis.iter().map(flatten_mat).collect();
    let mut endo_b = Vec::with_capacity(n);
    let mut iota_flat = Vec::with_capacity(n);
    for k in 0..n {
        let mut row = Vec::with_capacity(m);
        for s in 0..m {
            // matrix of q -> p_k . phi_s(q) on P
            let cols: Vec<SVec> = (0..n)
                .map(|r| {
                    let mut out = SVec::zero();
                    for (t, c) in &hb[s].col_svec(r).entries {
                        out = out.add_scaled(c, &p.module.act_mat(*t).cols_v[k]);
                    }
                    out
                })
                .collect();
            let mat = Mat::from_cols(field, n, &cols);
            let coords = coords_in_span(field, n * n, &flat_endos, &flatten_mat(&mat))
                .ok_or_else(|| {
                    WbError::Validation("elementary tensor is not an endomorphism".into())
                })?;
            row.push(coords);
        }
        let iota = Mat::from_cols(
            field,
            b,
            &row.iter().map(|c| c.clone()).collect::<Vec<_>>(),
        );
        iota_flat.push(flatten_mat(&iota));
        endo_b.push(row);
    }
    let mut pcoords = Vec::with_capacity(m2);
    for h2 in hb2 {
        let c = coords_in_span(field, b * m, &iota_flat, &flatten_mat(h2)).ok_or_else(|| {
            WbError::NotInvertible("Q* is larger than the canonical image of P".into())
        })?;
        pcoords.push(c);
    }
    Ok(DualSide { rep, endo_b, pcoords, lact })
}

/// Outcome of the full Morita-equivalence verification, in check order.
/// `first_failure` names the first candidate isomorphism that failed.
#[derive(Debug, Clone)]
pub struct MoritaReport {
    pub ring_b: Arc<Algebra>,
    /// `(P (x) P*) (x)_{B^e} (P* (x) P)` is the Sweedler coalgebra of `A`.
    pub composite_over_base: bool,
    /// `(P* (x) P) (x)_{A^e} (P (x) P*)` is the Sweedler coalgebra of `B`.
    pub composite_over_endos: bool,
    pub dual_pair_dim: usize,
    /// `P* (x)_B P = A` via evaluation.
    pub dual_pair_to_base: bool,
    pub pair_dim: usize,
    /// `P (x)_A P* = B` via `p (x) phi -> (q -> p . phi(q))`.
    pub pair_to_endos: bool,
    pub first_failure: Option<String>,
}

impl MoritaReport {
    pub fn ok(&self) -> bool {
        self.first_failure.is_none()
    }
}

pub fn verify_morita_equivalence(p: &Progenerator) -> Result<MoritaReport> {
    let field = p.module.field();
    let alg = p.module.alg.clone();
    let (da, n) = (alg.dim, p.module.dim);
    let mrep = morita_representation(p)?;
    let ring = mrep.rep.ring.clone();
    let b = ring.dim;
    let hb = &mrep.dual.hom_basis;
    let m = hb.len();
    let side = dual_side(p, &mrep)?;
    let dd = mrep.rep.coalg.dim();
    let de = side.rep.coalg.dim();
    let mut failures: Vec<String> = Vec::new();

    // composite E (x)_{B^e} D against A (x) A
    let sweed_a = sweedler_coalgebra(&alg);
    let (comp_a, pres_a) = compose_representations(&side.rep, &mrep.rep)?;
    let cand_a = |v: &SVec| -> SVec {
        let mut out = SVec::zero();
        for (x, c) in &v.entries {
            let (ie, jd) = (x / dd, x % dd);
            let (s2, s) = (ie / m, ie % m);
            let (sp, k) = (jd / n, jd % n);
            let mut a1 = SVec::zero();
            for (u, cu) in &side.pcoords[s2].entries {
                a1 = a1.add_scaled(cu, &hb[sp].col_svec(*u));
            }
            let a2 = hb[s].col_svec(k);
            for (r1, c1) in &a1.entries {
                for (r2, c2) in &a2.entries {
                    out = out.add_scaled(
                        &c.mul(c1).mul(c2),
                        &SVec::unit(r1 * da + r2, field),
                    );
                }
            }
        }
        out
    };
    let composite_over_base = match pairing_iso(&pres_a, da * da, cand_a) {
        Some(mat) => is_coalgebra_iso(&comp_a.coalg, &sweed_a, &mat),
        None => false,
    };
    if !composite_over_base {
        failures.push("composite over the base ring is not A (x) A".into());
    }

    // composite D (x)_{A^e} E against B (x) B
    let sweed_b = sweedler_coalgebra(&ring);
    let (comp_b, pres_b) = compose_representations(&mrep.rep, &side.rep)?;
    let cand_b = |v: &SVec| -> SVec {
        let mut out = SVec::zero();
        for (x, c) in &v.entries {
            let (jd, ie) = (x / de, x % de);
            let (sp, k) = (jd / n, jd % n);
            let (s2, s) = (ie / m, ie % m);
            let mut b1 = SVec::zero();
            for (u, cu) in &side.pcoords[s2].entries {
                b1 = b1.add_scaled(cu, &side.endo_b[*u][sp]);
            }
            let b2 = &side.endo_b[k][s];
            for (r1, c1) in &b1.entries {
                for (r2, c2) in &b2.entries {
                    out = out.add_scaled(&c.mul(c1).mul(c2), &SVec::unit(r1 * b + r2, field));
                }
            }
        }
        out
    };
    let composite_over_endos = match pairing_iso(&pres_b, b * b, cand_b) {
        Some(mat) => is_coalgebra_iso(&comp_b.coalg, &sweed_b, &mat),
        None => false,
    };
    if !composite_over_endos {
        failures.push("composite over the endomorphism ring is not B (x) B".into());
    }

    // P* (x)_B P -> A by evaluation
    let mut rels = Vec::new();
    for g in &mrep.endo_basis {
        for s in 0..m {
            for k in 0..n {
                let lhs = {
                    // (phi_s . g_u) (x) p_k
                    let mut out = SVec::zero();
                    let c = coords_in_span(
                        field,
                        da * n,
                        &hb.iter().map(flatten_mat).collect::<Vec<_>>(),
                        &flatten_mat(&hb[s].mul(g)?),
                    )
                    .expect("right action preserves the dual space");
                    for (r, cr) in &c.entries {
                        out = out.add_scaled(cr, &SVec::unit(r * n + k, field));
                    }
                    out
                };
                let rhs = g.col_svec(k).map_indices(|r| s * n + r);
                let rel = lhs.sub(&rhs);
                if !rel.is_zero() {
                    rels.push(rel);
                }
            }
        }
    }
    let dual_pair = Subquotient::cokernel(field, m * n, rels);
    let dual_pair_dim = dual_pair.dim();
    let reps: Vec<SVec> = (0..dual_pair_dim).map(|i| dual_pair.section(i).clone()).collect();
    let gens: Vec<SVec> = dual_pair.denom_basis().into_iter().cloned().collect();
    let eval = |v: &SVec| -> SVec {
        let mut out = SVec::zero();
        for (x, c) in &v.entries {
            let (s, k) = (x / n, x % n);
            out = out.add_scaled(c, &hb[s].col_svec(k));
        }
        out
    };
    let dual_pair_to_base =
        match map_on_quotients(field, da, &reps, &gens, eval, |v| Ok(v.clone())) {
            Ok(mat) => dual_pair_dim == da && mat.rank() == da,
            Err(_) => false,
        };
    if !dual_pair_to_base {
        failures.push("P* (x)_B P is not A".into());
    }

    // P (x)_A P* -> B by p (x) phi -> (q -> p . phi(q))
    let mut rels = Vec::new();
    for t in 0..da {
        for k in 0..n {
            for s in 0..m {
                let lhs = p.module.act_mat(t).cols_v[k].map_indices(|r| r * m + s);
                let rhs = side.lact[t].cols_v[s].map_indices(|r| k * m + r);
                let rel = lhs.sub(&rhs);
                if !rel.is_zero() {
                    rels.push(rel);
                }
            }
        }
    }
    let pair = Subquotient::cokernel(field, n * m, rels);
    let pair_dim = pair.dim();
    let reps: Vec<SVec> = (0..pair_dim).map(|i| pair.section(i).clone()).collect();
    let gens: Vec<SVec> = pair.denom_basis().into_iter().cloned().collect();
    let to_endo = |v: &SVec| -> SVec {
        let mut out = SVec::zero();
        for (x, c) in &v.entries {
            let (k, s) = (x / m, x % m);
            out = out.add_scaled(c, &side.endo_b[k][s]);
        }
        out
    };
    let pair_to_endos =
        match map_on_quotients(field, b, &reps, &gens, to_endo, |v| Ok(v.clone())) {
            Ok(mat) => pair_dim == b && mat.rank() == b,
            Err(_) => false,
        };
    if !pair_to_endos {
        failures.push("P (x)_A P* is not B".into());
    }

    Ok(MoritaReport {
        ring_b: ring,
        composite_over_base,
        composite_over_endos,
        dual_pair_dim,
        dual_pair_to_base,
        pair_dim,
        pair_to_endos,
        first_failure: failures.into_iter().next(),
    })
}

/// Applies an ambient candidate map to the sections of a presentation,
/// returning the matrix if the map kills every denominator generator.
fn pairing_iso(
    pres: &Subquotient,
    rows: usize,
    f: impl Fn(&SVec) -> SVec,
) -> Option<ColMat> {
    for g in pres.denom_basis() {
        if !f(g).is_zero() {
            return None;
        }
    }
    let field = pres.field();
    let cols_v: Vec<SVec> = (0..pres.dim()).map(|i| f(pres.section(i))).collect();
    Some(ColMat { field, rows, cols_v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;

    fn dual_numbers(field: Field) -> Algebra {
        Algebra::truncated_polynomial(field, 2)
    }

    #[test]
    fn regular_module_is_progenerator() {
        let a = dual_numbers(Field::Q).shared();
        let p = Progenerator::new(RightModule::regular(a.clone())).unwrap();
        // the witness really expands the unit
        let n = p.module.dim;
        let mut one = SVec::zero();
        for (x, c) in &p.trace_witness.entries {
            let (s, k) = (x / n, x % n);
            one = one.add_scaled(c, &p.dual.hom_basis[s].col_svec(k));
        }
        assert_eq!(one, a.unit_svec());
        let report = verify_morita_equivalence(&p).unwrap();
        assert!(report.ok(), "{:?}", report.first_failure);
        // End(A)_A is A itself
        assert_eq!(report.ring_b.dim, a.dim);
    }

    #[test]
    fn plane_over_the_rationals() {
        let k = Algebra::truncated_polynomial(Field::Q, 1).shared();
        let p = Progenerator::new(
            RightModule::new(k, 2, vec![ColMat::identity(Field::Q, 2)]).unwrap(),
        )
        .unwrap();
        let report = verify_morita_equivalence(&p).unwrap();
        assert!(report.ok(), "{:?}", report.first_failure);
        assert_eq!(report.ring_b.dim, 4); // B = M_2(Q)
        assert_eq!(report.dual_pair_dim, 1); // P* (x)_B P is one-dimensional
    }

    #[test]
    fn matrix_columns_are_a_progenerator() {
        let a = Algebra::matrix_algebra(Field::Q, 2).shared();
        let p = Progenerator::new(RightModule::matrix_columns(a, 2).unwrap()).unwrap();
        let report = verify_morita_equivalence(&p).unwrap();
        assert!(report.ok(), "{:?}", report.first_failure);
        assert_eq!(report.ring_b.dim, 1);
        assert_eq!(report.pair_dim, 1);
    }

    #[test]
    fn mixed_progenerator_over_a_product() {
        // A = K x K, P = A + (K x 0): projective generator with End of dim 5
        let f = Field::Q;
        let a = Algebra::function_algebra(f, 2).shared();
        let mut act0 = ColMat::zeros(f, 3, 3);
        act0.cols_v[0] = SVec::unit(0, f);
        act0.cols_v[2] = SVec::unit(2, f);
        let mut act1 = ColMat::zeros(f, 3, 3);
        act1.cols_v[1] = SVec::unit(1, f);
        let p = Progenerator::new(RightModule::new(a, 3, vec![act0, act1]).unwrap()).unwrap();
        let report = verify_morita_equivalence(&p).unwrap();
        assert!(report.ok(), "{:?}", report.first_failure);
        assert_eq!(report.ring_b.dim, 5); // M_2(K) x K
    }

    #[test]
    fn non_generator_is_rejected() {
        let f = Field::Q;
        let a = Algebra::function_algebra(f, 2).shared();
        let act0 = ColMat::identity(f, 1);
        let act1 = ColMat::zeros(f, 1, 1);
        let m = RightModule::new(a, 1, vec![act0, act1]).unwrap();
        let err = Progenerator::new(m).unwrap_err();
        assert!(err.to_string().contains("NotProgenerator"), "{err}");
    }
}
