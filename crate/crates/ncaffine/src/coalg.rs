//! Coalgebras internal to the category of A-bimodules: comultiplication
//! lands in the computed presentation of `D (x)_A D`, and every structure
//! map or Sweedler-style element formula is pushed through the subquotient
//! presentations with an explicit well-definedness check.
//!
//! Also here: convolution rings `Hom_A(D,A)_A`, representations of a ring
//! `B` by functionals on `D`, their composition, the four induced functors
//! with their projection and trace-adjunction maps, cotensor products of
//! bicomodules, and dual comodules of projective comodules.

use crate::algebra::{is_algebra_iso, Algebra};
use crate::bimod::{
    hom_aa, left_tensor, map_on_quotients, permute_digits, project_head, right_tensor,
    tensor_over_a, Bimodule, BimoduleMap, ChainTower, ConstructedBimodule, LeftModule,
    RightModule,
};
use crate::exactlin::{coords_in_span, ColMat, Field, Mat, SVec, Scalar, Subquotient};
use crate::{Result, WbError};
use std::sync::Arc;

/// A coalgebra in the category of A-bimodules: carrier `D`, comultiplication
/// `D -> D (x)_A D` (stored against the computed presentation of the tensor
/// square) and counit `D -> A`.
#[derive(Debug, Clone)]
pub struct Coalgebra {
    pub carrier: Bimodule,
    pub square: ConstructedBimodule,
    /// Columns over the basis of the presented tensor square.
    pub comult: ColMat,
    /// Columns over the basis of `A`.
    pub counit: ColMat,
    comult_amb: Vec<SVec>,
}

impl Coalgebra {
    pub fn new(carrier: Bimodule, comult: ColMat, counit: ColMat) -> Result<Coalgebra> {
        let square = tensor_over_a(&carrier, &carrier)?;
        Coalgebra::from_parts(carrier, square, comult, counit)
    }

    /// Builds a coalgebra from comultiplication columns given in the
    /// K-tensor ambient space of `D (x) D`.  `kernel_cols` are the ambient
    /// comultiplication images of generators of the kernel of whatever
    /// quotient the carrier basis came from; they must die in the presented
    /// tensor square.
    pub fn from_ambient_comult(
        carrier: Bimodule,
        ambient_cols: Vec<SVec>,
        kernel_cols: Vec<SVec>,
        counit: ColMat,
    ) -> Result<Coalgebra> {
        let square = tensor_over_a(&carrier, &carrier)?;
        for k in &kernel_cols {
            if !square.pres.project(k)?.is_zero() {
                return Err(WbError::NotWellDefined(
                    "comultiplication does not descend to the carrier".into(),
                ));
            }
        }
        let mut cols = Vec::with_capacity(ambient_cols.len());
        for c in &ambient_cols {
            cols.push(square.pres.project(c)?);
        }
        let comult =
            ColMat { field: carrier.field(), rows: square.space.dim, cols_v: cols };
        Coalgebra::from_parts(carrier, square, comult, counit)
    }

    fn from_parts(
        carrier: Bimodule,
        square: ConstructedBimodule,
        comult: ColMat,
        counit: ColMat,
    ) -> Result<Coalgebra> {
        let field = carrier.field();
        let d = carrier.dim;
        if comult.cols() != d || comult.rows != square.space.dim {
            return Err(WbError::DimMismatch("comultiplication shape".into()));
        }
        if counit.cols() != d || counit.rows != carrier.alg.dim {
            return Err(WbError::DimMismatch("counit shape".into()));
        }
        // both structure maps must be bimodule maps
        BimoduleMap::new(carrier.clone(), square.space.clone(), comult.clone())?;
        BimoduleMap::new(carrier.clone(), Bimodule::regular(carrier.alg.clone()), counit.clone())?;
        let comult_amb: Vec<SVec> =
            (0..d).map(|i| square.pres.section_of(&comult.cols_v[i])).collect();
        let c = Coalgebra { carrier, square, comult, counit, comult_amb };
        // counit laws through the unit isomorphisms
        for i in 0..d {
            let mut lhs = SVec::zero();
            let mut rhs = SVec::zero();
            for (xy, co) in &c.comult_amb[i].entries {
                let (x, y) = (xy / d, xy % d);
                let ex = c.counit.cols_v[x].clone();
                let ey = c.counit.cols_v[y].clone();
                lhs = lhs.add_scaled(co, &c.carrier.apply_left_elem(&ex, &SVec::unit(y, field)));
                rhs = rhs.add_scaled(co, &c.carrier.apply_right_elem(&ey, &SVec::unit(x, field)));
            }
            let e = SVec::unit(i, field);
            if lhs != e || rhs != e {
                return Err(WbError::Validation(format!(
                    "CounitFails: counit law breaks on basis element {i}"
                )));
            }
        }
        // coassociativity through the triple tensor presentation
        let mut tower = ChainTower::new(c.carrier.clone());
        tower.extend(&c.carrier)?;
        tower.extend(&c.carrier)?;
        for i in 0..d {
            let mut lhs = SVec::zero();
            let mut rhs = SVec::zero();
            for (xy, co) in &c.comult_amb[i].entries {
                let (x, y) = (xy / d, xy % d);
                lhs = lhs.add_scaled(co, &c.comult_amb[x].map_indices(|z| z * d + y));
                rhs = rhs.add_scaled(co, &c.comult_amb[y].map_indices(|z| x * d * d + z));
            }
            if tower.project_full(2, &lhs)? != tower.project_full(2, &rhs)? {
                return Err(WbError::Validation(format!(
                    "NotCoassociative: fails on basis element {i}"
                )));
            }
        }
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim
    }

    pub fn field(&self) -> Field {
        self.carrier.field()
    }

    pub fn alg(&self) -> &Arc<Algebra> {
        &self.carrier.alg
    }

    /// Comultiplication of the `i`-th basis vector in the K-tensor ambient
    /// space of `D (x) D` (flat index `first * dim + second`).
    pub fn comult_amb(&self, i: usize) -> &SVec {
        &self.comult_amb[i]
    }

    pub fn comult_ambient(&self, v: &SVec) -> SVec {
        let mut out = SVec::zero();
        for (i, c) in &v.entries {
            out = out.add_scaled(c, &self.comult_amb[*i]);
        }
        out
    }

    pub fn counit_of(&self, v: &SVec) -> SVec {
        self.counit.apply(v)
    }

    pub fn shared(self) -> Arc<Coalgebra> {
        Arc::new(self)
    }
}

/// Validated constructor, mirroring [`Coalgebra::new`].
pub fn make_coalgebra(carrier: Bimodule, comult: ColMat, counit: ColMat) -> Result<Coalgebra> {
    Coalgebra::new(carrier, comult, counit)
}

/// `A (x)_K A` with `delta(a1 (x) a2) = (a1 (x) 1) (x) (1 (x) a2)` and
/// counit the multiplication map.
pub fn sweedler_coalgebra(alg: &Arc<Algebra>) -> Coalgebra {
    let d = alg.dim;
    let field = alg.field;
    let carrier = Bimodule::outer_square(alg.clone());
    let unit = alg.unit_svec();
    let mut ambient_cols = Vec::with_capacity(d * d);
    let mut counit_cols = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let mut col = SVec::zero();
            for (k, ck) in &unit.entries {
                for (l, cl) in &unit.entries {
                    let idx = (i * d + k) * d * d + (l * d + j);
                    col = col.add_scaled(&ck.mul(cl), &SVec::unit(idx, field));
                }
            }
            ambient_cols.push(col);
            counit_cols.push(SVec::from_dense(alg.mul_basis(i, j)));
        }
    }
    let counit = ColMat { field, rows: d, cols_v: counit_cols };
    Coalgebra::from_ambient_comult(carrier, ambient_cols, Vec::new(), counit)
        .expect("canonical coalgebra structure on A (x) A")
}

/// A dual basis for a finitely generated projective right module: pairs
/// `(x_j, phi_j)` with `p = sum x_j . phi_j(p)`, where the generators `x_j`
/// are the K-basis vectors and `phi_j` is recorded by its coordinates in
/// the computed basis of `Hom_A(P, A)`.
#[derive(Debug, Clone)]
pub struct DualBasis {
    /// Basis of the right-linear maps `P -> A`, one matrix per basis map.
    pub hom_basis: Vec<Mat>,
    /// `coeffs[j]` = coordinates of `phi_j` in `hom_basis`.
    pub coeffs: Vec<SVec>,
}

impl DualBasis {
    /// `phi_j` assembled as a dense matrix `P -> A`.
    pub fn phi(&self, j: usize, field: Field) -> Mat {
        let (rows, cols) = (self.hom_basis[0].rows, self.hom_basis[0].cols);
        let mut out = Mat::zeros(field, rows, cols);
        for (s, c) in &self.coeffs[j].entries {
            out = out.add(&self.hom_basis[*s].scale(c)).expect("shape");
        }
        out
    }
}

pub(crate) fn flatten_mat(m: &Mat) -> SVec {
    let mut pairs = Vec::new();
    for r in 0..m.rows {
        for c in 0..m.cols {
            let v = m.get(r, c);
            if !v.is_zero() {
                pairs.push((r * m.cols + c, v.clone()));
            }
        }
    }
    SVec::from_pairs(pairs)
}

/// Basis of the right-linear maps `P -> A`.
pub fn right_dual_space(p: &RightModule) -> Vec<Mat> {
    let pairs: Vec<(ColMat, ColMat)> = (0..p.alg.dim)
        .map(|t| (p.act_mat(t).clone(), ColMat::from_dense(&p.alg.right_mult(t))))
        .collect();
    crate::bimod::intertwiner_space(p.field(), p.dim, p.alg.dim, &pairs)
}

/// Computes a dual basis for `p`, or fails if none exists (`p` is not
/// finitely generated projective).
pub fn dual_basis(p: &RightModule) -> Result<DualBasis> {
    let field = p.field();
    let hom_basis = right_dual_space(p);
    let m = hom_basis.len();
    let n = p.dim;
    // unknowns c[j][s]: p_k = sum_{j,s} c[j][s] e_j . h_s(p_k)
    let mut rows = Vec::new();
    for k in 0..n {
        // vector equation over P
        let mut comp: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
        for j in 0..n {
            for (s, h) in hom_basis.iter().enumerate() {
                // e_j . h_s(e_k)
                let a = h.col_svec(k);
                let v = {
                    let mut out = SVec::zero();
                    for (t, ct) in &a.entries {
                        out = out.add_scaled(ct, &p.act_mat(*t).cols_v[j]);
                    }
                    out
                };
                for (r, c) in &v.entries {
                    comp[*r].push((j * m + s, c.clone()));
                }
            }
        }
        for (r, mut pairs) in comp.into_iter().enumerate() {
            if r == k {
                pairs.push((n * m, field.one().neg()));
            }
            let row = SVec::from_pairs(pairs);
            if !row.is_zero() {
                rows.push(row);
            }
        }
    }
    let sol = crate::exactlin::solve_affine(field, n * m, &rows)
        .ok_or_else(|| WbError::Validation("NotProjective: no dual basis exists".into()))?;
    let coeffs = (0..n)
        .map(|j| {
            SVec::from_pairs(
                sol.entries
                    .iter()
                    .filter(|(u, _)| u / m == j)
                    .map(|(u, c)| (u % m, c.clone()))
                    .collect(),
            )
        })
        .collect();
    Ok(DualBasis { hom_basis, coeffs })
}

/// `D = P* (x)_K P` for a finitely generated projective right module, with
/// the dual-basis comultiplication and the evaluation counit.  Basis order:
/// `h_s (x) p_k -> s * dim(P) + k`.
pub fn endomorphism_coalgebra(p: &RightModule) -> Result<(Coalgebra, DualBasis)> {
    let field = p.field();
    let alg = p.alg.clone();
    let db = dual_basis(p)?;
    let m = db.hom_basis.len();
    let n = p.dim;
    let dd = m * n;
    let flat: Vec<SVec> = db.hom_basis.iter().map(flatten_mat).collect();
    // left action: a . (h (x) p) = (a h) (x) p
    let mut left = Vec::with_capacity(alg.dim);
    let mut right = Vec::with_capacity(alg.dim);
    for t in 0..alg.dim {
        let lt = alg.left_mult(t);
        let mut lcoords = Vec::with_capacity(m);
        for h in &db.hom_basis {
            let prod = lt.mul(h)?;
            let c = coords_in_span(field, alg.dim * n, &flat, &flatten_mat(&prod)).ok_or_else(
                || WbError::Validation("left action leaves the dual space".into()),
            )?;
            lcoords.push(c);
        }
        left.push(ColMat {
            field,
            rows: dd,
            cols_v: (0..dd)
                .map(|x| {
                    let (s, k) = (x / n, x % n);
                    lcoords[s].map_indices(|u| u * n + k)
                })
                .collect(),
        });
        // right action: (h (x) p) . a = h (x) (p . a)
        right.push(ColMat {
            field,
            rows: dd,
            cols_v: (0..dd)
                .map(|x| {
                    let (s, k) = (x / n, x % n);
                    p.act_mat(t).cols_v[k].map_indices(|r| s * n + r)
                })
                .collect(),
        });
    }
    let carrier = Bimodule::new(alg.clone(), dd, left, right)?;
    // counit = evaluation, comultiplication via the dual basis
    let mut counit_cols = Vec::with_capacity(dd);
    let mut ambient_cols = Vec::with_capacity(dd);
    for s in 0..m {
        for k in 0..n {
            counit_cols.push(db.hom_basis[s].col_svec(k));
            // delta(h_s (x) p_k) = sum_j (h_s (x) x_j) (x) (phi_j (x) p_k)
            let mut col = SVec::zero();
            for j in 0..n {
                for (s2, c) in &db.coeffs[j].entries {
                    let idx = (s * n + j) * dd + (s2 * n + k);
                    col = col.add_scaled(c, &SVec::unit(idx, field));
                }
            }
            ambient_cols.push(col);
        }
    }
    let counit = ColMat { field, rows: alg.dim, cols_v: counit_cols };
    let coalg = Coalgebra::from_ambient_comult(carrier, ambient_cols, Vec::new(), counit)?;
    Ok((coalg, db))
}

/// The convolution ring `Hom_A(D, A)_A` of a coalgebra, on the computed
/// basis of bimodule maps.
#[derive(Debug, Clone)]
pub struct ConvolutionRing {
    pub ring: Arc<Algebra>,
    pub basis: Vec<Mat>,
}

impl ConvolutionRing {
    pub fn coords_of(&self, m: &Mat) -> Option<SVec> {
        let flat: Vec<SVec> = self.basis.iter().map(flatten_mat).collect();
        let ambient = self.basis.first().map(|b| b.rows * b.cols).unwrap_or(0);
        coords_in_span(self.ring.field, ambient, &flat, &flatten_mat(m))
    }
}

/// Convolution product `(f * g)(d) = f(d_(1)) . g(d_(2))`.
pub fn convolve(d: &Coalgebra, f: &Mat, g: &Mat) -> Mat {
    let alg = d.alg();
    let n = d.dim();
    let mut out = Mat::zeros(d.field(), alg.dim, n);
    for i in 0..n {
        let mut col = SVec::zero();
        for (xy, c) in &d.comult_amb(i).entries {
            let (x, y) = (xy / n, xy % n);
            col = col.add_scaled(c, &alg.mul(&f.col_svec(x), &g.col_svec(y)));
        }
        for (r, c) in col.entries {
            out.set(r, i, c);
        }
    }
    out
}

/// Builds the convolution ring of `d`, validating associativity and the
/// counit unit along the way.
pub fn convolution_ring(d: &Coalgebra) -> Result<ConvolutionRing> {
    let field = d.field();
    let basis = hom_aa(&d.carrier, &Bimodule::regular(d.alg().clone()));
    let n = basis.len();
    let flat: Vec<SVec> = basis.iter().map(flatten_mat).collect();
    let ambient = d.alg().dim * d.dim();
    let coords = |m: &Mat| -> Result<SVec> {
        coords_in_span(field, ambient, &flat, &flatten_mat(m)).ok_or_else(|| {
            WbError::NotWellDefined("convolution product left the bimodule-map span".into())
        })
    };
    let mut sc = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let prod = convolve(d, &basis[i], &basis[j]);
            sc.push(coords(&prod)?.to_dense(n, field));
        }
    }
    let unit = coords(&d.counit.to_dense())?.to_dense(n, field);
    let ring = Algebra::new(field, n, sc, unit)?.shared();
    Ok(ConvolutionRing { ring, basis })
}

/// The ring isomorphism `A -> Hom_A(A (x) A, A)_A`, `a -> (b1 (x) b2 ->
/// b1 a b2)`, for the Sweedler coalgebra of `A`.
pub fn sweedler_convolution_iso(d: &Coalgebra, conv: &ConvolutionRing) -> Result<Mat> {
    let alg = d.alg();
    let da = alg.dim;
    if d.dim() != da * da {
        return Err(WbError::BadInput("expected the Sweedler coalgebra of A".into()));
    }
    let field = d.field();
    let mut cols = Vec::with_capacity(da);
    for t in 0..da {
        let mut phi = Mat::zeros(field, da, da * da);
        for i in 0..da {
            for j in 0..da {
                let v = alg.mul(&SVec::from_dense(alg.mul_basis(i, t)), &SVec::unit(j, field));
                for (r, c) in v.entries {
                    phi.set(r, i * da + j, c);
                }
            }
        }
        let c = conv.coords_of(&phi).ok_or_else(|| {
            WbError::NotInvertible("functional is outside the convolution ring".into())
        })?;
        cols.push(c);
    }
    let m = ColMat { field, rows: conv.ring.dim, cols_v: cols }.to_dense();
    if !is_algebra_iso(alg, &conv.ring, &m) {
        return Err(WbError::NotInvertible("candidate map is not a ring isomorphism".into()));
    }
    Ok(m)
}

/// A (convolution) representation of a ring `B` over `A`: a unital ring map
/// `B -> Hom_A(D, A)_A`, recorded by one functional per basis element of
/// `B`, together with the induced `B`-bimodule structure on `D`.
#[derive(Debug, Clone)]
pub struct Representation {
    pub ring: Arc<Algebra>,
    pub coalg: Arc<Coalgebra>,
    pub functionals: Vec<Mat>,
    pub conv: ConvolutionRing,
    pub func_coords: Vec<SVec>,
    /// `D` as a `B`-bimodule via `b . d = d_(1) b(d_(2))`, `d . b =
    /// b(d_(1)) d_(2)`.
    pub induced: Bimodule,
}

impl Representation {
    pub fn base(&self) -> &Arc<Algebra> {
        self.coalg.alg()
    }

    /// The functional of an arbitrary ring element.
    pub fn functional_of(&self, b: &SVec) -> Mat {
        let field = self.ring.field;
        let mut out = Mat::zeros(field, self.base().dim, self.coalg.dim());
        for (t, c) in &b.entries {
            out = out.add(&self.functionals[*t].scale(c)).expect("shape");
        }
        out
    }

    /// `b(d)` for `b` in ring coordinates and `d` a carrier basis index.
    pub fn eval(&self, b: &SVec, j: usize) -> SVec {
        let mut out = SVec::zero();
        for (t, c) in &b.entries {
            out = out.add_scaled(c, &self.functionals[*t].col_svec(j));
        }
        out
    }
}

/// Validated constructor for a representation.
pub fn make_representation(
    ring: Arc<Algebra>,
    coalg: Arc<Coalgebra>,
    functionals: Vec<Mat>,
) -> Result<Representation> {
    let field = ring.field;
    if field != coalg.field() {
        return Err(WbError::FieldMismatch("representation over a different field".into()));
    }
    if functionals.len() != ring.dim {
        return Err(WbError::DimMismatch("one functional per ring basis element".into()));
    }
    let da = coalg.alg().dim;
    let dd = coalg.dim();
    for f in &functionals {
        if f.rows != da || f.cols != dd {
            return Err(WbError::DimMismatch("functional shape".into()));
        }
    }
    let conv = convolution_ring(&coalg)?;
    let mut func_coords = Vec::with_capacity(ring.dim);
    for (t, f) in functionals.iter().enumerate() {
        let c = conv.coords_of(f).ok_or_else(|| {
            WbError::Validation(format!("functional {t} is not a bimodule map"))
        })?;
        func_coords.push(c);
    }
    // unital
    let unit_f = {
        let mut out = Mat::zeros(field, da, dd);
        for (t, c) in &ring.unit_svec().entries {
            out = out.add(&functionals[*t].scale(c)).expect("shape");
        }
        out
    };
    if !unit_f.sub(&coalg.counit.to_dense()).expect("shape").is_zero() {
        return Err(WbError::Validation("NotRingHom: unit does not map to the counit".into()));
    }
    // multiplicative
    for i in 0..ring.dim {
        for j in 0..ring.dim {
            let lhs = convolve(&coalg, &functionals[i], &functionals[j]);
            let prod = SVec::from_dense(ring.mul_basis(i, j));
            let mut rhs = Mat::zeros(field, da, dd);
            for (t, c) in &prod.entries {
                rhs = rhs.add(&functionals[*t].scale(c)).expect("shape");
            }
            if !lhs.sub(&rhs).expect("shape").is_zero() {
                return Err(WbError::Validation(format!("NotRingHom: witness pair ({i},{j})")));
            }
        }
    }
    // induced B-actions on D
    let carrier = &coalg.carrier;
    let mut left = Vec::with_capacity(ring.dim);
    let mut right = Vec::with_capacity(ring.dim);
    for t in 0..ring.dim {
        let mut lcols = Vec::with_capacity(dd);
        let mut rcols = Vec::with_capacity(dd);
        for i in 0..dd {
            let mut lcol = SVec::zero();
            let mut rcol = SVec::zero();
            for (xy, c) in &coalg.comult_amb(i).entries {
                let (x, y) = (xy / dd, xy % dd);
                let ay = functionals[t].col_svec(y);
                lcol = lcol.add_scaled(c, &carrier.apply_right_elem(&ay, &SVec::unit(x, field)));
                let ax = functionals[t].col_svec(x);
                rcol = rcol.add_scaled(c, &carrier.apply_left_elem(&ax, &SVec::unit(y, field)));
            }
            lcols.push(lcol);
            rcols.push(rcol);
        }
        left.push(ColMat { field, rows: dd, cols_v: lcols });
        right.push(ColMat { field, rows: dd, cols_v: rcols });
    }
    let induced = Bimodule::new(ring.clone(), dd, left, right)
        .map_err(|e| WbError::Validation(format!("ActionsFail: {e}")))?;
    // the induced B-actions must be A-bimodule endomorphisms of D
    for t in 0..ring.dim {
        for part in [induced.left_mat(t), induced.right_mat(t)] {
            BimoduleMap::new(carrier.clone(), carrier.clone(), part.clone()).map_err(|e| {
                WbError::Validation(format!("ActionsFail: not A-linear: {e}"))
            })?;
        }
    }
    Ok(Representation { ring, coalg, functionals, conv, func_coords, induced })
}

/// The identity representation of `A` on its Sweedler coalgebra, with
/// functionals `f_a(b1 (x) b2) = b1 a b2`.
pub fn identity_representation(alg: &Arc<Algebra>) -> Result<Representation> {
    let field = alg.field;
    let da = alg.dim;
    let coalg = sweedler_coalgebra(alg).shared();
    let mut functionals = Vec::with_capacity(da);
    for t in 0..da {
        let cols: Vec<SVec> = (0..da * da)
            .map(|x| {
                let (i, j) = (x / da, x % da);
                alg.mul(&SVec::from_dense(alg.mul_basis(i, t)), &SVec::unit(j, field))
            })
            .collect();
        functionals.push(Mat::from_cols(field, da, &cols));
    }
    make_representation(alg.clone(), coalg, functionals)
}

/// Composition of representations: for `outer : F -> conv(E over B)` and
/// `inner : B -> conv(D over A)`, the representation of `F` over `A` on the
/// coalgebra `E (x)_{B^e} D` with `delta(e (x) d) = (e_(1) (x) d_(1)) (x)
/// (e_(2) (x) d_(2))` and counit `e (x) d -> (eps_E(e))(d)`.
pub fn compose_representations(
    outer: &Representation,
    inner: &Representation,
) -> Result<(Representation, Subquotient)> {
    if *outer.base().as_ref() != *inner.ring.as_ref() {
        return Err(WbError::BadInput(
            "outer base ring must equal the inner represented ring".into(),
        ));
    }
    let field = inner.ring.field;
    let a = inner.base().clone();
    let e_bim = &outer.coalg.carrier; // E over B
    let d_a = &inner.coalg.carrier; // D over A
    let d_b = &inner.induced; // D over B
    let (de, dd) = (e_bim.dim, d_a.dim);
    let ambient = de * dd;
    let bdim = inner.ring.dim;
    // relations for (x)_{B^e}
    let mut relations = Vec::new();
    for t in 0..bdim {
        for i in 0..de {
            for j in 0..dd {
                let r1 = e_bim.right_mat(t).cols_v[i]
                    .map_indices(|k| k * dd + j)
                    .sub(&d_b.left_mat(t).cols_v[j].map_indices(|l| i * dd + l));
                if !r1.is_zero() {
                    relations.push(r1);
                }
                let r2 = e_bim.left_mat(t).cols_v[i]
                    .map_indices(|k| k * dd + j)
                    .sub(&d_b.right_mat(t).cols_v[j].map_indices(|l| i * dd + l));
                if !r2.is_zero() {
                    relations.push(r2);
                }
            }
        }
    }
    let pres = Subquotient::cokernel(field, ambient, relations);
    let q = pres.dim();
    // A acts through the D factor
    let mut left = Vec::with_capacity(a.dim);
    let mut right = Vec::with_capacity(a.dim);
    for t in 0..a.dim {
        for (acts, out) in
            [(d_a.left_mat(t), &mut left), (d_a.right_mat(t), &mut right)]
        {
            let amb = ColMat {
                field,
                rows: ambient,
                cols_v: (0..ambient)
                    .map(|x| {
                        let (i, j) = (x / dd, x % dd);
                        acts.cols_v[j].map_indices(|l| i * dd + l)
                    })
                    .collect(),
            };
            out.push(Subquotient::induced_map(&pres, &pres, &amb)?);
        }
    }
    let carrier = Bimodule::new(a.clone(), q, left, right)?;
    // counit: e (x) d -> (eps_E(e))(d), through D/[D,B] -> A
    let amb_counit = |v: &SVec| -> SVec {
        let mut out = SVec::zero();
        for (x, c) in &v.entries {
            let (i, j) = (x / dd, x % dd);
            let b = outer.coalg.counit.cols_v[i].clone();
            out = out.add_scaled(c, &inner.eval(&b, j));
        }
        out
    };
    let reps: Vec<SVec> = (0..q).map(|b| pres.section(b).clone()).collect();
    let gens: Vec<SVec> = pres.denom_basis().into_iter().cloned().collect();
    let counit =
        map_on_quotients(field, a.dim, &reps, &gens, amb_counit, |v| Ok(v.clone()))?;
    // comultiplication
    let amb_comult = |v: &SVec| -> SVec {
        let mut out = SVec::zero();
        for (x, c) in &v.entries {
            let (i, j) = (x / dd, x % dd);
            for (x12, c1) in &outer.coalg.comult_amb(i).entries {
                let (x1, x2) = (x12 / de, x12 % de);
                for (y12, c2) in &inner.coalg.comult_amb(j).entries {
                    let (y1, y2) = (y12 / dd, y12 % dd);
                    let idx = (x1 * dd + y1) * ambient + (x2 * dd + y2);
                    out = out.add_scaled(&c.mul(c1).mul(c2), &SVec::unit(idx, field));
                }
            }
        }
        out
    };
    // push both ambient legs through the carrier presentation
    let to_square_ambient = |v: &SVec| -> Result<SVec> {
        let v1 = permute_digits(v, &[ambient, ambient], &[1, 0]);
        let v2 = project_head(&pres, ambient, &v1)?;
        let v3 = permute_digits(&v2, &[q, ambient], &[1, 0]);
        project_head(&pres, q, &v3)
    };
    let mut ambient_cols = Vec::with_capacity(q);
    for rep in &reps {
        ambient_cols.push(to_square_ambient(&amb_comult(rep))?);
    }
    let mut kernel_cols = Vec::with_capacity(gens.len());
    for g in &gens {
        kernel_cols.push(to_square_ambient(&amb_comult(g))?);
    }
    let coalg =
        Coalgebra::from_ambient_comult(carrier, ambient_cols, kernel_cols, counit)?.shared();
    // composite functionals for F
    let fdim = outer.ring.dim;
    let mut functionals = Vec::with_capacity(fdim);
    for u in 0..fdim {
        let amb_func = |v: &SVec| -> SVec {
            let mut out = SVec::zero();
            for (x, c) in &v.entries {
                let (i, j) = (x / dd, x % dd);
                let b = outer.functionals[u].col_svec(i);
                out = out.add_scaled(c, &inner.eval(&b, j));
            }
            out
        };
        let m = map_on_quotients(field, a.dim, &reps, &gens, amb_func, |v| Ok(v.clone()))?;
        functionals.push(m.to_dense());
    }
    let rep = make_representation(outer.ring.clone(), coalg, functionals)?;
    Ok((rep, pres))
}

/// `f*N = N (x)_{B^e} D`: restriction of a `B`-bimodule along the
/// representation, an A-bimodule through the `D` factor.
pub fn pullback(rep: &Representation, n: &Bimodule) -> Result<ConstructedBimodule> {
    if *n.alg.as_ref() != *rep.ring.as_ref() {
        return Err(WbError::BadInput("pullback expects a bimodule over the represented ring".into()));
    }
    let field = n.field();
    let (dn, dd) = (n.dim, rep.coalg.dim());
    let ambient = dn * dd;
    let d_b = &rep.induced;
    let d_a = &rep.coalg.carrier;
    let mut relations = Vec::new();
    for t in 0..rep.ring.dim {
        for i in 0..dn {
            for j in 0..dd {
                let r1 = n.right_mat(t).cols_v[i]
                    .map_indices(|k| k * dd + j)
                    .sub(&d_b.left_mat(t).cols_v[j].map_indices(|l| i * dd + l));
                if !r1.is_zero() {
                    relations.push(r1);
                }
                let r2 = n.left_mat(t).cols_v[i]
                    .map_indices(|k| k * dd + j)
                    .sub(&d_b.right_mat(t).cols_v[j].map_indices(|l| i * dd + l));
                if !r2.is_zero() {
                    relations.push(r2);
                }
            }
        }
    }
    let pres = Subquotient::cokernel(field, ambient, relations);
    let a = rep.base().clone();
    let mut left = Vec::with_capacity(a.dim);
    let mut right = Vec::with_capacity(a.dim);
    for t in 0..a.dim {
        for (acts, out) in [(d_a.left_mat(t), &mut left), (d_a.right_mat(t), &mut right)] {
            let amb = ColMat {
                field,
                rows: ambient,
                cols_v: (0..ambient)
                    .map(|x| {
                        let (i, j) = (x / dd, x % dd);
                        acts.cols_v[j].map_indices(|l| i * dd + l)
                    })
                    .collect(),
            };
            out.push(Subquotient::induced_map(&pres, &pres, &amb)?);
        }
    }
    let space = Bimodule::new(a, pres.dim(), left, right)?;
    Ok(ConstructedBimodule { space, pres, ambient_factors: vec![dn, dd] })
}

/// `f_*M = Hom_A(D, M)_A` as a `B`-bimodule: `(b . phi)(d) = phi(d . b)`,
/// `(phi . b)(d) = phi(b . d)`.
#[derive(Debug, Clone)]
pub struct Pushforward {
    pub space: Bimodule,
    /// The hom basis realizing the space, one matrix `D -> M` per basis
    /// vector.
    pub basis: Vec<Mat>,
}

pub fn pushforward(rep: &Representation, m: &Bimodule) -> Result<Pushforward> {
    if *m.alg.as_ref() != *rep.base().as_ref() {
        return Err(WbError::BadInput("pushforward expects a bimodule over the base ring".into()));
    }
    let field = m.field();
    let basis = hom_aa(&rep.coalg.carrier, m);
    let n = basis.len();
    let flat: Vec<SVec> = basis.iter().map(flatten_mat).collect();
    let ambient = m.dim * rep.coalg.dim();
    let coords = |h: &Mat| -> Result<SVec> {
        coords_in_span(field, ambient, &flat, &flatten_mat(h)).ok_or_else(|| {
            WbError::NotWellDefined("induced action left the bimodule-map span".into())
        })
    };
    let mut left = Vec::with_capacity(rep.ring.dim);
    let mut right = Vec::with_capacity(rep.ring.dim);
    for t in 0..rep.ring.dim {
        let rb = rep.induced.right_mat(t).to_dense();
        let lb = rep.induced.left_mat(t).to_dense();
        let mut lcols = Vec::with_capacity(n);
        let mut rcols = Vec::with_capacity(n);
        for h in &basis {
            lcols.push(coords(&h.mul(&rb)?)?);
            rcols.push(coords(&h.mul(&lb)?)?);
        }
        left.push(ColMat { field, rows: n, cols_v: lcols });
        right.push(ColMat { field, rows: n, cols_v: rcols });
    }
    let space = Bimodule::new(rep.ring.clone(), n, left, right)?;
    Ok(Pushforward { space, basis })
}

/// The monoidal structure map `f_*M1 (x)_B f_*M2 -> f_*(M1 (x)_A M2)`,
/// `phi1 (x) phi2 -> (d -> phi1(d_(1)) (x) phi2(d_(2)))`, verified
/// well-defined and returned as a bimodule map over `B`.
pub fn monoidal_map(
    rep: &Representation,
    m1: &Bimodule,
    m2: &Bimodule,
) -> Result<BimoduleMap> {
    let field = m1.field();
    let p1 = pushforward(rep, m1)?;
    let p2 = pushforward(rep, m2)?;
    let src = tensor_over_a(&p1.space, &p2.space)?;
    let m12 = tensor_over_a(m1, m2)?;
    let target = pushforward(rep, &m12.space)?;
    let dd = rep.coalg.dim();
    let (n2, md2) = (p2.space.dim, m2.dim);
    let tflat: Vec<SVec> = target.basis.iter().map(flatten_mat).collect();
    let ambient_map = |v: &SVec| -> SVec {
        let mut out = SVec::zero();
        for (x, c) in &v.entries {
            let (s1, s2) = (x / n2, x % n2);
            for i in 0..dd {
                for (xy, cc) in &rep.coalg.comult_amb(i).entries {
                    let (dx, dy) = (xy / dd, xy % dd);
                    let (u, w) = (p1.basis[s1].col_svec(dx), p2.basis[s2].col_svec(dy));
                    let mut pair = SVec::zero();
                    for (r1, a) in &u.entries {
                        for (r2, b) in &w.entries {
                            pair = pair
                                .add_scaled(&a.mul(b), &SVec::unit(r1 * md2 + r2, field));
                        }
                    }
                    let proj = m12.pres.project(&pair).expect("full-ambient projection");
                    out = out.add_scaled(&c.mul(cc), &proj.map_indices(|r| r * dd + i));
                }
            }
        }
        out
    };
    let reps: Vec<SVec> = (0..src.space.dim).map(|b| src.pres.section(b).clone()).collect();
    let gens: Vec<SVec> = src.pres.denom_basis().into_iter().cloned().collect();
    let mat = map_on_quotients(field, target.space.dim, &reps, &gens, ambient_map, |v| {
        coords_in_span(field, m12.space.dim * dd, &tflat, v).ok_or_else(|| {
            WbError::NotWellDefined("monoidal image is not a bimodule map".into())
        })
    })?;
    BimoduleMap::new(src.space, target.space, mat)
}

/// `f_!F = D (x)_{A^e} F` as a `B`-bimodule through the induced actions on
/// the `D` factor.
pub fn shriek_push(rep: &Representation, f: &Bimodule) -> Result<ConstructedBimodule> {
    if *f.alg.as_ref() != *rep.base().as_ref() {
        return Err(WbError::BadInput("expected a bimodule over the base ring".into()));
    }
    let field = f.field();
    let (dd, df) = (rep.coalg.dim(), f.dim);
    let ambient = dd * df;
    let d_a = &rep.coalg.carrier;
    let mut relations = Vec::new();
    for t in 0..rep.base().dim {
        for i in 0..dd {
            for j in 0..df {
                let r1 = d_a.right_mat(t).cols_v[i]
                    .map_indices(|k| k * df + j)
                    .sub(&f.left_mat(t).cols_v[j].map_indices(|l| i * df + l));
                if !r1.is_zero() {
                    relations.push(r1);
                }
                let r2 = d_a.left_mat(t).cols_v[i]
                    .map_indices(|k| k * df + j)
                    .sub(&f.right_mat(t).cols_v[j].map_indices(|l| i * df + l));
                if !r2.is_zero() {
                    relations.push(r2);
                }
            }
        }
    }
    let pres = Subquotient::cokernel(field, ambient, relations);
    let mut left = Vec::with_capacity(rep.ring.dim);
    let mut right = Vec::with_capacity(rep.ring.dim);
    for t in 0..rep.ring.dim {
        for (acts, out) in
            [(rep.induced.left_mat(t), &mut left), (rep.induced.right_mat(t), &mut right)]
        {
            let amb = ColMat {
                field,
                rows: ambient,
                cols_v: (0..ambient)
                    .map(|x| {
                        let (i, j) = (x / df, x % df);
                        acts.cols_v[i].map_indices(|k| k * df + j)
                    })
                    .collect(),
            };
            out.push(Subquotient::induced_map(&pres, &pres, &amb)?);
        }
    }
    let space = Bimodule::new(rep.ring.clone(), pres.dim(), left, right)?;
    Ok(ConstructedBimodule { space, pres, ambient_factors: vec![dd, df] })
}

/// `f^!G = Hom_B(D, G)_B` as an A-bimodule: `(a . psi)(d) = psi(d . a)`,
/// `(psi . a)(d) = psi(a . d)`.
#[derive(Debug, Clone)]
pub struct ShriekPull {
    pub space: Bimodule,
    pub basis: Vec<Mat>,
}

pub fn shriek_pull(rep: &Representation, g: &Bimodule) -> Result<ShriekPull> {
    if *g.alg.as_ref() != *rep.ring.as_ref() {
        return Err(WbError::BadInput("expected a bimodule over the represented ring".into()));
    }
    let field = g.field();
    let basis = hom_aa(&rep.induced, g);
    let n = basis.len();
    let flat: Vec<SVec> = basis.iter().map(flatten_mat).collect();
    let ambient = g.dim * rep.coalg.dim();
    let coords = |h: &Mat| -> Result<SVec> {
        coords_in_span(field, ambient, &flat, &flatten_mat(h)).ok_or_else(|| {
            WbError::NotWellDefined("induced action left the bimodule-map span".into())
        })
    };
    let a = rep.base().clone();
    let d_a = &rep.coalg.carrier;
    let mut left = Vec::with_capacity(a.dim);
    let mut right = Vec::with_capacity(a.dim);
    for t in 0..a.dim {
        let ra = d_a.right_mat(t).to_dense();
        let la = d_a.left_mat(t).to_dense();
        let mut lcols = Vec::with_capacity(n);
        let mut rcols = Vec::with_capacity(n);
        for h in &basis {
            lcols.push(coords(&h.mul(&ra)?)?);
            rcols.push(coords(&h.mul(&la)?)?);
        }
        left.push(ColMat { field, rows: n, cols_v: lcols });
        right.push(ColMat { field, rows: n, cols_v: rcols });
    }
    let space = Bimodule::new(a, n, left, right)?;
    Ok(ShriekPull { space, basis })
}

/// The two projection maps
/// `G (x)_B f_!F -> f_!(f*G (x)_A F)` and `f_!F (x)_B G -> f_!(F (x)_A f*G)`,
/// built on ambient representatives with every descent step verified.
pub fn projection_maps(
    rep: &Representation,
    f: &Bimodule,
    g: &Bimodule,
) -> Result<(BimoduleMap, BimoduleMap)> {
    let field = f.field();
    let (dd, df, dg) = (rep.coalg.dim(), f.dim, g.dim);
    let shr = shriek_push(rep, f)?;
    let fsg = pullback(rep, g)?; // f*G, ambient (g, d)
    let pg = fsg.space.dim;

    // first map: g (x) (d (x) f) -> sum d_(1) (x) ((g (x) d_(2)) (x) f)
    let src1 = tensor_over_a(g, &shr.space)?;
    let mid1 = tensor_over_a(&fsg.space, f)?;
    let rhs1 = shriek_push(rep, &mid1.space)?;
    let reps1: Vec<SVec> = (0..src1.space.dim)
        .map(|b| {
            let mut out = SVec::zero();
            for (x, c) in &src1.pres.section(b).entries {
                let (ig, bs) = (x / shr.space.dim, x % shr.space.dim);
                out = out.add_scaled(c, &shr.pres.section(bs).map_indices(|y| ig * dd * df + y));
            }
            out
        })
        .collect();
    let mut gens1: Vec<SVec> = Vec::new();
    for w in shr.pres.denom_basis() {
        for ig in 0..dg {
            gens1.push(w.map_indices(|y| ig * dd * df + y));
        }
    }
    for w in src1.pres.denom_basis() {
        let mut out = SVec::zero();
        for (x, c) in &w.entries {
            let (ig, bs) = (x / shr.space.dim, x % shr.space.dim);
            out = out.add_scaled(c, &shr.pres.section(bs).map_indices(|y| ig * dd * df + y));
        }
        gens1.push(out);
    }
    let amb1 = |v: &SVec| -> SVec {
        let mut out = SVec::zero();
        for (x, c) in &v.entries {
            let (ig, rest) = (x / (dd * df), x % (dd * df));
            let (id, jf) = (rest / df, rest % df);
            for (d12, cc) in &rep.coalg.comult_amb(id).entries {
                let (d1, d2) = (d12 / dd, d12 % dd);
                // digits (d1, g, d2, f)
                let idx = ((d1 * dg + ig) * dd + d2) * df + jf;
                out = out.add_scaled(&c.mul(cc), &SVec::unit(idx, field));
            }
        }
        out
    };
    let proj1 = |v: &SVec| -> Result<SVec> {
        // (d1, g, d2, f) -> ((g, d2), d1, f) -> project f*G
        let v = permute_digits(v, &[dd, dg, dd, df], &[1, 2, 0, 3]);
        let v = project_head(&fsg.pres, dd * df, &v)?;
        // (b1, d1, f) -> ((b1, f), d1) -> project mid
        let v = permute_digits(&v, &[pg, dd, df], &[0, 2, 1]);
        let v = project_head(&mid1.pres, dd, &v)?;
        // (bm, d1) -> (d1, bm) -> project rhs
        let v = permute_digits(&v, &[mid1.space.dim, dd], &[1, 0]);
        rhs1.pres.project(&v)
    };
    let mat1 = map_on_quotients(field, rhs1.space.dim, &reps1, &gens1, amb1, proj1)?;
    let map1 = BimoduleMap::new(src1.space.clone(), rhs1.space.clone(), mat1)?;

    // second map: (d (x) f) (x) g -> sum d_(2) (x) (f (x) (g (x) d_(1)))
    let src2 = tensor_over_a(&shr.space, g)?;
    let mid2 = tensor_over_a(f, &fsg.space)?;
    let rhs2 = shriek_push(rep, &mid2.space)?;
    let reps2: Vec<SVec> = (0..src2.space.dim)
        .map(|b| {
            let mut out = SVec::zero();
            for (x, c) in &src2.pres.section(b).entries {
                let (bs, ig) = (x / dg, x % dg);
                out = out.add_scaled(c, &shr.pres.section(bs).map_indices(|y| y * dg + ig));
            }
            out
        })
        .collect();
    let mut gens2: Vec<SVec> = Vec::new();
    for w in shr.pres.denom_basis() {
        for ig in 0..dg {
            gens2.push(w.map_indices(|y| y * dg + ig));
        }
    }
    for w in src2.pres.denom_basis() {
        let mut out = SVec::zero();
        for (x, c) in &w.entries {
            let (bs, ig) = (x / dg, x % dg);
            out = out.add_scaled(c, &shr.pres.section(bs).map_indices(|y| y * dg + ig));
        }
        gens2.push(out);
    }
    let amb2 = |v: &SVec| -> SVec {
        let mut out = SVec::zero();
        for (x, c) in &v.entries {
            let (rest, ig) = (x / dg, x % dg);
            let (id, jf) = (rest / df, rest % df);
            for (d12, cc) in &rep.coalg.comult_amb(id).entries {
                let (d1, d2) = (d12 / dd, d12 % dd);
                // digits (d2, f, g, d1)
                let idx = ((d2 * df + jf) * dg + ig) * dd + d1;
                out = out.add_scaled(&c.mul(cc), &SVec::unit(idx, field));
            }
        }
        out
    };
    let proj2 = |v: &SVec| -> Result<SVec> {
        // (d2, f, g, d1) -> ((g, d1), d2, f) -> project f*G
        let v = permute_digits(v, &[dd, df, dg, dd], &[2, 3, 0, 1]);
        let v = project_head(&fsg.pres, dd * df, &v)?;
        // (b1, d2, f) -> ((f, b1), d2) -> project mid2
        let v = permute_digits(&v, &[pg, dd, df], &[2, 0, 1]);
        let v = project_head(&mid2.pres, dd, &v)?;
        // (bm, d2) -> (d2, bm) -> project rhs
        let v = permute_digits(&v, &[mid2.space.dim, dd], &[1, 0]);
        rhs2.pres.project(&v)
    };
    let mat2 = map_on_quotients(field, rhs2.space.dim, &reps2, &gens2, amb2, proj2)?;
    let map2 = BimoduleMap::new(src2.space.clone(), rhs2.space.clone(), mat2)?;
    Ok((map1, map2))
}

/// The natural isomorphism `Tr_A(F (x)_A f*G) -> Tr_B(f_!F (x)_B G)`
/// induced by `f (x) (g (x) d) -> (d (x) f) (x) g`.
pub fn trace_adjunction(rep: &Representation, f: &Bimodule, g: &Bimodule) -> Result<ColMat> {
    let field = f.field();
    let (dd, df, dg) = (rep.coalg.dim(), f.dim, g.dim);
    let fsg = pullback(rep, g)?;
    let tl = tensor_over_a(f, &fsg.space)?;
    let trl = crate::bimod::trace(&tl.space);
    let shr = shriek_push(rep, f)?;
    let tr = tensor_over_a(&shr.space, g)?;
    let trr = crate::bimod::trace(&tr.space);
    // representatives and kernel generators in the (f, g, d) ambient space
    let expand_tl = |v: &SVec| -> SVec {
        let mut out = SVec::zero();
        for (x, c) in &v.entries {
            let (jf, bq) = (x / fsg.space.dim, x % fsg.space.dim);
            out = out.add_scaled(c, &fsg.pres.section(bq).map_indices(|y| jf * dg * dd + y));
        }
        out
    };
    let reps: Vec<SVec> =
        (0..trl.dim()).map(|b| expand_tl(&tl.pres.section_of(trl.section(b)))).collect();
    let mut gens: Vec<SVec> = Vec::new();
    for w in fsg.pres.denom_basis() {
        for jf in 0..df {
            gens.push(w.map_indices(|y| jf * dg * dd + y));
        }
    }
    for w in tl.pres.denom_basis() {
        gens.push(expand_tl(w));
    }
    for w in trl.denom_basis() {
        gens.push(expand_tl(&tl.pres.section_of(w)));
    }
    let amb = |v: &SVec| permute_digits(v, &[df, dg, dd], &[2, 0, 1]);
    let proj = |v: &SVec| -> Result<SVec> {
        let v = project_head(&shr.pres, dg, v)?;
        trr.project(&tr.pres.project(&v)?)
    };
    let m = map_on_quotients(field, trr.dim(), &reps, &gens, amb, proj)?;
    if m.rows != m.cols() || m.rank() != m.rows {
        return Err(WbError::NotInvertible(format!(
            "trace adjunction matrix has rank {} on dims {} -> {}",
            m.rank(),
            m.cols(),
            m.rows
        )));
    }
    Ok(m)
}

/// A bicomodule over a coalgebra `C` in Bimod(A): an A-bimodule with
/// commuting, coassociative, counital left and right C-coactions.
#[derive(Debug, Clone)]
pub struct Bicomodule {
    pub space: Bimodule,
    pub coalg: Arc<Coalgebra>,
    pub left_t: ConstructedBimodule,
    pub right_t: ConstructedBimodule,
    pub left_coaction: ColMat,
    pub right_coaction: ColMat,
    left_amb: Vec<SVec>,
    right_amb: Vec<SVec>,
}

impl Bicomodule {
    /// Coaction columns are given in the K-tensor ambient spaces
    /// `C (x) M` (left) and `M (x) C` (right).
    pub fn new(
        space: Bimodule,
        coalg: Arc<Coalgebra>,
        left_cols: Vec<SVec>,
        right_cols: Vec<SVec>,
    ) -> Result<Bicomodule> {
        let field = space.field();
        let (dc, dm) = (coalg.dim(), space.dim);
        let left_t = tensor_over_a(&coalg.carrier, &space)?;
        let right_t = tensor_over_a(&space, &coalg.carrier)?;
        let lc: Result<Vec<SVec>> = left_cols.iter().map(|v| left_t.pres.project(v)).collect();
        let rc: Result<Vec<SVec>> = right_cols.iter().map(|v| right_t.pres.project(v)).collect();
        let left_coaction = ColMat { field, rows: left_t.space.dim, cols_v: lc? };
        let right_coaction = ColMat { field, rows: right_t.space.dim, cols_v: rc? };
        BimoduleMap::new(space.clone(), left_t.space.clone(), left_coaction.clone())?;
        BimoduleMap::new(space.clone(), right_t.space.clone(), right_coaction.clone())?;
        let left_amb: Vec<SVec> =
            (0..dm).map(|i| left_t.pres.section_of(&left_coaction.cols_v[i])).collect();
        let right_amb: Vec<SVec> =
            (0..dm).map(|i| right_t.pres.section_of(&right_coaction.cols_v[i])).collect();
        let b = Bicomodule {
            space,
            coalg,
            left_t,
            right_t,
            left_coaction,
            right_coaction,
            left_amb,
            right_amb,
        };
        // counit laws
        for i in 0..dm {
            let mut l = SVec::zero();
            for (x, c) in &b.left_amb[i].entries {
                let (ic, im) = (x / dm, x % dm);
                let a = b.coalg.counit.cols_v[ic].clone();
                l = l.add_scaled(c, &b.space.apply_left_elem(&a, &SVec::unit(im, field)));
            }
            let mut r = SVec::zero();
            for (x, c) in &b.right_amb[i].entries {
                let (im, ic) = (x / dc, x % dc);
                let a = b.coalg.counit.cols_v[ic].clone();
                r = r.add_scaled(c, &b.space.apply_right_elem(&a, &SVec::unit(im, field)));
            }
            let e = SVec::unit(i, field);
            if l != e || r != e {
                return Err(WbError::Validation("coaction counit law fails".into()));
            }
        }
        // left coassociativity in C (x) C (x) M
        let mut t_ccm = ChainTower::new(b.coalg.carrier.clone());
        t_ccm.extend(&b.coalg.carrier)?;
        t_ccm.extend(&b.space)?;
        for i in 0..dm {
            let mut lhs = SVec::zero();
            let mut rhs = SVec::zero();
            for (x, c) in &b.left_amb[i].entries {
                let (ic, im) = (x / dm, x % dm);
                lhs = lhs.add_scaled(c, &b.coalg.comult_amb(ic).map_indices(|z| z * dm + im));
                rhs = rhs.add_scaled(c, &b.left_amb[im].map_indices(|z| ic * dc * dm + z));
            }
            if t_ccm.project_full(2, &lhs)? != t_ccm.project_full(2, &rhs)? {
                return Err(WbError::Validation("left coaction not coassociative".into()));
            }
        }
        // right coassociativity in M (x) C (x) C
        let mut t_mcc = ChainTower::new(b.space.clone());
        t_mcc.extend(&b.coalg.carrier)?;
        t_mcc.extend(&b.coalg.carrier)?;
        for i in 0..dm {
            let mut lhs = SVec::zero();
            let mut rhs = SVec::zero();
            for (x, c) in &b.right_amb[i].entries {
                let (im, ic) = (x / dc, x % dc);
                lhs = lhs.add_scaled(c, &b.coalg.comult_amb(ic).map_indices(|z| im * dc * dc + z));
                rhs = rhs.add_scaled(c, &b.right_amb[im].map_indices(|z| z * dc + ic));
            }
            if t_mcc.project_full(2, &lhs)? != t_mcc.project_full(2, &rhs)? {
                return Err(WbError::Validation("right coaction not coassociative".into()));
            }
        }
        // the two coactions commute, compared in C (x) M (x) C
        let mut t_cmc = ChainTower::new(b.coalg.carrier.clone());
        t_cmc.extend(&b.space)?;
        t_cmc.extend(&b.coalg.carrier)?;
        for i in 0..dm {
            let mut lhs = SVec::zero();
            let mut rhs = SVec::zero();
            for (x, c) in &b.left_amb[i].entries {
                let (ic, im) = (x / dm, x % dm);
                lhs = lhs.add_scaled(c, &b.right_amb[im].map_indices(|z| ic * dm * dc + z));
            }
            for (x, c) in &b.right_amb[i].entries {
                let (im, ic) = (x / dc, x % dc);
                rhs = rhs.add_scaled(c, &b.left_amb[im].map_indices(|z| z * dc + ic));
            }
            if t_cmc.project_full(2, &lhs)? != t_cmc.project_full(2, &rhs)? {
                return Err(WbError::Validation("left and right coactions do not commute".into()));
            }
        }
        Ok(b)
    }

    pub fn left_amb(&self, i: usize) -> &SVec {
        &self.left_amb[i]
    }

    pub fn right_amb(&self, i: usize) -> &SVec {
        &self.right_amb[i]
    }
}

/// `C` as a bicomodule over itself, both coactions the comultiplication.
pub fn regular_bicomodule(coalg: &Arc<Coalgebra>) -> Result<Bicomodule> {
    let cols: Vec<SVec> = (0..coalg.dim()).map(|i| coalg.comult_amb(i).clone()).collect();
    Bicomodule::new(coalg.carrier.clone(), coalg.clone(), cols.clone(), cols)
}

/// Cotensor product `f1 ◻_C f2 = ker(f1 (x)_A f2 -> f1 (x)_A C (x)_A f2)`,
/// returned as a subspace of the presented `f1 (x)_A f2`.
pub fn cotensor(f1: &Bicomodule, f2: &Bicomodule) -> Result<Subquotient> {
    let field = f1.space.field();
    let (d1, dc, d2) = (f1.space.dim, f1.coalg.dim(), f2.space.dim);
    let t = tensor_over_a(&f1.space, &f2.space)?;
    let mut tower = ChainTower::new(f1.space.clone());
    tower.extend(&f1.coalg.carrier)?;
    tower.extend(&f2.space)?;
    let amb = |v: &SVec| -> SVec {
        let mut out = SVec::zero();
        for (x, c) in &v.entries {
            let (i1, i2) = (x / d2, x % d2);
            // rho_r(x1) (x) x2  -  x1 (x) lambda_l(x2)
            for (y, cc) in &f1.right_amb[i1].entries {
                out = out.add_scaled(&c.mul(cc), &SVec::unit(y * d2 + i2, field));
            }
            for (y, cc) in &f2.left_amb[i2].entries {
                let (ic, j2) = (y / d2, y % d2);
                out = out.add_scaled(
                    &c.mul(cc).neg(),
                    &SVec::unit((i1 * dc + ic) * d2 + j2, field),
                );
            }
        }
        out
    };
    let reps: Vec<SVec> = (0..t.space.dim).map(|b| t.pres.section(b).clone()).collect();
    let gens: Vec<SVec> = t.pres.denom_basis().into_iter().cloned().collect();
    let m = map_on_quotients(field, tower.space(2).dim, &reps, &gens, amb, |v| {
        tower.project_full(2, v)
    })?;
    let kernel = m.kernel();
    let _ = d1;
    Subquotient::subquotient(field, t.space.dim, kernel, Vec::new())
}

/// A right comodule over `C`: a right A-module `P` with a coassociative,
/// counital coaction `P -> P (x)_A C`.
#[derive(Debug, Clone)]
pub struct Comodule {
    pub module: RightModule,
    pub coalg: Arc<Coalgebra>,
    pub pres: Subquotient,
    pub tensor_module: RightModule,
    pub coaction: ColMat,
    coaction_amb: Vec<SVec>,
}

impl Comodule {
    /// Coaction columns in the K-tensor ambient space of `P (x) C`.
    pub fn new(
        module: RightModule,
        coalg: Arc<Coalgebra>,
        coaction_cols: Vec<SVec>,
    ) -> Result<Comodule> {
        let field = module.field();
        let (dp, dc) = (module.dim, coalg.dim());
        let (pres, tensor_module) = right_tensor(&module, &coalg.carrier)?;
        let cols: Result<Vec<SVec>> = coaction_cols.iter().map(|v| pres.project(v)).collect();
        let coaction = ColMat { field, rows: pres.dim(), cols_v: cols? };
        // right A-linearity
        for t in 0..module.alg.dim {
            if coaction.compose(module.act_mat(t))?
                != tensor_module.act_mat(t).compose(&coaction)?
            {
                return Err(WbError::Validation("coaction is not right A-linear".into()));
            }
        }
        let coaction_amb: Vec<SVec> =
            (0..dp).map(|i| pres.section_of(&coaction.cols_v[i])).collect();
        let c = Comodule { module, coalg, pres, tensor_module, coaction, coaction_amb };
        // counit law
        for i in 0..dp {
            let mut out = SVec::zero();
            for (x, co) in &c.coaction_amb[i].entries {
                let (ip, ic) = (x / dc, x % dc);
                let a = c.coalg.counit.cols_v[ic].clone();
                for (t, at) in &a.entries {
                    out = out.add_scaled(&co.mul(at), &c.module.act_mat(*t).cols_v[ip]);
                }
            }
            if out != SVec::unit(i, field) {
                return Err(WbError::Validation("coaction counit law fails".into()));
            }
        }
        // coassociativity in P (x) C (x) C
        let (pres2, _) = right_tensor(&c.tensor_module, &c.coalg.carrier)?;
        let project2 = |v: &SVec| -> Result<SVec> {
            let v = project_head(&c.pres, dc, v)?;
            pres2.project(&v)
        };
        for i in 0..dp {
            let mut lhs = SVec::zero();
            let mut rhs = SVec::zero();
            for (x, co) in &c.coaction_amb[i].entries {
                let (ip, ic) = (x / dc, x % dc);
                lhs = lhs.add_scaled(co, &c.coalg.comult_amb(ic).map_indices(|z| ip * dc * dc + z));
                rhs = rhs.add_scaled(co, &c.coaction_amb[ip].map_indices(|z| z * dc + ic));
            }
            if project2(&lhs)? != project2(&rhs)? {
                return Err(WbError::Validation("coaction not coassociative".into()));
            }
        }
        Ok(c)
    }

    pub fn coaction_amb(&self, i: usize) -> &SVec {
        &self.coaction_amb[i]
    }
}

/// A left comodule over `C`: a left A-module `Q` with a coaction
/// `Q -> C (x)_A Q`.
#[derive(Debug, Clone)]
pub struct LeftComodule {
    pub module: LeftModule,
    pub coalg: Arc<Coalgebra>,
    pub pres: Subquotient,
    pub tensor_module: LeftModule,
    pub coaction: ColMat,
    coaction_amb: Vec<SVec>,
}

impl LeftComodule {
    /// Coaction columns in the K-tensor ambient space of `C (x) Q`.
    pub fn new(
        module: LeftModule,
        coalg: Arc<Coalgebra>,
        coaction_cols: Vec<SVec>,
    ) -> Result<LeftComodule> {
        let field = module.field();
        let (dq, dc) = (module.dim, coalg.dim());
        let (pres, tensor_module) = left_tensor(&coalg.carrier, &module)?;
        let cols: Result<Vec<SVec>> = coaction_cols.iter().map(|v| pres.project(v)).collect();
        let coaction = ColMat { field, rows: pres.dim(), cols_v: cols? };
        for t in 0..module.alg.dim {
            if coaction.compose(module.act_mat(t))?
                != tensor_module.act_mat(t).compose(&coaction)?
            {
                return Err(WbError::Validation("coaction is not left A-linear".into()));
            }
        }
        let coaction_amb: Vec<SVec> =
            (0..dq).map(|i| pres.section_of(&coaction.cols_v[i])).collect();
        let c = LeftComodule { module, coalg, pres, tensor_module, coaction, coaction_amb };
        // counit law
        for i in 0..dq {
            let mut out = SVec::zero();
            for (x, co) in &c.coaction_amb[i].entries {
                let (ic, iq) = (x / dq, x % dq);
                let a = c.coalg.counit.cols_v[ic].clone();
                for (t, at) in &a.entries {
                    out = out.add_scaled(&co.mul(at), &c.module.act_mat(*t).cols_v[iq]);
                }
            }
            if out != SVec::unit(i, field) {
                return Err(WbError::Validation("coaction counit law fails".into()));
            }
        }
        // coassociativity in C (x) C (x) Q
        let (pres2, _) = left_tensor(&c.coalg.carrier, &c.tensor_module)?;
        let project2 = |v: &SVec| -> Result<SVec> {
            // (c1, c2, q): project the trailing pair first
            let v = permute_digits(v, &[dc, dc * dq], &[1, 0]);
            let v = project_head(&c.pres, dc, &v)?;
            let v = permute_digits(&v, &[c.pres.dim(), dc], &[1, 0]);
            pres2.project(&v)
        };
        for i in 0..dq {
            let mut lhs = SVec::zero();
            let mut rhs = SVec::zero();
            for (x, co) in &c.coaction_amb[i].entries {
                let (ic, iq) = (x / dq, x % dq);
                lhs = lhs.add_scaled(co, &c.coalg.comult_amb(ic).map_indices(|z| z * dq + iq));
                rhs = rhs.add_scaled(co, &c.coaction_amb[iq].map_indices(|z| ic * dc * dq + z));
            }
            if project2(&lhs)? != project2(&rhs)? {
                return Err(WbError::Validation("coaction not coassociative".into()));
            }
        }
        Ok(c)
    }

    pub fn coaction_amb(&self, i: usize) -> &SVec {
        &self.coaction_amb[i]
    }
}

/// Basis of the left-linear maps `Q -> A` and a dual basis for a f.g.
/// projective left module.
pub fn left_dual_basis(q: &LeftModule) -> Result<DualBasis> {
    let field = q.field();
    let pairs: Vec<(ColMat, ColMat)> = (0..q.alg.dim)
        .map(|t| (q.act_mat(t).clone(), ColMat::from_dense(&q.alg.left_mult(t))))
        .collect();
    let hom_basis = crate::bimod::intertwiner_space(field, q.dim, q.alg.dim, &pairs);
    let m = hom_basis.len();
    let n = q.dim;
    // q_k = sum_{j,s} c[j][s] h_s(q_k) . e_j
    let mut rows = Vec::new();
    for k in 0..n {
        let mut comp: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n];
        for j in 0..n {
            for (s, h) in hom_basis.iter().enumerate() {
                let a = h.col_svec(k);
                let mut v = SVec::zero();
                for (t, ct) in &a.entries {
                    v = v.add_scaled(ct, &q.act_mat(*t).cols_v[j]);
                }
                for (r, c) in &v.entries {
                    comp[*r].push((j * m + s, c.clone()));
                }
            }
        }
        for (r, mut pairs_row) in comp.into_iter().enumerate() {
            if r == k {
                pairs_row.push((n * m, field.one().neg()));
            }
            let row = SVec::from_pairs(pairs_row);
            if !row.is_zero() {
                rows.push(row);
            }
        }
    }
    let sol = crate::exactlin::solve_affine(field, n * m, &rows)
        .ok_or_else(|| WbError::Validation("NotProjective: no dual basis exists".into()))?;
    let coeffs = (0..n)
        .map(|j| {
            SVec::from_pairs(
                sol.entries
                    .iter()
                    .filter(|(u, _)| u / m == j)
                    .map(|(u, c)| (u % m, c.clone()))
                    .collect(),
            )
        })
        .collect();
    Ok(DualBasis { hom_basis, coeffs })
}

/// The left C-comodule on `P* = Hom_A(P, A)` of a f.g. projective right
/// comodule, with coaction `p* -> sum_i p*(p_i_(0)) . p_i_(1) (x) phi_i`.
pub fn dual_comodule(p: &Comodule) -> Result<LeftComodule> {
    let field = p.module.field();
    let alg = p.module.alg.clone();
    let db = dual_basis(&p.module)?;
    let m = db.hom_basis.len();
    let (dp, dc) = (p.module.dim, p.coalg.dim());
    let flat: Vec<SVec> = db.hom_basis.iter().map(flatten_mat).collect();
    // left A-module structure on P*
    let mut action = Vec::with_capacity(alg.dim);
    for t in 0..alg.dim {
        let lt = alg.left_mult(t);
        let mut cols = Vec::with_capacity(m);
        for h in &db.hom_basis {
            let c = coords_in_span(field, alg.dim * dp, &flat, &flatten_mat(&lt.mul(h)?))
                .ok_or_else(|| {
                    WbError::Validation("left action leaves the dual space".into())
                })?;
            cols.push(c);
        }
        action.push(ColMat { field, rows: m, cols_v: cols });
    }
    let module = LeftModule::new(alg, m, action)?;
    // coaction columns in the ambient of C (x) P*
    let mut cols = Vec::with_capacity(m);
    for u in 0..m {
        let mut col = SVec::zero();
        for i in 0..dp {
            for (x, co) in &p.coaction_amb(i).entries {
                let (ip, ic) = (x / dc, x % dc);
                let a = db.hom_basis[u].col_svec(ip);
                let cval = p.coalg.carrier.apply_left_elem(&a, &SVec::unit(ic, field));
                for (r, cc) in &cval.entries {
                    for (s, cs) in &db.coeffs[i].entries {
                        col = col.add_scaled(
                            &co.mul(cc).mul(cs),
                            &SVec::unit(r * m + s, field),
                        );
                    }
                }
            }
        }
        cols.push(col);
    }
    LeftComodule::new(module, p.coalg.clone(), cols)
}

/// The right C-comodule on `Q* = Hom_A(Q, A)` of a f.g. projective left
/// comodule.
pub fn dual_left_comodule(q: &LeftComodule) -> Result<Comodule> {
    let field = q.module.field();
    let alg = q.module.alg.clone();
    let db = left_dual_basis(&q.module)?;
    let m = db.hom_basis.len();
    let (dq, dc) = (q.module.dim, q.coalg.dim());
    let flat: Vec<SVec> = db.hom_basis.iter().map(flatten_mat).collect();
    // right A-module structure on Q*: (phi . a)(x) = phi(x) a
    let mut action = Vec::with_capacity(alg.dim);
    for t in 0..alg.dim {
        let rt = alg.right_mult(t);
        let mut cols = Vec::with_capacity(m);
        for h in &db.hom_basis {
            let c = coords_in_span(field, alg.dim * dq, &flat, &flatten_mat(&rt.mul(h)?))
                .ok_or_else(|| {
                    WbError::Validation("right action leaves the dual space".into())
                })?;
            cols.push(c);
        }
        action.push(ColMat { field, rows: m, cols_v: cols });
    }
    let module = RightModule::new(alg, m, action)?;
    // coaction columns in the ambient of Q* (x) C
    let mut cols = Vec::with_capacity(m);
    for u in 0..m {
        let mut col = SVec::zero();
        for j in 0..dq {
            for (x, co) in &q.coaction_amb(j).entries {
                let (ic, iq) = (x / dq, x % dq);
                let a = db.hom_basis[u].col_svec(iq);
                let cval = q.coalg.carrier.apply_right_elem(&a, &SVec::unit(ic, field));
                for (r, cc) in &cval.entries {
                    for (s, cs) in &db.coeffs[j].entries {
                        col = col.add_scaled(
                            &co.mul(cc).mul(cs),
                            &SVec::unit(s * dc + r, field),
                        );
                    }
                }
            }
        }
        cols.push(col);
    }
    Comodule::new(module, q.coalg.clone(), cols)
}

/// Whether `m` is an isomorphism of coalgebras `c1 -> c2` (invertible,
/// commutes with counits and comultiplications).
pub fn is_coalgebra_iso(c1: &Coalgebra, c2: &Coalgebra, m: &ColMat) -> bool {
    let n = c1.dim();
    if n != c2.dim() || m.rows != n || m.cols() != n || m.rank() != n {
        return false;
    }
    for i in 0..n {
        if c2.counit.apply(&m.cols_v[i]) != c1.counit.cols_v[i] {
            return false;
        }
        // (m (x) m) delta_1 vs delta_2 . m, compared in c2's tensor square
        let mut lhs_amb = SVec::zero();
        for (xy, c) in &c1.comult_amb(i).entries {
            let (x, y) = (xy / n, xy % n);
            let (mx, my) = (&m.cols_v[x], &m.cols_v[y]);
            for (r1, a) in &mx.entries {
                for (r2, b) in &my.entries {
                    lhs_amb =
                        lhs_amb.add_scaled(&c.mul(a).mul(b), &SVec::unit(r1 * n + r2, c1.field()));
                }
            }
        }
        let lhs = match c2.square.pres.project(&lhs_amb) {
            Ok(v) => v,
            Err(_) => return false,
        };
        if lhs != c2.comult.apply(&m.cols_v[i]) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dual_numbers(field: Field) -> Algebra {
        Algebra::truncated_polynomial(field, 2)
    }

    fn f4() -> Arc<Algebra> {
        let f = Field::Fp(2);
        Algebra::polynomial_quotient(f, &[f.one(), f.one()]).unwrap().shared()
    }

    #[test]
    fn sweedler_examples() {
        // base field: 1-dimensional trivial coalgebra
        let k = Algebra::truncated_polynomial(Field::Q, 1).shared();
        let c = sweedler_coalgebra(&k);
        assert_eq!(c.dim(), 1);
        // dual numbers: eps(x (x) x) = 0
        let dn = dual_numbers(Field::Q).shared();
        let c = sweedler_coalgebra(&dn);
        assert_eq!(c.dim(), 4);
        assert!(c.counit.cols_v[1 * 2 + 1].is_zero());
        // F_4 over F_2: validated by construction
        assert_eq!(sweedler_coalgebra(&f4()).dim(), 4);
    }

    #[test]
    fn perturbed_comult_rejected() {
        let dn = dual_numbers(Field::Q).shared();
        let c = sweedler_coalgebra(&dn);
        let mut bad = c.comult.clone();
        // add a spurious term to one column
        bad.cols_v[1] = bad.cols_v[1].add(&SVec::unit(0, Field::Q));
        assert!(make_coalgebra(c.carrier.clone(), bad, c.counit.clone()).is_err());
    }

    #[test]
    fn endomorphism_coalgebra_free_rank_one() {
        let dn = dual_numbers(Field::Q).shared();
        let p = RightModule::regular(dn.clone());
        let (c, _db) = endomorphism_coalgebra(&p).unwrap();
        assert_eq!(c.dim(), 4);
        // canonical iso to the Sweedler coalgebra: h (x) p -> h(1) (x) p
        let sw = sweedler_coalgebra(&dn);
        let unit = dn.unit_svec();
        let hb = right_dual_space(&p);
        let m = hb.len();
        let cols: Vec<SVec> = (0..c.dim())
            .map(|x| {
                let (s, k) = (x / p.dim, x % p.dim);
                let mut a = SVec::zero();
                for (t, ct) in &unit.entries {
                    a = a.add_scaled(ct, &hb[s].col_svec(*t));
                }
                a.map_indices(|r| r * p.dim + k)
            })
            .collect();
        let _ = m;
        let iso = ColMat { field: Field::Q, rows: 4, cols_v: cols };
        assert!(is_coalgebra_iso(&c, &sw, &iso));
    }

    fn module_endos(p: &RightModule) -> usize {
        let pairs: Vec<(ColMat, ColMat)> =
            (0..p.alg.dim).map(|t| (p.act_mat(t).clone(), p.act_mat(t).clone())).collect();
        crate::bimod::intertwiner_space(p.field(), p.dim, p.dim, &pairs).len()
    }

    #[test]
    fn endomorphism_coalgebra_matrix_columns() {
        // P simple, so End(P) is one-dimensional and so is the convolution
        // ring Hom_A(D, A)_A
        let m2 = Algebra::matrix_algebra(Field::Q, 2).shared();
        let p = RightModule::matrix_columns(m2, 2).unwrap();
        let (c, _) = endomorphism_coalgebra(&p).unwrap();
        assert_eq!(c.dim(), 4);
        let conv = convolution_ring(&c).unwrap();
        assert_eq!(conv.ring.dim, module_endos(&p));
        assert_eq!(conv.ring.dim, 1);
    }

    #[test]
    fn convolution_ring_matches_module_endos_on_mixed_sum() {
        // P = A (+) columns over matrix(2): End(P) has dimension 9
        let m2 = Algebra::matrix_algebra(Field::Q, 2).shared();
        let free = RightModule::regular(m2.clone());
        let cols = RightModule::matrix_columns(m2.clone(), 2).unwrap();
        let dim = free.dim + cols.dim;
        let action: Vec<ColMat> = (0..m2.dim)
            .map(|t| {
                let (a, b) = (free.act_mat(t), cols.act_mat(t));
                let mut cols_v = Vec::with_capacity(dim);
                for j in 0..free.dim {
                    cols_v.push(a.cols_v[j].clone());
                }
                for j in 0..cols.dim {
                    cols_v.push(b.cols_v[j].map_indices(|r| r + free.dim));
                }
                ColMat { field: Field::Q, rows: dim, cols_v }
            })
            .collect();
        let p = RightModule::new(m2, dim, action).unwrap();
        assert_eq!(module_endos(&p), 9);
        let (c, _) = endomorphism_coalgebra(&p).unwrap();
        let conv = convolution_ring(&c).unwrap();
        assert_eq!(conv.ring.dim, 9);
    }

    #[test]
    fn endomorphism_coalgebra_split_idempotent() {
        // A = K x K, P = K x 0
        let f = Field::Q;
        let kk = Algebra::function_algebra(f, 2).shared();
        let one = ColMat::identity(f, 1);
        let zero = ColMat::zeros(f, 1, 1);
        let p = RightModule::new(kk, 1, vec![one, zero]).unwrap();
        let (c, _) = endomorphism_coalgebra(&p).unwrap();
        assert_eq!(c.dim(), 1);
    }

    #[test]
    fn non_projective_rejected() {
        // A = dual numbers, P = A/(x) is not projective
        let dn = dual_numbers(Field::Q).shared();
        let one = ColMat::identity(Field::Q, 1);
        let zero = ColMat::zeros(Field::Q, 1, 1);
        let p = RightModule::new(dn, 1, vec![one, zero]).unwrap();
        assert!(dual_basis(&p).is_err());
    }

    #[test]
    fn convolution_ring_of_sweedler_is_base() {
        for alg in [
            dual_numbers(Field::Q).shared(),
            f4(),
            Algebra::matrix_algebra(Field::Q, 2).shared(),
        ] {
            let c = sweedler_coalgebra(&alg);
            let conv = convolution_ring(&c).unwrap();
            assert_eq!(conv.ring.dim, alg.dim);
            sweedler_convolution_iso(&c, &conv).unwrap();
        }
    }

    #[test]
    fn trivial_coalgebra_convolution_is_base_field() {
        let k = Algebra::truncated_polynomial(Field::Q, 1).shared();
        let c = sweedler_coalgebra(&k);
        let conv = convolution_ring(&c).unwrap();
        assert_eq!(conv.ring.dim, 1);
    }

    #[test]
    fn identity_representation_valid() {
        for alg in [dual_numbers(Field::Q).shared(), Algebra::matrix_algebra(Field::Q, 2).shared()]
        {
            let rep = identity_representation(&alg).unwrap();
            assert_eq!(rep.induced.dim, alg.dim * alg.dim);
        }
    }

    #[test]
    fn bad_functionals_rejected() {
        let dn = dual_numbers(Field::Q).shared();
        let rep = identity_representation(&dn).unwrap();
        let mut bad = rep.functionals.clone();
        // f(x) := f(x) + eps is no longer multiplicative (x^2 = 0)
        bad[1] = bad[1].add(&rep.coalg.counit.to_dense()).unwrap();
        assert!(make_representation(dn.clone(), rep.coalg.clone(), bad).is_err());
    }

    /// The representation of the base field on any coalgebra, with the
    /// counit as the only functional.
    fn scalar_representation(coalg: Arc<Coalgebra>) -> Representation {
        let field = coalg.field();
        let k = Algebra::truncated_polynomial(field, 1).shared();
        let f = coalg.counit.to_dense();
        make_representation(k, coalg, vec![f]).unwrap()
    }

    #[test]
    fn pullback_of_regular_is_base() {
        let dn = dual_numbers(Field::Q).shared();
        let rep = identity_representation(&dn).unwrap();
        let n = Bimodule::regular(rep.ring.clone());
        let p = pullback(&rep, &n).unwrap();
        assert_eq!(p.space.dim, dn.dim);
    }

    #[test]
    fn shriek_push_of_regular_is_base() {
        let dn = dual_numbers(Field::Q).shared();
        let rep = identity_representation(&dn).unwrap();
        let f = Bimodule::regular(dn.clone());
        let p = shriek_push(&rep, &f).unwrap();
        assert_eq!(p.space.dim, dn.dim);
    }

    #[test]
    fn star_adjunction_dims() {
        for alg in [dual_numbers(Field::Q).shared(), f4()] {
            let rep = identity_representation(&alg).unwrap();
            let scalar = scalar_representation(rep.coalg.clone());
            for r in [&rep, &scalar] {
                let n = Bimodule::regular(r.ring.clone());
                let m = Bimodule::regular(alg.clone());
                let fs_n = pullback(r, &n).unwrap();
                let fp_m = pushforward(r, &m).unwrap();
                assert_eq!(hom_aa(&fs_n.space, &m).len(), hom_aa(&n, &fp_m.space).len());
            }
        }
    }

    #[test]
    fn shriek_adjunction_dims() {
        for alg in [dual_numbers(Field::Q).shared(), f4()] {
            let rep = identity_representation(&alg).unwrap();
            let scalar = scalar_representation(rep.coalg.clone());
            for r in [&rep, &scalar] {
                let f = Bimodule::regular(alg.clone());
                let g = Bimodule::regular(r.ring.clone());
                let fb = shriek_push(r, &f).unwrap();
                let gp = shriek_pull(r, &g).unwrap();
                assert_eq!(hom_aa(&fb.space, &g).len(), hom_aa(&f, &gp.space).len());
            }
        }
    }

    #[test]
    fn monoidal_map_exists() {
        let dn = dual_numbers(Field::Q).shared();
        let rep = identity_representation(&dn).unwrap();
        let m = Bimodule::regular(dn.clone());
        let map = monoidal_map(&rep, &m, &m).unwrap();
        assert!(map.is_invertible());
    }

    #[test]
    fn projection_maps_identity_rep() {
        let dn = dual_numbers(Field::Q).shared();
        let rep = identity_representation(&dn).unwrap();
        let f = Bimodule::regular(dn.clone());
        let g = Bimodule::regular(rep.ring.clone());
        let (m1, m2) = projection_maps(&rep, &f, &g).unwrap();
        assert!(m1.is_invertible());
        assert!(m2.is_invertible());
    }

    #[test]
    fn projection_maps_scalar_rep() {
        let alg = f4();
        let rep = identity_representation(&alg).unwrap();
        let scalar = scalar_representation(rep.coalg.clone());
        let f = Bimodule::regular(alg.clone());
        let g = Bimodule::regular(scalar.ring.clone());
        // existence + verified descent; for a non-identity representation
        // the maps need not be invertible
        projection_maps(&scalar, &f, &g).unwrap();
    }

    #[test]
    fn projection_map_natural_in_f() {
        // phi : A (x) A -> A the multiplication map; the square formed by
        // the first projection map for F = A (x) A and F' = A commutes
        let dn = dual_numbers(Field::Q).shared();
        let field = Field::Q;
        let rep = identity_representation(&dn).unwrap();
        let g = Bimodule::regular(rep.ring.clone());
        let f_big = Bimodule::outer_square(dn.clone());
        let f_small = Bimodule::regular(dn.clone());
        let phi = ColMat {
            field,
            rows: dn.dim,
            cols_v: (0..dn.dim * dn.dim)
                .map(|x| SVec::from_dense(dn.mul_basis(x / dn.dim, x % dn.dim)))
                .collect(),
        };
        BimoduleMap::new(f_big.clone(), f_small.clone(), phi.clone()).unwrap();
        let (dd, dg) = (rep.coalg.dim(), g.dim);
        let (df1, df2) = (f_big.dim, f_small.dim);
        let (p1, _) = projection_maps(&rep, &f_big, &g).unwrap();
        let (p1p, _) = projection_maps(&rep, &f_small, &g).unwrap();
        let shr = shriek_push(&rep, &f_big).unwrap();
        let shrp = shriek_push(&rep, &f_small).unwrap();
        let fsg = pullback(&rep, &g).unwrap();
        let pg = fsg.space.dim;
        let mid = tensor_over_a(&fsg.space, &f_big).unwrap();
        let midp = tensor_over_a(&fsg.space, &f_small).unwrap();
        let rhs = shriek_push(&rep, &mid.space).unwrap();
        let rhsp = shriek_push(&rep, &midp.space).unwrap();
        let src = tensor_over_a(&g, &shr.space).unwrap();
        let srcp = tensor_over_a(&g, &shrp.space).unwrap();
        let apply_phi = |v: &SVec, trailing_pos: bool| -> SVec {
            // applies phi to the last digit (size df1 -> df2)
            let _ = trailing_pos;
            let mut out = SVec::zero();
            for (x, c) in &v.entries {
                let (head, jf) = (x / df1, x % df1);
                out = out.add_scaled(c, &phi.cols_v[jf].map_indices(|r| head * df2 + r));
            }
            out
        };
        // source functorial map src(F) -> src(F')
        let reps_src: Vec<SVec> = (0..src.space.dim)
            .map(|b| {
                let mut out = SVec::zero();
                for (x, c) in &src.pres.section(b).entries {
                    let (ig, bs) = (x / shr.space.dim, x % shr.space.dim);
                    out = out
                        .add_scaled(c, &shr.pres.section(bs).map_indices(|y| ig * dd * df1 + y));
                }
                out
            })
            .collect();
        let mut gens_src: Vec<SVec> = Vec::new();
        for w in shr.pres.denom_basis() {
            for ig in 0..dg {
                gens_src.push(w.map_indices(|y| ig * dd * df1 + y));
            }
        }
        for w in src.pres.denom_basis() {
            let mut out = SVec::zero();
            for (x, c) in &w.entries {
                let (ig, bs) = (x / shr.space.dim, x % shr.space.dim);
                out = out.add_scaled(c, &shr.pres.section(bs).map_indices(|y| ig * dd * df1 + y));
            }
            gens_src.push(out);
        }
        let lmap = map_on_quotients(
            field,
            srcp.space.dim,
            &reps_src,
            &gens_src,
            |v| apply_phi(v, true),
            |v| {
                let v = permute_digits(v, &[dg, dd * df2], &[1, 0]);
                let v = project_head(&shrp.pres, dg, &v)?;
                let v = permute_digits(&v, &[shrp.space.dim, dg], &[1, 0]);
                srcp.pres.project(&v)
            },
        )
        .unwrap();
        // target functorial map rhs(F) -> rhs(F'), ambient digits (d, b1, f)
        let reps_rhs: Vec<SVec> = (0..rhs.space.dim)
            .map(|b| {
                let mut out = SVec::zero();
                for (x, c) in &rhs.pres.section(b).entries {
                    let (id, bm) = (x / mid.space.dim, x % mid.space.dim);
                    out = out
                        .add_scaled(c, &mid.pres.section(bm).map_indices(|y| id * pg * df1 + y));
                }
                out
            })
            .collect();
        let mut gens_rhs: Vec<SVec> = Vec::new();
        for w in mid.pres.denom_basis() {
            for id in 0..dd {
                gens_rhs.push(w.map_indices(|y| id * pg * df1 + y));
            }
        }
        for w in rhs.pres.denom_basis() {
            let mut out = SVec::zero();
            for (x, c) in &w.entries {
                let (id, bm) = (x / mid.space.dim, x % mid.space.dim);
                out = out.add_scaled(c, &mid.pres.section(bm).map_indices(|y| id * pg * df1 + y));
            }
            gens_rhs.push(out);
        }
        let rmap = map_on_quotients(
            field,
            rhsp.space.dim,
            &reps_rhs,
            &gens_rhs,
            |v| apply_phi(v, true),
            |v| {
                let v = permute_digits(v, &[dd, pg * df2], &[1, 0]);
                let v = project_head(&midp.pres, dd, &v)?;
                let v = permute_digits(&v, &[midp.space.dim, dd], &[1, 0]);
                rhsp.pres.project(&v)
            },
        )
        .unwrap();
        let via_top = p1p.matrix.compose(&lmap).unwrap();
        let via_bottom = rmap.compose(&p1.matrix).unwrap();
        assert_eq!(via_top, via_bottom);
    }

    #[test]
    fn trace_adjunction_invertible() {
        let dn = dual_numbers(Field::Q).shared();
        let rep = identity_representation(&dn).unwrap();
        let f = Bimodule::regular(dn.clone());
        let g = Bimodule::regular(rep.ring.clone());
        trace_adjunction(&rep, &f, &g).unwrap();
        let scalar = scalar_representation(rep.coalg.clone());
        let gk = Bimodule::regular(scalar.ring.clone());
        trace_adjunction(&scalar, &f, &gk).unwrap();
    }

    fn group_like_coalgebra(field: Field) -> Arc<Coalgebra> {
        let k = Algebra::truncated_polynomial(field, 1).shared();
        let id = ColMat::identity(field, 2);
        let carrier = Bimodule::new(k, 2, vec![id.clone()], vec![id]).unwrap();
        let cols = vec![SVec::unit(0, field), SVec::unit(3, field)];
        let counit = ColMat {
            field,
            rows: 1,
            cols_v: vec![SVec::unit(0, field), SVec::unit(0, field)],
        };
        Coalgebra::from_ambient_comult(carrier, cols, Vec::new(), counit).unwrap().shared()
    }

    fn group_like_point(c: &Arc<Coalgebra>, which: usize) -> Bicomodule {
        let field = c.field();
        let k = c.alg().clone();
        let id = ColMat::identity(field, 1);
        let space = Bimodule::new(k, 1, vec![id.clone()], vec![id]).unwrap();
        Bicomodule::new(
            space,
            c.clone(),
            vec![SVec::unit(which, field)],
            vec![SVec::unit(which, field)],
        )
        .unwrap()
    }

    #[test]
    fn cotensor_group_likes() {
        let c = group_like_coalgebra(Field::Q);
        let p0 = group_like_point(&c, 0);
        let p1 = group_like_point(&c, 1);
        assert_eq!(cotensor(&p0, &p1).unwrap().dim(), 0);
        assert_eq!(cotensor(&p0, &p0).unwrap().dim(), 1);
    }

    #[test]
    fn cotensor_regular_is_identity() {
        for alg in [f4(), dual_numbers(Field::Q).shared()] {
            let c = sweedler_coalgebra(&alg).shared();
            let r = regular_bicomodule(&c).unwrap();
            assert_eq!(cotensor(&r, &r).unwrap().dim(), c.dim());
        }
    }

    fn sweedler_comodule(alg: &Arc<Algebra>) -> Comodule {
        let field = alg.field;
        let da = alg.dim;
        let c = sweedler_coalgebra(alg).shared();
        let p = RightModule::regular(alg.clone());
        let unit = alg.unit_svec();
        let cols: Vec<SVec> = (0..da)
            .map(|a| {
                let mut col = SVec::zero();
                for (u, cu) in &unit.entries {
                    for (k, ck) in &unit.entries {
                        let idx = u * da * da + (k * da + a);
                        col = col.add_scaled(&cu.mul(ck), &SVec::unit(idx, field));
                    }
                }
                col
            })
            .collect();
        Comodule::new(p, c, cols).unwrap()
    }

    #[test]
    fn sweedler_comodule_and_dual() {
        for alg in [dual_numbers(Field::Q).shared(), f4()] {
            let p = sweedler_comodule(&alg);
            let q = dual_comodule(&p).unwrap();
            assert_eq!(q.module.dim, alg.dim);
            let pp = dual_left_comodule(&q).unwrap();
            assert_eq!(pp.module.dim, alg.dim);
        }
    }

    #[test]
    fn double_dual_matches_original() {
        let alg = f4();
        let field = alg.field;
        let p = sweedler_comodule(&alg);
        let q = dual_comodule(&p).unwrap();
        let pp = dual_left_comodule(&q).unwrap();
        let dc = p.coalg.dim();
        // canonical map P -> P**: p -> (phi -> phi(p))
        let hb1 = dual_basis(&p.module).unwrap().hom_basis;
        let hb2 = left_dual_basis(&q.module).unwrap().hom_basis;
        let flat2: Vec<SVec> = hb2.iter().map(flatten_mat).collect();
        let m2 = hb2.len();
        let iota: Vec<SVec> = (0..p.module.dim)
            .map(|k| {
                let cols: Vec<SVec> = hb1.iter().map(|h| h.col_svec(k)).collect();
                let ev = Mat::from_cols(field, alg.dim, &cols);
                coords_in_span(field, alg.dim * hb1.len(), &flat2, &flatten_mat(&ev)).unwrap()
            })
            .collect();
        // the coactions agree through iota
        for k in 0..p.module.dim {
            let mut lhs = SVec::zero();
            for (x, c) in &p.coaction_amb(k).entries {
                let (ip, ic) = (x / dc, x % dc);
                for (r, cr) in &iota[ip].entries {
                    lhs = lhs.add_scaled(&c.mul(cr), &SVec::unit(r * dc + ic, field));
                }
            }
            let mut rhs = SVec::zero();
            for (s, c) in &iota[k].entries {
                rhs = rhs.add_scaled(c, pp.coaction_amb(*s));
            }
            let _ = m2;
            assert_eq!(pp.pres.project(&lhs).unwrap(), pp.pres.project(&rhs).unwrap());
        }
    }

    #[test]
    fn compose_with_identity_is_identityish() {
        // composing the identity representation with itself gives a coalgebra
        // isomorphic to Sweedler again (dimension check + axioms revalidated
        // inside compose)
        let dn = dual_numbers(Field::Q).shared();
        let rep = identity_representation(&dn).unwrap();
        let (comp, _pres) = compose_representations(&rep, &rep).unwrap();
        assert_eq!(comp.coalg.dim(), rep.coalg.dim());
        assert_eq!(*comp.ring.as_ref(), *dn.as_ref());
    }
}
