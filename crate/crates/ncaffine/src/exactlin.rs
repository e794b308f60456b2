//! Exact dense/sparse linear algebra over `Q` and `F_p`.
//!
//! Everything downstream reduces to a handful of primitives implemented here:
//! echelon bases with deterministic (first-pivot) conventions, kernels of
//! constraint systems, subquotient presentations `S/D` of an ambient
//! coordinate space with canonical projections and chosen sections, induced
//! maps with mandatory descent verification, and a constrained splitting
//! solver.

use crate::{Result, WbError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;

/// Coefficient field tag: the rationals or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    pub fn zero(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { v: 0, p: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::one()),
            Field::Fp(p) => Scalar::Fp { v: 1 % *p, p: *p },
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Fp(p) => {
                let m = n.rem_euclid(*p as i64) as u64;
                Scalar::Fp { v: m, p: *p }
            }
        }
    }

    /// Characteristic of the field (0 for `Q`).
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Q => 0,
            Field::Fp(p) => *p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "Fp:{p}"),
        }
    }
}

/// An element of `Q` or of a prime field `F_p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

fn fp_inv(a: u64, p: u64) -> u64 {
    // extended Euclid; p is prime and a != 0 mod p
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "attempted to invert a multiple of p");
    t.rem_euclid(p as i128) as u64
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, p } => *v == 1 % *p,
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp { v: (a + b) % p, p: *p }
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp { v: (p - v) % p, p: *p },
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp { v: ((*a as u128 * *b as u128) % *p as u128) as u64, p: *p }
            }
            _ => panic!("field mismatch"),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(WbError::NotInvertible("division by zero".into()));
        }
        Ok(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp { v, p } => Scalar::Fp { v: fp_inv(*v, *p), p: *p },
        })
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&o.inv()?))
    }

    /// Renders `a/b` (the denominator omitted when 1) or the `F_p` residue.
    pub fn render(&self) -> String {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => format!("{v}"),
        }
    }

    /// Parses either an integer or `a/b` over the given field.
    pub fn parse(field: Field, s: &str) -> Result<Scalar> {
        let bad = || WbError::BadInput(format!("cannot parse scalar {s:?}"));
        match field {
            Field::Q => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Q(BigRational::new(n, d)))
            }
            Field::Fp(p) => {
                let n: i64 = s.trim().parse().map_err(|_| bad())?;
                Ok(Scalar::Fp { v: n.rem_euclid(p as i64) as u64, p })
            }
        }
    }

    /// Magnitude proxy used only by tests/diagnostics.
    pub fn abs_num_bits(&self) -> u64 {
        match self {
            Scalar::Q(r) => (r.numer().abs().bits()).max(r.denom().bits()),
            Scalar::Fp { .. } => 1,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// A sparse vector: sorted `(index, nonzero scalar)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SVec {
    pub entries: Vec<(usize, Scalar)>,
}

impl SVec {
    pub fn zero() -> SVec {
        SVec { entries: Vec::new() }
    }

    pub fn unit(i: usize, field: Field) -> SVec {
        SVec { entries: vec![(i, field.one())] }
    }

    pub fn single(i: usize, c: Scalar) -> SVec {
        if c.is_zero() {
            SVec::zero()
        } else {
            SVec { entries: vec![(i, c)] }
        }
    }

    pub fn from_pairs(mut pairs: Vec<(usize, Scalar)>) -> SVec {
        pairs.retain(|(_, c)| !c.is_zero());
        pairs.sort_by_key(|(i, _)| *i);
        // merge duplicates
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(pairs.len());
        for (i, c) in pairs {
            match out.last_mut() {
                Some((j, d)) if *j == i => {
                    *d = d.add(&c);
                }
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        SVec { entries: out }
    }

    pub fn from_dense(v: &[Scalar]) -> SVec {
        SVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, n: usize, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); n];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    /// Leading (smallest-index) entry.
    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn scale(&self, c: &Scalar) -> SVec {
        if c.is_zero() {
            return SVec::zero();
        }
        SVec {
            entries: self.entries.iter().map(|(i, a)| (*i, a.mul(c))).collect(),
        }
    }

    /// `self + c * other`, merging sorted entry lists.
    pub fn add_scaled(&self, c: &Scalar, other: &SVec) -> SVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0usize, 0usize);
        while a < self.entries.len() || b < other.entries.len() {
            let pick_a = match (self.entries.get(a), other.entries.get(b)) {
                (Some((i, _)), Some((j, _))) => {
                    if i == j {
                        let s = self.entries[a].1.add(&c.mul(&other.entries[b].1));
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a += 1;
                        b += 1;
                        continue;
                    }
                    i < j
                }
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            if pick_a {
                out.push(self.entries[a].clone());
                a += 1;
            } else {
                let (j, v) = &other.entries[b];
                let s = c.mul(v);
                if !s.is_zero() {
                    out.push((*j, s));
                }
                b += 1;
            }
        }
        SVec { entries: out }
    }

    pub fn add(&self, other: &SVec) -> SVec {
        match (self.is_zero(), other.is_zero()) {
            (true, _) => other.clone(),
            (_, true) => self.clone(),
            _ => {
                let one = self.entries[0].1.field().one();
                self.add_scaled(&one, other)
            }
        }
    }

    pub fn sub(&self, other: &SVec) -> SVec {
        match (self.is_zero(), other.is_zero()) {
            (_, true) => self.clone(),
            (true, _) => other.scale(&other.entries[0].1.field().from_i64(-1)),
            _ => {
                let m1 = self.entries[0].1.field().from_i64(-1);
                self.add_scaled(&m1, other)
            }
        }
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Re-index entries through `f` (must be strictly monotone on the support).
    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> SVec {
        SVec::from_pairs(self.entries.iter().map(|(i, c)| (f(*i), c.clone())).collect())
    }

    /// Dot product with a dense row.
    pub fn dot_dense(&self, row: &[Scalar], field: Field) -> Scalar {
        let mut acc = field.zero();
        for (i, c) in &self.entries {
            acc = acc.add(&c.mul(&row[*i]));
        }
        acc
    }
}

/// A dense row-major matrix with a field tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub field: Field,
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { field, rows, cols, data }
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Mat {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend(r);
        }
        Mat { field, rows: n, cols, data }
    }

    /// Builds the matrix whose `j`-th column is `cols_v[j]`.
    pub fn from_cols(field: Field, rows: usize, cols_v: &[SVec]) -> Mat {
        let mut m = Mat::zeros(field, rows, cols_v.len());
        for (j, v) in cols_v.iter().enumerate() {
            for (i, c) in &v.entries {
                m.set(*i, j, c.clone());
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col_svec(&self, c: usize) -> SVec {
        SVec::from_pairs(
            (0..self.rows)
                .filter(|r| !self.get(*r, c).is_zero())
                .map(|r| (r, self.get(r, c).clone()))
                .collect(),
        )
    }

    pub fn row_svec(&self, r: usize) -> SVec {
        SVec::from_dense(self.row(r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn add(&self, o: &Mat) -> Result<Mat> {
        self.check_same_shape(o)?;
        Ok(Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, o: &Mat) -> Result<Mat> {
        self.check_same_shape(o)?;
        Ok(Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    fn check_same_shape(&self, o: &Mat) -> Result<()> {
        if self.field != o.field {
            return Err(WbError::FieldMismatch(format!("{} vs {}", self.field, o.field)));
        }
        if self.rows != o.rows || self.cols != o.cols {
            return Err(WbError::DimMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn mul(&self, o: &Mat) -> Result<Mat> {
        if self.field != o.field {
            return Err(WbError::FieldMismatch(format!("{} vs {}", self.field, o.field)));
        }
        if self.cols != o.rows {
            return Err(WbError::DimMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Mat::zeros(self.field, self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = o.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(r, c).add(&a.mul(b));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product with a sparse column vector.
    pub fn apply(&self, v: &SVec) -> SVec {
        let mut pairs = Vec::new();
        for (j, c) in &v.entries {
            for r in 0..self.rows {
                let a = self.get(r, *j);
                if !a.is_zero() {
                    pairs.push((r, a.mul(c)));
                }
            }
        }
        SVec::from_pairs(pairs)
    }

    /// Kronecker product (lexicographic index `i * o.rows + k` on rows, etc.).
    pub fn kron(&self, o: &Mat) -> Mat {
        let mut out = Mat::zeros(self.field, self.rows * o.rows, self.cols * o.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..o.rows {
                    for c2 in 0..o.cols {
                        let b = o.get(r2, c2);
                        if !b.is_zero() {
                            out.set(r1 * o.rows + r2, c1 * o.cols + c2, a.mul(b));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, o: &Mat) -> Result<Mat> {
        if self.rows != o.rows || self.field != o.field {
            return Err(WbError::DimMismatch("hstack".into()));
        }
        Ok(Mat::from_fn(self.field, self.rows, self.cols + o.cols, |r, c| {
            if c < self.cols { self.get(r, c).clone() } else { o.get(r, c - self.cols).clone() }
        }))
    }

    pub fn vstack(&self, o: &Mat) -> Result<Mat> {
        if self.cols != o.cols || self.field != o.field {
            return Err(WbError::DimMismatch("vstack".into()));
        }
        Ok(Mat::from_fn(self.field, self.rows + o.rows, self.cols, |r, c| {
            if r < self.rows { self.get(r, c).clone() } else { o.get(r - self.rows, c).clone() }
        }))
    }

    /// Rank via sparse echelon of the rows.
    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.field, self.cols);
        for r in 0..self.rows {
            ech.insert(self.row_svec(r), RowTag::Denominator);
        }
        ech.rows.len()
    }

    /// Basis of the null space `{v : self * v = 0}`, returned as the columns
    /// of a matrix, deterministically ordered by free coordinate.
    pub fn kernel_basis(&self) -> Mat {
        let rows: Vec<SVec> = (0..self.rows).map(|r| self.row_svec(r)).collect();
        let ker = kernel_of_constraints(self.field, self.cols, &rows);
        Mat::from_cols(self.field, self.cols, &ker)
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(WbError::NotInvertible("non-square".into()));
        }
        let n = self.rows;
        // classic dense Gauss-Jordan, adequate for the sizes we invert
        let mut a = self.clone();
        let mut inv = Mat::identity(self.field, n);
        for col in 0..n {
            // find pivot
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero());
            let piv = piv.ok_or_else(|| WbError::NotInvertible("singular".into()))?;
            if piv != col {
                for c in 0..n {
                    let (x, y) = (a.get(piv, c).clone(), a.get(col, c).clone());
                    a.set(piv, c, y);
                    a.set(col, c, x);
                    let (x, y) = (inv.get(piv, c).clone(), inv.get(col, c).clone());
                    inv.set(piv, c, y);
                    inv.set(col, c, x);
                }
            }
            let d = a.get(col, col).inv()?;
            for c in 0..n {
                a.set(col, c, a.get(col, c).mul(&d));
                inv.set(col, c, inv.get(col, c).mul(&d));
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for c in 0..n {
                    let v = a.get(r, c).sub(&f.mul(a.get(col, c)));
                    a.set(r, c, v);
                    let v = inv.get(r, c).sub(&f.mul(inv.get(col, c)));
                    inv.set(r, c, v);
                }
            }
        }
        Ok(inv)
    }

    pub fn to_colmat(&self) -> ColMat {
        ColMat {
            field: self.field,
            rows: self.rows,
            cols_v: (0..self.cols).map(|c| self.col_svec(c)).collect(),
        }
    }
}

/// Role of an echelon row inside a subquotient presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowTag {
    /// Spans the denominator (the subspace being killed).
    Denominator,
    /// A chosen coset representative of a quotient basis vector.
    Section,
}

/// An echelon basis (first-pivot convention, leading coefficients 1) with
/// tagged rows.  Rows are kept in insertion order; pivots are distinct.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub field: Field,
    pub ncols: usize,
    pub rows: Vec<SVec>,
    pub tags: Vec<RowTag>,
    row_by_pivot: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(field: Field, ncols: usize) -> Echelon {
        Echelon { field, ncols, rows: Vec::new(), tags: Vec::new(), row_by_pivot: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Forward-reduces `v` against the stored rows.  Returns the residual and
    /// the expansion coefficients on the stored rows (row index, coefficient).
    pub fn reduce(&self, v: SVec) -> (SVec, Vec<(usize, Scalar)>) {
        let mut v = v;
        let mut coeffs = Vec::new();
        let mut out = Vec::new(); // residual entries with index below current frontier
        loop {
            let Some((lead, c)) = v.leading().map(|(i, c)| (i, c.clone())) else {
                break;
            };
            match self.row_by_pivot.get(&lead) {
                Some(&r) => {
                    coeffs.push((r, c.clone()));
                    v = v.add_scaled(&c.neg(), &self.rows[r]);
                }
                None => {
                    out.push(v.entries.remove(0));
                    let _ = c;
                }
            }
        }
        out.extend(v.entries);
        (SVec::from_pairs(out), coeffs)
    }

    /// Reduces and, if independent, normalizes and inserts `v` with `tag`.
    /// Returns the new row index, or `None` if `v` was in the span.
    pub fn insert(&mut self, v: SVec, tag: RowTag) -> Option<usize> {
        let (res, _) = self.reduce(v);
        let (lead, c) = res.leading().map(|(i, c)| (i, c.clone()))?;
        let inv = c.inv().expect("nonzero leading coefficient");
        let row = res.scale(&inv);
        let idx = self.rows.len();
        self.rows.push(row);
        self.tags.push(tag);
        self.row_by_pivot.insert(lead, idx);
        Some(idx)
    }

    /// True if `v` lies in the row span.
    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v.clone()).0.is_zero()
    }
}

/// A presentation of a subquotient `S/D` of the coordinate space `K^ambient`.
///
/// Internally a single echelon basis: rows tagged `Denominator` span `D`,
/// rows tagged `Section` are the chosen coset representatives of the quotient
/// basis, so `proj . sect = id` holds by construction.
#[derive(Debug, Clone)]
pub struct Subquotient {
    ech: Echelon,
    section_rows: Vec<usize>,
}

impl Subquotient {
    /// Quotient of the whole ambient space by the span of `denom_gens`.
    /// Section representatives are the first unit vectors completing `D`.
    pub fn cokernel(field: Field, ambient: usize, denom_gens: impl IntoIterator<Item = SVec>) -> Subquotient {
        let mut ech = Echelon::new(field, ambient);
        for g in denom_gens {
            ech.insert(g, RowTag::Denominator);
        }
        let mut section_rows = Vec::new();
        for j in 0..ambient {
            if let Some(r) = ech.insert(SVec::unit(j, field), RowTag::Section) {
                section_rows.push(r);
            }
        }
        Subquotient { ech, section_rows }
    }

    /// Subquotient `span(sub_gens) / span(denom_gens)`; every denominator
    /// generator must lie in the span of `sub_gens`.
    pub fn subquotient(
        field: Field,
        ambient: usize,
        sub_gens: impl IntoIterator<Item = SVec>,
        denom_gens: impl IntoIterator<Item = SVec> + Clone,
    ) -> Result<Subquotient> {
        let mut check = Echelon::new(field, ambient);
        let mut ech = Echelon::new(field, ambient);
        for g in sub_gens {
            check.insert(g.clone(), RowTag::Denominator);
        }
        for g in denom_gens.clone() {
            if !check.contains(&g) {
                return Err(WbError::BadInput("denominator not contained in subspace".into()));
            }
            ech.insert(g, RowTag::Denominator);
        }
        let mut section_rows = Vec::new();
        for g in check.rows.iter() {
            if let Some(r) = ech.insert(g.clone(), RowTag::Section) {
                section_rows.push(r);
            }
        }
        Ok(Subquotient { ech, section_rows })
    }

    pub fn field(&self) -> Field {
        self.ech.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ech.ncols
    }

    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.section_rows.len()
    }

    pub fn denom_rank(&self) -> usize {
        self.ech.rows.len() - self.section_rows.len()
    }

    pub fn sub_rank(&self) -> usize {
        self.ech.rows.len()
    }

    /// Canonical image of an ambient vector in quotient coordinates.
    /// Errors if `v` is not in the subspace `S`.
    pub fn project(&self, v: &SVec) -> Result<SVec> {
        let (res, coeffs) = self.ech.reduce(v.clone());
        if !res.is_zero() {
            return Err(WbError::BadInput("vector not in the presented subspace".into()));
        }
        let mut pairs = Vec::new();
        for (row, c) in coeffs {
            if self.ech.tags[row] == RowTag::Section {
                let q = self.section_rows.binary_search(&row).expect("section row index");
                pairs.push((q, c));
            }
        }
        Ok(SVec::from_pairs(pairs))
    }

    /// True if `v` lies in the denominator `D` (i.e. projects to zero).
    pub fn in_denominator(&self, v: &SVec) -> bool {
        match self.project(v) {
            Ok(p) => p.is_zero(),
            Err(_) => false,
        }
    }

    pub fn in_subspace(&self, v: &SVec) -> bool {
        self.ech.contains(v)
    }

    /// Chosen ambient representative of the `i`-th quotient basis vector.
    pub fn section(&self, i: usize) -> &SVec {
        &self.ech.rows[self.section_rows[i]]
    }

    /// Ambient representative of an arbitrary quotient vector.
    pub fn section_of(&self, q: &SVec) -> SVec {
        let mut out = SVec::zero();
        for (i, c) in &q.entries {
            out = out.add_scaled(c, self.section(*i));
        }
        out
    }

    /// Basis of the denominator.
    pub fn denom_basis(&self) -> Vec<&SVec> {
        self.ech
            .rows
            .iter()
            .zip(&self.ech.tags)
            .filter(|(_, t)| **t == RowTag::Denominator)
            .map(|(r, _)| r)
            .collect()
    }

    /// Basis of the subspace `S` (denominator rows then section rows).
    pub fn sub_basis(&self) -> Vec<&SVec> {
        self.ech.rows.iter().collect()
    }

    /// `ambient x dim` matrix whose columns are the section representatives.
    pub fn sect_mat(&self) -> Mat {
        let cols: Vec<SVec> = (0..self.dim()).map(|i| self.section(i).clone()).collect();
        Mat::from_cols(self.field(), self.ambient_dim(), &cols)
    }

    /// `dim x ambient` matrix of the canonical projection.  Only available
    /// when the subspace is the whole ambient space.
    pub fn proj_mat(&self) -> Result<Mat> {
        if self.sub_rank() != self.ambient_dim() {
            return Err(WbError::BadInput(
                "projection matrix only defined on the full ambient space".into(),
            ));
        }
        let cols: Vec<SVec> = (0..self.ambient_dim())
            .map(|j| self.project(&SVec::unit(j, self.field())).expect("full ambient"))
            .collect();
        // cols[j] is the image of e_j, i.e. the j-th column of proj
        Ok(Mat::from_cols(self.field(), self.dim(), &cols))
    }

    /// Matrix of the map induced on quotients by the ambient map `f`
    /// (given as a column-sparse matrix `ambient_dom -> ambient_cod`),
    /// verifying that `f` maps `S_dom` into `S_cod` and `D_dom` into `D_cod`.
    pub fn induced_map(dom: &Subquotient, cod: &Subquotient, f: &ColMat) -> Result<ColMat> {
        if f.cols_v.len() != dom.ambient_dim() || f.rows != cod.ambient_dim() {
            return Err(WbError::DimMismatch("induced_map ambient shapes".into()));
        }
        for d in dom.denom_basis() {
            let img = f.apply(d);
            let p = cod.project(&img).map_err(|_| {
                WbError::NotWellDefined("image of denominator leaves the target subspace".into())
            })?;
            if !p.is_zero() {
                return Err(WbError::NotWellDefined(
                    "denominator does not map into the target denominator".into(),
                ));
            }
        }
        let mut cols = Vec::with_capacity(dom.dim());
        for i in 0..dom.dim() {
            let img = f.apply(dom.section(i));
            let p = cod.project(&img).map_err(|_| {
                WbError::NotWellDefined("image of section leaves the target subspace".into())
            })?;
            cols.push(p);
        }
        Ok(ColMat { field: dom.field(), rows: cod.dim(), cols_v: cols })
    }
}

/// A column-sparse matrix: column `j` is the image of the `j`-th basis vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColMat {
    pub field: Field,
    pub rows: usize,
    pub cols_v: Vec<SVec>,
}

impl ColMat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> ColMat {
        ColMat { field, rows, cols_v: vec![SVec::zero(); cols] }
    }

    pub fn identity(field: Field, n: usize) -> ColMat {
        ColMat { field, rows: n, cols_v: (0..n).map(|i| SVec::unit(i, field)).collect() }
    }

    pub fn cols(&self) -> usize {
        self.cols_v.len()
    }

    pub fn from_dense(m: &Mat) -> ColMat {
        m.to_colmat()
    }

    pub fn to_dense(&self) -> Mat {
        Mat::from_cols(self.field, self.rows, &self.cols_v)
    }

    pub fn apply(&self, v: &SVec) -> SVec {
        let mut out = SVec::zero();
        for (j, c) in &v.entries {
            out = out.add_scaled(c, &self.cols_v[*j]);
        }
        out
    }

    /// `self . o` (apply `o` first).
    pub fn compose(&self, o: &ColMat) -> Result<ColMat> {
        if self.cols() != o.rows {
            return Err(WbError::DimMismatch(format!(
                "compose {}x{} . {}x{}",
                self.rows,
                self.cols(),
                o.rows,
                o.cols()
            )));
        }
        Ok(ColMat {
            field: self.field,
            rows: self.rows,
            cols_v: o.cols_v.iter().map(|c| self.apply(c)).collect(),
        })
    }

    pub fn add(&self, o: &ColMat) -> Result<ColMat> {
        if self.rows != o.rows || self.cols() != o.cols() {
            return Err(WbError::DimMismatch("colmat add".into()));
        }
        Ok(ColMat {
            field: self.field,
            rows: self.rows,
            cols_v: self.cols_v.iter().zip(&o.cols_v).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, o: &ColMat) -> Result<ColMat> {
        if self.rows != o.rows || self.cols() != o.cols() {
            return Err(WbError::DimMismatch("colmat sub".into()));
        }
        Ok(ColMat {
            field: self.field,
            rows: self.rows,
            cols_v: self.cols_v.iter().zip(&o.cols_v).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> ColMat {
        ColMat {
            field: self.field,
            rows: self.rows,
            cols_v: self.cols_v.iter().map(|v| v.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols_v.iter().all(|c| c.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols()
            && self
                .cols_v
                .iter()
                .enumerate()
                .all(|(j, c)| c.entries.len() == 1 && c.entries[0].0 == j && c.entries[0].1.is_one())
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(self.field, self.rows);
        for c in &self.cols_v {
            ech.insert(c.clone(), RowTag::Denominator);
        }
        ech.rank()
    }

    /// Kernel basis (columns), deterministic.
    pub fn kernel(&self) -> Vec<SVec> {
        // constraints are the rows; build them from the columns
        let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.rows];
        for (j, c) in self.cols_v.iter().enumerate() {
            for (i, v) in &c.entries {
                rows[*i].push((j, v.clone()));
            }
        }
        let rows: Vec<SVec> = rows.into_iter().map(SVec::from_pairs).collect();
        kernel_of_constraints(self.field, self.cols(), &rows)
    }

    /// Inverse of a square invertible sparse matrix (errors otherwise).
    pub fn inverse(&self) -> Result<ColMat> {
        if self.rows != self.cols() {
            return Err(WbError::NotInvertible("non-square".into()));
        }
        Ok(ColMat::from_dense(&self.to_dense().inverse()?))
    }
}

/// Presentation of `codomain(m) / im(m)` as a subquotient of the full
/// codomain coordinate space.
pub fn cokernel_presentation(m: &Mat) -> Subquotient {
    Subquotient::cokernel(m.field, m.rows, (0..m.cols).map(|j| m.col_svec(j)))
}

/// Basis of the null space of `m` (columns).  See [`Mat::kernel_basis`].
pub fn kernel_basis(m: &Mat) -> Mat {
    m.kernel_basis()
}

/// Dense-matrix form of [`Subquotient::induced_map`].
pub fn induced_map(f: &Mat, dom: &Subquotient, cod: &Subquotient) -> Result<Mat> {
    Ok(Subquotient::induced_map(dom, cod, &f.to_colmat())?.to_dense())
}

/// Kernel of a homogeneous constraint system: each row `r` demands
/// `sum_j r_j x_j = 0` over `nunknowns` unknowns.  Basis vectors are indexed
/// by the free columns in increasing order (first-pivot convention).
pub fn kernel_of_constraints(field: Field, nunknowns: usize, rows: &[SVec]) -> Vec<SVec> {
    let mut ech = Echelon::new(field, nunknowns);
    for r in rows {
        ech.insert(r.clone(), RowTag::Denominator);
    }
    kernel_from_echelon(field, nunknowns, &ech)
}

fn kernel_from_echelon(field: Field, nunknowns: usize, ech: &Echelon) -> Vec<SVec> {
    let mut is_pivot = vec![false; nunknowns];
    // rows sorted by pivot for back-substitution
    let mut by_pivot: Vec<(usize, &SVec)> =
        ech.rows.iter().map(|r| (r.leading().expect("nonzero row").0, r)).collect();
    by_pivot.sort_by_key(|(p, _)| *p);
    for (p, _) in &by_pivot {
        is_pivot[*p] = true;
    }
    let mut out = Vec::new();
    for f in 0..nunknowns {
        if is_pivot[f] {
            continue;
        }
        // v[f] = 1, solve pivot coordinates from the bottom up
        let mut v = vec![field.zero(); nunknowns];
        v[f] = field.one();
        for (p, row) in by_pivot.iter().rev() {
            if *p > f {
                continue;
            }
            // row . v = 0  =>  v[p] = -(tail . v)   (leading coefficient is 1)
            let mut acc = field.zero();
            for (j, c) in row.entries.iter().skip(1) {
                if !v[*j].is_zero() {
                    acc = acc.add(&c.mul(&v[*j]));
                }
            }
            v[*p] = acc.neg();
        }
        out.push(SVec::from_dense(&v));
    }
    out
}

/// Solves the inhomogeneous system given by `rows` (constraints over
/// `nunknowns + 1` coordinates, the last coordinate standing for `-rhs`).
/// Returns the deterministic particular solution with all free unknowns 0,
/// or `None` if inconsistent.
pub fn solve_affine(field: Field, nunknowns: usize, rows: &[SVec]) -> Option<SVec> {
    let mut ech = Echelon::new(field, nunknowns + 1);
    for r in rows {
        ech.insert(r.clone(), RowTag::Denominator);
    }
    if ech.row_by_pivot.contains_key(&nunknowns) {
        return None; // a row reduces to "1 = 0"
    }
    // find the kernel vector with last coordinate 1 and all other free
    // coordinates 0
    let mut is_pivot = vec![false; nunknowns + 1];
    let mut by_pivot: Vec<(usize, &SVec)> =
        ech.rows.iter().map(|r| (r.leading().expect("nonzero row").0, r)).collect();
    by_pivot.sort_by_key(|(p, _)| *p);
    for (p, _) in &by_pivot {
        is_pivot[*p] = true;
    }
    let mut v = vec![field.zero(); nunknowns + 1];
    v[nunknowns] = field.one();
    for (p, row) in by_pivot.iter().rev() {
        let mut acc = field.zero();
        for (j, c) in row.entries.iter().skip(1) {
            if !v[*j].is_zero() {
                acc = acc.add(&c.mul(&v[*j]));
            }
        }
        v[*p] = acc.neg();
    }
    let mut sol = v;
    sol.pop();
    Some(SVec::from_dense(&sol))
}

/// Expresses `v` as a linear combination of `gens` (deterministic solution
/// with free coefficients 0), or `None` if `v` is outside the span.
pub fn coords_in_span(field: Field, ambient: usize, gens: &[SVec], v: &SVec) -> Option<SVec> {
    let m = gens.len();
    let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); ambient];
    for (s, g) in gens.iter().enumerate() {
        for (r, c) in &g.entries {
            rows[*r].push((s, c.clone()));
        }
    }
    for (r, c) in &v.entries {
        rows[*r].push((m, c.neg()));
    }
    let rows: Vec<SVec> =
        rows.into_iter().map(SVec::from_pairs).filter(|r| !r.is_zero()).collect();
    solve_affine(field, m, &rows)
}

/// Finds a retraction `r : V -> S` of the inclusion `incl : S -> V`
/// (`r . incl = id`) that additionally intertwines each constraint pair,
/// i.e. `r . t = s . r` for `(t, s)` in `constraints` (`t` acting on `V`,
/// `s` on `S`).  Deterministic first-pivot solution; `None` if impossible.
pub fn find_splitting(incl: &Mat, constraints: &[(Mat, Mat)]) -> Option<Mat> {
    let field = incl.field;
    let (n, q) = (incl.rows, incl.cols);
    let unknown = |i: usize, j: usize| i * n + j; // r[i][j], i < q, j < n
    let mut rows: Vec<SVec> = Vec::new();
    // r . incl = id_q
    for i in 0..q {
        for k in 0..q {
            let mut pairs: Vec<(usize, Scalar)> = (0..n)
                .filter(|j| !incl.get(*j, k).is_zero())
                .map(|j| (unknown(i, j), incl.get(j, k).clone()))
                .collect();
            let rhs = if i == k { field.one() } else { field.zero() };
            if !rhs.is_zero() {
                pairs.push((q * n, rhs.neg()));
            }
            rows.push(SVec::from_pairs(pairs));
        }
    }
    // r . t = s . r
    for (t, s) in constraints {
        for i in 0..q {
            for j in 0..n {
                let mut pairs: Vec<(usize, Scalar)> = Vec::new();
                for k in 0..n {
                    let c = t.get(k, j);
                    if !c.is_zero() {
                        pairs.push((unknown(i, k), c.clone()));
                    }
                }
                for k in 0..q {
                    let c = s.get(i, k);
                    if !c.is_zero() {
                        pairs.push((unknown(k, j), c.neg()));
                    }
                }
                rows.push(SVec::from_pairs(pairs));
            }
        }
    }
    let sol = solve_affine(field, q * n, &rows)?;
    let dense = sol.to_dense(q * n, field);
    Some(Mat::from_fn(field, q, n, |i, j| dense[unknown(i, j)].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Field::Q.from_i64(n)
    }

    fn qr(n: i64, d: i64) -> Scalar {
        Scalar::parse(Field::Q, &format!("{n}/{d}")).unwrap()
    }

    #[test]
    fn scalar_arithmetic_q() {
        let a = qr(1, 2);
        let b = qr(1, 3);
        assert_eq!(a.add(&b), qr(5, 6));
        assert_eq!(a.mul(&b), qr(1, 6));
        assert_eq!(a.sub(&b), qr(1, 6));
        assert_eq!(a.div(&b).unwrap(), qr(3, 2));
        assert_eq!(a.inv().unwrap(), q(2));
        assert!(q(0).inv().is_err());
    }

    #[test]
    fn scalar_arithmetic_fp() {
        let f = Field::Fp(7);
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(a.add(&b), f.from_i64(1));
        assert_eq!(a.mul(&b), f.from_i64(1));
        assert_eq!(a.inv().unwrap(), f.from_i64(5));
        assert_eq!(f.from_i64(-1), f.from_i64(6));
    }

    #[test]
    fn scalar_parse_render_roundtrip() {
        for s in ["0", "5", "-3", "7/3", "-11/4"] {
            let c = Scalar::parse(Field::Q, s).unwrap();
            assert_eq!(c.render(), s.to_string());
        }
        assert_eq!(Scalar::parse(Field::Q, "2/4").unwrap().render(), "1/2");
        assert!(Scalar::parse(Field::Q, "1/0").is_err());
        assert_eq!(Scalar::parse(Field::Fp(5), "-1").unwrap().render(), "4");
    }

    #[test]
    fn svec_ops() {
        let v = SVec::from_pairs(vec![(3, q(2)), (1, q(1)), (3, q(-2))]);
        assert_eq!(v.entries, vec![(1, q(1))]);
        let w = SVec::from_pairs(vec![(1, q(-1)), (2, q(4))]);
        let s = v.add(&w);
        assert_eq!(s.entries, vec![(2, q(4))]);
        assert_eq!(v.sub(&v), SVec::zero());
    }

    #[test]
    fn mat_mul_and_inverse() {
        let m = Mat::from_rows(Field::Q, 2, vec![vec![q(1), q(2)], vec![q(3), q(5)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Mat::identity(Field::Q, 2));
        assert_eq!(inv.mul(&m).unwrap(), Mat::identity(Field::Q, 2));
        let s = Mat::from_rows(Field::Q, 2, vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert!(s.inverse().is_err());
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn kernel_basis_small() {
        // x + y + z = 0 over Q: kernel dim 2
        let m = Mat::from_rows(Field::Q, 3, vec![vec![q(1), q(1), q(1)]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols, 2);
        assert!(m.mul(&k).unwrap().is_zero());
        // deterministic: free columns in increasing order
        assert_eq!(k.get(0, 0), &q(-1));
        assert_eq!(k.get(1, 0), &q(1));
    }

    #[test]
    fn kernel_over_fp() {
        let f = Field::Fp(2);
        let m = Mat::from_rows(f, 2, vec![vec![f.from_i64(1), f.from_i64(1)]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols, 1);
        assert!(m.mul(&k).unwrap().is_zero());
    }

    #[test]
    fn cokernel_projection_section() {
        // ambient Q^3, kill span{e0 - e1}
        let d = SVec::from_pairs(vec![(0, q(1)), (1, q(-1))]);
        let sq = Subquotient::cokernel(Field::Q, 3, vec![d.clone()]);
        assert_eq!(sq.dim(), 2);
        assert_eq!(sq.denom_rank(), 1);
        // proj . sect = id
        let ps = sq.proj_mat().unwrap().mul(&sq.sect_mat()).unwrap();
        assert_eq!(ps, Mat::identity(Field::Q, 2));
        // e0 and e1 agree in the quotient
        let p0 = sq.project(&SVec::unit(0, Field::Q)).unwrap();
        let p1 = sq.project(&SVec::unit(1, Field::Q)).unwrap();
        assert_eq!(p0, p1);
        assert!(sq.in_denominator(&d));
    }

    #[test]
    fn proper_subquotient() {
        // S = span{e0+e1, e2}, D = span{e0+e1} inside Q^3
        let s1 = SVec::from_pairs(vec![(0, q(1)), (1, q(1))]);
        let s2 = SVec::unit(2, Field::Q);
        let sq = Subquotient::subquotient(Field::Q, 3, vec![s1.clone(), s2.clone()], vec![s1.clone()]).unwrap();
        assert_eq!(sq.dim(), 1);
        assert!(sq.project(&SVec::unit(0, Field::Q)).is_err());
        assert_eq!(sq.project(&s2).unwrap(), SVec::unit(0, Field::Q));
        // denominator not inside the subspace is rejected
        assert!(Subquotient::subquotient(Field::Q, 3, vec![s2.clone()], vec![s1]).is_err());
    }

    #[test]
    fn induced_map_descends() {
        // quotient Q^2 / span{e0 - e1}; the swap map descends, projection
        // onto e0 does not
        let d = SVec::from_pairs(vec![(0, q(1)), (1, q(-1))]);
        let sq = Subquotient::cokernel(Field::Q, 2, vec![d]);
        let swap = ColMat::from_dense(&Mat::from_rows(
            Field::Q,
            2,
            vec![vec![q(0), q(1)], vec![q(1), q(0)]],
        ));
        let ind = Subquotient::induced_map(&sq, &sq, &swap).unwrap();
        assert!(ind.is_identity());
        let proj0 = ColMat::from_dense(&Mat::from_rows(
            Field::Q,
            2,
            vec![vec![q(1), q(0)], vec![q(0), q(0)]],
        ));
        assert!(matches!(
            Subquotient::induced_map(&sq, &sq, &proj0),
            Err(WbError::NotWellDefined(_))
        ));
    }

    #[test]
    fn solve_affine_basic() {
        // x + y = 3, x - y = 1  =>  x = 2, y = 1
        let rows = vec![
            SVec::from_pairs(vec![(0, q(1)), (1, q(1)), (2, q(-3))]),
            SVec::from_pairs(vec![(0, q(1)), (1, q(-1)), (2, q(-1))]),
        ];
        let sol = solve_affine(Field::Q, 2, &rows).unwrap();
        assert_eq!(sol.to_dense(2, Field::Q), vec![q(2), q(1)]);
        // inconsistent
        let rows = vec![
            SVec::from_pairs(vec![(0, q(1)), (1, q(-1))]),
            SVec::from_pairs(vec![(0, q(1)), (1, q(-2))]),
        ];
        assert!(solve_affine(Field::Q, 1, &rows).is_none());
    }

    #[test]
    fn splitting_with_constraints() {
        // V = Q^2 with the swap action; S = span{(1,1)} (invariant line)
        let incl = Mat::from_rows(Field::Q, 1, vec![vec![q(1)], vec![q(1)]]);
        let swap = Mat::from_rows(Field::Q, 2, vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
        let id1 = Mat::identity(Field::Q, 1);
        let r = find_splitting(&incl, &[(swap.clone(), id1.clone())]).unwrap();
        assert_eq!(r.mul(&incl).unwrap(), Mat::identity(Field::Q, 1));
        assert_eq!(r.mul(&swap).unwrap(), id1.mul(&r).unwrap());
        // the invariant line of a Jordan block admits no equivariant
        // retraction
        let incl2 = Mat::from_rows(Field::Q, 1, vec![vec![q(1)], vec![q(0)]]);
        let jordan = Mat::from_rows(Field::Q, 2, vec![vec![q(1), q(1)], vec![q(0), q(1)]]);
        assert!(find_splitting(&incl2, &[(jordan, id1)]).is_none());
    }

    #[test]
    fn splitting_over_f2() {
        let f = Field::Fp(2);
        let incl = Mat::from_rows(f, 1, vec![vec![f.one()], vec![f.one()]]);
        // over F_2 the swap fixes (1,1) and any retraction works without
        // constraints
        let r = find_splitting(&incl, &[]).unwrap();
        assert_eq!(r.mul(&incl).unwrap(), Mat::identity(f, 1));
    }

    #[test]
    fn colmat_compose_and_rank() {
        let a = Mat::from_rows(Field::Q, 2, vec![vec![q(1), q(1)], vec![q(0), q(1)]]);
        let b = Mat::from_rows(Field::Q, 2, vec![vec![q(2), q(0)], vec![q(1), q(1)]]);
        let ab = a.mul(&b).unwrap();
        let sab = a.to_colmat().compose(&b.to_colmat()).unwrap();
        assert_eq!(sab.to_dense(), ab);
        assert_eq!(sab.rank(), 2);
        assert_eq!(sab.inverse().unwrap().compose(&sab).unwrap().is_identity(), true);
    }
}
