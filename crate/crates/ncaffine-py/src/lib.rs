//! Python bindings: exact scalars travel as strings (or ints), matrices as
//! row-major nested lists, and every verdict comes back as plain dicts and
//! lists so the module has no Python-side dependencies.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ncaffine::algebra::Algebra as CoreAlgebra;
use ncaffine::bimod::{Bimodule, RightModule};
use ncaffine::coalg::{identity_representation, trace_adjunction};
use ncaffine::cyclic::{
    classical_cyclic_object, homology, verify_cyclic_identities, Theory,
};
use ncaffine::exactlin::{ColMat, Field, Mat, SVec, Scalar};
use ncaffine::format::parse_field;
use ncaffine::galois::{galois_check, hopf_galois_builder, ConditionResult};
use ncaffine::infinitesimal::{adic_tower, diff_operators, grothendieck_oracle};
use ncaffine::morita::{verify_morita_equivalence, Progenerator};

fn err<T>(r: ncaffine::Result<T>) -> PyResult<T> {
    r.map_err(|e| PyValueError::new_err(e.to_string()))
}

fn field_of(spec: &str) -> PyResult<Field> {
    err(parse_field(spec))
}

fn scalar_of(field: Field, v: &Bound<'_, PyAny>) -> PyResult<Scalar> {
    if let Ok(n) = v.extract::<i64>() {
        return Ok(field.from_i64(n));
    }
    let s: String = v.extract()?;
    err(Scalar::parse(field, &s))
}

fn svec_of(field: Field, v: &Bound<'_, PyAny>) -> PyResult<SVec> {
    let items: Vec<Bound<'_, PyAny>> = v.extract()?;
    let mut out = SVec::zero();
    for (i, item) in items.iter().enumerate() {
        let c = scalar_of(field, item)?;
        if !c.is_zero() {
            out = out.add_scaled(&c, &SVec::unit(i, field));
        }
    }
    Ok(out)
}

fn scalars_of(field: Field, v: &Bound<'_, PyAny>, dim: usize) -> PyResult<Vec<Scalar>> {
    let items: Vec<Bound<'_, PyAny>> = v.extract()?;
    if items.len() != dim {
        return Err(PyValueError::new_err(format!("expected a vector of length {dim}")));
    }
    items.iter().map(|i| scalar_of(field, i)).collect()
}

fn mat_of(field: Field, rows: &Bound<'_, PyAny>) -> PyResult<Mat> {
    let rows: Vec<Bound<'_, PyAny>> = rows.extract()?;
    if rows.is_empty() {
        return Err(PyValueError::new_err("a matrix needs at least one row"));
    }
    let cols = rows[0].extract::<Vec<Bound<'_, PyAny>>>()?.len();
    let dense_rows: Vec<Vec<Scalar>> =
        rows.iter().map(|r| scalars_of(field, r, cols)).collect::<PyResult<_>>()?;
    Ok(Mat::from_rows(field, cols, dense_rows))
}

fn dense(field: Field, v: &SVec, dim: usize) -> Vec<String> {
    let mut out = vec![field.zero().render(); dim];
    for (i, c) in &v.entries {
        out[*i] = c.render();
    }
    out
}

/// A finite-dimensional associative unital algebra, presented by structure
/// constants over `Q` or `F_p`.
#[pyclass(frozen, name = "Algebra")]
struct PyAlgebra {
    inner: Arc<CoreAlgebra>,
}

#[pymethods]
impl PyAlgebra {
    /// `K[x]/(x^n)` over the field spec `"Q"` or `"Fp:p"`.
    #[staticmethod]
    fn truncated_polynomial(field: &str, n: usize) -> PyResult<PyAlgebra> {
        Ok(PyAlgebra { inner: CoreAlgebra::truncated_polynomial(field_of(field)?, n).shared() })
    }

    /// Full `n x n` matrices.
    #[staticmethod]
    fn matrix(field: &str, n: usize) -> PyResult<PyAlgebra> {
        Ok(PyAlgebra { inner: CoreAlgebra::matrix_algebra(field_of(field)?, n).shared() })
    }

    /// Functions on `n` points (the split diagonal algebra `K^n`).
    #[staticmethod]
    fn functions(field: &str, n: usize) -> PyResult<PyAlgebra> {
        Ok(PyAlgebra { inner: CoreAlgebra::function_algebra(field_of(field)?, n).shared() })
    }

    /// Upper triangular `n x n` matrices.
    #[staticmethod]
    fn upper_triangular(field: &str, n: usize) -> PyResult<PyAlgebra> {
        Ok(PyAlgebra { inner: CoreAlgebra::upper_triangular(field_of(field)?, n).shared() })
    }

    /// Group algebra from a multiplication table of element indices, with
    /// `0` the neutral element.
    #[staticmethod]
    fn group(field: &str, table: Vec<Vec<usize>>) -> PyResult<PyAlgebra> {
        Ok(PyAlgebra { inner: err(CoreAlgebra::group_algebra(field_of(field)?, &table))?.shared() })
    }

    /// `K[x]/(x^d - low)` where `low` lists the coefficients of the reduction
    /// of `x^d` on `1, x, ..., x^(d-1)`.
    #[staticmethod]
    fn polynomial_quotient(field: &str, low: Vec<Bound<'_, PyAny>>) -> PyResult<PyAlgebra> {
        let f = field_of(field)?;
        let coeffs: Vec<Scalar> = low.iter().map(|v| scalar_of(f, v)).collect::<PyResult<_>>()?;
        Ok(PyAlgebra { inner: err(CoreAlgebra::polynomial_quotient(f, &coeffs))?.shared() })
    }

    /// From explicit structure constants: `mul[i][j]` is the dense expansion
    /// of `e_i * e_j`, `unit` the dense unit vector.  Associativity and
    /// unitality are validated.
    #[staticmethod]
    fn explicit(
        field: &str,
        mul: Vec<Vec<Bound<'_, PyAny>>>,
        unit: Bound<'_, PyAny>,
    ) -> PyResult<PyAlgebra> {
        let f = field_of(field)?;
        let dim = mul.len();
        let mut sc = Vec::with_capacity(dim * dim);
        for row in &mul {
            if row.len() != dim {
                return Err(PyValueError::new_err("mul must be a dim x dim table"));
            }
            for entry in row {
                sc.push(scalars_of(f, entry, dim)?);
            }
        }
        let unit = scalars_of(f, &unit, dim)?;
        Ok(PyAlgebra { inner: err(CoreAlgebra::new(f, dim, sc, unit))?.shared() })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim
    }

    #[getter]
    fn field(&self) -> String {
        ncaffine::format::render_field(self.inner.field)
    }

    fn is_commutative(&self) -> bool {
        self.inner.is_commutative()
    }

    fn center_dim(&self) -> usize {
        self.inner.center_basis().len()
    }

    /// Product of two dense coefficient vectors, returned dense as strings.
    fn multiply(
        &self,
        x: Bound<'_, PyAny>,
        y: Bound<'_, PyAny>,
    ) -> PyResult<Vec<String>> {
        let f = self.inner.field;
        let p = self.inner.mul(&svec_of(f, &x)?, &svec_of(f, &y)?);
        Ok(dense(f, &p, self.inner.dim))
    }

    fn __repr__(&self) -> String {
        format!(
            "Algebra(dim={}, field={})",
            self.inner.dim,
            ncaffine::format::render_field(self.inner.field)
        )
    }
}

fn theory_of(name: &str) -> PyResult<Theory> {
    match name {
        "hochschild" | "hh" => Ok(Theory::Hochschild),
        "cyclic" | "hc" => Ok(Theory::Cyclic),
        "periodic_even" | "hp_even" => Ok(Theory::PeriodicEven),
        "periodic_odd" | "hp_odd" => Ok(Theory::PeriodicOdd),
        other => Err(PyValueError::new_err(format!("unknown theory {other:?}"))),
    }
}

/// Homology dimensions of the classical cyclic object of `alg`:
/// `theory` is one of `"hochschild"`, `"cyclic"`, `"periodic_even"`,
/// `"periodic_odd"`.
#[pyfunction]
fn classical_homology(alg: &PyAlgebra, theory: &str, degrees: usize) -> PyResult<Vec<usize>> {
    let th = theory_of(theory)?;
    let levels = match th {
        Theory::Hochschild => degrees + 1,
        _ => degrees + 2,
    };
    let (_, co, _) = err(classical_cyclic_object(&alg.inner, levels))?;
    Ok(err(homology(&co, th, degrees))?.dims)
}

/// Checks every simplicial/cyclic relation of the classical cyclic object up
/// to `max_degree`; returns the list of failing relation names (empty = ok).
#[pyfunction]
fn classical_identity_failures(alg: &PyAlgebra, max_degree: usize) -> PyResult<Vec<String>> {
    let (_, co, _) = err(classical_cyclic_object(&alg.inner, max_degree))?;
    let report = err(verify_cyclic_identities(&co))?;
    Ok(report.failures().into_iter().map(str::to_owned).collect())
}

fn condition_dict<'py>(
    py: Python<'py>,
    c: &ConditionResult,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new_bound(py);
    d.set_item("pass", c.pass)?;
    d.set_item("witness", c.witness.clone())?;
    Ok(d)
}

/// Runs the six-condition Galois check on the crossed-product instance of a
/// finite group acting on `alg`: `table[g][h]` is the index of `gh`, and
/// `action[g]` the matrix of `g` on the basis of `alg`.
#[pyfunction]
fn hopf_galois_check<'py>(
    py: Python<'py>,
    alg: &PyAlgebra,
    table: Vec<Vec<usize>>,
    action: Vec<Bound<'py, PyAny>>,
) -> PyResult<Bound<'py, PyDict>> {
    let f = alg.inner.field;
    let mats: Vec<Mat> = action.iter().map(|m| mat_of(f, m)).collect::<PyResult<_>>()?;
    let inst = err(hopf_galois_builder(&alg.inner, &table, &mats))?;
    let v = err(galois_check(&inst))?;
    let d = PyDict::new_bound(py);
    d.set_item("pass", v.pass())?;
    d.set_item("regularity", condition_dict(py, &v.regularity)?)?;
    d.set_item("purity", condition_dict(py, &v.purity)?)?;
    d.set_item("invariants_iso", condition_dict(py, &v.invariants_iso)?)?;
    d.set_item("invariants_canonical", condition_dict(py, &v.invariants_canonical)?)?;
    d.set_item("faithful_flatness", condition_dict(py, &v.faithful_flatness)?)?;
    d.set_item("freeness", condition_dict(py, &v.freeness)?)?;
    d.set_item("comonad", condition_dict(py, &v.comonad)?)?;
    d.set_item("family_size", v.family_size)?;
    Ok(d)
}

fn regular_module(alg: &Arc<CoreAlgebra>) -> ncaffine::bimod::LeftModule {
    let action: Vec<ColMat> =
        (0..alg.dim).map(|i| ColMat::from_dense(&alg.left_mult(i))).collect();
    ncaffine::bimod::LeftModule::new(alg.clone(), alg.dim, action).expect("regular module")
}

/// Dimensions of the order-`<= p` differential operator spaces on the
/// regular module, for `p = 0..=p_max`.
#[pyfunction]
fn differential_operator_dims(alg: &PyAlgebra, p_max: usize) -> PyResult<Vec<usize>> {
    let m = regular_module(&alg.inner);
    (0..=p_max).map(|p| Ok(err(diff_operators(&m, &m, p))?.len())).collect()
}

/// The same dimensions from the independent bracket recursion (commutative
/// base only).
#[pyfunction]
fn bracket_recursion_dims(alg: &PyAlgebra, p_max: usize) -> PyResult<Vec<usize>> {
    let m = regular_module(&alg.inner);
    (0..=p_max).map(|p| Ok(err(grothendieck_oracle(&m, &m, p))?.len())).collect()
}

/// Quotient dimensions of the `I`-adic tower of the regular module, where
/// `ideal` lists a basis of the two-sided ideal as dense vectors.  Returns
/// `(dims, stabilized)`.
#[pyfunction]
fn adic_tower_dims(
    alg: &PyAlgebra,
    ideal: Vec<Bound<'_, PyAny>>,
    p_max: usize,
) -> PyResult<(Vec<usize>, bool)> {
    let f = alg.inner.field;
    let basis: Vec<SVec> = ideal.iter().map(|v| svec_of(f, v)).collect::<PyResult<_>>()?;
    let tower = err(adic_tower(&regular_module(&alg.inner), &basis, p_max))?;
    Ok((tower.dims(), tower.stabilized))
}

/// Morita check for the column module `K^n` over the `n x n` matrices.
/// Returns `(ok, first_failure)`.
#[pyfunction]
fn morita_check_columns(field: &str, n: usize) -> PyResult<(bool, Option<String>)> {
    let alg = CoreAlgebra::matrix_algebra(field_of(field)?, n).shared();
    let p = err(Progenerator::new(err(RightModule::matrix_columns(alg, n))?))?;
    let report = err(verify_morita_equivalence(&p))?;
    Ok((report.ok(), report.first_failure.clone()))
}

/// Whether the trace-adjunction comparison matrix of the identity
/// representation on two regular bimodules is invertible.
#[pyfunction]
fn trace_adjunction_invertible(alg: &PyAlgebra) -> PyResult<bool> {
    let rep = err(identity_representation(&alg.inner))?;
    let f = Bimodule::regular(alg.inner.clone());
    let g = Bimodule::regular(alg.inner.clone());
    let m = err(trace_adjunction(&rep, &f, &g))?;
    Ok(m.rows == m.cols_v.len() && m.rank() == m.rows)
}

#[pymodule]
fn ncaffine_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAlgebra>()?;
    m.add_function(wrap_pyfunction!(classical_homology, m)?)?;
    m.add_function(wrap_pyfunction!(classical_identity_failures, m)?)?;
    m.add_function(wrap_pyfunction!(hopf_galois_check, m)?)?;
    m.add_function(wrap_pyfunction!(differential_operator_dims, m)?)?;
    m.add_function(wrap_pyfunction!(bracket_recursion_dims, m)?)?;
    m.add_function(wrap_pyfunction!(adic_tower_dims, m)?)?;
    m.add_function(wrap_pyfunction!(morita_check_columns, m)?)?;
    m.add_function(wrap_pyfunction!(trace_adjunction_invertible, m)?)?;
    Ok(())
}
