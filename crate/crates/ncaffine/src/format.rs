//! Instance files and reports.
//!
//! One JSON file describes a collection of named objects — algebras,
//! bimodules, modules, coalgebras, coefficient systems, Galois candidates,
//! progenerators, representations, ideals — all over a single ground field.
//! Scalars are written as integers or strings (`"-3/7"` over the rationals,
//! residues over a prime field); matrices are row-major nested arrays;
//! every cross-reference is by name and every object validates on load.
//!
//! Reports are plain JSON with sorted keys: the command, a hash of each
//! input file, and the results.  Nothing time- or machine-dependent goes
//! in, so a report is byte-identical across runs.

use crate::algebra::Algebra;
use crate::bimod::{Bimodule, LeftModule, RightModule};
use crate::coalg::{
    identity_representation, sweedler_coalgebra, Coalgebra, Representation,
};
use crate::cyclic::CoefficientSystem;
use crate::exactlin::{ColMat, Field, Mat, SVec, Scalar};
use crate::galois::{hopf_galois_builder, GaloisInstance};
use crate::morita::{morita_representation, Progenerator};
use crate::{Result, WbError};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

pub const FORMAT_VERSION: u64 = 1;

// ---------------------------------------------------------------------------
// scalar / matrix leaves

fn scalar_from_value(field: Field, v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| WbError::BadInput(format!("scalar out of range: {n}")))?;
            Ok(field.from_i64(i))
        }
        Value::String(s) => Scalar::parse(field, s),
        other => Err(WbError::BadInput(format!("expected a scalar, got {other}"))),
    }
}

fn dense_from_value(field: Field, v: &Value, len: usize) -> Result<Vec<Scalar>> {
    let arr = v
        .as_array()
        .ok_or_else(|| WbError::BadInput("expected a vector".into()))?;
    if arr.len() != len {
        return Err(WbError::DimMismatch(format!(
            "vector of length {} where {len} was expected",
            arr.len()
        )));
    }
    arr.iter().map(|x| scalar_from_value(field, x)).collect()
}

fn svec_from_value(field: Field, v: &Value, len: usize) -> Result<SVec> {
    Ok(SVec::from_dense(&dense_from_value(field, v, len)?))
}

fn mat_from_value(field: Field, v: &Value, rows: usize, cols: usize) -> Result<Mat> {
    let arr = v
        .as_array()
        .ok_or_else(|| WbError::BadInput("expected a matrix".into()))?;
    if arr.len() != rows {
        return Err(WbError::DimMismatch(format!(
            "matrix with {} rows where {rows} were expected",
            arr.len()
        )));
    }
    let mut data = Vec::with_capacity(rows);
    for row in arr {
        data.push(dense_from_value(field, row, cols)?);
    }
    Ok(Mat::from_rows(field, cols, data))
}

fn colmat_from_value(field: Field, v: &Value, rows: usize, cols: usize) -> Result<ColMat> {
    Ok(ColMat::from_dense(&mat_from_value(field, v, rows, cols)?))
}

pub fn render_mat(m: &Mat) -> Value {
    Value::Array(
        (0..m.rows)
            .map(|r| {
                Value::Array(
                    (0..m.cols).map(|c| Value::String(m.get(r, c).render())).collect(),
                )
            })
            .collect(),
    )
}

pub fn render_colmat(m: &ColMat) -> Value {
    render_mat(&m.to_dense())
}

// ---------------------------------------------------------------------------
// file shape

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum AlgebraRepr {
    TruncatedPolynomial { n: usize },
    Matrix { n: usize },
    Functions { n: usize },
    UpperTriangular { n: usize },
    Group { table: Vec<Vec<usize>> },
    PolynomialQuotient { low: Value },
    Explicit { dim: usize, mul: Value, unit: Value },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum BimoduleRepr {
    Regular { algebra: String },
    OuterSquare { algebra: String },
    Explicit { algebra: String, dim: usize, left: Value, right: Value },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ModuleRepr {
    Regular { algebra: String },
    Explicit { algebra: String, dim: usize, action: Value },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ProgeneratorRepr {
    Regular { algebra: String },
    Columns { algebra: String },
    Explicit { algebra: String, dim: usize, action: Value },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CoalgebraRepr {
    Sweedler { algebra: String },
    Explicit { carrier: String, comult: Value, counit: Value },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum SystemRepr {
    Classical {
        algebra: String,
    },
    Trivial {
        coalgebra: String,
    },
    Explicit {
        coalgebra: String,
        coefficient: String,
        braiding: Value,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coaugmentation: Option<Value>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum GaloisRepr {
    Hopf { algebra: String, table: Vec<Vec<usize>>, action: Value },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum RepresentationRepr {
    Identity { algebra: String },
    Morita { progenerator: String },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct IdealRepr {
    algebra: String,
    basis: Vec<Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FileRepr {
    format: u64,
    field: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    algebras: BTreeMap<String, AlgebraRepr>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    bimodules: BTreeMap<String, BimoduleRepr>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    modules: BTreeMap<String, ModuleRepr>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    progenerators: BTreeMap<String, ProgeneratorRepr>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    coalgebras: BTreeMap<String, CoalgebraRepr>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    systems: BTreeMap<String, SystemRepr>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    galois: BTreeMap<String, GaloisRepr>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    representations: BTreeMap<String, RepresentationRepr>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    ideals: BTreeMap<String, IdealRepr>,
}

/// A fully resolved and validated instance file.
#[derive(Debug)]
pub struct Instance {
    pub field: Field,
    pub algebras: BTreeMap<String, Arc<Algebra>>,
    pub bimodules: BTreeMap<String, Bimodule>,
    pub modules: BTreeMap<String, LeftModule>,
    pub progenerators: BTreeMap<String, Progenerator>,
    pub coalgebras: BTreeMap<String, Arc<Coalgebra>>,
    pub systems: BTreeMap<String, CoefficientSystem>,
    pub galois: BTreeMap<String, GaloisInstance>,
    pub representations: BTreeMap<String, Representation>,
    /// Ideal bases together with the name of the ambient algebra.
    pub ideals: BTreeMap<String, (String, Vec<SVec>)>,
    repr: FileRepr,
}

pub fn parse_field(s: &str) -> Result<Field> {
    if s == "Q" {
        return Ok(Field::Q);
    }
    if let Some(p) = s.strip_prefix("Fp:") {
        let p: u64 = p
            .parse()
            .map_err(|_| WbError::BadInput(format!("bad prime in field spec {s:?}")))?;
        return Ok(Field::Fp(p));
    }
    Err(WbError::BadInput(format!(
        "unknown field spec {s:?} (expected \"Q\" or \"Fp:<prime>\")"
    )))
}

pub fn render_field(f: Field) -> String {
    match f {
        Field::Q => "Q".into(),
        Field::Fp(p) => format!("Fp:{p}"),
    }
}

fn named<'a, T>(map: &'a BTreeMap<String, T>, what: &str, name: &str) -> Result<&'a T> {
    map.get(name)
        .ok_or_else(|| WbError::BadInput(format!("unknown {what} {name:?}")))
}

fn tagged<T>(what: &str, name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| WbError::Validation(format!("{what} {name:?}: {e}")))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let repr: FileRepr = serde_json::from_str(text)?;
    if repr.format != FORMAT_VERSION {
        return Err(WbError::BadInput(format!(
            "unsupported format {} (this build reads format {FORMAT_VERSION})",
            repr.format
        )));
    }
    let field = parse_field(&repr.field)?;

    let mut algebras = BTreeMap::new();
    for (name, a) in &repr.algebras {
        let alg = tagged(
            "algebra",
            name,
            match a {
                AlgebraRepr::TruncatedPolynomial { n } => {
                    Ok(Algebra::truncated_polynomial(field, *n))
                }
                AlgebraRepr::Matrix { n } => Ok(Algebra::matrix_algebra(field, *n)),
                AlgebraRepr::Functions { n } => Ok(Algebra::function_algebra(field, *n)),
                AlgebraRepr::UpperTriangular { n } => Ok(Algebra::upper_triangular(field, *n)),
                AlgebraRepr::Group { table } => Algebra::group_algebra(field, table),
                AlgebraRepr::PolynomialQuotient { low } => {
                    let arr = low
                        .as_array()
                        .ok_or_else(|| WbError::BadInput("expected a coefficient list".into()))?;
                    let coeffs: Result<Vec<Scalar>> =
                        arr.iter().map(|x| scalar_from_value(field, x)).collect();
                    Algebra::polynomial_quotient(field, &coeffs?)
                }
                AlgebraRepr::Explicit { dim, mul, unit } => {
                    let table = mul
                        .as_array()
                        .ok_or_else(|| WbError::BadInput("expected a multiplication table".into()))?;
                    if table.len() != *dim {
                        return Err(WbError::DimMismatch("multiplication table shape".into()));
                    }
                    let mut nested = Vec::with_capacity(*dim);
                    for row in table {
                        let row = row
                            .as_array()
                            .ok_or_else(|| WbError::BadInput("expected a table row".into()))?;
                        if row.len() != *dim {
                            return Err(WbError::DimMismatch("multiplication table shape".into()));
                        }
                        let mut out_row = Vec::with_capacity(*dim);
                        for cell in row {
                            out_row.push(dense_from_value(field, cell, *dim)?);
                        }
                        nested.push(out_row);
                    }
                    Algebra::from_nested(field, nested, dense_from_value(field, unit, *dim)?)
                }
            },
        )?;
        algebras.insert(name.clone(), alg.shared());
    }

    let action_mats =
        |alg: &Arc<Algebra>, dim: usize, v: &Value, what: &str| -> Result<Vec<ColMat>> {
            let arr = v
                .as_array()
                .ok_or_else(|| WbError::BadInput(format!("expected a list of {what} matrices")))?;
            if arr.len() != alg.dim {
                return Err(WbError::DimMismatch(format!(
                    "one {what} matrix per algebra basis element"
                )));
            }
            arr.iter().map(|m| colmat_from_value(field, m, dim, dim)).collect()
        };

    let mut bimodules = BTreeMap::new();
    for (name, b) in &repr.bimodules {
        let bim = tagged(
            "bimodule",
            name,
            match b {
                BimoduleRepr::Regular { algebra } => {
                    Ok(Bimodule::regular(named(&algebras, "algebra", algebra)?.clone()))
                }
                BimoduleRepr::OuterSquare { algebra } => {
                    Ok(Bimodule::outer_square(named(&algebras, "algebra", algebra)?.clone()))
                }
                BimoduleRepr::Explicit { algebra, dim, left, right } => {
                    let alg = named(&algebras, "algebra", algebra)?;
                    Bimodule::new(
                        alg.clone(),
                        *dim,
                        action_mats(alg, *dim, left, "left action")?,
                        action_mats(alg, *dim, right, "right action")?,
                    )
                }
            },
        )?;
        bimodules.insert(name.clone(), bim);
    }

    let mut modules = BTreeMap::new();
    for (name, m) in &repr.modules {
        let module = tagged(
            "module",
            name,
            match m {
                ModuleRepr::Regular { algebra } => {
                    let alg = named(&algebras, "algebra", algebra)?;
                    let action: Vec<ColMat> =
                        (0..alg.dim).map(|i| ColMat::from_dense(&alg.left_mult(i))).collect();
                    LeftModule::new(alg.clone(), alg.dim, action)
                }
                ModuleRepr::Explicit { algebra, dim, action } => {
                    let alg = named(&algebras, "algebra", algebra)?;
                    LeftModule::new(alg.clone(), *dim, action_mats(alg, *dim, action, "action")?)
                }
            },
        )?;
        modules.insert(name.clone(), module);
    }

    let mut progenerators = BTreeMap::new();
    for (name, p) in &repr.progenerators {
        let module = tagged(
            "progenerator",
            name,
            match p {
                ProgeneratorRepr::Regular { algebra } => {
                    Ok(RightModule::regular(named(&algebras, "algebra", algebra)?.clone()))
                }
                ProgeneratorRepr::Columns { algebra } => {
                    let alg = named(&algebras, "algebra", algebra)?;
                    let n = (alg.dim as f64).sqrt() as usize;
                    if n * n != alg.dim {
                        return Err(WbError::BadInput(
                            "column modules need a full matrix algebra".into(),
                        ));
                    }
                    RightModule::matrix_columns(alg.clone(), n)
                }
                ProgeneratorRepr::Explicit { algebra, dim, action } => {
                    let alg = named(&algebras, "algebra", algebra)?;
                    RightModule::new(alg.clone(), *dim, action_mats(alg, *dim, action, "action")?)
                }
            },
        )?;
        progenerators.insert(name.clone(), tagged("progenerator", name, Progenerator::new(module))?);
    }

    let mut coalgebras = BTreeMap::new();
    for (name, c) in &repr.coalgebras {
        let coalg = tagged(
            "coalgebra",
            name,
            match c {
                CoalgebraRepr::Sweedler { algebra } => {
                    Ok(sweedler_coalgebra(named(&algebras, "algebra", algebra)?))
                }
                CoalgebraRepr::Explicit { carrier, comult, counit } => {
                    let bim = named(&bimodules, "bimodule", carrier)?.clone();
                    let d = bim.dim;
                    let da = bim.alg.dim;
                    let comult = colmat_like(field, comult, d * d, d)?;
                    let counit = colmat_like(field, counit, da, d)?;
                    Coalgebra::from_ambient_comult(bim, comult.cols_v, Vec::new(), counit)
                }
            },
        )?;
        coalgebras.insert(name.clone(), coalg.shared());
    }

    let mut systems = BTreeMap::new();
    for (name, s) in &repr.systems {
        let sys = tagged(
            "system",
            name,
            match s {
                SystemRepr::Classical { algebra } => {
                    CoefficientSystem::classical(named(&algebras, "algebra", algebra)?)
                }
                SystemRepr::Trivial { coalgebra } => {
                    CoefficientSystem::trivial(named(&coalgebras, "coalgebra", coalgebra)?)
                }
                SystemRepr::Explicit { coalgebra, coefficient, braiding, coaugmentation } => {
                    let coalg = named(&coalgebras, "coalgebra", coalgebra)?.clone();
                    let coeff = named(&bimodules, "bimodule", coefficient)?.clone();
                    (|| {
                        let cm = crate::bimod::tensor_over_a(&coalg.carrier, &coeff)?;
                        let mc = crate::bimod::tensor_over_a(&coeff, &coalg.carrier)?;
                        let braiding =
                            colmat_like(field, braiding, mc.pres.dim(), cm.pres.dim())?;
                        let coaug = match coaugmentation {
                            None => None,
                            Some(v) => {
                                Some(colmat_like(field, v, mc.pres.dim(), coeff.dim)?)
                            }
                        };
                        CoefficientSystem::new(coalg, coeff, braiding, coaug)
                    })()
                }
            },
        )?;
        systems.insert(name.clone(), sys);
    }

    let mut galois = BTreeMap::new();
    for (name, g) in &repr.galois {
        let inst = tagged(
            "galois instance",
            name,
            match g {
                GaloisRepr::Hopf { algebra, table, action } => {
                    let alg = named(&algebras, "algebra", algebra)?;
                    let arr = action.as_array().ok_or_else(|| {
                        WbError::BadInput("expected a list of automorphism matrices".into())
                    })?;
                    let mats: Result<Vec<Mat>> = arr
                        .iter()
                        .map(|m| mat_from_value(field, m, alg.dim, alg.dim))
                        .collect();
                    hopf_galois_builder(alg, table, &mats?)
                }
            },
        )?;
        galois.insert(name.clone(), inst);
    }

    let mut representations = BTreeMap::new();
    for (name, r) in &repr.representations {
        let rep = tagged(
            "representation",
            name,
            match r {
                RepresentationRepr::Identity { algebra } => {
                    identity_representation(named(&algebras, "algebra", algebra)?)
                }
                RepresentationRepr::Morita { progenerator } => {
                    morita_representation(named(&progenerators, "progenerator", progenerator)?)
                        .map(|m| m.rep)
                }
            },
        )?;
        representations.insert(name.clone(), rep);
    }

    let mut ideals = BTreeMap::new();
    for (name, i) in &repr.ideals {
        let alg = named(&algebras, "algebra", &i.algebra)?;
        let basis: Result<Vec<SVec>> =
            i.basis.iter().map(|v| svec_from_value(field, v, alg.dim)).collect();
        ideals.insert(name.clone(), (i.algebra.clone(), tagged("ideal", name, basis)?));
    }

    Ok(Instance {
        field,
        algebras,
        bimodules,
        modules,
        progenerators,
        coalgebras,
        systems,
        galois,
        representations,
        ideals,
        repr,
    })
}

fn colmat_like(field: Field, v: &Value, rows: usize, cols: usize) -> Result<ColMat> {
    colmat_from_value(field, v, rows, cols)
}

pub fn load_instance(path: &Path) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

/// Re-emits the normalized file contents; parsing the result reproduces
/// the same objects.
pub fn render_instance(inst: &Instance) -> Value {
    serde_json::to_value(&inst.repr).expect("instance files serialize")
}

/// Dimension tables of everything in the file, for summaries and for the
/// round-trip check.
pub fn dimension_tables(inst: &Instance) -> Value {
    let table = |m: &BTreeMap<String, usize>| -> Value {
        Value::Object(m.iter().map(|(k, v)| (k.clone(), json!(v))).collect())
    };
    let dims =
        |names: Vec<(String, usize)>| table(&names.into_iter().collect::<BTreeMap<_, _>>());
    json!({
        "algebras": dims(inst.algebras.iter().map(|(k, v)| (k.clone(), v.dim)).collect()),
        "bimodules": dims(inst.bimodules.iter().map(|(k, v)| (k.clone(), v.dim)).collect()),
        "modules": dims(inst.modules.iter().map(|(k, v)| (k.clone(), v.dim)).collect()),
        "progenerators": dims(
            inst.progenerators.iter().map(|(k, v)| (k.clone(), v.module.dim)).collect()
        ),
        "coalgebras": dims(inst.coalgebras.iter().map(|(k, v)| (k.clone(), v.dim())).collect()),
        "systems": dims(inst.systems.iter().map(|(k, v)| (k.clone(), v.coeff.dim)).collect()),
        "galois": dims(
            inst.galois.iter().map(|(k, v)| (k.clone(), v.rep.coalg.dim())).collect()
        ),
        "representations": dims(
            inst.representations.iter().map(|(k, v)| (k.clone(), v.coalg.dim())).collect()
        ),
        "ideals": dims(inst.ideals.iter().map(|(k, v)| (k.clone(), v.1.len())).collect()),
    })
}

// ---------------------------------------------------------------------------
// reports

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// Assembles a report; `serde_json` keeps object keys sorted, so the
/// serialized form is deterministic.
pub fn report(command: &str, inputs: Value, results: Value) -> Value {
    json!({
        "format": FORMAT_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

pub fn render_report(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dual_numbers_file() -> String {
        json!({
            "format": 1,
            "field": "Q",
            "algebras": { "a": { "kind": "truncated_polynomial", "n": 2 } },
            "bimodules": { "reg": { "kind": "regular", "algebra": "a" } },
            "modules": { "m": { "kind": "regular", "algebra": "a" } },
            "systems": { "sys": { "kind": "classical", "algebra": "a" } },
            "ideals": { "i": { "algebra": "a", "basis": [[0, 1]] } },
        })
        .to_string()
    }

    #[test]
    fn parses_and_resolves_references() {
        let inst = parse_instance(&dual_numbers_file()).expect("parse");
        assert_eq!(inst.algebras["a"].dim, 2);
        assert_eq!(inst.bimodules["reg"].dim, 2);
        assert_eq!(inst.systems["sys"].coeff.dim, 4);
        assert_eq!(inst.ideals["i"].1.len(), 1);
    }

    #[test]
    fn round_trip_is_semantically_identical() {
        let inst = parse_instance(&dual_numbers_file()).expect("parse");
        let echoed = render_instance(&inst).to_string();
        let again = parse_instance(&echoed).expect("reparse");
        assert_eq!(dimension_tables(&inst), dimension_tables(&again));
        // and a second round is byte-stable
        assert_eq!(echoed, render_instance(&again).to_string());
    }

    #[test]
    fn explicit_algebra_with_rational_entries() {
        let text = json!({
            "format": 1,
            "field": "Q",
            "algebras": { "a": {
                "kind": "explicit",
                "dim": 2,
                "mul": [
                    [[1, 0], [0, 1]],
                    [[0, 1], ["-1/1", 0]],
                ],
                "unit": [1, 0],
            } },
        })
        .to_string();
        let inst = parse_instance(&text).expect("parse");
        assert!(inst.algebras["a"].is_commutative());
    }

    #[test]
    fn broken_associativity_is_named() {
        let text = json!({
            "format": 1,
            "field": "Q",
            "algebras": { "bad": {
                "kind": "explicit",
                "dim": 3,
                "mul": [
                    [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                    [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
                    [[0, 0, 1], [0, 0, 0], [0, 0, 0]],
                ],
                "unit": [1, 0, 0],
            } },
        })
        .to_string();
        let err = parse_instance(&text).unwrap_err().to_string();
        assert!(err.contains("NotAssociative"), "unexpected message: {err}");
    }

    #[test]
    fn unknown_references_are_reported() {
        let text = json!({
            "format": 1,
            "field": "Q",
            "bimodules": { "b": { "kind": "regular", "algebra": "missing" } },
        })
        .to_string();
        let err = parse_instance(&text).unwrap_err().to_string();
        assert!(err.contains("missing"), "unexpected message: {err}");
    }

    #[test]
    fn field_specs_parse_and_render() {
        assert_eq!(parse_field("Q").unwrap(), Field::Q);
        assert_eq!(parse_field("Fp:7").unwrap(), Field::Fp(7));
        assert!(parse_field("R").is_err());
        assert_eq!(render_field(Field::Fp(7)), "Fp:7");
    }

    #[test]
    fn reports_are_deterministic() {
        let r1 = report("hh", json!({"file": "abc"}), json!({"dims": [1, 0]}));
        let r2 = report("hh", json!({"file": "abc"}), json!({"dims": [1, 0]}));
        assert_eq!(render_report(&r1), render_report(&r2));
        assert!(render_report(&r1).contains("\"command\""));
    }
}
