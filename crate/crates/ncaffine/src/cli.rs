//! Batch front-end.
//!
//! Every subcommand loads a JSON instance file, runs one computation and
//! writes a JSON report to standard output (or `--out`).  Exit codes keep
//! the two failure modes apart: `1` means the input did not validate,
//! `2` means the input is fine but the mathematical verdict is negative
//! (a failed diagram, a non-Galois extension, a singular comparison map),
//! and `3` means a map refused to descend to a quotient mid-computation.

use crate::algebra::Algebra;
use crate::bimod::Bimodule;
use crate::coalg::trace_adjunction;
use crate::cyclic::{
    build_cyclic_object, check_coefficient_system, homology, CoefficientSystem, Theory,
};
use crate::exactlin::{Field, Mat, SVec};
use crate::format::{
    dimension_tables, load_instance, render_report, report, sha256_hex, Instance,
};
use crate::galois::{galois_check, hopf_galois_builder, GaloisVerdict};
use crate::infinitesimal::{adic_tower, diff_operators, grothendieck_oracle};
use crate::morita::verify_morita_equivalence;
use crate::{Result, WbError};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "ncaffine", version, about = "exact homological computations from instance files")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TheoryArg {
    Hh,
    Hc,
    Hp,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Load an instance file and re-check every axiom.
    Validate { file: PathBuf },
    /// Hochschild homology dimensions of a named coefficient system.
    Hh {
        file: PathBuf,
        system: String,
        #[arg(long)]
        degrees: usize,
    },
    /// Cyclic homology dimensions of a named coefficient system.
    Hc {
        file: PathBuf,
        system: String,
        #[arg(long)]
        degrees: usize,
    },
    /// Periodic homology (both parities) with stabilization evidence.
    Hp {
        file: PathBuf,
        system: String,
        #[arg(long)]
        degrees: usize,
        /// Truncation width for the folded complex (defaults to `degrees`,
        /// at least 3).
        #[arg(long)]
        width: Option<usize>,
    },
    /// Build the classical cyclic object of an algebra and tabulate.
    Classical {
        file: PathBuf,
        /// Algebra name; may be omitted when the file holds exactly one.
        algebra: Option<String>,
        #[arg(long)]
        degrees: usize,
        #[arg(long, value_enum, default_value = "hh")]
        theory: TheoryArg,
    },
    /// Check the coefficient-system diagrams and braiding-trace squares.
    CheckCoeffs {
        file: PathBuf,
        system: String,
        #[arg(long, default_value = "3")]
        pq_bound: usize,
    },
    /// Run the six-condition Galois check on a named candidate.
    GaloisCheck {
        file: PathBuf,
        /// Instance name; may be omitted when the file holds exactly one.
        instance: Option<String>,
    },
    /// Verify that a progenerator induces a Morita equivalence.
    MoritaCheck { file: PathBuf, progenerator: String },
    /// Differential operators between two named left modules.
    Diff {
        file: PathBuf,
        source: String,
        target: String,
        #[arg(long)]
        order: usize,
    },
    /// The adic tower of a module along a named ideal.
    Adic {
        file: PathBuf,
        ideal: String,
        module: String,
        #[arg(long)]
        pmax: usize,
    },
    /// The trace-adjunction comparison matrix for a representation and two
    /// coefficient bimodules ("regular" builds the regular bimodule of the
    /// appropriate ring).
    TraceAdjunction { file: PathBuf, rep: String, f: String, g: String },
    /// Regenerate the golden reference tables.
    EmitGoldens {
        #[arg(long, default_value = "goldens")]
        dir: PathBuf,
    },
}

fn exit_code(e: &WbError) -> i32 {
    match e {
        WbError::NotWellDefined(_) => 3,
        _ => 1,
    }
}

fn deliver(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn file_inputs(path: &Path) -> Result<Value> {
    let bytes = std::fs::read(path)?;
    Ok(json!({ "file": sha256_hex(&bytes) }))
}

fn get<'a, T>(
    map: &'a std::collections::BTreeMap<String, T>,
    what: &str,
    name: &str,
) -> Result<&'a T> {
    map.get(name)
        .ok_or_else(|| WbError::BadInput(format!("the file defines no {what} named {name:?}")))
}

fn sole<'a, T>(
    map: &'a std::collections::BTreeMap<String, T>,
    what: &str,
    name: Option<&String>,
) -> Result<(&'a String, &'a T)> {
    match name {
        Some(n) => Ok((map.get_key_value(n.as_str()).ok_or_else(|| {
            WbError::BadInput(format!("the file defines no {what} named {n:?}"))
        })?)
        .to_owned()),
        None => {
            if map.len() == 1 {
                Ok(map.iter().next().expect("nonempty"))
            } else {
                Err(WbError::BadInput(format!(
                    "the file defines {} {what}s; name one explicitly",
                    map.len()
                )))
            }
        }
    }
}

fn homology_value(t: &crate::cyclic::HomologyTable) -> Value {
    json!({ "dims": t.dims, "stable": t.stable })
}

fn table_for(
    cs: &CoefficientSystem,
    theory: TheoryArg,
    degrees: usize,
    width: Option<usize>,
) -> Result<Value> {
    match theory {
        TheoryArg::Hh => {
            let co = build_cyclic_object(cs, degrees + 1)?;
            Ok(json!({ "hh": homology_value(&homology(&co, Theory::Hochschild, degrees)?) }))
        }
        TheoryArg::Hc => {
            let co = build_cyclic_object(cs, degrees + 2)?;
            Ok(json!({ "hc": homology_value(&homology(&co, Theory::Cyclic, degrees)?) }))
        }
        TheoryArg::Hp => {
            let w = width.unwrap_or(degrees).max(3);
            let co = build_cyclic_object(cs, w + 2)?;
            Ok(json!({
                "hp_even": homology_value(&homology(&co, Theory::PeriodicEven, w)?),
                "hp_odd": homology_value(&homology(&co, Theory::PeriodicOdd, w)?),
            }))
        }
    }
}

fn verdict_value(v: &GaloisVerdict) -> Value {
    let cond = |c: &crate::galois::ConditionResult| {
        json!({ "pass": c.pass, "witness": c.witness })
    };
    json!({
        "pass": v.pass(),
        "conditions": {
            "regularity": cond(&v.regularity),
            "purity": cond(&v.purity),
            "invariants_iso": cond(&v.invariants_iso),
            "invariants_canonical": cond(&v.invariants_canonical),
            "faithful_flatness": cond(&v.faithful_flatness),
            "freeness": cond(&v.freeness),
            "comonad": cond(&v.comonad),
        },
        "family_size": v.family_size,
    })
}

fn regular_or_named(
    inst: &Instance,
    name: &str,
    ring: &std::sync::Arc<Algebra>,
) -> Result<Bimodule> {
    if name == "regular" {
        return Ok(Bimodule::regular(ring.clone()));
    }
    let b = get(&inst.bimodules, "bimodule", name)?;
    if b.alg.as_ref() != ring.as_ref() {
        return Err(WbError::BadInput(format!(
            "bimodule {name:?} lives over the wrong ring for this slot"
        )));
    }
    Ok(b.clone())
}

/// Runs one subcommand and returns `(exit code, report)`.
fn dispatch(cmd: &Command) -> Result<(i32, Value)> {
    match cmd {
        Command::Validate { file } => {
            let inst = load_instance(file)?;
            Ok((0, report("validate", file_inputs(file)?, dimension_tables(&inst))))
        }
        Command::Hh { file, system, degrees } => {
            let inst = load_instance(file)?;
            let cs = get(&inst.systems, "system", system)?;
            let results = table_for(cs, TheoryArg::Hh, *degrees, None)?;
            Ok((0, report("hh", file_inputs(file)?, results)))
        }
        Command::Hc { file, system, degrees } => {
            let inst = load_instance(file)?;
            let cs = get(&inst.systems, "system", system)?;
            let results = table_for(cs, TheoryArg::Hc, *degrees, None)?;
            Ok((0, report("hc", file_inputs(file)?, results)))
        }
        Command::Hp { file, system, degrees, width } => {
            let inst = load_instance(file)?;
            let cs = get(&inst.systems, "system", system)?;
            let results = table_for(cs, TheoryArg::Hp, *degrees, *width)?;
            Ok((0, report("hp", file_inputs(file)?, results)))
        }
        Command::Classical { file, algebra, degrees, theory } => {
            let inst = load_instance(file)?;
            let (name, alg) = sole(&inst.algebras, "algebra", algebra.as_ref())?;
            let cs = CoefficientSystem::classical(alg)?;
            let mut results = table_for(&cs, *theory, *degrees, None)?;
            results["algebra"] = json!(name);
            Ok((0, report("classical", file_inputs(file)?, results)))
        }
        Command::CheckCoeffs { file, system, pq_bound } => {
            let inst = load_instance(file)?;
            let cs = get(&inst.systems, "system", system)?;
            let rep = check_coefficient_system(cs, *pq_bound)?;
            let diagrams: Vec<Value> = rep
                .diagrams
                .iter()
                .map(|d| json!({ "name": d.name, "pass": d.pass }))
                .collect();
            let code = if rep.pass() { 0 } else { 2 };
            Ok((
                code,
                report(
                    "check-coeffs",
                    file_inputs(file)?,
                    json!({ "pass": rep.pass(), "diagrams": diagrams }),
                ),
            ))
        }
        Command::GaloisCheck { file, instance } => {
            let inst = load_instance(file)?;
            let (name, gal) = sole(&inst.galois, "galois instance", instance.as_ref())?;
            let verdict = galois_check(gal)?;
            let code = if verdict.pass() { 0 } else { 2 };
            let mut results = verdict_value(&verdict);
            results["instance"] = json!(name);
            Ok((code, report("galois-check", file_inputs(file)?, results)))
        }
        Command::MoritaCheck { file, progenerator } => {
            let inst = load_instance(file)?;
            let p = get(&inst.progenerators, "progenerator", progenerator)?;
            let rep = verify_morita_equivalence(p)?;
            let code = if rep.ok() { 0 } else { 2 };
            Ok((
                code,
                report(
                    "morita-check",
                    file_inputs(file)?,
                    json!({
                        "pass": rep.ok(),
                        "endomorphism_ring_dim": rep.ring_b.dim,
                        "composite_over_base": rep.composite_over_base,
                        "composite_over_endos": rep.composite_over_endos,
                        "dual_pair_to_base": rep.dual_pair_to_base,
                        "pair_to_endos": rep.pair_to_endos,
                        "first_failure": rep.first_failure,
                    }),
                ),
            ))
        }
        Command::Diff { file, source, target, order } => {
            let inst = load_instance(file)?;
            let m = get(&inst.modules, "module", source)?;
            let n = get(&inst.modules, "module", target)?;
            let mut dims = Vec::with_capacity(order + 1);
            for p in 0..=*order {
                dims.push(diff_operators(m, n, p)?.len());
            }
            let oracle_agrees = if m.alg.is_commutative() {
                let mut ok = true;
                for (p, d) in dims.iter().enumerate() {
                    ok &= grothendieck_oracle(m, n, p)?.len() == *d;
                }
                Some(ok)
            } else {
                None
            };
            Ok((
                0,
                report(
                    "diff",
                    file_inputs(file)?,
                    json!({
                        "orders": dims,
                        "hom_dim": m.dim * n.dim,
                        "bracket_recursion_agrees": oracle_agrees,
                    }),
                ),
            ))
        }
        Command::Adic { file, ideal, module, pmax } => {
            let inst = load_instance(file)?;
            let (alg_name, basis) = get(&inst.ideals, "ideal", ideal)?;
            let g = get(&inst.modules, "module", module)?;
            if get(&inst.algebras, "algebra", alg_name)?.as_ref() != g.alg.as_ref() {
                return Err(WbError::BadInput(
                    "the ideal and the module live over different algebras".into(),
                ));
            }
            let tower = adic_tower(g, basis, *pmax)?;
            Ok((
                0,
                report(
                    "adic",
                    file_inputs(file)?,
                    json!({
                        "quotient_dims": tower.dims(),
                        "stabilized": tower.stabilized,
                        "limit_dim": tower.limit_dim(),
                        "module_dim": tower.base_dim,
                    }),
                ),
            ))
        }
        Command::TraceAdjunction { file, rep, f, g } => {
            let inst = load_instance(file)?;
            let r = get(&inst.representations, "representation", rep)?;
            let fb = regular_or_named(&inst, f, r.base())?;
            let gb = regular_or_named(&inst, g, &r.ring)?;
            let mat = trace_adjunction(r, &fb, &gb)?;
            let square = mat.rows == mat.cols();
            let invertible = square && mat.rank() == mat.rows;
            let code = if invertible { 0 } else { 2 };
            Ok((
                code,
                report(
                    "trace-adjunction",
                    file_inputs(file)?,
                    json!({
                        "rows": mat.rows,
                        "cols": mat.cols(),
                        "rank": mat.rank(),
                        "invertible": invertible,
                    }),
                ),
            ))
        }
        Command::EmitGoldens { dir } => {
            let written = emit_goldens(dir)?;
            Ok((0, report("emit-goldens", json!({}), json!({ "written": written }))))
        }
    }
}

/// Recomputes the reference tables and writes them under `dir`; the files
/// are byte-identical across runs.
pub fn emit_goldens(dir: &Path) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: &str, value: Value| -> Result<()> {
        let path = dir.join(name);
        std::fs::write(&path, render_report(&value))?;
        written.push(name.to_string());
        Ok(())
    };

    let q = Algebra::truncated_polynomial(Field::Q, 1).shared();
    let cs = CoefficientSystem::classical(&q)?;
    let co = build_cyclic_object(&cs, 6)?;
    put(
        "hh_q.json",
        json!({ "hh": homology_value(&homology(&co, Theory::Hochschild, 4)?) }),
    )?;
    put(
        "hc_q.json",
        json!({ "hc": homology_value(&homology(&co, Theory::Cyclic, 4)?) }),
    )?;

    let f2 = Field::Fp(2);
    let f4 = Algebra::polynomial_quotient(f2, &[f2.one(), f2.one()])?.shared();
    let frobenius = Mat::from_cols(
        f2,
        2,
        &[
            SVec::unit(0, f2),
            SVec::from_dense(&[f2.one(), f2.one()]),
        ],
    );
    let gal = hopf_galois_builder(
        &f4,
        &[vec![0, 1], vec![1, 0]],
        &[Mat::identity(f2, 2), frobenius],
    )?;
    put("galois_f4_f2.json", verdict_value(&galois_check(&gal)?))?;
    Ok(written)
}

/// Entry point shared by the binary and the tests.
pub fn run(cli: &Cli) -> i32 {
    match dispatch(&cli.command) {
        Ok((code, rep)) => {
            if deliver(cli.out.as_deref(), &render_report(&rep)).is_err() {
                return 1;
            }
            code
        }
        Err(e) => {
            let code = exit_code(&e);
            let rep = report("error", json!({}), json!({ "error": e.to_string() }));
            let _ = deliver(cli.out.as_deref(), &render_report(&rep));
            code
        }
    }
}

pub fn run_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                1
            } else {
                0
            }
        }
    }
}
