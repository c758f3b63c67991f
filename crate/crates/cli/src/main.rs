mod check;
mod io;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use permlat::butler::{diagram_of, is_reduced, lattice_of};
use permlat::examples::{fixture_c2cube, gen_oddp};
use permlat::fp_modules::{fp_decompose_seeded, fp_is_permutation_seeded, jordan_type, FpModule};
use permlat::glattice::cyclic_type;
use permlat::json::{
    detect_kind, diagram_from_json, diagram_to_json, lattice_from_json, lattice_to_json, module_from_json, Kind,
};
use serde_json::{json, Value};

use crate::io::{emit, read_json, render, CliError, CliResult};

#[derive(Parser)]
#[command(name = "permlat", version, about = "Permutation lattices over C_p x C_p and their diagrams")]
struct Cli {
    /// Seed for randomized searches; defaults to one derived from the input.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArg {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the odd-p example diagram (or its lattice), or the C_2^3 lattice.
    GenExample {
        #[arg(long, required_unless_present = "c2cube", conflicts_with = "c2cube")]
        p: Option<u64>,
        /// Emit the lattice instead of the diagram.
        #[arg(long)]
        emit_lattice: bool,
        #[arg(long)]
        c2cube: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Build the lattice of a diagram.
    ToLattice {
        input: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Extract the diagram of a reduced lattice.
    ToDiagram {
        input: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Verdict table for a lattice or diagram.
    Check {
        input: PathBuf,
        /// Order-p subgroup, as a generator word (`n`, `c`, `nc^2`).
        #[arg(long = "N")]
        n: Option<String>,
        #[arg(long)]
        json: bool,
        /// Append wall-clock time (makes output run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Heller-Reiner type of a C_p lattice, or Jordan types and summands of a module.
    Decompose { input: PathBuf },
    /// Decide whether an F_p-module is a permutation module.
    FpCheck { input: PathBuf },
    /// Check the worked examples and printed fixtures.
    #[command(alias = "verify-paper")]
    VerifyExamples {
        #[arg(long)]
        json: bool,
        /// Directory holding the fixture JSON files.
        #[arg(long, env = "PERMLAT_DATA")]
        data_dir: Option<PathBuf>,
    },
}

fn gen_example(p: Option<u64>, emit_lattice: bool, c2cube: bool, out: Option<&Path>) -> CliResult<()> {
    let v = if c2cube {
        lattice_to_json(&fixture_c2cube()?)
    } else {
        let ex = gen_oddp(p.expect("clap requires p"))?;
        if emit_lattice {
            lattice_to_json(&lattice_of(&ex.diagram)?.lattice)
        } else {
            diagram_to_json(&ex.diagram)
        }
    };
    emit(&render(&v), out)
}

fn to_lattice(input: &Path, out: Option<&Path>) -> CliResult<()> {
    let d = diagram_from_json(&read_json(input)?.value)?;
    let v = d.violations();
    if !v.is_empty() {
        return Err(CliError::Input(format!("invalid diagram: {}", v.join("; "))));
    }
    emit(&render(&lattice_to_json(&lattice_of(&d)?.lattice)), out)
}

fn to_diagram(input: &Path, out: Option<&Path>) -> CliResult<()> {
    let lat = lattice_from_json(&read_json(input)?.value)?;
    let v = lat.violations();
    if !v.is_empty() {
        return Err(CliError::Input(format!("invalid lattice: {}", v.join("; "))));
    }
    let r = is_reduced(&lat)?;
    if !r.reduced {
        return Err(CliError::Input(format!("NotReduced: {}", r.reason.unwrap_or_default())));
    }
    emit(&render(&diagram_to_json(&diagram_of(&lat, true)?.diagram)), out)
}

fn run_check(input: &Path, n: Option<&str>, as_json: bool, timing: bool) -> CliResult<()> {
    let start = Instant::now();
    let inp = read_json(input)?;
    let mut report = match detect_kind(&inp.value)? {
        Kind::Lattice => check::check_lattice(&lattice_from_json(&inp.value)?, inp.digest, n)?,
        Kind::Diagram => check::check_diagram(&diagram_from_json(&inp.value)?, inp.digest, n)?,
        Kind::Module => return Err(CliError::Input("check expects a lattice or a diagram".into())),
    };
    if timing {
        report.elapsed_ms = Some(start.elapsed().as_millis());
    }
    let text = if as_json {
        render(&serde_json::to_value(&report).expect("serializable"))
    } else {
        report.render_text()
    };
    emit(&text, None)?;
    if check::report_ok(&report) {
        Ok(())
    } else if !report.consistent {
        Err(CliError::Verification(report.disagreements.join("; ")))
    } else {
        Err(CliError::Verification("input fails validation".into()))
    }
}

fn load_module(v: &Value) -> CliResult<FpModule> {
    let m = match detect_kind(v)? {
        Kind::Module => module_from_json(v)?,
        Kind::Lattice => FpModule::from_lattice(&lattice_from_json(v)?),
        Kind::Diagram => return Err(CliError::Input("expected a module or a lattice".into())),
    };
    let bad = m.violations();
    if !bad.is_empty() {
        return Err(CliError::Input(format!("invalid module: {}", bad.join("; "))));
    }
    Ok(m)
}

fn decompose(input: &Path, seed: Option<u64>) -> CliResult<()> {
    let inp = read_json(input)?;
    if detect_kind(&inp.value)? == Kind::Lattice {
        let lat = lattice_from_json(&inp.value)?;
        if lat.group().rank() == 1 {
            lat.validate()?;
            let t = cyclic_type(&lat)?;
            let v = json!({ "kind": "heller-reiner", "rank": lat.rank(), "trivial": t.a, "free": t.b, "augmentation": t.c });
            return emit(&render(&v), None);
        }
    }
    let m = load_module(&inp.value)?;
    let g = m.group();
    let jordan: serde_json::Map<String, Value> =
        g.names().iter().zip(m.actions()).map(|(n, a)| (n.clone(), json!(jordan_type(a)))).collect();
    let dec = fp_decompose_seeded(&m, seed.unwrap_or_else(|| m.content_seed()))?;
    let summands: Vec<Value> = dec
        .summands
        .iter()
        .map(|s| {
            json!({
                "dim": s.module.dim(),
                "certified": s.certified,
                "jordan": s.module.actions().iter().map(jordan_type).collect::<Vec<_>>(),
            })
        })
        .collect();
    let v = json!({ "kind": "fp-module", "dim": m.dim(), "jordan": jordan, "summands": summands, "randomized": dec.randomized });
    emit(&render(&v), None)
}

fn fp_check(input: &Path, seed: Option<u64>) -> CliResult<()> {
    let m = load_module(&read_json(input)?.value)?;
    let r = fp_is_permutation_seeded(&m, seed)?;
    emit(&render(&serde_json::to_value(&r).expect("serializable")), None)
}

fn verify_examples(as_json: bool, data_dir: Option<&Path>) -> CliResult<()> {
    let r = report::verify_examples(data_dir)?;
    let text = if as_json { render(&serde_json::to_value(&r).expect("serializable")) } else { r.render_text() };
    emit(&text, None)?;
    match r.first_failure {
        None => Ok(()),
        Some(f) => Err(CliError::Verification(f)),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::GenExample { p, emit_lattice, c2cube, out } => gen_example(p, emit_lattice, c2cube, out.out.as_deref()),
        Command::ToLattice { input, out } => to_lattice(&input, out.out.as_deref()),
        Command::ToDiagram { input, out } => to_diagram(&input, out.out.as_deref()),
        Command::Check { input, n, json, timing } => run_check(&input, n.as_deref(), json, timing),
        Command::Decompose { input } => decompose(&input, cli.seed),
        Command::FpCheck { input } => fp_check(&input, cli.seed),
        Command::VerifyExamples { json, data_dir } => verify_examples(json, data_dir.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("permlat: {e}");
            ExitCode::from(e.code())
        }
    }
}
