//! Subcommands.

use std::fmt::Write as _;
use std::path::PathBuf;

use adaptive_qc::contextuality::{bound_check, cf, is_strongly_contextual, ncf, BoundReport};
use adaptive_qc::dpg::Dpg;
use adaptive_qc::inst::{born_at, instrument_distance, parse_bitstring, AdaptiveInstrument};
use adaptive_qc::models::converters::{convert_with, converter_for};
use adaptive_qc::models::{evaluate, gadget, semantics, standard_form, Model};
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::data::{distribution_json, state_from_arg, BoundSpecJson, InstrumentJson, ScenarioJson};
use crate::graph_file::GraphFile;
use crate::{read_input, to_json, write_output, CliError};

/// Adaptive quantum computation with double port graphs.
#[derive(Debug, Parser)]
#[command(name = "aqc", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Graph file, or `-` for standard input.
    pub file: String,
    /// Expand gadget names used as labels before anything else.
    #[arg(long)]
    pub expand_gadgets: bool,
}

impl GraphInput {
    fn load(&self) -> Result<(Model, Dpg), CliError> {
        load_graph(&self.file, self.expand_gadgets)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a graph file and print the digest of its canonical form.
    Validate(GraphInput),
    /// Compose two graphs horizontally or vertically.
    Compose {
        /// Horizontal composition: A then B along the quantum wires.
        #[arg(long = "h", conflicts_with = "v", required_unless_present = "v")]
        h: bool,
        /// Vertical composition: A above B along the classical wires.
        #[arg(long = "v")]
        v: bool,
        a: String,
        b: String,
        #[arg(short, long, default_value = "-")]
        output: String,
        #[arg(long)]
        expand_gadgets: bool,
    },
    /// Paste a converter into a graph.
    Convert {
        /// Target model family: mbqc, qcm or mbpc.
        #[arg(long)]
        to: String,
        #[command(flatten)]
        input: GraphInput,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Evaluate a graph to its instrument.
    Eval {
        #[command(flatten)]
        input: GraphInput,
        /// Print the instrument as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Outcome distribution of a graph applied to a state at a fixed classical input.
    Born {
        #[command(flatten)]
        input: GraphInput,
        /// `ghz:N`, `zero:N`, `mixed:N` or a state file.
        #[arg(long)]
        state: String,
        /// Classical input bits; empty when the graph has none.
        #[arg(long = "input", default_value = "")]
        bits: String,
    },
    /// Rewrite an MBQC graph to preparation, measurement and correction layers.
    StandardForm {
        #[command(flatten)]
        input: GraphInput,
        /// Output directory for prep.json, meas.json, corr.json and report.json.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Noncontextual fraction of a scenario file.
    Ncf {
        /// Scenario file, or `-` for standard input.
        scenario: String,
        /// Solve the linear program over exact rationals.
        #[arg(long)]
        exact: bool,
    },
    /// Check the success-probability bound for a Bell instrument computing a function.
    BoundCheck {
        /// Bound-check file, or `-` for standard input.
        spec: String,
    },
    /// Write the graph file of a named gadget.
    Gadget {
        name: String,
        #[arg(short, long, default_value = "-")]
        output: String,
    },
}

fn load_graph(path: &str, expand: bool) -> Result<(Model, Dpg), CliError> {
    let file: GraphFile = serde_json::from_str(&read_input(path)?)?;
    file.to_graph(expand)
}

fn graph_json(model: Model, g: &Dpg) -> Result<String, CliError> {
    to_json(&GraphFile::from_graph(model, g))
}

fn pretty(v: &Value) -> String {
    to_json(v).expect("JSON values serialize")
}

/// Hex SHA-256 digest of the canonical text of a graph.
pub fn digest(g: &Dpg) -> String {
    Sha256::digest(g.canonical_text().as_bytes())
        .iter()
        .fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

fn model_for(models: [Model; 2], g: &Dpg) -> Result<Model, CliError> {
    models
        .into_iter()
        .find(|&m| semantics(m).check_graph(g).is_ok())
        .ok_or_else(|| CliError::Input(format!("no single model among {} and {} covers the result", models[0], models[1])))
}

fn instrument_text(inst: &AdaptiveInstrument) -> String {
    let mut s = format!("instrument ({}; {} -> {}; {})\n", inst.k(), inst.m(), inst.n(), inst.l());
    for (&(a, b), phi) in inst.table() {
        let _ = writeln!(
            s,
            "a={} b={}",
            adaptive_qc::inst::bitstring(a, inst.k()),
            adaptive_qc::inst::bitstring(b, inst.l())
        );
        let m = phi.superop();
        for i in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols())
                .map(|j| format!("{:.16e}{:+.16e}i", m[(i, j)].re, m[(i, j)].im))
                .collect();
            let _ = writeln!(s, "  {}", row.join(" "));
        }
    }
    s
}

fn report_json(r: &BoundReport) -> Value {
    json!({
        "lhs": r.lhs,
        "rhs": r.rhs,
        "ncf": r.ncf,
        "nu": r.nu.to_string(),
        "holds": r.holds,
    })
}

fn rational_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        x.to_string()
    }
}

/// Runs one command; the returned text goes to standard output.
pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Validate(input) => {
            let (model, g) = input.load()?;
            g.topological_order()?;
            Ok(format!(
                "valid model={} arity=({};{}->{};{}) vertices={} sha256={}\n",
                model,
                g.k(),
                g.m(),
                g.n(),
                g.l(),
                g.vertices().len(),
                digest(&g)
            ))
        }
        Command::Compose { h, v: _, a, b, output, expand_gadgets } => {
            let (ma, ga) = load_graph(&a, expand_gadgets)?;
            let (mb, gb) = load_graph(&b, expand_gadgets)?;
            let g = if h { ga.compose_h(&gb)? } else { ga.compose_v(&gb)? };
            let model = model_for([ma, mb], &g)?;
            write_output(&output, &graph_json(model, &g)?)?;
            Ok(String::new())
        }
        Command::Convert { to, input, output } => {
            let (model, g) = input.load()?;
            let name = converter_for(model, &to)?;
            let (target, out) = convert_with(&g, name)?;
            write_output(&output, &graph_json(target, &out)?)?;
            Ok(String::new())
        }
        Command::Eval { input, json } => {
            let (model, g) = input.load()?;
            let inst = evaluate(&g, &semantics(model))?;
            if json {
                Ok(pretty(&serde_json::to_value(InstrumentJson::from_instrument(&inst))?))
            } else {
                Ok(instrument_text(&inst))
            }
        }
        Command::Born { input, state, bits } => {
            let (model, g) = input.load()?;
            let inst = evaluate(&g, &semantics(model))?;
            let (a, len) = parse_bitstring(&bits)?;
            if len != inst.k() {
                return Err(CliError::Input(format!("graph takes {} input bits, got {len}", inst.k())));
            }
            let rho = state_from_arg(&state)?;
            let dist = born_at(&rho, &inst, a)?;
            Ok(pretty(&json!({
                "input": bits,
                "distribution": distribution_json(&dist, inst.l()),
            })))
        }
        Command::StandardForm { input, output } => {
            let (model, g) = input.load()?;
            let sf = standard_form(&g)?;
            let sem = semantics(model);
            let before = evaluate(&g, &sem)?;
            let after = evaluate(&sf.assemble()?, &sem)?;
            let distance = instrument_distance(&before, &after)?;
            std::fs::create_dir_all(&output)
                .map_err(|e| CliError::Internal(format!("cannot create {}: {e}", output.display())))?;
            for (name, layer) in [("prep", &sf.prep), ("meas", &sf.meas), ("corr", &sf.corr)] {
                let path = output.join(format!("{name}.json"));
                write_output(&path.to_string_lossy(), &graph_json(model, layer)?)?;
            }
            let report = json!({
                "steps": sf.steps,
                "exported": sf.exported,
                "distance": distance,
                "equal": distance <= adaptive_qc::quantum::TOL,
            });
            write_output(&output.join("report.json").to_string_lossy(), &pretty(&report))?;
            Ok(pretty(&report))
        }
        Command::Ncf { scenario, exact } => {
            let doc: ScenarioJson = serde_json::from_str(&read_input(&scenario)?)?;
            if exact {
                let sc = doc.to_exact()?;
                let value = ncf(&sc)?;
                let contextual = BigRational::one() - value.clone();
                Ok(pretty(&json!({
                    "ncf": rational_string(&value),
                    "cf": rational_string(&contextual),
                    "strong": is_strongly_contextual(&sc),
                })))
            } else {
                let sc = doc.to_f64()?;
                Ok(pretty(&json!({
                    "ncf": ncf(&sc)?,
                    "cf": cf(&sc)?,
                    "strong": is_strongly_contextual(&sc),
                })))
            }
        }
        Command::BoundCheck { spec } => {
            let doc: BoundSpecJson = serde_json::from_str(&read_input(&spec)?)?;
            let s = doc.parse()?;
            let report = bound_check(&s.state, &s.spec, &s.h, &s.f, &s.tau)?;
            Ok(pretty(&report_json(&report)))
        }
        Command::Gadget { name, output } => {
            let (model, g) = gadget(&name)?;
            write_output(&output, &graph_json(model, &g)?)?;
            Ok(String::new())
        }
    }
}
