//! The `be` command line: evaluate, verify, cost and export block-encoding
//! graphs stored as JSON, and run the built-in demos.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage,
//! parse or evaluation errors.

pub mod demos;
pub mod output;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use blockenc::linalg::basis_vector;
use blockenc::{set_budget, Budget, Error, GraphDocument, Node, CVector};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::output::{parse_vector, vector_json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Accuracy and failure probability pairs in the estimate's query table.
pub const NORM_QUERY_POINTS: [(f64, f64); 2] = [(1e-1, 1e-2), (1e-2, 1e-2)];

#[derive(Debug, Parser)]
#[command(name = "be", version, about = "Evaluate, verify and cost block-encoding graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply the encoded matrix to a vector.
    Eval {
        /// Graph file, `-` for stdin, or `demo:<name>`.
        graph: String,
        /// JSON vector file or `basis:<k>`.
        #[arg(long, default_value = "basis:0")]
        input: String,
        /// Use the circuit path instead of matrix arithmetic.
        #[arg(long)]
        simulate: bool,
    },
    /// Compare the circuit path against matrix arithmetic.
    Verify {
        graph: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Qubits, gate counts, normalization and efficiency.
    Estimate { graph: String },
    /// OpenQASM text of the circuit.
    Emit {
        graph: String,
        /// Expand permutation gates into multi-controlled X networks.
        #[arg(long)]
        lower: bool,
    },
    /// Run a built-in example: increment, laplace or convolution.
    Demo {
        name: String,
        /// Register size where the demo has one.
        #[arg(long = "N", visible_alias = "n")]
        n: Option<usize>,
        #[arg(long)]
        tolerance: Option<f64>,
        /// Write the demo's graph document to this path.
        #[arg(long)]
        dump_graph: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

/// Runs the command line with `BE_BUDGET` taken from the environment.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = std::env::var("BE_BUDGET").ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(args, env.as_deref(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run<I, T>(args: I, budget_env: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    if let Some(spec) = budget_env {
        match Budget::parse(spec) {
            Ok(b) => set_budget(b),
            Err(e) => {
                let _ = writeln!(err, "error: BE_BUDGET: {e}");
                return EXIT_USAGE;
            }
        }
    }
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load_graph(source: &str) -> Result<Node, Failure> {
    if let Some(name) = source.strip_prefix("demo:") {
        return Ok(demos::run(name, None, None)?.node);
    }
    let text = if source == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(source).map_err(|e| usage(format!("{source}: {e}")))?
    };
    Ok(GraphDocument::parse(&text)?.node()?)
}

fn load_input(spec: &str, dim: usize) -> Result<CVector, Failure> {
    if let Some(k) = spec.strip_prefix("basis:") {
        let k: usize = k.parse().map_err(|_| usage(format!("bad basis index `{k}`")))?;
        if k >= dim {
            return Err(usage(format!("basis index {k} out of range for dimension {dim}")));
        }
        return Ok(basis_vector(dim, k));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| usage(format!("{spec}: {e}")))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| usage(format!("{spec}: {e}")))?;
    let v = parse_vector(&value).ok_or_else(|| usage(format!("{spec}: expected a JSON list of numbers or [re, im] pairs")))?;
    if v.len() != dim {
        return Err(usage(format!("input has length {}, graph expects {dim}", v.len())));
    }
    Ok(v)
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<(), Failure> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("values serialize"))
        .map_err(|e| usage(format!("stdout: {e}")))
}

/// The estimate document for `node`.
pub fn estimate(node: &Node) -> blockenc::Result<Value> {
    let report = node.resources()?;
    let queries: Value = match report.info_efficiency {
        Some(_) => NORM_QUERY_POINTS
            .iter()
            .map(|&(eps, delta)| {
                json!({ "epsilon": eps, "delta": delta, "queries": report.norm_query_estimate(eps, delta) })
            })
            .collect(),
        None => Value::Null,
    };
    let mut doc = serde_json::to_value(&report).expect("reports serialize");
    doc["dim_in"] = json!(node.dim_in());
    doc["dim_out"] = json!(node.dim_out());
    doc["norm_queries"] = queries;
    Ok(doc)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Eval { graph, input, simulate } => {
            let node = load_graph(&graph)?;
            let v = load_input(&input, node.dim_in())?;
            let result = if simulate { node.simulate(&v)? } else { node.compute(&v)? };
            print_json(out, &json!({
                "path": if simulate { "simulate" } else { "compute" },
                "output": vector_json(&result),
            }))?;
            Ok(EXIT_OK)
        }
        Command::Verify { graph, tol } => {
            let node = load_graph(&graph)?;
            let report = node.verify(tol)?;
            print_json(out, &serde_json::to_value(&report).expect("reports serialize"))?;
            Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Estimate { graph } => {
            let node = load_graph(&graph)?;
            print_json(out, &estimate(&node)?)?;
            Ok(EXIT_OK)
        }
        Command::Emit { graph, lower } => {
            let node = load_graph(&graph)?;
            let text = node.circuit()?.export_text(lower).map_err(|e| match e {
                Error::UnsupportedGate(_) => usage(format!("{e}; pass --lower to expand permutations")),
                other => other.into(),
            })?;
            write!(out, "{text}").map_err(|e| usage(format!("stdout: {e}")))?;
            Ok(EXIT_OK)
        }
        Command::Demo { name, n, tolerance, dump_graph } => {
            let demo = demos::run(&name, n, tolerance)?;
            if let Some(path) = dump_graph {
                let mut doc = GraphDocument::new(&demo.node);
                doc.metadata.insert("demo".into(), json!(name));
                std::fs::write(&path, doc.to_string_pretty())
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            }
            print_json(out, &demo.report)?;
            if demo.pass {
                Ok(EXIT_OK)
            } else {
                let _ = writeln!(err, "demo `{name}` did not meet its own check");
                Ok(EXIT_VERIFY_FAILED)
            }
        }
    }
}
