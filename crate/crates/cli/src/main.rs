//! `vicheck`: batch front end for the vertex-integrity model checker.
//!
//! Exit codes: 0 satisfiable (or success), 1 unsatisfiable, 2 malformed input
//! or other error, 3 evaluation budget exceeded, 4 I/O failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;
use vicheck_core::corpus::{random_instance, InstanceParams};
use vicheck_core::engine::{model_check_with, EngineError, Parallelism, SolveOptions};
use vicheck_core::evaluator::{kernelize, EvalError, DEFAULT_BUDGET};
use vicheck_core::formulas::print;
use vicheck_core::graphs::{find_vi_set, minimum_vi_set, ColoredGraph};
use vicheck_core::gso::gso_model_check_with;
use vicheck_core::instance::{
    unsat_json, witness_indices, ConstraintFile, InstanceError, MsoglInstance, SetValue, Witness,
};
use vicheck_core::oracle::{brute_force_gsogl, check_assignment, OracleError};
use vicheck_core::problems::{encode, gen_ecp_hardness, Encoded, ProblemError, ProblemSpec};

#[derive(Parser)]
#[command(name = "vicheck", version, about = "MSO model checking with cardinality constraints on graphs of bounded vertex integrity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance and print a witness.
    Check(CheckArgs),
    /// Print the vertex integrity and a vi-set.
    Vi {
        #[arg(long)]
        graph: PathBuf,
        /// Look for a vi(k)-set instead of the minimum.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Compile a named problem into graph, formula and constraints files.
    Encode {
        /// fair-vertex-cover, defective-coloring, alliance, equitable-partition,
        /// capacitated, bounded-degree-deletion or capacitated-mso2.
        problem: String,
        #[arg(long)]
        graph: PathBuf,
        /// Problem parameters as a JSON object, e.g. '{"colors": 3, "defect": 0}'.
        #[arg(long, default_value = "{}")]
        params: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Brute-force reference checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Print the kernel of a graph for formulas with `q` quantifiers.
    Kernel {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Equitable Connected Partition instance from Unary Bin Packing.
    Ecp {
        #[arg(long)]
        t: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// A random small instance.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long)]
        mso2: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exhaustive verdict, or re-verification of a witness file.
    Check {
        #[command(flatten)]
        input: InstanceArgs,
        /// Check this witness instead of searching.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
}

#[derive(Args)]
struct InstanceArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    formula: PathBuf,
    #[arg(long)]
    constraints: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Force the MSO₂ route (chosen automatically for edge-sorted formulas).
    #[arg(long)]
    mso2: bool,
    /// Use a vi(k)-set for this k instead of the minimum.
    #[arg(long)]
    k: Option<usize>,
    /// Node-visit budget per kernel evaluation.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Dump the vi-set, shapes, γ choice and ILP to stderr.
    #[arg(long)]
    explain: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Also write the verdict JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    pretty: bool,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 4,
            CliError::Engine(EngineError::Eval(EvalError::BudgetExceeded(_))) => 3,
            _ => 2,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_owned(),
            source,
        })?;
    }
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_graph(path: &Path) -> Result<ColoredGraph, CliError> {
    Ok(ColoredGraph::from_json_str(&read(path)?).map_err(InstanceError::from)?)
}

fn load(args: &InstanceArgs) -> Result<(ColoredGraph, MsoglInstance), CliError> {
    let g = load_graph(&args.graph)?;
    let formula = read(&args.formula)?;
    let file = match &args.constraints {
        Some(p) => ConstraintFile::from_json_str(&read(p)?)?,
        None => ConstraintFile::default(),
    };
    let inst = file.instance(&formula, g.n())?;
    inst.check_graph(&g)?;
    Ok((g, inst))
}

fn render(value: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value).unwrap()
    } else {
        value.to_string()
    }
}

fn verdict_code(sat: bool) -> u8 {
    if sat {
        0
    } else {
        1
    }
}

fn check(args: &CheckArgs) -> Result<u8, CliError> {
    let (g, inst) = load(&args.input)?;
    let opts = SolveOptions {
        budget: args.budget,
        k_override: args.k,
        parallelism: if args.threads > 1 {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        },
        explain: args.explain,
        ..SolveOptions::default()
    };
    let (witness, explain) = if args.mso2 || inst.formula.is_mso2() {
        let sol = gso_model_check_with(&g, &inst, &opts)?;
        (sol.witness, sol.solution.explain)
    } else {
        let sol = model_check_with(&g, &inst, &opts)?;
        let w = sol.assignment.as_ref().map(|a| Witness::from_assignment(&inst.formula, a));
        (w, sol.explain)
    };
    for line in &explain {
        eprintln!("{line}");
    }
    let value = witness.as_ref().map_or_else(unsat_json, Witness::to_json);
    let text = render(&value, args.pretty);
    println!("{text}");
    if let Some(out) = &args.out {
        write(out, &format!("{text}\n"))?;
    }
    Ok(verdict_code(witness.is_some()))
}

/// Reads a witness file written by `check` back into index sets.
fn parse_witness(text: &str, g: &ColoredGraph, inst: &MsoglInstance) -> Result<Option<Vec<Vec<usize>>>, CliError> {
    let bad = |msg: &str| CliError::Usage(format!("witness file: {msg}"));
    let value: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
    if value.get("satisfiable") == Some(&Value::Bool(false)) {
        return Ok(None);
    }
    let map = value
        .get("assignment")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("missing `assignment`"))?;
    let as_numbers = |v: &Value| -> Option<Vec<usize>> {
        v.as_array()?.iter().map(|x| x.as_u64().map(|x| x as usize)).collect()
    };
    let mut values = Vec::new();
    for var in &inst.formula.free {
        let value = if var.sort.is_edge_sorted() {
            let pairs = map
                .get(&format!("{}_edges", var.name))
                .and_then(Value::as_array)
                .ok_or_else(|| bad(&format!("missing `{}_edges`", var.name)))?;
            let mut edges = Vec::new();
            for p in pairs {
                match as_numbers(p).as_deref() {
                    Some(&[u, v]) if g.is_adjacent(u.min(v), u.max(v)) => edges.push((u.min(v), u.max(v))),
                    _ => return Err(bad(&format!("`{}` lists a non-edge", var.name))),
                }
            }
            SetValue::Edges(edges)
        } else {
            let vs = map
                .get(&var.name)
                .and_then(as_numbers)
                .ok_or_else(|| bad(&format!("missing `{}`", var.name)))?;
            SetValue::Vertices(vs)
        };
        values.push(value);
    }
    let w = Witness {
        names: inst.formula.free.iter().map(|v| v.name.clone()).collect(),
        values,
    };
    Ok(Some(witness_indices(g, &inst.formula, &w)))
}

fn oracle_check(input: &InstanceArgs, witness: Option<&Path>, pretty: bool) -> Result<u8, CliError> {
    let (g, inst) = load(input)?;
    match witness {
        Some(path) => {
            let Some(sets) = parse_witness(&read(path)?, &g, &inst)? else {
                return Err(CliError::Usage("the witness file records an unsatisfiable verdict".into()));
            };
            let valid = check_assignment(&g, &inst, &sets)?;
            println!("{}", render(&json!({ "valid": valid }), pretty));
            Ok(verdict_code(valid))
        }
        None => {
            let verdict = brute_force_gsogl(&g, &inst)?;
            let mut value = verdict.witness.as_ref().map_or_else(unsat_json, Witness::to_json);
            value["count"] = json!(verdict.count);
            println!("{}", render(&value, pretty));
            Ok(verdict_code(verdict.satisfiable))
        }
    }
}

fn write_instance(out: &Path, g: &ColoredGraph, inst: &MsoglInstance) -> Result<(), CliError> {
    write(&out.join("graph.json"), &format!("{}\n", g.to_json_string()))?;
    write(&out.join("formula.mso"), &format!("{}\n", print(&inst.formula.body)))?;
    write(
        &out.join("constraints.json"),
        &format!("{}\n", ConstraintFile::from_instance(inst).to_json_string()),
    )
}

fn write_encoded(out: &Path, spec: &ProblemSpec, enc: &Encoded) -> Result<(), CliError> {
    write_instance(out, &enc.graph, &enc.instance)?;
    write(
        &out.join("problem.json"),
        &format!("{}\n", serde_json::to_string_pretty(spec).unwrap()),
    )
}

fn encode_problem(problem: &str, graph: &Path, params: &str, out: &Path) -> Result<u8, CliError> {
    let g = load_graph(graph)?;
    let mut value: Value =
        serde_json::from_str(params).map_err(|e| CliError::Usage(format!("--params: {e}")))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| CliError::Usage("--params must be a JSON object".into()))?;
    obj.insert("problem".into(), json!(problem));
    let spec: ProblemSpec =
        serde_json::from_value(value).map_err(|e| CliError::Usage(format!("problem `{problem}`: {e}")))?;
    let enc = encode(&spec, &g)?;
    write_encoded(out, &spec, &enc)?;
    println!(
        "{}",
        json!({ "vertices": enc.graph.n(), "mso2": enc.mso2, "formula_size": enc.instance.formula.body.size() })
    );
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Check(args) => {
            if args.threads > 1 {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(args.threads)
                    .build_global()
                    .map_err(|e| CliError::Usage(e.to_string()))?;
            }
            check(&args)
        }
        Command::Vi { graph, k } => {
            let g = load_graph(&graph)?;
            let vi = match k {
                Some(k) => find_vi_set(&g, k).ok_or(EngineError::NoViSet(k))?,
                None => minimum_vi_set(&g),
            };
            println!("vi={}, S={:?}", vi.k, vi.set);
            Ok(0)
        }
        Command::Encode {
            problem,
            graph,
            params,
            out,
        } => encode_problem(&problem, &graph, &params, &out),
        Command::Gen(GenCommand::Ecp { t, items, out }) => {
            let inst = gen_ecp_hardness(t, &items)?;
            let spec = inst.spec();
            let enc = encode(&spec, &inst.graph)?;
            write_encoded(&out, &spec, &enc)?;
            println!(
                "{}",
                json!({
                    "vertices": inst.graph.n(),
                    "parts": inst.parts,
                    "bin_size": inst.bin_size,
                    "trivially_no": inst.trivially_no(),
                })
            );
            Ok(0)
        }
        Command::Gen(GenCommand::Random { seed, max_n, mso2, out }) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let params = InstanceParams {
                max_n,
                mso2,
                ..InstanceParams::default()
            };
            let (g, inst) = random_instance(&mut rng, &params);
            write_instance(&out, &g, &inst)?;
            println!("{}", json!({ "vertices": g.n(), "formula": print(&inst.formula.body) }));
            Ok(0)
        }
        Command::Oracle(OracleCommand::Check {
            input,
            witness,
            pretty,
        }) => oracle_check(&input, witness.as_deref(), pretty),
        Command::Kernel { graph, q, k } => {
            let g = load_graph(&graph)?;
            let vi = match k {
                Some(k) => find_vi_set(&g, k).ok_or(EngineError::NoViSet(k))?,
                None => minimum_vi_set(&g),
            };
            println!("{}", kernelize(&g, &vi, q).to_json_string());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
