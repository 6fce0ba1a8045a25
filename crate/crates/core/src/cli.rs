//! The `pathweave` command line.
//!
//! Exit codes: 0 success, 1 evaluation or analysis failure, 2 I/O, usage or
//! parse failure. `PATHWEAVE_THREADS` sets the worker thread count.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::analysis::{
    assortativity_categorical, assortativity_scalar, pagerank, shortest_paths, spreading_activation,
    AnalysisError, EnergyVector, PageRankConfig, PropertyKind, Report, VertexProperty,
};
use crate::eval::{evaluate, EvalError};
use crate::expr::{check_signatures, parse_program, ParseError, PathExpr};
use crate::matrix::PathMatrix;
use crate::rewrite::{cost, simplify};
use crate::store::{parse_signatures, parse_triples, MultiRelTensor, StoreError};
use crate::util::format_g12;

#[derive(Parser, Debug)]
#[command(name = "pathweave", version, about = "Path algebra over multi-relational networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a graph and report its vertices, labels and signatures.
    LoadCheck(Common),
    /// Evaluate an expression and print the path matrix.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Simplify first; the derivation goes to stderr.
        #[arg(long)]
        simplify: bool,
    },
    /// Print the simplified expression; the derivation goes to stderr.
    Simplify(Common),
    /// Stationary distribution of the path matrix with uniform teleportation.
    Pagerank {
        #[command(flatten)]
        common: Common,
        /// Probability of following a path rather than teleporting.
        #[arg(long, default_value_t = 0.85)]
        delta: f64,
        #[arg(long, default_value_t = 1e-12)]
        epsilon: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iters: usize,
    },
    /// Hop-count distances, eccentricity, radius, diameter and closeness.
    Geodesic(Common),
    /// Energy pushed from seed vertices along the row-normalized path matrix.
    Spread {
        #[command(flatten)]
        common: Common,
        /// Vertex receiving one unit of initial energy; repeatable.
        #[arg(long = "seed", required = true)]
        seeds: Vec<String>,
        #[arg(long, default_value_t = 3)]
        steps: usize,
        /// Factor applied to the energy at every step.
        #[arg(long, default_value_t = 1.0)]
        decay: f64,
        /// Per-step energies below this are dropped.
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
    },
    /// Assortativity of a vertex property over the path matrix.
    Assort {
        #[command(flatten)]
        common: Common,
        /// `vertex<TAB>value` lines.
        #[arg(long)]
        property: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Scalar)]
        kind: Kind,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Triple file: `tail<TAB>label<TAB>head` per line.
    #[arg(long)]
    graph: PathBuf,
    /// Signature file: `label<TAB>domain<TAB>range` per line.
    #[arg(long)]
    signatures: Option<PathBuf>,
    /// Path expression. Defaults to the only slice of a one-label graph.
    #[arg(long, conflicts_with = "expr_file")]
    expr: Option<String>,
    /// File holding the expression.
    #[arg(long)]
    expr_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Tsv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    Scalar,
    Categorical,
}

#[derive(Debug)]
enum Failure {
    /// Bad input: unreadable file, malformed graph, syntax error.
    Input(String),
    /// Well-formed input the computation rejects.
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Domain(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Domain(m) => f.write_str(m),
        }
    }
}

impl From<EvalError> for Failure {
    fn from(e: EvalError) -> Self {
        match e {
            // names the expression uses but the graph lacks
            EvalError::Store(_) | EvalError::UnknownVertex(_) => Failure::Input(e.to_string()),
            EvalError::Kernel(_) => Failure::Domain(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn store_failure(path: &Path, e: StoreError) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

/// The offending source line with a caret under the error offset.
fn show_parse_error(source: &str, origin: &str, e: &ParseError) -> Failure {
    let at = e.offset.min(source.len());
    let line_start = source[..at].rfind('\n').map_or(0, |p| p + 1);
    let line_end = source[at..].find('\n').map_or(source.len(), |p| at + p);
    let line_no = source[..at].matches('\n').count() + 1;
    let col = source[line_start..at].chars().count();
    Failure::Input(format!(
        "{origin}:{line_no}:{}: {e}\n  {}\n  {}^",
        col + 1,
        &source[line_start..line_end],
        " ".repeat(col)
    ))
}

struct Loaded {
    tensor: MultiRelTensor,
    expr: Option<PathExpr>,
}

fn load(c: &Common, need_expr: bool) -> Result<Loaded, Failure> {
    let mut tensor = parse_triples(&read(&c.graph)?).map_err(|e| store_failure(&c.graph, e))?;
    if let Some(p) = &c.signatures {
        let sigs = parse_signatures(&read(p)?).map_err(|e| store_failure(p, e))?;
        tensor = tensor.with_signatures(sigs);
    }
    let source = match (&c.expr, &c.expr_file) {
        (Some(s), _) => Some((s.clone(), "--expr".to_string())),
        (None, Some(p)) => Some((read(p)?, p.display().to_string())),
        (None, None) => None,
    };
    let expr = match source {
        Some((src, origin)) => Some(parse_program(&src).map_err(|e| show_parse_error(&src, &origin, &e))?),
        None if tensor.m() == 1 => tensor.labels().next().map(PathExpr::slice),
        None if need_expr => {
            return Err(Failure::Input(
                "no expression: pass --expr or --expr-file (required when the graph has several labels)"
                    .into(),
            ))
        }
        None => None,
    };
    if let Some(e) = &expr {
        for v in check_signatures(e, &tensor).violations {
            eprintln!("warning: signature mismatch: {v}");
        }
    }
    Ok(Loaded { tensor, expr })
}

fn expression(l: &Loaded) -> &PathExpr {
    l.expr.as_ref().expect("load(.., true) returns an expression")
}

fn matrix_json(z: &PathMatrix, t: &MultiRelTensor) -> String {
    let dict = t.vertices();
    let name = |i: usize| dict.name(i).unwrap_or("?").to_string();
    let entries: Vec<_> = z
        .entries()
        .map(|(i, j, v)| {
            let w = if z.is_exact() {
                json!(v as u64)
            } else {
                json!(format_g12(v).parse::<f64>().unwrap_or(v))
            };
            json!([name(i), name(j), w])
        })
        .collect();
    let out = json!({
        "n": z.n(),
        "representation": z.representation().to_string(),
        "nnz": z.nnz(),
        "entries": entries,
    });
    serde_json::to_string_pretty(&out).expect("serializable") + "\n"
}

fn report(r: &Report, f: Format) -> String {
    match f {
        Format::Tsv => r.to_tsv(),
        Format::Json => r.to_json(),
    }
}

fn analysis(e: AnalysisError, t: &MultiRelTensor) -> Failure {
    match e {
        AnalysisError::MissingProperty(v) => {
            Failure::Domain(format!("no property value for vertex `{}`", t.vertices().name(v).unwrap_or("?")))
        }
        AnalysisError::Malformed { .. } => Failure::Input(e.to_string()),
        other => Failure::Domain(other.to_string()),
    }
}

fn run(cmd: Command) -> Result<String, Failure> {
    match cmd {
        Command::LoadCheck(c) => {
            let l = load(&c, false)?;
            let t = &l.tensor;
            let slices: Vec<_> = t
                .slices()
                .map(|s| {
                    let sig = s.signature().map(|g| g.to_string());
                    (s.label().to_string(), s.len(), sig)
                })
                .collect();
            let check = l.expr.as_ref().map(|e| check_signatures(e, t));
            Ok(match c.format {
                Format::Json => {
                    let mut out = json!({
                        "vertices": t.n(),
                        "labels": t.m(),
                        "edges": t.edge_count(),
                        "slices": slices.iter().map(|(l, k, s)| json!({"label": l, "edges": k, "signature": s})).collect::<Vec<_>>(),
                    });
                    if let (Some(e), Some(r)) = (&l.expr, &check) {
                        out["expression"] = json!({
                            "text": e.to_string(),
                            "type": r.derived.to_string(),
                            "violations": r.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        });
                    }
                    serde_json::to_string_pretty(&out).expect("serializable") + "\n"
                }
                Format::Tsv => {
                    let mut s = format!("vertices\t{}\nlabels\t{}\nedges\t{}\n", t.n(), t.m(), t.edge_count());
                    s.push_str("\nlabel\tedges\tsignature\n");
                    for (label, k, sig) in &slices {
                        s.push_str(&format!("{label}\t{k}\t{}\n", sig.as_deref().unwrap_or("NA")));
                    }
                    if let (Some(e), Some(r)) = (&l.expr, &check) {
                        s.push_str(&format!("\nexpression\t{e}\ntype\t{}\nviolations\t{}\n", r.derived, r.violations.len()));
                    }
                    s
                }
            })
        }
        Command::Eval { common, simplify: simp } => {
            let l = load(&common, true)?;
            let mut e = expression(&l).clone();
            if simp {
                let (s, trace) = simplify(&e);
                eprint!("{}", trace.derivation_table());
                e = s;
            }
            let z = evaluate(&e, &l.tensor)?;
            Ok(match common.format {
                Format::Tsv => z.to_tsv(l.tensor.vertices()),
                Format::Json => matrix_json(&z, &l.tensor),
            })
        }
        Command::Simplify(c) => {
            let l = load(&c, true)?;
            let input = expression(&l);
            let (out, trace) = simplify(input);
            Ok(match c.format {
                Format::Tsv => {
                    eprint!("{}", trace.derivation_table());
                    format!("{out}\n")
                }
                Format::Json => {
                    let steps: Vec<_> = trace
                        .steps
                        .iter()
                        .map(|s| {
                            json!({"rule": s.rule, "identity": s.citation, "path": s.path,
                                   "before": s.before.to_string(), "after": s.after.to_string()})
                        })
                        .collect();
                    let j = json!({
                        "input": input.to_string(), "output": out.to_string(),
                        "cost_before": cost(input), "cost_after": cost(&out), "steps": steps,
                    });
                    serde_json::to_string_pretty(&j).expect("serializable") + "\n"
                }
            })
        }
        Command::Pagerank { common, delta, epsilon, max_iters } => {
            let l = load(&common, true)?;
            let z = evaluate(expression(&l), &l.tensor)?;
            let cfg = PageRankConfig { delta, epsilon, max_iters };
            let pi = pagerank(&z, &cfg).map_err(|e| analysis(e, &l.tensor))?;
            Ok(report(&Report::energy("pagerank", &pi, l.tensor.vertices()), common.format))
        }
        Command::Geodesic(c) => {
            let l = load(&c, true)?;
            let z = evaluate(expression(&l), &l.tensor)?;
            Ok(report(&Report::geodesics(&shortest_paths(&z), l.tensor.vertices()), c.format))
        }
        Command::Spread { common, seeds, steps, decay, threshold } => {
            let l = load(&common, true)?;
            let dict = l.tensor.vertices();
            let mut seed = EnergyVector::new(vec![0.0; dict.len()]);
            for s in &seeds {
                let id = dict
                    .id(s)
                    .ok_or_else(|| Failure::Input(format!("unknown seed vertex `{s}`")))?;
                seed.values[id] += 1.0;
            }
            let z = evaluate(expression(&l), &l.tensor)?;
            let flow = spreading_activation(&z, &seed, steps, decay, threshold).map_err(|e| analysis(e, &l.tensor))?;
            Ok(report(&Report::energy("spread", &flow, dict), common.format))
        }
        Command::Assort { common, property, kind } => {
            let l = load(&common, true)?;
            let text = read(&property)?;
            let z = evaluate(expression(&l), &l.tensor)?;
            let dict = l.tensor.vertices();
            let fail = |e| analysis(e, &l.tensor);
            let r = match kind {
                Kind::Scalar => match VertexProperty::parse(&text, dict, PropertyKind::Scalar).map_err(fail)? {
                    VertexProperty::Scalar(v) => assortativity_scalar(&z, &v).map_err(fail)?,
                    VertexProperty::Categorical(_) => unreachable!("parsed as scalar"),
                },
                Kind::Categorical => {
                    match VertexProperty::parse(&text, dict, PropertyKind::Categorical).map_err(fail)? {
                        VertexProperty::Categorical(v) => assortativity_categorical(&z, &v).map_err(fail)?,
                        VertexProperty::Scalar(_) => unreachable!("parsed as categorical"),
                    }
                }
            };
            Ok(report(&Report::scalar("assortativity", "r", r), common.format))
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("PATHWEAVE_THREADS") else {
        return Ok(());
    };
    let k: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| Failure::Input(format!("PATHWEAVE_THREADS must be a positive integer, got `{v}`")))?;
    // a second initialization in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    Ok(())
}

/// Runs the command line with `args` (program name first) and returns the
/// process exit code. Output goes to stdout, diagnostics to stderr.
pub fn run_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = configure_threads().and_then(|_| run(cli.command));
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()) {
                Ok(()) => 0,
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    2
                }
            }
        }
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    }
}

pub fn main() -> i32 {
    run_with(std::env::args_os())
}
