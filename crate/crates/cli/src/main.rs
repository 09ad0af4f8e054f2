use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use indep_bounds::bounds::{self, er_bounds, evaluate, BoundError, GraphData, Method, SetChoice};
use indep_bounds::certify::{self, CertifyError};
use indep_bounds::exact::max_independent_set;
use indep_bounds::families;
use indep_bounds::geometry::{er_graph, incidence_graph_with_polarity, LoopMode};
use indep_bounds::graphcore::Graph;
use indep_bounds::spectra::{eigenvalues, Matrix};

#[derive(Parser)]
#[command(
    name = "indep-bounds",
    version,
    about = "Eigenvalue bounds on independent sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph from one of the built-in families as JSON.
    Gen(GenArgs),
    /// Evaluate one bound on a graph.
    Bound(BoundArgs),
    /// Closed-form bounds for ER(q), one row per q.
    Table(TableArgs),
    /// Exact independence number.
    Alpha {
        graph: PathBuf,
        /// Time budget in seconds.
        #[arg(long, default_value_t = 60.0)]
        budget: f64,
    },
    /// Check the equality conditions for a set against a bound.
    Certify {
        graph: PathBuf,
        set: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        /// JSON list of diagonal entries for `gentight`; defaults to −τ on every vertex.
        #[arg(long)]
        t: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Er,
    Incidence,
    Kab,
    Xm,
}

#[derive(Clone, Copy, ValueEnum)]
enum LoopArg {
    Keep,
    DropLoops,
    DropAbsolute,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Loop handling for `er`.
    #[arg(long, value_enum, default_value = "keep")]
    loops: LoopArg,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Hoffman,
    Abound,
    Abound1,
    Abound2,
    Lbound,
    Lbound2,
    Sarnak,
    Sarnak2,
    RatioCert,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Hoffman => Method::Hoffman,
            MethodArg::Abound => Method::Abound,
            MethodArg::Abound1 => Method::Abound1,
            MethodArg::Abound2 => Method::Abound2,
            MethodArg::Lbound => Method::Lbound,
            MethodArg::Lbound2 => Method::Lbound2,
            MethodArg::Sarnak => Method::Sarnak,
            MethodArg::Sarnak2 => Method::Sarnak2,
            MethodArg::RatioCert => Method::RatioCert,
        }
    }
}

#[derive(clap::Args)]
struct BoundArgs {
    graph: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// JSON list of vertices of an independent set.
    #[arg(long, conflicts_with = "delta")]
    set: Option<PathBuf>,
    /// Use minimum-degree estimates in place of a set.
    #[arg(long)]
    delta: bool,
    /// JSON matrix (list of rows) for `ratio-cert`; defaults to A − τI.
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct TableArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Add an exact α column.
    #[arg(long)]
    with_alpha: bool,
    /// Seconds per q for the α column.
    #[arg(long, default_value_t = 600.0)]
    alpha_budget: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Hoffman,
    Laplacian,
    Gentight,
    Coprime,
}

/// Exit status 2 for malformed input, 3 when the mathematics does not apply.
enum Failure {
    Input(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Precondition(m) => m,
        }
    }
}

impl From<BoundError> for Failure {
    fn from(e: BoundError) -> Self {
        match e {
            BoundError::NotPsd(_)
            | BoundError::NotIndependent
            | BoundError::Precondition { .. } => Failure::Precondition(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<CertifyError> for Failure {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::NotIndependent
            | CertifyError::NotRegular
            | CertifyError::HasLoops
            | CertifyError::PreconditionFailed(_) => Failure::Precondition(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Graph::from_json(&read_text(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn missing(flag: &str) -> Failure {
    Failure::Input(format!("--{flag} is required for this family"))
}

fn duration(secs: f64) -> Result<Duration, Failure> {
    Duration::try_from_secs_f64(secs)
        .ok()
        .filter(|d| !d.is_zero())
        .ok_or_else(|| Failure::Input(format!("budget must be positive, got {secs}")))
}

fn cmd_gen(args: GenArgs) -> Result<String, Failure> {
    let graph = match args.family {
        Family::Er => {
            let mode = match args.loops {
                LoopArg::Keep => LoopMode::Keep,
                LoopArg::DropLoops => LoopMode::DropLoops,
                LoopArg::DropAbsolute => LoopMode::DropAbsoluteVertices,
            };
            er_graph(args.q.ok_or_else(|| missing("q"))?, mode).map_err(input)?
        }
        Family::Incidence => {
            incidence_graph_with_polarity(args.q.ok_or_else(|| missing("q"))?)
                .map_err(input)?
                .0
        }
        Family::Kab => {
            let (a, b) = (
                args.a.ok_or_else(|| missing("a"))?,
                args.b.ok_or_else(|| missing("b"))?,
            );
            families::complete_bipartite(a, b).map_err(input)?
        }
        Family::Xm => families::x_m(args.m.ok_or_else(|| missing("m"))?).map_err(input)?,
    };
    let text = graph.to_json();
    match args.out {
        Some(path) => {
            fs::write(&path, format!("{text}\n"))
                .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn cmd_bound(args: BoundArgs) -> Result<String, Failure> {
    let graph = read_graph(&args.graph)?;
    let method = Method::from(args.method);
    let report = if let (Method::RatioCert, Some(path)) = (method, &args.matrix) {
        let rows: Vec<Vec<f64>> = read_json(path)?;
        let b = Matrix::from_rows(&rows).map_err(input)?;
        bounds::ratio_certificate(&b, &graph)?.report()
    } else {
        let set: Option<Vec<usize>> = args.set.as_deref().map(read_json).transpose()?;
        let needs_set = matches!(method, Method::Abound | Method::Abound2 | Method::Lbound);
        if needs_set && set.is_none() && !args.delta {
            return Err(Failure::Input(format!("{method} needs --set or --delta")));
        }
        let data = GraphData::compute(&graph)?;
        let choice = match &set {
            Some(s) => SetChoice::Set(s),
            None => SetChoice::WorstCase,
        };
        evaluate(&graph, &data, method, choice)?
    };
    let out = json!({
        "method": method,
        "value": serde_json::to_value(&report).map_err(input)?["value"],
        "informative": report.informative,
        "preconditions_ok": report.preconditions_ok,
        "params": report.params,
    });
    Ok(out.to_string())
}

/// Two decimals, ties rounded away from zero.
fn two_decimals(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

struct Row {
    q: u64,
    bounds: bounds::ErBounds,
    alpha: Option<(usize, bool)>,
}

fn cmd_table(args: TableArgs) -> Result<String, Failure> {
    let budget = duration(args.alpha_budget)?;
    let mut rows = Vec::with_capacity(args.q.len());
    for &q in &args.q {
        rows.push(Row {
            q,
            bounds: er_bounds(q).map_err(input)?,
            alpha: None,
        });
    }
    if args.with_alpha {
        let qs: Vec<u64> = rows.iter().map(|r| r.q).collect();
        let results: Vec<(usize, bool)> = std::thread::scope(|scope| {
            let handles: Vec<_> = qs
                .iter()
                .map(|&q| {
                    scope.spawn(move || {
                        let g = er_graph(q, LoopMode::Keep).expect("q validated above");
                        let r = max_independent_set(&g, budget);
                        (r.alpha, r.optimal)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("solver thread"))
                .collect()
        });
        for (row, res) in rows.iter_mut().zip(results) {
            row.alpha = Some(res);
        }
    }
    let alpha_text = |(a, optimal): (usize, bool)| {
        if optimal {
            a.to_string()
        } else {
            format!("≥{a}")
        }
    };
    Ok(match args.format {
        Format::Csv => {
            let mut lines = Vec::with_capacity(rows.len() + 1);
            let mut header = vec!["q".to_string()];
            if args.with_alpha {
                header.push("alpha".into());
            }
            header.extend(rows.first().map_or_else(Vec::new, |r| {
                r.bounds
                    .columns()
                    .iter()
                    .map(|(name, _)| name.to_string())
                    .collect()
            }));
            lines.push(header.join(","));
            for row in &rows {
                let mut cells = vec![row.q.to_string()];
                if let Some(a) = row.alpha {
                    cells.push(alpha_text(a));
                }
                cells.extend(
                    row.bounds
                        .columns()
                        .iter()
                        .map(|(_, r)| format!("{:.2}", two_decimals(r.value))),
                );
                lines.push(cells.join(","));
            }
            lines.join("\n")
        }
        Format::Json => {
            let list: Vec<Value> = rows
                .iter()
                .map(|row| {
                    let mut obj = serde_json::Map::new();
                    obj.insert("q".into(), json!(row.q));
                    if let Some((a, optimal)) = row.alpha {
                        obj.insert("alpha".into(), json!(a));
                        obj.insert("alpha_optimal".into(), json!(optimal));
                    }
                    for (name, r) in row.bounds.columns() {
                        obj.insert(name.into(), json!(two_decimals(r.value)));
                    }
                    Value::Object(obj)
                })
                .collect();
            Value::Array(list).to_string()
        }
    })
}

fn cmd_alpha(graph: &Path, budget: f64) -> Result<String, Failure> {
    let g = read_graph(graph)?;
    let r = max_independent_set(&g, duration(budget)?);
    Ok(json!({
        "alpha": r.alpha,
        "optimal": r.optimal,
        "witness": r.witness,
        "nodes": r.nodes,
        "elapsed_secs": r.elapsed.as_secs_f64(),
    })
    .to_string())
}

fn cmd_certify(
    graph: &Path,
    set: &Path,
    which: Which,
    t: Option<&Path>,
) -> Result<String, Failure> {
    let g = read_graph(graph)?;
    let set: Vec<usize> = read_json(set)?;
    let value = match which {
        Which::Hoffman => serde_json::to_value(certify::hoffman_equality_certify(&g, &set)?),
        Which::Laplacian => serde_json::to_value(certify::laplacian_equality_certify(&g, &set)?),
        Which::Gentight => {
            let t: Vec<f64> = match t {
                Some(path) => read_json(path)?,
                None => {
                    let tau = eigenvalues(&g.adjacency_matrix())
                        .map_err(input)?
                        .least()
                        .unwrap_or(0.0);
                    vec![-tau; g.n()]
                }
            };
            serde_json::to_value(certify::gentight_check(&g, &t, &set)?)
        }
        Which::Coprime => Ok(json!({
            "complete_bipartite": certify::coprime_complete_bipartite_check(&g, &set)?
        })),
    };
    Ok(value.map_err(input)?.to_string())
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Table(args) => cmd_table(args),
        Command::Alpha { graph, budget } => cmd_alpha(&graph, budget),
        Command::Certify {
            graph,
            set,
            which,
            t,
        } => cmd_certify(&graph, &set, which, t.as_deref()),
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
        Ok(out) => {
            if !out.is_empty() {
                println!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
