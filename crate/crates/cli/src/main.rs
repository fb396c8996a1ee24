//! `cdv`: command-line front end for cdv-core.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 usage, IO or input error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cdv_core::constructions::{
    circuit_matrix, find_plane_circuit, interpolation_trace, regular_polygon, walk_plane_circuit, InterpolationParams,
};
use cdv_core::corpus::{run_verify_corpus, CorpusConfig, CorpusSpec};
use cdv_core::embedding::{
    check_vdh_all, find_disjoint_planes, nullspace_embedding, spanned_complex, two_hyperplane_cover,
};
use cdv_core::gmatrix::{random_well_signed, shift_to_one_negative, validate_well_signed, RandomParams};
use cdv_core::graph::{generate_named, is_flat_with_budget, vertex_connectivity, DEFAULT_MINOR_BUDGET};
use cdv_core::io::{parse_json, read_graph, read_matrix, read_matrix_rational, MatrixJson, WellSignedJson};
use cdv_core::kappa::{kappa_lower_bound, mu_report, DEFAULT_KAPPA_BUDGET};
use cdv_core::sap::{check_prop1, sap_kernel};
use cdv_core::spectra::{eigen_sym, inertia_exact};
use cdv_core::{Graph, SymMatrix, VERSION};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: cdv_core::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] cdv_core::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(_) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "cdv", version, about = "Well-signed graph matrices and the Strong Arnold Property")]
struct Cli {
    /// Zero threshold; defaults to each operation's own tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget for minor searches, iteration budget for corank searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Write to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    #[command(subcommand)]
    Graph(GraphCmd),
    #[command(subcommand)]
    Matrix(MatrixCmd),
    #[command(subcommand)]
    Sap(SapCmd),
    #[command(subcommand)]
    Embed(EmbedCmd),
    #[command(subcommand)]
    Construct(ConstructCmd),
    #[command(subcommand)]
    Kappa(KappaCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Subcommand)]
enum GraphCmd {
    /// Named family, e.g. `complete 5`, `complete_bipartite 2 4`, `octahedron`.
    Gen {
        family: String,
        #[arg(allow_negative_numbers = true)]
        params: Vec<i64>,
    },
    Info { graph: PathBuf },
    Connectivity { graph: PathBuf },
    Flatness { graph: PathBuf },
}

/// A well-signed file, or a graph file followed by a matrix file.
#[derive(Debug, Args)]
struct Pair {
    #[arg(num_args = 1..=2, required = true)]
    inputs: Vec<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum MatrixCmd {
    /// Random well-signed matrix; `--delta` shifts it to one negative eigenvalue.
    Gen {
        graph: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<f64>,
        #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
        edge_min: f64,
        #[arg(long, default_value_t = -0.1, allow_negative_numbers = true)]
        edge_max: f64,
        #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
        diag_min: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        diag_max: f64,
    },
    Validate(Pair),
    Spectrum {
        matrix: PathBuf,
        /// Also compute the inertia in exact rational arithmetic.
        #[arg(long)]
        exact: bool,
    },
}

#[derive(Debug, Subcommand)]
enum SapCmd {
    Check(Pair),
    Prop1(Pair),
}

#[derive(Debug, Subcommand)]
enum EmbedCmd {
    Compute { matrix: PathBuf },
    /// The embedding as CSV regardless of `--format`.
    Export { matrix: PathBuf },
    Vdh(Pair),
    Planes(Pair),
}

#[derive(Debug, Subcommand)]
enum ConstructCmd {
    /// From `{"cycle": [..], "points": [[x, y], ..]}` or a regular polygon.
    Circuit {
        input: Option<PathBuf>,
        #[arg(long, conflicts_with = "input")]
        regular: Option<usize>,
    },
    PlaneCircuit {
        #[command(flatten)]
        pair: Pair,
        /// Index into the spanned planes.
        #[arg(long, default_value_t = 0)]
        plane: usize,
        /// Walk even when the plane hypothesis fails.
        #[arg(long)]
        unchecked: bool,
    },
    Interpolate {
        a: PathBuf,
        m: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = 30)]
        bisections: usize,
    },
}

#[derive(Debug, Subcommand)]
enum KappaCmd {
    Search { graph: PathBuf },
    Report { graph: PathBuf },
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    Corpus { spec: PathBuf },
}

#[derive(Debug, Deserialize)]
struct CircuitInput {
    cycle: Vec<usize>,
    points: Vec<[f64; 2]>,
}

/// What a command produced, and whether its checked property held.
struct Outcome {
    body: Body,
    ok: bool,
}

enum Body {
    /// Interchange data, written as is.
    Data(Value),
    /// Wrapped with version, command, tol and seed.
    Report(Value),
    Csv(String),
}

impl Outcome {
    fn report(value: impl Serialize, ok: bool) -> Result<Self> {
        Ok(Outcome {
            body: Body::Report(to_value(value)?),
            ok,
        })
    }
}

fn to_value(value: impl Serialize) -> Result<Value> {
    serde_json::to_value(value).map_err(|e| CliError::Core(cdv_core::Error::Invalid(e.to_string())))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> cdv_core::Result<T>) -> Result<T> {
    parse(&read_text(path)?).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn load_graph(path: &Path) -> Result<Graph> {
    load(path, read_graph)
}

/// A bare matrix, or the matrix of a well-signed file.
fn load_matrix(path: &Path) -> Result<SymMatrix> {
    load(path, |text| match parse_json::<WellSignedJson>(text) {
        Ok(w) => w.matrix.to_f64(),
        Err(_) => read_matrix(text),
    })
}

fn load_pair(pair: &Pair) -> Result<(Graph, SymMatrix)> {
    match pair.inputs.as_slice() {
        [single] => {
            let w = load(single, parse_json::<WellSignedJson>)?;
            let m = w.matrix.to_f64().map_err(|source| CliError::Input {
                path: single.clone(),
                source,
            })?;
            Ok((w.graph, m))
        }
        [g, m] => Ok((load_graph(g)?, load_matrix(m)?)),
        _ => Err(CliError::Usage("expected a well-signed file or a graph and a matrix".into())),
    }
}

fn check_size(g: &Graph, m: &SymMatrix) -> Result<()> {
    if g.n() != m.n() {
        return Err(CliError::Usage(format!("graph has {} vertices, matrix is {}×{}", g.n(), m.n(), m.n())));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome> {
    let tol = cli.tol;
    match &cli.command {
        Command::Graph(cmd) => match cmd {
            GraphCmd::Gen { family, params } => {
                let g = generate_named(family, params).map_err(|e| CliError::Usage(e.to_string()))?;
                Ok(Outcome {
                    body: Body::Data(to_value(&g)?),
                    ok: true,
                })
            }
            GraphCmd::Info { graph } => {
                let g = load_graph(graph)?;
                let info = json!({
                    "n": g.n(),
                    "edges": g.edge_count(),
                    "degree_sequence": g.degree_sequence(),
                    "connected": g.is_connected(),
                    "components": g.component_count(),
                });
                Outcome::report(info, true)
            }
            GraphCmd::Connectivity { graph } => {
                let g = load_graph(graph)?;
                Outcome::report(json!({ "vertex_connectivity": vertex_connectivity(&g)? }), true)
            }
            GraphCmd::Flatness { graph } => {
                let g = load_graph(graph)?;
                let r = is_flat_with_budget(&g, cli.budget.unwrap_or(DEFAULT_MINOR_BUDGET))?;
                Outcome::report(r, true)
            }
        },
        Command::Matrix(cmd) => match cmd {
            MatrixCmd::Gen {
                graph,
                delta,
                edge_min,
                edge_max,
                diag_min,
                diag_max,
            } => {
                let g = load_graph(graph)?;
                if !(*edge_min <= *edge_max && *edge_max < 0.0 && diag_min <= diag_max) {
                    return Err(CliError::Usage("need edge_min <= edge_max < 0 and diag_min <= diag_max".into()));
                }
                let params = RandomParams {
                    edge_min: *edge_min,
                    edge_max: *edge_max,
                    diag_min: *diag_min,
                    diag_max: *diag_max,
                };
                let mut m = random_well_signed(&g, cli.seed, params);
                if let Some(delta) = delta {
                    m = shift_to_one_negative(&m, *delta)?;
                }
                Ok(Outcome {
                    body: Body::Data(to_value(WellSignedJson::from_matrix(&m, tol))?),
                    ok: true,
                })
            }
            MatrixCmd::Validate(pair) => {
                let (g, m) = load_pair(pair)?;
                check_size(&g, &m)?;
                let violations = validate_well_signed(&g, &m)?;
                let ok = violations.is_empty();
                Outcome::report(json!({ "well_signed": ok, "violations": violations }), ok)
            }
            MatrixCmd::Spectrum { matrix, exact } => {
                let m = load_matrix(matrix)?;
                let s = eigen_sym(&m, tol)?;
                if cli.format == Format::Csv {
                    let mut csv = String::from("index,eigenvalue\n");
                    for (k, l) in s.eigenvalues.iter().enumerate() {
                        csv.push_str(&format!("{},{:.17e}\n", k + 1, l));
                    }
                    return Ok(Outcome {
                        body: Body::Csv(csv),
                        ok: true,
                    });
                }
                let mut v = to_value(&s)?;
                if *exact {
                    let r = load(matrix, |text| match parse_json::<WellSignedJson>(text) {
                        Ok(w) => w.matrix.to_rational(),
                        Err(_) => read_matrix_rational(text),
                    })?;
                    v["exact_inertia"] = to_value(inertia_exact(&r))?;
                }
                Outcome::report(v, true)
            }
        },
        Command::Sap(cmd) => match cmd {
            SapCmd::Check(pair) => {
                let (g, m) = load_pair(pair)?;
                check_size(&g, &m)?;
                let r = sap_kernel(&g, &m, tol)?;
                let ok = r.kernel_dim == 0;
                let mut v = to_value(&r)?;
                v["has_sap"] = json!(ok);
                Outcome::report(v, ok)
            }
            SapCmd::Prop1(pair) => {
                let (g, m) = load_pair(pair)?;
                check_size(&g, &m)?;
                let r = check_prop1(&g, &m, tol)?;
                let ok = r.consistent;
                Outcome::report(r, ok)
            }
        },
        Command::Embed(cmd) => match cmd {
            EmbedCmd::Compute { matrix } | EmbedCmd::Export { matrix } => {
                let u = nullspace_embedding(&load_matrix(matrix)?, tol)?;
                if cli.format == Format::Csv || matches!(cmd, EmbedCmd::Export { .. }) {
                    return Ok(Outcome {
                        body: Body::Csv(u.to_csv()),
                        ok: true,
                    });
                }
                Outcome::report(json!({ "d": u.d(), "vectors": u.vectors }), true)
            }
            EmbedCmd::Vdh(pair) => {
                let (g, m) = load_pair(pair)?;
                check_size(&g, &m)?;
                let r = check_vdh_all(&g, &m, tol)?;
                let ok = r.passed();
                Outcome::report(r, ok)
            }
            EmbedCmd::Planes(pair) => {
                let (g, m) = load_pair(pair)?;
                check_size(&g, &m)?;
                let u = nullspace_embedding(&m, tol)?;
                let complex = spanned_complex(&g, &u)?;
                let mut v = json!({ "d": u.d(), "complex": complex });
                if u.d() == 4 {
                    v["disjoint_planes"] = to_value(find_disjoint_planes(&g, &u)?)?;
                }
                if u.d() >= 2 {
                    v["two_hyperplane_cover"] = to_value(two_hyperplane_cover(&g, &u)?)?;
                }
                Outcome::report(v, true)
            }
        },
        Command::Construct(cmd) => match cmd {
            ConstructCmd::Circuit { input, regular } => {
                let (cycle, points) = match (input, regular) {
                    (Some(path), None) => {
                        let c = load(path, parse_json::<CircuitInput>)?;
                        (c.cycle, c.points)
                    }
                    (None, Some(n)) => ((0..*n).collect(), regular_polygon(*n)),
                    _ => return Err(CliError::Usage("give an input file or --regular N".into())),
                };
                if cycle.len() != points.len() {
                    return Err(CliError::Usage(format!("{} cycle vertices but {} points", cycle.len(), points.len())));
                }
                let a = circuit_matrix(&cycle, &points)?;
                let s = eigen_sym(&a.matrix, tol)?;
                Outcome::report(json!({ "circuit": a, "lambda_minus": s.neg_count, "corank": s.corank() }), true)
            }
            ConstructCmd::PlaneCircuit { pair, plane, unchecked } => {
                let (g, m) = load_pair(pair)?;
                check_size(&g, &m)?;
                let u = nullspace_embedding(&m, tol)?;
                let complex = spanned_complex(&g, &u)?;
                let p = complex.planes.get(*plane).ok_or_else(|| {
                    CliError::Usage(format!("plane {plane} out of range ({} planes)", complex.planes.len()))
                })?;
                let a = if *unchecked {
                    walk_plane_circuit(&g, &u, p)?
                } else {
                    find_plane_circuit(&g, &u, p)?
                };
                let embedded = a.embedded(g.n())?;
                let s = eigen_sym(&embedded, tol)?;
                let v = json!({
                    "circuit": a,
                    "matrix": MatrixJson::from_f64(&embedded),
                    "lambda_minus": s.neg_count,
                });
                Outcome::report(v, true)
            }
            ConstructCmd::Interpolate {
                a,
                m,
                beta_max,
                steps,
                bisections,
            } => {
                let (a, m) = (load_matrix(a)?, load_matrix(m)?);
                let params = InterpolationParams {
                    beta_max: *beta_max,
                    steps: *steps,
                    bisections: *bisections,
                };
                let t = interpolation_trace(&a, &m, params, tol)?;
                if cli.format == Format::Csv {
                    return Ok(Outcome {
                        body: Body::Csv(t.to_csv()),
                        ok: true,
                    });
                }
                let ok = t.corank_bound_holds;
                Outcome::report(t, ok)
            }
        },
        Command::Kappa(cmd) => match cmd {
            KappaCmd::Search { graph } => {
                let g = load_graph(graph)?;
                let w = kappa_lower_bound(&g, cli.budget.unwrap_or(DEFAULT_KAPPA_BUDGET), cli.seed)?;
                let matrix = WellSignedJson::from_matrix(&w.matrix, Some(w.tol));
                Outcome::report(json!({ "witness": w, "matrix": matrix }), true)
            }
            KappaCmd::Report { graph } => {
                let g = load_graph(graph)?;
                let r = mu_report(&g, cli.budget.unwrap_or(DEFAULT_KAPPA_BUDGET), cli.seed)?;
                let ok = r.consistent;
                Outcome::report(r, ok)
            }
        },
        Command::Verify(VerifyCmd::Corpus { spec }) => {
            let s: CorpusSpec = load(spec, parse_json)?;
            let config = CorpusConfig {
                tol,
                seed: cli.seed,
                kappa_budget: cli.budget.unwrap_or(DEFAULT_KAPPA_BUDGET),
            };
            let r = run_verify_corpus(&s, &config)?;
            if let Some(f) = &r.first_failure {
                eprintln!("first failure: {f}");
            }
            let ok = r.passed;
            Outcome::report(r, ok)
        }
    }
}

fn command_name(cmd: &Command) -> String {
    let debug = format!("{cmd:?}");
    // `Graph(Gen { .. })` -> `graph gen`
    debug
        .split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .take(2)
        .map(|s| {
            let mut out = String::new();
            for (i, c) in s.chars().enumerate() {
                if c.is_uppercase() && i > 0 {
                    out.push('-');
                }
                out.extend(c.to_lowercase());
            }
            out
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn render(cli: &Cli, body: Body) -> Result<String> {
    let value = match body {
        Body::Csv(text) => return Ok(text),
        Body::Data(v) => v,
        Body::Report(result) => json!({
            "version": VERSION,
            "command": command_name(&cli.command),
            "tol": cli.tol,
            "seed": cli.seed,
            "result": result,
        }),
    };
    if cli.format == Format::Csv {
        return Err(CliError::Usage("this command has no CSV output".into()));
    }
    let mut text = serde_json::to_string_pretty(&value).expect("values serialize");
    text.push('\n');
    Ok(text)
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| {
        let text = render(&cli, outcome.body)?;
        emit(&cli, &text)?;
        Ok(outcome.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_names_are_kebab_case() {
        let cli = Cli::parse_from(["cdv", "construct", "plane-circuit", "w.json"]);
        assert_eq!(command_name(&cli.command), "construct plane-circuit");
        let cli = Cli::parse_from(["cdv", "--seed", "3", "graph", "gen", "complete", "4"]);
        assert_eq!(command_name(&cli.command), "graph gen");
        assert_eq!(cli.seed, 3);
    }

    #[test]
    fn pair_takes_one_or_two_files() {
        assert!(Cli::try_parse_from(["cdv", "sap", "check"]).is_err());
        assert!(Cli::try_parse_from(["cdv", "sap", "check", "a", "b", "c"]).is_err());
        assert!(Cli::try_parse_from(["cdv", "sap", "check", "a", "b"]).is_ok());
    }
}
