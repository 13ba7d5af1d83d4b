//! Command-line toolkit for penny-graph embeddings on the flat square torus.
//!
//! Exit codes: 0 success, 1 verification failed, 2 usage error, 3 numerical
//! failure. Reports are JSON on stdout (parseable whenever the exit code is
//! 0 or 1); human-readable diagnostics go to stderr. Node numbering in
//! reports is 1-based, matching the usual table convention; the config and
//! graph interchange files stay 0-based.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use penny_torus::catalog;
use penny_torus::graph::{self, GraphJson, SmallGraph};
use penny_torus::optimizer::{
    maximize_min_distance, uniqueness_survey, OptimizerParams, RefineOptions, SurveyParams,
    SurveyTarget,
};
use penny_torus::packing::{
    self,
    io::{self as config_io, LoadedConfiguration},
    PackingReport, PennyFailure,
};
use penny_torus::render::{render_drawing, render_packing, RenderOptions};
use penny_torus::scalar::{format_rational, TorusScalar};

const SCHEMA_VERSION: u64 = 1;

#[derive(Parser)]
#[command(
    name = "penny-torus",
    about = "Verify, identify, optimize, and render equal-circle packings on the unit square torus",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify that a configuration is a penny embedding of an expected graph.
    Verify(VerifyArgs),
    /// Report diameter, contact graph, named match, planarity, bipartiteness.
    Analyze(AnalyzeArgs),
    /// Search for a maximal-min-distance configuration of n points.
    Optimize(OptimizeArgs),
    /// Random-restart uniqueness survey for a target contact graph.
    Survey(SurveyArgs),
    /// List or emit the cataloged configurations.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Render a configuration or a cataloged drawing to SVG.
    Render(RenderArgs),
    /// Planar penny-graph edge bound.
    Bound(BoundArgs),
    /// Planarity of a graph given in the JSON interchange schema.
    Planar(PlanarArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Configuration JSON file ("-" or omitted: stdin).
    config: Option<PathBuf>,
    /// Expected contact graph (K4, K5, K6, K7, K33, octahedron, cycle(n), path(n)).
    #[arg(long)]
    expect: String,
    /// Require exact-rational coordinates and verify with zero tolerance.
    #[arg(long)]
    exact: bool,
    /// Relative contact tolerance (numeric mode).
    #[arg(long, default_value_t = packing::DEFAULT_CONTACT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Configuration JSON file ("-" or omitted: stdin).
    config: Option<PathBuf>,
    /// Relative contact tolerance (numeric mode).
    #[arg(long, default_value_t = packing::DEFAULT_CONTACT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Number of points (2..=64).
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iteration cap per annealing stage.
    #[arg(long, default_value_t = 400)]
    max_iterations: usize,
    /// Contact tolerance used for the reported contact graph.
    #[arg(long, default_value_t = packing::DEFAULT_CONTACT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct SurveyArgs {
    /// Survey target: k33 or k5.
    #[arg(long)]
    target: String,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Refinement convergence tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 100)]
    max_iterations: usize,
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List catalog entry names.
    List,
    /// Emit a catalog entry in the configuration interchange format.
    Emit { name: String },
}

#[derive(Args)]
struct RenderArgs {
    /// Configuration JSON file to render as a packing.
    #[arg(long, conflicts_with = "drawing")]
    input: Option<PathBuf>,
    /// Cataloged drawing to render: "k7", or "k6:<removed-vertex>".
    #[arg(long)]
    drawing: Option<String>,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
    /// k x k tiling of the fundamental domain.
    #[arg(long, default_value_t = 1)]
    tiling: u32,
    #[arg(long, default_value_t = 512)]
    canvas: u32,
    #[arg(long)]
    no_edges: bool,
    #[arg(long)]
    labels: bool,
    /// Contact tolerance for packing inputs.
    #[arg(long, default_value_t = packing::DEFAULT_CONTACT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    n: u64,
}

#[derive(Args)]
struct PlanarArgs {
    /// Graph JSON file ("-" or omitted: stdin).
    graph: Option<PathBuf>,
    /// Skip Kuratowski witness extraction.
    #[arg(long)]
    no_witness: bool,
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) => m,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| usage(format!("cannot read {}: {e}", p.display())))
        }
        _ => {
            let mut buffer = String::new();
            std::io::stdin()
                .read_to_string(&mut buffer)
                .map_err(|e| usage(format!("cannot read stdin: {e}")))?;
            Ok(buffer)
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<LoadedConfiguration, Failure> {
    let text = read_input(path)?;
    config_io::from_json(&text).map_err(usage)
}

fn one_based(pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    pairs.iter().map(|&(i, j)| (i + 1, j + 1)).collect()
}

fn report_to_json(report: &PackingReport) -> Value {
    json!({
        "diameter": report.diameter,
        "diameter_squared_exact": report.diameter_squared_exact.as_ref().map(format_rational),
        "edges": one_based(&report.edges),
        "degree_sequence": report.degree_sequence,
        "named_match": report.named_match,
        "planar": report.planar,
        "bipartite": report.bipartite.as_ref().map(|(a, b)| {
            (
                a.iter().map(|v| v + 1).collect::<Vec<_>>(),
                b.iter().map(|v| v + 1).collect::<Vec<_>>(),
            )
        }),
        "regular": report.regular,
        "node_indexing": "1-based",
    })
}

fn config_to_value(config: &LoadedConfiguration) -> Value {
    serde_json::from_str(&config_io::to_json(config)).expect("emitted config is valid JSON")
}

fn emit(report: &Value) {
    println!("{}", serde_json::to_string_pretty(report).expect("serializable report"));
}

fn analyze_loaded(
    config: &LoadedConfiguration,
    tol: f64,
) -> Result<PackingReport, Failure> {
    let result = match config {
        LoadedConfiguration::Exact(exact) => packing::analyze_exact(exact),
        LoadedConfiguration::Numeric(numeric) => packing::analyze(numeric, tol),
    };
    result.map_err(|e| match e {
        packing::PackingError::CoincidentPoints { .. } => Failure::Numerical(e.to_string()),
        other => usage(other),
    })
}

fn run_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let loaded = load_config(&args.config)?;
    let expected = graph::named_graph(&args.expect).map_err(usage)?;
    if args.exact && !loaded.is_exact() {
        return Err(usage(
            "--exact requires a configuration with rational coordinates",
        ));
    }
    let verdict = match &loaded {
        LoadedConfiguration::Exact(exact) => {
            let tol = if args.exact {
                <penny_torus::scalar::Rat as TorusScalar>::zero()
            } else {
                // Numeric-style tolerance still runs through the exact path.
                penny_torus::scalar::parse_rational(&format!(
                    "{}/1000000000000",
                    (args.tol * 1e12).round() as i64
                ))
                .unwrap_or_else(<penny_torus::scalar::Rat as TorusScalar>::zero)
            };
            packing::verify_penny(exact, &expected, &tol)
        }
        LoadedConfiguration::Numeric(numeric) => {
            packing::verify_penny(numeric, &expected, &args.tol)
        }
    }
    .map_err(|e| Failure::Numerical(e.to_string()))?;

    let analysis = analyze_loaded(&loaded, args.tol)?;
    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "label": loaded.label(),
        "n": loaded.len(),
        "expected": args.expect,
        "exact": loaded.is_exact(),
        "pass": verdict.pass,
        "diameter": analysis.diameter,
        "diameter_squared_exact": analysis.diameter_squared_exact.as_ref().map(format_rational),
        "isomorphism": verdict.isomorphism.as_ref().map(|w| {
            w.iter().map(|v| v + 1).collect::<Vec<_>>()
        }),
        "node_indexing": "1-based",
        "analysis": report_to_json(&analysis),
    });
    if let Some(failure) = &verdict.failure {
        report["failure"] = match failure {
            PennyFailure::VertexCountMismatch { expected, actual } => json!({
                "kind": "vertex-count-mismatch",
                "expected": expected,
                "actual": actual,
            }),
            PennyFailure::NotIsomorphic { near_misses } => json!({
                "kind": "not-isomorphic",
                "violations": near_misses.iter().map(|v| json!({
                    "i": v.i + 1,
                    "j": v.j + 1,
                    "distance": v.distance,
                    "diameter": v.diameter,
                })).collect::<Vec<_>>(),
            }),
        };
        eprintln!("verification failed: {failure:?}");
    }
    emit(&report);
    Ok(if verdict.pass { 0 } else { 1 })
}

fn run_analyze(args: &AnalyzeArgs) -> Result<u8, Failure> {
    let loaded = load_config(&args.config)?;
    let analysis = analyze_loaded(&loaded, args.tol)?;
    let mut report = report_to_json(&analysis);
    report["schema_version"] = json!(SCHEMA_VERSION);
    report["command"] = json!("analyze");
    report["label"] = json!(loaded.label());
    report["n"] = json!(loaded.len());
    emit(&report);
    Ok(0)
}

fn run_optimize(args: &OptimizeArgs) -> Result<u8, Failure> {
    let params = OptimizerParams {
        restarts: args.restarts,
        max_iterations: args.max_iterations,
        seed: args.seed,
        ..OptimizerParams::default()
    };
    let optimum = maximize_min_distance(args.n, &params).map_err(usage)?;
    let contacts = packing::contact_graph(&optimum.configuration, &args.tol)
        .map_err(|e| Failure::Numerical(e.to_string()))?;
    let named = contacts
        .to_small_graph()
        .ok()
        .and_then(|g| graph::identify(&g));
    let config = LoadedConfiguration::Numeric(optimum.configuration.clone());
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "optimize",
        "n": args.n,
        "restarts": args.restarts,
        "seed": args.seed,
        "diameter": optimum.diameter,
        "best_restart": optimum.best_restart,
        "contact_edges": one_based(&contacts.edge_pairs()),
        "named_match": named,
        "node_indexing": "1-based",
        "configuration": config_to_value(&config),
    });
    emit(&report);
    Ok(0)
}

fn survey_class_to_json(class: &penny_torus::optimizer::SurveyClass) -> Value {
    json!({
        "hits": class.hits,
        "diameter": class.diameter,
        "first_trial": class.first_trial,
        "representative": config_to_value(&LoadedConfiguration::Numeric(
            class.representative.clone()
        )),
    })
}

fn run_survey(args: &SurveyArgs) -> Result<u8, Failure> {
    let target = SurveyTarget::parse(&args.target)
        .ok_or_else(|| usage(format!("unknown survey target {:?}", args.target)))?;
    let params = SurveyParams {
        seed: args.seed,
        refine: RefineOptions {
            tol: args.tol,
            max_iterations: args.max_iterations,
            ..RefineOptions::default()
        },
        ..SurveyParams::default()
    };
    let result = uniqueness_survey(target, args.trials, &params);
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "survey",
        "target": target.name(),
        "trials": result.trials,
        "seed": args.seed,
        "expected_diameter": target.expected_diameter(),
        "classes": result.classes.iter().map(survey_class_to_json).collect::<Vec<_>>(),
        "relaxed_classes": result.relaxed_classes.iter().map(survey_class_to_json).collect::<Vec<_>>(),
        "failures": result.failures,
        "rejected": result.rejected,
    });
    emit(&report);
    Ok(0)
}

fn run_catalog(cmd: &CatalogCommand) -> Result<u8, Failure> {
    match cmd {
        CatalogCommand::List => {
            emit(&json!({
                "schema_version": SCHEMA_VERSION,
                "command": "catalog-list",
                "names": catalog::CONFIG_NAMES,
            }));
            Ok(0)
        }
        CatalogCommand::Emit { name } => {
            let config = catalog::config_by_name(name)
                .ok_or_else(|| usage(format!("unknown catalog entry {name:?}")))?;
            println!("{}", config_io::to_json(&config));
            Ok(0)
        }
    }
}

fn parse_drawing(selector: &str) -> Result<catalog::ToroidalDrawing<penny_torus::scalar::Rat>, Failure> {
    let lower = selector.trim().to_ascii_lowercase();
    if lower == "k7" {
        return Ok(catalog::k7_lattice_drawing());
    }
    if lower == "k5" {
        return Ok(catalog::k5_drawing());
    }
    if let Some(rest) = lower.strip_prefix("k6:") {
        let removed: usize = rest
            .parse()
            .map_err(|_| usage(format!("bad k6 vertex index {rest:?}")))?;
        return catalog::k6_drawing(removed).map_err(usage);
    }
    Err(usage(format!(
        "unknown drawing {selector:?}; use k7, k5, or k6:<vertex>"
    )))
}

fn run_render(args: &RenderArgs) -> Result<u8, Failure> {
    let opts = RenderOptions {
        tiling: args.tiling,
        canvas_size: args.canvas,
        show_edges: !args.no_edges,
        show_labels: args.labels,
        ..RenderOptions::default()
    };
    let (svg, circles, edges) = if let Some(selector) = &args.drawing {
        let drawing = parse_drawing(selector)?;
        let svg = render_drawing(&drawing, &opts).map_err(usage)?;
        let circles = (args.tiling * args.tiling) as usize * drawing.configuration.len();
        (svg, circles, drawing.edges.len())
    } else {
        let loaded = load_config(&args.input)?;
        let numeric = loaded.numeric();
        let contacts = packing::contact_graph(&numeric, &args.tol)
            .map_err(|e| Failure::Numerical(e.to_string()))?;
        let svg = render_packing(&numeric, &contacts, &opts).map_err(usage)?;
        let circles = (args.tiling * args.tiling) as usize * numeric.len();
        (svg, circles, contacts.edges().len())
    };
    fs::write(&args.out, &svg)
        .map_err(|e| usage(format!("cannot write {}: {e}", args.out.display())))?;
    emit(&json!({
        "schema_version": SCHEMA_VERSION,
        "command": "render",
        "out": args.out.display().to_string(),
        "tiling": args.tiling,
        "circles": circles,
        "edges": edges,
    }));
    Ok(0)
}

fn run_bound(args: &BoundArgs) -> Result<u8, Failure> {
    let bound = graph::harborth_bound(args.n).map_err(usage)?;
    emit(&json!({
        "schema_version": SCHEMA_VERSION,
        "command": "bound",
        "n": args.n,
        "bound": bound,
    }));
    Ok(0)
}

fn run_planar(args: &PlanarArgs) -> Result<u8, Failure> {
    let text = read_input(&args.graph)?;
    let parsed: GraphJson = serde_json::from_str(&text).map_err(usage)?;
    let g = SmallGraph::from_json(&parsed).map_err(usage)?;
    let verdict = if args.no_witness {
        penny_torus::graph::PlanarityVerdict {
            planar: graph::is_planar(&g),
            witness: None,
        }
    } else {
        graph::check_planarity(&g)
    };
    emit(&json!({
        "schema_version": SCHEMA_VERSION,
        "command": "planar",
        "n": g.n(),
        "edges": g.edge_count(),
        "planar": verdict.planar,
        "witness": verdict.witness.map(|w| serde_json::to_value(w.to_json()).unwrap()),
    }));
    Ok(0)
}

fn dispatch(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Verify(args) => run_verify(args),
        Command::Analyze(args) => run_analyze(args),
        Command::Optimize(args) => run_optimize(args),
        Command::Survey(args) => run_survey(args),
        Command::Catalog(cmd) => run_catalog(cmd),
        Command::Render(args) => run_render(args),
        Command::Bound(args) => run_bound(args),
        Command::Planar(args) => run_planar(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Keep clap's help/version on stdout with success, errors on
            // stderr with the usage exit code.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(2);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
