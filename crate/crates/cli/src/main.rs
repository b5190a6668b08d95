use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use tropcert::certify::{certify_batch, FanSummary};
use tropcert::curve::{
    check_balancing, check_smoothness, first_betti, skeleton, three_coloring_order,
    validate_embedding, MetricGraph, TropicalCurve,
};
use tropcert::fan::{build_fan, recession_fan, verify_fan_axioms};
use tropcert::json::SCHEMA_VERSION;
use tropcert::lattice::{Rat, RatVector};
use tropcert::special_fiber::{construct_witness, verify_witness};
use tropcert::{certify::ambient_dimension_for_graph, certify_realizability};

#[derive(Parser)]
#[command(name = "tropcert", version, about = "Certify realizability conditions for tropical curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Embedding, balancing and smoothness reports.
    Validate(Input),
    /// Run the full pipeline and write a certificate.
    Certify {
        /// Input curve JSON.
        #[arg(required_unless_present = "batch")]
        input: Option<PathBuf>,
        /// Certify every `*.json` file in this directory instead.
        #[arg(long, conflicts_with = "input")]
        batch: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// The fan over the curve and its recession fan.
    Fan(Input),
    /// Construct and verify a special-fiber witness.
    Witness(Input),
    /// The skeleton as a metric graph.
    Skeleton(Input),
    /// Ambient dimension for a metric graph (or a curve's skeleton).
    AmbientDim(Input),
    /// Line segments for plotting, with the exact curve alongside.
    ExportPlot(Input),
}

#[derive(Args)]
struct Input {
    /// Input JSON file.
    input: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    #[arg(long, env = "TROPCERT_SEED", default_value_t = 0)]
    seed: u64,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: unsupported schema version {found}")]
    Schema { path: String, found: u64 },
    #[error("{0}")]
    Unsupported(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Core(#[from] tropcert::Error),
}

/// Result of a subcommand: the document and whether its checks passed.
struct Report {
    doc: Value,
    passed: bool,
}

#[derive(Deserialize)]
struct Header {
    schema: Option<u64>,
    rank: Option<usize>,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    let located = |e: serde_json::Error| CliError::Parse {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    };
    let header: Header = serde_json::from_str(text).map_err(located)?;
    if let Some(found) = header.schema.filter(|&s| s != u64::from(SCHEMA_VERSION)) {
        return Err(CliError::Schema {
            path: path.display().to_string(),
            found,
        });
    }
    serde_json::from_str(text).map_err(located)
}

fn load_curve(path: &Path) -> Result<TropicalCurve, CliError> {
    parse(path, &read(path)?)
}

fn versioned(kind: &str, body: impl Serialize) -> Value {
    let mut doc = serde_json::to_value(body).expect("reports serialize");
    if !doc.is_object() {
        doc = json!({ "value": doc });
    }
    let map = doc.as_object_mut().expect("object");
    map.insert("schema".into(), json!(SCHEMA_VERSION));
    map.insert("kind".into(), json!(kind));
    doc
}

fn validate(c: &TropicalCurve) -> Report {
    let embedding = validate_embedding(c);
    let (balancing, smoothness) = if embedding.passed {
        (Some(check_balancing(c)), Some(check_smoothness(c)))
    } else {
        (None, None)
    };
    let passed = embedding.passed
        && balancing.as_ref().is_some_and(|b| b.passed)
        && smoothness.as_ref().is_some_and(|s| s.report.passed);
    let doc = versioned(
        "validation",
        json!({
            "passed": passed,
            "embedding": embedding,
            "balancing": balancing,
            "smoothness": smoothness,
        }),
    );
    Report { doc, passed }
}

fn certify(c: &TropicalCurve, seed: u64) -> Report {
    let cert = certify_realizability(c, seed);
    Report {
        passed: cert.is_realizable(),
        doc: serde_json::to_value(&cert).expect("certificates serialize"),
    }
}

fn certify_dir(dir: &Path, seed: u64) -> Result<Report, CliError> {
    let entries = fs::read_dir(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let curves = files.iter().map(|p| load_curve(p)).collect::<Result<Vec<_>, _>>()?;
    let certs = certify_batch(&curves, seed);
    let passed = certs.iter().all(|c| c.is_realizable());
    let listing: Vec<Value> = files
        .iter()
        .zip(&certs)
        .map(|(p, c)| {
            let name = p.file_name().map(|n| n.to_string_lossy().into_owned());
            json!({ "file": name, "certificate": c })
        })
        .collect();
    let doc = versioned("batch", json!({ "master_seed": seed, "certificates": listing }));
    Ok(Report { doc, passed })
}

fn fan(c: &TropicalCurve) -> Result<Report, CliError> {
    let total = build_fan(c)?;
    let recession = recession_fan(c)?;
    let total_check = verify_fan_axioms(&total)?;
    let recession_check = verify_fan_axioms(&recession)?;
    let passed = total_check.ok && recession_check.ok;
    let doc = versioned(
        "fan",
        json!({
            "passed": passed,
            "summary": FanSummary::of(&total, total_check),
            "recession_summary": FanSummary::of(&recession, recession_check),
            "fan": total,
            "recession_fan": recession,
        }),
    );
    Ok(Report { doc, passed })
}

fn witness(c: &TropicalCurve, seed: u64) -> Result<Report, CliError> {
    if !check_smoothness(c).report.passed {
        return Err(CliError::Unsupported("witnesses need a smooth curve".into()));
    }
    let order = three_coloring_order(c)?;
    let w = construct_witness(c, &order, seed)?;
    let report = verify_witness(c, &w);
    let passed = report.ok;
    let doc = versioned("witness", json!({ "witness": w, "verification": report }));
    Ok(Report { doc, passed })
}

fn skeleton_doc(c: &TropicalCurve) -> Result<Report, CliError> {
    let g = skeleton(c)?;
    let b1 = first_betti(&g)?;
    let doc = versioned("skeleton", json!({ "graph": g, "first_betti": b1 }));
    Ok(Report { doc, passed: true })
}

fn ambient_dim(path: &Path) -> Result<Report, CliError> {
    let text = read(path)?;
    let header: Header = parse(path, &text)?;
    let graph: MetricGraph = match header.rank {
        Some(_) => skeleton(&parse::<TropicalCurve>(path, &text)?)?,
        None => parse(path, &text)?,
    };
    let n = ambient_dimension_for_graph(&graph)?;
    let doc = versioned("ambient_dimension", json!({ "ambient_dimension": n }));
    Ok(Report { doc, passed: true })
}

fn decimals(v: &RatVector) -> Vec<f64> {
    v.coords().iter().map(|x: &Rat| x.to_f64().unwrap_or(f64::NAN)).collect()
}

fn export_plot(c: &TropicalCurve) -> Result<Report, CliError> {
    if c.rank > 3 {
        return Err(CliError::Unsupported(format!(
            "export-plot handles curves in dimension at most 3, got {}",
            c.rank
        )));
    }
    let report = validate_embedding(c);
    if !report.passed {
        return Err(CliError::Unsupported(format!("curve is not embedded: {:?}", report.issues)));
    }
    let segments: Vec<Value> = c
        .edges
        .iter()
        .map(|e| {
            json!({
                "from": decimals(&c.vertices[e.u]),
                "to": decimals(&c.vertices[e.v]),
                "weight": e.weight,
            })
        })
        .collect();
    let rays: Vec<Value> = c
        .rays
        .iter()
        .map(|r| {
            json!({
                "base": decimals(&c.vertices[r.base]),
                "direction": decimals(&r.direction.to_rat()),
                "weight": r.weight,
            })
        })
        .collect();
    let mut exact = serde_json::to_value(c).expect("curves serialize");
    exact["schema"] = json!(SCHEMA_VERSION);
    let doc = versioned(
        "plot",
        json!({ "rank": c.rank, "segments": segments, "rays": rays, "exact": exact }),
    );
    Ok(Report { doc, passed: true })
}

fn run(cli: Cli) -> Result<(Report, Option<PathBuf>), CliError> {
    let (report, common) = match &cli.command {
        Command::Certify { batch: Some(dir), common, .. } => (certify_dir(dir, common.seed)?, common),
        Command::Certify { input, common, .. } => {
            let path = input.as_deref().expect("clap requires an input without --batch");
            (certify(&load_curve(path)?, common.seed), common)
        }
        Command::AmbientDim(i) => (ambient_dim(&i.input)?, &i.common),
        Command::Validate(i) => (validate(&load_curve(&i.input)?), &i.common),
        Command::Fan(i) => (fan(&load_curve(&i.input)?)?, &i.common),
        Command::Witness(i) => (witness(&load_curve(&i.input)?, i.common.seed)?, &i.common),
        Command::Skeleton(i) => (skeleton_doc(&load_curve(&i.input)?)?, &i.common),
        Command::ExportPlot(i) => (export_plot(&load_curve(&i.input)?)?, &i.common),
    };
    match common.format {
        Format::Json => Ok((report, common.out.clone())),
    }
}

fn emit(doc: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc).expect("values serialize");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli).and_then(|(report, out)| {
        emit(&report.doc, out.as_deref())?;
        Ok(report.passed)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
