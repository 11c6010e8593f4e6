//! Command-line front end for the HW observable toolkit.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage error (from clap),
//! 3 internal inconsistency (golden mismatch, probability bookkeeping).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hwobs::acbound;
use hwobs::bloch;
use hwobs::commutation::{self, RelationKind};
use hwobs::hw_basis;
use hwobs::io;
use hwobs::ramsey;
use hwobs::{demos, golden, DensityMatrix, PhasePoint};

#[derive(Parser)]
#[command(
    name = "hwobs",
    version,
    about = "Heisenberg-Weyl observable toolkit for d-dimensional qudits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Doc,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print HW observable matrices, optionally checking the embedded golden
    /// references for d=3 and d=4.
    Basis {
        #[arg(long)]
        dim: usize,
        /// Restrict the output to one phase point, given as L,M.
        #[arg(long)]
        point: Option<String>,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
        /// Compare the constructed basis against the embedded reference
        /// matrices (d=3 and d=4 only) and fail on any mismatch.
        #[arg(long)]
        golden: bool,
    },
    /// Decompose a state into its Bloch vector.
    Decompose {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Reconstruct the matrix encoded by a Bloch vector file.
    Reconstruct {
        #[arg(long)]
        bloch: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Eigenvalue table per phase point, with the closed-form magnitude
    /// column and q_max.
    Spectrum {
        #[arg(long)]
        dim: usize,
    },
    /// Pairwise (anti-)commutation classification, all anticommuting
    /// triples, and optionally the maximum anticommuting set size.
    Anticommute {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        max_set: bool,
    },
    /// Evaluate a witness file against a state file.
    Witness {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Self-contained reproductions of the reference examples.
    Demo {
        #[arg(value_parser = ["ghz34", "ghz34-gme", "maxent9", "pauli"])]
        name: String,
    },
    /// Simulate the ancilla-qubit Ramsey measurement.
    Ramsey {
        #[command(subcommand)]
        command: RamseyCommand,
    },
}

#[derive(Args)]
struct RamseyCommon {
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    shots: u64,
    /// RNG seed; defaults to HWOBS_SEED or 0.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum RamseyCommand {
    /// Sample one phase point and print the record and estimate.
    Point {
        #[command(flatten)]
        common: RamseyCommon,
        /// Phase point as L,M.
        #[arg(long)]
        point: String,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Estimate the full Bloch vector from per-point sampling.
    Tomo {
        #[command(flatten)]
        common: RamseyCommon,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> ExitCode {
        match self {
            CliError::Validation(_) => ExitCode::from(1),
            CliError::Internal(_) => ExitCode::from(3),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "error: {m}"),
            CliError::Internal(m) => write!(f, "internal inconsistency: {m}"),
        }
    }
}

fn validation<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Validation(e.to_string())
}

fn default_seed() -> u64 {
    std::env::var("HWOBS_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0)
}

/// A state file is either a state spec (.hwstate) or a raw single-party
/// matrix document (.hwmat); both are accepted and detected by content.
fn load_state(path: &Path) -> Result<DensityMatrix, CliError> {
    let raw = io::read_file(path).map_err(validation)?;
    if let Ok(spec) = io::read_state_str(&raw) {
        return spec.build().map_err(validation);
    }
    match io::read_matrix_str(&raw) {
        Ok(m) => DensityMatrix::single(m).map_err(validation),
        Err(e) => Err(CliError::Validation(format!(
            "{}: not a state spec or matrix document ({e})",
            path.display()
        ))),
    }
}

fn print_matrix_human(m: &hwobs::ComplexMatrix) {
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|c| {
                let z = m[(r, c)];
                format!("{:+.6}{:+.6}i", z.re, z.im)
            })
            .collect();
        println!("  [ {} ]", row.join("  "));
    }
}

fn run_basis(
    dim: usize,
    point: Option<String>,
    format: Format,
    golden_check: bool,
) -> Result<(), CliError> {
    if dim < 2 {
        return Err(CliError::Validation("dimension must be at least 2".into()));
    }
    if golden_check {
        if dim != 3 && dim != 4 {
            return Err(CliError::Validation(
                "golden references exist only for d=3 and d=4".into(),
            ));
        }
        let mut worst = 0.0f64;
        for (p, dev) in golden::compare_dimension(dim) {
            println!("Q{p}  deviation {dev:.3e}");
            worst = worst.max(dev);
        }
        if worst >= 1e-12 {
            return Err(CliError::Internal(format!(
                "constructed basis deviates from the reference by {worst:.3e}"
            )));
        }
        println!("golden check passed for d={dim} (max deviation {worst:.3e})");
        return Ok(());
    }
    let points: Vec<PhasePoint> = match &point {
        Some(s) => vec![io::parse_point(dim, s).map_err(validation)?],
        None => hw_basis::full_basis_points(dim).map_err(validation)?,
    };
    match format {
        Format::Doc => {
            if points.len() != 1 {
                return Err(CliError::Validation(
                    "doc format needs --point to select a single matrix".into(),
                ));
            }
            let q = hw_basis::hw_observable(&points[0]);
            let mut meta = std::collections::BTreeMap::new();
            meta.insert("kind".into(), "hw_observable".into());
            meta.insert("point".into(), format!("{}", points[0]));
            print!(
                "{}",
                io::write_matrix_str_with(&q.matrix, meta).map_err(validation)?
            );
        }
        Format::Human => {
            for p in &points {
                let q = hw_basis::hw_observable(p);
                println!("Q{p}:");
                print_matrix_human(&q.matrix);
            }
        }
        Format::Csv => {
            return Err(CliError::Validation(
                "csv format is not available for matrices".into(),
            ))
        }
    }
    Ok(())
}

fn run_decompose(state: &Path, format: Format) -> Result<(), CliError> {
    let rho = load_state(state)?;
    let v = bloch::decompose(&rho).map_err(validation)?;
    match format {
        Format::Doc => print!("{}", io::write_bloch_str(&v).map_err(validation)?),
        Format::Csv => print!("{}", io::bloch_to_csv(&v)),
        Format::Human => {
            println!("Bloch vector, d = {}", v.dim());
            println!("{:>3} {:>3} {:>14}", "l", "m", "component");
            for p in hw_basis::non_identity_points(v.dim()).map_err(validation)? {
                println!("{:>3} {:>3} {:>14.10}", p.l(), p.m(), v.component(&p));
            }
            println!("norm^2 = {:.10}", v.norm_sq());
        }
    }
    Ok(())
}

fn run_reconstruct(path: &Path, format: Format) -> Result<(), CliError> {
    let raw = io::read_file(path).map_err(validation)?;
    let v = io::read_bloch_str(&raw).map_err(validation)?;
    let rec = bloch::reconstruct(&v).map_err(validation)?;
    match format {
        Format::Doc => {
            let mut meta = std::collections::BTreeMap::new();
            meta.insert("kind".into(), "reconstruction".into());
            meta.insert("min_eigenvalue".into(), format!("{}", rec.min_eigenvalue));
            meta.insert("physical".into(), format!("{}", rec.is_physical()));
            print!(
                "{}",
                io::write_matrix_str_with(&rec.matrix, meta).map_err(validation)?
            );
        }
        Format::Human => {
            println!("reconstructed matrix (d = {}):", v.dim());
            print_matrix_human(&rec.matrix);
            println!("min eigenvalue = {:+.10}", rec.min_eigenvalue);
            println!("physical state = {}", rec.is_physical());
        }
        Format::Csv => {
            return Err(CliError::Validation(
                "csv format is not available for matrices".into(),
            ))
        }
    }
    Ok(())
}

fn run_spectrum(dim: usize) -> Result<(), CliError> {
    if dim < 2 {
        return Err(CliError::Validation("dimension must be at least 2".into()));
    }
    let formula: Vec<f64> = hw_basis::spectrum_magnitude_set(dim);
    println!(
        "closed-form magnitudes: {}",
        formula
            .iter()
            .map(|v| format!("{v:.10}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    println!("{:>6} eigenvalues", "point");
    for p in hw_basis::non_identity_points(dim).map_err(validation)? {
        let eigs = hw_basis::spectrum(&hw_basis::hw_observable(&p));
        let line: Vec<String> = eigs.iter().map(|v| format!("{v:+.10}")).collect();
        println!("{:>6} {}", p.to_string(), line.join("  "));
    }
    println!("q_max({dim}) = {:.10}", hw_basis::q_max(dim));
    Ok(())
}

fn run_anticommute(dim: usize, max_set: bool) -> Result<(), CliError> {
    if dim < 2 {
        return Err(CliError::Validation("dimension must be at least 2".into()));
    }
    let points = hw_basis::non_identity_points(dim).map_err(validation)?;
    println!("{:>7} {:>7} {:>14} {:>14}", "p", "p'", "relation", "residual");
    for (i, a) in points.iter().enumerate() {
        for b in points.iter().skip(i + 1) {
            let rel = commutation::classify_pair(a, b).map_err(validation)?;
            let kind = match rel.kind {
                RelationKind::Commuting => "commuting",
                RelationKind::Anticommuting => "anticommuting",
                RelationKind::Neither => "neither",
            };
            println!(
                "{:>7} {:>7} {:>14} {:>14.3e}",
                format!("{a}"),
                format!("{b}"),
                kind,
                rel.residual
            );
        }
    }
    let triples = commutation::find_anticommuting_triples(dim).map_err(validation)?;
    println!("anticommuting triples: {}", triples.len());
    for t in &triples {
        println!("  {} {} {}", t[0], t[1], t[2]);
    }
    if max_set {
        let size = commutation::max_anticommuting_set_size(dim).map_err(validation)?;
        println!("maximum anticommuting set size: {size}");
    }
    Ok(())
}

fn print_report_human(report: &acbound::WitnessReport) {
    println!("term correlations:");
    for (i, v) in report.term_values.iter().enumerate() {
        println!("  term {i}: {v:+.10}");
    }
    println!("value            = {:.10}", report.value);
    println!("bound            = {:.10}", report.bound);
    println!("violated         = {}", report.violated);
    println!("noise threshold  = {:.10}", report.noise_threshold);
    println!("noise resistance = {:.10}", report.noise_resistance);
}

fn run_witness(state: &Path, spec: &Path, format: Format) -> Result<(), CliError> {
    let rho = load_state(state)?;
    let raw = io::read_file(spec).map_err(validation)?;
    let w = io::read_witness_str(&raw).map_err(validation)?;
    let report = acbound::evaluate_witness(&rho, &w).map_err(validation)?;
    match format {
        Format::Doc => {
            let json = serde_json::to_string_pretty(&report).map_err(validation)?;
            println!("{json}");
        }
        Format::Csv => print!("{}", io::witness_report_to_csv(&report)),
        Format::Human => print_report_human(&report),
    }
    Ok(())
}

fn run_demo(name: &str) -> Result<(), CliError> {
    let demo = match name {
        "ghz34" => demos::ghz34(),
        "ghz34-gme" => demos::ghz34_gme(),
        "maxent9" => demos::maxent9(),
        "pauli" => demos::pauli(),
        other => return Err(CliError::Validation(format!("unknown demo '{other}'"))),
    };
    let report = demo.run();
    println!("demo {}: {}", demo.name, demo.state_label);
    print_report_human(&report);
    println!(
        "reference value  = {:.10} (computed {:.10})",
        demo.reference_value, report.value
    );
    println!(
        "reference bound  = {:.10} (stored bound {:.10})",
        demo.reference_bound, report.bound
    );
    println!(
        "reference threshold = {:.10} (computed {:.10})",
        demo.reference_threshold, report.noise_threshold
    );
    if demo.name == "maxent9" {
        let (ordered, unordered) = demos::maxent9_computed_bounds();
        println!("separable bound from anticommutator budget:");
        println!("  ordered pair sum   = {ordered:.10}");
        println!("  unordered pair sum = {unordered:.10}");
        println!(
            "note: both computed bounds exceed the stored reference figure; \
             the witness value {:.4} violates all of them",
            report.value
        );
    }
    if (report.value - demo.reference_value).abs() > 1e-9 {
        return Err(CliError::Internal(format!(
            "computed value {:.10} differs from the reference {:.10}",
            report.value, demo.reference_value
        )));
    }
    Ok(())
}

fn run_ramsey(cmd: &RamseyCommand) -> Result<(), CliError> {
    match cmd {
        RamseyCommand::Point {
            common,
            point,
            format,
        } => {
            let rho = load_state(&common.state)?;
            let p = io::parse_point(rho.dim(), point).map_err(validation)?;
            let seed = common.seed.unwrap_or_else(default_seed);
            let record = ramsey::sample(&rho, &p, common.shots, seed).map_err(|e| match e {
                ramsey::RamseyError::BadProbabilities { .. } => {
                    CliError::Internal(e.to_string())
                }
                other => validation(other),
            })?;
            let estimate = ramsey::estimate(&record);
            let (p_up, p_down) = ramsey::exact_probabilities(&rho, &p).map_err(validation)?;
            match format {
                Format::Doc => {
                    print!("{}", io::write_record_str(&record).map_err(validation)?)
                }
                _ => {
                    println!("point {p}, {} shots, seed {seed}", record.shots);
                    println!("counts: up {} / down {}", record.count_up, record.count_down);
                    println!("estimate <Q>   = {estimate:+.10}");
                    println!(
                        "exact <Q>      = {:+.10}",
                        std::f64::consts::SQRT_2 * (p_up - p_down)
                    );
                    println!("exact (p_up, p_down) = ({p_up:.10}, {p_down:.10})");
                }
            }
        }
        RamseyCommand::Tomo { common, format } => {
            let rho = load_state(&common.state)?;
            let seed = common.seed.unwrap_or_else(default_seed);
            let v = ramsey::estimate_bloch(&rho, Some(common.shots), seed).map_err(validation)?;
            match format {
                Format::Doc => print!("{}", io::write_bloch_str(&v).map_err(validation)?),
                Format::Csv => print!("{}", io::bloch_to_csv(&v)),
                Format::Human => {
                    let exact = bloch::decompose(&rho).map_err(validation)?;
                    println!(
                        "estimated Bloch vector, d = {}, {} shots/point, seed {seed}",
                        v.dim(),
                        common.shots
                    );
                    println!("{:>3} {:>3} {:>14} {:>14}", "l", "m", "estimate", "exact");
                    for p in hw_basis::non_identity_points(v.dim()).map_err(validation)? {
                        println!(
                            "{:>3} {:>3} {:>14.10} {:>14.10}",
                            p.l(),
                            p.m(),
                            v.component(&p),
                            exact.component(&p)
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Basis {
            dim,
            point,
            format,
            golden,
        } => run_basis(dim, point, format, golden),
        Command::Decompose { state, format } => run_decompose(&state, format),
        Command::Reconstruct { bloch, format } => run_reconstruct(&bloch, format),
        Command::Spectrum { dim } => run_spectrum(dim),
        Command::Anticommute { dim, max_set } => run_anticommute(dim, max_set),
        Command::Witness {
            state,
            spec,
            format,
        } => run_witness(&state, &spec, format),
        Command::Demo { name } => run_demo(&name),
        Command::Ramsey { command } => run_ramsey(&command),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            e.code()
        }
    }
}
