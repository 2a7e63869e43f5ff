//! `nval`: exact computations with n-valued linear self-maps of tori.
//!
//! Every command reads a JSON map document (see `doc`). Exit codes:
//! 0 on success, 1 when the input is well formed but the computation
//! refuses it (colliding pieces, degenerate fixed point data, tracker
//! resolution), 2 when the input itself is invalid.

mod doc;
mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use nval_core::exactlin::{IntMatrix, RatMatrix};
use nval_core::monodromy::{irreducible_partition, orbit_partition, Permutation};
use nval_core::nvmaps::CompositeMap;
use nval_core::tracker::{track_fiber_sequence, MapSampler, TrackerConfig};
use nval_core::Error as CoreError;

use doc::{rational_string, DocumentError, MapDocument};
use report::ErrorReport;

#[derive(Parser)]
#[command(
    name = "nval",
    version,
    about = "Exact computations with n-valued linear torus maps"
)]
struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a document describes a valid n-valued map
    Validate { document: PathBuf },
    /// Split a map into its irreducible pieces
    Partition { document: PathBuf },
    /// Nielsen numbers of the irreducible pieces and their sum
    Nielsen { document: PathBuf },
    /// Enumerate all fixed points with lift and index
    Fixpoints { document: PathBuf },
    /// Single-valued representation on finite covers
    Crabb { document: PathBuf },
    /// Recover the branch permutations by numeric fiber tracking
    Track {
        /// Map document to sample (omit when using --fiber-file)
        document: Option<PathBuf>,

        /// Fibers per coordinate loop
        #[arg(long, default_value_t = 256)]
        samples: usize,

        /// Pre-recorded fiber sequence to track instead of sampling a map
        #[arg(long)]
        fiber_file: Option<PathBuf>,

        /// Matching margin as a fraction of the fiber separation
        #[arg(long, default_value_t = 0.5)]
        margin: f64,
    },
}

/// A failed run: what to print and which exit code to use.
enum Failure {
    /// Exit 2: the input is not a well-formed valid map description.
    Invalid(&'static str, String),
    /// Exit 1: the input is fine but the computation refuses it.
    Refused(&'static str, String),
}

impl Failure {
    fn report(self, json: bool) -> ExitCode {
        let (kind, message, code) = match self {
            Failure::Invalid(kind, message) => (kind, message, 2),
            Failure::Refused(kind, message) => (kind, message, 1),
        };
        if json {
            let report = ErrorReport {
                status: "error",
                kind,
                message,
            };
            print_stdout(&to_json(&report));
        } else {
            let _ = writeln!(io::stderr(), "error: {message}");
        }
        ExitCode::from(code)
    }
}

/// Write the payload to stdout. A closed pipe downstream (`nval ... |
/// head`) is a normal way for a run to end, not a crash; any other
/// write failure is fatal because the report never reached the caller.
fn print_stdout(payload: &str) {
    let mut stdout = io::stdout().lock();
    let result = writeln!(stdout, "{payload}").and_then(|()| stdout.flush());
    if let Err(error) = result {
        if error.kind() != io::ErrorKind::BrokenPipe {
            let _ = writeln!(io::stderr(), "error: cannot write output: {error}");
            std::process::exit(2);
        }
    }
}

fn classify(error: CoreError) -> Failure {
    use CoreError::*;
    let kind = match &error {
        NonSquare { .. } => "non-square",
        DimensionMismatch { .. } => "dimension-mismatch",
        DegenerateMatrix => "degenerate-matrix",
        RowCongruenceViolation { .. } => "row-congruence",
        ZeroMultiplicity => "zero-multiplicity",
        EmptyComposite => "empty-composite",
        CollisionBetweenPieces { .. } => "collision",
        DegeneratePiece { .. } => "degenerate-piece",
        InvalidPermutation => "invalid-permutation",
        ResolutionTooCoarse { .. } => "resolution-too-coarse",
        FiberCardinality { .. } => "fiber-cardinality",
    };
    let message = error.to_string();
    match error {
        CollisionBetweenPieces { .. }
        | DegeneratePiece { .. }
        | DegenerateMatrix
        | ResolutionTooCoarse { .. }
        | FiberCardinality { .. } => Failure::Refused(kind, message),
        _ => Failure::Invalid(kind, message),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn load_document(path: &Path) -> Result<MapDocument, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Invalid("io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Invalid("json", format!("{}: {e}", path.display())))
}

fn load_map(path: &Path) -> Result<CompositeMap, Failure> {
    load_document(path)?.to_composite().map_err(|error| match error {
        DocumentError::Shape(message) => Failure::Invalid("shape", message),
        DocumentError::Map(error) => classify(error),
    })
}

fn int_matrix_text(matrix: &IntMatrix) -> String {
    let rows: Vec<String> = (0..matrix.rows())
        .map(|i| {
            let entries: Vec<String> =
                matrix.row(i).iter().map(|x| x.to_string()).collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn rat_matrix_text(matrix: &RatMatrix) -> String {
    let rows: Vec<String> = (0..matrix.rows())
        .map(|i| {
            let entries: Vec<String> = (0..matrix.cols())
                .map(|j| rational_string(&matrix[(i, j)]))
                .collect();
            format!("[{}]", entries.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn run_validate(path: &Path, json: bool) -> Result<String, Failure> {
    let map = load_map(path)?;
    if json {
        return Ok(to_json(&report::validate_report(&map)));
    }
    let mut out = format!(
        "valid: q = {}, n = {}, pieces = {}",
        map.q(),
        map.n(),
        map.pieces().len()
    );
    for (i, piece) in map.pieces().iter().enumerate() {
        out.push_str(&format!(
            "\npiece {}: m = {}, residues = {:?}, shift = {}",
            i + 1,
            piece.multiplicity(),
            piece.residues(),
            piece.shift()
        ));
    }
    Ok(out)
}

fn run_partition(path: &Path, json: bool) -> Result<String, Failure> {
    let map = load_map(path)?;
    let partition = irreducible_partition(&map);
    if json {
        return Ok(to_json(&MapDocument::from_composite(&partition)));
    }
    let mut out = format!("pieces: {}", partition.pieces().len());
    for (i, piece) in partition.pieces().iter().enumerate() {
        out.push_str(&format!(
            "\npiece {}: m = {}, A = {}, shift = {}",
            i + 1,
            piece.multiplicity(),
            int_matrix_text(piece.matrix()),
            piece.shift()
        ));
    }
    Ok(out)
}

fn run_nielsen(path: &Path, json: bool) -> Result<String, Failure> {
    let map = load_map(path)?;
    let report = nval_core::nielsen::nielsen_composite(&map);
    if json {
        return Ok(to_json(&report::nielsen_json(&report)));
    }
    let per_piece: Vec<String> =
        report.per_piece().iter().map(|n| n.to_string()).collect();
    Ok(format!(
        "pieces: {}\ntotal N = {}\nlefschetz = {}",
        per_piece.join(", "),
        report.total(),
        report.lefschetz()
    ))
}

fn run_fixpoints(path: &Path, json: bool) -> Result<String, Failure> {
    let map = load_map(path)?;
    let records = nval_core::nielsen::fixed_points(&map).map_err(classify)?;
    if json {
        return Ok(to_json(&report::fixed_points_report(&records)));
    }
    let mut out = format!("count: {}", records.len());
    for record in &records {
        out.push_str(&format!(
            "\n{}  piece {}  lift {}  index {:+}",
            record.point, record.piece, record.lift, record.index
        ));
    }
    Ok(out)
}

fn run_crabb(path: &Path, json: bool) -> Result<String, Failure> {
    let map = load_map(path)?;
    let rep = nval_core::crabb::to_finite_valued(&map);
    if json {
        return Ok(to_json(&report::crabb_report(&rep)));
    }
    let mut out = format!("components: {}", rep.components().len());
    for (i, component) in rep.components().iter().enumerate() {
        out.push_str(&format!(
            "\ncomponent {}: sheets = {}, lattice = {}, map = {}, shift = {}",
            i + 1,
            component.sheets(),
            int_matrix_text(component.sublattice()),
            rat_matrix_text(component.linearization()),
            component.translation()
        ));
    }
    out.push_str(&format!("\nnielsen = {}", nval_core::crabb::nielsen_crabb(&rep)));
    Ok(out)
}

/// Fiber file: header "q n M", then M+1 lines of 1 + n*q floats each
/// (the loop parameter first, then the n fiber points coordinatewise).
fn parse_fiber_file(path: &Path) -> Result<Vec<Vec<Vec<f64>>>, Failure> {
    let bad = |message: String| Failure::Invalid("fiber-file", message);
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Invalid("io", format!("{}: {e}", path.display())))?;
    let mut lines = text.lines().filter(|line| !line.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| bad("fiber file is empty".into()))?;
    let fields: Vec<usize> = header
        .split_whitespace()
        .map(|field| field.parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad(format!("bad header \"{header}\", expected \"q n M\"")))?;
    let &[q, n, steps] = fields.as_slice() else {
        return Err(bad(format!("bad header \"{header}\", expected \"q n M\"")));
    };
    if q == 0 || n == 0 || steps == 0 {
        return Err(bad("header values must be positive".into()));
    }
    let mut fibers = Vec::with_capacity(steps + 1);
    for row in 0..=steps {
        let line = lines
            .next()
            .ok_or_else(|| bad(format!("expected {} fiber lines", steps + 1)))?;
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|field| field.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad(format!("bad number on fiber line {}", row + 1)))?;
        if values.len() != 1 + n * q {
            return Err(bad(format!(
                "fiber line {} has {} values, expected {}",
                row + 1,
                values.len(),
                1 + n * q
            )));
        }
        let fiber: Vec<Vec<f64>> =
            values[1..].chunks(q).map(|point| point.to_vec()).collect();
        fibers.push(fiber);
    }
    if lines.next().is_some() {
        return Err(bad(format!("expected exactly {} fiber lines", steps + 1)));
    }
    Ok(fibers)
}

fn track_text(generators: &[Permutation], components: usize) -> String {
    let mut out = String::new();
    for (axis, generator) in generators.iter().enumerate() {
        out.push_str(&format!("axis {}: {}\n", axis + 1, generator));
    }
    out.push_str(&format!("components: {components}"));
    out
}

fn track_json(generators: &[Permutation], components: usize) -> String {
    let report = report::TrackReport {
        generators: generators
            .iter()
            .map(|g| g.images().iter().map(|i| i + 1).collect())
            .collect(),
        cycles: generators.iter().map(|g| g.to_string()).collect(),
        components,
    };
    to_json(&report)
}

fn run_track(
    document: Option<&PathBuf>,
    fiber_file: Option<&PathBuf>,
    samples: usize,
    margin: f64,
    json: bool,
) -> Result<String, Failure> {
    if samples < 2 {
        return Err(Failure::Invalid(
            "usage",
            "--samples must be at least 2".into(),
        ));
    }
    if !(margin > 0.0 && margin < 1.0) {
        return Err(Failure::Invalid(
            "usage",
            "--margin must lie strictly between 0 and 1".into(),
        ));
    }
    let config = TrackerConfig {
        samples_per_loop: samples,
        margin_factor: margin,
    };
    match (document, fiber_file) {
        (Some(path), None) => {
            let map = load_map(path)?;
            let sampler = MapSampler::new(&map);
            let monodromy = nval_core::tracker::empirical_partition(&sampler, &config)
                .map_err(classify)?;
            let components = monodromy.orbit_partition().len();
            Ok(if json {
                track_json(monodromy.generators(), components)
            } else {
                track_text(monodromy.generators(), components)
            })
        }
        (None, Some(path)) => {
            let fibers = parse_fiber_file(path)?;
            let permutation = track_fiber_sequence(&fibers, &config).map_err(classify)?;
            let components = orbit_partition(permutation.degree(), &[permutation.clone()]).len();
            let generators = [permutation];
            Ok(if json {
                track_json(&generators, components)
            } else {
                track_text(&generators, components)
            })
        }
        _ => Err(Failure::Invalid(
            "usage",
            "provide a map document or --fiber-file, not both".into(),
        )),
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Validate { document } => run_validate(document, cli.json),
        Command::Partition { document } => run_partition(document, cli.json),
        Command::Nielsen { document } => run_nielsen(document, cli.json),
        Command::Fixpoints { document } => run_fixpoints(document, cli.json),
        Command::Crabb { document } => run_crabb(document, cli.json),
        Command::Track {
            document,
            samples,
            fiber_file,
            margin,
        } => run_track(
            document.as_ref(),
            fiber_file.as_ref(),
            *samples,
            *margin,
            cli.json,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            print_stdout(&output);
            ExitCode::SUCCESS
        }
        Err(failure) => failure.report(cli.json),
    }
}
