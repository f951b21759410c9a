//! `framelab` command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use framelab::decomposition::{decompose_with, DecomposeOptions};
use framelab::frame::DEFAULT_RANK_TOL;
use framelab::gallery::{Family, GallerySpec};
use framelab::io::{read_frame, symbol_from_json, FrameFile};
use framelab::multiplier::{box_multiplier_sup_relative, multiplier_report, MultiplierSpec};
use framelab::unconditional::{c_heuristic, exact_report, DEFAULT_EXACT_LIMIT};
use framelab::verify::verify_with_report;
use framelab::{Complex, ExactOptions, Field, FrameError, FrameMatrix, UnconditionalReport};
use serde::Serialize;
use serde_json::Value;

mod render;

/// Hard ceiling on exhaustive enumeration, forced or not.
const EXACT_HARD_CAP: usize = 24;

#[derive(Parser, Debug)]
#[command(name = "framelab", version, about = "Finite frame analysis: bounds, unconditional constants, tight decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: GlobalOpts,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    /// Relative tolerance (rank cutoff for analyze/constants/verify, eigen-residual for decompose)
    #[arg(long, global = true, allow_negative_numbers = true)]
    tol: Option<f64>,

    /// Relative gap separating eigenvalue clusters in decompose
    #[arg(long, global = true, allow_negative_numbers = true)]
    cluster_tol: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Auto)]
    mode: ModeArg,

    /// Largest N enumerated exhaustively (at most 24)
    #[arg(long, global = true, default_value_t = DEFAULT_EXACT_LIMIT)]
    exact_limit: usize,

    /// Run exact mode even when N exceeds --exact-limit (still capped at 24)
    #[arg(long, global = true)]
    force: bool,

    /// Relative-norm evaluations per heuristic search
    #[arg(long, global = true, default_value_t = 256)]
    budget: usize,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ModeArg {
    /// Exact when N <= --exact-limit, heuristic otherwise
    Auto,
    Exact,
    Heuristic,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FieldArg {
    Real,
    Complex,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FamilyArg {
    Simplex,
    SimplexSub,
    Shift,
    Random,
    Parseval,
    Orthonormal,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Frame bounds, classification and spectrum of S
    Analyze { file: PathBuf },
    /// Unconditional constants C_sigma, C_epsilon, C_a with witnesses
    Constants { file: PathBuf },
    /// Split the family into orthogonal tight frames, or name the obstruction
    Decompose { file: PathBuf },
    /// Matrix and norm of the multiplier sum_i m_i <x, psi_i> phi_i
    Multiplier {
        /// Synthesis frame phi
        file: PathBuf,
        /// Analysis frame psi (defaults to phi)
        #[arg(long)]
        analysis: Option<PathBuf>,
        /// Comma-separated real symbol
        #[arg(long, conflicts_with = "symbol_file", value_delimiter = ',', allow_hyphen_values = true)]
        symbol: Option<Vec<f64>>,
        /// JSON file `{"symbol": [...]}`; entries may be `[re, im]` pairs
        #[arg(long)]
        symbol_file: Option<PathBuf>,
        /// Also report the sup of ||M_a S^+|| over |a_i| <= 1
        #[arg(long = "box")]
        box_sup: bool,
    },
    /// Emit a reference frame with its closed-form quantities
    Gallery {
        #[arg(value_enum)]
        family: FamilyArg,
        /// N for simplex families and random families, n for shift
        #[arg(long)]
        size: usize,
        /// Ambient dimension for random and parseval
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, value_enum, default_value_t = FieldArg::Real)]
        field: FieldArg,
        /// Write the frame here instead of stdout
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the property suite against a frame
    Verify { file: PathBuf },
}

/// Command failure with its exit code.
enum Failure {
    Input(String),
    /// Property or decomposition failure; the report was already printed.
    Property(String),
}

impl From<FrameError> for Failure {
    fn from(e: FrameError) -> Self {
        match e {
            FrameError::Invariant(msg) => Failure::Property(msg),
            other => Failure::Input(other.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; 2 is reserved for property failures
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = configure_threads().and_then(|()| validate(&cli.global)).and_then(|()| run(&cli));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Property(msg)) => {
            eprintln!("failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> CmdResult {
    let Ok(raw) = std::env::var("FRAMELAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Input(format!("FRAMELAB_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Input(format!("cannot size the worker pool: {e}")))
}

fn validate(g: &GlobalOpts) -> CmdResult {
    for (name, v) in [("--tol", g.tol), ("--cluster-tol", g.cluster_tol)] {
        if let Some(v) = v {
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::Input(format!("{name} must be positive, got {v}")));
            }
        }
    }
    if g.exact_limit > EXACT_HARD_CAP {
        return Err(Failure::Input(format!(
            "--exact-limit {} exceeds the hard cap of {EXACT_HARD_CAP}",
            g.exact_limit
        )));
    }
    if g.budget == 0 {
        return Err(Failure::Input("--budget must be at least 1".into()));
    }
    Ok(())
}

fn run(cli: &Cli) -> CmdResult {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { file } => analyze(&load(file)?, g),
        Command::Constants { file } => {
            let frame = load(file)?;
            emit(g, &constants(&frame, g)?)
        }
        Command::Decompose { file } => decompose(&load(file)?, g),
        Command::Multiplier {
            file,
            analysis,
            symbol,
            symbol_file,
            box_sup,
        } => multiplier(file, analysis.as_deref(), symbol.as_deref(), symbol_file.as_deref(), *box_sup, g),
        Command::Gallery {
            family,
            size,
            dim,
            field,
            output,
        } => gallery(*family, *size, *dim, *field, output.as_deref(), g),
        Command::Verify { file } => verify(&load(file)?, g),
    }
}

fn load(path: &Path) -> Result<FrameMatrix, Failure> {
    read_frame(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(g: &GlobalOpts, value: &T) -> CmdResult {
    let json = serde_json::to_value(value).map_err(|e| Failure::Input(e.to_string()))?;
    print_value(g, &json);
    Ok(())
}

fn print_value(g: &GlobalOpts, json: &Value) {
    let text = match g.format {
        Format::Json => serde_json::to_string_pretty(json).expect("values serialize") + "\n",
        Format::Text => render::text(json),
    };
    // a closed pipe (`| head`) is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn rank_tol(g: &GlobalOpts) -> f64 {
    g.tol.unwrap_or(DEFAULT_RANK_TOL)
}

#[derive(Serialize)]
struct AnalyzeReport {
    field: Field,
    dim: usize,
    #[serde(rename = "N")]
    count: usize,
    #[serde(rename = "A")]
    lower: f64,
    #[serde(rename = "B")]
    upper: f64,
    ratio: f64,
    sqrt_ratio: f64,
    rank: usize,
    spanning: bool,
    flags: framelab::FrameClass,
    /// Nonzero spectrum of S, ascending.
    spectrum: Vec<f64>,
}

fn analyze(frame: &FrameMatrix, g: &GlobalOpts) -> CmdResult {
    let tol = rank_tol(g);
    let b = frame.frame_bounds(tol)?;
    let flags = frame.classify(tol)?;
    let top = b.upper;
    let spectrum = frame.operator_eigenvalues().into_iter().filter(|&l| l > tol * top).collect();
    emit(
        g,
        &AnalyzeReport {
            field: frame.field(),
            dim: frame.dim(),
            count: frame.count(),
            lower: b.lower,
            upper: b.upper,
            ratio: b.ratio(),
            sqrt_ratio: b.sqrt_ratio(),
            rank: b.rank,
            spanning: b.spanning,
            flags,
            spectrum,
        },
    )
}

fn exact_options(g: &GlobalOpts) -> ExactOptions {
    ExactOptions {
        rank_tol: rank_tol(g),
        ..Default::default()
    }
}

/// Exact or heuristic report according to `--mode`, `--exact-limit` and `--force`.
fn constants(frame: &FrameMatrix, g: &GlobalOpts) -> Result<UnconditionalReport, Failure> {
    let n = frame.count();
    let exact = match g.mode {
        ModeArg::Auto => n <= g.exact_limit,
        ModeArg::Exact => true,
        ModeArg::Heuristic => false,
    };
    if !exact {
        return Ok(c_heuristic(frame, g.budget, g.seed)?);
    }
    let limit = if g.force { EXACT_HARD_CAP } else { g.exact_limit };
    if n > limit {
        let hint = if g.force || n > EXACT_HARD_CAP {
            format!("N = {n} is beyond the hard cap of {EXACT_HARD_CAP}; use --mode heuristic")
        } else {
            format!("N = {n} exceeds --exact-limit {limit}; raise it, pass --force, or use --mode heuristic")
        };
        return Err(Failure::Input(hint));
    }
    Ok(exact_report(
        frame,
        &ExactOptions {
            limit,
            ..exact_options(g)
        },
    )?)
}

fn decompose(frame: &FrameMatrix, g: &GlobalOpts) -> CmdResult {
    let defaults = DecomposeOptions::default();
    let opts = DecomposeOptions {
        residual_tol: g.tol.unwrap_or(defaults.residual_tol),
        cluster_tol: g.cluster_tol.unwrap_or(defaults.cluster_tol),
        ..defaults
    };
    let d = decompose_with(frame, &opts)?;
    emit(g, &d)?;
    match d.failure() {
        Some(w) => Err(Failure::Property(format!(
            "not an orthogonal sum of tight frames ({:?} at {:?}, residual {:e})",
            w.kind, w.index, w.residual
        ))),
        None => Ok(()),
    }
}

#[derive(Serialize)]
struct MultiplierOutput {
    #[serde(flatten)]
    report: framelab::multiplier::MultiplierReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    box_sup_relative: Option<f64>,
}

fn multiplier(
    file: &Path,
    analysis: Option<&Path>,
    symbol: Option<&[f64]>,
    symbol_file: Option<&Path>,
    box_sup: bool,
    g: &GlobalOpts,
) -> CmdResult {
    let phi = load(file)?;
    let psi = match analysis {
        Some(p) => load(p)?,
        None => phi.clone(),
    };
    let symbol: Vec<Complex> = match (symbol, symbol_file) {
        (Some(s), _) => s.iter().map(|&m| Complex::real(m)).collect(),
        (None, Some(p)) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
            symbol_from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?
        }
        (None, None) => vec![Complex::ONE; phi.count()],
    };
    let box_sup_relative = if box_sup {
        let opts = ExactOptions {
            limit: if g.force { EXACT_HARD_CAP } else { g.exact_limit },
            ..exact_options(g)
        };
        Some(box_multiplier_sup_relative(&phi, &opts)?)
    } else {
        None
    };
    let report = multiplier_report(&MultiplierSpec::new(symbol, psi, phi)?)?;
    emit(
        g,
        &MultiplierOutput {
            report,
            box_sup_relative,
        },
    )
}

fn gallery(
    family: FamilyArg,
    size: usize,
    dim: Option<usize>,
    field: FieldArg,
    output: Option<&Path>,
    g: &GlobalOpts,
) -> CmdResult {
    let family = match family {
        FamilyArg::Simplex => Family::Simplex,
        FamilyArg::SimplexSub => Family::SimplexSub,
        FamilyArg::Shift => Family::Shift,
        FamilyArg::Random => Family::Random,
        FamilyArg::Parseval => Family::Parseval,
        FamilyArg::Orthonormal => Family::Orthonormal,
    };
    let field = match field {
        FieldArg::Real => Field::Real,
        FieldArg::Complex => Field::Complex,
    };
    let entry = GallerySpec {
        family,
        size,
        dim,
        seed: g.seed,
        field,
    }
    .build()?;
    let mut file = FrameFile::from_frame(&entry.frame);
    file.expected = Some(entry.expected);
    match output {
        Some(path) => {
            let text = serde_json::to_string_pretty(&file).map_err(|e| Failure::Input(e.to_string()))?;
            std::fs::write(path, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        None => emit(g, &file),
    }
}

fn verify(frame: &FrameMatrix, g: &GlobalOpts) -> CmdResult {
    let bounds = frame.frame_bounds(rank_tol(g))?;
    let report = constants(frame, g)?;
    let v = verify_with_report(frame, &report, &bounds, g.seed)?;
    #[derive(Serialize)]
    struct Output<'a> {
        #[serde(flatten)]
        verify: &'a framelab::verify::VerifyReport,
        slack: f64,
    }
    emit(
        g,
        &Output {
            verify: &v,
            slack: report.slack,
        },
    )?;
    if v.passed {
        Ok(())
    } else {
        let names: Vec<&str> = v.failures().map(|p| p.name.as_str()).collect();
        Err(Failure::Property(format!("properties failed: {}", names.join(", "))))
    }
}
