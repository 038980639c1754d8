//! Command-line interface to the time-frequency operator calculus library.
//!
//! Subcommands mirror the library's main entry points: `transform` (STFT and
//! Wigner distributions), `localize` and `weyl` (operator application),
//! `norm` (weighted Lebesgue / mixed / modulation norms), `admissible`
//! (exact exponent/weight hypothesis checking), and `verify` (identity
//! certifications and ratio sweeps with machine-readable reports).
//!
//! Sampled data travels as CSV tables with JSON sidecars; see the library's
//! `io` module for the format. Exit codes: 0 on success (and, for `verify`,
//! only if every check passed), 1 for a failed verification, 2 for usage or
//! computation errors.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use tfcalc_core::io;
use tfcalc_core::modspaces::{
    lp_weighted_norm, mixed_norm, modulation_norm, symbol_modulation_norm, Exponent,
};
use tfcalc_core::operators::{
    localization_apply, weyl_apply_multi, LocalizationSpec, Symbol,
};
use tfcalc_core::tf_transforms::{stft, wigner, SignalVector, WindowVector};
use tfcalc_core::verify::{emit, run_suite, ExperimentConfig};
use tfcalc_core::{Result, TfError};

#[derive(Parser)]
#[command(
    name = "tfcalc",
    about = "Time-frequency operator calculus on discrete periodic grids",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a time-frequency transform of a signal against a window.
    Transform(TransformArgs),
    /// Apply a multilinear localization operator to a signal vector.
    Localize(LocalizeArgs),
    /// Apply the Weyl quantization of a phase-space symbol.
    Weyl(WeylArgs),
    /// Evaluate a weighted norm of a signal or phase-space function.
    Norm(NormArgs),
    /// Check the exponent/weight hypotheses of a boundedness theorem exactly.
    Admissible(AdmissibleArgs),
    /// Run a verification suite and emit a report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct TransformArgs {
    /// Transform kind: `stft` or `wigner`.
    #[arg(long)]
    kind: String,
    /// Input signal CSV (with JSON sidecar).
    #[arg(long = "in")]
    input: PathBuf,
    /// Window signal CSV.
    #[arg(long)]
    window: PathBuf,
    /// Output phase-space CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LocalizeArgs {
    /// Phase-space symbol CSV on the joint lattice.
    #[arg(long)]
    symbol: PathBuf,
    /// Analysis window CSVs, comma-separated, one per factor.
    #[arg(long, value_delimiter = ',')]
    analysis: Vec<PathBuf>,
    /// Synthesis window CSVs, comma-separated, one per factor.
    #[arg(long, value_delimiter = ',')]
    synthesis: Vec<PathBuf>,
    /// Input signal CSVs, comma-separated, one per factor.
    #[arg(long = "in", value_delimiter = ',')]
    input: Vec<PathBuf>,
    /// Output signal CSV (on the joint lattice).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct WeylArgs {
    /// Phase-space symbol CSV on the joint lattice.
    #[arg(long)]
    symbol: PathBuf,
    /// Input signal CSVs, comma-separated, one per factor.
    #[arg(long = "in", value_delimiter = ',')]
    input: Vec<PathBuf>,
    /// Output signal CSV (on the joint lattice).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct NormArgs {
    /// Norm kind: `lp`, `mixed`, or `modulation`.
    #[arg(long)]
    kind: String,
    /// Inner exponent p (a number or `inf`).
    #[arg(long, default_value = "2")]
    p: String,
    /// Outer exponent q (a number or `inf`).
    #[arg(long, default_value = "2")]
    q: String,
    /// Frequency weight power s.
    #[arg(long, default_value_t = 0.0)]
    s: f64,
    /// Space weight power t.
    #[arg(long, default_value_t = 0.0)]
    t: f64,
    /// Input CSV: a signal for `lp`/`modulation`, a phase-space function for
    /// `mixed`.
    #[arg(long = "in")]
    input: PathBuf,
    /// Optional STFT window for `modulation` (default: normalized Gaussian).
    #[arg(long)]
    window: Option<PathBuf>,
}

#[derive(Args)]
struct AdmissibleArgs {
    /// Theorem: `convolution`, `wigner`, `weyl`, or `localization`.
    #[arg(long)]
    theorem: String,
    /// JSON parameter file (exponents as numbers, fractions, or `inf`).
    #[arg(long)]
    params: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: `identities`, `wigner`, `weyl`, `localization`, or `all`.
    #[arg(long)]
    suite: String,
    /// Optional JSON experiment configuration (partial files accepted).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for `report.json` and `records.csv`.
    #[arg(long)]
    out: PathBuf,
}

fn read_signals(paths: &[PathBuf]) -> Result<SignalVector> {
    let signals = paths
        .iter()
        .map(io::read_signal)
        .collect::<Result<Vec<_>>>()?;
    SignalVector::new(signals)
}

fn read_windows(paths: &[PathBuf]) -> Result<WindowVector> {
    let windows = paths
        .iter()
        .map(io::read_signal)
        .collect::<Result<Vec<_>>>()?;
    WindowVector::new(windows)
}

fn run_transform(args: &TransformArgs) -> Result<()> {
    let f = io::read_signal(&args.input)?;
    let g = io::read_signal(&args.window)?;
    let out = match args.kind.as_str() {
        "stft" => stft(&f, &g)?,
        "wigner" => wigner(&f, &g)?,
        other => {
            return Err(TfError::InvalidArgument(format!(
                "unknown transform kind `{other}`; expected stft or wigner"
            )))
        }
    };
    io::write_phasefn(&args.out, &out)
}

fn run_localize(args: &LocalizeArgs) -> Result<()> {
    let phase = io::read_phasefn(&args.symbol)?;
    let analysis = read_windows(&args.analysis)?;
    let synthesis = read_windows(&args.synthesis)?;
    let fv = read_signals(&args.input)?;
    let symbol = Symbol::new(analysis.len(), phase)?;
    let spec = LocalizationSpec::new(symbol, analysis, synthesis)?;
    let af = localization_apply(&spec, &fv)?;
    io::write_signal(&args.out, &af)
}

fn run_weyl(args: &WeylArgs) -> Result<()> {
    let phase = io::read_phasefn(&args.symbol)?;
    let fv = read_signals(&args.input)?;
    let sigma = Symbol::new(fv.len(), phase)?;
    let lf = weyl_apply_multi(&sigma, &fv)?;
    io::write_signal(&args.out, &lf)
}

fn run_norm(args: &NormArgs) -> Result<()> {
    let p = Exponent::parse(&args.p)?;
    let q = Exponent::parse(&args.q)?;
    let value = match args.kind.as_str() {
        "lp" => lp_weighted_norm(&io::read_signal(&args.input)?, p, args.t),
        "mixed" => {
            // A 2D-axis table is a phase-space function; a D-axis table is a
            // signal and has no mixed norm.
            let f = io::read_phasefn(&args.input)?;
            mixed_norm(&f, p, q, args.s, args.t)
        }
        "modulation" => {
            if let Ok(f) = io::read_signal(&args.input) {
                let window = match &args.window {
                    Some(path) => Some(io::read_signal(path)?),
                    None => None,
                };
                modulation_norm(&f, p, q, args.s, args.t, window.as_ref())?
            } else {
                // Phase-space input: the symbol modulation norm over the
                // doubled phase space.
                let f = io::read_phasefn(&args.input)?;
                symbol_modulation_norm(&f, p, q, args.s, args.t)
            }
        }
        other => {
            return Err(TfError::InvalidArgument(format!(
                "unknown norm kind `{other}`; expected lp, mixed, or modulation"
            )))
        }
    };
    println!("{value:.17e}");
    let record = serde_json::json!({
        "kind": args.kind,
        "p": args.p,
        "q": args.q,
        "s": args.s,
        "t": args.t,
        "input": args.input.display().to_string(),
        "value": value,
    });
    println!("{record}");
    Ok(())
}

fn run_admissible(args: &AdmissibleArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.params)?;
    let verdict = io::admissibility_check_from_json(&args.theorem, &text)?;
    println!("{}", serde_json::to_string_pretty(&verdict)?);
    print!("{}", tfcalc_core::admissibility::explain(&verdict));
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<bool> {
    let cfg = match &args.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    let report = run_suite(&args.suite, &cfg)?;
    emit(&report, &args.out)?;
    for c in &report.checks {
        println!(
            "[{}] {} (observed {:.3e}, bound {:.3e})",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.observed,
            c.bound
        );
    }
    println!(
        "suite `{}`: {} ({} checks, {} records, {:.1}s)",
        report.suite,
        if report.pass { "PASS" } else { "FAIL" },
        report.checks.len(),
        report.records.len(),
        report.wall_clock_seconds
    );
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Transform(args) => run_transform(args).map(|()| true),
        Command::Localize(args) => run_localize(args).map(|()| true),
        Command::Weyl(args) => run_weyl(args).map(|()| true),
        Command::Norm(args) => run_norm(args).map(|()| true),
        Command::Admissible(args) => run_admissible(args).map(|()| true),
        Command::Verify(args) => run_verify(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("tfcalc: {e}");
            ExitCode::from(2)
        }
    }
}
