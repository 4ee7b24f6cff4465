//! Command-line front end: evaluate curves, run Monte Carlo sweeps, push
//! audio through the link, and compare operating points.
//!
//! Outputs are machine-readable and deterministic — same config and seed,
//! same bytes. CSV artifacts carry a `#`-comment preamble echoing the full
//! configuration; JSON artifacts embed it under `config` next to a
//! `schema_version` field. Files are written atomically (temp + rename).

use crate::analysis::{EvalMode, Granularity, Scheme};
use crate::montecarlo::{
    analytic_curve_with, is_supported, supported_orders, sweep_with, BerCurve, CurveMode,
    CurveOptions, Execution, MonteCarloError, SnrRef, StopCriteria,
};
use crate::payload::{
    serialize_f64_total, transmit_pipeline, voice_fixture, wav_read, wav_write, write_atomic,
    PayloadError, TransmissionReport,
};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::fmt::{self, Write as _};
use std::io::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

/// Version of the CSV/JSON artifact layout, embedded in every JSON output.
pub const SCHEMA_VERSION: u32 = 1;

/// The CSV header every curve artifact uses, analytic or Monte Carlo.
pub const CURVE_CSV_HEADER: &str = "scheme,m,mode,granularity,ebn0_db,value,ci_low,ci_high,seed";

/// Errors surfaced to the terminal with a nonzero exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid {field}: {message}")]
    InvalidField {
        field: &'static str,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    MonteCarlo(#[from] MonteCarloError),
    #[error(transparent)]
    Payload(#[from] PayloadError),
}

// ---------------------------------------------------------------------------
// Argument grammar
// ---------------------------------------------------------------------------

#[derive(Parser, Debug)]
#[command(
    name = "modem-lab",
    version,
    about = "Analytic and simulated error rates for M-ary PSK/QAM/FSK over AWGN"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate error-rate curves (analytic modes or Monte Carlo).
    Curve(CurveArgs),
    /// Monte Carlo sweep with explicit stop-rule knobs.
    Sweep(SweepArgs),
    /// Send a WAV payload through the simulated link.
    Transmit(TransmitArgs),
    /// Ratio of two configurations at shared grid points.
    Compare(CompareArgs),
}

/// An SNR grid written `start:stop:step` in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    const MAX_POINTS: usize = 100_000;

    /// Expand to grid values: start, start + step, … up to stop.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(format!("expected start:stop:step in dB, got '{s}'"));
        };
        let parse = |what: &str, p: &str| -> Result<f64, String> {
            let v: f64 = p
                .parse()
                .map_err(|_| format!("{what} '{p}' is not a number"))?;
            if !v.is_finite() {
                return Err(format!("{what} must be finite, got '{p}'"));
            }
            Ok(v)
        };
        let spec = GridSpec {
            start: parse("start", start)?,
            stop: parse("stop", stop)?,
            step: parse("step", step)?,
        };
        if spec.start > spec.stop {
            return Err(format!("start {} exceeds stop {}", spec.start, spec.stop));
        }
        if spec.step <= 0.0 {
            return Err(format!("step must be positive, got {}", spec.step));
        }
        let n = ((spec.stop - spec.start) / spec.step + 1e-9).floor() + 1.0;
        if n > Self::MAX_POINTS as f64 {
            return Err(format!(
                "grid has {n:.0} points; the limit is {}",
                Self::MAX_POINTS
            ));
        }
        Ok(spec)
    }
}

/// Output encoding for curve/sweep/compare artifacts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    /// Scheme(s): psk, qam, fsk (comma separated).
    #[arg(long, required = true, value_delimiter = ',', value_parser = Scheme::from_str)]
    pub scheme: Vec<Scheme>,
    /// Modulation order(s) M (comma separated).
    #[arg(long, required = true, value_delimiter = ',')]
    pub m: Vec<u32>,
    /// SNR grid in dB, start:stop:step.
    #[arg(long, default_value = "0:12:1", value_parser = GridSpec::from_str)]
    pub snr: GridSpec,
    /// Mode(s): exact, approx1, approx2, approx3, union, montecarlo.
    #[arg(long, required = true, value_delimiter = ',', value_parser = CurveMode::from_str)]
    pub mode: Vec<CurveMode>,
    /// Report bit or symbol error rates.
    #[arg(long, default_value = "bit", value_parser = Granularity::from_str)]
    pub granularity: Granularity,
    /// Read the SNR axis per bit (Eb/N0) or per symbol (Es/N0).
    #[arg(long, default_value = "bit", value_parser = SnrRef::from_str)]
    pub snr_ref: SnrRef,
    /// Base seed for Monte Carlo modes.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "csv", value_parser = OutputFormat::from_str)]
    pub format: OutputFormat,
    /// Output file (stdout when omitted).
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Scheme(s): psk, qam, fsk (comma separated).
    #[arg(long, required = true, value_delimiter = ',', value_parser = Scheme::from_str)]
    pub scheme: Vec<Scheme>,
    /// Modulation order(s) M (comma separated).
    #[arg(long, required = true, value_delimiter = ',')]
    pub m: Vec<u32>,
    /// SNR grid in dB, start:stop:step.
    #[arg(long, default_value = "0:12:1", value_parser = GridSpec::from_str)]
    pub snr: GridSpec,
    /// Report bit or symbol error rates.
    #[arg(long, default_value = "bit", value_parser = Granularity::from_str)]
    pub granularity: Granularity,
    /// Read the SNR axis per bit (Eb/N0) or per symbol (Es/N0).
    #[arg(long, default_value = "bit", value_parser = SnrRef::from_str)]
    pub snr_ref: SnrRef,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Stop once this many bit errors accumulate at a point.
    #[arg(long, default_value_t = 100)]
    pub min_errors: u64,
    /// Hard per-point budget in bits.
    #[arg(long, default_value_t = 10_000_000)]
    pub max_bits: u64,
    /// Bits per batch.
    #[arg(long, default_value_t = 100_000)]
    pub batch_size: u64,
    /// Batch evaluation path: parallel or sequential (identical results).
    #[arg(long, default_value = "parallel", value_parser = Execution::from_str)]
    pub execution: Execution,
    #[arg(long, default_value = "csv", value_parser = OutputFormat::from_str)]
    pub format: OutputFormat,
    /// Output file (stdout when omitted).
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TransmitArgs {
    /// Scheme: psk, qam, or fsk.
    #[arg(long, value_parser = Scheme::from_str)]
    pub scheme: Scheme,
    /// Modulation order M.
    #[arg(long)]
    pub m: u32,
    /// Eb/N0 in dB; `inf` selects the noiseless channel.
    #[arg(long, default_value_t = 6.0)]
    pub ebn0: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Input WAV file (16-bit mono PCM).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Use the built-in deterministic voice fixture with this many samples
    /// instead of reading a file.
    #[arg(long, conflicts_with = "input")]
    pub fixture: Option<usize>,
    /// Reconstructed WAV path.
    #[arg(long, short = 'o')]
    pub output: PathBuf,
    /// Write the JSON report here (stdout when omitted).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long, value_parser = Scheme::from_str)]
    pub scheme_a: Scheme,
    #[arg(long)]
    pub m_a: u32,
    #[arg(long, value_parser = CurveMode::from_str)]
    pub mode_a: CurveMode,
    #[arg(long, value_parser = Scheme::from_str)]
    pub scheme_b: Scheme,
    #[arg(long)]
    pub m_b: u32,
    #[arg(long, value_parser = CurveMode::from_str)]
    pub mode_b: CurveMode,
    /// Shared SNR grid in dB, start:stop:step.
    #[arg(long, default_value = "6:6:1", value_parser = GridSpec::from_str)]
    pub snr: GridSpec,
    /// Report bit or symbol error rates.
    #[arg(long, default_value = "bit", value_parser = Granularity::from_str)]
    pub granularity: Granularity,
    /// Read the SNR axis per bit (Eb/N0) or per symbol (Es/N0). Defaults
    /// to symbol: order-vs-order claims hold the symbol energy fixed.
    #[arg(long, default_value = "symbol", value_parser = SnrRef::from_str)]
    pub snr_ref: SnrRef,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "csv", value_parser = OutputFormat::from_str)]
    pub format: OutputFormat,
    /// Output file (stdout when omitted).
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

fn check_supported(scheme: Scheme, m: u32) -> Result<(), CliError> {
    if is_supported(scheme, m) {
        Ok(())
    } else {
        Err(CliError::InvalidField {
            field: "--m",
            message: format!(
                "{scheme} does not support m = {m} (supported: {:?})",
                supported_orders(scheme)
            ),
        })
    }
}

fn valid_modes(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::Psk => "exact, approx1, approx2, montecarlo",
        Scheme::Qam => "exact, approx1, approx2, approx3, montecarlo",
        Scheme::Fsk => "exact, union, montecarlo",
    }
}

fn check_mode(scheme: Scheme, mode: CurveMode) -> Result<(), CliError> {
    let ok = match mode {
        CurveMode::MonteCarlo => true,
        CurveMode::Analytic(e) => matches!(
            (scheme, e),
            (
                Scheme::Psk,
                EvalMode::Exact | EvalMode::Approx1 | EvalMode::Approx2
            ) | (
                Scheme::Qam,
                EvalMode::Exact | EvalMode::Approx1 | EvalMode::Approx2 | EvalMode::Approx3
            ) | (Scheme::Fsk, EvalMode::Exact | EvalMode::Union)
        ),
    };
    if ok {
        Ok(())
    } else {
        Err(CliError::InvalidField {
            field: "--mode",
            message: format!(
                "mode '{mode}' is not defined for {scheme} (valid: {})",
                valid_modes(scheme)
            ),
        })
    }
}

fn check_ebn0(field: &'static str, db: f64) -> Result<(), CliError> {
    if db.is_nan() || db == f64::NEG_INFINITY {
        Err(CliError::InvalidField {
            field,
            message: format!("must not be NaN or -inf, got {db}"),
        })
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Output assembly
// ---------------------------------------------------------------------------

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn opt_to_csv(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn curve_csv(preamble: &str, curves: &[BerCurve]) -> String {
    let mut out = String::from(preamble);
    out.push_str(CURVE_CSV_HEADER);
    out.push('\n');
    for c in curves {
        let seed = c.seed.map(|s| s.to_string()).unwrap_or_default();
        for p in &c.points {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                c.scheme,
                c.m,
                c.mode,
                c.granularity,
                p.eb_n0_db,
                p.value,
                opt_to_csv(p.ci_low),
                opt_to_csv(p.ci_high),
                seed
            )
            .expect("write to String");
        }
    }
    out
}

fn to_json_bytes<T: Serialize>(doc: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(doc).expect("serializable document");
    bytes.push(b'\n');
    bytes
}

fn emit(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => Ok(write_atomic(p, bytes)?),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct CurveConfig {
    scheme: Vec<String>,
    m: Vec<u32>,
    snr: String,
    mode: Vec<String>,
    granularity: String,
    snr_ref: String,
    seed: u64,
}

#[derive(Serialize)]
struct CurveDoc<'a> {
    schema_version: u32,
    command: &'static str,
    config: CurveConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    stop: Option<StopCriteria>,
    #[serde(skip_serializing_if = "Option::is_none")]
    execution: Option<String>,
    curves: &'a [BerCurve],
}

#[derive(Serialize)]
struct TransmitConfig {
    scheme: String,
    m: u32,
    #[serde(serialize_with = "serialize_f64_total")]
    eb_n0_db: f64,
    seed: u64,
    source: String,
    output: String,
}

#[derive(Serialize)]
struct TransmitDoc {
    schema_version: u32,
    command: &'static str,
    config: TransmitConfig,
    report: TransmissionReport,
}

#[derive(Serialize)]
struct CompareSide {
    scheme: String,
    m: u32,
    mode: String,
}

#[derive(Serialize)]
struct CompareConfig {
    a: CompareSide,
    b: CompareSide,
    snr: String,
    granularity: String,
    snr_ref: String,
    seed: u64,
}

#[derive(Serialize)]
struct CompareRow {
    eb_n0_db: f64,
    value_a: f64,
    value_b: f64,
    #[serde(serialize_with = "serialize_f64_total")]
    ratio: f64,
}

#[derive(Serialize)]
struct CompareDoc {
    schema_version: u32,
    command: &'static str,
    config: CompareConfig,
    rows: Vec<CompareRow>,
}

/// Ratio with the one special case pinned: equal values compare to
/// exactly 1.0 (so identical configs never drift through 0/0 or rounding).
fn ratio_of(a: f64, b: f64) -> f64 {
    if a == b {
        1.0
    } else {
        a / b
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// Dispatch a parsed command line. Errors print to stderr with a nonzero
/// exit in `main`.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Curve(a) => cmd_curve(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Transmit(a) => cmd_transmit(&a),
        Command::Compare(a) => cmd_compare(&a),
    }
}

/// Simulation knobs that only the Monte Carlo arm of a curve consumes.
struct McRun<'a> {
    stop: &'a StopCriteria,
    seed: u64,
    execution: Execution,
}

fn one_curve(
    scheme: Scheme,
    m: u32,
    mode: CurveMode,
    grid: &[f64],
    options: &CurveOptions,
    mc: &McRun<'_>,
) -> Result<BerCurve, CliError> {
    Ok(match mode {
        CurveMode::Analytic(e) => analytic_curve_with(scheme, m, grid, e, options)?,
        CurveMode::MonteCarlo => {
            sweep_with(scheme, m, grid, mc.stop, mc.seed, options, mc.execution)?
        }
    })
}

fn cmd_curve(a: &CurveArgs) -> Result<(), CliError> {
    for &scheme in &a.scheme {
        for &m in &a.m {
            check_supported(scheme, m)?;
        }
        for &mode in &a.mode {
            check_mode(scheme, mode)?;
        }
    }
    let grid = a.snr.points();
    let options = CurveOptions {
        granularity: a.granularity,
        snr_ref: a.snr_ref,
    };
    let stop = StopCriteria::default();

    let mc = McRun {
        stop: &stop,
        seed: a.seed,
        execution: Execution::default(),
    };

    let mut curves = Vec::new();
    for &scheme in &a.scheme {
        for &m in &a.m {
            for &mode in &a.mode {
                curves.push(one_curve(scheme, m, mode, &grid, &options, &mc)?);
            }
        }
    }

    let bytes = match a.format {
        OutputFormat::Csv => {
            let mut pre = String::from("# modem-lab curve\n");
            writeln!(pre, "# scheme: {}", join(&a.scheme)).unwrap();
            writeln!(pre, "# m: {}", join(&a.m)).unwrap();
            writeln!(pre, "# snr: {}", a.snr).unwrap();
            writeln!(pre, "# mode: {}", join(&a.mode)).unwrap();
            writeln!(pre, "# granularity: {}", a.granularity).unwrap();
            writeln!(pre, "# snr_ref: {}", a.snr_ref).unwrap();
            writeln!(pre, "# seed: {}", a.seed).unwrap();
            curve_csv(&pre, &curves).into_bytes()
        }
        OutputFormat::Json => to_json_bytes(&CurveDoc {
            schema_version: SCHEMA_VERSION,
            command: "curve",
            config: CurveConfig {
                scheme: a.scheme.iter().map(ToString::to_string).collect(),
                m: a.m.clone(),
                snr: a.snr.to_string(),
                mode: a.mode.iter().map(ToString::to_string).collect(),
                granularity: a.granularity.to_string(),
                snr_ref: a.snr_ref.to_string(),
                seed: a.seed,
            },
            stop: None,
            execution: None,
            curves: &curves,
        }),
    };
    emit(a.output.as_ref(), &bytes)
}

fn cmd_sweep(a: &SweepArgs) -> Result<(), CliError> {
    for &scheme in &a.scheme {
        for &m in &a.m {
            check_supported(scheme, m)?;
        }
    }
    let stop = StopCriteria {
        min_bit_errors: a.min_errors,
        max_bits: a.max_bits,
        batch_size: a.batch_size,
    };
    if stop.min_bit_errors == 0 || stop.max_bits == 0 || stop.batch_size == 0 {
        return Err(CliError::InvalidField {
            field: "--min-errors/--max-bits/--batch-size",
            message: "stop criteria must all be positive".into(),
        });
    }
    let grid = a.snr.points();
    let options = CurveOptions {
        granularity: a.granularity,
        snr_ref: a.snr_ref,
    };

    let mc = McRun {
        stop: &stop,
        seed: a.seed,
        execution: a.execution,
    };

    let mut curves = Vec::new();
    for &scheme in &a.scheme {
        for &m in &a.m {
            curves.push(one_curve(
                scheme,
                m,
                CurveMode::MonteCarlo,
                &grid,
                &options,
                &mc,
            )?);
        }
    }

    let bytes = match a.format {
        OutputFormat::Csv => {
            let mut pre = String::from("# modem-lab sweep\n");
            writeln!(pre, "# scheme: {}", join(&a.scheme)).unwrap();
            writeln!(pre, "# m: {}", join(&a.m)).unwrap();
            writeln!(pre, "# snr: {}", a.snr).unwrap();
            writeln!(pre, "# granularity: {}", a.granularity).unwrap();
            writeln!(pre, "# snr_ref: {}", a.snr_ref).unwrap();
            writeln!(pre, "# seed: {}", a.seed).unwrap();
            writeln!(pre, "# min_errors: {}", a.min_errors).unwrap();
            writeln!(pre, "# max_bits: {}", a.max_bits).unwrap();
            writeln!(pre, "# batch_size: {}", a.batch_size).unwrap();
            writeln!(pre, "# execution: {}", a.execution).unwrap();
            curve_csv(&pre, &curves).into_bytes()
        }
        OutputFormat::Json => to_json_bytes(&CurveDoc {
            schema_version: SCHEMA_VERSION,
            command: "sweep",
            config: CurveConfig {
                scheme: a.scheme.iter().map(ToString::to_string).collect(),
                m: a.m.clone(),
                snr: a.snr.to_string(),
                mode: vec![CurveMode::MonteCarlo.to_string()],
                granularity: a.granularity.to_string(),
                snr_ref: a.snr_ref.to_string(),
                seed: a.seed,
            },
            stop: Some(stop),
            execution: Some(a.execution.to_string()),
            curves: &curves,
        }),
    };
    emit(a.output.as_ref(), &bytes)
}

fn cmd_transmit(a: &TransmitArgs) -> Result<(), CliError> {
    check_supported(a.scheme, a.m)?;
    check_ebn0("--ebn0", a.ebn0)?;

    let (payload, source) = match (&a.input, a.fixture) {
        (Some(path), None) => (wav_read(path)?, format!("file:{}", path.display())),
        (None, Some(n)) => (voice_fixture(n, 8000), format!("fixture:{n}")),
        _ => {
            return Err(CliError::InvalidField {
                field: "--input/--fixture",
                message: "exactly one payload source is required".into(),
            })
        }
    };

    let (reconstructed, report) = transmit_pipeline(&payload, a.scheme, a.m, a.ebn0, a.seed)?;
    wav_write(&a.output, &reconstructed)?;

    let doc = TransmitDoc {
        schema_version: SCHEMA_VERSION,
        command: "transmit",
        config: TransmitConfig {
            scheme: a.scheme.to_string(),
            m: a.m,
            eb_n0_db: a.ebn0,
            seed: a.seed,
            source,
            output: a.output.display().to_string(),
        },
        report,
    };
    emit(a.report.as_ref(), &to_json_bytes(&doc))
}

fn cmd_compare(a: &CompareArgs) -> Result<(), CliError> {
    check_supported(a.scheme_a, a.m_a)?;
    check_supported(a.scheme_b, a.m_b)?;
    check_mode(a.scheme_a, a.mode_a)?;
    check_mode(a.scheme_b, a.mode_b)?;

    let grid = a.snr.points();
    let options = CurveOptions {
        granularity: a.granularity,
        snr_ref: a.snr_ref,
    };
    let stop = StopCriteria::default();
    let mc = McRun {
        stop: &stop,
        seed: a.seed,
        execution: Execution::default(),
    };
    let side_a = one_curve(a.scheme_a, a.m_a, a.mode_a, &grid, &options, &mc)?;
    let side_b = one_curve(a.scheme_b, a.m_b, a.mode_b, &grid, &options, &mc)?;

    let rows: Vec<CompareRow> = side_a
        .points
        .iter()
        .zip(&side_b.points)
        .map(|(pa, pb)| CompareRow {
            eb_n0_db: pa.eb_n0_db,
            value_a: pa.value,
            value_b: pb.value,
            ratio: ratio_of(pa.value, pb.value),
        })
        .collect();

    let bytes = match a.format {
        OutputFormat::Csv => {
            let mut out = String::from("# modem-lab compare\n");
            writeln!(out, "# a: {} m={} mode={}", a.scheme_a, a.m_a, a.mode_a).unwrap();
            writeln!(out, "# b: {} m={} mode={}", a.scheme_b, a.m_b, a.mode_b).unwrap();
            writeln!(out, "# snr: {}", a.snr).unwrap();
            writeln!(out, "# granularity: {}", a.granularity).unwrap();
            writeln!(out, "# snr_ref: {}", a.snr_ref).unwrap();
            writeln!(out, "# seed: {}", a.seed).unwrap();
            out.push_str("ebn0_db,scheme_a,m_a,mode_a,value_a,scheme_b,m_b,mode_b,value_b,ratio\n");
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    r.eb_n0_db,
                    a.scheme_a,
                    a.m_a,
                    a.mode_a,
                    r.value_a,
                    a.scheme_b,
                    a.m_b,
                    a.mode_b,
                    r.value_b,
                    r.ratio
                )
                .expect("write to String");
            }
            out.into_bytes()
        }
        OutputFormat::Json => to_json_bytes(&CompareDoc {
            schema_version: SCHEMA_VERSION,
            command: "compare",
            config: CompareConfig {
                a: CompareSide {
                    scheme: a.scheme_a.to_string(),
                    m: a.m_a,
                    mode: a.mode_a.to_string(),
                },
                b: CompareSide {
                    scheme: a.scheme_b.to_string(),
                    m: a.m_b,
                    mode: a.mode_b.to_string(),
                },
                snr: a.snr.to_string(),
                granularity: a.granularity.to_string(),
                snr_ref: a.snr_ref.to_string(),
                seed: a.seed,
            },
            rows,
        }),
    };
    emit(a.output.as_ref(), &bytes)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::analytic_curve;

    #[test]
    fn grid_spec_expands_inclusively() {
        let g = GridSpec::from_str("0:12:1").unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 13);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[12], 12.0);

        assert_eq!(GridSpec::from_str("6:6:1").unwrap().points(), vec![6.0]);
        // Step that overshoots the stop: the last in-range point wins.
        assert_eq!(
            GridSpec::from_str("0:12:5").unwrap().points(),
            vec![0.0, 5.0, 10.0]
        );
        // Fractional steps stay exact at representable values.
        assert_eq!(
            GridSpec::from_str("0:1:0.5").unwrap().points(),
            vec![0.0, 0.5, 1.0]
        );
    }

    #[test]
    fn grid_spec_rejects_malformed_input() {
        for bad in [
            "", "1:2", "1:2:3:4", "a:2:1", "1:b:1", "1:2:c", "2:1:1", "0:1:0", "0:1:-1", "inf:1:1",
            "0:inf:1", "0:1:nan",
        ] {
            assert!(GridSpec::from_str(bad).is_err(), "'{bad}' should not parse");
        }
        assert!(
            GridSpec::from_str("0:1000:0.001").is_err(),
            "point-count cap"
        );
    }

    #[test]
    fn mode_validation_matches_each_scheme() {
        use CurveMode::{Analytic, MonteCarlo};
        for scheme in [Scheme::Psk, Scheme::Qam, Scheme::Fsk] {
            assert!(check_mode(scheme, MonteCarlo).is_ok());
            assert!(check_mode(scheme, Analytic(EvalMode::Exact)).is_ok());
        }
        assert!(check_mode(Scheme::Psk, Analytic(EvalMode::Approx3)).is_err());
        assert!(check_mode(Scheme::Psk, Analytic(EvalMode::Union)).is_err());
        assert!(check_mode(Scheme::Qam, Analytic(EvalMode::Approx3)).is_ok());
        assert!(check_mode(Scheme::Qam, Analytic(EvalMode::Union)).is_err());
        assert!(check_mode(Scheme::Fsk, Analytic(EvalMode::Union)).is_ok());
        assert!(check_mode(Scheme::Fsk, Analytic(EvalMode::Approx1)).is_err());

        let err = check_mode(Scheme::Fsk, Analytic(EvalMode::Approx2)).unwrap_err();
        assert!(err.to_string().contains("--mode"), "{err}");
        assert!(check_supported(Scheme::Qam, 32)
            .unwrap_err()
            .to_string()
            .contains("--m"));
    }

    #[test]
    fn curve_csv_has_the_fixed_schema() {
        let curve = analytic_curve(Scheme::Psk, 2, &[0.0, 6.0], EvalMode::Exact).unwrap();
        let csv = curve_csv("# p\n", std::slice::from_ref(&curve));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# p");
        assert_eq!(
            lines[1],
            "scheme,m,mode,granularity,ebn0_db,value,ci_low,ci_high,seed"
        );
        assert_eq!(lines.len(), 4);
        // Analytic rows leave the CI and seed columns empty.
        assert!(
            lines[2].starts_with("psk,2,exact,bit,0,0.0786"),
            "{}",
            lines[2]
        );
        assert!(lines[2].ends_with(",,,"), "{}", lines[2]);
    }

    #[test]
    fn ratio_of_identical_values_is_exactly_one() {
        assert_eq!(ratio_of(0.25, 0.25), 1.0);
        assert_eq!(ratio_of(0.0, 0.0), 1.0);
        assert_eq!(ratio_of(1.0, 0.5), 2.0);
        assert_eq!(ratio_of(1.0, 0.0), f64::INFINITY);
    }

    #[test]
    fn json_docs_carry_schema_version_and_lossless_floats() {
        let doc = TransmitDoc {
            schema_version: SCHEMA_VERSION,
            command: "transmit",
            config: TransmitConfig {
                scheme: "psk".into(),
                m: 2,
                eb_n0_db: f64::INFINITY,
                seed: 0,
                source: "fixture:10".into(),
                output: "out.wav".into(),
            },
            report: TransmissionReport {
                scheme: Scheme::Psk,
                m: 2,
                eb_n0_db: f64::INFINITY,
                seed: 0,
                bit_errors: 0,
                total_bits: 160,
                ber: 0.0,
                sample_mse: 0.0,
                max_abs_sample_error: 0,
            },
        };
        let v: serde_json::Value = serde_json::from_slice(&to_json_bytes(&doc)).unwrap();
        assert_eq!(v["schema_version"], 1);
        // Infinity survives as a string rather than collapsing to null.
        assert_eq!(v["config"]["eb_n0_db"], "inf");
        assert_eq!(v["report"]["eb_n0_db"], "inf");
    }

    #[test]
    fn cli_grammar_parses_the_documented_invocations() {
        let cli = Cli::try_parse_from([
            "modem-lab",
            "curve",
            "--scheme",
            "psk,qam,fsk",
            "--m",
            "2",
            "--snr",
            "0:12:1",
            "--mode",
            "exact",
        ])
        .unwrap();
        match cli.command {
            Command::Curve(a) => {
                assert_eq!(a.scheme, vec![Scheme::Psk, Scheme::Qam, Scheme::Fsk]);
                assert_eq!(a.m, vec![2]);
                assert_eq!(a.granularity, Granularity::Bit);
                assert_eq!(a.snr_ref, SnrRef::Bit);
            }
            other => panic!("wrong command: {other:?}"),
        }

        let cli = Cli::try_parse_from([
            "modem-lab",
            "transmit",
            "--scheme",
            "fsk",
            "--m",
            "16",
            "--fixture",
            "1000",
            "--ebn0",
            "inf",
            "-o",
            "out.wav",
        ])
        .unwrap();
        match cli.command {
            Command::Transmit(a) => {
                assert!(a.ebn0.is_infinite());
                assert_eq!(a.seed, 0);
            }
            other => panic!("wrong command: {other:?}"),
        }

        let cli = Cli::try_parse_from([
            "modem-lab",
            "compare",
            "--scheme-a",
            "psk",
            "--m-a",
            "4",
            "--mode-a",
            "exact",
            "--scheme-b",
            "psk",
            "--m-b",
            "2",
            "--mode-b",
            "exact",
        ])
        .unwrap();
        match cli.command {
            Command::Compare(a) => assert_eq!(a.snr_ref, SnrRef::Symbol),
            other => panic!("wrong command: {other:?}"),
        }

        // Conflicting payload sources are a parse error.
        assert!(Cli::try_parse_from([
            "modem-lab",
            "transmit",
            "--scheme",
            "psk",
            "--m",
            "2",
            "--input",
            "a.wav",
            "--fixture",
            "10",
            "-o",
            "out.wav",
        ])
        .is_err());
    }
}
