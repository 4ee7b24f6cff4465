//! Monte Carlo error-rate estimation with principled stopping, Wilson
//! confidence intervals, SNR sweeps, and analytic reference curves.
//!
//! # Determinism
//!
//! Every estimate is a pure function of its configuration and seed.
//! Each SNR point derives an independent RNG identity from
//! `(seed, scheme, m, axis value, SNR reference)`, so adding, removing,
//! or reordering grid points never perturbs the others. Within a point,
//! batch `b` draws its data from sub-stream `2b` and its noise from
//! `2b + 1`; batches therefore depend only on their index, not on which
//! thread ran them. The parallel path evaluates batches in fixed-size
//! waves and folds the counts in batch order, applying the stop rule to
//! the same prefix the sequential path would see — the two paths return
//! bit-identical estimates, and `--no-default-features` builds simply
//! lose the parallel speedup.
//!
//! # SNR reference
//!
//! The axis value is interpreted per [`SnrRef`]: `Bit` treats it as
//! Eb/N0 in dB and feeds the formulas and the channel `λ = k·Eb/N0`
//! (the physical convention the estimator itself realizes); `Symbol`
//! treats it as Es/N0 directly. Cross-order comparisons in the
//! literature often quote the per-symbol convention, so both are
//! first-class and every artifact records which one was used.

use crate::analysis::{
    self, bits_per_symbol, AnalysisError, BitMapping, ErrorRate, EvalMode, Granularity, Scheme,
    SnrSpec,
};
use crate::channel::{awgn_complex, awgn_vector, NoiseSpec};
use crate::modem::{
    build_psk, build_qam, demodulate_ml, fsk_demodulate, fsk_modulate, modulate, BitStream,
    Constellation, FskSignalSet, ModemError,
};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Two-sided z value for 95% Wilson intervals.
pub const Z_95: f64 = 1.959963984540054;
/// Two-sided z value for 99% Wilson intervals.
pub const Z_99: f64 = 2.5758293035489004;

/// Batches evaluated per scheduling wave on the parallel path. Fixed (not
/// tied to the thread count) so results never depend on the machine.
const WAVE_BATCHES: u64 = 8;

// ---------------------------------------------------------------------------
// Configuration vocabulary
// ---------------------------------------------------------------------------

/// How the dB axis is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SnrRef {
    /// Axis value is Eb/N0; `λ = k·10^(x/10)`.
    #[default]
    Bit,
    /// Axis value is Es/N0; `λ = 10^(x/10)` regardless of order.
    Symbol,
}

impl fmt::Display for SnrRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SnrRef::Bit => "bit",
            SnrRef::Symbol => "symbol",
        })
    }
}

impl FromStr for SnrRef {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bit" => Ok(SnrRef::Bit),
            "symbol" => Ok(SnrRef::Symbol),
            other => Err(format!(
                "unknown SNR reference '{other}' (expected bit or symbol)"
            )),
        }
    }
}

/// Which execution path evaluates batches. Results are identical; only
/// wall-clock time differs. `Parallel` falls back to sequential when the
/// crate is built without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl fmt::Display for Execution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Execution::Sequential => "sequential",
            Execution::Parallel => "parallel",
        })
    }
}

impl FromStr for Execution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sequential" => Ok(Execution::Sequential),
            "parallel" => Ok(Execution::Parallel),
            other => Err(format!(
                "unknown execution '{other}' (expected sequential or parallel)"
            )),
        }
    }
}

/// When to stop accumulating batches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StopCriteria {
    /// Stop once this many bit errors are seen (drives relative CI width).
    pub min_bit_errors: u64,
    /// Hard budget: stop at the first batch boundary at or past this many
    /// bits even with fewer errors.
    pub max_bits: u64,
    /// Bits per batch (rounded down to whole symbols, at least one).
    pub batch_size: u64,
}

impl Default for StopCriteria {
    fn default() -> Self {
        StopCriteria {
            min_bit_errors: 100,
            max_bits: 10_000_000,
            batch_size: 100_000,
        }
    }
}

/// Estimator options beyond the common positional arguments.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub snr_ref: SnrRef,
    pub execution: Execution,
}

/// Which stop criterion ended an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StoppedBy {
    MinErrors,
    MaxBits,
}

/// Errors from estimation and curve construction.
#[derive(Debug, Clone, thiserror::Error)]
pub enum MonteCarloError {
    #[error("scheme {scheme} does not support m = {m} (supported: {supported:?})")]
    Unsupported {
        scheme: Scheme,
        m: u32,
        supported: &'static [u32],
    },
    #[error("mode {mode} is not defined for scheme {scheme}")]
    UnsupportedMode { scheme: Scheme, mode: EvalMode },
    #[error("SNR grid must be non-empty and strictly increasing, with NaN excluded")]
    InvalidGrid,
    #[error("stop criteria fields must all be positive")]
    InvalidStopCriteria,
    #[error("SNR axis value must not be NaN or -inf, got {0}")]
    InvalidSnr(f64),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Modem(#[from] ModemError),
}

/// Orders each scheme supports end to end (constellation + estimator).
pub fn supported_orders(scheme: Scheme) -> &'static [u32] {
    match scheme {
        Scheme::Psk => &[2, 4, 8, 16, 32, 64],
        Scheme::Qam => &[2, 4, 16, 64],
        Scheme::Fsk => &[2, 4, 8, 16, 32],
    }
}

pub fn is_supported(scheme: Scheme, m: u32) -> bool {
    supported_orders(scheme).contains(&m)
}

/// The 0..=12 dB grid in 1 dB steps used throughout the experiments.
pub fn default_grid() -> Vec<f64> {
    (0..=12).map(f64::from).collect()
}

// ---------------------------------------------------------------------------
// Wilson score interval
// ---------------------------------------------------------------------------

/// Two-sided Wilson score interval for a binomial proportion. Well
/// behaved at zero and small error counts, unlike the normal
/// approximation.
pub fn wilson_interval(errors: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // At the degenerate proportions the bound is exactly the proportion;
    // don't let rounding residue pull it off 0 or 1.
    let lo = if errors == 0 {
        0.0
    } else {
        (center - half).clamp(0.0, 1.0)
    };
    let hi = if errors == trials {
        1.0
    } else {
        (center + half).clamp(0.0, 1.0)
    };
    (lo, hi)
}

// ---------------------------------------------------------------------------
// Estimates
// ---------------------------------------------------------------------------

/// One simulated error-rate measurement with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BerEstimate {
    pub scheme: Scheme,
    pub m: u32,
    /// The axis value as requested (interpreted per `snr_ref`).
    pub eb_n0_db: f64,
    pub snr_ref: SnrRef,
    pub bits_sent: u64,
    pub bit_errors: u64,
    /// `bit_errors / bits_sent`.
    pub ber: f64,
    /// 95% Wilson interval on the bit error rate.
    pub ci_low: f64,
    pub ci_high: f64,
    pub symbols_sent: u64,
    pub symbol_errors: u64,
    /// `symbol_errors / symbols_sent`.
    pub ser: f64,
    /// 95% Wilson interval on the symbol error rate.
    pub ser_ci_low: f64,
    pub ser_ci_high: f64,
    pub stopped_by: StoppedBy,
    pub seed: u64,
}

impl BerEstimate {
    /// Value and 95% interval at the requested granularity.
    pub fn at(&self, granularity: Granularity) -> (f64, f64, f64) {
        match granularity {
            Granularity::Bit => (self.ber, self.ci_low, self.ci_high),
            Granularity::Symbol => (self.ser, self.ser_ci_low, self.ser_ci_high),
        }
    }

    /// Error and trial counts at the requested granularity, for
    /// recomputing intervals at other confidence levels.
    pub fn counts(&self, granularity: Granularity) -> (u64, u64) {
        match granularity {
            Granularity::Bit => (self.bit_errors, self.bits_sent),
            Granularity::Symbol => (self.symbol_errors, self.symbols_sent),
        }
    }
}

// ---------------------------------------------------------------------------
// The simulator
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct BatchCounts {
    bits: u64,
    bit_errors: u64,
    symbols: u64,
    symbol_errors: u64,
}

impl std::ops::AddAssign for BatchCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.bits += rhs.bits;
        self.bit_errors += rhs.bit_errors;
        self.symbols += rhs.symbols;
        self.symbol_errors += rhs.symbol_errors;
    }
}

enum System {
    Linear(Constellation),
    Orthogonal(FskSignalSet),
}

impl System {
    fn build(scheme: Scheme, m: u32) -> Result<Self, MonteCarloError> {
        if !is_supported(scheme, m) {
            return Err(MonteCarloError::Unsupported {
                scheme,
                m,
                supported: supported_orders(scheme),
            });
        }
        Ok(match scheme {
            Scheme::Psk => System::Linear(build_psk(m)?),
            Scheme::Qam => System::Linear(build_qam(m)?),
            Scheme::Fsk => System::Orthogonal(FskSignalSet::new(m)?),
        })
    }

    fn k(&self) -> u32 {
        match self {
            System::Linear(c) => c.k,
            System::Orthogonal(s) => s.k,
        }
    }

    /// Simulate one batch. Depends only on `(point_seed, batch)`, never
    /// on which thread runs it or what ran before.
    fn run_batch(&self, n0: f64, point_seed: u64, batch: u64, symbols: u64) -> BatchCounts {
        let k = self.k();
        let n_bits = symbols * k as u64;
        let mut data_rng = ChaCha8Rng::seed_from_u64(point_seed);
        data_rng.set_stream(2 * batch);
        let tx = BitStream::from_bits((0..n_bits).map(|_| data_rng.random()).collect());
        let noise = NoiseSpec {
            n0,
            seed: point_seed,
            stream: 2 * batch + 1,
        };

        let rx = match self {
            System::Linear(c) => {
                let symbols = modulate(&tx, c).expect("batch bits are whole symbols");
                demodulate_ml(&awgn_complex(&symbols, &noise), c)
            }
            System::Orthogonal(s) => {
                let vectors = fsk_modulate(&tx, s).expect("batch bits are whole symbols");
                fsk_demodulate(&awgn_vector(&vectors, &noise), s)
                    .expect("noise preserves vector shape")
            }
        };

        let mut counts = BatchCounts {
            bits: n_bits,
            symbols,
            ..BatchCounts::default()
        };
        let chunk = k as usize;
        for (a, b) in tx.bits.chunks_exact(chunk).zip(rx.bits.chunks_exact(chunk)) {
            let wrong = a.iter().zip(b).filter(|(x, y)| x != y).count() as u64;
            counts.bit_errors += wrong;
            counts.symbol_errors += (wrong > 0) as u64;
        }
        counts
    }
}

/// Fold batches in index order until a stop criterion fires; returns the
/// accumulated counts and which criterion ended the run. Both execution
/// paths funnel through the same per-batch function and the same fold.
fn accumulate(
    system: &System,
    n0: f64,
    point_seed: u64,
    symbols_per_batch: u64,
    stop: &StopCriteria,
    execution: Execution,
) -> (BatchCounts, StoppedBy) {
    let mut total = BatchCounts::default();
    let mut next_batch = 0u64;
    loop {
        let wave: Vec<BatchCounts> = run_wave(
            system,
            n0,
            point_seed,
            next_batch,
            symbols_per_batch,
            execution,
        );
        for counts in wave {
            total += counts;
            if total.bit_errors >= stop.min_bit_errors {
                return (total, StoppedBy::MinErrors);
            }
            if total.bits >= stop.max_bits {
                return (total, StoppedBy::MaxBits);
            }
        }
        next_batch += WAVE_BATCHES;
    }
}

#[cfg(feature = "parallel")]
fn run_wave(
    system: &System,
    n0: f64,
    point_seed: u64,
    first_batch: u64,
    symbols_per_batch: u64,
    execution: Execution,
) -> Vec<BatchCounts> {
    use rayon::prelude::*;
    match execution {
        Execution::Sequential => (first_batch..first_batch + WAVE_BATCHES)
            .map(|b| system.run_batch(n0, point_seed, b, symbols_per_batch))
            .collect(),
        Execution::Parallel => (first_batch..first_batch + WAVE_BATCHES)
            .into_par_iter()
            .map(|b| system.run_batch(n0, point_seed, b, symbols_per_batch))
            .collect(),
    }
}

#[cfg(not(feature = "parallel"))]
fn run_wave(
    system: &System,
    n0: f64,
    point_seed: u64,
    first_batch: u64,
    symbols_per_batch: u64,
    _execution: Execution,
) -> Vec<BatchCounts> {
    (first_batch..first_batch + WAVE_BATCHES)
        .map(|b| system.run_batch(n0, point_seed, b, symbols_per_batch))
        .collect()
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive one point's RNG identity from everything that distinguishes it.
fn point_seed(seed: u64, scheme: Scheme, m: u32, axis_db: f64, snr_ref: SnrRef) -> u64 {
    let scheme_tag = match scheme {
        Scheme::Psk => 1u64,
        Scheme::Qam => 2,
        Scheme::Fsk => 3,
    };
    let ref_tag = match snr_ref {
        SnrRef::Bit => 0u64,
        SnrRef::Symbol => 1,
    };
    [seed, scheme_tag, m as u64, axis_db.to_bits(), ref_tag]
        .iter()
        .fold(0x243F_6A88_85A3_08D3, |acc, &part| splitmix64(acc ^ part))
}

fn axis_to_es_n0(axis_db: f64, k: u32, snr_ref: SnrRef) -> Result<f64, MonteCarloError> {
    if axis_db.is_nan() || axis_db == f64::NEG_INFINITY {
        return Err(MonteCarloError::InvalidSnr(axis_db));
    }
    Ok(match snr_ref {
        SnrRef::Bit => SnrSpec::new(axis_db, k)?.es_n0_linear(),
        SnrRef::Symbol => 10f64.powf(axis_db / 10.0),
    })
}

/// Estimate the error rate of one (scheme, m, SNR) operating point:
/// random bits → modulate → AWGN → ML demodulation, counted in batches
/// until the stop rule fires. Defaults to the per-bit SNR reference and
/// the parallel execution path.
pub fn estimate_ber(
    scheme: Scheme,
    m: u32,
    eb_n0_db: f64,
    stop: &StopCriteria,
    seed: u64,
) -> Result<BerEstimate, MonteCarloError> {
    estimate_ber_with(scheme, m, eb_n0_db, stop, seed, &RunOptions::default())
}

/// [`estimate_ber`] with an explicit SNR reference and execution path.
pub fn estimate_ber_with(
    scheme: Scheme,
    m: u32,
    eb_n0_db: f64,
    stop: &StopCriteria,
    seed: u64,
    options: &RunOptions,
) -> Result<BerEstimate, MonteCarloError> {
    if stop.min_bit_errors == 0 || stop.max_bits == 0 || stop.batch_size == 0 {
        return Err(MonteCarloError::InvalidStopCriteria);
    }
    let system = System::build(scheme, m)?;
    let k = system.k();
    let es_n0 = axis_to_es_n0(eb_n0_db, k, options.snr_ref)?;
    // Unit-energy signal sets: n0 = Es / (Es/N0) = 1/λ; 1/∞ = 0 is the
    // noiseless pass-through.
    let n0 = 1.0 / es_n0;
    let symbols_per_batch = (stop.batch_size / k as u64).max(1);
    let pseed = point_seed(seed, scheme, m, eb_n0_db, options.snr_ref);

    let (counts, stopped_by) = accumulate(
        &system,
        n0,
        pseed,
        symbols_per_batch,
        stop,
        options.execution,
    );

    let (ci_low, ci_high) = wilson_interval(counts.bit_errors, counts.bits, Z_95);
    let (ser_ci_low, ser_ci_high) = wilson_interval(counts.symbol_errors, counts.symbols, Z_95);
    Ok(BerEstimate {
        scheme,
        m,
        eb_n0_db,
        snr_ref: options.snr_ref,
        bits_sent: counts.bits,
        bit_errors: counts.bit_errors,
        ber: counts.bit_errors as f64 / counts.bits as f64,
        ci_low,
        ci_high,
        symbols_sent: counts.symbols,
        symbol_errors: counts.symbol_errors,
        ser: counts.symbol_errors as f64 / counts.symbols as f64,
        ser_ci_low,
        ser_ci_high,
        stopped_by,
        seed,
    })
}

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

/// Analytic route or simulation, as labeled in output artifacts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveMode {
    Analytic(EvalMode),
    MonteCarlo,
}

impl fmt::Display for CurveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveMode::Analytic(mode) => mode.fmt(f),
            CurveMode::MonteCarlo => f.write_str("montecarlo"),
        }
    }
}

impl FromStr for CurveMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("montecarlo") {
            Ok(CurveMode::MonteCarlo)
        } else {
            EvalMode::from_str(s).map(CurveMode::Analytic).map_err(|_| {
                format!(
                    "unknown mode '{s}' (expected exact, approx1, approx2, approx3, union, or montecarlo)"
                )
            })
        }
    }
}

impl Serialize for CurveMode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// One curve sample. Confidence bounds are present for Monte Carlo
/// points and absent for analytic ones; `literal` marks values from a
/// formula evaluated outside its native validity (odd-order QAM grids).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub eb_n0_db: f64,
    pub value: f64,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub literal: bool,
}

/// An error-rate curve over a strictly increasing SNR grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BerCurve {
    pub scheme: Scheme,
    pub m: u32,
    pub mode: CurveMode,
    pub granularity: Granularity,
    pub snr_ref: SnrRef,
    /// Present for Monte Carlo curves; analytic curves have no seed.
    pub seed: Option<u64>,
    pub points: Vec<CurvePoint>,
}

fn check_grid(grid: &[f64]) -> Result<(), MonteCarloError> {
    if grid.is_empty() || grid.iter().any(|x| x.is_nan()) {
        return Err(MonteCarloError::InvalidGrid);
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(MonteCarloError::InvalidGrid);
    }
    Ok(())
}

/// Options shared by curve constructors.
#[derive(Debug, Clone, Copy, Default)]
pub struct CurveOptions {
    pub granularity: Granularity,
    pub snr_ref: SnrRef,
}

/// Sweep the estimator over an SNR grid (bit granularity, default
/// options).
pub fn sweep(
    scheme: Scheme,
    m: u32,
    grid: &[f64],
    stop: &StopCriteria,
    seed: u64,
) -> Result<BerCurve, MonteCarloError> {
    sweep_with(
        scheme,
        m,
        grid,
        stop,
        seed,
        &CurveOptions::default(),
        Execution::default(),
    )
}

/// [`sweep`] with explicit granularity, SNR reference, and execution.
pub fn sweep_with(
    scheme: Scheme,
    m: u32,
    grid: &[f64],
    stop: &StopCriteria,
    seed: u64,
    options: &CurveOptions,
    execution: Execution,
) -> Result<BerCurve, MonteCarloError> {
    check_grid(grid)?;
    let run = RunOptions {
        snr_ref: options.snr_ref,
        execution,
    };
    let mut points = Vec::with_capacity(grid.len());
    for &db in grid {
        let est = estimate_ber_with(scheme, m, db, stop, seed, &run)?;
        let (value, lo, hi) = est.at(options.granularity);
        points.push(CurvePoint {
            eb_n0_db: db,
            value,
            ci_low: Some(lo),
            ci_high: Some(hi),
            literal: false,
        });
    }
    Ok(BerCurve {
        scheme,
        m,
        mode: CurveMode::MonteCarlo,
        granularity: options.granularity,
        snr_ref: options.snr_ref,
        seed: Some(seed),
        points,
    })
}

/// Evaluate one analytic operating point, before any granularity
/// conversion. Binary "QAM" has no grid of its own: its exact form is
/// the binary PSK exact form (matching the constellation alias), while
/// the approximation modes evaluate the printed square-grid formulas
/// literally and carry the literal flag.
fn analytic_symbol_rate(
    scheme: Scheme,
    m: u32,
    mode: EvalMode,
    es_n0: f64,
) -> Result<ErrorRate, MonteCarloError> {
    let rate = match (scheme, mode) {
        (Scheme::Psk, EvalMode::Exact) => analysis::psk_ser_exact(m, es_n0)?,
        (Scheme::Psk, EvalMode::Approx1) => analysis::psk_ber_union(m, es_n0)?,
        (Scheme::Psk, EvalMode::Approx2) => analysis::psk_ber_large_m(m, es_n0)?,
        (Scheme::Qam, EvalMode::Exact) if m == 2 => ErrorRate {
            scheme: Scheme::Qam,
            ..analysis::psk_ser_exact(2, es_n0)?
        },
        (Scheme::Qam, EvalMode::Exact) => analysis::qam_ser_exact(m, es_n0)?,
        (Scheme::Qam, EvalMode::Approx1) => analysis::qam_ber_approx1(m, es_n0)?,
        (Scheme::Qam, EvalMode::Approx2) => analysis::qam_ber_approx2(m, es_n0)?,
        (Scheme::Qam, EvalMode::Approx3) => analysis::qam_ber_large_m(m, es_n0)?,
        (Scheme::Fsk, EvalMode::Exact) => analysis::fsk_ser_exact(m, es_n0)?,
        (Scheme::Fsk, EvalMode::Union) => analysis::fsk_ber_union(m, es_n0)?,
        _ => return Err(MonteCarloError::UnsupportedMode { scheme, mode }),
    };
    Ok(rate)
}

/// The symbol→bit mapping each scheme's reporting uses.
pub fn default_mapping(scheme: Scheme) -> BitMapping {
    match scheme {
        Scheme::Psk | Scheme::Qam => BitMapping::Gray,
        Scheme::Fsk => BitMapping::Orthogonal,
    }
}

/// Evaluate an analytic error-rate curve (bit granularity, per-bit SNR
/// reference).
pub fn analytic_curve(
    scheme: Scheme,
    m: u32,
    grid: &[f64],
    mode: EvalMode,
) -> Result<BerCurve, MonteCarloError> {
    analytic_curve_with(scheme, m, grid, mode, &CurveOptions::default())
}

/// [`analytic_curve`] with explicit granularity and SNR reference.
pub fn analytic_curve_with(
    scheme: Scheme,
    m: u32,
    grid: &[f64],
    mode: EvalMode,
    options: &CurveOptions,
) -> Result<BerCurve, MonteCarloError> {
    check_grid(grid)?;
    if !is_supported(scheme, m) {
        return Err(MonteCarloError::Unsupported {
            scheme,
            m,
            supported: supported_orders(scheme),
        });
    }
    let k = bits_per_symbol(m)?;
    let mut points = Vec::with_capacity(grid.len());
    for &db in grid {
        let es_n0 = axis_to_es_n0(db, k, options.snr_ref)?;
        // The formulas reject an infinite argument; the limit is 0.
        let rate = if es_n0.is_infinite() {
            let mut r = analytic_symbol_rate(scheme, m, mode, 1.0)?;
            r.value = 0.0;
            r.raw_value = 0.0;
            r
        } else {
            analytic_symbol_rate(scheme, m, mode, es_n0)?
        };
        let reported = match options.granularity {
            Granularity::Symbol => rate,
            Granularity::Bit => analysis::ser_to_ber(&rate, default_mapping(scheme))?,
        };
        points.push(CurvePoint {
            eb_n0_db: db,
            value: reported.value,
            ci_low: None,
            ci_high: None,
            literal: reported.literal_evaluation,
        });
    }
    Ok(BerCurve {
        scheme,
        m,
        mode: CurveMode::Analytic(mode),
        granularity: options.granularity,
        snr_ref: options.snr_ref,
        seed: None,
        points,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
