//! Closed-form and quadrature-based error-probability models for M-ary
//! PSK, square-grid QAM, and orthogonal FSK on the AWGN channel.
//!
//! Every evaluator takes the per-symbol signal-to-noise ratio
//! `λ = Es/N0` (linear) explicitly. Callers working on a per-bit axis
//! convert once through [`SnrSpec`], which pins `Es/N0 = k · Eb/N0` for
//! `k = log2(M)` bits per symbol; keeping the conversion at one boundary
//! avoids silent factor-of-k mistakes between formulas.
//!
//! Each evaluator returns an [`ErrorRate`] carrying the clamped value, the
//! raw pre-clamp value, and enough metadata (scheme, order, mode,
//! granularity) for downstream reporting. Approximations can exceed 1 at
//! low SNR; they are clamped to `[0, 1]` with the raw value preserved.

use crate::numerics::{
    integrate_finite, integrate_gaussian_weighted, q, QuadratureError, QuadratureSpec,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

// ---------------------------------------------------------------------------
// Shared vocabulary
// ---------------------------------------------------------------------------

/// Modulation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Psk,
    Qam,
    Fsk,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Psk => "psk",
            Scheme::Qam => "qam",
            Scheme::Fsk => "fsk",
        })
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "psk" => Ok(Scheme::Psk),
            "qam" => Ok(Scheme::Qam),
            "fsk" => Ok(Scheme::Fsk),
            other => Err(format!(
                "unknown scheme '{other}' (expected psk, qam, or fsk)"
            )),
        }
    }
}

/// Which probability a value counts: symbol decisions or individual bits.
/// Reporting defaults to bits, the axis the figures of merit use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Symbol,
    #[default]
    Bit,
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Granularity::Symbol => "symbol",
            Granularity::Bit => "bit",
        })
    }
}

impl FromStr for Granularity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "symbol" => Ok(Granularity::Symbol),
            "bit" => Ok(Granularity::Bit),
            other => Err(format!(
                "unknown granularity '{other}' (expected symbol or bit)"
            )),
        }
    }
}

/// Which analytic route produced a value.
///
/// `Exact` is the reference integral or closed form; `Approx1`..`Approx3`
/// are progressively cruder high-SNR shortcuts in the order they tighten
/// (union bound, then small-angle / large-order variants); `Union` is the
/// orthogonal-signalling union bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    Exact,
    Approx1,
    Approx2,
    Approx3,
    Union,
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalMode::Exact => "exact",
            EvalMode::Approx1 => "approx1",
            EvalMode::Approx2 => "approx2",
            EvalMode::Approx3 => "approx3",
            EvalMode::Union => "union",
        })
    }
}

impl FromStr for EvalMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(EvalMode::Exact),
            "approx1" => Ok(EvalMode::Approx1),
            "approx2" => Ok(EvalMode::Approx2),
            "approx3" => Ok(EvalMode::Approx3),
            "union" => Ok(EvalMode::Union),
            other => Err(format!(
                "unknown mode '{other}' (expected exact, approx1, approx2, approx3, or union)"
            )),
        }
    }
}

/// How symbol labels map to bits, for symbol-to-bit rate conversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BitMapping {
    /// Gray labeling: one symbol error flips one of `k` bits at high SNR,
    /// so `BER ≈ SER / k`.
    Gray,
    /// Orthogonal signalling: a symbol error lands uniformly on the other
    /// `M - 1` symbols, flipping `M/2` of `k` bits on average, so
    /// `BER = SER · (M/2)/(M-1)`.
    Orthogonal,
}

// ---------------------------------------------------------------------------
// Error type and validation
// ---------------------------------------------------------------------------

/// Errors from the analytic evaluators.
#[derive(Debug, Clone, thiserror::Error)]
pub enum AnalysisError {
    /// The modulation order was not a power of two at least 2.
    #[error("modulation order must be a power of two >= 2, got {0}")]
    InvalidOrder(u32),
    /// The SNR argument was negative, NaN, or infinite.
    #[error("Es/N0 must be finite and non-negative, got {0}")]
    InvalidSnr(f64),
    /// Bits per symbol must be at least 1.
    #[error("bits per symbol must be >= 1, got {0}")]
    InvalidBitsPerSymbol(u32),
    /// A conversion needed symbol granularity but was given bit granularity.
    #[error("expected a symbol-granularity rate, got bit granularity")]
    WrongGranularity,
    /// The underlying quadrature failed.
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Validate `m` and return `k = log2(m)`.
pub fn bits_per_symbol(m: u32) -> Result<u32, AnalysisError> {
    if m >= 2 && m.is_power_of_two() {
        Ok(m.trailing_zeros())
    } else {
        Err(AnalysisError::InvalidOrder(m))
    }
}

fn check_es_n0(es_n0: f64) -> Result<(), AnalysisError> {
    if es_n0.is_finite() && es_n0 >= 0.0 {
        Ok(())
    } else {
        Err(AnalysisError::InvalidSnr(es_n0))
    }
}

// ---------------------------------------------------------------------------
// SNR bookkeeping
// ---------------------------------------------------------------------------

/// A point on the per-bit SNR axis together with the symbol size, fixing
/// the per-bit/per-symbol conversion in one place.
///
/// `es_n0_linear = k · eb_n0_linear` exactly. `eb_n0_db = +∞` is the
/// noiseless marker used by the transmit pipeline; every other value must
/// be finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrSpec {
    /// Per-bit SNR in dB (`+∞` means a noiseless channel).
    pub eb_n0_db: f64,
    /// Bits per symbol, `k = log2(M)`.
    pub k: u32,
}

impl SnrSpec {
    /// Build a spec, rejecting NaN, `-∞`, and `k = 0`.
    pub fn new(eb_n0_db: f64, k: u32) -> Result<Self, AnalysisError> {
        if k == 0 {
            return Err(AnalysisError::InvalidBitsPerSymbol(k));
        }
        if eb_n0_db.is_nan() || eb_n0_db == f64::NEG_INFINITY {
            return Err(AnalysisError::InvalidSnr(eb_n0_db));
        }
        Ok(SnrSpec { eb_n0_db, k })
    }

    /// Linear per-bit SNR, `10^(eb_n0_db / 10)`.
    pub fn eb_n0_linear(&self) -> f64 {
        10f64.powf(self.eb_n0_db / 10.0)
    }

    /// Linear per-symbol SNR, exactly `k` times the per-bit value.
    pub fn es_n0_linear(&self) -> f64 {
        self.k as f64 * self.eb_n0_linear()
    }

    /// True in the noiseless (`+∞` dB) mode.
    pub fn is_infinite(&self) -> bool {
        self.eb_n0_db == f64::INFINITY
    }
}

// ---------------------------------------------------------------------------
// Error-rate values
// ---------------------------------------------------------------------------

/// One evaluated error probability with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorRate {
    /// The probability, clamped to `[0, 1]`.
    pub value: f64,
    /// The formula output before clamping (approximations can exceed 1).
    pub raw_value: f64,
    /// Symbol- or bit-level probability.
    pub granularity: Granularity,
    /// Which analytic route produced it.
    pub mode: EvalMode,
    pub scheme: Scheme,
    pub m: u32,
    /// Set when a square-grid QAM formula was evaluated at an odd `k`
    /// (no square grid exists); the number is the literal formula value,
    /// outside the formula's native validity.
    pub literal_evaluation: bool,
}

fn rate(scheme: Scheme, m: u32, mode: EvalMode, raw: f64) -> ErrorRate {
    ErrorRate {
        value: raw.clamp(0.0, 1.0),
        raw_value: raw,
        granularity: Granularity::Symbol,
        mode,
        scheme,
        m,
        literal_evaluation: false,
    }
}

// ---------------------------------------------------------------------------
// M-ary PSK
// ---------------------------------------------------------------------------

/// Exact MPSK symbol error probability via the received-phase density:
/// one minus the probability that the noisy phase stays within
/// `±π/M` of the transmitted point.
///
/// The density integrand is evaluated in the regrouped form
/// `e^{-λ} + √(4πλ)·cosθ·e^{-λ sin²θ}·(1 - Q(√(2λ)·cosθ))`, which is
/// algebraically identical to the textbook `e^{-λ}·[1 + …·e^{λ cos²θ}·…]`
/// grouping but cannot overflow at large λ.
pub fn psk_ser_exact(m: u32, es_n0: f64) -> Result<ErrorRate, AnalysisError> {
    bits_per_symbol(m)?;
    check_es_n0(es_n0)?;
    let lam = es_n0;
    let amp = (4.0 * PI * lam).sqrt();
    let integrand = move |theta: f64| {
        let c = theta.cos();
        let s = theta.sin();
        (-lam).exp() + amp * c * (-lam * s * s).exp() * (1.0 - q((2.0 * lam).sqrt() * c))
    };
    let half_angle = PI / m as f64;
    let spec = QuadratureSpec::default();
    let inside = integrate_finite(integrand, -half_angle, half_angle, &spec)?;
    Ok(rate(
        Scheme::Psk,
        m,
        EvalMode::Exact,
        1.0 - inside.value / (2.0 * PI),
    ))
}

/// Exact MPSK symbol error probability on an independent route: twice the
/// pairwise tail `Q(√(2λ sin²(π/M)))` minus the probability of the wedge
/// the two half-plane events double-count.
///
/// The wedge correction is `(1/π)·∫ exp(-λ sin²(π/M) / cos²θ) dθ` over
/// `θ ∈ [π/2 - π/M, π/2]`. That lower limit is forced by the boundary
/// cases: at M = 2 the correction must span `[0, π/2]` so the whole
/// expression collapses to the antipodal result `Q(√(2λ))`, and at λ = 0
/// the correction is `1/M`, giving `1 - 1/M`.
pub fn psk_ser_craig(m: u32, es_n0: f64) -> Result<ErrorRate, AnalysisError> {
    bits_per_symbol(m)?;
    check_es_n0(es_n0)?;
    let c = es_n0 * (PI / m as f64).sin().powi(2);
    let pairwise = 2.0 * q((2.0 * c).sqrt());
    let spec = QuadratureSpec::default();
    let wedge = integrate_finite(
        move |theta: f64| {
            let cc = theta.cos();
            (-c / (cc * cc)).exp()
        },
        PI / 2.0 - PI / m as f64,
        PI / 2.0,
        &spec,
    )?;
    Ok(rate(
        Scheme::Psk,
        m,
        EvalMode::Exact,
        pairwise - wedge.value / PI,
    ))
}

/// MPSK union bound, `2·Q(√(2λ sin²(π/M)))`: both nearest-neighbour
/// half-plane events counted without the overlap correction.
pub fn psk_ber_union(m: u32, es_n0: f64) -> Result<ErrorRate, AnalysisError> {
    bits_per_symbol(m)?;
    check_es_n0(es_n0)?;
    let arg = (2.0 * es_n0).sqrt() * (PI / m as f64).sin();
    Ok(rate(Scheme::Psk, m, EvalMode::Approx1, 2.0 * q(arg)))
}

/// Large-M MPSK approximation, `2·Q(√(2λ π²/M²))`: the union bound with
/// `sin(π/M)` replaced by its small-angle limit `π/M`.
pub fn psk_ber_large_m(m: u32, es_n0: f64) -> Result<ErrorRate, AnalysisError> {
    bits_per_symbol(m)?;
    check_es_n0(es_n0)?;
    let arg = (2.0 * es_n0).sqrt() * PI / m as f64;
    Ok(rate(Scheme::Psk, m, EvalMode::Approx2, 2.0 * q(arg)))
}

// ---------------------------------------------------------------------------
// Square-grid M-ary QAM
// ---------------------------------------------------------------------------

fn qam_rate(m: u32, k: u32, mode: EvalMode, raw: f64) -> ErrorRate {
    let mut r = rate(Scheme::Qam, m, mode, raw);
    // Square-grid formulas assume an integer side √M; odd k has none, so
    // the value is a literal evaluation and flagged as such.
    r.literal_evaluation = k % 2 == 1;
    r
}

/// Exact square-grid MQAM symbol error probability,
/// `1 - [1 - 2(1 - 1/√M)·Q(√(3λ/(M-1)))]²`, computed as `x·(2 - x)` to
/// avoid cancellation at high SNR.
pub fn qam_ser_exact(m: u32, es_n0: f64) -> Result<ErrorRate, AnalysisError> {
    let k = bits_per_symbol(m)?;
    check_es_n0(es_n0)?;
    let x = 2.0 * (1.0 - 1.0 / (m as f64).sqrt()) * q((3.0 * es_n0 / (m as f64 - 1.0)).sqrt());
    Ok(qam_rate(m, k, EvalMode::Exact, x * (2.0 - x)))
}

/// First MQAM approximation, `4(1 - 1/√M)·Q(√(3λ/(M-1)))`: the exact
/// expression with the squared cross term dropped.
pub fn qam_ber_approx1(m: u32, es_n0: f64) -> Result<ErrorRate, AnalysisError> {
    let k = bits_per_symbol(m)?;
    check_es_n0(es_n0)?;
    let raw = 4.0 * (1.0 - 1.0 / (m as f64).sqrt()) * q((3.0 * es_n0 / (m as f64 - 1.0)).sqrt());
    Ok(qam_rate(m, k, EvalMode::Approx1, raw))
}

/// Second MQAM approximation, `2·(M/(M-1))·Q(√(6λ/(M²-1)))`.
pub fn qam_ber_approx2(m: u32, es_n0: f64) -> Result<ErrorRate, AnalysisError> {
    let k = bits_per_symbol(m)?;
    check_es_n0(es_n0)?;
    let mf = m as f64;
    let raw = 2.0 * (mf / (mf - 1.0)) * q((6.0 * es_n0 / (mf * mf - 1.0)).sqrt());
    Ok(qam_rate(m, k, EvalMode::Approx2, raw))
}

/// Large-M MQAM approximation, `2·Q(√(6λ/M²))`.
pub fn qam_ber_large_m(m: u32, es_n0: f64) -> Result<ErrorRate, AnalysisError> {
    bits_per_symbol(m)?;
    check_es_n0(es_n0)?;
    let mf = m as f64;
    Ok(rate(
        Scheme::Qam,
        m,
        EvalMode::Approx3,
        2.0 * q((6.0 * es_n0 / (mf * mf)).sqrt()),
    ))
}

// ---------------------------------------------------------------------------
// Orthogonal M-ary FSK
// ---------------------------------------------------------------------------

/// Exact orthogonal MFSK symbol error probability: the chance that any of
/// the `M - 1` idle correlator outputs beats the signal branch,
/// `1 - ∫ φ(y - √(2λ)) · [1 - Q(y)]^{M-1} dy`.
///
/// Evaluated as the complement `∫ φ(u) · (1 - [1 - Q(u + √(2λ))]^{M-1}) du`
/// (substituting `u = y - √(2λ)`), with the bracket computed through
/// `expm1`/`ln_1p`; this is the same integral without the `1 - (1 - ε)`
/// cancellation that would floor the result near the quadrature tolerance
/// at high SNR.
pub fn fsk_ser_exact(m: u32, es_n0: f64) -> Result<ErrorRate, AnalysisError> {
    bits_per_symbol(m)?;
    check_es_n0(es_n0)?;
    let c = (2.0 * es_n0).sqrt();
    let exponent = (m - 1) as f64;
    let miss = move |u: f64| {
        let tail = q(u + c);
        if tail >= 1.0 {
            1.0
        } else {
            -f64::exp_m1(exponent * f64::ln_1p(-tail))
        }
    };
    let spec = QuadratureSpec::default();
    let integral = integrate_gaussian_weighted(miss, 0.0, &spec)?;
    Ok(rate(Scheme::Fsk, m, EvalMode::Exact, integral.value))
}

/// Orthogonal MFSK union-style bound, `(M·log2(M)/2)·Q(√λ)`: the pairwise
/// tail `Q(√λ)` scaled by `M·k/2`. Since `M·k/2 ≥ M - 1` for every
/// `M = 2^k`, this dominates the exact probability at equal λ.
pub fn fsk_ber_union(m: u32, es_n0: f64) -> Result<ErrorRate, AnalysisError> {
    let k = bits_per_symbol(m)?;
    check_es_n0(es_n0)?;
    let raw = (m as f64 * k as f64 / 2.0) * q(es_n0.sqrt());
    Ok(rate(Scheme::Fsk, m, EvalMode::Union, raw))
}

// ---------------------------------------------------------------------------
// Conversions and qualitative trade-offs
// ---------------------------------------------------------------------------

/// Convert a symbol error rate to a bit error rate under the given label
/// mapping. Gray divides by `k`; orthogonal scales by `(M/2)/(M-1)`.
pub fn ser_to_ber(ser: &ErrorRate, mapping: BitMapping) -> Result<ErrorRate, AnalysisError> {
    if ser.granularity != Granularity::Symbol {
        return Err(AnalysisError::WrongGranularity);
    }
    let k = bits_per_symbol(ser.m)?;
    let factor = match mapping {
        BitMapping::Gray => 1.0 / k as f64,
        BitMapping::Orthogonal => (ser.m as f64 / 2.0) / (ser.m as f64 - 1.0),
    };
    Ok(ErrorRate {
        value: (ser.value * factor).clamp(0.0, 1.0),
        raw_value: ser.raw_value * factor,
        granularity: Granularity::Bit,
        ..*ser
    })
}

/// How transmit-power demands move as the order grows, at a fixed error
/// rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PowerTrend {
    /// Denser constellations need more energy per symbol as M grows.
    GrowsWithOrder,
    /// Orthogonal signalling holds roughly constant power and pays in
    /// bandwidth instead.
    RoughlyFlat,
}

/// Qualitative bandwidth/power trade-off for one (scheme, order) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tradeoff {
    pub scheme: Scheme,
    pub m: u32,
    /// Occupied bandwidth per bit, relative to binary PSK. Single-carrier
    /// PSK/QAM keep one complex dimension regardless of order; orthogonal
    /// FSK needs `M` tones to carry `log2(M)` bits, so `M/log2(M)`.
    pub relative_bandwidth: f64,
    pub power_trend: PowerTrend,
}

/// Fixed bandwidth/power trade-off table.
pub fn tradeoff_table(scheme: Scheme, m: u32) -> Result<Tradeoff, AnalysisError> {
    let k = bits_per_symbol(m)?;
    let (relative_bandwidth, power_trend) = match scheme {
        Scheme::Psk | Scheme::Qam => (1.0, PowerTrend::GrowsWithOrder),
        Scheme::Fsk => (m as f64 / k as f64, PowerTrend::RoughlyFlat),
    };
    Ok(Tradeoff {
        scheme,
        m,
        relative_bandwidth,
        power_trend,
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
