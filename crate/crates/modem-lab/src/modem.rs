//! Constellation construction, bit/symbol mapping, and maximum-likelihood
//! demodulation.
//!
//! PSK and QAM live on the complex plane as unit-average-energy point sets
//! with Gray labels, so one symbol error at high SNR costs one bit. FSK is
//! the M-dimensional orthogonal vector channel: symbol `i` is `√Es·eᵢ` and
//! detection is the argmax correlator. Every decision rule breaks ties by
//! lowest index, which keeps simulations reproducible bit for bit.

use crate::analysis::Scheme;
use num_complex::Complex64;

/// Largest supported constellation order. Generous next to anything the
/// estimators exercise, but keeps label tables and exhaustive invariant
/// checks cheap.
pub const MAX_ORDER: u32 = 4096;

/// Errors from constellation construction and (de)modulation.
#[derive(Debug, Clone, thiserror::Error)]
pub enum ModemError {
    /// Order must be a power of two in `2..=MAX_ORDER`.
    #[error("modulation order must be a power of two in 2..={MAX_ORDER}, got {0}")]
    InvalidOrder(u32),
    /// Square-grid QAM needs an even number of bits per symbol.
    #[error("QAM order must be 4, 16, or 64 (or 2, which aliases to binary PSK), got {0}")]
    UnsupportedQamOrder(u32),
    /// The bit stream must be padded to a whole number of symbols first.
    #[error("bit stream length {len} is not a multiple of {k} bits per symbol; pad first")]
    UnpaddedBits { len: usize, k: u32 },
    /// A received FSK block did not contain whole m-dimensional vectors.
    #[error("received sample count {len} is not a multiple of the signal dimension {dim}")]
    RaggedVectors { len: usize, dim: u32 },
}

fn order_bits(m: u32) -> Result<u32, ModemError> {
    if (2..=MAX_ORDER).contains(&m) && m.is_power_of_two() {
        Ok(m.trailing_zeros())
    } else {
        Err(ModemError::InvalidOrder(m))
    }
}

/// Binary-reflected Gray code of `i`: consecutive codes differ in one bit.
pub fn gray(i: u32) -> u32 {
    i ^ (i >> 1)
}

// ---------------------------------------------------------------------------
// Bit streams
// ---------------------------------------------------------------------------

/// An ordered bit sequence plus the pre-padding length, so a decoded
/// stream can be cut back to the exact payload size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitStream {
    pub bits: Vec<bool>,
    /// Length before any padding; `original_length <= bits.len()`.
    pub original_length: usize,
}

impl BitStream {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        let original_length = bits.len();
        BitStream {
            bits,
            original_length,
        }
    }

    /// Zero-pad to a multiple of `k` bits, keeping `original_length`.
    pub fn padded(&self, k: u32) -> Self {
        let mut bits = self.bits.clone();
        let rem = bits.len() % k as usize;
        if rem != 0 {
            bits.resize(bits.len() + (k as usize - rem), false);
        }
        BitStream {
            bits,
            original_length: self.original_length,
        }
    }

    /// The first `original_length` bits.
    pub fn payload_bits(&self) -> &[bool] {
        &self.bits[..self.original_length.min(self.bits.len())]
    }
}

/// Read `k` bits starting at `at` as one label word, first bit most
/// significant.
fn word_at(bits: &[bool], at: usize, k: u32) -> u32 {
    let mut w = 0u32;
    for i in 0..k as usize {
        w = (w << 1) | bits[at + i] as u32;
    }
    w
}

/// Append `k` bits of `word` (most significant first) to `bits`.
fn push_word(bits: &mut Vec<bool>, word: u32, k: u32) {
    for i in (0..k).rev() {
        bits.push(word >> i & 1 == 1);
    }
}

// ---------------------------------------------------------------------------
// Complex-plane constellations (PSK, QAM)
// ---------------------------------------------------------------------------

/// A labeled point set on the complex plane with unit average energy.
#[derive(Debug, Clone)]
pub struct Constellation {
    pub scheme: Scheme,
    pub m: u32,
    /// Bits per symbol, `log2(m)`.
    pub k: u32,
    pub points: Vec<Complex64>,
    /// `labels[i]` is the k-bit word carried by `points[i]`; the labels
    /// are a permutation of `0..m` and geometric neighbours differ in
    /// exactly one bit.
    pub labels: Vec<u32>,
    label_to_index: Vec<u32>,
}

impl Constellation {
    fn new(scheme: Scheme, m: u32, k: u32, points: Vec<Complex64>, labels: Vec<u32>) -> Self {
        let mut label_to_index = vec![0u32; m as usize];
        for (i, &lab) in labels.iter().enumerate() {
            label_to_index[lab as usize] = i as u32;
        }
        Constellation {
            scheme,
            m,
            k,
            points,
            labels,
            label_to_index,
        }
    }

    /// Index of the point carrying `label`.
    pub fn index_of_label(&self, label: u32) -> usize {
        self.label_to_index[label as usize] as usize
    }

    /// Average symbol energy `Σ|pᵢ|²/m` (should be 1 within 1e-12).
    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.m as f64
    }
}

/// Unit-energy M-ary PSK: point `i` at angle `2πi/M + φ₀`, Gray-labeled
/// around the ring. `φ₀ = π/4` for M = 4 so QPSK and 4-QAM share one
/// point set; otherwise `φ₀ = 0`.
pub fn build_psk(m: u32) -> Result<Constellation, ModemError> {
    let k = order_bits(m)?;
    let phi0 = if m == 4 {
        std::f64::consts::FRAC_PI_4
    } else {
        0.0
    };
    let mut points = Vec::with_capacity(m as usize);
    let mut labels = Vec::with_capacity(m as usize);
    for i in 0..m {
        let angle = 2.0 * std::f64::consts::PI * i as f64 / m as f64 + phi0;
        points.push(Complex64::new(angle.cos(), angle.sin()));
        labels.push(gray(i));
    }
    Ok(Constellation::new(Scheme::Psk, m, k, points, labels))
}

/// Unit-average-energy square-grid M-ary QAM for M ∈ {4, 16, 64}:
/// per-axis amplitude levels `{±1, ±3, …, ±(√M−1)}/√(2(M−1)/3)` with
/// independent per-axis Gray labels (row bits in the low half of the
/// word, column bits in the high half). M = 2 has no grid and aliases to
/// the binary PSK geometry.
pub fn build_qam(m: u32) -> Result<Constellation, ModemError> {
    let k = order_bits(m)?;
    if m == 2 {
        let bpsk = build_psk(2)?;
        return Ok(Constellation::new(
            Scheme::Qam,
            2,
            1,
            bpsk.points,
            bpsk.labels,
        ));
    }
    if k % 2 != 0 || m > 64 {
        return Err(ModemError::UnsupportedQamOrder(m));
    }
    let side = 1u32 << (k / 2);
    let norm = (2.0 * (m as f64 - 1.0) / 3.0).sqrt();
    let level = |idx: u32| (2.0 * idx as f64 - (side as f64 - 1.0)) / norm;
    let mut points = Vec::with_capacity(m as usize);
    let mut labels = Vec::with_capacity(m as usize);
    for col in 0..side {
        for row in 0..side {
            points.push(Complex64::new(level(col), level(row)));
            labels.push(gray(col) << (k / 2) | gray(row));
        }
    }
    Ok(Constellation::new(Scheme::Qam, m, k, points, labels))
}

/// Map bits to constellation points, k bits per symbol, first bit most
/// significant within each group. The stream must already be padded to a
/// multiple of k bits.
pub fn modulate(bits: &BitStream, c: &Constellation) -> Result<Vec<Complex64>, ModemError> {
    if !bits.bits.len().is_multiple_of(c.k as usize) {
        return Err(ModemError::UnpaddedBits {
            len: bits.bits.len(),
            k: c.k,
        });
    }
    let mut symbols = Vec::with_capacity(bits.bits.len() / c.k as usize);
    for at in (0..bits.bits.len()).step_by(c.k as usize) {
        let word = word_at(&bits.bits, at, c.k);
        symbols.push(c.points[c.index_of_label(word)]);
    }
    Ok(symbols)
}

/// Maximum-likelihood detection under AWGN: each received sample maps to
/// the label of the nearest constellation point (Euclidean distance,
/// ties broken by lowest point index).
pub fn demodulate_ml(received: &[Complex64], c: &Constellation) -> BitStream {
    let mut bits = Vec::with_capacity(received.len() * c.k as usize);
    for &z in received {
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, p) in c.points.iter().enumerate() {
            let d = (z - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        push_word(&mut bits, c.labels[best], c.k);
    }
    BitStream::from_bits(bits)
}

// ---------------------------------------------------------------------------
// Orthogonal FSK vector channel
// ---------------------------------------------------------------------------

/// The M-dimensional orthogonal signal set: symbol `i` is `√Es·eᵢ` on the
/// coordinate basis, with `Es = 1`. This is the exact model behind the
/// correlator-race error analysis, with no carrier-level detail attached.
#[derive(Debug, Clone, Copy)]
pub struct FskSignalSet {
    pub m: u32,
    /// Bits per symbol, `log2(m)`.
    pub k: u32,
}

impl FskSignalSet {
    pub fn new(m: u32) -> Result<Self, ModemError> {
        let k = order_bits(m)?;
        Ok(FskSignalSet { m, k })
    }

    /// Signal-space dimension (one coordinate per tone).
    pub fn dimension(&self) -> u32 {
        self.m
    }

    /// Per-symbol energy (unit, like the complex constellations).
    pub fn es(&self) -> f64 {
        1.0
    }
}

/// A run of m-dimensional real vectors stored flat: symbol `i` occupies
/// `data[i*m .. (i+1)*m]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FskSymbols {
    pub m: u32,
    pub data: Vec<f64>,
}

impl FskSymbols {
    pub fn symbol_count(&self) -> usize {
        self.data.len() / self.m as usize
    }
}

/// Map bits to orthogonal vectors: each k-bit group (first bit most
/// significant) is the natural-binary index of the energized coordinate.
pub fn fsk_modulate(bits: &BitStream, s: &FskSignalSet) -> Result<FskSymbols, ModemError> {
    if !bits.bits.len().is_multiple_of(s.k as usize) {
        return Err(ModemError::UnpaddedBits {
            len: bits.bits.len(),
            k: s.k,
        });
    }
    let n = bits.bits.len() / s.k as usize;
    let amp = s.es().sqrt();
    let mut data = vec![0.0; n * s.m as usize];
    for (sym, at) in (0..bits.bits.len()).step_by(s.k as usize).enumerate() {
        let idx = word_at(&bits.bits, at, s.k) as usize;
        data[sym * s.m as usize + idx] = amp;
    }
    Ok(FskSymbols { m: s.m, data })
}

/// Argmax-correlator detection: the largest coordinate wins, ties broken
/// by lowest index, and the winning index is read back as k natural-binary
/// bits.
pub fn fsk_demodulate(received: &FskSymbols, s: &FskSignalSet) -> Result<BitStream, ModemError> {
    if received.m != s.m || !received.data.len().is_multiple_of(s.m as usize) {
        return Err(ModemError::RaggedVectors {
            len: received.data.len(),
            dim: s.m,
        });
    }
    let mut bits = Vec::with_capacity(received.symbol_count() * s.k as usize);
    for chunk in received.data.chunks_exact(s.m as usize) {
        let mut best = 0usize;
        let mut best_v = f64::NEG_INFINITY;
        for (i, &v) in chunk.iter().enumerate() {
            if v > best_v {
                best_v = v;
                best = i;
            }
        }
        push_word(&mut bits, best as u32, s.k);
    }
    Ok(BitStream::from_bits(bits))
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
