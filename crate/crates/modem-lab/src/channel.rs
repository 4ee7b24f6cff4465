//! Calibrated additive white Gaussian noise with deterministic seeding.
//!
//! The calibration convention is per-dimension variance `N0/2`: a complex
//! symbol gets independent noise of variance `N0/2` on the real and
//! imaginary parts, and an m-dimensional FSK vector gets it on each of
//! the m coordinates. With unit-energy signal sets this makes `Es/N0`
//! exactly the λ the analysis formulas expect.
//!
//! Randomness comes from ChaCha8 (a fixed, portable, splittable stream
//! cipher RNG) through the ziggurat standard-normal transform. Identical
//! `(seed, stream)` pairs reproduce identical noise bit for bit on every
//! platform; concurrent tasks take distinct stream ids on one seed.

use crate::analysis::SnrSpec;
use crate::modem::FskSymbols;
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Noise level plus the RNG identity that will realize it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    /// Noise spectral density, linear. `0` means a noiseless pass-through.
    pub n0: f64,
    pub seed: u64,
    /// Sub-stream id; draws from distinct streams on one seed are
    /// independent.
    pub stream: u64,
}

impl NoiseSpec {
    /// Derive the noise density for a signal of energy `es` at the given
    /// SNR: `n0 = es / (Es/N0)`. The infinite-SNR spec maps to `n0 = 0`.
    pub fn from_snr(snr: &SnrSpec, es: f64, seed: u64) -> Self {
        NoiseSpec {
            n0: es / snr.es_n0_linear(),
            seed,
            stream: 0,
        }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        NoiseSpec { stream, ..self }
    }

    /// Per-dimension standard deviation, `√(n0/2)` (so σ² = n0/2 exactly).
    pub fn sigma_per_dim(&self) -> f64 {
        (self.n0 / 2.0).sqrt()
    }

    /// True when the channel passes symbols through untouched.
    pub fn is_passthrough(&self) -> bool {
        self.n0 == 0.0
    }

    fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Add complex AWGN: independent `N(0, n0/2)` on the real and imaginary
/// parts of every symbol. Deterministic for a given `(seed, stream)`.
pub fn awgn_complex(symbols: &[Complex64], spec: &NoiseSpec) -> Vec<Complex64> {
    if spec.is_passthrough() {
        return symbols.to_vec();
    }
    let sigma = spec.sigma_per_dim();
    let mut rng = spec.rng();
    symbols
        .iter()
        .map(|s| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            s + Complex64::new(sigma * re, sigma * im)
        })
        .collect()
}

/// Add real AWGN of variance `n0/2` to every coordinate of every vector.
pub fn awgn_vector(vectors: &FskSymbols, spec: &NoiseSpec) -> FskSymbols {
    if spec.is_passthrough() {
        return vectors.clone();
    }
    let sigma = spec.sigma_per_dim();
    let mut rng = spec.rng();
    let data = vectors
        .data
        .iter()
        .map(|x| {
            let n: f64 = rng.sample(StandardNormal);
            x + sigma * n
        })
        .collect();
    FskSymbols { m: vectors.m, data }
}
