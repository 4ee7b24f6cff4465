//! A baseband laboratory for M-ary digital modulation over the additive
//! white Gaussian noise channel.
//!
//! The crate has three layers:
//!
//! * **Analysis** ([`numerics`], [`analysis`]): exact and approximate
//!   symbol/bit error probabilities for M-ary PSK, square-grid QAM, and
//!   orthogonal FSK, built on a deterministic adaptive quadrature and the
//!   Gaussian tail function.
//! * **Simulation** ([`modem`], [`channel`], [`montecarlo`]): Gray-coded
//!   unit-energy constellations, maximum-likelihood detection, calibrated
//!   AWGN, and a seeded Monte Carlo error-rate estimator with Wilson
//!   confidence intervals. Estimates are reproducible bit for bit across
//!   runs and across the sequential/parallel execution paths.
//! * **Application** ([`payload`], [`cli`]): a WAV audio payload pipeline
//!   (bits in, bits out, reconstruction error measured against the
//!   original) and the `modem-lab` command-line tool that drives curves,
//!   sweeps, comparisons, and transmissions.
//!
//! Built with `--no-default-features` the crate drops the `rayon`
//! dependency and every estimator runs sequentially; results are
//! identical either way, only wall-clock time changes.

pub mod analysis;
pub mod channel;
pub mod cli;
pub mod modem;
pub mod montecarlo;
pub mod numerics;
pub mod payload;

pub use analysis::{ErrorRate, EvalMode, Granularity, Scheme, SnrSpec};
pub use montecarlo::{BerCurve, BerEstimate, Execution, SnrRef, StopCriteria};
pub use payload::{AudioPayload, TransmissionReport};
