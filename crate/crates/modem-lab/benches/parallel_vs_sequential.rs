//! How much does the rayon batch fan-out buy? Both execution paths do
//! bit-identical work (same batches, same RNG streams, same fold), so
//! these groups measure pure scheduling gain: one saturated single-point
//! estimate, and a full grid sweep at a realistic stop rule.
//!
//! Built with `--no-default-features` the Parallel rows simply measure
//! the sequential fallback — useful for confirming the flag costs nothing.

use criterion::{criterion_group, criterion_main, Criterion};
use modem_lab::analysis::Scheme;
use modem_lab::montecarlo::{
    estimate_ber_with, sweep_with, CurveOptions, Execution, RunOptions, SnrRef, StopCriteria,
};
use std::hint::black_box;

fn ber_point(c: &mut Criterion) {
    // Forced budget: the error floor never triggers, so every iteration
    // pushes exactly 2M bits regardless of execution path.
    let stop = StopCriteria {
        min_bit_errors: u64::MAX,
        max_bits: 2_000_000,
        batch_size: 250_000,
    };
    let mut group = c.benchmark_group("ber_point/qam16_6db_2Mbit");
    group.sample_size(10);
    for execution in [Execution::Sequential, Execution::Parallel] {
        group.bench_function(execution.to_string(), |b| {
            b.iter(|| {
                estimate_ber_with(
                    black_box(Scheme::Qam),
                    16,
                    black_box(6.0),
                    &stop,
                    7,
                    &RunOptions {
                        snr_ref: SnrRef::Bit,
                        execution,
                    },
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn sweep_grid(c: &mut Criterion) {
    let stop = StopCriteria {
        min_bit_errors: 200,
        max_bits: 1_000_000,
        batch_size: 100_000,
    };
    let grid: Vec<f64> = (0..=8).map(f64::from).collect();
    let options = CurveOptions::default();
    let mut group = c.benchmark_group("sweep/psk4_0to8db");
    group.sample_size(10);
    for execution in [Execution::Sequential, Execution::Parallel] {
        group.bench_function(execution.to_string(), |b| {
            b.iter(|| {
                sweep_with(
                    Scheme::Psk,
                    4,
                    black_box(&grid),
                    &stop,
                    7,
                    &options,
                    execution,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, ber_point, sweep_grid);
criterion_main!(benches);
