//! Shared helpers for the integration suites.
//!
//! The Gaussian-tail oracle here is deliberately written from scratch —
//! a Maclaurin series below the crossover and a Lentz-evaluated continued
//! fraction above it — so the library's erfc-backed implementation is
//! checked against an independent evaluation route, not against itself.

#![allow(dead_code)]

use std::process::{Command, Output};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// erf(x) by its Maclaurin series. Alternating and rapidly convergent for
/// the |x| < 1.5 range we use it in.
fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let mut n = 0u32;
    loop {
        n += 1;
        // term_n = (-1)^n x^(2n+1) / (n! (2n+1))
        term *= -x * x / n as f64;
        let delta = term / (2.0 * n as f64 + 1.0);
        let next = sum + delta;
        if next == sum || n > 200 {
            return 2.0 / SQRT_PI * next;
        }
        sum = next;
    }
}

/// erfc(x) for x ≥ 1.5 via the Laplace continued fraction
/// erfc(x) = e^(−x²)/√π · 1/(x + (1/2)/(x + (2/2)/(x + (3/2)/(x + …)))),
/// evaluated with the modified Lentz algorithm.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = TINY; // b0 = 0
    let mut c = f;
    let mut d = 0.0;
    for j in 1..=500u32 {
        let (a, b) = if j == 1 {
            (1.0, x)
        } else {
            ((j - 1) as f64 / 2.0, x)
        };
        d = b + a * d;
        if d == 0.0 {
            d = TINY;
        }
        c = b + a / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    (-x * x).exp() / SQRT_PI * f
}

/// Complementary error function, independent of `libm`.
pub fn oracle_erfc(x: f64) -> f64 {
    if x < 0.0 {
        2.0 - oracle_erfc(-x)
    } else if x < 1.5 {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

/// Gaussian tail probability Q(x) = P(N(0,1) > x), independent route.
pub fn oracle_q(x: f64) -> f64 {
    0.5 * oracle_erfc(x / std::f64::consts::SQRT_2)
}

/// Run the `modem-lab` binary with the given arguments.
pub fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modem-lab"))
        .args(args)
        .output()
        .expect("modem-lab binary should run")
}

/// Run the binary and return stdout, insisting on exit code 0.
pub fn cli_stdout(args: &[&str]) -> Vec<u8> {
    let out = run_cli(args);
    assert!(
        out.status.success(),
        "modem-lab {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}
