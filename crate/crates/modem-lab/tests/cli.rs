//! End-to-end runs of the `modem-lab` binary: the documented invocations
//! succeed, outputs are deterministic and machine-parseable, and bad
//! configurations fail loudly, naming the flag at fault.

mod common;

use common::{cli_stdout, run_cli};
use modem_lab::payload::{voice_fixture, wav_read, wav_write};

fn data_rows(csv: &[u8]) -> Vec<String> {
    String::from_utf8(csv.to_vec())
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("scheme,") && !l.starts_with("ebn0_db,"))
        .map(str::to_owned)
        .collect()
}

#[test]
fn curve_exact_emits_one_row_per_scheme_and_grid_point() {
    let out = cli_stdout(&[
        "curve",
        "--scheme",
        "psk,qam,fsk",
        "--m",
        "2",
        "--snr",
        "0:12:1",
        "--mode",
        "exact",
    ]);
    let text = String::from_utf8(out.clone()).unwrap();
    assert!(text.contains("scheme,m,mode,granularity,ebn0_db,value,ci_low,ci_high,seed"));

    let rows = data_rows(&out);
    assert_eq!(rows.len(), 3 * 13);
    // Analytic rows: scheme-major order, CI and seed columns empty.
    assert!(rows[0].starts_with("psk,2,exact,bit,0,"));
    assert!(rows[13].starts_with("qam,2,exact,bit,0,"));
    assert!(rows[26].starts_with("fsk,2,exact,bit,0,"));
    assert!(rows.iter().all(|r| r.ends_with(",,,")));
}

#[test]
fn curve_order_family_covers_the_cartesian_product() {
    let out = cli_stdout(&[
        "curve",
        "--scheme",
        "psk",
        "--m",
        "2,4,16",
        "--snr",
        "6:6:1",
        "--mode",
        "exact,approx1,approx2",
    ]);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 9); // 3 orders x 3 modes x 1 grid point
    assert!(rows[0].starts_with("psk,2,exact,"));
    assert!(rows[1].starts_with("psk,2,approx1,"));
    assert!(rows[2].starts_with("psk,2,approx2,"));
    assert!(rows[3].starts_with("psk,4,exact,"));
    assert!(rows[8].starts_with("psk,16,approx2,"));
}

#[test]
fn sweep_rows_carry_confidence_intervals_and_the_seed() {
    let out = cli_stdout(&[
        "sweep",
        "--scheme",
        "psk",
        "--m",
        "2",
        "--snr",
        "0:2:1",
        "--seed",
        "7",
        "--min-errors",
        "10",
        "--max-bits",
        "20000",
        "--batch-size",
        "2000",
    ]);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 9);
        assert_eq!(fields[2], "montecarlo");
        assert!(
            !fields[6].is_empty() && !fields[7].is_empty(),
            "CI missing: {row}"
        );
        assert_eq!(fields[8], "7");
        let (lo, hi): (f64, f64) = (fields[6].parse().unwrap(), fields[7].parse().unwrap());
        let value: f64 = fields[5].parse().unwrap();
        assert!(lo <= value && value <= hi);
    }
}

#[test]
fn identical_configs_give_byte_identical_stdout() {
    let args = [
        "curve",
        "--scheme",
        "qam",
        "--m",
        "4",
        "--snr",
        "0:4:2",
        "--mode",
        "montecarlo",
        "--seed",
        "3",
    ];
    assert_eq!(cli_stdout(&args), cli_stdout(&args));

    let json_args = [
        "sweep",
        "--scheme",
        "fsk",
        "--m",
        "4",
        "--snr",
        "2:4:2",
        "--min-errors",
        "10",
        "--max-bits",
        "20000",
        "--batch-size",
        "2000",
        "--format",
        "json",
    ];
    assert_eq!(cli_stdout(&json_args), cli_stdout(&json_args));
}

#[test]
fn sequential_and_parallel_sweeps_agree_to_the_byte() {
    let base = [
        "sweep",
        "--scheme",
        "psk",
        "--m",
        "4",
        "--snr",
        "0:4:2",
        "--min-errors",
        "20",
        "--max-bits",
        "50000",
        "--batch-size",
        "5000",
        "--execution",
    ];
    let strip_execution = |bytes: Vec<u8>| -> Vec<String> {
        String::from_utf8(bytes)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# execution"))
            .map(str::to_owned)
            .collect()
    };
    let seq = strip_execution(cli_stdout(&[&base[..], &["sequential"]].concat()));
    let par = strip_execution(cli_stdout(&[&base[..], &["parallel"]].concat()));
    assert_eq!(seq, par);
}

#[test]
fn transmit_round_trips_audio_and_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let out_wav = dir.path().join("rx.wav");
    let report = dir.path().join("report.json");

    let stdout = cli_stdout(&[
        "transmit",
        "--scheme",
        "qam",
        "--m",
        "16",
        "--fixture",
        "4000",
        "--ebn0",
        "inf",
        "-o",
        out_wav.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(
        stdout.is_empty(),
        "report went to a file, stdout should be quiet"
    );

    // Noiseless: the reconstruction equals the fixture exactly.
    assert_eq!(wav_read(&out_wav).unwrap(), voice_fixture(4000, 8000));

    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["command"], "transmit");
    assert_eq!(doc["config"]["eb_n0_db"], "inf");
    assert_eq!(doc["report"]["bit_errors"], 0);
    assert_eq!(doc["report"]["sample_mse"], 0.0);
    assert_eq!(doc["report"]["total_bits"], 64000);

    // No temp residue from the atomic writes.
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| {
            let name = e.unwrap().file_name().into_string().unwrap();
            name.ends_with(".tmp").then_some(name)
        })
        .collect();
    assert!(
        leftovers.is_empty(),
        "temp files left behind: {leftovers:?}"
    );
}

#[test]
fn transmit_accepts_a_user_wav_and_degrades_noisily() {
    let dir = tempfile::tempdir().unwrap();
    let in_wav = dir.path().join("tx.wav");
    let out_wav = dir.path().join("rx.wav");
    wav_write(&in_wav, &voice_fixture(2000, 16000)).unwrap();

    let stdout = cli_stdout(&[
        "transmit",
        "--scheme",
        "psk",
        "--m",
        "2",
        "--ebn0",
        "0",
        "--input",
        in_wav.to_str().unwrap(),
        "-o",
        out_wav.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&stdout).unwrap();
    let errors = doc["report"]["bit_errors"].as_u64().unwrap();
    assert!(
        errors > 1000,
        "0 dB BPSK over 32k bits should corrupt plenty, saw {errors}"
    );
    assert!(doc["report"]["sample_mse"].as_f64().unwrap() > 0.0);
    // The output preserves the input's sample rate.
    assert_eq!(wav_read(&out_wav).unwrap().sample_rate_hz, 16000);
}

#[test]
fn compare_of_identical_configs_is_exactly_one() {
    let out = cli_stdout(&[
        "compare",
        "--scheme-a",
        "psk",
        "--m-a",
        "4",
        "--mode-a",
        "montecarlo",
        "--scheme-b",
        "psk",
        "--m-b",
        "4",
        "--mode-b",
        "montecarlo",
        "--snr",
        "4:6:2",
        "--format",
        "json",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&out).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row["ratio"], 1.0);
        assert_eq!(row["value_a"], row["value_b"]);
    }
}

#[test]
fn compare_csv_reports_the_order_penalty() {
    let out = cli_stdout(&[
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
    ]);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 1);
    let ratio: f64 = rows[0].rsplit(',').next().unwrap().parse().unwrap();
    assert!((5.0..=20.0).contains(&ratio), "order penalty ratio {ratio}");
}

#[test]
fn invalid_configurations_fail_naming_the_flag() {
    let cases: &[(&[&str], &str)] = &[
        (
            &["curve", "--scheme", "psk", "--m", "3", "--mode", "exact"],
            "--m",
        ),
        (
            &["curve", "--scheme", "qam", "--m", "32", "--mode", "exact"],
            "--m",
        ),
        (
            &["curve", "--scheme", "fsk", "--m", "2", "--mode", "approx1"],
            "--mode",
        ),
        (
            &["curve", "--scheme", "psk", "--m", "2", "--mode", "union"],
            "--mode",
        ),
        (
            &[
                "curve", "--scheme", "psk", "--m", "2", "--mode", "exact", "--snr", "5:1:1",
            ],
            "--snr",
        ),
        (
            &[
                "curve", "--scheme", "psk", "--m", "2", "--mode", "exact", "--snr", "0:5:0",
            ],
            "--snr",
        ),
        (
            &["curve", "--scheme", "dpsk", "--m", "2", "--mode", "exact"],
            "--scheme",
        ),
        (
            &[
                "transmit",
                "--scheme",
                "psk",
                "--m",
                "2",
                "--ebn0",
                "nan",
                "--fixture",
                "8",
                "-o",
                "x.wav",
            ],
            "--ebn0",
        ),
        (
            &["transmit", "--scheme", "psk", "--m", "2", "-o", "x.wav"],
            "--input",
        ),
        (
            &["sweep", "--scheme", "psk", "--m", "2", "--min-errors", "0"],
            "--min-errors",
        ),
    ];
    for (args, flag) in cases {
        let out = run_cli(args);
        assert!(!out.status.success(), "{args:?} should fail");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(
            stderr.contains(flag),
            "stderr for {args:?} should name {flag}: {stderr}"
        );
    }
}

#[test]
fn unreadable_or_malformed_wav_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let out_wav = dir.path().join("rx.wav");

    let missing = run_cli(&[
        "transmit",
        "--scheme",
        "psk",
        "--m",
        "2",
        "--input",
        "no-such-file.wav",
        "-o",
        out_wav.to_str().unwrap(),
    ]);
    assert!(!missing.status.success());

    let garbage = dir.path().join("garbage.wav");
    std::fs::write(&garbage, b"this is not audio").unwrap();
    let bad = run_cli(&[
        "transmit",
        "--scheme",
        "psk",
        "--m",
        "2",
        "--input",
        garbage.to_str().unwrap(),
        "-o",
        out_wav.to_str().unwrap(),
    ]);
    assert!(!bad.status.success());
    let stderr = String::from_utf8_lossy(&bad.stderr);
    assert!(stderr.contains("parse error"), "{stderr}");

    // A structurally valid but stereo WAV names the field.
    let p = voice_fixture(16, 8000);
    let mut bytes = modem_lab::payload::encode_wav(&p).unwrap();
    bytes[22] = 2; // channel count
    let stereo = dir.path().join("stereo.wav");
    std::fs::write(&stereo, &bytes).unwrap();
    let out = run_cli(&[
        "transmit",
        "--scheme",
        "psk",
        "--m",
        "2",
        "--input",
        stereo.to_str().unwrap(),
        "-o",
        out_wav.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("channels"));
}

#[test]
fn output_files_match_stdout_content() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let args = [
        "curve",
        "--scheme",
        "fsk",
        "--m",
        "4",
        "--snr",
        "2:4:1",
        "--mode",
        "exact,union",
    ];
    let stdout = cli_stdout(&args);
    let file_args = [&args[..], &["-o", path.to_str().unwrap()]].concat();
    cli_stdout(&file_args);
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}
