//! End-to-end tests of the command-line surface: exit codes, file formats,
//! manifest digests, config handling and reproducibility.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ghostgrover")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .arg("--quiet")
        .output()
        .expect("binary runs")
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ghostgrover-test-{tag}-{}", std::process::id()));
    if dir.exists() {
        std::fs::remove_dir_all(&dir).unwrap();
    }
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn walk_files(root: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.push(path);
            }
        }
    }
    out
}

/// Every file a run leaves on disk must be listed in the manifest with a
/// matching digest (except the manifest itself).
fn assert_manifest_complete(dir: &Path) {
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    let listed: HashSet<String> = manifest["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["path"].as_str().unwrap().to_string())
        .collect();
    for file in walk_files(dir) {
        let rel = file
            .strip_prefix(dir)
            .unwrap()
            .to_string_lossy()
            .replace('\\', "/");
        if rel == "manifest.json" {
            continue;
        }
        assert!(listed.contains(&rel), "file {rel} missing from manifest");
    }
    for entry in manifest["files"].as_array().unwrap() {
        let rel = entry["path"].as_str().unwrap();
        let bytes = std::fs::read(dir.join(rel)).unwrap();
        assert_eq!(
            entry["sha256"].as_str().unwrap(),
            sha256_hex(&bytes),
            "digest mismatch for {rel}"
        );
        assert_eq!(entry["bytes"].as_u64().unwrap(), bytes.len() as u64);
    }
}

#[test]
fn reconstruct_happy_path_writes_the_full_file_set() {
    let dir = temp_dir("reconstruct");
    let out = run_in(
        &dir,
        &[
            "reconstruct",
            "--m",
            "8",
            "--profile",
            "uniform",
            "--n",
            "4",
            "--object",
            "builtin:two-points",
            "--convention",
            "paper",
            "--out-prefix",
            "x",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for name in [
        "x_total.pgm",
        "x_delta.pgm",
        "x_s.pgm",
        "x_object.pgm",
        "x_meta.json",
        "x_probs.csv",
        "x_report.json",
        "manifest.json",
    ] {
        assert!(dir.join(name).exists(), "{name} missing");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("x_report.json")).unwrap()).unwrap();
    assert_eq!(report["marked_count"], 2);
    assert_eq!(report["m"], 8);
    // Uniform 4x4 block: K = 16 exactly.
    assert!((report["schmidt_number"].as_f64().unwrap() - 16.0).abs() < 1e-9);
    assert_manifest_complete(&dir);

    let pgm = std::fs::read(dir.join("x_total.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n8 8\n255\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn non_power_of_two_side_is_a_usage_error() {
    let dir = temp_dir("masks-bad");
    let out = run_in(
        &dir,
        &[
            "masks", "export", "--m", "3", "--kind", "h", "--out", "masks",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("m must be a power of two"),
        "stderr: {stderr}"
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn masks_export_payloads_are_exact() {
    let dir = temp_dir("masks");
    let out = run_in(
        &dir,
        &[
            "masks",
            "export",
            "--m",
            "2",
            "--ordering",
            "natural",
            "--kind",
            "q",
            "--out",
            "q2",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let index: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("q2/index.json")).unwrap()).unwrap();
    assert_eq!(index["m"], 2);
    assert_eq!(index["masks"].as_array().unwrap().len(), 4);

    // q_0 is null, q_1 varies along x: 0,255 / 0,255.
    let q0 = std::fs::read(dir.join("q2/q_00000.pgm")).unwrap();
    assert_eq!(&q0[q0.len() - 4..], &[0, 0, 0, 0]);
    let q1 = std::fs::read(dir.join("q2/q_00001.pgm")).unwrap();
    assert_eq!(&q1[q1.len() - 4..], &[0, 255, 0, 255]);
    assert_manifest_complete(&dir);
    std::fs::remove_dir_all(&dir).unwrap();

    // Walsh-mask export with super-pixels: mask 3 at screen 4 doubles blocks.
    let dir = temp_dir("masks-h");
    let out = run_in(
        &dir,
        &[
            "masks", "export", "--m", "2", "--kind", "h", "--screen", "4", "--out", "h2",
        ],
    );
    assert!(out.status.success());
    let h3 = std::fs::read(dir.join("h2/h_00003.pgm")).unwrap();
    let tail = &h3[h3.len() - 16..];
    assert_eq!(
        tail,
        &[255, 255, 0, 0, 255, 255, 0, 0, 0, 0, 255, 255, 0, 0, 255, 255]
    );
    assert_manifest_complete(&dir);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn state_info_prints_exact_schmidt_number() {
    let dir = temp_dir("state");
    let out = run_in(
        &dir,
        &[
            "state",
            "info",
            "--profile",
            "uniform",
            "--m",
            "8",
            "--n",
            "4",
        ],
    );
    assert!(out.status.success());
    let info: serde_json::Value =
        serde_json::from_str(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert!((info["schmidt_number"].as_f64().unwrap() - 16.0).abs() < 1e-9);
    assert!((info["norm"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(info["profile"]["kind"], "uniform");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn grover_run_auto_finds_single_mark_with_certainty() {
    let dir = temp_dir("grover");
    // 2x2 grid with one mark: the optimal iteration count is 1 and the
    // search succeeds with certainty.
    let object_path = dir.join("object.txt");
    std::fs::write(&object_path, "00\n01\n").unwrap();
    let out = run_in(
        &dir,
        &[
            "grover",
            "run",
            "--m",
            "2",
            "--profile",
            "uniform",
            "--n",
            "2",
            "--placement",
            "origin",
            "--object",
            object_path.to_str().unwrap(),
            "--iterations",
            "auto",
            "--out",
            "probs.csv",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("probs_summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["iterations"], 1);
    assert!((summary["iterated_success_mass"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((summary["heralded_success_mass"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let csv = std::fs::read_to_string(dir.join("probs.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "j,x,y,p");
    assert_eq!(lines.len(), 5);
    assert!(lines[4].starts_with("3,1,1,"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn simulate_counts_is_deterministic_per_seed() {
    let dir = temp_dir("counts");
    let probs_path = dir.join("p.csv");
    std::fs::write(&probs_path, "j,p\n0,0.0625\n1,0.0625\n2,0.0625\n3,0.5625\n").unwrap();
    let args = [
        "simulate-counts",
        "--probs",
        probs_path.to_str().unwrap(),
        "--pair-rate",
        "100000",
        "--singles-a",
        "50000",
        "--singles-b",
        "50000",
        "--gate",
        "3e-9",
        "--integration",
        "2",
        "--seed",
        "11",
        "--out",
        "counts.csv",
    ];
    let out = run_in(&dir, &args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let first = std::fs::read(dir.join("counts.csv")).unwrap();
    let header = String::from_utf8_lossy(&first);
    assert!(
        header.starts_with("j,coincidences,singles_a,singles_b,accidentals_est,corrected,clamped")
    );

    let out = run_in(&dir, &args);
    assert!(out.status.success());
    let second = std::fs::read(dir.join("counts.csv")).unwrap();
    assert_eq!(first, second);

    // A different seed changes the payload.
    let mut other_args = args;
    other_args[12] = "12";
    let out = run_in(&dir, &other_args);
    assert!(out.status.success());
    let third = std::fs::read(dir.join("counts.csv")).unwrap();
    assert_ne!(first, third);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn reconstruct_reruns_are_byte_identical() {
    let dir_a = temp_dir("repro-a");
    let dir_b = temp_dir("repro-b");
    let args = [
        "reconstruct",
        "--m",
        "16",
        "--profile",
        "gaussian",
        "--waist",
        "3.5",
        "--object",
        "builtin:block",
        "--convention",
        "physical",
        "--out-prefix",
        "r",
    ];
    assert!(run_in(&dir_a, &args).status.success());
    assert!(run_in(&dir_b, &args).status.success());
    for name in [
        "r_total.pgm",
        "r_delta.pgm",
        "r_s.pgm",
        "r_object.pgm",
        "r_meta.json",
        "r_probs.csv",
        "r_report.json",
    ] {
        let a = std::fs::read(dir_a.join(name)).unwrap();
        let b = std::fs::read(dir_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between reruns");
    }
    std::fs::remove_dir_all(&dir_a).unwrap();
    std::fs::remove_dir_all(&dir_b).unwrap();
}

#[test]
fn sweep_overlap_emits_the_threshold_grid() {
    let dir = temp_dir("sweep");
    let out = run_in(
        &dir,
        &[
            "sweep-overlap",
            "--m-list",
            "8,16",
            "--n-list",
            "2,4,6,8,10,12,14,16",
            "--profile",
            "uniform",
            "--out",
            "heatmap.csv",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.join("heatmap.csv")).unwrap();
    let mut rows = 0;
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let m: usize = fields[0].parse().unwrap();
        let n: usize = fields[1].parse().unwrap();
        let overlap: f64 = fields[2].parse().unwrap();
        if n <= m / 2 {
            assert!(overlap <= 1e-10, "m={m} n={n}: {overlap}");
        } else {
            assert!(overlap > 1e-6, "m={m} n={n}: {overlap}");
        }
        rows += 1;
    }
    // Cells with n > m are skipped: 4 for m=8, 8 for m=16.
    assert_eq!(rows, 12);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = temp_dir("config");
    let config_path = dir.join("config.json");
    std::fs::write(
        &config_path,
        r#"{
  "schema_version": "1",
  "m": 8,
  "profile": "uniform",
  "n": 4,
  "object": "builtin:two-points",
  "convention": "paper",
  "out_prefix": "from_config"
}"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .args([
            "reconstruct",
            "--config",
            config_path.to_str().unwrap(),
            "--out-prefix",
            "override",
            "--out-dir",
        ])
        .arg(&dir)
        .arg("--quiet")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.join("override_total.pgm").exists());
    assert!(!dir.join("from_config_total.pgm").exists());

    // The manifest echoes the effective (merged) config.
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["out_prefix"], "override");
    assert_eq!(manifest["config"]["m"], 8);

    // Config files round-trip parse → serialize → parse unchanged.
    let original: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&config_path).unwrap()).unwrap();
    let text = serde_json::to_string(&original).unwrap();
    let reparsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(original, reparsed);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = temp_dir("config-bad");
    let config_path = dir.join("config.json");
    std::fs::write(
        &config_path,
        r#"{"schema_version": "1", "m": 8, "object": "builtin:empty", "typo_key": 1}"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .args([
            "reconstruct",
            "--config",
            config_path.to_str().unwrap(),
            "--out-dir",
        ])
        .arg(&dir)
        .arg("--quiet")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("typo_key"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn missing_object_file_is_an_io_error() {
    let dir = temp_dir("io-error");
    let out = run_in(
        &dir,
        &[
            "reconstruct",
            "--m",
            "8",
            "--object",
            "/nonexistent/object.txt",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn oversized_requests_hit_the_resource_cap() {
    let dir = temp_dir("resource");
    let out = run_in(
        &dir,
        &["masks", "export", "--m", "256", "--kind", "h", "--out", "m"],
    );
    assert_eq!(out.status.code(), Some(4));

    let out = run_in(
        &dir,
        &[
            "sweep-overlap",
            "--m-list",
            "512",
            "--n-list",
            "2",
            "--out",
            "h.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(4));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn figure_preset_fig2g_has_the_threshold_block_structure() {
    let dir = temp_dir("fig2g");
    let out = run_in(&dir, &["figures", "fig2g"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.join("fig2g/heatmap.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let m: usize = fields[0].parse().unwrap();
        let n: usize = fields[1].parse().unwrap();
        let overlap: f64 = fields[2].parse().unwrap();
        if n <= m / 2 {
            assert!(overlap <= 1e-10, "m={m} n={n}: {overlap}");
        }
    }
    assert_manifest_complete(&dir);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn figure_presets_fig1_report_the_expected_contrast() {
    let dir = temp_dir("fig1");
    let out = run_in(&dir, &["figures", "fig1g"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("fig1g/image_report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["contrast"]["verdict"], true);

    let out = run_in(&dir, &["figures", "fig1f"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("fig1f/report.json")).unwrap())
            .unwrap();
    assert_eq!(report["marked_pixels_carry_peak"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn env_var_supplies_the_output_root() {
    let dir = temp_dir("env-root");
    let out = Command::new(bin())
        .args([
            "state",
            "info",
            "--profile",
            "uniform",
            "--m",
            "4",
            "--n",
            "2",
            "--quiet",
        ])
        .env("GHOSTGROVER_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.join("manifest.json").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn remaining_figure_presets_run_clean() {
    let dir = temp_dir("fig-rest");
    for preset in ["fig2c-f", "fig2h", "fig4-sim"] {
        let out = run_in(&dir, &["figures", preset]);
        assert!(
            out.status.success(),
            "{preset}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    // The decomposition panels record the overlap transition across n.
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("fig2c-f/summary.json")).unwrap())
            .unwrap();
    let panels = summary.as_array().unwrap();
    assert_eq!(panels.len(), 4);
    assert!(panels[0]["overlap"].as_f64().unwrap() <= 1e-10);
    assert!(panels[3]["overlap"].as_f64().unwrap() > 1e-6);
    assert!(panels[0]["contrast_verdict"].as_bool().unwrap());

    // Every object in the gallery keeps the inverted-amplitude contrast.
    let out = run_in(&dir, &["figures", "fig5-sim"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("fig5-sim/summary.json")).unwrap())
            .unwrap();
    for panel in summary.as_array().unwrap() {
        assert!(
            panel["contrast_verdict"].as_bool().unwrap(),
            "{} lost contrast",
            panel["label"]
        );
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn object_round_trip_through_pgm() {
    let dir = temp_dir("pgm-object");
    // Export the block object's reconstruction, then feed a PGM back in.
    let ascii = dir.join("obj.txt");
    std::fs::write(&ascii, "0110\n0110\n0000\n0000\n").unwrap();
    let out = run_in(
        &dir,
        &[
            "reconstruct",
            "--m",
            "4",
            "--object",
            ascii.to_str().unwrap(),
            "--out-prefix",
            "a",
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("a_report.json")).unwrap()).unwrap();
    assert_eq!(report["marked_count"], 4);
    std::fs::remove_dir_all(&dir).unwrap();
}
