//! End-to-end runs of the installed binary: exit codes, report contents,
//! determinism, and the bundled map corpus.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use germscan::corpus;
use germscan::map::AnalyticMap;

fn maps_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../maps")
}

fn map_path(label: &str) -> String {
    maps_dir().join(format!("{label}.json")).display().to_string()
}

fn germscan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_germscan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not json ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Regenerates the bundled corpus when GERMSCAN_REGEN_MAPS is set, then
/// checks every file parses back to the exact corpus map and survives a
/// parse -> serialize -> parse round trip.
#[test]
fn bundled_map_files_match_corpus() {
    let dir = maps_dir();
    if std::env::var_os("GERMSCAN_REGEN_MAPS").is_some() {
        fs::create_dir_all(&dir).unwrap();
        for map in corpus::all() {
            let mut text = map.to_json();
            text.push('\n');
            fs::write(dir.join(format!("{}.json", map.label())), text).unwrap();
        }
    }
    for map in corpus::all() {
        let path = dir.join(format!("{}.json", map.label()));
        let text = fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let parsed = AnalyticMap::from_json(&text).unwrap();
        assert_eq!(parsed, map, "{} drifted from the library corpus", map.label());
        let again = AnalyticMap::from_json(&parsed.to_json()).unwrap();
        assert_eq!(again, parsed);
    }
}

#[test]
fn loja_fit_bundled_z2_hits_the_closed_form() {
    let out = germscan(&["--command", "loja-fit", "--map", &map_path("z2")]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    let theta = report["theta_hat"].as_f64().unwrap();
    assert!((0.48..=0.52).contains(&theta), "theta_hat = {theta}");
    assert_eq!(report["valid"], serde_json::Value::Bool(true));
}

#[test]
fn milnor_scan_flags_dependence_off_the_zero_set() {
    let out = germscan(&["--command", "milnor-scan", "--map", &map_path("sphere-plus-x")]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["holds"], serde_json::Value::Bool(false));
    let witnesses = report["condition_a"]["witnesses"].as_array().unwrap();
    assert!(!witnesses.is_empty(), "expected listed witnesses");
}

#[test]
fn milnor_scan_passes_a_fibered_map() {
    let out = germscan(&["--command", "milnor-scan", "--map", &map_path("z2")]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["holds"], serde_json::Value::Bool(true));
}

#[test]
fn rho_grid_is_constant_for_a_linear_map() {
    let out = germscan(&[
        "--command",
        "rho-grid",
        "--map",
        &map_path("linear-12-34"),
        "--grid-res",
        "9",
        "--bounds",
        "-1.0,1.0",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    let values = report["values"].as_array().unwrap();
    assert_eq!(values.len(), 81);
    let expected = 4.0 / 30.0;
    for v in values {
        let v = v.as_f64().unwrap();
        assert!((v - expected).abs() <= 1e-10, "cell {v} vs {expected}");
    }
}

#[test]
fn pair_scan_accepts_a_transversal_tube() {
    let out = germscan(&[
        "--command",
        "pair-scan",
        "--map",
        &map_path("z2"),
        "--epsilon",
        "1.0",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["verdict"], "holds-on-samples");
}

#[test]
fn condition_c_holds_for_an_antiholomorphic_mix() {
    let out = germscan(&[
        "--command",
        "condition-c",
        "--map",
        &map_path("zbar-w2"),
        "--levels",
        "5",
        "--directions",
        "12",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    assert_eq!(report["scan"]["verdict"], "holds-on-samples");
    assert_eq!(report["simple_facts"]["holds"], serde_json::Value::Bool(true));
}

#[test]
fn weight_classifies_simple_against_sheared() {
    let simple = germscan(&["--command", "weight", "--map", &map_path("z2")]);
    assert_eq!(code(&simple), 0);
    assert_eq!(stdout_json(&simple)["simple"], serde_json::Value::Bool(true));

    let sheared = germscan(&["--command", "weight", "--map", &map_path("shear-z2")]);
    assert_eq!(code(&sheared), 0);
    let report = stdout_json(&sheared);
    assert_eq!(report["simple"], serde_json::Value::Bool(false));
    assert_eq!(
        report["crosscheck"]["verdicts_agree"],
        serde_json::Value::Bool(true)
    );
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    for path in [&out_a, &out_b] {
        let out = germscan(&[
            "--command",
            "loja-fit",
            "--map",
            &map_path("z3"),
            "--seed",
            "9",
            "--out",
            &path.display().to_string(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = fs::read(&out_a).unwrap();
    let b = fs::read(&out_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);

    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    for path in [&csv_a, &csv_b] {
        let out = germscan(&[
            "--command",
            "analyze",
            "--map",
            &map_path("x-xy"),
            "--levels",
            "3",
            "--directions",
            "5",
            "--format",
            "csv",
            "--out",
            &path.display().to_string(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(fs::read(&csv_a).unwrap(), fs::read(&csv_b).unwrap());
}

#[test]
fn config_file_drives_a_run_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("job.json");
    fs::write(
        &config,
        format!(
            r#"{{
                "command": "loja-fit",
                "map_path": "{}",
                "region": {{"levels": 20, "directions": 16}},
                "seed": 3
            }}"#,
            map_path("z2")
        ),
    )
    .unwrap();
    let base = germscan(&["--config", &config.display().to_string()]);
    assert_eq!(code(&base), 0, "{}", String::from_utf8_lossy(&base.stderr));
    let theta_z2 = stdout_json(&base)["theta_hat"].as_f64().unwrap();
    assert!((0.48..=0.52).contains(&theta_z2), "theta_hat = {theta_z2}");

    let overridden = germscan(&[
        "--config",
        &config.display().to_string(),
        "--map",
        &map_path("z3"),
    ]);
    assert_eq!(code(&overridden), 0);
    let theta_z3 = stdout_json(&overridden)["theta_hat"].as_f64().unwrap();
    assert!((0.6..=0.72).contains(&theta_z3), "theta_hat = {theta_z3}");
}

#[test]
fn map_parse_errors_exit_one_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"n\": 2,\n \"k\": }").unwrap();
    let out = germscan(&["--command", "analyze", "--map", &bad.display().to_string()]);
    assert_eq!(code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
}

#[test]
fn unknown_config_fields_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("job.json");
    fs::write(&config, r#"{"comand": "weight"}"#).unwrap();
    let out = germscan(&["--config", &config.display().to_string()]);
    assert_eq!(code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("unknown field"), "stderr: {stderr}");
}

#[test]
fn csv_is_rejected_for_verdict_commands() {
    let out = germscan(&[
        "--command",
        "loja-fit",
        "--map",
        &map_path("z2"),
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 1);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("csv"), "stderr: {stderr}");
}

#[test]
fn csv_analyze_has_fixed_columns() {
    let out = germscan(&[
        "--command",
        "analyze",
        "--map",
        &map_path("z2"),
        "--levels",
        "2",
        "--directions",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x0,x1,radius,f_norm,sigma_1,sigma_2,sigma_k_norm,sigma_aug_norm,rho"
    );
    assert_eq!(lines.count(), 6);
}

#[test]
fn verify_smoke_covers_every_suite() {
    let out = germscan(&["--command", "verify", "--trials", "1", "--seed", "5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("22/22 properties pass"), "stdout: {text}");
    assert!(text.contains("prodsv-chain: 1/1 trials pass"), "stdout: {text}");
}

#[test]
fn missing_arguments_print_help_and_fail() {
    let out = germscan(&[]);
    assert_eq!(code(&out), 1);
}
