use std::f64::consts::{FRAC_PI_2, PI};
use std::process::Command;

use serde_json::Value;
use sphervol_cli::{run, EXIT_INPUT, EXIT_OK};

fn call(args: &[&str], stdin: &str) -> (i32, String) {
    let mut argv = vec!["sphervol"];
    argv.extend_from_slice(args);
    let out = run(argv, &mut stdin.as_bytes());
    (out.code, out.stdout)
}

fn json(args: &[&str]) -> Value {
    let (code, out) = call(args, "");
    assert_eq!(code, EXIT_OK, "{out}");
    serde_json::from_str(&out).unwrap()
}

fn list(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

#[test]
fn right_angled_volume() {
    let l = list(&[FRAC_PI_2; 6]);
    let doc = json(&["volume", "--lengths", &l]);
    assert!((doc["volume"].as_f64().unwrap() - 1.2337005501361697).abs() < 1e-12);
    for key in ["volume", "case", "path", "u", "t_squared", "diagnostics"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn volume_keys_on_every_path() {
    for z in [
        "2.1,1.2,1.9,0.9",
        "0.9,1.4,1.1,0.8",
        "1.0471975511965976,1.5707963267948966,1.5707963267948966,1.0471975511965976",
    ] {
        let doc = json(&["volume", "--z2", z]);
        for key in ["volume", "case", "path", "u", "t_squared", "diagnostics"] {
            assert!(doc.get(key).is_some(), "{z}: missing {key}");
        }
    }
}

#[test]
fn convert_right_angles() {
    let doc = json(&["convert", "--lengths", &list(&[FRAC_PI_2; 6])]);
    for a in floats(&doc["angles"]) {
        assert!((a - FRAC_PI_2).abs() < 1e-12);
    }
}

#[test]
fn convert_round_trip() {
    let input = [1.1, 1.3, 1.7, 0.9, 1.2, 1.5];
    let angles = floats(&json(&["convert", "--lengths", &list(&input)])["angles"]);
    let back = floats(&json(&["convert", "--angles", &list(&angles)])["lengths"]);
    for (x, y) in input.iter().zip(&back) {
        assert!((x - y).abs() < 1e-9);
    }

    let z2 = [2.1, 1.2, 1.9, 0.9];
    let deg = json(&["convert", "--z2", &list(&z2), "--degrees"]);
    assert_eq!(deg["degrees"], Value::Bool(true));
    let angles = floats(&deg["angles"]);
    let back = floats(&json(&["convert", "--angles", &list(&angles), "--degrees"])["z2"]);
    for (x, y) in z2.iter().zip(&back) {
        assert!((x - y).abs() < 1e-9);
    }
}

#[test]
fn sweep_elementary_family() {
    let (code, out) = call(
        &[
            "sweep",
            "--z2",
            "1,1.5707963267948966,1.5707963267948966,1",
            "--vary",
            "ad",
            "--range",
            "0.1,3.0",
            "--points",
            "30",
        ],
        "",
    );
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("parameter,volume,case,path,error"));
    let mut n = 0;
    for row in lines {
        let f: Vec<&str> = row.split(',').collect();
        let s: f64 = f[0].parse().unwrap();
        let v: f64 = f[1].parse().unwrap();
        assert!((v - s * s / 2.0).abs() < 1e-8, "{row}");
        n += 1;
    }
    assert_eq!(n, 30);
}

#[test]
fn sweep_reports_invalid_points_in_place() {
    let (code, out) = call(
        &[
            "sweep", "--z2", "1,1,1,1", "--vary", "a", "--range", "0.1,3.1", "--points", "5",
            "--format", "json",
        ],
        "",
    );
    assert_eq!(code, EXIT_OK);
    let doc: Value = serde_json::from_str(&out).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().any(|r| r.get("error").is_some()));
    assert!(rows.iter().any(|r| r.get("volume").is_some()));
}

#[test]
fn stdin_document() {
    let (code, out) = call(&["volume"], r#"{"z2": [2.1, 1.2, 1.9, 0.9]}"#);
    assert_eq!(code, EXIT_OK);
    let from_stdin: Value = serde_json::from_str(&out).unwrap();
    let from_flag = json(&["volume", "--z2", "2.1,1.2,1.9,0.9"]);
    assert_eq!(from_stdin, from_flag);

    let (code, out) = call(
        &["volume"],
        r#"{"angles": [90, 90, 90, 90], "degrees": true}"#,
    );
    assert_eq!(code, EXIT_OK, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!((v["volume"].as_f64().unwrap() - PI * PI / 8.0).abs() < 1e-12);
}

#[test]
fn check_passes_on_generic_instance() {
    let doc = json(&["check", "--z2", "2.1,1.2,1.9,0.9"]);
    assert_eq!(doc["all_pass"], Value::Bool(true), "{doc}");
    for key in ["sine_rule", "jacobi", "u_quadratic", "real_parts", "sforza"] {
        assert!(doc["checks"].get(key).is_some(), "missing {key}");
    }
    // general input without symmetry gets the general identities only
    let doc = json(&["check", "--lengths", "1.1,1.3,1.7,0.9,1.2,1.5"]);
    assert!(doc["checks"].get("u_quadratic").is_none());
    assert_eq!(doc["all_pass"], Value::Bool(true));
}

#[test]
fn oracles_deterministic_given_seed() {
    let args = [
        "oracle",
        "mc",
        "--z2",
        "2.1,1.2,1.9,0.9",
        "--samples",
        "100000",
        "--seed",
        "9",
    ];
    assert_eq!(call(&args, ""), call(&args, ""));
    let doc = json(&args);
    assert_eq!(doc["seed"], 9);

    let doc = json(&[
        "oracle",
        "schlafli",
        "--z2",
        "2.1,1.2,1.9,0.9",
        "--steps",
        "2000",
    ]);
    let v = json(&["volume", "--z2", "2.1,1.2,1.9,0.9"])["volume"]
        .as_f64()
        .unwrap();
    assert!((doc["volume"].as_f64().unwrap() - v).abs() < 1e-6);
}

#[test]
fn input_errors_exit_one() {
    let cases: [&[&str]; 6] = [
        &["volume", "--z2", "3,3,1,1"],
        &["volume", "--z2", "1,1,1"],
        &["volume", "--lengths", "1.1,1.3,1.7,0.9,1.2,1.5"],
        &["volume", "--z2", "1,1,1,1", "--lengths", "1,1,1,1,1,1"],
        &["oracle", "mc", "--z2", "1,1,1,1", "--samples", "10"],
        &["frobnicate"],
    ];
    for args in cases {
        let (code, out) = call(args, "");
        assert_eq!(code, EXIT_INPUT, "{args:?}: {out}");
        let doc: Value = serde_json::from_str(&out).unwrap();
        assert!(doc["error"]["kind"].is_string());
        assert!(doc["error"]["message"].is_string());
    }
    let (code, _) = call(&["volume"], "not json");
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn binary_exit_codes_and_logging() {
    let bin = env!("CARGO_BIN_EXE_sphervol");
    let ok = Command::new(bin)
        .args(["volume", "--z2", "2.1,1.2,1.9,0.9"])
        .env("SPHERVOL_LOG", "info")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stderr).contains("path"));
    let quiet = Command::new(bin)
        .args(["volume", "--z2", "2.1,1.2,1.9,0.9"])
        .env("SPHERVOL_LOG", "off")
        .output()
        .unwrap();
    assert!(quiet.stderr.is_empty());
    assert_eq!(ok.stdout, quiet.stdout);
    let bad = Command::new(bin)
        .args(["volume", "--z2", "3,3,1,1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
