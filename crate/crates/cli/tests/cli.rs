use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn unitdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unitdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, contents: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

fn arg(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

#[test]
fn connect_inline_rectangle() {
    let out = unitdist(&["connect", "--body", r#"{"type":"hyperrectangle","l":[1.6,1.2]}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["connected"], true);
    assert_eq!(v["reason"], "radius-ge-one-affdim-ge-2");
}

#[test]
fn connect_small_square_reports_isolated_centre() {
    let out = unitdist(&["connect", "--body", r#"{"type":"hyperrectangle","l":[1.2,1.2]}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["connected"], false);
    assert_eq!(v["witness"]["kind"], "point");
}

#[test]
fn path_in_square_is_short_and_revalidates() {
    let dir = TempDir::new().unwrap();
    let body = write(&dir, "cube2.json", r#"{"type":"hyperrectangle","l":[1.4142135623730951,1.4142135623730951]}"#);
    let path_file = dir.path().join("p.json");
    let out = unitdist(&[
        "path", "--body", &body, "--u", "0,0", "--v", "1.41421,1.41421", "--out", &arg(&path_file),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let p: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path_file).unwrap()).unwrap();
    let steps = p["steps"].as_u64().unwrap();
    assert!((1..=8).contains(&steps));

    let out = unitdist(&["validate", "--body", &body, "--path", &arg(&path_file)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["valid"], true);

    let out = unitdist(&[
        "validate", "--body", r#"{"type":"hyperrectangle","l":[1,1]}"#, "--path", &arg(&path_file),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["valid"], false);
}

#[test]
fn path_with_split_on_four_cube() {
    let out = unitdist(&[
        "path", "--body", r#"{"type":"hyperrectangle","l":[1,1,1,1]}"#, "--u", "0,0,0,0", "--v", "1,1,1,1",
        "--split", "0,1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout_json(&out)["steps"].as_u64().unwrap() <= 10);
}

#[test]
fn exit_codes() {
    let small = r#"{"type":"hyperrectangle","l":[1.2,1.2]}"#;
    assert_eq!(unitdist(&["path", "--body", small, "--u", "0,0", "--v", "1,1"]).status.code(), Some(1));
    assert_eq!(unitdist(&["path", "--body", small, "--u", "0,0", "--v", "3,1"]).status.code(), Some(2));
    assert_eq!(unitdist(&["connect", "--body", "{not json"]).status.code(), Some(2));
    assert_eq!(unitdist(&["connect", "--body", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(unitdist(&["path", "--body", small, "--u", "0,x", "--v", "1,1"]).status.code(), Some(2));
    assert_eq!(unitdist(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn bound_values() {
    let out = unitdist(&["bound", "--l", "1.9078784028338913,0.6"]);
    assert_eq!(stdout_json(&out)["bound"], 28);
    let out = unitdist(&["bound", "--dim", "5"]);
    assert_eq!(stdout_json(&out)["bound"], 8);
    let out = unitdist(&["bound", "--l", "1,1,1,1"]);
    assert_eq!(stdout_json(&out)["bound"], 10);
    let out = unitdist(&["bound", "--l", "1,0.5"]);
    assert_eq!(stdout_json(&out)["bound"], "unbounded");
}

#[test]
fn walk_is_reproducible_and_in_body() {
    let dir = TempDir::new().unwrap();
    let body = write(&dir, "square2.json", r#"{"type":"hyperrectangle","l":[2,2]}"#);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let hist = dir.path().join("h.csv");
    let svg = dir.path().join("h.svg");
    let common = ["walk", "--body", &body, "--start", "0.1,0.1", "--steps", "25", "--runs", "20000", "--seed", "7"];
    let mut first: Vec<&str> = common.to_vec();
    let (a_s, h_s, svg_s) = (arg(&a), arg(&hist), arg(&svg));
    first.extend(["--out", &a_s, "--hist", &h_s, "--svg", &svg_s, "--bins", "10"]);
    assert_eq!(unitdist(&first).status.code(), Some(0));
    let mut second: Vec<&str> = common.to_vec();
    let b_s = arg(&b);
    second.extend(["--out", &b_s]);
    assert_eq!(unitdist(&second).status.code(), Some(0));

    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 20000);
    for r in rows {
        let f: Vec<f64> = r.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(f[1], 25.0);
        assert!((-1e-9..=2.0 + 1e-9).contains(&f[2]) && (-1e-9..=2.0 + 1e-9).contains(&f[3]));
    }
    let grid: Vec<f64> = fs::read_to_string(&hist)
        .unwrap()
        .lines()
        .flat_map(|l| l.split(',').map(|c| c.parse::<f64>().unwrap()).collect::<Vec<_>>())
        .collect();
    assert_eq!(grid.len(), 100);
    assert!((grid.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    // no temporary files are left behind
    let names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert!(names.iter().all(|n| !n.contains(".tmp")), "{names:?}");
}

#[test]
fn walk_from_isolated_centre_gets_stuck() {
    let out = unitdist(&[
        "walk", "--body", r#"{"type":"hyperrectangle","l":[1.2,1.2]}"#, "--start", "0.6,0.6", "--steps", "3",
        "--runs", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for r in text.lines().skip(1) {
        assert!(r.contains(",0,0.6,0.6"), "{r}");
    }
}

#[test]
fn components_csv_and_svg() {
    let dir = TempDir::new().unwrap();
    let svg = dir.path().join("c.svg");
    let out = unitdist(&["components", "--l", "0.75", "--grid-h", "0.25", "--svg", &arg(&svg)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x,y,regime,component"));
    assert_eq!(text.lines().count(), 1 + 16);
    assert!(text.contains("between-1/√2-and-2/√5,arc-corner-1"));
    assert!(fs::read_to_string(&svg).unwrap().contains("conjectured"));
    let out = unitdist(&["components", "--l", "1.5", "--svg", &arg(&svg)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_csv() {
    let out = unitdist(&[
        "oracle", "--body", r#"{"type":"hyperrectangle","l":[2,2]}"#, "--grid-h", "0.05", "--pairs",
        "0.1,0.1:1.9,1.9;0.5,0.5:0.5,0.5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("components,,,,1"));
    assert!(text.contains("distance,1,0.5 0.5,0.5 0.5,0"));
}
