// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn symmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symmap")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes a chip and its default error map into `dir`.
fn chip_and_errors(dir: &Path, family: &str, r: &str, c: &str) -> (PathBuf, PathBuf) {
    let chip = dir.join(format!("{family}_{r}x{c}.json"));
    let errors = dir.join(format!("{family}_{r}x{c}_errors.json"));
    assert_eq!(code(&symmap(&["gen-topology", family, r, c, "-o", s(&chip)])), 0);
    assert_eq!(code(&symmap(&["gen-errors", s(&chip), "-o", s(&errors)])), 0);
    (chip, errors)
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&symmap(&["--help"])), 0);
    assert_eq!(code(&symmap(&["--version"])), 0);
    assert_eq!(code(&symmap(&[])), 1);
    assert_eq!(code(&symmap(&["frobnicate"])), 1);
    assert_eq!(code(&symmap(&["gen-topology", "hexagonal", "2", "2"])), 1);
    assert_eq!(code(&symmap(&["match", "--algo", "bogus", "a", "b"])), 1);
}

#[test]
fn missing_and_malformed_inputs_are_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\n  \"n\": 3,\n  \"edges\": [[0, 1],\n}\n").unwrap();
    let (chip, _) = chip_and_errors(dir.path(), "grid", "3", "3");
    let out = symmap(&["match", s(&bad), s(&chip)]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json") && err.contains("line 4"), "{err}");

    let out = symmap(&["match", s(&dir.path().join("absent.json")), s(&chip)]);
    assert_eq!(code(&out), 2);

    let out = symmap(&["gen-errors", s(&chip), "--e-min", "0.2", "--e-max", "0.1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn triangle_has_no_placement_on_a_grid() {
    let dir = tempfile::tempdir().unwrap();
    let (chip, _) = chip_and_errors(dir.path(), "grid", "5", "5");
    for algo in ["vf2", "sbsm"] {
        let out = symmap(&["match", s(&fixture("tri.json")), s(&chip), "--algo", algo]);
        assert_eq!(code(&out), 0);
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v, Value::Array(vec![]));
    }
}

#[test]
fn match_algorithms_agree() {
    let dir = tempfile::tempdir().unwrap();
    for (family, r, c) in [("grid", "6", "5"), ("heavy_hex", "2", "2"), ("octagonal", "2", "3")] {
        let (chip, _) = chip_and_errors(dir.path(), family, r, c);
        let a = symmap(&["match", s(&fixture("p5.json")), s(&chip), "--algo", "vf2"]);
        let b = symmap(&["match", s(&fixture("p5.json")), s(&chip), "--algo", "sbsm"]);
        assert_eq!((code(&a), code(&b)), (0, 0));
        assert_eq!(a.stdout, b.stdout, "{family}");
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        assert!(!v.as_array().unwrap().is_empty());
    }
}

#[test]
fn star_circuit_does_not_fit_degree_three_chips() {
    let dir = tempfile::tempdir().unwrap();
    for family in ["heavy_hex", "octagonal"] {
        let (chip, errors) = chip_and_errors(dir.path(), family, "2", "2");
        let out = symmap(&["remap", s(&fixture("dj5.json")), s(&chip), s(&errors)]);
        assert_eq!(code(&out), 3, "{family}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("does not fit"));
        let out = symmap(&["remap", s(&fixture("dj5_path.json")), s(&chip), s(&errors)]);
        assert_eq!(code(&out), 0, "{family}");
    }
}

#[test]
fn remap_matches_reference_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let (chip, errors) = chip_and_errors(dir.path(), "grid", "7", "7");
    let fast = symmap(&["remap", s(&fixture("dj5.json")), s(&chip), s(&errors)]);
    let par = symmap(&["remap", s(&fixture("dj5.json")), s(&chip), s(&errors), "--parallel"]);
    let slow = symmap(&["remap", s(&fixture("dj5.json")), s(&chip), s(&errors), "--reference"]);
    assert_eq!((code(&fast), code(&par), code(&slow)), (0, 0, 0));
    let fast: Value = serde_json::from_slice(&fast.stdout).unwrap();
    let par: Value = serde_json::from_slice(&par.stdout).unwrap();
    let slow: Value = serde_json::from_slice(&slow.stdout).unwrap();
    assert_eq!(fast, slow);
    assert_eq!(fast, par);
    // 25 interior centers, 4! leaf orders each.
    let scores = fast["scores"].as_array().unwrap();
    assert_eq!(scores.len(), 25 * 24);
    assert_eq!(fast["best"], scores[0]);
    let best = scores[0]["score"].as_f64().unwrap();
    assert!(scores.iter().all(|x| x["score"].as_f64().unwrap() <= best));
}

#[test]
fn score_command_keeps_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let (chip, errors) = chip_and_errors(dir.path(), "grid", "4", "4");
    let path = dir.path().join("circuit_graph.json");
    fs::write(&path, r#"{"n": 5, "edges": [[0, 4], [1, 4], [2, 4], [3, 4]]}"#).unwrap();
    let matches = dir.path().join("matches.json");
    assert_eq!(code(&symmap(&["match", s(&path), s(&chip), "-o", s(&matches)])), 0);
    let a = symmap(&["score", s(&matches), s(&fixture("dj5.json")), s(&errors), "--algo", "loop"]);
    let b = symmap(&["score", s(&matches), s(&fixture("dj5.json")), s(&errors), "--algo", "vec"]);
    assert_eq!((code(&a), code(&b)), (0, 0));
    let a: Value = serde_json::from_slice(&a.stdout).unwrap();
    let b: Value = serde_json::from_slice(&b.stdout).unwrap();
    let m: Value = serde_json::from_str(&fs::read_to_string(&matches).unwrap()).unwrap();
    let a = a.as_array().unwrap();
    assert_eq!(a.len(), m.as_array().unwrap().len());
    for ((x, y), mapping) in a.iter().zip(b.as_array().unwrap()).zip(m.as_array().unwrap()) {
        assert_eq!(&x["map"], &mapping["map"]);
        assert_eq!(x, y);
    }
}

#[test]
fn defects_file_is_applied() {
    let dir = tempfile::tempdir().unwrap();
    let defects = dir.path().join("defects.json");
    fs::write(&defects, r#"{"vertices": [12], "edges": [[0, 1]]}"#).unwrap();
    let chip = dir.path().join("chip.json");
    assert_eq!(code(&symmap(&["gen-topology", "grid", "5", "5", "--defects", s(&defects), "-o", s(&chip)])), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&chip).unwrap()).unwrap();
    assert_eq!(v["defects"]["vertices"], serde_json::json!([12]));
    let out = symmap(&["match", s(&fixture("p3.json")), s(&chip)]);
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    for row in rows.as_array().unwrap() {
        let images: Vec<u64> = row["map"].as_array().unwrap().iter().map(|p| p[1].as_u64().unwrap()).collect();
        assert!(!images.contains(&12));
    }
    fs::write(&defects, r#"{"vertices": [99]}"#).unwrap();
    assert_eq!(code(&symmap(&["gen-topology", "grid", "5", "5", "--defects", s(&defects)])), 2);
}

#[test]
fn bench_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let svg = dir.path().join("out.svg");
    let out = symmap(&[
        "bench",
        s(&fixture("suite_small.json")),
        "-o",
        s(&csv),
        "--svg",
        s(&svg),
        "--parallel-validate",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,n,algorithm,wall_time_s,matches,reduced_region_size,repetitions"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert!(!rows.is_empty());
    for r in &rows {
        assert_eq!(r.len(), 7);
        assert_eq!(r[6], "5");
        assert_eq!(r[2] == "sbsm", !r[5].is_empty(), "{r:?}");
    }
    for family in ["grid", "heavy_hex", "octagonal"] {
        assert!(rows.iter().any(|r| r[0] == family && r[2] == "sbcm_pipeline"), "{family}");
    }
    assert!(fs::read_to_string(&svg).unwrap().contains("<polyline"));
}

#[test]
fn bench_rejects_short_suites() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.json");
    let p3 = fixture("p3.json");
    fs::write(
        &suite,
        serde_json::json!({"families": ["grid"], "sizes": [[3, 3]], "patterns": [p3], "reps": 2}).to_string(),
    )
    .unwrap();
    assert_eq!(code(&symmap(&["bench", s(&suite)])), 2);
}
