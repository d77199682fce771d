//! End-to-end behaviour of the `abdyn` binary: pinned reports, exit codes,
//! scenario files and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn abdyn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abdyn")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn example_names() -> Vec<String> {
    let o = abdyn(&["examples", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let list: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    list.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap().to_string()).collect()
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("abdyn-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

/// Set `ABDYN_BLESS=1` to rewrite the pinned reports after an intended change.
#[test]
fn example_reports_match_pinned_golden_files() {
    let bless = std::env::var_os("ABDYN_BLESS").is_some();
    let names = example_names();
    assert!(names.len() >= 7);
    for name in names {
        let o = abdyn(&["classify", "--example", &name, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        let path = golden_dir().join(format!("{name}.json"));
        if bless {
            std::fs::write(&path, &o.stdout).unwrap();
            continue;
        }
        let pinned = std::fs::read(&path).unwrap_or_else(|_| panic!("missing golden file for {name}"));
        assert!(pinned == o.stdout, "{name} report differs from {}", path.display());
    }
}

#[test]
fn amplified_but_not_polarized_example() {
    let o = abdyn(&["classify", "--example", "mult_2_3", "--format", "json"]);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["amplified"]["verdict"], "yes");
    assert_eq!(r["polarized"]["verdict"], "no");
    assert_eq!(r["unity_free"], true);
}

#[test]
fn e4_reports_equal_degrees_at_one() {
    let o = abdyn(&["classify", "--example", "e4_auto"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equal consecutive degrees at j = [1, 2]"), "{}", stdout(&o));
}

#[test]
fn quotient_of_the_shear() {
    let o = abdyn(&["quotient", "--example", "shear", "--sublattice", "first_factor", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // x - 1 on both the subtorus and the quotient
    assert_eq!(r["delta"], serde_json::json!(["-1", "1"]));
    assert_eq!(r["quotient"], serde_json::json!(["-1", "1"]));
    assert_eq!(r["product_identity"], true);
}

#[test]
fn torsion_histogram_of_mult_2_1() {
    // [2] x [1] mod 3: the first factor is x -> 2x (one fixed point, four
    // 2-cycles), the second is the identity on 9 points
    let o = abdyn(&["torsion", "--example", "mult_2_1", "--level", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["node_count"], 81);
    assert_eq!(r["fixed_nodes"], 9);
    assert_eq!(r["cycle_histogram"], serde_json::json!({"1": 9, "2": 36}));
    assert_eq!(r["smith_fixed_count"], "9");
}

#[test]
fn oversized_torsion_levels_are_resource_errors() {
    let o = abdyn(&["torsion", "--level", "10^9"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    let o = abdyn(&["torsion", "--example", "mult_2", "--level", "2000", "--format", "json"]);
    assert_eq!(o.status.code(), Some(4));
    let e: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"]["code"], "resource");
}

#[test]
fn fixed_points_of_an_iterate() {
    let o = abdyn(&["fixed-points", "--example", "mult_2", "--iterate", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // f^2 = [4] on E has |det(4I - I)| = 9 fixed points
    assert_eq!(r["fixed_points"]["count"], "9");
    assert_eq!(r["fixed_points"]["points"].as_array().unwrap().len(), 9);
}

#[test]
fn orbit_of_the_diagonal() {
    let o = abdyn(&["orbit", "--example", "gtz_diag", "--sublattice", "diagonal", "--format", "json"]);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["verdict"]["verdict"], "escaping-within-bound");
    let o = abdyn(&["orbit", "--example", "mult_2_3", "--sublattice", "first_factor", "--format", "json"]);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["verdict"]["verdict"], "invariant");
}

#[test]
fn degrees_subcommand() {
    let o = abdyn(&["degrees", "--example", "mult_2_3", "--precision", "1/1000000", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let lambdas: Vec<&str> = r["degrees"].as_array().unwrap().iter().map(|d| d["lower"].as_str().unwrap()).collect();
    assert_eq!(lambdas, ["1", "9", "36"]);
    assert_eq!(abdyn(&["degrees", "--example", "mult_2", "--precision", "-1"]).status.code(), Some(2));
}

#[test]
fn scenario_files_round_trip() {
    let p = write_temp(
        "gtz.json",
        r#"{
  "torus": { "n": 1, "J": [["0", "-1"], ["1", "0"]] },
  "endomorphism": { "M": [["1", "-2"], ["2", "1"]], "tau": ["1/3", "0"] },
  "sublattices": { "all": [["1", "0"], ["0", "1"]] },
  "budgets": { "torsion": 100 }
}"#,
    );
    let p = p.to_str().unwrap();
    let o = abdyn(&["classify", p, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["det"], "5");
    assert_eq!(r["polarized"]["verdict"], "yes");
    // the file's torsion budget applies: 11^2 > 100
    assert_eq!(abdyn(&["torsion", p, "--level", "11"]).status.code(), Some(4));
    assert_eq!(abdyn(&["torsion", p, "--level", "3"]).status.code(), Some(0));
    assert_eq!(abdyn(&["orbit", p, "--sublattice", "all"]).status.code(), Some(0));
}

#[test]
fn parse_and_validation_errors() {
    let bad = write_temp("bad.json", "{ \"torus\": ");
    let o = abdyn(&["classify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));

    let float = write_temp(
        "float.json",
        r#"{ "torus": { "n": 1, "J": [[0, -1], [1, 0]] }, "endomorphism": { "M": [[2, 0], [0, 2]], "tau": [0.5, 0] } }"#,
    );
    assert_eq!(abdyn(&["classify", float.to_str().unwrap()]).status.code(), Some(2));

    let not_holomorphic = write_temp(
        "shear1.json",
        r#"{ "torus": { "n": 1, "J": [[0, -1], [1, 0]] }, "endomorphism": { "M": [[1, 1], [0, 1]] } }"#,
    );
    let o = abdyn(&["classify", not_holomorphic.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(3));
    let e: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"]["code"], "not-holomorphic");

    let bad_j = write_temp(
        "badj.json",
        r#"{ "torus": { "n": 1, "J": [[0, 1], [1, 0]] }, "endomorphism": { "M": [[1, 0], [0, 1]] } }"#,
    );
    assert_eq!(abdyn(&["classify", bad_j.to_str().unwrap()]).status.code(), Some(3));

    assert_eq!(abdyn(&["classify", "/definitely/not/here.json"]).status.code(), Some(2));
    assert_eq!(abdyn(&["classify", "--example", "no_such_example"]).status.code(), Some(3));
    assert_eq!(abdyn(&["quotient", "--example", "shear", "--sublattice", "nope"]).status.code(), Some(3));
    // the diagonal is not invariant under [2] x [3]
    let o = abdyn(&["quotient", "--example", "mult_2_3", "--sublattice", "diagonal"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("invariance-violation"));
    assert_eq!(abdyn(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic() {
    let a = abdyn(&["sweep", "--count", "1", "--seed", "7"]);
    let b = abdyn(&["sweep", "--count", "1", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let j1 = abdyn(&["sweep", "--count", "4", "--dim", "1", "--seed", "3", "--format", "json"]);
    let j2 = abdyn(&["sweep", "--count", "4", "--dim", "1", "--seed", "3", "--format", "json"]);
    assert_eq!(j1.stdout, j2.stdout);
    let r: serde_json::Value = serde_json::from_slice(&j1.stdout).unwrap();
    assert_eq!(r["samples"], 8);
}

#[test]
fn corrupted_oracle_is_caught() {
    let o = abdyn(&["sweep", "--count", "2", "--dim", "2", "--seed", "7", "--corrupt-oracle", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let v = r["violations"].as_array().unwrap();
    assert!(!v.is_empty());
    // the offending sample is printed as a scenario that replays through classify
    let p = write_temp("replay.json", &serde_json::to_string(&v[0]["scenario"]).unwrap());
    assert_eq!(abdyn(&["classify", p.to_str().unwrap()]).status.code(), Some(0));
}
