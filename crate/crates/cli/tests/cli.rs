use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_schurian"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", stdout(o), String::from_utf8_lossy(&o.stderr))
    })
}

fn gen(args: &[&str]) -> String {
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    let o = run(&full, None);
    assert!(o.status.success());
    stdout(&o)
}

#[test]
fn groupoid_pi1_report() {
    let o = run(&["pi1"], Some(&gen(&["groupoid", "2"])));
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["generators"], 1);
    assert_eq!(r["relators"], 2);
    assert_eq!(r["abelianization"]["rank"], 0);
    assert_eq!(r["abelianization"]["torsion"], serde_json::json!([]));
    assert_eq!(r["base"], "1");
}

#[test]
fn ladder_hurewicz_report() {
    let o = run(&["hurewicz", "--field", "q"], Some(&gen(&["ladder", "1", "0"])));
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["dimCharacters"], 1);
    assert_eq!(r["dimHH1"], 1);
    assert_eq!(r["rank"], 1);
    assert_eq!(r["verdict"], "isomorphism");

    let o = run(&["hurewicz", "--field", "gf:7"], Some(&gen(&["ladder", "2", "1"])));
    assert_eq!(json(&o)["verdict"], "isomorphism");
}

#[test]
fn ladder_cw_counts() {
    let o = run(&["cw", "--emit", "json"], Some(&gen(&["ladder", "1", "0"])));
    let r = json(&o);
    assert_eq!(r["vertices"], 4);
    assert_eq!(r["edges"], 6);
    assert_eq!(r["twoCells"], 2);
    assert_eq!(r["euler"], 0);
    assert_eq!(r["complex"]["twoCells"][0]["kind"], "triangle");

    let dot = stdout(&run(&["cw", "--emit", "dot"], Some(&gen(&["ladder", "1", "0"]))));
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("// triangle"));
}

#[test]
fn golden_ladder_file() {
    let golden = std::fs::read_to_string(data("ladder_1_0.json")).unwrap();
    assert_eq!(gen(&["ladder", "1", "0"]).trim_end(), golden.trim_end());
    let o = run(&["validate", "--strict", data("ladder_1_0.json").to_str().unwrap()], None);
    let r = json(&o);
    assert_eq!(r["valid"], true);
    assert_eq!(r["objects"], 4);
    assert_eq!(r["homs"], 6);
    assert_eq!(r["nonzeroComposites"], 2);
}

#[test]
fn abelian_cross_check() {
    let r = json(&run(&["abelian"], Some(&gen(&["ladder", "4", "2"]))));
    assert_eq!(r["agree"], true);
    assert_eq!(r["cellularH1"]["group"], "Z");
}

#[test]
fn characters_and_hh1() {
    let ladder = gen(&["ladder", "1", "0"]);
    let r = json(&run(&["characters", "--field", "gf:5"], Some(&ladder)));
    assert_eq!(r["dimension"], 1);
    assert_eq!(r["field"], "gf:5");
    let r = json(&run(&["hh1"], Some(&ladder)));
    assert_eq!(r["dimension"], 1);
    assert_eq!(r["dimDerivations"], 4);
    assert_eq!(r["dimInner"], 3);
    assert_eq!(r["cohomologyDimH1"], 1);
}

#[test]
fn simplified_presentation() {
    let r = json(&run(&["pi1", "--simplify"], Some(&gen(&["ladder", "2", "0"]))));
    assert_eq!(r["simplified"], true);
    assert_eq!(r["generators"], 1);
    assert_eq!(r["relators"], 0);
}

#[test]
fn reports_are_deterministic() {
    let ladder = gen(&["ladder", "3", "1"]);
    for args in [&["pi1"][..], &["hh1"], &["hurewicz"], &["cw"], &["grading", "universal"]] {
        let a = run(args, Some(&ladder));
        let b = run(args, Some(&ladder));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn round_trip_through_validate() {
    let g = gen(&["groupoid", "3", "--field", "gf:3"]);
    let file: Value = serde_json::from_str(&g).unwrap();
    assert_eq!(file["field"], serde_json::json!({"gf": 3}));
    let r = json(&run(&["validate", "--strict"], Some(&g)));
    assert_eq!(r["valid"], true);
    assert_eq!(r["homs"], 6);
}

#[test]
fn input_errors_exit_two() {
    let o = run(&["pi1", "--base", "nowhere"], Some(&gen(&["groupoid", "2"])));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nowhere"));

    let o = run(&["validate"], Some("{ not json"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));

    let undeclared = r#"{"field": "rational", "objects": ["x", "y"],
        "homs": [{"from": "x", "to": "y", "name": "f"}],
        "compositions": [{"g": "h", "f": "f", "result": "zero", "scalar": "0"}]}"#;
    let o = run(&["validate"], Some(undeclared));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("`h`"));

    let o = run(&["gen", "ladder", "2", "5"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_category_is_reported() {
    // f then g lands in the identity, but g then f composes to zero: the
    // triple (f, g, f) is not associative.
    let text = r#"{"field": "rational", "objects": ["x", "y"],
        "homs": [{"from": "x", "to": "y", "name": "f"}, {"from": "y", "to": "x", "name": "g"}],
        "compositions": [{"g": "g", "f": "f", "result": "identity", "scalar": "1"}]}"#;
    let o = run(&["validate"], Some(text));
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(r["valid"], false);
    assert!(!r["violations"].as_array().unwrap().is_empty());
    let o = run(&["pi1"], Some(text));
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["validate", "--no-validate"], Some(text));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn grading_commands() {
    let ladder = data("ladder_1_0.json");
    let ladder = ladder.to_str().unwrap();
    let z = data("ladder_z.json");
    let z = z.to_str().unwrap();
    let mod2 = data("ladder_mod2.json");
    let mod2 = mod2.to_str().unwrap();

    let o = run(&["grading", "check", "--grading", z, ladder], None);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["grading", "connected", "--grading", z, ladder], None);
    assert_eq!(json(&o)["connected"], true);

    let o = run(&["grading", "quotient", "--grading", z, ladder], None);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["images"]["alpha1"], serde_json::json!([1]));
    assert_eq!(r["images"]["gamma0"], serde_json::json!([0]));

    let o = run(&["grading", "smash", "--grading", mod2, ladder], None);
    let r = json(&o);
    assert_eq!(r["objects"].as_array().unwrap().len(), 8);
    assert_eq!(r["metadata"]["connected"], true);

    let shift = data("ladder_shift.json");
    let o = run(&["grading", "conjugate", "--grading", z, "--conjugator", shift.to_str().unwrap(), ladder], None);
    let r = json(&o);
    assert_eq!(r["degrees"]["beta1"], serde_json::json!([1]));
}

#[test]
fn groupoid_c2_grading() {
    let g2 = gen(&["groupoid", "2"]);
    let c2 = data("groupoid2_c2.json");
    let c2 = c2.to_str().unwrap();
    let o = run(&["grading", "connected", "--grading", c2], Some(&g2));
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["index"], 2);

    let o = run(&["grading", "quotient", "--grading", c2], Some(&g2));
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["surjective"], false);

    let swap = data("groupoid2_swap.json");
    let o = run(&["grading", "smash", "--grading", c2, "--conjugator", swap.to_str().unwrap()], Some(&g2));
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["metadata"]["components"], 2);
    assert_eq!(r["metadata"]["isoWitness"]["holds"], true);
    assert_eq!(r["metadata"]["isoWitness"]["objectMap"]["2@1"], "2@g");

    // the smash output is itself a category file
    let smash = stdout(&o);
    let v = json(&run(&["validate", "--strict"], Some(&smash)));
    assert_eq!(v["valid"], true);
    assert_eq!(v["connected"], false);
}

#[test]
fn universal_grading_round_trip() {
    let ladder = gen(&["ladder", "2", "1"]);
    let o = run(&["grading", "universal"], Some(&ladder));
    assert_eq!(o.status.code(), Some(0));
    let dir = std::env::temp_dir().join(format!("schurian-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("universal.json");
    std::fs::write(&path, &o.stdout).unwrap();
    let o = run(&["grading", "check", "--grading", path.to_str().unwrap()], Some(&ladder));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["valid"], true);
    // decision procedures refuse presented targets
    let o = run(&["grading", "connected", "--grading", path.to_str().unwrap()], Some(&ladder));
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
