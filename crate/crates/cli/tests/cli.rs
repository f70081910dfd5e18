use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use selfishness_cli::{parse_game, render_game};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn exe(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_selfishness"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    // the binary may exit before reading stdin
    let _ = child.stdin.take().unwrap().write_all(stdin.as_bytes());
    child.wait_with_output().unwrap()
}

fn stdout(args: &[&str], stdin: &str) -> String {
    let out = exe(args, stdin);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str], stdin: &str) -> serde_json::Value {
    serde_json::from_str(&stdout(args, stdin)).unwrap()
}

fn level_of_family(args: &[&str]) -> String {
    let doc = stdout(&[&["generate"], args].concat(), "");
    stdout(&["level"], &doc)
}

#[test]
fn generate_level_pipelines() {
    assert_eq!(level_of_family(&["pd_n", "--param", "n=2"]), "1\n");
    assert_eq!(level_of_family(&["pd_n", "--param", "n=4"]), "1/5\n");
    assert_eq!(level_of_family(&["travelers"]), "1/2\n");
    assert_eq!(level_of_family(&["matching_pennies"]), "inf\n");
    assert_eq!(level_of_family(&["battle_of_sexes"]), "0\n");
    assert_eq!(level_of_family(&["f_level", "--param", "n=3", "--param", "f=7/2"]), "7/2\n");
    assert_eq!(level_of_family(&["cost_sharing_singleton_tight", "--param", "c_max=10", "--param", "c_min=1"]), "4\n");
    assert_eq!(
        level_of_family(&["congestion_integer_tight", "--param", "l=2", "--param", "delta_max=3", "--param", "delta_min=1"]),
        "2\n"
    );
}

#[test]
fn analyze_report() {
    let report = json(&["analyze", fixture("pd.json").to_str().unwrap()], "");
    assert_eq!(report["nash_equilibria"], serde_json::json!([["D", "D"]]));
    assert_eq!(report["level"]["kind"], "finite");
    assert_eq!(report["level"]["value"], "1");
    assert_eq!(report["level"]["deviation"]["player"], "row");
    assert_eq!(report["level"]["deviation"]["to"], "D");
    assert_eq!(report["price_of_stability"], "2");
    let game = parse_game(&report["game"].to_string()).unwrap();
    assert_eq!(game, parse_game(&std::fs::read_to_string(fixture("pd.json")).unwrap()).unwrap());

    let mp = json(&["analyze", fixture("matching_pennies_sparse.json").to_str().unwrap()], "");
    assert_eq!(mp["level"]["kind"], "infinite");
    assert_eq!(mp["price_of_stability"], serde_json::Value::Null);
}

#[test]
fn report_body_is_deterministic() {
    let path = fixture("pd3.json");
    let strip = |mut v: serde_json::Value| {
        v.as_object_mut().unwrap().remove("timings");
        v
    };
    let a = strip(json(&["analyze", path.to_str().unwrap()], ""));
    let b = strip(json(&["analyze", path.to_str().unwrap()], ""));
    assert_eq!(a, b);
}

#[test]
fn transform_output_parses_back() {
    let pd = std::fs::read_to_string(fixture("pd.json")).unwrap();
    let out = stdout(&["transform", "--alpha", "1"], &pd);
    let game = parse_game(&out).unwrap();
    assert_eq!(stdout(&["level"], &out), "0\n");
    let back = stdout(&["transform", "--alpha", "1", "--inverse"], &out);
    assert_eq!(parse_game(&back).unwrap(), parse_game(&pd).unwrap());
    let shifted = stdout(&["transform", "--alpha", "0", "--shift", "-7/3", "--scale", "5"], &pd);
    assert_eq!(stdout(&["level"], &shifted), "1\n");
    let model_c = stdout(&["transform", "--model", "C", "--alpha", "1/2"], &pd);
    assert_eq!(stdout(&["level"], &model_c), "0\n");
    assert_eq!(game.player_count(), 2);
}

#[test]
fn dynamics_and_sweep() {
    let wa = stdout(&["generate", "weakly_acyclic"], "");
    let report = json(&["dynamics"], &wa);
    assert_eq!(report["weakly_acyclic"], true);
    assert_eq!(report["finite_improvement_property"], false);
    assert_eq!(report["potential_certificate"], false);

    let pd = std::fs::read_to_string(fixture("pd.json")).unwrap();
    let sweep = json(&["sweep", "--alphas", "0,1,2"], &pd);
    let pos: Vec<&str> = sweep["rows"].as_array().unwrap().iter().map(|r| r["price_of_stability"].as_str().unwrap()).collect();
    assert_eq!(pos, ["2", "1", "1"]);
}

#[test]
fn closedform_command() {
    let v = json(&["closedform", "pd_n", "--param", "n=3"], "");
    assert_eq!(v, serde_json::json!({ "kind": "exact", "value": "1/3" }));
    let v = json(&["closedform", "cournot", "--param", "a=5", "--param", "b=2", "--param", "c=1"], "");
    assert_eq!(v["kind"], "infinite");
    let v = json(&["closedform", "public_goods_cont", "--param", "n=4", "--param", "b=1", "--param", "c=2"], "");
    assert_eq!(v["value"], "1/2");
}

#[test]
fn generate_from_spec_file() {
    let dir = std::env::temp_dir().join(format!("selfishness-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.json");
    std::fs::write(
        &path,
        r#"{"family":"cost_sharing","costs":["10","1"],"strategies":[[[0]],[[0],[1]]]}"#,
    )
    .unwrap();
    let doc = stdout(&["generate", "--spec", path.to_str().unwrap()], "");
    assert_eq!(stdout(&["level"], &doc), "4\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let bad = exe(&["level"], "{\"orientation\": }");
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 1"));

    let missing = r#"{"orientation":"payoff","players":[{"name":"a","strategies":["x","y"]},{"name":"b","strategies":["x"]}],
        "payoffs":[{"profile":["x","x"],"values":[1,1]}]}"#;
    let out = exe(&["level"], missing);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("y,x"));

    assert_eq!(exe(&["generate", "pd_n", "--param", "n=1"], "").status.code(), Some(2));
    assert_eq!(exe(&["generate", "pd_n", "--param", "n=24"], "").status.code(), Some(3));
    assert_eq!(exe(&["--cap", "3", "generate", "pd_n", "--param", "n=2"], "").status.code(), Some(3));
    let pd = std::fs::read_to_string(fixture("pd.json")).unwrap();
    assert_eq!(exe(&["--cap", "3", "analyze"], &pd).status.code(), Some(3));
    assert_eq!(exe(&["transform", "--alpha", "-1"], &pd).status.code(), Some(2));
    assert_eq!(exe(&["transform", "--model", "B", "--alpha", "2"], &pd).status.code(), Some(2));
}

#[test]
fn fixtures_round_trip() {
    for entry in std::fs::read_dir(fixture("")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let game = parse_game(&text).unwrap();
        let rendered = render_game(&game, None);
        assert_eq!(parse_game(&rendered).unwrap(), game, "{}", path.display());
    }
}
