use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};
use subshift::format::{write_pattern, write_torus};
use subshift::{zoo, Pattern, TorusConfig};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_subshift"));
    c.env_remove("SUBSHIFT_BUDGET_NODES").env_remove("SUBSHIFT_BUDGET_MILLIS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn golden_mean_strip_entropy() {
    let o = run(&["entropy", "--shift", "golden-mean", "--strip", "1"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8(o.stdout).unwrap();
    let row = out.lines().nth(1).unwrap();
    let upper: f64 = row.split('\t').nth(1).unwrap().parse().unwrap();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((upper - phi.ln()).abs() < 1e-9, "{out}");
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("# {"));
}

#[test]
fn malformed_spec_is_an_input_fault() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.spec");
    std::fs::write(&bad, "format_version 1\nkind shift\ndimension two\n").unwrap();
    let o = run(&["validate", "--spec", p(&bad)]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8(o.stderr).unwrap();
    let last = err.lines().last().unwrap();
    let v: Value = serde_json::from_str(last).unwrap();
    assert_eq!(v["error"], "parse");
    let o = run(&["count", "--shift", "no-such-shift", "--box", "1"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn good_wave_claim_verifies() {
    let o = run(&["claim", "good-wave", "--torus", "3,3,5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["verdict"], "verified");
    assert_eq!(v["params"]["blank_tori"], 1);
    assert_eq!(v["header"]["verb"], "claim");
    assert_eq!(v["header"]["spec_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn counterexample_exit_and_artifacts_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "claim",
        "density",
        "--shift",
        "golden-mean",
        "--n",
        "3",
        "--periods",
        "7",
        "--artifacts",
        p(dir.path()),
    ]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["verdict"], "counterexample");
    let mut files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    let pattern = files.iter().find(|f| f.extension().is_some_and(|e| e == "pattern")).expect("pattern artifact");
    // The uncompletable pattern is still locally valid.
    let o = run(&["validate", "--shift", "golden-mean", "--pattern", p(pattern)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["valid"], true);
}

#[test]
fn budget_exhaustion_exit() {
    let o = run(&["count", "--shift", "x-struct", "--box", "3", "--budget-nodes", "50"]);
    assert_eq!(code(&o), 3);
    let o = bin().args(["count", "--shift", "x-struct", "--box", "3"]).env("SUBSHIFT_BUDGET_NODES", "50").output().unwrap();
    assert_eq!(code(&o), 3);
    let o = run(&["count", "--shift", "hard-squares", "--box", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "63");
}

#[test]
fn spec_round_trip_keeps_hash() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("x.spec");
    let o = run(&["validate", "--shift", "x-struct", "--write-spec", "--out", p(&f)]);
    assert_eq!(code(&o), 0);
    let a = run(&["validate", "--shift", "x-struct"]);
    let b = run(&["validate", "--spec", p(&f)]);
    assert_eq!(code(&b), 0);
    assert_eq!(json(&a)["header"]["spec_sha256"], json(&b)["header"]["spec_sha256"]);
    assert_eq!(json(&b)["rules"], json(&a)["rules"]);
    // Only the written file is left behind.
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn witness_tori_revalidate() {
    let dir = tempfile::tempdir().unwrap();
    let hs = zoo::hard_squares();
    let a = hs.alphabet();
    let f = subshift::box_support(2, 0);
    let (pp, qq) = (dir.path().join("p.pattern"), dir.path().join("q.pattern"));
    std::fs::write(&pp, write_pattern(&Pattern::constant(&f, 0), a)).unwrap();
    std::fs::write(&qq, write_pattern(&Pattern::constant(&f, 1), a)).unwrap();
    let art = dir.path().join("witness");
    let o = run(&["exchange", "--shift", "hard-squares", "--p", p(&pp), "--q", p(&qq), "--mode", "torus", "--artifacts", p(&art)]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"], "witness");
    for side in ["left", "right"] {
        let o = run(&["validate", "--shift", "hard-squares", "--torus", p(&art.join(format!("{side}.torus")))]);
        assert_eq!(code(&o), 0);
        assert_eq!(json(&o)["valid"], true);
    }
}

#[test]
fn invalid_torus_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.torus");
    std::fs::write(&t, write_torus(&TorusConfig::constant(vec![2, 2], 1), zoo::hard_squares().alphabet())).unwrap();
    let o = run(&["validate", "--shift", "hard-squares", "--torus", p(&t)]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["valid"], false);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for f in [&a, &b] {
        let o = run(&["claim", "pasting", "--pairs", "3", "--seed", "7", "--out", p(f)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let o = run(&["claim", "pasting", "--pairs", "3", "--seed", "8"]);
    assert_eq!(json(&o)["header"]["seed"], 8);
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let gw = zoo::good_wave();
    let (e, c) = (gw.symbol("white.e").unwrap(), gw.symbol("white.c").unwrap());
    let t = TorusConfig::from_fn(vec![3, 3, 5], |x| if x[2] == 2 { c } else { e });
    let tf = dir.path().join("wave.torus");
    std::fs::write(&tf, write_torus(&t, gw.alphabet())).unwrap();
    let render = |style: &str| run(&["render", "--shift", "good-wave", "--torus", p(&tf), "--style", style]);
    let (a, b) = (render("panels"), render("panels"));
    assert_eq!(code(&a), 0);
    assert!(a.stdout.starts_with(b"<svg"));
    assert_eq!(a.stdout, b.stdout);
    assert!(render("ppm").stdout.starts_with(b"P6"));

    let line = dir.path().join("line.pattern");
    std::fs::write(&line, write_pattern(&Pattern::word(0, &[0, 1, 0]), zoo::golden_mean().alphabet())).unwrap();
    let o = run(&["render", "--shift", "golden-mean", "--pattern", p(&line)]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsupported-dimension"));
}

#[test]
fn worm_chain_claim() {
    let o = run(&["claim", "worm-chain", "--from", "0", "--to", "3", "--window", "3"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["params"]["steps"], 3);
    assert_eq!(v["passed"], 3);
}
