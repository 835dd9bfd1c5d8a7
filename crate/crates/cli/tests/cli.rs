use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dadt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dadt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = dadt(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn synth(dir: &Path) {
    let cfg = dir.join("synth.json");
    fs::write(
        &cfg,
        r#"{"n_source": 4000, "n_target": 4000, "source_agreement": 0.08, "label_noise": 0.1, "protected": true}"#,
    )
    .unwrap();
    ok(&["synth", "--config", p(&cfg), "--seed", "5", "-o", p(dir)]);
}

#[test]
fn synth_train_predict_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth(d);
    for f in ["source.csv", "target.csv", "schema.json", "ground_truth.json"] {
        assert!(d.join(f).exists(), "{f}");
    }
    let truth: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("ground_truth.json")).unwrap()).unwrap();
    for cell in truth.as_array().unwrap() {
        assert_eq!(cell["p_y1_source"], cell["p_y1_target"]);
    }

    let (src, tgt, schema) = (d.join("source.csv"), d.join("target.csv"), d.join("schema.json"));
    let (nt, ft) = (d.join("ntdk.json"), d.join("ftdk.json"));
    ok(&["train", "--data", p(&src), "--schema", p(&schema), "-o", p(&nt)]);
    ok(&[
        "train", "--data", p(&src), "--schema", p(&schema), "--regime", "ftdk",
        "--target-sample", p(&tgt), "--x-w", "X2", "-o", p(&ft),
    ]);
    let acc = |tree: &Path| {
        let r: serde_json::Value =
            serde_json::from_str(&ok(&["evaluate", "--tree", p(tree), "--data", p(&tgt)])).unwrap();
        assert!(r["dp"].is_number() && r["eop"].is_number());
        r["acc"].as_f64().unwrap()
    };
    assert!(acc(&ft) > acc(&nt) + 0.5);

    let preds = ok(&["predict", "--tree", p(&ft), "--data", p(&tgt)]);
    let mut lines = preds.lines();
    assert_eq!(lines.next(), Some("row,prediction,p_0,p_1"));
    assert_eq!(lines.count(), 4000);
}

#[test]
fn experiment_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cfg = d.join("exp.json");
    fs::write(
        &cfg,
        r#"{
            "seed": 11,
            "pairs": [
                {"id": "a", "synth": {"n_source": 600, "n_target": 600, "source_agreement": 0.08, "label_noise": 0.1, "protected": true}},
                {"id": "b", "synth": {"n_source": 600, "n_target": 600, "n_attrs": 3, "covshift_violation": 0.25, "protected": true}}
            ],
            "regimes": ["tt", "ntdk", "ptdk2", "ftdk"],
            "tree": {"max_depth": 4},
            "objective": "dp",
            "repeats": 2
        }"#,
    )
    .unwrap();
    ok(&["experiment", p(&cfg), "-o", p(&d.join("one"))]);
    ok(&["experiment", p(&cfg), "-o", p(&d.join("two")), "--threads", "1"]);
    for f in ["results.csv", "scatter.csv", "partial.csv", "heatmap.csv", "attribute_shift.csv"] {
        let a = fs::read(d.join("one").join(f)).unwrap();
        let b = fs::read(d.join("two").join(f)).unwrap();
        assert_eq!(a, b, "{f} differs between runs");
    }
    let csv = fs::read_to_string(d.join("one/results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 4);
}

#[test]
fn shift_report_lists_attributes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth(d);
    let out = ok(&[
        "shift-report", "--source", p(&d.join("source.csv")), "--target", p(&d.join("target.csv")),
        "--schema", p(&d.join("schema.json")),
    ]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "attribute,w_marginal,w_conditional");
    assert!(rows[1].starts_with("X1,") && rows[2].starts_with("X2,"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(dadt(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(dadt(&["--help"]).status.code(), Some(0));
    let missing = d.join("missing.json");
    assert_eq!(dadt(&["experiment", p(&missing)]).status.code(), Some(1));
    let cfg = d.join("noseed.json");
    fs::write(&cfg, r#"{"pairs": []}"#).unwrap();
    let out = dadt(&["experiment", p(&cfg)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));

    synth(d);
    let bad = d.join("bad.csv");
    fs::write(&bad, "X1,X2,Y\n0,7,1\n").unwrap();
    let out = dadt(&[
        "train", "--data", p(&bad), "--schema", p(&d.join("schema.json")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside the declared domain"));
    let out = dadt(&[
        "train", "--data", p(&d.join("source.csv")), "--schema", p(&d.join("schema.json")),
        "--regime", "ftdk",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unseen_values_at_prediction() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth(d);
    let tree = d.join("tree.json");
    ok(&[
        "train", "--data", p(&d.join("source.csv")), "--schema", p(&d.join("schema.json")),
        "--regime", "ftdk", "--target-sample", p(&d.join("target.csv")), "--x-w", "X2",
        "-o", p(&tree),
    ]);
    let probe = d.join("probe.csv");
    fs::write(&probe, "X1,X2\n0,0\n9,9\n").unwrap();
    let out = dadt(&["predict", "--tree", p(&tree), "--data", p(&probe)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 1"));
}
