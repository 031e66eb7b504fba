use std::process::Command;

use canvar::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["canvar".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn verify_berger_scalar_relation() {
    let (code, out, _) = call(&[
        "verify",
        "--manifolds",
        "berger_s3",
        "--identities",
        "cor3.9",
        "--t",
        "-2,1,5",
        "--seed",
        "42",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("3 passed, 0 failed, 0 skipped"), "{out}");
}

#[test]
fn unknown_identity_is_a_usage_error() {
    let (code, _, err) = call(&["verify", "--identities", "nonexistent"]);
    assert_eq!(code, 2);
    assert!(err.contains("--identities"), "{err}");
    let (code, _, err) = call(&["verify", "--manifolds", "klein_bottle"]);
    assert_eq!(code, 2);
    assert!(err.contains("--manifolds"), "{err}");
}

#[test]
fn malformed_flags_name_the_flag() {
    for (args, flag) in [
        (vec!["verify", "--t", "1,x"], "--t"),
        (vec!["verify", "--tolerance", "exactness=1"], "--tolerance"),
        (vec!["--fd-step", "-1", "verify"], "--fd-step"),
        (
            vec![
                "geodesic", "sphere_2", "--p0", "1", "--v0", "1,0", "--T", "1",
            ],
            "--p0",
        ),
        (
            vec!["geodesic", "sphere_2", "--p0", "1,0", "--v0", "1,0"],
            "--T",
        ),
        (vec!["nullsurf", "cone_3", "--points", "0"], "--points"),
    ] {
        let (code, _, err) = call(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(err.contains(flag), "{args:?}: {err}");
    }
    let (code, _, _) = call(&["verify", "--no-such-flag"]);
    assert_eq!(code, 2);
}

#[test]
fn geodesic_length_row() {
    let (code, out, _) = call(&[
        "geodesic",
        "incomplete_plane",
        "--p0",
        "0,0",
        "--v0",
        "1,1",
        "--T",
        "40",
    ]);
    assert_eq!(code, 0);
    let row = out.lines().find(|l| l.starts_with("length")).unwrap();
    let value: f64 = row.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(
        (value - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6,
        "{row}"
    );
    assert!(out.contains("step_underflow"));
}

#[test]
fn json_output_is_stable_and_parseable() {
    let args = [
        "--format",
        "json",
        "verify",
        "--manifolds",
        "sphere_2,hyperbolic_2",
        "--identities",
        "prop2.3,cor3.3",
        "--samples",
        "4",
    ];
    let (code, a, _) = call(&args);
    let (_, b, _) = call(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["mode"], "forward_exact");
    let cells = v["cells"].as_array().unwrap();
    assert!(!cells.is_empty());
    for c in cells {
        for key in [
            "identity",
            "manifold",
            "t",
            "samples",
            "max_residual",
            "mean_residual",
            "pass",
            "citation",
        ] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
        if c["pass"] == true {
            assert!(c.get("skipped_reason").is_none());
        }
    }
}

#[test]
fn config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# sweep\nmanifolds = sphere_2\nidentities = prop2.3\nt = 0.5\nsamples = 2\nformat = json\n").unwrap();
    let c = cfg.to_str().unwrap();
    let (code, out, _) = call(&["--config", c, "verify"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 1);
    let (_, out, _) = call(&["--config", c, "--format", "text", "verify", "--t", "0.5,1"]);
    assert!(out.contains("2 passed"), "{out}");

    std::fs::write(&cfg, "speed = 3\n").unwrap();
    let (code, _, err) = call(&["--config", c, "verify"]);
    assert_eq!(code, 2);
    assert!(err.contains("--config") && err.contains("speed"));
}

#[test]
fn output_sink() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, out, _) = call(&[
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
        "verify",
        "--manifolds",
        "sphere_2",
        "--identities",
        "prop2.3",
        "--samples",
        "2",
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .contains("\"schema_version\": 1"));
    let (code, _, err) = call(&["--output", "/nonexistent-dir/r.txt", "catalog", "list"]);
    assert_eq!(code, 2);
    assert!(err.contains("--output"));
}

#[test]
fn informational_commands() {
    let (code, out, _) = call(&["catalog", "list"]);
    assert_eq!(code, 0);
    assert!(out.contains("berger_s3") && out.contains("cone_3") && out.contains("lemma3.1"));
    let (code, out, _) = call(&[
        "--format",
        "json",
        "curvature",
        "berger_s3",
        "--t",
        "-2",
        "--point",
        "0.5,0.1,0.2",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["scalar"].as_f64().unwrap() - 10.0).abs() < 1e-10);
    let (code, out, _) = call(&["probe", "euclidean_2", "--seeds", "3", "--T", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("reached_T 100.0%"), "{out}");
}

#[test]
fn nullsurf_command() {
    let (code, out, _) = call(&["nullsurf", "cone_3", "--points", "10"]);
    assert_eq!(code, 0);
    assert!(!out.contains("FAIL"));
    let (code, _, err) = call(&["nullsurf", "slice_3"]);
    assert_eq!(code, 2);
    assert!(
        err.contains("lightlike") || err.contains("example"),
        "{err}"
    );
    let (code, _, _) = call(&["nullsurf", "torus"]);
    assert_eq!(code, 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_canvar");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["catalog", "list"]), Some(0));
    assert_eq!(status(&["verify", "--identities", "nonexistent"]), Some(2));
    assert_eq!(status(&["frobnicate"]), Some(2));
    assert_eq!(status(&["--help"]), Some(0));
}
