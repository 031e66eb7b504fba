use canvar::catalog::IDS;
use canvar::geometry::{DiffMode, DifferentiationConfig};
use canvar::identities::{
    check_identity, default_manifolds, guard_tolerance, list_identities, lookup, run_suite, Kind,
    DEFAULT_T_VALUES,
};
use canvar::report::sweep_json;
use canvar::sampling::SampleSpec;

fn all_ids() -> Vec<String> {
    list_identities().iter().map(|s| s.id.to_string()).collect()
}

#[test]
fn trivial_variation_has_zero_residual() {
    let cfg = DifferentiationConfig::default();
    let r = run_suite(
        &default_manifolds(),
        &all_ids(),
        &[0.0],
        &SampleSpec::new(7, 5),
        &cfg,
    )
    .unwrap();
    let ran: Vec<_> = r
        .iter()
        .filter(|c| !c.skipped() && c.kind == Kind::Equality)
        .collect();
    assert!(ran.len() > 20);
    for c in ran {
        assert!(c.pass, "{} {} {}", c.identity, c.manifold, c.field);
        assert!(
            c.max_residual.unwrap() <= 1e-12,
            "{} {} {}: {:e}",
            c.identity,
            c.manifold,
            c.field,
            c.max_residual.unwrap()
        );
    }
}

#[test]
fn guards_are_reported_and_sound() {
    let cfg = DifferentiationConfig::default();
    let tol = guard_tolerance(&cfg);
    let r = run_suite(
        &default_manifolds(),
        &all_ids(),
        &[-2.0, 1.0],
        &SampleSpec::new(42, 6),
        &cfg,
    )
    .unwrap();
    for c in &r {
        let spec = lookup(&c.identity).unwrap();
        for g in spec.requires {
            if let canvar::identities::Guard::Predicate(name) = g {
                let res = c.guards.get(*name).copied();
                if !c.skipped() {
                    assert!(
                        res.unwrap() <= tol,
                        "{} ran with {name} residual {res:?}",
                        c.identity
                    );
                }
            }
        }
        if let Some(reason) = &c.skipped_reason {
            assert!(!reason.is_empty());
            assert!(c.max_residual.is_none());
        }
    }
    let killing_on = |m: &str, f: &str| {
        r.iter()
            .find(|c| c.identity == "eq4.domega" && c.manifold == m && c.field == f)
            .map(|c| !c.skipped())
            .unwrap()
    };
    assert!(killing_on("berger_s3", "E"));
    assert!(!killing_on("hyperbolic_3", "E1"));
    assert!(!killing_on("hyperbolic_3", "E2"));
}

#[test]
fn standard_t_guard_depends_on_causal_character() {
    let cfg = DifferentiationConfig::default();
    let s = SampleSpec::new(1, 4);
    let at = |t: f64| {
        check_identity("cor3.4.eq", "berger_s3", Some("E"), &[t], &s, &cfg).unwrap()[0].clone()
    };
    assert!(!at(-2.0).skipped());
    assert!(at(2.0).skipped());
    assert!(at(1.0).skipped());
}

#[test]
fn berger_scalar_relation_matches_closed_form() {
    let cfg = DifferentiationConfig::default();
    let r = check_identity(
        "cor3.9",
        "berger_s3",
        Some("E"),
        &[-2.0, 1.0, 5.0],
        &SampleSpec::new(42, 20),
        &cfg,
    )
    .unwrap();
    assert_eq!(r.len(), 3);
    assert!(r.iter().all(|c| c.pass && c.max_residual.unwrap() <= 1e-8));
}

#[test]
fn unknown_ids_are_rejected() {
    let cfg = DifferentiationConfig::default();
    let s = SampleSpec::new(1, 2);
    assert!(run_suite(
        &["berger_s3".into()],
        &["nonexistent".into()],
        &[1.0],
        &s,
        &cfg
    )
    .is_err());
    assert!(run_suite(&["nowhere".into()], &["prop2.3".into()], &[1.0], &s, &cfg).is_err());
    assert!(check_identity("prop2.3", "berger_s3", Some("F"), &[1.0], &s, &cfg).is_err());
}

#[test]
fn forbidden_parameter() {
    let cfg = DifferentiationConfig::default();
    let s = SampleSpec::new(1, 2);
    let err = check_identity("prop2.3", "berger_s3", Some("E"), &[-1.0], &s, &cfg);
    assert!(
        matches!(err, Err(canvar::error::Error::ForbiddenParameter { .. })),
        "{err:?}"
    );
    let r = run_suite(
        &["berger_s3".into()],
        &["prop2.3".into()],
        &[-1.0, 1.0],
        &s,
        &cfg,
    )
    .unwrap();
    let bad = r.iter().find(|c| c.t == -1.0).unwrap();
    assert!(!bad.pass);
    assert!(r.iter().any(|c| c.t == 1.0 && c.pass));
}

#[test]
fn finite_difference_sweep_agrees() {
    let cfg = DifferentiationConfig {
        mode: DiffMode::FiniteDifference,
        ..DifferentiationConfig::default()
    };
    let ids = ["prop2.3", "lemma3.1", "cor3.5", "cor3.9", "thm3.6"].map(String::from);
    let r = run_suite(
        &default_manifolds(),
        &ids,
        &[-2.0, 0.5],
        &SampleSpec::new(42, 4),
        &cfg,
    )
    .unwrap();
    let failed: Vec<_> = r
        .iter()
        .filter(|c| c.failed())
        .map(|c| (&c.identity, &c.manifold, c.max_residual))
        .collect();
    assert!(failed.is_empty(), "{failed:?}");
}

#[test]
fn sweep_json_is_reproducible() {
    let cfg = DifferentiationConfig::default();
    let ms: Vec<String> = IDS.iter().take(4).map(|s| s.to_string()).collect();
    let run = || {
        let r = run_suite(
            &ms,
            &all_ids(),
            &DEFAULT_T_VALUES,
            &SampleSpec::new(42, 3),
            &cfg,
        )
        .unwrap();
        sweep_json(&r, 42, cfg.mode).unwrap()
    };
    let a = run();
    assert_eq!(a, run());
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    for cell in v["cells"].as_array().unwrap() {
        assert!(cell["citation"].as_str().is_some_and(|s| !s.is_empty()));
    }
}
