//! Acceptance harness: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use canvar::catalog::{all_entries, check_assertion, get_entry, Check, IDS};
use canvar::geodesics::{completeness_probe, curve_length, IntegratorConfig, Line, SeedSpec};
use canvar::geometry::{curvature_bundle, DiffMode, DifferentiationConfig};
use canvar::identities::{
    check_identity, list_identities, run_suite, VerificationReport, DEFAULT_T_VALUES,
};
use canvar::nullsurf::{analyze, get_null_example};
use canvar::report::sweep_json;
use canvar::sampling::SampleSpec;
use canvar::variation::{Variation, VariationConfig};

const SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn fe() -> DifferentiationConfig {
    DifferentiationConfig::default()
}

fn strings(ids: &[&str]) -> Vec<String> {
    ids.iter().map(|s| s.to_string()).collect()
}

fn worst(reports: &[VerificationReport]) -> f64 {
    reports
        .iter()
        .filter_map(|r| r.max_residual)
        .fold(0.0, f64::max)
}

fn describe_failures(reports: &[VerificationReport]) -> String {
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| r.failed())
        .take(5)
        .map(|r| format!("{}/{}/{}/t={}", r.identity, r.manifold, r.field, r.t))
        .collect();
    bad.join(", ")
}

fn c1_berger_scalar() -> Outcome {
    let start = Instant::now();
    let e = get_entry("berger_s3").unwrap();
    let pts = SampleSpec::new(SEED, 100).points(&e.sample_box, "acceptance:berger");
    let mut err: f64 = 0.0;
    for t in [-2.0, -0.5, 1.0, 5.0] {
        let v = Variation::new(&VariationConfig {
            t,
            base: e.chart.clone(),
            e: e.field("E").unwrap().clone(),
        })
        .unwrap();
        let expected = 2.0 * (3.0 - t);
        for p in &pts {
            let b = curvature_bundle(&v.varied, p, None, &fe()).unwrap();
            err = err.max((b.scalar - expected).abs() / expected.abs());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        err <= 1e-8 && elapsed <= Duration::from_secs(10),
        format!(
            "max relative error {err:.2e}, {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn c2_hyperbolic_transmutation() -> Outcome {
    let e = get_entry("hyperbolic_3").unwrap();
    let samples = SampleSpec::new(SEED, 100);
    let mut details = Vec::new();
    let mut pass = true;
    for (field, value) in [("E1", 1.0), ("E2", -1.0)] {
        let a = e
            .known
            .iter()
            .find(|a| matches!(&a.check, Check::Sectional { field: Some(f), t, value: v } if f == field && *t == -2.0 && *v == value))
            .expect("catalog assertion");
        let o = check_assertion(&e, a, &samples, &fe()).unwrap();
        pass &= o.pass && o.value <= 1e-8;
        details.push(format!("{field}: K = {value:+} within {:.2e}", o.value));
    }
    outcome(pass, details.join("; "))
}

fn c3_surface_gauss() -> Outcome {
    let r = check_identity(
        "cor3.3",
        "hyperbolic_2",
        Some("E1"),
        &[-3.0, -0.5, 1.0, 3.0],
        &SampleSpec::new(SEED, 100),
        &fe(),
    )
    .unwrap();
    let ran = r.iter().filter(|c| !c.skipped()).count();
    let w = worst(&r);
    outcome(
        ran == 4 && r.iter().all(|c| c.pass) && w <= 1e-8,
        format!("{ran}/4 cells evaluated, max residual {w:.2e}"),
    )
}

fn c4_difference_tensor() -> Outcome {
    let mut cfg = fe();
    cfg.tolerances.insert("equality".into(), 1e-9);
    let r = run_suite(
        &strings(IDS),
        &strings(&["prop2.3"]),
        &DEFAULT_T_VALUES,
        &SampleSpec::new(SEED, 50),
        &cfg,
    )
    .unwrap();
    let failed = r.iter().filter(|c| c.failed()).count();
    outcome(
        failed == 0 && !r.is_empty(),
        format!(
            "{} cells, {failed} failed, max residual {:.2e} {}",
            r.len(),
            worst(&r),
            describe_failures(&r)
        ),
    )
}

fn c5_curvature_difference() -> Outcome {
    let r = run_suite(
        &strings(IDS),
        &strings(&["lemma3.1"]),
        &DEFAULT_T_VALUES,
        &SampleSpec::new(SEED, 20),
        &fe(),
    )
    .unwrap();
    let failed = r.iter().filter(|c| c.failed()).count();
    let skipped = r.iter().filter(|c| c.skipped()).count();
    outcome(
        failed == 0 && !r.is_empty(),
        format!(
            "{} cells, {failed} failed, {skipped} skipped, max residual {:.2e} {}",
            r.len(),
            worst(&r),
            describe_failures(&r)
        ),
    )
}

fn c6_full_sweep() -> Outcome {
    let start = Instant::now();
    let ids: Vec<String> = list_identities().iter().map(|s| s.id.to_string()).collect();
    let r = run_suite(
        &strings(IDS),
        &ids,
        &DEFAULT_T_VALUES,
        &SampleSpec::new(SEED, 20),
        &fe(),
    )
    .unwrap();
    let elapsed = start.elapsed();
    let failed = r.iter().filter(|c| c.failed()).count();
    let skipped = r.iter().filter(|c| c.skipped()).count();
    outcome(
        failed == 0 && elapsed <= Duration::from_secs(300),
        format!(
            "{} cells, {failed} failed, {skipped} skipped, {:.1} s {}",
            r.len(),
            elapsed.as_secs_f64(),
            describe_failures(&r)
        ),
    )
}

fn c7_incomplete_length() -> Outcome {
    let e = get_entry("incomplete_plane").unwrap();
    let chart = e.probe_chart().unwrap();
    let line = Line {
        origin: vec![0.0, 0.0],
        direction: vec![1.0, 1.0],
    };
    let l = curve_length(&chart, &line, (0.0, 40.0)).unwrap();
    let err = (l.value - std::f64::consts::FRAC_1_SQRT_2).abs();
    outcome(
        err <= 1e-6,
        format!("length {:.15}, error {err:.2e}", l.value),
    )
}

fn c8_killing_scalar() -> Outcome {
    let r = check_identity(
        "prop4.1.4",
        "berger_s3",
        Some("E"),
        &[-2.0],
        &SampleSpec::new(SEED, 100),
        &fe(),
    )
    .unwrap();
    let ran = r.iter().filter(|c| !c.skipped()).count();
    let w = worst(&r);
    outcome(
        ran == 1 && r.iter().all(|c| c.pass) && w <= 1e-8,
        format!("{ran}/1 cells evaluated, max residual {w:.2e}"),
    )
}

fn c9_null_forms() -> Outcome {
    let samples = SampleSpec::new(SEED, 50);
    let mut pass = true;
    let mut details = Vec::new();
    for id in ["hyperplane_3", "hyperplane_4"] {
        let r = analyze(&get_null_example(id).unwrap(), &samples, &fe()).unwrap();
        let m = r
            .max_magnitudes
            .values()
            .chain(r.max_residuals.values())
            .fold(0.0, |a: f64, &b| a.max(b));
        pass &= m <= 1e-10;
        details.push(format!("{id} forms and residuals ≤ {m:.1e}"));
    }
    for id in ["cone_3", "cone_4"] {
        let r = analyze(&get_null_example(id).unwrap(), &samples, &fe()).unwrap();
        let m = r.max_residuals.values().fold(0.0, |a: f64, &b| a.max(b));
        pass &= m <= 1e-8;
        details.push(format!("{id} residuals ≤ {m:.1e}"));
    }
    outcome(pass, details.join("; "))
}

fn c10_properties() -> Outcome {
    let mut details = Vec::new();

    let mut drift: f64 = 0.0;
    for e in all_entries() {
        let chart = e.probe_chart().unwrap();
        let spec = SeedSpec {
            samples: SampleSpec::new(SEED, 4),
            seed_box: e.probe.seed_box.clone(),
            direction: e.probe.direction.clone(),
        };
        let s =
            completeness_probe(&chart, &spec, 5.0, &IntegratorConfig::default(), &fe()).unwrap();
        for run in &s.runs {
            if run.final_parameter > 0.0 {
                drift = drift.max(run.norm_drift / run.final_parameter);
            }
        }
    }
    details.push(format!("drift {drift:.1e}/unit"));

    let mut fd = fe();
    fd.mode = DiffMode::FiniteDifference;
    let rel = |a: f64, b: f64| (a - b).abs() / (1.0 + a.abs().max(b.abs()));
    let mut gap: f64 = 0.0;
    for e in all_entries() {
        for p in SampleSpec::new(SEED, 3).points(&e.sample_box, &format!("acceptance:fd:{}", e.id))
        {
            let x = curvature_bundle(&e.chart, &p, None, &fe()).unwrap();
            let y = curvature_bundle(&e.chart, &p, None, &fd).unwrap();
            let pairs = x
                .gamma
                .data
                .iter()
                .zip(&y.gamma.data)
                .chain(x.riemann.data.iter().zip(&y.riemann.data))
                .chain(x.ricci.iter().zip(y.ricci.iter()))
                .chain(std::iter::once((&x.scalar, &y.scalar)));
            for (a, b) in pairs {
                gap = gap.max(rel(*a, *b));
            }
        }
    }
    details.push(format!("fd vs exact {gap:.1e}"));

    let ids: Vec<String> = list_identities().iter().map(|s| s.id.to_string()).collect();
    let doc = || {
        let r = run_suite(
            &strings(&["berger_s3", "hyperbolic_2"]),
            &ids,
            &[-2.0, 1.0],
            &SampleSpec::new(SEED, 5),
            &fe(),
        )
        .unwrap();
        sweep_json(&r, SEED, DiffMode::ForwardExact).unwrap()
    };
    let same = doc() == doc();
    details.push(format!("json identical: {same}"));

    outcome(drift <= 1e-9 && gap <= 1e-4 && same, details.join("; "))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("Berger scalar curvature 2(3-t)", c1_berger_scalar),
        (
            "hyperbolic_3 standard variations K = +1 / -1",
            c2_hyperbolic_transmutation,
        ),
        ("surface Gauss factor on H^2", c3_surface_gauss),
        ("difference tensor formula vs direct", c4_difference_tensor),
        (
            "curvature difference on every cell",
            c5_curvature_difference,
        ),
        ("full identity sweep, seed 42", c6_full_sweep),
        ("incomplete plane length sqrt(2)/2", c7_incomplete_length),
        ("Killing scalar relation on berger_s3", c8_killing_scalar),
        ("lightlike hyperplane and cone forms", c9_null_forms),
        ("drift, fd agreement, json determinism", c10_properties),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        if !o.pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
