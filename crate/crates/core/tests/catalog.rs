use canvar::catalog::{all_entries, check_assertion, get_entry, Check};
use canvar::geometry::{curvature_bundle, DifferentiationConfig};
use canvar::sampling::SampleSpec;

#[test]
fn every_known_assertion_holds() {
    let cfg = DifferentiationConfig::default();
    let samples = SampleSpec::new(42, 8);
    let mut failures = Vec::new();
    for e in all_entries() {
        for a in &e.known {
            match check_assertion(&e, a, &samples, &cfg) {
                Ok(o) if o.pass => {}
                Ok(o) => failures.push(format!("{}: {} ({:e})", e.id, a.description, o.value)),
                Err(err) => failures.push(format!("{}: {} error {err}", e.id, a.description)),
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn berger_scalar_curvature_is_linear_in_t() {
    let e = get_entry("berger_s3").unwrap();
    let ts: Vec<f64> = e
        .known
        .iter()
        .filter_map(|a| match a.check {
            Check::Scalar { t, .. } => Some(t),
            _ => None,
        })
        .collect();
    assert!(ts.contains(&-2.0) && ts.contains(&0.0));
}

#[test]
fn cap_product_is_the_round_sphere() {
    let e = get_entry("sphere_cap_product").unwrap();
    let cfg = DifferentiationConfig::default();
    let b = curvature_bundle(&e.chart, &[0.2, -0.1, 0.3], None, &cfg).unwrap();
    assert!((b.scalar - 6.0).abs() < 1e-10);
}
