use canvar::catalog::get_entry;
use canvar::geodesics::{curve_length, integrate_geodesic, quadratic_form, IntegratorConfig, Line};
use canvar::geometry::{curvature_bundle, DifferentiationConfig};
use canvar::report::to_json;
use canvar::sampling::SampleSpec;
use canvar::variation::{field_epsilon, norm_squared, Variation, VariationConfig};
use proptest::prelude::*;

fn cfg() -> DifferentiationConfig {
    DifferentiationConfig::default()
}

fn varied(manifold: &str, field: &str, t: f64) -> canvar::geometry::Chart {
    let e = get_entry(manifold).unwrap();
    Variation::new(&VariationConfig {
        t,
        base: e.chart.clone(),
        e: e.field(field).unwrap().clone(),
    })
    .unwrap()
    .varied
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn berger_scalar_is_linear_in_t(t in -0.95f64..8.0, a in 0.2f64..1.3, b in -3.0f64..3.0, c in -3.0f64..3.0) {
        let chart = varied("berger_s3", "E", t);
        let s = curvature_bundle(&chart, &[a, b, c], None, &cfg()).unwrap().scalar;
        prop_assert!((s - 2.0 * (3.0 - t)).abs() <= 1e-9 * (1.0 + s.abs()));
    }

    #[test]
    fn unit_field_norm_shifts_by_t(t in -0.9f64..5.0, x in -1.0f64..1.0, y in 0.5f64..2.0, z in -1.0f64..1.0) {
        let e = get_entry("hyperbolic_3").unwrap();
        let f = e.field("E2").unwrap();
        let eps = field_epsilon(&e.chart, f).unwrap();
        let chart = varied("hyperbolic_3", "E2", t);
        let p = [x, y, z];
        prop_assume!(e.chart.domain.contains(&p));
        prop_assert!((norm_squared(&chart, f, &p) - (eps + t)).abs() < 1e-12);
    }

    #[test]
    fn length_is_parametrization_invariant(scale in 0.1f64..5.0, dx in -1.0f64..1.0, dy in -1.0f64..1.0) {
        prop_assume!(dx.abs() + dy.abs() > 0.1);
        let e = get_entry("hyperbolic_2").unwrap();
        let p = e.sample_box.center();
        let slow = Line { origin: p.clone(), direction: vec![0.2 * dx, 0.2 * dy] };
        let fast = Line { origin: p, direction: vec![0.2 * dx * scale, 0.2 * dy * scale] };
        let a = curve_length(&e.chart, &slow, (0.0, 1.0)).unwrap().value;
        let b = curve_length(&e.chart, &fast, (0.0, 1.0 / scale)).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
    }

    #[test]
    fn length_is_additive(split in 0.05f64..0.95, dx in -1.0f64..1.0, dy in -1.0f64..1.0) {
        let e = get_entry("sphere_2").unwrap();
        let line = Line { origin: e.sample_box.center(), direction: vec![0.3 * dx, 0.3 * dy] };
        let whole = curve_length(&e.chart, &line, (0.0, 1.0)).unwrap().value;
        let left = curve_length(&e.chart, &line, (0.0, split)).unwrap().value;
        let right = curve_length(&e.chart, &line, (split, 1.0)).unwrap().value;
        prop_assert!((whole - left - right).abs() <= 1e-9 * (1.0 + whole));
        prop_assert!(curve_length(&e.chart, &line, (split, split)).unwrap().value == 0.0);
    }

    #[test]
    fn geodesic_preserves_speed(theta in 0.0f64..std::f64::consts::TAU, t in -0.5f64..3.0) {
        let chart = varied("berger_s3", "E", t);
        let p0 = vec![0.7, 0.1, -0.2];
        let v0 = vec![theta.cos(), theta.sin(), 0.3];
        let tr = integrate_geodesic(&chart, &p0, &v0, 3.0, &IntegratorConfig::default(), &cfg()).unwrap();
        prop_assert!(tr.norm_drift <= 3e-9, "drift {}", tr.norm_drift);
        let last = tr.samples.last().unwrap();
        let q = quadratic_form(&chart, &last.point, &last.velocity);
        prop_assert!((q - tr.initial_norm).abs() <= 3e-9);
    }

    #[test]
    fn json_floats_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
        let text = to_json(&serde_json::json!({ "x": x })).unwrap();
        let number = text.split(": ").nth(1).unwrap().split('\n').next().unwrap();
        prop_assert_eq!(number.parse::<f64>().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), count in 1usize..20) {
        let b = get_entry("euclidean_3").unwrap().sample_box;
        let a = SampleSpec::new(seed, count).points(&b, "prop");
        prop_assert_eq!(&a, &SampleSpec::new(seed, count).points(&b, "prop"));
        prop_assert!(a.iter().all(|p| b.contains(p)));
        prop_assert_ne!(a, SampleSpec::new(seed, count).points(&b, "other"));
    }
}
