use std::sync::Arc;

use canvar::catalog::get_entry;
use canvar::expr::{FieldFormula, VectorFieldExpr};
use canvar::geodesics::{completeness_probe, IntegratorConfig, SeedSpec};
use canvar::geometry::immersion::ImmersionSpec;
use canvar::geometry::{
    christoffel, curvature_bundle, evaluate_metric, CoordBox, DifferentiationConfig,
};
use canvar::identities::{check_identity, run_suite};
use canvar::jet::Real;
use canvar::nullsurf::{analyze, get_null_example};
use canvar::sampling::SampleSpec;
use canvar::variation::{
    classify_field, difference_tensor_direct, projection_normality_residual, Variation,
    VariationConfig,
};

fn cfg() -> DifferentiationConfig {
    DifferentiationConfig::default()
}

fn variation(manifold: &str, field: &str, t: f64) -> Variation {
    let e = get_entry(manifold).unwrap();
    Variation::new(&VariationConfig {
        t,
        base: e.chart.clone(),
        e: e.field(field).unwrap().clone(),
    })
    .unwrap()
}

#[test]
fn model_metrics() {
    let m = evaluate_metric(
        &get_entry("minkowski_4").unwrap().chart,
        &[0.3, -1.0, 2.0, 0.5],
    )
    .unwrap();
    assert_eq!(
        m,
        nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 1.0, 1.0, 1.0]))
    );
    let h = evaluate_metric(&get_entry("hyperbolic_3").unwrap().chart, &[0.0, 0.4, -0.7]).unwrap();
    assert!((h - nalgebra::DMatrix::identity(3, 3)).abs().max() < 1e-15);
}

#[test]
fn hyperbolic_plane_christoffels_match_koszul_oracle() {
    // g = dx² + e^{2x} dy²; Γ from central differences of the components.
    let chart = get_entry("hyperbolic_2").unwrap().chart;
    let p = [0.3, -0.2];
    let gam = christoffel(&chart, &p, &cfg()).unwrap();
    let h = 1e-5;
    let g = |q: [f64; 2]| evaluate_metric(&chart, &q).unwrap();
    let dg: Vec<_> = (0..2)
        .map(|k| {
            let (mut a, mut b) = (p, p);
            a[k] += h;
            b[k] -= h;
            (g(a) - g(b)) / (2.0 * h)
        })
        .collect();
    let ginv = g(p).try_inverse().unwrap();
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                let oracle: f64 = (0..2)
                    .map(|l| 0.5 * ginv[(k, l)] * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]))
                    .sum();
                assert!((gam[[k, i, j]] - oracle).abs() < 1e-8, "Γ^{k}_{i}{j}");
            }
        }
    }
    assert!((gam[[0, 1, 1]] + (0.6f64).exp()).abs() < 1e-14);
    assert!((gam[[1, 0, 1]] - 1.0).abs() < 1e-14);
}

#[test]
fn scalar_curvature_models() {
    let s2 = get_entry("sphere_2").unwrap();
    assert!(
        (curvature_bundle(&s2.chart, &s2.sample_box.center(), None, &cfg())
            .unwrap()
            .scalar
            - 2.0)
            .abs()
            < 1e-12
    );
    let h3 = get_entry("hyperbolic_3").unwrap();
    assert!(
        (curvature_bundle(&h3.chart, &[0.2, 0.1, 0.0], None, &cfg())
            .unwrap()
            .scalar
            + 6.0)
            .abs()
            < 1e-12
    );
    let berger = variation("berger_s3", "E", 5.0);
    let s = curvature_bundle(&berger.varied, &[0.6, 0.3, -1.0], None, &cfg())
        .unwrap()
        .scalar;
    assert!((s + 4.0).abs() < 1e-10);
}

#[test]
fn standard_variations_of_model_spaces() {
    let flat = variation("euclidean_3", "E", -2.0);
    let m = evaluate_metric(&flat.varied, &[0.1, 0.2, 0.3]).unwrap();
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    assert!(
        (ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14 && (ev[2] - 1.0).abs() < 1e-14
    );
    let b = curvature_bundle(&flat.varied, &[0.1, 0.2, 0.3], None, &cfg()).unwrap();
    assert!(b.riemann.data.iter().all(|x| x.abs() < 1e-14));

    let h = variation("hyperbolic_3", "E1", -2.0);
    let p = [0.4, -0.3, 0.8];
    let m = evaluate_metric(&h.varied, &p).unwrap();
    let w = (2.0 * p[0]).exp();
    let expected = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, w, w]));
    assert!((m - expected).abs().max() < 1e-13);
}

#[test]
fn difference_tensor_of_a_parallel_field_vanishes() {
    for t in [-2.0, 0.0, 1.5] {
        let v = variation("euclidean_3", "E", t);
        let d = difference_tensor_direct(&v, &[0.3, 0.1, -0.4], &cfg()).unwrap();
        assert!(d.data.iter().all(|x| *x == 0.0));
    }
}

#[test]
fn field_classification() {
    let s = SampleSpec::new(42, 8);
    let hopf = get_entry("berger_s3").unwrap();
    let c = classify_field(&hopf.chart, hopf.field("E").unwrap(), &s, &cfg()).unwrap();
    assert!(c.is_killing <= 1e-10 && c.is_geodesic <= 1e-10 && c.is_closed > 1e-3);
    let h = get_entry("hyperbolic_3").unwrap();
    let c = classify_field(&h.chart, h.field("E1").unwrap(), &s, &cfg()).unwrap();
    assert!(c.is_closed <= 1e-10 && c.is_geodesic <= 1e-10 && c.is_killing > 1e-3);
}

struct Sphere;

impl FieldFormula for Sphere {
    fn dim(&self) -> usize {
        2
    }
    fn eval<T: Real>(&self, q: &[T]) -> Vec<T> {
        let (th, ph) = (&q[0], &q[1]);
        vec![th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()]
    }
}

struct Rotation;

impl FieldFormula for Rotation {
    fn dim(&self) -> usize {
        3
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        vec![-x[1].clone(), x[0].clone(), T::cst(0.0)]
    }
}

struct Translation;

impl FieldFormula for Translation {
    fn dim(&self) -> usize {
        3
    }
    fn eval<T: Real>(&self, _x: &[T]) -> Vec<T> {
        vec![T::cst(0.0), T::cst(0.0), T::cst(1.0)]
    }
}

struct Plane;

impl FieldFormula for Plane {
    fn dim(&self) -> usize {
        2
    }
    fn eval<T: Real>(&self, q: &[T]) -> Vec<T> {
        vec![q[0].clone(), q[1].clone(), T::cst(0.0)]
    }
}

#[test]
fn projection_normality_examples() {
    let chart = get_entry("euclidean_3").unwrap().chart;
    let sphere = ImmersionSpec {
        name: "unit sphere".into(),
        params: CoordBox::new(vec![0.3, -3.0], vec![2.8, 3.0]),
        ambient_dim: 3,
        map: Arc::new(Sphere),
    };
    let plane = ImmersionSpec {
        name: "plane z = 0".into(),
        params: CoordBox::cube(2, -2.0, 2.0),
        ambient_dim: 3,
        map: Arc::new(Plane),
    };
    let rot = VectorFieldExpr::new("rotation", Rotation);
    let up = VectorFieldExpr::new("translation", Translation);
    for q in SampleSpec::new(42, 10).points(&sphere.params, "normality") {
        let r = projection_normality_residual(&chart, &rot, &sphere, &q, &cfg()).unwrap();
        assert!(r <= 1e-9, "{r:e}");
        let r =
            projection_normality_residual(&chart, &up, &plane, &[q[0] * 0.5, q[1] * 0.5], &cfg())
                .unwrap();
        assert!(r == 0.0);
    }
}

#[test]
fn identity_cells() {
    let s = SampleSpec::new(42, 10);
    let r = check_identity("lemma3.1", "euclidean_3", Some("E"), &[-2.0], &s, &cfg()).unwrap();
    assert!(r[0].pass && r[0].max_residual.unwrap() <= 1e-12);
    let r = check_identity("thm3.2", "berger_s3", Some("E"), &[0.0], &s, &cfg()).unwrap();
    assert_eq!(r[0].max_residual, Some(0.0));
    let r = check_identity("prop4.1.4", "berger_s3", Some("E"), &[-2.0], &s, &cfg()).unwrap();
    assert!(r[0].pass);
    let b = curvature_bundle(
        &variation("berger_s3", "E", -2.0).varied,
        &[0.5, 0.5, 0.5],
        None,
        &cfg(),
    )
    .unwrap();
    assert!((b.scalar - 10.0).abs() < 1e-10);
    assert!(run_suite(&["berger_s3".into()], &[], &[1.0], &s, &cfg())
        .unwrap()
        .is_empty());
}

#[test]
fn probe_examples() {
    let run = |id: &str, t_max: f64| {
        let e = get_entry(id).unwrap();
        let spec = SeedSpec {
            samples: SampleSpec::new(42, 6),
            seed_box: e.probe.seed_box.clone(),
            direction: e.probe.direction.clone(),
        };
        completeness_probe(
            &e.probe_chart().unwrap(),
            &spec,
            t_max,
            &IntegratorConfig::default(),
            &cfg(),
        )
        .unwrap()
    };
    assert_eq!(run("euclidean_3", 3.0).fraction_reached, 1.0);
    assert_eq!(run("warped_line", 5.0).fraction_reached, 1.0);
    let plane = run("incomplete_plane", 10.0);
    assert!(plane.fraction_reached < 1.0);
    assert!(plane
        .runs
        .iter()
        .all(|r| r.final_parameter < 10.0 && r.length.is_finite()));
}

#[test]
fn null_examples() {
    let s = SampleSpec::new(42, 20);
    let plane = analyze(&get_null_example("hyperplane_4").unwrap(), &s, &cfg()).unwrap();
    assert!(plane.max_magnitudes.values().all(|v| *v == 0.0));
    let cone = analyze(&get_null_example("cone_4").unwrap(), &s, &cfg()).unwrap();
    assert!(cone.max_residuals.values().all(|v| *v <= 1e-10));
    assert!(cone.max_magnitudes["h_l"] > 0.0 && cone.max_magnitudes["h_r"] > 0.0);
    assert!(get_null_example("slice_3").is_ok());
    assert!(analyze(&get_null_example("slice_3").unwrap(), &s, &cfg()).is_err());
    assert!(get_null_example("torus").is_err());
}
