//! The canonical variation `g_t = g + t ω⊗ω` along a unit field `E`, its
//! difference tensor, and classification of vector fields.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Backend, Composed, ComposedMetric, FieldFn, MetricFn, VectorFieldExpr};
use crate::geometry::immersion::{conormal, tangent_basis, tangent_jets, ImmersionSpec};
use crate::geometry::tensor::{inner, Tensor};
use crate::geometry::{
    orthonormal_frame, Chart, CoordBox, DifferentiationConfig, FieldCalculus, Frame, Local,
    Signature,
};
use crate::jet::{Jet, Real};
use crate::mp::Mp;
use crate::sampling::SampleSpec;

/// Smallest admissible `|t + ε|`.
pub const T_MARGIN: f64 = 1e-6;

/// `g + t ω⊗ω` with `ω = g(E, ·)`.
pub struct VariedMetric {
    pub base: Arc<dyn MetricFn>,
    pub field: Arc<dyn FieldFn>,
    pub t: f64,
}

impl ComposedMetric for VariedMetric {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn eval<T: Backend>(&self, x: &[T]) -> Vec<T> {
        let n = self.base.dim();
        let g = T::metric(&*self.base, x);
        let e = T::field(&*self.field, x);
        let omega: Vec<T> = (0..n)
            .map(|i| {
                (0..n).fold(T::cst(0.0), |acc, j| {
                    acc + g[i * n + j].clone() * e[j].clone()
                })
            })
            .collect();
        let mut out = g;
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                out[k] = out[k].clone() + (omega[i].clone() * omega[j].clone()).scale(self.t);
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct VariationConfig {
    pub t: f64,
    pub base: Chart,
    pub e: VectorFieldExpr,
}

/// `ε = g(E,E)` rounded at the domain center, with constancy asserted at
/// seeded points to 1e-8.
pub fn field_epsilon(chart: &Chart, e: &VectorFieldExpr) -> Result<f64> {
    if e.dim() != chart.dim() {
        return Err(Error::DimensionMismatch {
            expected: chart.dim(),
            got: e.dim(),
        });
    }
    let c = chart.domain.center();
    let q = |p: &[f64]| norm_squared(chart, e, p);
    let q0 = q(&c);
    let eps = q0.round();
    if eps.abs() != 1.0 {
        return Err(Error::NonUnitField {
            deviation: (q0.abs() - 1.0).abs(),
        });
    }
    let pts = SampleSpec::new(0, 32).points(&chart.domain, "unit-check");
    let dev = std::iter::once(c)
        .chain(pts)
        .map(|p| (q(&p) - eps).abs())
        .fold(0.0, f64::max);
    if dev > 1e-8 {
        return Err(Error::NonUnitField { deviation: dev });
    }
    Ok(eps)
}

/// `g(E,E)` at `p`, evaluated in 512-bit arithmetic so that fields with
/// large cancelling components still report their true norm.
pub fn norm_squared(chart: &Chart, e: &VectorFieldExpr, p: &[f64]) -> f64 {
    crate::mp::with_precision(512, || {
        let x: Vec<Mp> = p.iter().map(|&v| Mp::cst(v)).collect();
        let g = chart.metric.eval_mp(&x);
        let v = e.components.eval_mp(&x);
        let n = v.len();
        let mut q = Mp::cst(0.0);
        for i in 0..n {
            for j in 0..n {
                q = q + g[i * n + j].clone() * v[i].clone() * v[j].clone();
            }
        }
        q.to_f64()
    })
}

pub fn varied_signature(base: Signature, epsilon: f64, t: f64) -> Result<Signature> {
    let flips_to_negative = epsilon > 0.0 && epsilon + t < 0.0;
    let flips_to_positive = epsilon < 0.0 && epsilon + t > 0.0;
    let negative =
        base.negative_count() + usize::from(flips_to_negative) - usize::from(flips_to_positive);
    match negative {
        0 => Ok(Signature::Riemannian),
        1 => Ok(Signature::Lorentzian),
        k => Err(Error::InvalidConfig(format!(
            "t = {t} gives {k} negative directions; only Riemannian and Lorentzian signatures are supported"
        ))),
    }
}

/// A validated canonical variation.
#[derive(Clone, Debug)]
pub struct Variation {
    pub t: f64,
    pub epsilon: f64,
    pub base: Chart,
    pub e: VectorFieldExpr,
    pub varied: Chart,
}

impl Variation {
    pub fn new(cfg: &VariationConfig) -> Result<Variation> {
        let epsilon = field_epsilon(&cfg.base, &cfg.e)?;
        Self::with_epsilon(cfg, epsilon)
    }

    /// Skips the unit-field sampling when `ε` is already known.
    pub fn with_epsilon(cfg: &VariationConfig, epsilon: f64) -> Result<Variation> {
        let t = cfg.t;
        if (t + epsilon).abs() < T_MARGIN || !t.is_finite() {
            return Err(Error::ForbiddenParameter {
                t,
                epsilon,
                margin: T_MARGIN,
            });
        }
        let signature = varied_signature(cfg.base.signature, epsilon, t)?;
        let metric = Composed(VariedMetric {
            base: cfg.base.metric.clone(),
            field: cfg.e.components.clone(),
            t,
        });
        let mut varied = Chart::new(
            format!("{}[t={}]", cfg.base.name, t),
            cfg.base.domain.clone(),
            signature,
            Arc::new(metric),
        );
        varied.degeneracy_threshold = cfg.base.degeneracy_threshold;
        Ok(Variation {
            t,
            epsilon,
            base: cfg.base.clone(),
            e: cfg.e.clone(),
            varied,
        })
    }

    /// `1 + ε t`.
    pub fn factor(&self) -> f64 {
        1.0 + self.epsilon * self.t
    }
}

/// The chart of `g_t`.
pub fn build_variation(cfg: &VariationConfig) -> Result<Chart> {
    Ok(Variation::new(cfg)?.varied)
}

/// `D^t = Γ_t − Γ` at `p`, as `[k, i, j]`.
pub fn difference_tensor_direct(
    var: &Variation,
    p: &[f64],
    cfg: &DifferentiationConfig,
) -> Result<Tensor<3>> {
    let base = Local::new(&var.base, p, cfg)?;
    let varied = Local::new(&var.varied, p, cfg)?;
    Ok(Tensor::from_fn(base.n, |[k, i, j]| {
        varied.gamma_at(k, i, j).v - base.gamma_at(k, i, j).v
    }))
}

/// `(t/2)(ω(W)(L_E g)(U,V) + ω(U)dω(V,W) + ω(V)dω(U,W))`.
pub fn difference_formula_from(
    t: f64,
    g: &DMatrix<f64>,
    fc: &FieldCalculus,
    u: &[f64],
    v: &[f64],
    w: &[f64],
) -> f64 {
    let om = |x: &[f64]| inner(g, &fc.e, x);
    0.5 * t
        * (om(w) * inner(&fc.lie_g, u, v)
            + om(u) * inner(&fc.d_omega, v, w)
            + om(v) * inner(&fc.d_omega, u, w))
}

pub fn difference_tensor_formula(
    var: &Variation,
    p: &[f64],
    u: &[f64],
    v: &[f64],
    w: &[f64],
    cfg: &DifferentiationConfig,
) -> Result<f64> {
    let local = Local::new(&var.base, p, cfg)?;
    let ej = local.lift_field(&*var.e.components);
    let fc = FieldCalculus::from_local(&local, &ej)?;
    Ok(difference_formula_from(var.t, &local.gv, &fc, u, v, w))
}

/// Per-point residuals of the classification predicates.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PointClassification {
    pub is_unit: f64,
    pub is_killing: f64,
    pub is_closed: f64,
    pub is_conformal: f64,
    pub rho: f64,
    pub is_orthogonally_conformal: f64,
    pub is_geodesic: f64,
    pub is_parallel: f64,
    pub is_orthogonally_normal: f64,
    pub is_normal: f64,
    pub is_twist_free: f64,
}

fn frame_form(f: &Frame, m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = f.vectors.len();
    DMatrix::from_fn(n, n, |a, b| inner(m, &f.vectors[a], &f.vectors[b]))
}

/// Endomorphism in frame components: `c^a_b = ε_a g(M e_b, e_a)`.
fn frame_endo(f: &Frame, g: &DMatrix<f64>, m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = f.vectors.len();
    let cols: Vec<Vec<f64>> = f
        .vectors
        .iter()
        .map(|e| {
            let v = nalgebra::DVector::from_column_slice(e);
            (m * v).iter().copied().collect()
        })
        .collect();
    DMatrix::from_fn(n, n, |a, b| f.signs[a] * inner(g, &cols[b], &f.vectors[a]))
}

fn max_entry(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Classification residuals at one point. `epsilon` is the nominal `g(E,E)`.
pub fn classify_point(
    g: &DMatrix<f64>,
    signature: Signature,
    fc: &FieldCalculus,
    epsilon: f64,
) -> Result<PointClassification> {
    let n = g.nrows();
    let frame = orthonormal_frame(g, signature, Some(&fc.e))?;
    let nabla = frame_form(&frame, &fc.nabla_omega(g));
    let m = max_entry(&nabla);
    let norm1 = 1.0 + m;
    let lie = frame_form(&frame, &fc.lie_g);
    let dw = frame_form(&frame, &fc.d_omega);
    let rho = fc.div / n as f64;
    let gf = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&frame.signs));
    let conformal = max_entry(&(&lie - &gf * (2.0 * rho)));
    // Frame index n-1 is E/|E|; the first n-1 span E^⊥.
    let k = n - 1;
    let orth_trace: f64 = (0..k).map(|a| frame.signs[a] * lie[(a, a)]).sum();
    let rho_orth = if k > 0 {
        orth_trace / (2.0 * k as f64)
    } else {
        0.0
    };
    let mut orth_conf: f64 = 0.0;
    for a in 0..k {
        for b in 0..k {
            let target = if a == b {
                2.0 * rho_orth * frame.signs[a]
            } else {
                0.0
            };
            orth_conf = orth_conf.max((lie[(a, b)] - target).abs());
        }
    }
    let accel: Vec<f64> = frame.components(g, &fc.accel);
    let geodesic = accel.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let a = frame_endo(&frame, g, &fc.a_e);
    let a_star = frame_endo(&frame, g, &fc.a_e_adjoint);
    let a_orth = frame_endo(&frame, g, &fc.a_e_orth);
    let sg = &gf;
    let mut orth_normal: f64 = 0.0;
    for x in 0..k {
        for y in 0..k {
            let ax = a.column(x);
            let ay = a.column(y);
            let bx = a_orth.column(x);
            let by = a_orth.column(y);
            let lhs = (ax.transpose() * sg * ay)[(0, 0)];
            let rhs = (bx.transpose() * sg * by)[(0, 0)];
            orth_normal = orth_normal.max((lhs - rhs).abs());
        }
    }
    let comm = &a * &a_star - &a_star * &a;
    let om: Vec<f64> = frame.vectors.iter().map(|e| inner(g, &fc.e, e)).collect();
    let mut twist: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let v = om[i] * dw[(j, l)] + om[j] * dw[(l, i)] + om[l] * dw[(i, j)];
                twist = twist.max(v.abs());
            }
        }
    }
    Ok(PointClassification {
        is_unit: (fc.epsilon - epsilon).abs(),
        is_killing: max_entry(&lie) / norm1,
        is_closed: max_entry(&dw) / norm1,
        is_conformal: conformal / norm1,
        rho,
        is_orthogonally_conformal: orth_conf / norm1,
        is_geodesic: geodesic / norm1,
        is_parallel: 2.0 * m / norm1,
        is_orthogonally_normal: orth_normal / (1.0 + m * m),
        is_normal: max_entry(&comm) / (1.0 + m * m),
        is_twist_free: twist / norm1,
    })
}

/// Max-over-samples classification of a field.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldClassification {
    pub is_unit: f64,
    pub is_killing: f64,
    pub is_closed: f64,
    pub is_conformal: f64,
    /// Best-fit conformal factor `ρ = div E / n` at each sample.
    pub conformal_factors: Vec<f64>,
    pub is_orthogonally_conformal: f64,
    pub is_geodesic: f64,
    pub is_parallel: f64,
    pub is_orthogonally_normal: f64,
    pub is_normal: f64,
    pub is_twist_free: f64,
    pub epsilon: f64,
    pub sample_count: usize,
    pub seed: u64,
}

impl FieldClassification {
    pub fn absorb(&mut self, p: &PointClassification) {
        self.is_unit = self.is_unit.max(p.is_unit);
        self.is_killing = self.is_killing.max(p.is_killing);
        self.is_closed = self.is_closed.max(p.is_closed);
        self.is_conformal = self.is_conformal.max(p.is_conformal);
        self.conformal_factors.push(p.rho);
        self.is_orthogonally_conformal = self
            .is_orthogonally_conformal
            .max(p.is_orthogonally_conformal);
        self.is_geodesic = self.is_geodesic.max(p.is_geodesic);
        self.is_parallel = self.is_parallel.max(p.is_parallel);
        self.is_orthogonally_normal = self.is_orthogonally_normal.max(p.is_orthogonally_normal);
        self.is_normal = self.is_normal.max(p.is_normal);
        self.is_twist_free = self.is_twist_free.max(p.is_twist_free);
        self.sample_count += 1;
    }

    /// Residual of a predicate by name.
    pub fn residual(&self, name: &str) -> Option<f64> {
        Some(match name {
            "unit" => self.is_unit,
            "killing" => self.is_killing,
            "closed" => self.is_closed,
            "conformal" => self.is_conformal,
            "orthogonally_conformal" => self.is_orthogonally_conformal,
            "geodesic" => self.is_geodesic,
            "parallel" => self.is_parallel,
            "orthogonally_normal" => self.is_orthogonally_normal,
            "normal" => self.is_normal,
            "twist_free" => self.is_twist_free,
            _ => return None,
        })
    }
}

/// Classifies `e` on `chart` from seeded samples. `ε` is the rounded value of
/// `g(E,E)` at the domain center.
pub fn classify_field(
    chart: &Chart,
    e: &VectorFieldExpr,
    samples: &SampleSpec,
    cfg: &DifferentiationConfig,
) -> Result<FieldClassification> {
    classify_field_in(chart, &chart.domain, e, samples, cfg)
}

/// [`classify_field`] with samples drawn from `region` instead of the whole domain.
pub fn classify_field_in(
    chart: &Chart,
    region: &CoordBox,
    e: &VectorFieldExpr,
    samples: &SampleSpec,
    cfg: &DifferentiationConfig,
) -> Result<FieldClassification> {
    let q = norm_squared(chart, e, &chart.domain.center());
    if q.abs() <= 1e-10 {
        return Err(Error::NullField { value: q });
    }
    let epsilon = q.round().clamp(-1.0, 1.0);
    let epsilon = if epsilon == 0.0 { q.signum() } else { epsilon };
    let mut out = FieldClassification {
        epsilon,
        seed: samples.seed,
        ..Default::default()
    };
    for p in samples.points(region, &format!("classify:{}:{}", chart.name, e.name)) {
        let local = Local::new(chart, &p, cfg)?;
        let ej = local.lift_field(&*e.components);
        let fc = FieldCalculus::from_local(&local, &ej)?;
        out.absorb(&classify_point(&local.gv, chart.signature, &fc, epsilon)?);
    }
    Ok(out)
}

/// Violation of the projection-normality equation
/// `g(A_U X, N)² − g(X, A_U N)² = 2 g(U,N)(g(A_U X, S X) − g(A_U S X, X))`
/// with `S X = −∇_X N`, over a tangent frame and its pairwise sums at the
/// parameter point `q`. Normalized by `1 +` the largest term.
pub fn projection_normality_residual(
    chart: &Chart,
    u: &VectorFieldExpr,
    hyp: &ImmersionSpec,
    q: &[f64],
    cfg: &DifferentiationConfig,
) -> Result<f64> {
    let n = chart.dim();
    let phi = hyp.lift(cfg, q);
    let p: Vec<f64> = phi.iter().map(|j| j.v).collect();
    let local = Local::new(chart, &p, cfg)?;
    let g = &local.gv;
    let gq = hyp.metric_along(chart, cfg, q);
    let tj = tangent_jets(&phi, hyp.param_dim());
    let conorm = conormal(&tj, n);
    // N = g^{-1} n / sqrt|g^{-1}(n, n)|, as jets in q.
    let ginv_q = crate::geometry::tensor::invert(&gq, n).ok_or(Error::DegenerateHypersurface)?;
    let raised: Vec<Jet> = (0..n)
        .map(|i| {
            (0..n).fold(Jet::constant(0.0), |acc, j| {
                acc + ginv_q[i * n + j] * conorm[j]
            })
        })
        .collect();
    let nn = raised
        .iter()
        .zip(&conorm)
        .fold(Jet::constant(0.0), |acc, (a, b)| acc + *a * *b);
    if nn.v.abs() < 1e-10 * conorm.iter().map(|c| c.v * c.v).sum::<f64>().max(1e-300) {
        return Err(Error::DegenerateHypersurface);
    }
    let scale = if nn.v < 0.0 { (-nn).sqrt() } else { nn.sqrt() };
    let normal: Vec<Jet> = raised.iter().map(|c| *c / scale).collect();
    let nv: Vec<f64> = normal.iter().map(|c| c.v).collect();
    let tangents = tangent_basis(&phi, hyp.param_dim());
    // ∇_{J_a} N = ∂_a N + Γ(J_a, N)
    let nabla_n = |a: usize| -> Vec<f64> {
        (0..n)
            .map(|k| {
                let mut s = normal[k].d[a];
                for i in 0..n {
                    for j in 0..n {
                        s += local.gamma_at(k, i, j).v * tangents[a][i] * nv[j];
                    }
                }
                s
            })
            .collect()
    };
    let uj = local.lift_field(&*u.components);
    let fc = FieldCalculus::from_local(&local, &uj)?;
    let a_u = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| (0..n).map(|j| fc.a_e[(i, j)] * x[j]).sum())
            .collect()
    };
    let uv = fc.e.clone();
    let un = inner(g, &uv, &nv);
    let a_n = a_u(&nv);
    let shape: Vec<Vec<f64>> = (0..hyp.param_dim())
        .map(|a| nabla_n(a).iter().map(|x| -x).collect())
        .collect();
    let m = hyp.param_dim();
    let mut dirs: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for a in 0..m {
        dirs.push((tangents[a].clone(), shape[a].clone()));
        for b in 0..a {
            let x: Vec<f64> = (0..n).map(|k| tangents[a][k] + tangents[b][k]).collect();
            let s: Vec<f64> = (0..n).map(|k| shape[a][k] + shape[b][k]).collect();
            dirs.push((x, s));
        }
    }
    let mut worst: f64 = 0.0;
    for (x, sx) in dirs {
        let ax = a_u(&x);
        let t1 = inner(g, &ax, &nv).powi(2);
        let t2 = inner(g, &x, &a_n).powi(2);
        let t3 = inner(g, &ax, &sx);
        let t4 = inner(g, &a_u(&sx), &x);
        let lhs = t1 - t2;
        let rhs = 2.0 * un * (t3 - t4);
        let scale = 1.0
            + t1.abs()
                .max(t2.abs())
                .max((2.0 * un * t3).abs())
                .max((2.0 * un * t4).abs());
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{ConstantField, MetricFormula};
    use crate::geometry::CoordBox;

    struct Flat(usize);
    impl MetricFormula for Flat {
        fn dim(&self) -> usize {
            self.0
        }
        fn eval<T: Real>(&self, _x: &[T]) -> Vec<T> {
            let n = self.0;
            (0..n * n)
                .map(|k| T::cst(if k / n == k % n { 1.0 } else { 0.0 }))
                .collect()
        }
    }

    fn flat_cfg(t: f64) -> VariationConfig {
        let s = 1.0 / 3f64.sqrt();
        VariationConfig {
            t,
            base: Chart::new(
                "flat3",
                CoordBox::cube(3, -1.0, 1.0),
                Signature::Riemannian,
                Arc::new(Flat(3)),
            ),
            e: VectorFieldExpr::new("E", ConstantField(vec![s, s, s])),
        }
    }

    #[test]
    fn zero_parameter_reproduces_the_base_metric() {
        let v = Variation::new(&flat_cfg(0.0)).unwrap();
        let p = [0.1, 0.2, 0.3];
        assert_eq!(v.varied.metric_at(&p), v.base.metric_at(&p));
    }

    #[test]
    fn standard_variation_of_flat_space_is_lorentzian() {
        let v = Variation::new(&flat_cfg(-2.0)).unwrap();
        assert_eq!(v.varied.signature, Signature::Lorentzian);
        let g = crate::geometry::evaluate_metric(&v.varied, &[0.0, 0.0, 0.0]).unwrap();
        let e = v.e.at(&[0.0; 3]);
        assert!((inner(&g, &e, &e) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn forbidden_parameter_is_rejected() {
        assert!(matches!(
            Variation::new(&flat_cfg(-1.0)),
            Err(Error::ForbiddenParameter { .. })
        ));
        assert!(Variation::new(&flat_cfg(-1.0 + 2e-6)).is_ok());
    }

    #[test]
    fn non_unit_field_is_rejected() {
        let mut cfg = flat_cfg(1.0);
        cfg.e = VectorFieldExpr::new("U", ConstantField(vec![1.0, 0.1, 0.0]));
        assert!(matches!(
            Variation::new(&cfg),
            Err(Error::NonUnitField { .. })
        ));
    }

    #[test]
    fn parallel_field_has_no_difference_tensor() {
        let v = Variation::new(&flat_cfg(3.0)).unwrap();
        let d = difference_tensor_direct(&v, &[0.2, -0.1, 0.4], &Default::default()).unwrap();
        assert!(d.max_abs() < 1e-15);
    }
}
