//! Geodesics, curve lengths and completeness probes.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::local::lift_metric;
use crate::geometry::{Chart, CoordBox, DifferentiationConfig, Signature};
use crate::jet::Real;
use crate::mp::{with_precision, Mp};
use crate::sampling::{uniform_in, uniform_vector, SampleSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Dormand–Prince 5(4) with error control and FSAL.
    AdaptiveRk45,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    pub min_step: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::AdaptiveRk45,
            rel_tol: 1e-12,
            abs_tol: 1e-13,
            max_steps: 200_000,
            min_step: 1e-12,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.min_step > 0.0) {
            return Err(Error::InvalidConfig(
                "integrator tolerances and min_step must be positive".into(),
            ));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    #[serde(rename = "reached_T")]
    ReachedT,
    LeftDomain,
    /// The step collapsed below `min_step`, the geodesic acceleration was
    /// lost to cancellation, or the step budget ran out.
    StepUnderflow,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicSample {
    pub s: f64,
    pub point: Vec<f64>,
    pub velocity: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicTrace {
    pub samples: Vec<GeodesicSample>,
    pub termination: Termination,
    /// `max |g(γ',γ') − g(γ'₀,γ'₀)|` over the samples.
    pub norm_drift: f64,
    /// `g(γ'₀, γ'₀)`.
    pub initial_norm: f64,
}

impl GeodesicTrace {
    pub fn final_parameter(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.s)
    }

    /// Cubic Hermite interpolation of the position at parameter `s`.
    pub fn point_at(&self, s: f64) -> Option<Vec<f64>> {
        let k = self.samples.partition_point(|x| x.s < s);
        if k == 0 {
            return (self.samples.first()?.s == s).then(|| self.samples[0].point.clone());
        }
        let b = self.samples.get(k)?;
        let a = &self.samples[k - 1];
        Some(hermite(a, b, s).0)
    }
}

/// Position and velocity of the cubic Hermite interpolant between two samples.
fn hermite(a: &GeodesicSample, b: &GeodesicSample, s: f64) -> (Vec<f64>, Vec<f64>) {
    let h = b.s - a.s;
    let u = (s - a.s) / h;
    let (h00, h10, h01, h11) = (
        2.0 * u.powi(3) - 3.0 * u * u + 1.0,
        u.powi(3) - 2.0 * u * u + u,
        -2.0 * u.powi(3) + 3.0 * u * u,
        u.powi(3) - u * u,
    );
    let (d00, d10, d01, d11) = (
        (6.0 * u * u - 6.0 * u) / h,
        3.0 * u * u - 4.0 * u + 1.0,
        (-6.0 * u * u + 6.0 * u) / h,
        3.0 * u * u - 2.0 * u,
    );
    let n = a.point.len();
    let x = (0..n)
        .map(|i| {
            h00 * a.point[i] + h10 * h * a.velocity[i] + h01 * b.point[i] + h11 * h * b.velocity[i]
        })
        .collect();
    let v = (0..n)
        .map(|i| d00 * a.point[i] + d10 * a.velocity[i] + d01 * b.point[i] + d11 * b.velocity[i])
        .collect();
    (x, v)
}

/// Christoffel symbols `Γ^k_ij` at `[(k * n + i) * n + j]`, without a domain
/// check so that Runge–Kutta stages may probe just outside the chart.
fn gamma_unchecked(chart: &Chart, cfg: &DifferentiationConfig, p: &[f64]) -> Option<Vec<f64>> {
    let n = p.len();
    let raw = lift_metric(&*chart.metric, cfg, p);
    let g = DMatrix::from_fn(n, n, |i, j| 0.5 * (raw[i * n + j].v + raw[j * n + i].v));
    let ginv = g.try_inverse()?;
    let dg = |l: usize, i: usize, j: usize| 0.5 * (raw[i * n + j].d[l] + raw[j * n + i].d[l]);
    let mut out = vec![0.0; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += ginv[(k, l)] * (dg(i, l, j) + dg(j, l, i) - dg(l, i, j));
                }
                out[(k * n + i) * n + j] = 0.5 * acc;
                out[(k * n + j) * n + i] = 0.5 * acc;
            }
        }
    }
    out.iter().all(|x| x.is_finite()).then_some(out)
}

/// `(x', v') = (v, −Γ(v, v))`, with the rounding noise in `Γ(v, v)` measured
/// against `|v|² / (1 + |x|)`.
fn rhs(chart: &Chart, cfg: &DifferentiationConfig, y: &[f64]) -> Option<(Vec<f64>, f64)> {
    let n = y.len() / 2;
    let gamma = gamma_unchecked(chart, cfg, &y[..n])?;
    let v = &y[n..];
    let mut out = v.to_vec();
    let mut terms: f64 = 0.0;
    for k in 0..n {
        let mut a = 0.0;
        for i in 0..n {
            for j in 0..n {
                let term = gamma[(k * n + i) * n + j] * v[i] * v[j];
                a += term;
                terms += term.abs();
            }
        }
        out.push(-a);
    }
    let v2: f64 = v.iter().map(|c| c * c).sum();
    let scale = 1.0 + y[..n].iter().map(|c| c * c).sum::<f64>().sqrt();
    let noise = if v2 == 0.0 {
        0.0
    } else {
        f64::EPSILON * terms * scale / v2
    };
    Some((out, noise))
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand–Prince step. Returns the new state, its derivative, the
/// scaled error norm and the rounding noise at the new state.
fn dp_step(
    chart: &Chart,
    dcfg: &DifferentiationConfig,
    cfg: &IntegratorConfig,
    y: &[f64],
    f0: &[f64],
    h: f64,
) -> Option<(Vec<f64>, Vec<f64>, f64, f64)> {
    let m = y.len();
    let mut k: Vec<Vec<f64>> = vec![f0.to_vec()];
    let mut noise = 0.0;
    for stage in 1..7 {
        let yi: Vec<f64> = (0..m)
            .map(|i| y[i] + h * (0..stage).map(|j| A[stage][j] * k[j][i]).sum::<f64>())
            .collect();
        let (ki, nz) = rhs(chart, dcfg, &yi)?;
        k.push(ki);
        noise = nz;
    }
    let y5: Vec<f64> = (0..m)
        .map(|i| y[i] + h * (0..7).map(|j| B5[j] * k[j][i]).sum::<f64>())
        .collect();
    let mut err: f64 = 0.0;
    for i in 0..m {
        let e = h * (0..7).map(|j| (B5[j] - B4[j]) * k[j][i]).sum::<f64>();
        let sc = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y5[i].abs());
        err += (e / sc).powi(2);
    }
    let err = (err / m as f64).sqrt();
    err.is_finite()
        .then(|| (y5, k.pop().expect("seven stages"), err, noise))
}

/// Largest violation of the domain box by `p` (negative inside).
fn outside_by(domain: &CoordBox, p: &[f64]) -> f64 {
    p.iter()
        .zip(domain.lo.iter().zip(&domain.hi))
        .zip(&domain.periodic)
        .filter(|(_, per)| !**per)
        .map(|((x, (lo, hi)), _)| (lo - x).max(x - hi))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Relative rounding noise in `Γ(γ',γ')` beyond which the flow counts as
/// unresolvable in double precision.
const UNRESOLVED: f64 = 1e-9;

/// Integrates `γ'' + Γ(γ',γ') = 0` from `(p0, v0)` over `[0, span]`.
pub fn integrate_geodesic(
    chart: &Chart,
    p0: &[f64],
    v0: &[f64],
    span: f64,
    cfg: &IntegratorConfig,
    dcfg: &DifferentiationConfig,
) -> Result<GeodesicTrace> {
    chart.check_point(p0)?;
    cfg.validate()?;
    if v0.len() != p0.len() {
        return Err(Error::DimensionMismatch {
            expected: p0.len(),
            got: v0.len(),
        });
    }
    if !(span > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "affine span must be positive, got {span}"
        )));
    }
    let n = p0.len();
    let initial_norm = quadratic_form(chart, p0, v0);
    let mut y: Vec<f64> = p0.iter().chain(v0).copied().collect();
    let (mut f, mut noise) = rhs(chart, dcfg, &y).ok_or_else(|| Error::DegenerateMetric {
        point: p0.to_vec(),
        det: 0.0,
    })?;
    let sample = |s: f64, y: &[f64]| GeodesicSample {
        s,
        point: y[..n].to_vec(),
        velocity: y[n..].to_vec(),
    };
    let mut samples = vec![sample(0.0, &y)];
    let speed = v0.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    let mut h = (0.01 * span).min(0.1 / speed).max(cfg.min_step);
    let mut s = 0.0;
    let mut termination = Termination::StepUnderflow;
    for _ in 0..cfg.max_steps {
        if s >= span {
            termination = Termination::ReachedT;
            break;
        }
        let last = s + h >= span;
        let step = if last { span - s } else { h };
        match dp_step(chart, dcfg, cfg, &y, &f, step) {
            Some((y1, f1, err, nz)) if err <= 1.0 => {
                let s1 = if last { span } else { s + step };
                let next = sample(s1, &y1);
                if outside_by(&chart.domain, &y1[..n]) >= 0.0 {
                    let prev = samples.last().expect("nonempty").clone();
                    let mut last = boundary_crossing(&chart.domain, &prev, &next);
                    if let Some((y2, _, _, _)) = dp_step(chart, dcfg, cfg, &y, &f, last.s - s) {
                        last = sample(last.s, &y2);
                    }
                    samples.push(last);
                    termination = Termination::LeftDomain;
                    break;
                }
                samples.push(next);
                y = y1;
                f = f1;
                noise = nz;
                s = s1;
                let grow = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                if !last {
                    h = step * grow;
                }
            }
            Some((_, _, err, _)) => h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9),
            None => h = step * 0.25,
        }
        if s < span && (h < cfg.min_step || noise > UNRESOLVED) {
            termination = Termination::StepUnderflow;
            break;
        }
    }
    if s >= span {
        termination = Termination::ReachedT;
    }
    let norm_drift = samples
        .iter()
        .map(|x| (quadratic_form(chart, &x.point, &x.velocity) - initial_norm).abs())
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max);
    Ok(GeodesicTrace {
        samples,
        termination,
        norm_drift,
        initial_norm,
    })
}

/// Root of the domain violation along the Hermite interpolant, to `1e-10` in
/// the affine parameter.
fn boundary_crossing(domain: &CoordBox, a: &GeodesicSample, b: &GeodesicSample) -> GeodesicSample {
    let (mut lo, mut hi) = (a.s, b.s);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if outside_by(domain, &hermite(a, b, mid).0) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (point, velocity) = hermite(a, b, hi);
    GeodesicSample {
        s: hi,
        point,
        velocity,
    }
}

/// A parametrized curve in chart coordinates.
pub trait Curve: Sync {
    fn point(&self, s: f64) -> Vec<f64>;
    fn velocity(&self, s: f64) -> Vec<f64>;
}

/// `γ(s) = origin + s · direction`.
#[derive(Clone, Debug)]
pub struct Line {
    pub origin: Vec<f64>,
    pub direction: Vec<f64>,
}

impl Curve for Line {
    fn point(&self, s: f64) -> Vec<f64> {
        self.origin
            .iter()
            .zip(&self.direction)
            .map(|(o, d)| o + s * d)
            .collect()
    }
    fn velocity(&self, _: f64) -> Vec<f64> {
        self.direction.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Length {
    pub value: f64,
    pub error_estimate: f64,
}

/// `g(v, v)` at `p`. When the f64 sum cancels badly, the quadratic form is
/// recomputed in arbitrary precision, raising the precision until the result
/// is resolved.
pub fn quadratic_form(chart: &Chart, p: &[f64], v: &[f64]) -> f64 {
    let g = chart.metric_at(p);
    let n = v.len();
    let mut q = 0.0;
    let mut mag: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let term = g[(i, j)] * v[i] * v[j];
            q += term;
            mag += term.abs();
        }
    }
    if q.abs() > 1e-4 * mag || mag == 0.0 || !mag.is_finite() {
        return q;
    }
    let mut bits = 128 + 2 * (mag.log2().max(0.0) as usize);
    loop {
        let q = with_precision(bits, || {
            let x: Vec<Mp> = p.iter().map(|&c| Mp::cst(c)).collect();
            let vm: Vec<Mp> = v.iter().map(|&c| Mp::cst(c)).collect();
            let g = chart.metric.eval_mp(&x);
            let mut q = Mp::cst(0.0);
            for i in 0..n {
                for j in 0..n {
                    q = q + g[i * n + j].clone() * vm[i].clone() * vm[j].clone();
                }
            }
            q.to_f64()
        });
        // Resolved once the result sits well above the working precision.
        if q.abs() > mag * 2f64.powi(-(bits as i32) + 64) || bits >= 8192 {
            return q;
        }
        bits *= 2;
    }
}

fn speed_squared(chart: &Chart, curve: &dyn Curve, s: f64) -> Result<f64> {
    let p = curve.point(s);
    chart.check_point(&p)?;
    Ok(quadratic_form(chart, &p, &curve.velocity(s)))
}

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const K15_W: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const G7_W: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn speed(chart: &Chart, curve: &dyn Curve, s: f64) -> Result<f64> {
    let q = speed_squared(chart, curve, s)?;
    if q < 0.0 {
        if chart.signature == Signature::Riemannian && q > -1e-14 {
            return Ok(0.0);
        }
        return Err(Error::NegativeSpeedSquared { s, value: q });
    }
    Ok(q.sqrt())
}

/// Gauss–Kronrod 7/15 on `[a, b]`: (Kronrod value, |Kronrod − Gauss|).
fn gk15(chart: &Chart, curve: &dyn Curve, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let f0 = speed(chart, curve, c)?;
    let mut k = K15_W[7] * f0;
    let mut g = G7_W[3] * f0;
    for i in 0..7 {
        let x = r * GK_NODES[i];
        let fs = speed(chart, curve, c - x)? + speed(chart, curve, c + x)?;
        k += K15_W[i] * fs;
        if i % 2 == 1 {
            g += G7_W[i / 2] * fs;
        }
    }
    Ok((k * r, (k - g).abs() * r))
}

/// `∫ √g(γ',γ')` over `interval` by adaptive Gauss–Kronrod bisection with
/// absolute target `1e-8`.
pub fn curve_length(chart: &Chart, curve: &dyn Curve, interval: (f64, f64)) -> Result<Length> {
    let (a, b) = interval;
    if a == b {
        return Ok(Length {
            value: 0.0,
            error_estimate: 0.0,
        });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let target = 1e-8;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut stack = vec![(lo, hi, 0usize)];
    while let Some((x0, x1, depth)) = stack.pop() {
        let (v, e) = gk15(chart, curve, x0, x1)?;
        let budget = target * (x1 - x0) / (hi - lo);
        if e <= budget || depth >= 40 {
            value += v;
            error += e;
        } else {
            let m = 0.5 * (x0 + x1);
            stack.push((m, x1, depth + 1));
            stack.push((x0, m, depth + 1));
        }
    }
    Ok(Length {
        value: sign * value,
        error_estimate: error,
    })
}

/// How probe seeds are drawn.
#[derive(Clone, Debug, PartialEq)]
pub struct SeedSpec {
    pub samples: SampleSpec,
    pub seed_box: CoordBox,
    /// Fixed initial direction; random when absent.
    pub direction: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeRun {
    pub p0: Vec<f64>,
    pub v0: Vec<f64>,
    pub termination: Termination,
    pub final_parameter: f64,
    /// `√|g(v0,v0)|` times the final parameter: the length travelled.
    pub length: f64,
    pub norm_drift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeSummary {
    pub chart: String,
    pub t_max: f64,
    pub seed: u64,
    pub fraction_reached: f64,
    pub runs: Vec<ProbeRun>,
}

/// Integrates seeded geodesics up to `t_max` and reports how far each got.
/// Initial velocities are unit for `g` unless null.
pub fn completeness_probe(
    chart: &Chart,
    seeds: &SeedSpec,
    t_max: f64,
    cfg: &IntegratorConfig,
    dcfg: &DifferentiationConfig,
) -> Result<ProbeSummary> {
    cfg.validate()?;
    let n = chart.dim();
    let mut rng = seeds.samples.rng(&format!("probe:{}", chart.name));
    let starts: Vec<(Vec<f64>, Vec<f64>)> = (0..seeds.samples.count)
        .map(|_| {
            let p = uniform_in(&seeds.seed_box, &mut rng);
            let v = seeds
                .direction
                .clone()
                .unwrap_or_else(|| uniform_vector(n, &mut rng));
            (p, v)
        })
        .collect();
    let runs: Vec<ProbeRun> = starts
        .into_par_iter()
        .map(|(p0, v)| {
            let q = quadratic_form(chart, &p0, &v);
            let v0: Vec<f64> = if q.abs() > 1e-12 {
                v.iter().map(|x| x / q.abs().sqrt()).collect()
            } else {
                v
            };
            match integrate_geodesic(chart, &p0, &v0, t_max, cfg, dcfg) {
                Ok(tr) => ProbeRun {
                    final_parameter: tr.final_parameter(),
                    length: tr.initial_norm.abs().sqrt() * tr.final_parameter(),
                    termination: tr.termination,
                    norm_drift: tr.norm_drift,
                    p0,
                    v0,
                },
                Err(_) => ProbeRun {
                    p0,
                    v0,
                    termination: Termination::StepUnderflow,
                    final_parameter: 0.0,
                    length: 0.0,
                    norm_drift: 0.0,
                },
            }
        })
        .collect();
    let reached = runs
        .iter()
        .filter(|r| r.termination == Termination::ReachedT)
        .count();
    Ok(ProbeSummary {
        chart: chart.name.clone(),
        t_max,
        seed: seeds.samples.seed,
        fraction_reached: reached as f64 / runs.len().max(1) as f64,
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::get_entry;

    #[test]
    fn euclidean_geodesics_are_lines() {
        let e = get_entry("euclidean_3").unwrap();
        let tr = integrate_geodesic(
            &e.chart,
            &[0.1, 0.2, 0.3],
            &[1.0, -0.5, 0.25],
            3.0,
            &IntegratorConfig::default(),
            &DifferentiationConfig::default(),
        )
        .unwrap();
        assert_eq!(tr.termination, Termination::ReachedT);
        let end = tr.samples.last().unwrap();
        assert!((end.point[0] - 3.1).abs() < 1e-12);
        assert!((end.point[1] + 1.3).abs() < 1e-12);
        assert!(tr.norm_drift <= 1e-12);
    }

    #[test]
    fn lines_leave_the_domain_at_the_boundary() {
        let e = get_entry("euclidean_2").unwrap();
        let tr = integrate_geodesic(
            &e.chart,
            &[0.0, 0.0],
            &[1.0, 0.0],
            100.0,
            &IntegratorConfig::default(),
            &DifferentiationConfig::default(),
        )
        .unwrap();
        assert_eq!(tr.termination, Termination::LeftDomain);
        assert!((tr.final_parameter() - 10.0).abs() < 1e-9);
    }

    #[test]
    fn straight_length() {
        let e = get_entry("euclidean_2").unwrap();
        let line = Line {
            origin: vec![0.0, 0.0],
            direction: vec![1.0, 1.0],
        };
        let l = curve_length(&e.chart, &line, (0.0, 3.0)).unwrap();
        assert!((l.value - 3.0 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(
            curve_length(&e.chart, &line, (1.0, 1.0)).unwrap().value,
            0.0
        );
    }

    #[test]
    fn great_circle_closes() {
        let e = get_entry("sphere_2").unwrap();
        let p0 = [std::f64::consts::FRAC_PI_2, 0.0];
        let tau = 2.0 * std::f64::consts::PI;
        let tr = integrate_geodesic(
            &e.chart,
            &p0,
            &[0.0, 1.0],
            tau,
            &IntegratorConfig::default(),
            &DifferentiationConfig::default(),
        )
        .unwrap();
        let end = &tr.samples.last().unwrap().point;
        assert_eq!(tr.termination, Termination::ReachedT);
        assert!((end[0] - p0[0]).abs() < 1e-6 && (end[1] - tau).abs() < 1e-6);
    }

    #[test]
    fn diagonal_of_the_varied_plane_stops_early() {
        let e = get_entry("incomplete_plane").unwrap();
        let chart = e.probe_chart().unwrap();
        let r = 0.5f64.sqrt();
        let tr = integrate_geodesic(
            &chart,
            &[0.0, 0.0],
            &[r, r],
            10.0,
            &IntegratorConfig::default(),
            &DifferentiationConfig::default(),
        )
        .unwrap();
        assert_ne!(tr.termination, Termination::ReachedT);
        assert!(tr.final_parameter() < r);
        assert!(tr.norm_drift < 1e-9);
    }

    #[test]
    fn probe_is_deterministic() {
        let e = get_entry("incomplete_plane").unwrap();
        let chart = e.probe_chart().unwrap();
        let seeds = SeedSpec {
            samples: SampleSpec::new(3, 4),
            seed_box: e.probe.seed_box.clone(),
            direction: e.probe.direction.clone(),
        };
        let run = || {
            completeness_probe(
                &chart,
                &seeds,
                10.0,
                &IntegratorConfig::default(),
                &DifferentiationConfig::default(),
            )
            .unwrap()
        };
        let a = run();
        assert_eq!(a, run());
        assert!(a.fraction_reached < 1.0);
    }
}
