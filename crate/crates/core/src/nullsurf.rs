//! Lightlike hypersurfaces of Lorentzian charts and their image under the
//! standard canonical variation along a timelike unit field.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::catalog::get_entry;
use crate::error::{Error, Result};
use crate::expr::{FieldFormula, VectorFieldExpr};
use crate::geometry::immersion::{conormal, tangent_jets, ImmersionSpec};
use crate::geometry::tensor::{inner, invert};
use crate::geometry::{
    sectional, Chart, CoordBox, CurvatureBundle, DifferentiationConfig, Local, Signature,
};
use crate::jet::{Jet, Real};
use crate::sampling::SampleSpec;
use crate::variation::{field_epsilon, Variation, VariationConfig};

/// The null frame of a lightlike hypersurface at one parameter point.
#[derive(Clone, Debug, Serialize)]
pub struct NullStructure {
    pub param: Vec<f64>,
    pub point: Vec<f64>,
    /// `∂_a φ`, one ambient vector per parameter.
    pub tangents: Vec<Vec<f64>>,
    /// Null generator with `g_L(E, ξ) = 1/√2`.
    pub xi: Vec<f64>,
    /// `g_L`-orthonormal basis of `TM̄ ∩ E^⊥`.
    pub screen: Vec<Vec<f64>>,
    /// `√2 E + ξ`.
    pub n: Vec<f64>,
    /// `E/√2 + ξ`.
    pub x0: Vec<f64>,
    pub e: Vec<f64>,
    /// Singular values of the induced metric, ascending.
    pub singular_values: Vec<f64>,
    /// Largest violation of the frame invariants.
    pub frame_residual: f64,
    #[serde(skip)]
    xi_param: Vec<f64>,
    #[serde(skip)]
    screen_param: Vec<Vec<f64>>,
    /// `∇^L_{∂_a} ξ`.
    #[serde(skip)]
    dxi: Vec<Vec<f64>>,
    /// `∂_a ξ`.
    #[serde(skip)]
    dxi_flat: Vec<Vec<f64>>,
    /// `∂_a ∂_b φ` at `[a][b]`.
    #[serde(skip)]
    hessian: Vec<Vec<Vec<f64>>>,
    #[serde(skip)]
    local: Local,
    /// `(∇_j E)^i` at `[i * n + j]`.
    #[serde(skip)]
    nabla_e: Vec<f64>,
    #[serde(skip)]
    div_e: f64,
}

impl NullStructure {
    fn g(&self, u: &[f64], v: &[f64]) -> f64 {
        inner(&self.local.gv, u, v)
    }

    fn ambient(&self, c: &[f64]) -> Vec<f64> {
        let n = self.point.len();
        (0..n)
            .map(|i| c.iter().zip(&self.tangents).map(|(a, t)| a * t[i]).sum())
            .collect()
    }

    /// `∇^L_U E` for an ambient vector `U`.
    fn nabla_e(&self, u: &[f64]) -> Vec<f64> {
        let n = u.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.nabla_e[i * n + j] * u[j]).sum())
            .collect()
    }

    /// `∇^L_U ξ` for a tangent vector given in parameter coordinates.
    fn nabla_xi(&self, c: &[f64]) -> Vec<f64> {
        let n = self.point.len();
        (0..n)
            .map(|i| c.iter().zip(&self.dxi).map(|(a, d)| a * d[i]).sum())
            .collect()
    }

    /// Tangent basis `(e_1, …, e_{m−1}, ξ)` in parameter coordinates.
    fn frame_params(&self) -> Vec<Vec<f64>> {
        let mut out = self.screen_param.clone();
        out.push(self.xi_param.clone());
        out
    }
}

/// `B`, `τ`, `A*` and `H_L` at one parameter point.
#[derive(Clone, Debug, Serialize)]
pub struct NullForms {
    /// `B` on the basis `(e_1, …, e_{m−1}, ξ)`.
    pub b: Vec<Vec<f64>>,
    pub tau_xi: f64,
    pub h_l: f64,
    /// `g_L(A*(e_j), e_i)` at `[i][j]`.
    pub a_star: Vec<Vec<f64>>,
    pub symmetry_residual: f64,
    /// Components of `∇_ξ ξ + τ(ξ) ξ` along `(e_i, ξ, N)`.
    pub radical_residual: f64,
    /// `τ(ξ)` from the decomposition of `∇ξ` minus `√2 g_L(∇_ξ E, ξ)`.
    pub tau_residual: f64,
}

/// Second fundamental form in `g_R` at one parameter point, directly and
/// from the closed formulas.
#[derive(Clone, Debug, Serialize)]
pub struct VariationForms {
    /// `g_R(𝕀(u, v), N)` on `(e_1, …, e_{m−1}, ξ)`, computed from `∇^R`.
    pub ii_direct: Vec<Vec<f64>>,
    /// The same entries from `B`, `L_E g_L`, `∇E` and `τ(ξ)`.
    pub ii_formula: Vec<Vec<f64>>,
    pub screen_residual: f64,
    pub mixed_residual: f64,
    pub xi_xi_residual: f64,
    pub h_r_direct: f64,
    /// `H_L − √2 div_L E + τ(ξ)`.
    pub h_r_formula: f64,
    pub h_r_residual: f64,
    pub div_e: f64,
    /// `div_R^{M̄} ξ + H_L`.
    pub div_xi_residual: f64,
    /// `|g_R(N,N) − 1|` and `|g_R(N, ∂_a φ)|`.
    pub normal_residual: f64,
    /// `g_L(∇_{X_0}E, ∇_{X_0}E) + ½ K_L(span(ξ, N))`; meaningful for unit
    /// Killing `E`.
    pub killing_residual: f64,
}

const RADICAL_MAX: f64 = 1e-8;
const NONDEGENERATE_MIN: f64 = 1e-6;

fn sym(m: Vec<Jet>, n: usize) -> Vec<Jet> {
    (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            (m[i * n + j] + m[j * n + i]).scale(0.5)
        })
        .collect()
}

/// Builds `ξ`, the screen, `N` and `X_0` at parameter point `q`.
pub fn build_null_structure(
    chart: &Chart,
    e: &VectorFieldExpr,
    imm: &ImmersionSpec,
    q: &[f64],
    cfg: &DifferentiationConfig,
) -> Result<NullStructure> {
    if chart.signature != Signature::Lorentzian {
        return Err(Error::InvalidConfig(
            "lightlike hypersurfaces need a Lorentzian chart".into(),
        ));
    }
    let n = chart.dim();
    let m = imm.param_dim();
    if imm.ambient_dim != n || m + 1 != n || q.len() != m {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            got: q.len(),
        });
    }
    if !imm.params.contains(q) {
        return Err(Error::PointOutsideDomain { point: q.to_vec() });
    }
    let phi = imm.lift(cfg, q);
    let point: Vec<f64> = phi.iter().map(|c| c.v).collect();
    let local = Local::new(chart, &point, cfg)?;
    let tj = tangent_jets(&phi, m);
    let tangents: Vec<Vec<f64>> = tj.iter().map(|t| t.iter().map(|c| c.v).collect()).collect();

    let h = DMatrix::from_fn(m, m, |a, b| inner(&local.gv, &tangents[a], &tangents[b]));
    let mut singular_values: Vec<f64> = h.singular_values().iter().copied().collect();
    singular_values.sort_by(f64::total_cmp);
    if singular_values[0] > RADICAL_MAX {
        return Err(Error::NotLightlike(format!(
            "induced metric is nondegenerate, smallest singular value {:.3e}",
            singular_values[0]
        )));
    }
    let radical = singular_values
        .iter()
        .filter(|&&s| s < NONDEGENERATE_MIN)
        .count();
    if radical > 1 {
        return Err(Error::WrongRank(radical));
    }

    // ξ is the metric dual of the conormal, rescaled so that g(E, ξ) = 1/√2,
    // kept as jets in the parameters.
    let g_along = sym(imm.metric_along(chart, cfg, q), n);
    let ginv = invert(&g_along, n).ok_or(Error::DegenerateHypersurface)?;
    let nu = conormal(&tj, n);
    let e_along = imm.field_along(&*e.components, cfg, q);
    let sharp: Vec<Jet> = (0..n)
        .map(|i| (0..n).fold(Jet::constant(0.0), |acc, j| acc + ginv[i * n + j] * nu[j]))
        .collect();
    let nu_e = (0..n).fold(Jet::constant(0.0), |acc, j| acc + nu[j] * e_along[j]);
    if nu_e.v.abs() < 1e-12 {
        return Err(Error::DegenerateHypersurface);
    }
    let scale = nu_e.scale(SQRT_2).recip();
    let xi_jet: Vec<Jet> = sharp.iter().map(|&c| c * scale).collect();
    let xi: Vec<f64> = xi_jet.iter().map(|c| c.v).collect();
    let dxi_flat: Vec<Vec<f64>> = (0..m)
        .map(|a| xi_jet.iter().map(|c| c.d[a]).collect())
        .collect();
    let dxi: Vec<Vec<f64>> = (0..m)
        .map(|a| {
            (0..n)
                .map(|k| {
                    let mut acc = dxi_flat[a][k];
                    for i in 0..n {
                        for j in 0..n {
                            acc += local.gamma_at(k, i, j).v * tangents[a][i] * xi[j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let hessian: Vec<Vec<Vec<f64>>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|b| phi.iter().map(|c| c.h[a][b]).collect())
                .collect()
        })
        .collect();

    // Parameter coordinates of ξ by least squares on the full-rank Jacobian.
    let jac = DMatrix::from_fn(n, m, |i, a| tangents[a][i]);
    let xi_param: Vec<f64> = (jac.transpose() * &jac)
        .try_inverse()
        .map(|k| {
            (k * jac.transpose() * nalgebra::DVector::from_column_slice(&xi))
                .iter()
                .copied()
                .collect()
        })
        .ok_or(Error::DegenerateHypersurface)?;

    let e_at = e.at(&point);
    let w: Vec<f64> = tangents
        .iter()
        .map(|t| inner(&local.gv, &e_at, t))
        .collect();
    let w_xi: f64 = w.iter().zip(&xi_param).map(|(a, b)| a * b).sum();
    let mut screen_param: Vec<Vec<f64>> = Vec::new();
    for a in 0..m {
        // e_a − (w_a / w·ξ) ξ lies in E^⊥; Gram–Schmidt with the induced metric.
        let mut c: Vec<f64> = (0..m)
            .map(|b| f64::from(u8::from(a == b)) - w[a] / w_xi * xi_param[b])
            .collect();
        for s in &screen_param {
            let p = quad(&h, &c, s);
            c = c.iter().zip(s).map(|(x, y)| x - p * y).collect();
        }
        let nn = quad(&h, &c, &c);
        if nn > 1e-10 {
            let r = nn.sqrt();
            screen_param.push(c.iter().map(|x| x / r).collect());
        }
        if screen_param.len() == m - 1 {
            break;
        }
    }
    if screen_param.len() != m - 1 {
        return Err(Error::DegenerateHypersurface);
    }
    let nabla_e_j = local.nabla_vector(&local.lift_field(&*e.components));
    let nabla_e: Vec<f64> = nabla_e_j.iter().map(|c| c.v).collect();
    let div_e = (0..n).map(|i| nabla_e[i * n + i]).sum();

    let mut s = NullStructure {
        param: q.to_vec(),
        point,
        tangents,
        n: (0..n).map(|i| SQRT_2 * e_at[i] + xi[i]).collect(),
        x0: (0..n).map(|i| e_at[i] / SQRT_2 + xi[i]).collect(),
        xi,
        screen: Vec::new(),
        e: e_at,
        singular_values,
        frame_residual: 0.0,
        xi_param,
        screen_param,
        dxi,
        dxi_flat,
        hessian,
        local,
        nabla_e,
        div_e,
    };
    s.screen = s.screen_param.iter().map(|c| s.ambient(c)).collect();
    s.frame_residual = frame_residual(&s);
    Ok(s)
}

fn quad(h: &DMatrix<f64>, u: &[f64], v: &[f64]) -> f64 {
    inner(h, u, v)
}

fn frame_residual(s: &NullStructure) -> f64 {
    let mut r = vec![
        s.g(&s.xi, &s.xi).abs(),
        (s.g(&s.e, &s.xi) - 1.0 / SQRT_2).abs(),
        s.g(&s.n, &s.n).abs(),
        (s.g(&s.n, &s.xi) - 1.0).abs(),
    ];
    for (i, a) in s.screen.iter().enumerate() {
        r.push(s.g(&s.n, a).abs());
        r.push(s.g(&s.e, a).abs());
        r.push(s.g(&s.xi, a).abs());
        for (j, b) in s.screen.iter().enumerate() {
            r.push((s.g(a, b) - f64::from(u8::from(i == j))).abs());
        }
    }
    let back = s.ambient(&s.xi_param);
    r.extend(back.iter().zip(&s.xi).map(|(a, b)| (a - b).abs()));
    for i in 0..s.xi.len() {
        r.push((s.xi[i] - (-s.e[i] / SQRT_2 + s.x0[i])).abs());
        r.push((s.n[i] - (s.e[i] / SQRT_2 + s.x0[i])).abs());
    }
    r.into_iter().fold(0.0, f64::max)
}

/// `B(U, V) = −g_L(∇_U ξ, V)`, `τ`, `A*` and `H_L`.
pub fn null_fundamental_forms(s: &NullStructure) -> NullForms {
    let basis = s.frame_params();
    let k = basis.len();
    let bform = |u: &[f64], v: &[f64]| -s.g(&s.nabla_xi(u), &s.ambient(v));
    let b: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| bform(&basis[i], &basis[j])).collect())
        .collect();
    let tau = |u: &[f64]| -SQRT_2 * s.g(&s.e, &s.nabla_xi(u));
    let tau_decomp = tau(&s.xi_param);
    let tau_xi = SQRT_2 * s.g(&s.nabla_e(&s.xi), &s.xi);
    let a_star: Vec<Vec<f64>> = (0..k - 1)
        .map(|i| {
            (0..k - 1)
                .map(|j| {
                    let u = &s.screen_param[j];
                    let d = s.nabla_xi(u);
                    let t = tau(u);
                    let a: Vec<f64> = d.iter().zip(&s.xi).map(|(x, y)| -(x + t * y)).collect();
                    s.g(&a, &s.screen[i])
                })
                .collect()
        })
        .collect();
    let h_l = (0..k - 1).map(|i| b[i][i]).sum();
    let mut symmetry: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            symmetry = symmetry.max((b[i][j] - b[j][i]).abs());
        }
    }
    let w: Vec<f64> = s
        .nabla_xi(&s.xi_param)
        .iter()
        .zip(&s.xi)
        .map(|(d, x)| d + tau_xi * x)
        .collect();
    let mut radical = s.g(&w, &s.n).abs().max(s.g(&w, &s.xi).abs());
    for e in &s.screen {
        radical = radical.max(s.g(&w, e).abs());
    }
    NullForms {
        b,
        tau_xi,
        h_l,
        a_star,
        symmetry_residual: symmetry,
        radical_residual: radical,
        tau_residual: (tau_decomp - tau_xi).abs(),
    }
}

/// Second fundamental form of the hypersurface in the standard variation
/// `g_R`, computed from `∇^R` and from the closed formulas.
pub fn variation_fundamental_forms(
    s: &NullStructure,
    chart: &Chart,
    e: &VectorFieldExpr,
    cfg: &DifferentiationConfig,
) -> Result<VariationForms> {
    let forms = null_fundamental_forms(s);
    let epsilon = field_epsilon(chart, e)?;
    if epsilon != -1.0 {
        return Err(Error::InvalidConfig(format!(
            "{} must be unit timelike",
            e.name
        )));
    }
    let var = Variation::with_epsilon(
        &VariationConfig {
            t: -2.0 * epsilon,
            base: chart.clone(),
            e: e.clone(),
        },
        epsilon,
    )?;
    let r = Local::new(&var.varied, &s.point, cfg)?;
    let n = s.point.len();
    let m = s.tangents.len();
    let gr = |u: &[f64], v: &[f64]| inner(&r.gv, u, v);
    let gamma_r = |u: &[f64], v: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|k| {
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        acc += r.gamma_at(k, i, j).v * u[i] * v[j];
                    }
                }
                acc
            })
            .collect()
    };
    let ii_param: Vec<Vec<f64>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|b| {
                    let acc: Vec<f64> = s.hessian[a][b]
                        .iter()
                        .zip(gamma_r(&s.tangents[a], &s.tangents[b]))
                        .map(|(x, y)| x + y)
                        .collect();
                    gr(&acc, &s.n)
                })
                .collect()
        })
        .collect();
    let ii = |u: &[f64], v: &[f64]| -> f64 {
        let mut acc = 0.0;
        for a in 0..m {
            for b in 0..m {
                acc += u[a] * ii_param[a][b] * v[b];
            }
        }
        acc
    };
    let basis = s.frame_params();
    let k = basis.len();
    let ii_direct: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| ii(&basis[i], &basis[j])).collect())
        .collect();

    let lie = |x: &[f64], y: &[f64]| s.g(&s.nabla_e(x), y) + s.g(&s.nabla_e(y), x);
    let e_plus: Vec<f64> = s.e.iter().zip(&s.xi).map(|(a, b)| a + SQRT_2 * b).collect();
    let nabla_ee = s.nabla_e(&s.e);
    let mut ii_formula = vec![vec![0.0; k]; k];
    let (mut screen_res, mut mixed_res): (f64, f64) = (0.0, 0.0);
    for i in 0..k - 1 {
        for j in 0..k - 1 {
            let f = forms.b[i][j] - lie(&s.screen[i], &s.screen[j]) / SQRT_2;
            ii_formula[i][j] = f;
            screen_res = screen_res.max((ii_direct[i][j] - f).abs());
        }
        let f = -s.g(&s.nabla_e(&e_plus), &s.screen[i]);
        ii_formula[i][k - 1] = f;
        ii_formula[k - 1][i] = f;
        mixed_res = mixed_res
            .max((ii_direct[i][k - 1] - f).abs())
            .max((ii_direct[k - 1][i] - f).abs());
    }
    let f = -(2.0 * s.g(&s.xi, &nabla_ee) + forms.tau_xi);
    ii_formula[k - 1][k - 1] = f;
    let xi_xi_res = (ii_direct[k - 1][k - 1] - f).abs();

    // g_R-orthonormal basis of the tangent space.
    let h_r = DMatrix::from_fn(m, m, |a, b| gr(&s.tangents[a], &s.tangents[b]));
    let mut onb: Vec<Vec<f64>> = Vec::new();
    for a in 0..m {
        let mut c: Vec<f64> = (0..m).map(|b| f64::from(u8::from(a == b))).collect();
        for o in &onb {
            let p = inner(&h_r, &c, o);
            c = c.iter().zip(o).map(|(x, y)| x - p * y).collect();
        }
        let nn = inner(&h_r, &c, &c);
        onb.push(c.iter().map(|x| x / nn.sqrt()).collect());
    }
    let h_r_direct: f64 = onb.iter().map(|v| ii(v, v)).sum();
    let h_r_formula = forms.h_l - SQRT_2 * s.div_e + forms.tau_xi;
    let div_xi: f64 = onb
        .iter()
        .map(|v| {
            let d: Vec<f64> = (0..n)
                .map(|i| (0..m).map(|a| v[a] * s.dxi_flat[a][i]).sum())
                .collect();
            let vt = s.ambient(v);
            let nab: Vec<f64> = d
                .iter()
                .zip(gamma_r(&vt, &s.xi))
                .map(|(x, y)| x + y)
                .collect();
            gr(&nab, &vt)
        })
        .sum();
    let mut normal = (gr(&s.n, &s.n) - 1.0).abs();
    for t in &s.tangents {
        normal = normal.max(gr(&s.n, t).abs());
    }
    let bundle = CurvatureBundle::from_local(&s.local, Signature::Lorentzian, None)?;
    let ax0 = s.nabla_e(&s.x0);
    let killing = s.g(&ax0, &ax0) + 0.5 * sectional(&bundle, &s.xi, &s.n)?;
    Ok(VariationForms {
        ii_direct,
        ii_formula,
        screen_residual: screen_res,
        mixed_residual: mixed_res,
        xi_xi_residual: xi_xi_res,
        h_r_direct,
        h_r_formula,
        h_r_residual: (h_r_direct - h_r_formula).abs(),
        div_e: s.div_e,
        div_xi_residual: (div_xi + forms.h_l).abs(),
        normal_residual: normal,
        killing_residual: killing,
    })
}

/// `φ(x, y, …) = (x, x, y, …)`: the hyperplane `{t = x}`.
struct Hyperplane(usize);

impl FieldFormula for Hyperplane {
    fn dim(&self) -> usize {
        self.0
    }
    fn eval<T: Real>(&self, q: &[T]) -> Vec<T> {
        let mut out = vec![q[0].clone()];
        out.extend(q.iter().cloned());
        out
    }
}

/// Future light cone `t = |x|` in polar parameters `(r, angles…)`.
struct Cone(usize);

impl FieldFormula for Cone {
    fn dim(&self) -> usize {
        self.0
    }
    fn eval<T: Real>(&self, q: &[T]) -> Vec<T> {
        let r = q[0].clone();
        match self.0 {
            2 => vec![r.clone(), r.clone() * q[1].cos(), r * q[1].sin()],
            _ => {
                let (th, ph) = (q[1].clone(), q[2].clone());
                vec![
                    r.clone(),
                    r.clone() * th.sin() * ph.cos(),
                    r.clone() * th.sin() * ph.sin(),
                    r * th.cos(),
                ]
            }
        }
    }
}

/// Spacelike slice `{t = 0}`.
struct Slice(usize);

impl FieldFormula for Slice {
    fn dim(&self) -> usize {
        self.0
    }
    fn eval<T: Real>(&self, q: &[T]) -> Vec<T> {
        let mut out = vec![T::cst(0.0)];
        out.extend(q.iter().cloned());
        out
    }
}

/// `(cosh f, sinh f, 0, …)` with `f = Σ a_i x_i`: a unit timelike field that
/// is neither Killing nor geodesic.
struct Tilted(Vec<f64>);

impl FieldFormula for Tilted {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        let f = x
            .iter()
            .zip(&self.0)
            .fold(T::cst(0.0), |acc, (xi, a)| acc + xi.scale(*a));
        let mut out = vec![f.cosh(), f.sinh()];
        out.extend((2..self.0.len()).map(|_| T::cst(0.0)));
        out
    }
}

/// A shipped lightlike (or deliberately non-lightlike) example.
#[derive(Clone, Debug)]
pub struct NullExample {
    pub id: String,
    pub description: String,
    pub chart: Chart,
    pub e: VectorFieldExpr,
    pub immersion: ImmersionSpec,
    /// Expected to satisfy `B = 0` with parallel `E`.
    pub totally_geodesic: bool,
}

pub const NULL_EXAMPLES: &[&str] = &[
    "hyperplane_3",
    "hyperplane_4",
    "cone_3",
    "cone_4",
    "cone_3_tilted",
    "slice_3",
];

pub fn get_null_example(id: &str) -> Result<NullExample> {
    let (dim, kind) = match id {
        "hyperplane_3" => (3, "hyperplane"),
        "hyperplane_4" => (4, "hyperplane"),
        "cone_3" | "cone_3_tilted" => (3, "cone"),
        "cone_4" => (4, "cone"),
        "slice_3" => (3, "slice"),
        other => return Err(Error::UnknownExample(other.to_string())),
    };
    let entry = get_entry(&format!("minkowski_{dim}"))?;
    let m = dim - 1;
    let (map, params, description): (Arc<dyn crate::expr::FieldFn>, CoordBox, &str) = match kind {
        "hyperplane" => (
            Arc::new(Hyperplane(m)),
            CoordBox::cube(m, -2.0, 2.0),
            "lightlike hyperplane {t = x}",
        ),
        "cone" => {
            let mut lo = vec![0.5, 0.3];
            let mut hi = vec![3.0, 2.8];
            if m == 3 {
                lo.push(-3.0);
                hi.push(3.0);
            } else {
                lo[1] = -3.0;
                hi[1] = 3.0;
            }
            (
                Arc::new(Cone(m)),
                CoordBox::new(lo, hi),
                "future light cone t = |x|",
            )
        }
        _ => (
            Arc::new(Slice(m)),
            CoordBox::cube(m, -2.0, 2.0),
            "spacelike slice {t = 0}",
        ),
    };
    let e = if id == "cone_3_tilted" {
        VectorFieldExpr::new("E_tilted", Tilted(vec![0.0, 0.3, -0.2]))
    } else {
        entry.field("E")?.clone()
    };
    Ok(NullExample {
        id: id.to_string(),
        description: if id == "cone_3_tilted" {
            format!("{description} with a boosted, non-Killing E")
        } else {
            format!("{description} in minkowski_{dim}")
        },
        chart: entry.chart.clone(),
        e,
        immersion: ImmersionSpec {
            name: id.to_string(),
            params,
            ambient_dim: dim,
            map,
        },
        totally_geodesic: kind == "hyperplane",
    })
}

/// One evaluated parameter point.
#[derive(Clone, Debug, Serialize)]
pub struct NullPoint {
    pub param: Vec<f64>,
    pub structure: NullStructure,
    pub forms: NullForms,
    pub variation: VariationForms,
}

#[derive(Clone, Debug, Serialize)]
pub struct NullReport {
    pub example: String,
    pub description: String,
    pub seed: u64,
    pub points: Vec<NullPoint>,
    /// Largest value of each residual over the points.
    pub max_residuals: std::collections::BTreeMap<String, f64>,
    /// Largest `|B|`, `|τ(ξ)|`, `|H_L|`, `|H_R|` over the points.
    pub max_magnitudes: std::collections::BTreeMap<String, f64>,
}

/// Evaluates the whole apparatus at seeded parameter points.
pub fn analyze(
    ex: &NullExample,
    samples: &SampleSpec,
    cfg: &DifferentiationConfig,
) -> Result<NullReport> {
    let params = ex.immersion.params.shrunk(0.01);
    let mut points = Vec::new();
    for q in samples.points(&params, &format!("nullsurf:{}", ex.id)) {
        let structure = build_null_structure(&ex.chart, &ex.e, &ex.immersion, &q, cfg)?;
        let forms = null_fundamental_forms(&structure);
        let variation = variation_fundamental_forms(&structure, &ex.chart, &ex.e, cfg)?;
        points.push(NullPoint {
            param: q,
            structure,
            forms,
            variation,
        });
    }
    let mut res = std::collections::BTreeMap::new();
    let mut mag = std::collections::BTreeMap::new();
    let bump = |m: &mut std::collections::BTreeMap<String, f64>, k: &str, v: f64| {
        let e = m.entry(k.to_string()).or_insert(0.0);
        *e = e.max(v.abs());
    };
    for p in &points {
        bump(&mut res, "frame", p.structure.frame_residual);
        bump(&mut res, "b_symmetry", p.forms.symmetry_residual);
        bump(&mut res, "radical", p.forms.radical_residual);
        bump(&mut res, "tau", p.forms.tau_residual);
        bump(&mut res, "ii_screen", p.variation.screen_residual);
        bump(&mut res, "ii_mixed", p.variation.mixed_residual);
        bump(&mut res, "ii_xi_xi", p.variation.xi_xi_residual);
        bump(&mut res, "h_r", p.variation.h_r_residual);
        bump(&mut res, "div_xi", p.variation.div_xi_residual);
        bump(&mut res, "normal", p.variation.normal_residual);
        let bmax = p
            .forms
            .b
            .iter()
            .flatten()
            .fold(0.0, |a: f64, b| a.max(b.abs()));
        bump(&mut mag, "b", bmax);
        bump(&mut mag, "tau_xi", p.forms.tau_xi);
        bump(&mut mag, "h_l", p.forms.h_l);
        bump(&mut mag, "h_r", p.variation.h_r_direct);
    }
    Ok(NullReport {
        example: ex.id.clone(),
        description: ex.description.clone(),
        seed: samples.seed,
        points,
        max_residuals: res,
        max_magnitudes: mag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> DifferentiationConfig {
        DifferentiationConfig::default()
    }

    #[test]
    fn hyperplane_generator() {
        let ex = get_null_example("hyperplane_3").unwrap();
        let s =
            build_null_structure(&ex.chart, &ex.e, &ex.immersion, &[0.3, -0.7], &cfg()).unwrap();
        let r = 0.5f64.sqrt();
        for (a, b) in s.xi.iter().zip([-r, -r, 0.0]) {
            assert!((a - b).abs() < 1e-12, "{:?}", s.xi);
        }
        assert_eq!(s.screen.len(), 1);
        assert!((s.screen[0][2].abs() - 1.0).abs() < 1e-12);
        assert!(s.frame_residual < 1e-12);
    }

    #[test]
    fn slice_is_not_lightlike() {
        let ex = get_null_example("slice_3").unwrap();
        let err =
            build_null_structure(&ex.chart, &ex.e, &ex.immersion, &[0.1, 0.2], &cfg()).unwrap_err();
        assert!(matches!(err, Error::NotLightlike(_)));
    }

    #[test]
    fn cone_generator_is_radial() {
        let ex = get_null_example("cone_3").unwrap();
        let (r, th) = (1.5, 0.9);
        let s = build_null_structure(&ex.chart, &ex.e, &ex.immersion, &[r, th], &cfg()).unwrap();
        // Radial null direction (1, cos θ, sin θ), scaled so g(∂t, ξ) = 1/√2.
        let k = -0.5f64.sqrt();
        let want = [k, k * th.cos(), k * th.sin()];
        for (a, b) in s.xi.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        let f = null_fundamental_forms(&s);
        // The cone in ℝ³₁ has B(e, e) = −g(∇_e ξ, e) = −k / r on the unit
        // angular direction.
        assert!((f.h_l - (-k / r)).abs() < 1e-12, "{}", f.h_l);
    }
}
