//! Pointwise data shared by every identity evaluated at one sample point.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::catalog::{CatalogEntry, Generator};
use crate::error::{Error, Result};
use crate::expr::VectorFieldExpr;
use crate::geometry::tensor::{inner, mat_vec, norm2};
use crate::geometry::{Chart, CurvatureBundle, FieldCalculus, Local, ScalarCalculus, Signature};
use crate::jet::{Jet, Real};
use crate::variation::Variation;

/// `U = λ E` seen from one metric of the pair.
#[derive(Clone, Debug)]
pub struct GeneratorData {
    pub u: Vec<f64>,
    /// `λ = |U|` for this metric.
    pub lambda: ScalarCalculus,
    pub ln_lambda: ScalarCalculus,
    pub fc: FieldCalculus,
    /// `div ∇_U U`.
    pub div_accel: f64,
    /// `div(λ ∇λ)`.
    pub div_lambda_grad: f64,
}

/// One metric of the pair `(g, g_t)` at a point, with first- and
/// second-order data of its unit field `E_m = E / sqrt|g_m(E,E)|`.
#[derive(Clone, Debug)]
pub struct Member {
    pub local: Local,
    pub bundle: CurvatureBundle,
    pub signature: Signature,
    pub epsilon: f64,
    pub e: Vec<f64>,
    pub fc: FieldCalculus,
    /// `(∇_j ∇_E E)^i`.
    pub nabla_accel: DMatrix<f64>,
    pub div_accel: f64,
    /// `E(div E)`.
    pub e_div: f64,
    /// `(∇_k dω)_ij` at `[(k * n + i) * n + j]`.
    pub nabla_domega: Vec<f64>,
    pub generator: Option<GeneratorData>,
}

impl Member {
    fn new(
        chart: &Chart,
        p: &[f64],
        e: &VectorFieldExpr,
        generator: Option<&Generator>,
        cfg: &crate::geometry::DifferentiationConfig,
    ) -> Result<Member> {
        let local = Local::new(chart, p, cfg)?;
        let n = local.n;
        let raw = local.lift_field(&*e.components);
        let q = local.inner_jet(&raw, &raw).v;
        if q.abs() <= 1e-10 {
            return Err(Error::NullField { value: q });
        }
        let scale = 1.0 / q.abs().sqrt();
        let ej: Vec<Jet> = raw.iter().map(|c| c.scale(scale)).collect();
        let fc = FieldCalculus::from_local(&local, &ej)?;
        let bundle = CurvatureBundle::from_local(&local, chart.signature, Some(&fc.e))?;
        let accel = local.nabla_jets(&ej, &ej);
        let na = local.nabla_vector(&accel);
        let nabla_accel = DMatrix::from_fn(n, n, |i, j| na[i * n + j].v);
        let div_accel = nabla_accel.trace();
        let div = local.divergence(&ej);
        let e_div = (0..n).map(|i| div.d[i] * fc.e[i]).sum();
        let omega = local.lower(&ej);
        let domega: Vec<Jet> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                omega[j].partial(i) - omega[i].partial(j)
            })
            .collect();
        let nabla_domega = local.nabla_form2(&domega).iter().map(|j| j.v).collect();
        let generator = match generator {
            None => None,
            Some(g) => {
                let uj = local.lift_field(&*g.u.components);
                let lam = local.lift_scalar(&*g.lambda.value).scale(1.0 / scale);
                let ufc = FieldCalculus::from_local(&local, &uj)?;
                let ua = local.nabla_jets(&uj, &uj);
                let grad = local.gradient(&lam);
                let lg: Vec<Jet> = grad.iter().map(|c| *c * lam).collect();
                Some(GeneratorData {
                    u: ufc.e.clone(),
                    lambda: ScalarCalculus::from_local(&local, &lam),
                    ln_lambda: ScalarCalculus::from_local(&local, &lam.ln()),
                    fc: ufc,
                    div_accel: local.divergence(&ua).v,
                    div_lambda_grad: local.divergence(&lg).v,
                })
            }
        };
        Ok(Member {
            signature: chart.signature,
            epsilon: q.signum(),
            e: fc.e.clone(),
            local,
            bundle,
            fc,
            nabla_accel,
            div_accel,
            e_div,
            nabla_domega,
            generator,
        })
    }

    pub fn dim(&self) -> usize {
        self.local.n
    }

    pub fn g(&self, u: &[f64], v: &[f64]) -> f64 {
        inner(&self.local.gv, u, v)
    }

    /// `A_E(v) = ∇_v E`.
    pub fn a(&self, v: &[f64]) -> Vec<f64> {
        mat_vec(&self.fc.a_e, v)
    }

    pub fn accel(&self) -> &[f64] {
        &self.fc.accel
    }

    /// `∇_v (∇_E E)`.
    pub fn nabla_accel(&self, v: &[f64]) -> Vec<f64> {
        mat_vec(&self.nabla_accel, v)
    }

    /// `g(R(u,v)w, z)`.
    pub fn rm(&self, u: &[f64], v: &[f64], w: &[f64], z: &[f64]) -> f64 {
        self.bundle.rm(u, v, w, z)
    }

    pub fn ric(&self, u: &[f64], v: &[f64]) -> f64 {
        self.bundle.ric(u, v)
    }

    pub fn scalar(&self) -> f64 {
        self.bundle.scalar
    }

    pub fn dw(&self, u: &[f64], v: &[f64]) -> f64 {
        inner(&self.fc.d_omega, u, v)
    }

    pub fn lie(&self, u: &[f64], v: &[f64]) -> f64 {
        inner(&self.fc.lie_g, u, v)
    }

    /// `(∇_x dω)(y, z)`.
    pub fn nabla_dw(&self, x: &[f64], y: &[f64], z: &[f64]) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    s += self.nabla_domega[(k * n + i) * n + j] * x[k] * y[i] * z[j];
                }
            }
        }
        s
    }

    /// Orthonormal basis of `E^⊥` with signs; the frame stores `E` last.
    pub fn perp_frame(&self) -> impl Iterator<Item = (&Vec<f64>, f64)> {
        let f = &self.bundle.frame;
        let k = f.vectors.len() - 1;
        f.vectors[..k].iter().zip(f.signs[..k].iter().copied())
    }

    /// `tr A'`, `tr A'²` and `||A'||²` for the restriction of `A_E` to `E^⊥`.
    pub fn restricted_traces(&self) -> (f64, f64, f64) {
        let (mut tr, mut tr2, mut norm) = (0.0, 0.0, 0.0);
        for (v, s) in self.perp_frame() {
            let av = self.a(v);
            tr += s * self.g(&av, v);
            tr2 += s * self.g(&self.a(&av), v);
            norm += s * self.g(&av, &av);
        }
        (tr, tr2, norm)
    }

    /// `||A_E||²` over the whole tangent space.
    pub fn a_norm2(&self) -> f64 {
        let f = &self.bundle.frame;
        f.vectors
            .iter()
            .zip(&f.signs)
            .map(|(v, s)| {
                let av = self.a(v);
                s * self.g(&av, &av)
            })
            .sum()
    }

    /// Removes the `E` component of `v`.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let c = self.g(v, &self.e) / self.epsilon;
        v.iter().zip(&self.e).map(|(x, e)| x - c * e).collect()
    }
}

/// Base and varied metric at one point.
#[derive(Clone, Debug)]
pub struct PointContext {
    pub point: Vec<f64>,
    pub t: f64,
    pub epsilon: f64,
    pub base: Member,
    pub varied: Member,
    /// `D^t` from the closed formula, `D^a_bc` at `[(a * n + b) * n + c]`.
    pub difference: Vec<f64>,
    /// `(∇_k D^t)^a_bc` at `[k, a, b, c]`.
    pub nabla_difference: crate::geometry::Tensor<4>,
    /// Direct `Γ^t − Γ`.
    pub difference_direct: Vec<f64>,
    /// A fixed generic vector field and its divergence in both metrics.
    pub probe_div: (f64, f64),
}

/// Test field for divergence comparisons.
fn probe_field(n: usize) -> crate::expr::QuadraticField {
    crate::expr::QuadraticField {
        a: (0..n).map(|i| 0.3 + 0.1 * i as f64).collect(),
        b: (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            0.5
                        } else {
                            0.2 * (i as f64 - j as f64)
                        }
                    })
                    .collect()
            })
            .collect(),
        c: (0..n).map(|i| 0.05 * (i as f64 + 1.0)).collect(),
    }
}

impl PointContext {
    pub fn new(
        entry: &CatalogEntry,
        field: &str,
        var: &Variation,
        p: &[f64],
        cfg: &crate::geometry::DifferentiationConfig,
    ) -> Result<PointContext> {
        let generator = entry.generators.get(field);
        let base = Member::new(&var.base, p, &var.e, generator, cfg)?;
        let varied = Member::new(&var.varied, p, &var.e, generator, cfg)?;
        let n = base.dim();
        let t = var.t;
        // D^a_bc = (t/2) g_t^{ad} (ω_d L_bc + ω_b dω_cd + ω_c dω_bd), as jets.
        let bl = &base.local;
        let ej = bl.lift_field(&*var.e.components);
        let omega = bl.lower(&ej);
        let nw = bl.nabla_form(&omega);
        let mut dj = vec![Jet::constant(0.0); n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut acc = Jet::constant(0.0);
                    for d in 0..n {
                        let l_bc = nw[b * n + c] + nw[c * n + b];
                        let dw_cd = nw[c * n + d] - nw[d * n + c];
                        let dw_bd = nw[b * n + d] - nw[d * n + b];
                        let term = omega[d] * l_bc + omega[b] * dw_cd + omega[c] * dw_bd;
                        acc = acc + varied.local.ginv[a * n + d] * term;
                    }
                    dj[(a * n + b) * n + c] = acc.scale(0.5 * t);
                }
            }
        }
        let nabla_difference = bl.nabla_t12(&dj);
        let difference = dj.iter().map(|j| j.v).collect();
        let difference_direct = (0..n * n * n)
            .map(|k| varied.local.gamma[k].v - base.local.gamma[k].v)
            .collect();
        let pf = probe_field(n);
        let pb = bl.lift_field(&pf);
        let pv = varied.local.lift_field(&pf);
        let probe_div = (bl.divergence(&pb).v, varied.local.divergence(&pv).v);
        Ok(PointContext {
            point: p.to_vec(),
            t,
            epsilon: var.epsilon,
            base,
            varied,
            difference,
            nabla_difference,
            difference_direct,
            probe_div,
        })
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    /// `1 + εt`.
    pub fn factor(&self) -> f64 {
        1.0 + self.epsilon * self.t
    }

    /// `E` as a vector (unit for the base metric).
    pub fn e(&self) -> &[f64] {
        &self.base.e
    }

    pub fn g(&self, u: &[f64], v: &[f64]) -> f64 {
        self.base.g(u, v)
    }

    pub fn gt(&self, u: &[f64], v: &[f64]) -> f64 {
        self.varied.g(u, v)
    }

    fn apply(tensor: &[f64], n: usize, u: &[f64], v: &[f64]) -> Vec<f64> {
        (0..n)
            .map(|a| {
                let mut s = 0.0;
                for b in 0..n {
                    for c in 0..n {
                        s += tensor[(a * n + b) * n + c] * u[b] * v[c];
                    }
                }
                s
            })
            .collect()
    }

    /// `D^t(u, v)` from the closed formula.
    pub fn d(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        Self::apply(&self.difference, self.dim(), u, v)
    }

    /// `D^t(u, v) = ∇^t_u v − ∇_u v` from the two connections.
    pub fn d_direct(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        Self::apply(&self.difference_direct, self.dim(), u, v)
    }

    /// `(∇_x D^t)(u, v)`.
    pub fn nabla_d(&self, x: &[f64], u: &[f64], v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|a| {
                let mut s = 0.0;
                for k in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            s += self.nabla_difference[[k, a, b, c]] * x[k] * u[b] * v[c];
                        }
                    }
                }
                s
            })
            .collect()
    }

    /// The Lorentzian and Riemannian members of a standard variation.
    pub fn lorentzian_riemannian(&self) -> (&Member, &Member) {
        if self.base.signature == Signature::Lorentzian {
            (&self.base, &self.varied)
        } else {
            (&self.varied, &self.base)
        }
    }
}

/// Random auxiliary vectors for one identity evaluation.
pub struct Aux<'a> {
    pub rng: &'a mut ChaCha8Rng,
    pub ctx: &'a PointContext,
}

impl Aux<'_> {
    /// Components uniform in `[-1, 1]` on the base frame.
    pub fn vector(&mut self) -> Vec<f64> {
        let n = self.ctx.dim();
        let c: Vec<f64> = (0..n).map(|_| self.rng.gen_range(-1.0..1.0)).collect();
        self.ctx.base.bundle.frame.combine(&c)
    }

    /// A vector `g`-orthogonal to `E` and to `others`, resampled while short.
    /// Fails when no such vector exists.
    pub fn perp(&mut self, others: &[&[f64]]) -> Result<Vec<f64>> {
        let m = &self.ctx.base;
        if others.len() + 1 >= m.dim() {
            return Err(Error::DegenerateSpan);
        }
        for _ in 0..1000 {
            let mut v = m.project(&self.vector());
            for _ in 0..2 {
                for o in others {
                    let c = m.g(&v, o) / m.g(o, o);
                    v.iter_mut().zip(o.iter()).for_each(|(x, y)| *x -= c * y);
                }
                v = m.project(&v);
            }
            if norm2(&v) >= 1e-6 && m.g(&v, &v).abs() >= 1e-12 {
                return Ok(v);
            }
        }
        Err(Error::DegenerateSpan)
    }

    /// Like [`Aux::perp`] but normalized, `|g(v,v)| = 1`.
    pub fn unit_perp(&mut self, others: &[&[f64]]) -> Result<Vec<f64>> {
        let v = self.perp(others)?;
        let r = self.ctx.base.g(&v, &v).abs().sqrt();
        Ok(v.iter().map(|x| x / r).collect())
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn sign(&mut self) -> f64 {
        if self.rng.gen_bool(0.5) {
            1.0
        } else {
            -1.0
        }
    }
}
