//! Second-order local data of a metric at one point.
//!
//! [`Local`] holds the metric, its inverse and the Christoffel symbols as
//! jets. Every covariant-derivative operator in the engine is built from it.

use nalgebra::DMatrix;

use super::chart::{Chart, DiffMode, DifferentiationConfig};
use super::tensor::{invert, Tensor};
use crate::error::{Error, Result};
use crate::expr::{FieldFn, MetricFn, ScalarFn};
use crate::jet::{Jet, Real};

/// Lifts a vector-valued function of the coordinates to jets at `p`.
///
/// Forward mode evaluates `jet` on seeded variables. Finite-difference mode
/// builds the same jet from central stencils of `plain`.
pub fn lift(
    cfg: &DifferentiationConfig,
    p: &[f64],
    plain: &dyn Fn(&[f64]) -> Vec<f64>,
    jet: &dyn Fn(&[Jet]) -> Vec<Jet>,
) -> Vec<Jet> {
    match cfg.mode {
        DiffMode::ForwardExact => jet(&Jet::seed(p)),
        DiffMode::FiniteDifference => fd_lift(cfg.fd_step, p, plain),
    }
}

fn fd_lift(step: f64, p: &[f64], f: &dyn Fn(&[f64]) -> Vec<f64>) -> Vec<Jet> {
    let n = p.len();
    let h1: Vec<f64> = p.iter().map(|x| step * x.abs().max(1.0)).collect();
    let h2: Vec<f64> = h1.iter().map(|h| 10.0 * h).collect();
    let at = |shifts: &[(usize, f64)]| {
        let mut q = p.to_vec();
        for &(k, d) in shifts {
            q[k] += d;
        }
        f(&q)
    };
    let f0 = f(p);
    let mut out: Vec<Jet> = f0.iter().map(|&v| Jet::constant(v)).collect();
    for i in 0..n {
        let fp = at(&[(i, h1[i])]);
        let fm = at(&[(i, -h1[i])]);
        let fpp = at(&[(i, h2[i])]);
        let fmm = at(&[(i, -h2[i])]);
        for (c, o) in out.iter_mut().enumerate() {
            o.d[i] = (fp[c] - fm[c]) / (2.0 * h1[i]);
            o.h[i][i] = (fpp[c] - 2.0 * f0[c] + fmm[c]) / (h2[i] * h2[i]);
        }
        for j in 0..i {
            let a = at(&[(i, h2[i]), (j, h2[j])]);
            let b = at(&[(i, h2[i]), (j, -h2[j])]);
            let c_ = at(&[(i, -h2[i]), (j, h2[j])]);
            let d = at(&[(i, -h2[i]), (j, -h2[j])]);
            for (c, o) in out.iter_mut().enumerate() {
                let v = (a[c] - b[c] - c_[c] + d[c]) / (4.0 * h2[i] * h2[j]);
                o.h[i][j] = v;
                o.h[j][i] = v;
            }
        }
    }
    out
}

pub fn lift_metric(m: &dyn MetricFn, cfg: &DifferentiationConfig, p: &[f64]) -> Vec<Jet> {
    lift(cfg, p, &|x| m.eval_f64(x), &|x| m.eval_jet(x))
}

pub fn lift_field(f: &dyn FieldFn, cfg: &DifferentiationConfig, p: &[f64]) -> Vec<Jet> {
    lift(cfg, p, &|x| f.eval_f64(x), &|x| f.eval_jet(x))
}

pub fn lift_scalar(s: &dyn ScalarFn, cfg: &DifferentiationConfig, p: &[f64]) -> Jet {
    lift(cfg, p, &|x| vec![s.eval_f64(x)], &|x| vec![s.eval_jet(x)])[0]
}

/// Metric, inverse metric and connection at a point, as jets.
#[derive(Clone, Debug)]
pub struct Local {
    pub n: usize,
    pub point: Vec<f64>,
    pub cfg: DifferentiationConfig,
    /// `g_ij`, order 2.
    pub g: Vec<Jet>,
    /// `g^ij`, order 2.
    pub ginv: Vec<Jet>,
    /// `Γ^k_ij` at `[k][i][j]`, order 1.
    pub gamma: Vec<Jet>,
    pub gv: DMatrix<f64>,
    pub ginvv: DMatrix<f64>,
}

impl Local {
    pub fn new(chart: &Chart, p: &[f64], cfg: &DifferentiationConfig) -> Result<Local> {
        chart.check_point(p)?;
        let n = chart.dim();
        let raw = lift_metric(&*chart.metric, cfg, p);
        let g: Vec<Jet> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (raw[i * n + j] + raw[j * n + i]).scale(0.5)
            })
            .collect();
        let gv = DMatrix::from_fn(n, n, |i, j| g[i * n + j].v);
        let det = gv.determinant();
        if !(det.abs() >= chart.degeneracy_threshold) {
            return Err(Error::DegenerateMetric {
                point: p.to_vec(),
                det,
            });
        }
        let ginv = invert(&g, n).ok_or(Error::DegenerateMetric {
            point: p.to_vec(),
            det,
        })?;
        let ginvv = DMatrix::from_fn(n, n, |i, j| ginv[i * n + j].v);
        let dg = |l: usize, i: usize, j: usize| g[i * n + j].partial(l);
        let mut gamma = vec![Jet::constant(0.0); n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let mut acc = Jet::constant(0.0);
                    for l in 0..n {
                        let c = dg(i, l, j) + dg(j, l, i) - dg(l, i, j);
                        acc = acc + ginv[k * n + l] * c;
                    }
                    let acc = acc.scale(0.5);
                    gamma[(k * n + i) * n + j] = acc;
                    gamma[(k * n + j) * n + i] = acc;
                }
            }
        }
        Ok(Local {
            n,
            point: p.to_vec(),
            cfg: cfg.clone(),
            g,
            ginv,
            gamma,
            gv,
            ginvv,
        })
    }

    pub fn gamma_at(&self, k: usize, i: usize, j: usize) -> &Jet {
        &self.gamma[(k * self.n + i) * self.n + j]
    }

    pub fn christoffel(&self) -> Tensor<3> {
        Tensor::from_fn(self.n, |[k, i, j]| self.gamma_at(k, i, j).v)
    }

    /// `(R(∂_i,∂_j)∂_k)^l` at `[l, i, j, k]`.
    pub fn riemann(&self) -> Tensor<4> {
        let n = self.n;
        Tensor::from_fn(n, |[l, i, j, k]| {
            let mut r = self.gamma_at(l, j, k).d[i] - self.gamma_at(l, i, k).d[j];
            for m in 0..n {
                r += self.gamma_at(l, i, m).v * self.gamma_at(m, j, k).v
                    - self.gamma_at(l, j, m).v * self.gamma_at(m, i, k).v;
            }
            r
        })
    }

    pub fn lift_field(&self, f: &dyn FieldFn) -> Vec<Jet> {
        lift_field(f, &self.cfg, &self.point)
    }

    pub fn lift_scalar(&self, s: &dyn ScalarFn) -> Jet {
        lift_scalar(s, &self.cfg, &self.point)
    }

    /// `(∇_j V)^i` at `[i * n + j]`; one jet order is lost.
    pub fn nabla_vector(&self, v: &[Jet]) -> Vec<Jet> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = v[i].partial(j);
                for k in 0..n {
                    acc = acc + *self.gamma_at(i, j, k) * v[k];
                }
                out.push(acc);
            }
        }
        out
    }

    /// `(∇_i w)_j` at `[i * n + j]` for a one-form `w_j`; one jet order is lost.
    pub fn nabla_form(&self, w: &[Jet]) -> Vec<Jet> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = w[j].partial(i);
                for k in 0..n {
                    acc = acc - *self.gamma_at(k, i, j) * w[k];
                }
                out.push(acc);
            }
        }
        out
    }

    /// `(∇_k w)_ij` at `[(k * n + i) * n + j]` for a (0,2) tensor `w_ij`.
    pub fn nabla_form2(&self, w: &[Jet]) -> Vec<Jet> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n * n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = w[i * n + j].partial(k);
                    for m in 0..n {
                        acc = acc
                            - *self.gamma_at(m, k, i) * w[m * n + j]
                            - *self.gamma_at(m, k, j) * w[i * n + m];
                    }
                    out.push(acc);
                }
            }
        }
        out
    }

    /// `(∇_k T)^a_bc` at `[k, a, b, c]` for a (1,2) tensor `T^a_bc` stored
    /// at `[(a * n + b) * n + c]`.
    pub fn nabla_t12(&self, t: &[Jet]) -> Tensor<4> {
        let n = self.n;
        let at = |a: usize, b: usize, c: usize| &t[(a * n + b) * n + c];
        Tensor::from_fn(n, |[k, a, b, c]| {
            let mut acc = at(a, b, c).d[k];
            for m in 0..n {
                acc += self.gamma_at(a, k, m).v * at(m, b, c).v
                    - self.gamma_at(m, k, b).v * at(a, m, c).v
                    - self.gamma_at(m, k, c).v * at(a, b, m).v;
            }
            acc
        })
    }

    /// Metric-raised differential `g^ij ∂_j f`; one jet order is lost.
    pub fn gradient(&self, f: &Jet) -> Vec<Jet> {
        let n = self.n;
        (0..n)
            .map(|i| {
                (0..n).fold(Jet::constant(0.0), |acc, j| {
                    acc + self.ginv[i * n + j] * f.partial(j)
                })
            })
            .collect()
    }

    /// `g_ij V^j`.
    pub fn lower(&self, v: &[Jet]) -> Vec<Jet> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).fold(Jet::constant(0.0), |acc, j| acc + self.g[i * n + j] * v[j]))
            .collect()
    }

    /// `g(U, V)` as a jet.
    pub fn inner_jet(&self, u: &[Jet], v: &[Jet]) -> Jet {
        let n = self.n;
        let mut acc = Jet::constant(0.0);
        for i in 0..n {
            for j in 0..n {
                acc = acc + self.g[i * n + j] * u[i] * v[j];
            }
        }
        acc
    }

    /// `div V = (∇_i V)^i`; one jet order is lost.
    pub fn divergence(&self, v: &[Jet]) -> Jet {
        let nv = self.nabla_vector(v);
        (0..self.n).fold(Jet::constant(0.0), |acc, i| acc + nv[i * self.n + i])
    }

    /// `∇_U V` for jets `V`, with `U` given as plain components.
    pub fn nabla_along(&self, u: &[f64], v: &[Jet]) -> Vec<Jet> {
        let n = self.n;
        let nv = self.nabla_vector(v);
        (0..n)
            .map(|i| (0..n).fold(Jet::constant(0.0), |acc, j| acc + nv[i * n + j].scale(u[j])))
            .collect()
    }

    /// `∇_V W` where both are jets; the result keeps `V`'s order minus one
    /// at most.
    pub fn nabla_jets(&self, v: &[Jet], w: &[Jet]) -> Vec<Jet> {
        let n = self.n;
        let nw = self.nabla_vector(w);
        (0..n)
            .map(|i| (0..n).fold(Jet::constant(0.0), |acc, j| acc + nw[i * n + j] * v[j]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::MetricFormula;
    use crate::geometry::chart::{CoordBox, Signature};
    use std::sync::Arc;

    struct H2;
    impl MetricFormula for H2 {
        fn dim(&self) -> usize {
            2
        }
        fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
            let e = (x[0].scale(2.0)).exp();
            vec![T::cst(1.0), T::cst(0.0), T::cst(0.0), e]
        }
    }

    fn h2() -> Chart {
        Chart::new(
            "h2",
            CoordBox::cube(2, -1.0, 1.0),
            Signature::Riemannian,
            Arc::new(H2),
        )
    }

    #[test]
    fn hyperbolic_christoffels_match_hand_values() {
        let p = [0.3, -0.2];
        let l = Local::new(&h2(), &p, &Default::default()).unwrap();
        let e = (0.6f64).exp();
        assert!((l.gamma_at(0, 1, 1).v + e).abs() < 1e-14);
        assert!((l.gamma_at(1, 0, 1).v - 1.0).abs() < 1e-15);
        assert!((l.gamma_at(1, 1, 0).v - 1.0).abs() < 1e-15);
        let r = l.riemann();
        // R(∂x,∂y)∂y = K g(∂y,∂y) ∂x with K = -1
        assert!((r[[0, 0, 1, 1]] + e).abs() < 1e-13);
    }

    #[test]
    fn finite_difference_lift_tracks_exact_jets() {
        let p = [0.3, -0.2];
        let exact = Local::new(&h2(), &p, &Default::default()).unwrap();
        let fd = Local::new(&h2(), &p, &DifferentiationConfig::finite_difference()).unwrap();
        let (a, b) = (exact.riemann(), fd.riemann());
        for (x, y) in a.data.iter().zip(&b.data) {
            assert!((x - y).abs() < 1e-5, "{x} vs {y}");
        }
    }
}
