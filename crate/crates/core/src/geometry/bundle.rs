use nalgebra::DMatrix;

use super::chart::{Chart, DifferentiationConfig, Signature};
use super::local::Local;
use super::tensor::{inner, norm2, Tensor};
use crate::error::{Error, Result};
use crate::expr::VectorFieldExpr;

/// Orthonormal basis with causal signs `ε_i = g(e_i, e_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub vectors: Vec<Vec<f64>>,
    pub signs: Vec<f64>,
}

impl Frame {
    /// Components `ε_i g(v, e_i)`, so that `v = Σ c_i e_i`.
    pub fn components(&self, g: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
        self.vectors
            .iter()
            .zip(&self.signs)
            .map(|(e, s)| s * inner(g, v, e))
            .collect()
    }

    pub fn combine(&self, c: &[f64]) -> Vec<f64> {
        let n = self.vectors[0].len();
        let mut out = vec![0.0; n];
        for (ci, e) in c.iter().zip(&self.vectors) {
            for k in 0..n {
                out[k] += ci * e[k];
            }
        }
        out
    }
}

fn project_out(g: &DMatrix<f64>, v: &mut [f64], basis: &[(Vec<f64>, f64)]) {
    for _ in 0..2 {
        for (e, s) in basis {
            let c = s * inner(g, v, e);
            for k in 0..v.len() {
                v[k] -= c * e[k];
            }
        }
    }
}

/// Gram-Schmidt over (seed, timelike direction if needed, coordinate basis).
///
/// The seed, when given, is stored last; the remaining vectors keep their
/// processing order. Candidates whose residual after projection is shorter
/// than 1e-8 are discarded.
pub fn orthonormal_frame(
    g: &DMatrix<f64>,
    signature: Signature,
    seed: Option<&[f64]>,
) -> Result<Frame> {
    let n = g.nrows();
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    let seed_timelike = seed.map(|s| inner(g, s, s) < 0.0).unwrap_or(false);
    if let Some(s) = seed {
        let q = inner(g, s, s);
        if q.abs() <= 1e-10 {
            return Err(Error::NullSeedField { value: q });
        }
        candidates.push(s.to_vec());
    }
    if signature == Signature::Lorentzian && !seed_timelike {
        candidates.push(timelike_direction(g));
    }
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        candidates.push(e);
    }
    let mut basis: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n);
    for mut v in candidates {
        if basis.len() == n {
            break;
        }
        project_out(g, &mut v, &basis);
        let q = inner(g, &v, &v);
        if q.abs().sqrt() < 1e-8 || norm2(&v) < 1e-8 {
            continue;
        }
        let s = q.signum();
        let r = q.abs().sqrt();
        v.iter_mut().for_each(|x| *x /= r);
        basis.push((v, s));
    }
    if basis.len() != n {
        return Err(Error::DegenerateMetric {
            point: vec![],
            det: g.determinant(),
        });
    }
    if seed.is_some() {
        let first = basis.remove(0);
        basis.push(first);
    }
    let (vectors, signs) = basis.into_iter().unzip();
    Ok(Frame { vectors, signs })
}

fn timelike_direction(g: &DMatrix<f64>) -> Vec<f64> {
    let n = g.nrows();
    if let Some(i) = (0..n)
        .filter(|&i| g[(i, i)] < -1e-8)
        .min_by(|&a, &b| g[(a, a)].total_cmp(&g[(b, b)]))
    {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        return e;
    }
    let eig = g.clone().symmetric_eigen();
    let k = eig.eigenvalues.imin();
    eig.eigenvectors.column(k).iter().copied().collect()
}

/// All pointwise curvature data of a chart at one point.
#[derive(Clone, Debug)]
pub struct CurvatureBundle {
    pub point: Vec<f64>,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    /// `Γ^k_ij` at `[k, i, j]`.
    pub gamma: Tensor<3>,
    /// `(R(∂_i,∂_j)∂_k)^l` at `[l, i, j, k]`.
    pub riemann: Tensor<4>,
    pub ricci: DMatrix<f64>,
    pub scalar: f64,
    pub frame: Frame,
}

impl CurvatureBundle {
    pub fn from_local(local: &Local, signature: Signature, seed: Option<&[f64]>) -> Result<Self> {
        let n = local.n;
        let riemann = local.riemann();
        let ricci = DMatrix::from_fn(n, n, |j, k| (0..n).map(|i| riemann[[i, i, j, k]]).sum());
        let ricci = (&ricci + ricci.transpose()) * 0.5;
        let scalar = (0..n)
            .flat_map(|j| (0..n).map(move |k| (j, k)))
            .map(|(j, k)| local.ginvv[(j, k)] * ricci[(j, k)])
            .sum();
        let frame = orthonormal_frame(&local.gv, signature, seed)?;
        Ok(CurvatureBundle {
            point: local.point.clone(),
            g: local.gv.clone(),
            g_inv: local.ginvv.clone(),
            gamma: local.christoffel(),
            riemann,
            ricci,
            scalar,
            frame,
        })
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        inner(&self.g, u, v)
    }

    /// `R(u, v) w`.
    pub fn r_apply(&self, u: &[f64], v: &[f64], w: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for l in 0..n {
            let mut s = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let uv = u[i] * v[j];
                    if uv == 0.0 {
                        continue;
                    }
                    for k in 0..n {
                        s += self.riemann[[l, i, j, k]] * uv * w[k];
                    }
                }
            }
            out[l] = s;
        }
        out
    }

    /// `g(R(u, v) w, z)`.
    pub fn rm(&self, u: &[f64], v: &[f64], w: &[f64], z: &[f64]) -> f64 {
        self.inner(&self.r_apply(u, v, w), z)
    }

    pub fn ric(&self, u: &[f64], v: &[f64]) -> f64 {
        inner(&self.ricci, u, v)
    }
}

/// Curvature bundle of `chart` at `p`, with the frame seeded by `seed`.
pub fn curvature_bundle(
    chart: &Chart,
    p: &[f64],
    seed: Option<&VectorFieldExpr>,
    cfg: &DifferentiationConfig,
) -> Result<CurvatureBundle> {
    let local = Local::new(chart, p, cfg)?;
    let s = seed.map(|f| f.at(p));
    CurvatureBundle::from_local(&local, chart.signature, s.as_deref())
}

pub fn christoffel(chart: &Chart, p: &[f64], cfg: &DifferentiationConfig) -> Result<Tensor<3>> {
    Ok(Local::new(chart, p, cfg)?.christoffel())
}

/// `g(R(u,v)v,u) / Q` for a nondegenerate plane.
pub fn sectional(b: &CurvatureBundle, u: &[f64], v: &[f64]) -> Result<f64> {
    let q = b.inner(u, u) * b.inner(v, v) - b.inner(u, v).powi(2);
    if q.abs() < 1e-10 {
        return Err(Error::DegeneratePlane { q });
    }
    Ok(b.rm(u, v, v, u) / q)
}

/// Lightlike sectional curvature `g(R(u,x)x,u) / (g(u,E)² g(x,x))` of the
/// degenerate plane spanned by a null `u` and a spacelike `x`.
pub fn lightlike_sectional(b: &CurvatureBundle, u: &[f64], x: &[f64], e: &[f64]) -> Result<f64> {
    let uu = b.inner(u, u);
    if uu.abs() > 1e-10 * norm2(u).powi(2).max(1.0) {
        return Err(Error::NotLightlike(format!("g(u,u) = {uu:e}")));
    }
    let xx = b.inner(x, x);
    if !(xx > 0.0) {
        return Err(Error::NotLightlike(format!(
            "g(x,x) = {xx:e} is not positive"
        )));
    }
    let nu = norm2(u);
    let nx = norm2(x);
    let cross: f64 = (0..u.len())
        .flat_map(|i| (0..u.len()).map(move |j| (i, j)))
        .map(|(i, j)| (u[i] * x[j] - u[j] * x[i]).powi(2))
        .sum::<f64>()
        .sqrt();
    if cross < 1e-10 * nu * nx || nu == 0.0 {
        return Err(Error::DegenerateSpan);
    }
    let ux = b.inner(u, x);
    if ux.abs() > 1e-8 * nu * nx.max(1.0) {
        return Err(Error::NotLightlike(format!(
            "g(u,x) = {ux:e}: plane is not degenerate"
        )));
    }
    let ue = b.inner(u, e);
    if ue == 0.0 {
        return Err(Error::NotLightlike("g(u,E) = 0".into()));
    }
    Ok(b.rm(u, x, x, u) / (ue * ue * xx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lorentzian_frame_puts_timelike_first() {
        let g = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.0, -1.0, 0.2, 0.0, 0.2, 1.0]);
        let f = orthonormal_frame(&g, Signature::Lorentzian, None).unwrap();
        assert_eq!(f.signs[0], -1.0);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { f.signs[i] } else { 0.0 };
                assert!((inner(&g, &f.vectors[i], &f.vectors[j]) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn seeded_frame_stores_seed_last() {
        let g = DMatrix::<f64>::identity(3, 3);
        let f = orthonormal_frame(&g, Signature::Riemannian, Some(&[0.0, 3.0, 4.0])).unwrap();
        assert_eq!(f.vectors[2], vec![0.0, 0.6, 0.8]);
        assert_eq!(f.vectors[0], vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn spacelike_seed_in_lorentzian_signature() {
        let g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 1.0, 1.0]));
        let f = orthonormal_frame(&g, Signature::Lorentzian, Some(&[0.5, 1.0, 0.0])).unwrap();
        assert_eq!(f.signs.iter().filter(|s| **s < 0.0).count(), 1);
        assert_eq!(f.signs[2], 1.0);
    }

    #[test]
    fn null_seed_is_rejected() {
        let g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 1.0]));
        assert!(matches!(
            orthonormal_frame(&g, Signature::Lorentzian, Some(&[1.0, 1.0])),
            Err(Error::NullSeedField { .. })
        ));
    }
}
