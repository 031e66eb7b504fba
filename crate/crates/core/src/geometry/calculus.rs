use nalgebra::{DMatrix, DVector};

use super::chart::{Chart, DifferentiationConfig};
use super::local::Local;
use super::tensor::{inner, Tensor};
use crate::error::{Error, Result};
use crate::expr::{FieldFn, ScalarFieldExpr, VectorFieldExpr};
use crate::jet::Jet;

/// First-order data of a vector field `E` at a point.
#[derive(Clone, Debug)]
pub struct FieldCalculus {
    /// `A_E(V) = ∇_V E`, as the matrix `A^i_j = (∇_j E)^i`.
    pub a_e: DMatrix<f64>,
    pub a_e_adjoint: DMatrix<f64>,
    /// `P A_E^* P` with `P` the `g`-orthogonal projection onto `E^⊥`.
    pub a_e_orth: DMatrix<f64>,
    pub lie_g: DMatrix<f64>,
    pub d_omega: DMatrix<f64>,
    pub div: f64,
    pub accel: Vec<f64>,
    pub epsilon: f64,
    pub e: Vec<f64>,
}

impl FieldCalculus {
    pub fn from_local(local: &Local, e_jet: &[Jet]) -> Result<Self> {
        let n = local.n;
        let g = &local.gv;
        let e: Vec<f64> = e_jet.iter().map(|j| j.v).collect();
        let ne = local.nabla_vector(e_jet);
        let a_e = DMatrix::from_fn(n, n, |i, j| ne[i * n + j].v);
        let epsilon = inner(g, &e, &e);
        if epsilon.abs() <= 1e-10 {
            return Err(Error::NullField { value: epsilon });
        }
        let a_e_adjoint = &local.ginvv * a_e.transpose() * g;
        let ev = DVector::from_column_slice(&e);
        let omega = g * &ev;
        let p = DMatrix::identity(n, n) - &ev * omega.transpose() / epsilon;
        let a_e_orth = &p * &a_e_adjoint * &p;
        // (∇_i ω)_j = g_jk A^k_i
        let ga = g * &a_e;
        let nabla_omega = ga.transpose();
        let lie_g = &nabla_omega + nabla_omega.transpose();
        let d_omega = &nabla_omega - nabla_omega.transpose();
        let div = a_e.trace();
        let accel = (&a_e * &ev).iter().copied().collect();
        Ok(FieldCalculus {
            a_e,
            a_e_adjoint,
            a_e_orth,
            lie_g,
            d_omega,
            div,
            accel,
            epsilon,
            e,
        })
    }

    /// `(∇_i ω)_j`.
    pub fn nabla_omega(&self, g: &DMatrix<f64>) -> DMatrix<f64> {
        (g * &self.a_e).transpose()
    }
}

pub fn field_calculus(
    chart: &Chart,
    e: &VectorFieldExpr,
    p: &[f64],
    cfg: &DifferentiationConfig,
) -> Result<FieldCalculus> {
    let local = Local::new(chart, p, cfg)?;
    let ej = local.lift_field(&*e.components);
    FieldCalculus::from_local(&local, &ej)
}

#[derive(Clone, Debug)]
pub struct ScalarCalculus {
    pub value: f64,
    pub grad: Vec<f64>,
    pub hessian: DMatrix<f64>,
    pub laplacian: f64,
}

impl ScalarCalculus {
    pub fn from_local(local: &Local, f: &Jet) -> Self {
        let n = local.n;
        let df: Vec<f64> = (0..n).map(|k| f.d[k]).collect();
        let grad = (0..n)
            .map(|i| (0..n).map(|j| local.ginvv[(i, j)] * df[j]).sum())
            .collect();
        let hessian = DMatrix::from_fn(n, n, |i, j| {
            let sym = 0.5 * (f.h[i][j] + f.h[j][i]);
            sym - (0..n)
                .map(|k| local.gamma_at(k, i, j).v * df[k])
                .sum::<f64>()
        });
        let laplacian = local.ginvv.component_mul(&hessian).sum();
        ScalarCalculus {
            value: f.v,
            grad,
            hessian,
            laplacian,
        }
    }
}

pub fn scalar_field_calculus(
    chart: &Chart,
    f: &ScalarFieldExpr,
    p: &[f64],
    cfg: &DifferentiationConfig,
) -> Result<ScalarCalculus> {
    let local = Local::new(chart, p, cfg)?;
    let fj = local.lift_scalar(&*f.value);
    Ok(ScalarCalculus::from_local(&local, &fj))
}

/// `(∇_dir T)^a_bc` for a (1,2) tensor field whose `n³` components are
/// produced by `t` in the order `[(a * n + b) * n + c]`.
pub fn covariant_derivative_tensor(
    chart: &Chart,
    t: &dyn FieldFn,
    p: &[f64],
    dir: &[f64],
    cfg: &DifferentiationConfig,
) -> Result<Tensor<3>> {
    let local = Local::new(chart, p, cfg)?;
    let n = local.n;
    let tj = local.lift_field(t);
    if tj.len() != n * n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n * n,
            got: tj.len(),
        });
    }
    let nt = local.nabla_t12(&tj);
    Ok(Tensor::from_fn(n, |[a, b, c]| {
        (0..n).map(|k| dir[k] * nt[[k, a, b, c]]).sum()
    }))
}
