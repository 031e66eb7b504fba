//! Metric, vector-field and scalar-field expressions.
//!
//! A formula is a struct implementing one of [`MetricFormula`],
//! [`FieldFormula`] or [`ScalarFormula`]; its `eval` is generic over
//! [`Real`] and is therefore evaluable as plain values, as derivative jets,
//! or in arbitrary precision. Blanket impls turn every formula into the
//! object-safe [`MetricFn`] / [`FieldFn`] / [`ScalarFn`] that charts store.

use std::fmt;
use std::sync::Arc;

use crate::jet::{Jet, Real};
use crate::mp::Mp;

pub trait MetricFormula: Send + Sync + 'static {
    fn dim(&self) -> usize;
    /// Row-major `dim × dim` components `g_ij(x)`.
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T>;
}

pub trait FieldFormula: Send + Sync + 'static {
    fn dim(&self) -> usize;
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T>;
}

pub trait ScalarFormula: Send + Sync + 'static {
    fn dim(&self) -> usize;
    fn eval<T: Real>(&self, x: &[T]) -> T;
}

pub trait MetricFn: Send + Sync {
    fn dim(&self) -> usize;
    fn eval_f64(&self, x: &[f64]) -> Vec<f64>;
    fn eval_jet(&self, x: &[Jet]) -> Vec<Jet>;
    fn eval_mp(&self, x: &[Mp]) -> Vec<Mp>;
}

pub trait FieldFn: Send + Sync {
    fn dim(&self) -> usize;
    fn eval_f64(&self, x: &[f64]) -> Vec<f64>;
    fn eval_jet(&self, x: &[Jet]) -> Vec<Jet>;
    fn eval_mp(&self, x: &[Mp]) -> Vec<Mp>;
}

pub trait ScalarFn: Send + Sync {
    fn dim(&self) -> usize;
    fn eval_f64(&self, x: &[f64]) -> f64;
    fn eval_jet(&self, x: &[Jet]) -> Jet;
    fn eval_mp(&self, x: &[Mp]) -> Mp;
}

impl<M: MetricFormula> MetricFn for M {
    fn dim(&self) -> usize {
        MetricFormula::dim(self)
    }
    fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.eval(x)
    }
    fn eval_jet(&self, x: &[Jet]) -> Vec<Jet> {
        self.eval(x)
    }
    fn eval_mp(&self, x: &[Mp]) -> Vec<Mp> {
        self.eval(x)
    }
}

impl<F: FieldFormula> FieldFn for F {
    fn dim(&self) -> usize {
        FieldFormula::dim(self)
    }
    fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.eval(x)
    }
    fn eval_jet(&self, x: &[Jet]) -> Vec<Jet> {
        self.eval(x)
    }
    fn eval_mp(&self, x: &[Mp]) -> Vec<Mp> {
        self.eval(x)
    }
}

impl<S: ScalarFormula> ScalarFn for S {
    fn dim(&self) -> usize {
        ScalarFormula::dim(self)
    }
    fn eval_f64(&self, x: &[f64]) -> f64 {
        self.eval(x)
    }
    fn eval_jet(&self, x: &[Jet]) -> Jet {
        self.eval(x)
    }
    fn eval_mp(&self, x: &[Mp]) -> Mp {
        self.eval(x)
    }
}

/// Routes a generic evaluation through the object-safe traits, so composite
/// formulas can call stored `dyn` expressions with their own scalar type.
pub trait Backend: Real {
    fn metric(m: &dyn MetricFn, x: &[Self]) -> Vec<Self>;
    fn field(f: &dyn FieldFn, x: &[Self]) -> Vec<Self>;
    fn scalar(s: &dyn ScalarFn, x: &[Self]) -> Self;
}

impl Backend for f64 {
    fn metric(m: &dyn MetricFn, x: &[Self]) -> Vec<Self> {
        m.eval_f64(x)
    }
    fn field(f: &dyn FieldFn, x: &[Self]) -> Vec<Self> {
        f.eval_f64(x)
    }
    fn scalar(s: &dyn ScalarFn, x: &[Self]) -> Self {
        s.eval_f64(x)
    }
}

impl Backend for Jet {
    fn metric(m: &dyn MetricFn, x: &[Self]) -> Vec<Self> {
        m.eval_jet(x)
    }
    fn field(f: &dyn FieldFn, x: &[Self]) -> Vec<Self> {
        f.eval_jet(x)
    }
    fn scalar(s: &dyn ScalarFn, x: &[Self]) -> Self {
        s.eval_jet(x)
    }
}

impl Backend for Mp {
    fn metric(m: &dyn MetricFn, x: &[Self]) -> Vec<Self> {
        m.eval_mp(x)
    }
    fn field(f: &dyn FieldFn, x: &[Self]) -> Vec<Self> {
        f.eval_mp(x)
    }
    fn scalar(s: &dyn ScalarFn, x: &[Self]) -> Self {
        s.eval_mp(x)
    }
}

/// Formulas that compose stored expressions implement this instead of the
/// plain formula traits; the `T: Backend` bound lets them call into `dyn`.
pub trait ComposedMetric: Send + Sync + 'static {
    fn dim(&self) -> usize;
    fn eval<T: Backend>(&self, x: &[T]) -> Vec<T>;
}

pub trait ComposedField: Send + Sync + 'static {
    fn dim(&self) -> usize;
    fn eval<T: Backend>(&self, x: &[T]) -> Vec<T>;
}

pub trait ComposedScalar: Send + Sync + 'static {
    fn dim(&self) -> usize;
    fn eval<T: Backend>(&self, x: &[T]) -> T;
}

/// Adapter giving a composed formula the object-safe interface.
pub struct Composed<C>(pub C);

impl<C: ComposedMetric> MetricFn for Composed<C> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.0.eval(x)
    }
    fn eval_jet(&self, x: &[Jet]) -> Vec<Jet> {
        self.0.eval(x)
    }
    fn eval_mp(&self, x: &[Mp]) -> Vec<Mp> {
        self.0.eval(x)
    }
}

impl<C: ComposedField> FieldFn for Composed<C> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.0.eval(x)
    }
    fn eval_jet(&self, x: &[Jet]) -> Vec<Jet> {
        self.0.eval(x)
    }
    fn eval_mp(&self, x: &[Mp]) -> Vec<Mp> {
        self.0.eval(x)
    }
}

impl<C: ComposedScalar> ScalarFn for Composed<C> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval_f64(&self, x: &[f64]) -> f64 {
        self.0.eval(x)
    }
    fn eval_jet(&self, x: &[Jet]) -> Jet {
        self.0.eval(x)
    }
    fn eval_mp(&self, x: &[Mp]) -> Mp {
        self.0.eval(x)
    }
}

/// A named vector field.
#[derive(Clone)]
pub struct VectorFieldExpr {
    pub name: String,
    pub components: Arc<dyn FieldFn>,
}

impl VectorFieldExpr {
    pub fn new(name: impl Into<String>, f: impl FieldFn + 'static) -> Self {
        VectorFieldExpr {
            name: name.into(),
            components: Arc::new(f),
        }
    }

    pub fn dim(&self) -> usize {
        self.components.dim()
    }

    pub fn at(&self, p: &[f64]) -> Vec<f64> {
        self.components.eval_f64(p)
    }
}

impl fmt::Debug for VectorFieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorFieldExpr({}, dim {})", self.name, self.dim())
    }
}

/// A named scalar field.
#[derive(Clone)]
pub struct ScalarFieldExpr {
    pub name: String,
    pub value: Arc<dyn ScalarFn>,
}

impl ScalarFieldExpr {
    pub fn new(name: impl Into<String>, f: impl ScalarFn + 'static) -> Self {
        ScalarFieldExpr {
            name: name.into(),
            value: Arc::new(f),
        }
    }

    pub fn dim(&self) -> usize {
        self.value.dim()
    }

    pub fn at(&self, p: &[f64]) -> f64 {
        self.value.eval_f64(p)
    }
}

impl fmt::Debug for ScalarFieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarFieldExpr({}, dim {})", self.name, self.dim())
    }
}

/// Constant-coefficient field.
#[derive(Clone, Debug)]
pub struct ConstantField(pub Vec<f64>);

impl FieldFormula for ConstantField {
    fn dim(&self) -> usize {
        self.0.len()
    }
    fn eval<T: Real>(&self, _x: &[T]) -> Vec<T> {
        self.0.iter().map(|&c| T::cst(c)).collect()
    }
}

/// Field with affine plus diagonal-quadratic components,
/// `V^i = a_i + Σ_j b_ij x_j + c_i x_i²`. Used as a generic test field.
#[derive(Clone, Debug)]
pub struct QuadraticField {
    pub a: Vec<f64>,
    pub b: Vec<Vec<f64>>,
    pub c: Vec<f64>,
}

impl FieldFormula for QuadraticField {
    fn dim(&self) -> usize {
        self.a.len()
    }
    fn eval<T: Real>(&self, x: &[T]) -> Vec<T> {
        (0..self.a.len())
            .map(|i| {
                let mut acc = T::cst(self.a[i]) + x[i].clone() * x[i].clone() * T::cst(self.c[i]);
                for (j, xj) in x.iter().enumerate() {
                    acc = acc + xj.clone() * T::cst(self.b[i][j]);
                }
                acc
            })
            .collect()
    }
}

/// `U / sqrt(|g(U,U)|)` for a stored metric and field.
pub struct UnitOf {
    pub metric: Arc<dyn MetricFn>,
    pub field: Arc<dyn FieldFn>,
}

impl ComposedField for UnitOf {
    fn dim(&self) -> usize {
        self.field.dim()
    }
    fn eval<T: Backend>(&self, x: &[T]) -> Vec<T> {
        let n = self.field.dim();
        let g = T::metric(&*self.metric, x);
        let u = T::field(&*self.field, x);
        let mut q = T::cst(0.0);
        for i in 0..n {
            for j in 0..n {
                q = q + g[i * n + j].clone() * u[i].clone() * u[j].clone();
            }
        }
        let norm = if q.value() < 0.0 {
            (-q).sqrt()
        } else {
            q.sqrt()
        };
        u.into_iter().map(|c| c / norm.clone()).collect()
    }
}

/// `sqrt(|g(U,U)|)` for a stored metric and field.
pub struct NormOf {
    pub metric: Arc<dyn MetricFn>,
    pub field: Arc<dyn FieldFn>,
}

impl ComposedScalar for NormOf {
    fn dim(&self) -> usize {
        self.field.dim()
    }
    fn eval<T: Backend>(&self, x: &[T]) -> T {
        let n = self.field.dim();
        let g = T::metric(&*self.metric, x);
        let u = T::field(&*self.field, x);
        let mut q = T::cst(0.0);
        for i in 0..n {
            for j in 0..n {
                q = q + g[i * n + j].clone() * u[i].clone() * u[j].clone();
            }
        }
        if q.value() < 0.0 {
            (-q).sqrt()
        } else {
            q.sqrt()
        }
    }
}

/// `ln s` of a stored scalar field.
pub struct LnOf(pub Arc<dyn ScalarFn>);

impl ComposedScalar for LnOf {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval<T: Backend>(&self, x: &[T]) -> T {
        T::scalar(&*self.0, x).ln()
    }
}

/// Constant scalar field.
#[derive(Clone, Debug)]
pub struct ConstantScalar {
    pub dim: usize,
    pub value: f64,
}

impl ScalarFormula for ConstantScalar {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval<T: Real>(&self, _x: &[T]) -> T {
        T::cst(self.value)
    }
}
