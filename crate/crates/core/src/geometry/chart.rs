use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::MetricFn;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    Riemannian,
    Lorentzian,
}

impl Signature {
    pub fn negative_count(self) -> usize {
        match self {
            Signature::Riemannian => 0,
            Signature::Lorentzian => 1,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signature::Riemannian => "riemannian",
            Signature::Lorentzian => "lorentzian",
        })
    }
}

/// Product of open intervals `(lo_i, hi_i)`. A periodic axis is an angle:
/// `[lo, hi)` is one period, the metric repeats outside it and points never
/// leave the box along it.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub periodic: Vec<bool>,
}

impl CoordBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        assert!(lo.iter().zip(&hi).all(|(a, b)| a < b), "empty interval");
        let periodic = vec![false; lo.len()];
        CoordBox { lo, hi, periodic }
    }

    /// Marks the given axes as periodic.
    pub fn with_periodic(mut self, axes: &[usize]) -> Self {
        for &i in axes {
            self.periodic[i] = true;
        }
        self
    }

    pub fn cube(n: usize, lo: f64, hi: f64) -> Self {
        CoordBox::new(vec![lo; n], vec![hi; n])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim()
            && p.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .zip(&self.periodic)
                .all(|((x, (a, b)), per)| {
                    if *per {
                        x.is_finite()
                    } else {
                        *a < *x && *x < *b
                    }
                })
    }

    pub fn center(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    }

    /// The box with each side pulled in by `frac` of its width.
    pub fn shrunk(&self, frac: f64) -> CoordBox {
        let (lo, hi) = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| {
                let w = b - a;
                (a + frac * w, b - frac * w)
            })
            .unzip();
        CoordBox {
            lo,
            hi,
            periodic: self.periodic.clone(),
        }
    }
}

/// Coordinate domain plus metric components.
#[derive(Clone)]
pub struct Chart {
    pub name: String,
    pub domain: CoordBox,
    pub signature: Signature,
    pub metric: Arc<dyn MetricFn>,
    pub degeneracy_threshold: f64,
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Chart")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("domain", &self.domain)
            .field("signature", &self.signature)
            .finish()
    }
}

impl Chart {
    pub fn new(
        name: impl Into<String>,
        domain: CoordBox,
        signature: Signature,
        metric: Arc<dyn MetricFn>,
    ) -> Self {
        assert_eq!(domain.dim(), metric.dim(), "domain/metric dimension");
        Chart {
            name: name.into(),
            domain,
            signature,
            metric,
            degeneracy_threshold: 1e-10,
        }
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn check_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: p.len(),
            });
        }
        if !self.domain.contains(p) {
            return Err(Error::PointOutsideDomain { point: p.to_vec() });
        }
        Ok(())
    }

    /// Symmetrized metric matrix without any checks.
    pub fn metric_at(&self, p: &[f64]) -> DMatrix<f64> {
        let n = self.dim();
        let raw = self.metric.eval_f64(p);
        DMatrix::from_fn(n, n, |i, j| 0.5 * (raw[i * n + j] + raw[j * n + i]))
    }
}

/// Metric matrix at an interior point, checked for degeneracy and signature.
pub fn evaluate_metric(chart: &Chart, p: &[f64]) -> Result<DMatrix<f64>> {
    chart.check_point(p)?;
    let g = chart.metric_at(p);
    let det = g.determinant();
    if !(det.abs() >= chart.degeneracy_threshold) {
        return Err(Error::DegenerateMetric {
            point: p.to_vec(),
            det,
        });
    }
    let negative = g
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .filter(|&&l| l < 0.0)
        .count();
    if negative != chart.signature.negative_count() {
        return Err(Error::SignatureMismatch {
            point: p.to_vec(),
            negative,
            expected: chart.signature.negative_count(),
        });
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffMode {
    ForwardExact,
    FiniteDifference,
}

impl fmt::Display for DiffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiffMode::ForwardExact => "forward_exact",
            DiffMode::FiniteDifference => "finite_difference",
        })
    }
}

/// How metric and field derivatives are obtained, plus per-class tolerances.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentiationConfig {
    pub mode: DiffMode,
    pub fd_step: f64,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for DifferentiationConfig {
    fn default() -> Self {
        DifferentiationConfig {
            mode: DiffMode::ForwardExact,
            fd_step: 1e-5,
            tolerances: BTreeMap::new(),
        }
    }
}

impl DifferentiationConfig {
    pub fn finite_difference() -> Self {
        DifferentiationConfig {
            mode: DiffMode::FiniteDifference,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fd_step > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "fd_step must be positive, got {}",
                self.fd_step
            )));
        }
        Ok(())
    }

    /// Tolerance for an identity class (`equality` or `inequality`).
    pub fn tolerance(&self, class: &str) -> f64 {
        if let Some(&t) = self.tolerances.get(class) {
            return t;
        }
        match (class, self.mode) {
            ("inequality", _) => 1e-10,
            (_, DiffMode::ForwardExact) => 1e-8,
            (_, DiffMode::FiniteDifference) => 1e-4,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::MetricFormula;
    use crate::jet::Real;

    struct Diag(Vec<f64>);
    impl MetricFormula for Diag {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn eval<T: Real>(&self, _x: &[T]) -> Vec<T> {
            let n = self.0.len();
            (0..n * n)
                .map(|k| T::cst(if k / n == k % n { self.0[k / n] } else { 0.0 }))
                .collect()
        }
    }

    #[test]
    fn rejects_points_on_or_outside_the_boundary() {
        let c = Chart::new(
            "flat",
            CoordBox::cube(2, -1.0, 1.0),
            Signature::Riemannian,
            Arc::new(Diag(vec![1.0, 1.0])),
        );
        assert!(evaluate_metric(&c, &[0.0, 0.5]).is_ok());
        assert!(matches!(
            evaluate_metric(&c, &[1.0, 0.0]),
            Err(Error::PointOutsideDomain { .. })
        ));
    }

    #[test]
    fn detects_degeneracy_and_wrong_signature() {
        let c = Chart::new(
            "bad",
            CoordBox::cube(2, -1.0, 1.0),
            Signature::Riemannian,
            Arc::new(Diag(vec![1.0, 1e-12])),
        );
        assert!(matches!(
            evaluate_metric(&c, &[0.0, 0.0]),
            Err(Error::DegenerateMetric { .. })
        ));
        let l = Chart::new(
            "lor",
            CoordBox::cube(2, -1.0, 1.0),
            Signature::Riemannian,
            Arc::new(Diag(vec![-1.0, 1.0])),
        );
        assert!(matches!(
            evaluate_metric(&l, &[0.0, 0.0]),
            Err(Error::SignatureMismatch { negative: 1, .. })
        ));
    }

    #[test]
    fn shrunk_box_stays_inside() {
        let b = CoordBox::new(vec![0.0, -2.0], vec![1.0, 2.0]).shrunk(0.05);
        assert!((b.lo[0] - 0.05).abs() < 1e-15 && (b.hi[1] - 1.8).abs() < 1e-15);
    }
}
