use std::fmt;
use std::sync::Arc;

use super::chart::{Chart, DifferentiationConfig};
use super::local::lift;
use crate::expr::FieldFn;
use crate::jet::Jet;

/// A hypersurface given by a map from a parameter box into a chart.
#[derive(Clone)]
pub struct ImmersionSpec {
    pub name: String,
    pub params: super::chart::CoordBox,
    pub ambient_dim: usize,
    /// Parameter point to ambient coordinates.
    pub map: Arc<dyn FieldFn>,
}

impl fmt::Debug for ImmersionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImmersionSpec")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("ambient_dim", &self.ambient_dim)
            .finish()
    }
}

impl ImmersionSpec {
    pub fn param_dim(&self) -> usize {
        self.params.dim()
    }

    pub fn point(&self, q: &[f64]) -> Vec<f64> {
        self.map.eval_f64(q)
    }

    /// Ambient coordinates as jets in the parameters.
    pub fn lift(&self, cfg: &DifferentiationConfig, q: &[f64]) -> Vec<Jet> {
        lift(cfg, q, &|x| self.map.eval_f64(x), &|x| self.map.eval_jet(x))
    }

    /// Jets in the parameters of the ambient metric pulled back to the map,
    /// `g_ij(φ(q))`, row-major.
    pub fn metric_along(&self, chart: &Chart, cfg: &DifferentiationConfig, q: &[f64]) -> Vec<Jet> {
        let m = &chart.metric;
        let f = &self.map;
        lift(cfg, q, &|x| m.eval_f64(&f.eval_f64(x)), &|x| {
            m.eval_jet(&f.eval_jet(x))
        })
    }

    /// Ambient field components along the map, as jets in the parameters.
    pub fn field_along(
        &self,
        field: &dyn FieldFn,
        cfg: &DifferentiationConfig,
        q: &[f64],
    ) -> Vec<Jet> {
        let f = &self.map;
        lift(cfg, q, &|x| field.eval_f64(&f.eval_f64(x)), &|x| {
            field.eval_jet(&f.eval_jet(x))
        })
    }
}

/// Jacobian columns `J_a = ∂_a φ` from lifted map jets.
pub fn tangent_basis(phi: &[Jet], param_dim: usize) -> Vec<Vec<f64>> {
    (0..param_dim)
        .map(|a| phi.iter().map(|c| c.d[a]).collect())
        .collect()
}

/// Conormal of the tangent hyperplane spanned by `tangents`: the generalized
/// cross product, `n_i = (-1)^i det(J with row i removed)`.
pub fn conormal(tangents: &[Vec<Jet>], ambient: usize) -> Vec<Jet> {
    (0..ambient)
        .map(|i| {
            let rows: Vec<usize> = (0..ambient).filter(|&r| r != i).collect();
            let m: Vec<Jet> = rows
                .iter()
                .flat_map(|&r| tangents.iter().map(move |t| t[r]))
                .collect();
            let d = det_jet(&m, ambient - 1);
            if i % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect()
}

fn det_jet(m: &[Jet], n: usize) -> Jet {
    match n {
        0 => Jet::constant(1.0),
        1 => m[0],
        _ => {
            let mut acc = Jet::constant(0.0);
            for c in 0..n {
                let minor: Vec<Jet> = (1..n)
                    .flat_map(|r| (0..n).filter(move |&k| k != c).map(move |k| m[r * n + k]))
                    .collect();
                let term = m[c] * det_jet(&minor, n - 1);
                acc = if c % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// Tangent vectors `∂_a φ` as jets of one order less.
pub fn tangent_jets(phi: &[Jet], param_dim: usize) -> Vec<Vec<Jet>> {
    (0..param_dim)
        .map(|a| phi.iter().map(|c| c.partial(a)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conormal_annihilates_tangents() {
        let t1: Vec<Jet> = [1.0, 2.0, 0.5].iter().map(|&v| Jet::constant(v)).collect();
        let t2: Vec<Jet> = [0.0, -1.0, 3.0].iter().map(|&v| Jet::constant(v)).collect();
        let n = conormal(&[t1.clone(), t2.clone()], 3);
        for t in [t1, t2] {
            let s: f64 = n.iter().zip(&t).map(|(a, b)| a.v * b.v).sum();
            assert!(s.abs() < 1e-14);
        }
        assert!(n.iter().any(|c| c.v.abs() > 0.1));
    }
}
