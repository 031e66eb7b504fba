use std::ops::{Index, IndexMut};

use nalgebra::DMatrix;

use crate::jet::Real;

/// Dense rank-`R` array over `n` coordinate indices, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<const R: usize> {
    pub n: usize,
    pub data: Vec<f64>,
}

impl<const R: usize> Tensor<R> {
    pub fn zeros(n: usize) -> Self {
        Tensor {
            n,
            data: vec![0.0; n.pow(R as u32)],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut([usize; R]) -> f64) -> Self {
        let mut t = Self::zeros(n);
        for (flat, slot) in t.data.iter_mut().enumerate() {
            *slot = f(unflatten(flat, n));
        }
        t
    }

    fn offset(&self, idx: [usize; R]) -> usize {
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.n);
            acc * self.n + i
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn indices(&self) -> impl Iterator<Item = [usize; R]> + '_ {
        (0..self.data.len()).map(move |f| unflatten(f, self.n))
    }
}

fn unflatten<const R: usize>(mut flat: usize, n: usize) -> [usize; R] {
    let mut idx = [0; R];
    for slot in idx.iter_mut().rev() {
        *slot = flat % n;
        flat /= n;
    }
    idx
}

impl<const R: usize> Index<[usize; R]> for Tensor<R> {
    type Output = f64;
    fn index(&self, idx: [usize; R]) -> &f64 {
        &self.data[self.offset(idx)]
    }
}

impl<const R: usize> IndexMut<[usize; R]> for Tensor<R> {
    fn index_mut(&mut self, idx: [usize; R]) -> &mut f64 {
        let o = self.offset(idx);
        &mut self.data[o]
    }
}

/// `g(u, v)` for a coordinate matrix `g`.
pub fn inner(g: &DMatrix<f64>, u: &[f64], v: &[f64]) -> f64 {
    let n = u.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += g[(i, j)] * u[i] * v[j];
        }
    }
    s
}

pub fn mat_vec(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

pub fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + yi).collect()
}

pub fn scaled(a: f64, x: &[f64]) -> Vec<f64> {
    x.iter().map(|xi| a * xi).collect()
}

pub fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn add(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn max_abs(x: &[f64]) -> f64 {
    x.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn values<T: Real>(xs: &[T]) -> Vec<f64> {
    xs.iter().map(Real::value).collect()
}

/// Inverse of a row-major `n × n` matrix by Gauss-Jordan with partial
/// pivoting on values. Works for any [`Real`], so jets pick up the exact
/// derivatives of the inverse.
pub fn invert<T: Real>(m: &[T], n: usize) -> Option<Vec<T>> {
    let mut a = m.to_vec();
    let mut inv: Vec<T> = (0..n * n)
        .map(|k| T::cst(if k / n == k % n { 1.0 } else { 0.0 }))
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| {
            a[r * n + col]
                .value()
                .abs()
                .total_cmp(&a[s * n + col].value().abs())
        })?;
        if a[piv * n + col].value() == 0.0 {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
                inv.swap(piv * n + k, col * n + k);
            }
        }
        let d = a[col * n + col].clone();
        for k in 0..n {
            a[col * n + k] = a[col * n + k].clone() / d.clone();
            inv[col * n + k] = inv[col * n + k].clone() / d.clone();
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col].clone();
            for k in 0..n {
                a[r * n + k] = a[r * n + k].clone() - f.clone() * a[col * n + k].clone();
                inv[r * n + k] = inv[r * n + k].clone() - f.clone() * inv[col * n + k].clone();
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet;

    #[test]
    fn tensor_indexing_is_row_major() {
        let t = Tensor::<3>::from_fn(2, |[a, b, c]| (a * 4 + b * 2 + c) as f64);
        assert_eq!(t.data, (0..8).map(|k| k as f64).collect::<Vec<_>>());
        assert_eq!(t[[1, 0, 1]], 5.0);
    }

    #[test]
    fn jet_inverse_differentiates_exactly() {
        // m(x) = [[x, 1], [1, 2]]; d/dx m^{-1} = -m^{-1} (dm/dx) m^{-1}.
        let x = Jet::variable(3.0, 0);
        let one = Jet::constant(1.0);
        let m = vec![x, one, one, Jet::constant(2.0)];
        let inv = invert(&m, 2).unwrap();
        let det = 5.0;
        assert!((inv[0].v - 2.0 / det).abs() < 1e-15);
        // d/dx (2/(2x-1)) = -4/(2x-1)^2
        assert!((inv[0].d[0] + 4.0 / 25.0).abs() < 1e-15);
        assert!((inv[0].h[0][0] - 16.0 / 125.0).abs() < 1e-14);
    }
}
