//! Scalar types that metric and field formulas are evaluated over.
//!
//! Every formula in the engine is written once, generically over [`Real`],
//! and evaluated with three backends:
//!
//! * `f64` for plain values,
//! * [`Jet`] for values plus exact first and second partial derivatives,
//! * [`crate::mp::Mp`] for arbitrary-precision values where coordinate
//!   cancellation defeats double precision.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest coordinate dimension a [`Jet`] can differentiate in.
pub const MAX_DIM: usize = 4;

/// Field-like scalar with the elementary functions the catalog needs.
pub trait Real:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(x: f64) -> Self;
    fn value(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::cst(1.0);
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    fn scale(&self, k: f64) -> Self {
        self.clone() * Self::cst(k)
    }
}

impl Real for f64 {
    fn cst(x: f64) -> Self {
        x
    }
    fn value(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn powi(&self, n: u32) -> Self {
        f64::powi(*self, n as i32)
    }
}

/// Second-order truncated Taylor jet in up to [`MAX_DIM`] variables.
///
/// Holds `f`, `∂_i f` and `∂_i ∂_j f` at a point. Arithmetic follows the
/// Leibniz and chain rules, so derivatives are exact to rounding.
///
/// [`Jet::partial`] lowers the order by one; the Hessian of the result is
/// unknown and is filled with NaN so that any misuse surfaces loudly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d: [f64; MAX_DIM],
    pub h: [[f64; MAX_DIM]; MAX_DIM],
}

impl Jet {
    pub const fn constant(v: f64) -> Self {
        Jet {
            v,
            d: [0.0; MAX_DIM],
            h: [[0.0; MAX_DIM]; MAX_DIM],
        }
    }

    /// The coordinate function `x_k` at value `v`.
    pub fn variable(v: f64, k: usize) -> Self {
        let mut j = Jet::constant(v);
        j.d[k] = 1.0;
        j
    }

    /// Seeds every coordinate of `p` as an independent variable.
    pub fn seed(p: &[f64]) -> Vec<Jet> {
        assert!(p.len() <= MAX_DIM, "dimension {} exceeds MAX_DIM", p.len());
        p.iter()
            .enumerate()
            .map(|(k, &x)| Jet::variable(x, k))
            .collect()
    }

    /// `∂_k` of this jet; one order is lost.
    pub fn partial(&self, k: usize) -> Jet {
        Jet {
            v: self.d[k],
            d: self.h[k],
            h: [[f64::NAN; MAX_DIM]; MAX_DIM],
        }
    }

    /// Applies a scalar function given its value and first two derivatives.
    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Jet {
        let mut out = Jet::constant(f0);
        for i in 0..MAX_DIM {
            out.d[i] = f1 * self.d[i];
        }
        for i in 0..MAX_DIM {
            for j in 0..MAX_DIM {
                out.h[i][j] = f2 * self.d[i] * self.d[j] + f1 * self.h[i][j];
            }
        }
        out
    }

    pub fn recip(&self) -> Jet {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        self.v += o.v;
        for i in 0..MAX_DIM {
            self.d[i] += o.d[i];
            for j in 0..MAX_DIM {
                self.h[i][j] += o.h[i][j];
            }
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, o: Jet) -> Jet {
        self.v -= o.v;
        for i in 0..MAX_DIM {
            self.d[i] -= o.d[i];
            for j in 0..MAX_DIM {
                self.h[i][j] -= o.h[i][j];
            }
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut out = Jet::constant(self.v * o.v);
        for i in 0..MAX_DIM {
            out.d[i] = self.v * o.d[i] + self.d[i] * o.v;
        }
        for i in 0..MAX_DIM {
            for j in 0..MAX_DIM {
                out.h[i][j] = self.v * o.h[i][j]
                    + self.d[i] * o.d[j]
                    + self.d[j] * o.d[i]
                    + self.h[i][j] * o.v;
            }
        }
        out
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        self.v = -self.v;
        for i in 0..MAX_DIM {
            self.d[i] = -self.d[i];
            for j in 0..MAX_DIM {
                self.h[i][j] = -self.h[i][j];
            }
        }
        self
    }
}

impl Real for Jet {
    fn cst(x: f64) -> Self {
        Jet::constant(x)
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn sqrt(&self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }
    fn exp(&self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
    fn ln(&self) -> Self {
        let r = 1.0 / self.v;
        self.chain(self.v.ln(), r, -r * r)
    }
    fn sin(&self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }
    fn cos(&self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }
    fn sinh(&self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(s, c, s)
    }
    fn cosh(&self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(c, s, c)
    }
    fn powi(&self, n: u32) -> Self {
        if n == 0 {
            return Jet::constant(1.0);
        }
        let k = n as i32;
        let nf = n as f64;
        let f1 = nf * self.v.powi(k - 1);
        let f2 = if n >= 2 {
            nf * (nf - 1.0) * self.v.powi(k - 2)
        } else {
            0.0
        };
        self.chain(self.v.powi(k), f1, f2)
    }
    fn scale(&self, k: f64) -> Self {
        let mut out = *self;
        out.v *= k;
        for i in 0..MAX_DIM {
            out.d[i] *= k;
            for j in 0..MAX_DIM {
                out.h[i][j] *= k;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd2<F: Fn(&[f64]) -> f64>(f: F, p: &[f64], i: usize, j: usize) -> f64 {
        let h = 1e-4;
        let shift = |di: f64, dj: f64| {
            let mut q = p.to_vec();
            q[i] += di;
            q[j] += dj;
            f(&q)
        };
        (shift(h, h) - shift(h, -h) - shift(-h, h) + shift(-h, -h)) / (4.0 * h * h)
    }

    #[test]
    fn product_rule_matches_finite_differences() {
        let f = |x: &[f64]| (x[0] * x[1]).sin() * (x[2]).exp() / (1.0 + x[0] * x[0]);
        let p = [0.3, -0.7, 0.2];
        let x = Jet::seed(&p);
        let j = (x[0] * x[1]).sin() * x[2].exp() / (Jet::cst(1.0) + x[0] * x[0]);
        assert!((j.v - f(&p)).abs() < 1e-15);
        for a in 0..3 {
            for b in 0..3 {
                let expect = fd2(f, &p, a, b);
                assert!(
                    (j.h[a][b] - expect).abs() < 1e-6,
                    "h[{a}][{b}] = {} vs {expect}",
                    j.h[a][b]
                );
            }
        }
    }

    #[test]
    fn partial_poisons_unknown_hessian() {
        let x = Jet::seed(&[1.0, 2.0]);
        let f = x[0] * x[0] * x[1];
        let dx = f.partial(0);
        assert_eq!(dx.v, 2.0 * 1.0 * 2.0);
        assert_eq!(dx.d[1], 2.0);
        assert!(dx.h[0][0].is_nan());
    }

    #[test]
    fn elementary_functions_have_exact_derivatives() {
        let x = Jet::variable(0.4, 0);
        let c = x.cosh();
        assert!((c.d[0] - 0.4f64.sinh()).abs() < 1e-15);
        assert!((c.h[0][0] - 0.4f64.cosh()).abs() < 1e-15);
        let l = x.ln();
        assert!((l.h[0][0] + 1.0 / 0.16).abs() < 1e-12);
        let s = x.sqrt();
        assert!((s.h[0][0] + 0.25 * 0.4f64.powf(-1.5)).abs() < 1e-12);
        let p = x.powi(3);
        assert!((p.h[0][0] - 6.0 * 0.4).abs() < 1e-14);
    }
}
