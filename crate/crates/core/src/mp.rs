//! Arbitrary-precision [`Real`] backend.
//!
//! Precision is a thread-local setting so that formulas written against
//! [`Real`] need no extra plumbing. Use [`with_precision`] to scope it.

use std::cell::{Cell, RefCell};
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

use crate::jet::Real;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static PRECISION: Cell<usize> = const { Cell::new(128) };
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

/// Runs `f` with every [`Mp`] operation rounded to `bits` of mantissa.
pub fn with_precision<R>(bits: usize, f: impl FnOnce() -> R) -> R {
    let old = PRECISION.with(|p| p.replace(bits.max(64)));
    let out = f();
    PRECISION.with(|p| p.set(old));
    out
}

pub fn precision() -> usize {
    PRECISION.with(Cell::get)
}

fn with_cc<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone, Debug)]
pub struct Mp(pub BigFloat);

impl Mp {
    pub fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.0.is_zero() {
            return 0.0;
        }
        let Some((words, _, sign, exp, _)) = self.0.as_raw_parts() else {
            return f64::NAN;
        };
        // Mantissa is 0.m with the most significant word last.
        let top = words[words.len() - 1] as f64;
        let next = if words.len() > 1 {
            words[words.len() - 2] as f64 / 2f64.powi(64)
        } else {
            0.0
        };
        let mant = (top + next) / 2f64.powi(64);
        let v = mant * 2f64.powi(exp);
        match sign {
            Sign::Neg => -v,
            Sign::Pos => v,
        }
    }
}

impl Add for Mp {
    type Output = Mp;
    fn add(self, o: Mp) -> Mp {
        Mp(self.0.add(&o.0, precision(), RM))
    }
}

impl Sub for Mp {
    type Output = Mp;
    fn sub(self, o: Mp) -> Mp {
        Mp(self.0.sub(&o.0, precision(), RM))
    }
}

impl Mul for Mp {
    type Output = Mp;
    fn mul(self, o: Mp) -> Mp {
        Mp(self.0.mul(&o.0, precision(), RM))
    }
}

impl Div for Mp {
    type Output = Mp;
    fn div(self, o: Mp) -> Mp {
        Mp(self.0.div(&o.0, precision(), RM))
    }
}

impl Neg for Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        Mp(self.0.neg())
    }
}

impl Real for Mp {
    fn cst(x: f64) -> Self {
        Mp(BigFloat::from_f64(x, precision()))
    }
    fn value(&self) -> f64 {
        self.to_f64()
    }
    fn sqrt(&self) -> Self {
        Mp(self.0.sqrt(precision(), RM))
    }
    fn exp(&self) -> Self {
        with_cc(|cc| Mp(self.0.exp(precision(), RM, cc)))
    }
    fn ln(&self) -> Self {
        with_cc(|cc| Mp(self.0.ln(precision(), RM, cc)))
    }
    fn sin(&self) -> Self {
        with_cc(|cc| Mp(self.0.sin(precision(), RM, cc)))
    }
    fn cos(&self) -> Self {
        with_cc(|cc| Mp(self.0.cos(precision(), RM, cc)))
    }
    fn sinh(&self) -> Self {
        with_cc(|cc| Mp(self.0.sinh(precision(), RM, cc)))
    }
    fn cosh(&self) -> Self {
        with_cc(|cc| Mp(self.0.cosh(precision(), RM, cc)))
    }
    fn powi(&self, n: u32) -> Self {
        Mp(self.0.powi(n as usize, precision(), RM))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_doubles() {
        for &x in &[1.0, -2.5, 1e-300, std::f64::consts::PI, -7.25e17] {
            let m = with_precision(200, || Mp::cst(x));
            assert_eq!(m.to_f64(), x);
        }
    }

    #[test]
    fn resolves_cancellation_beyond_double_precision() {
        // cosh(s) - sinh(s) = exp(-s) is invisible in f64 for s = 80.
        let v = with_precision(320, || {
            let s = Mp::cst(80.0);
            (s.cosh() - s.sinh()).to_f64()
        });
        assert!((v / (-80f64).exp() - 1.0).abs() < 1e-14);
        assert_eq!(80f64.cosh() - 80f64.sinh(), 0.0);
    }
}
