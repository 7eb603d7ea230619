//! Scalars carrying exact first and second partials in three variables.
//!
//! Family formulas are written once over [`Scalar`]; evaluating them with
//! `f64` gives the immersion, with [`Dual2`] its exact jet.

use std::ops::{Add, Div, Mul, Neg, Sub};

use super::jet::{pair_index, Jet2};
use super::point::Point5;

pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Mul<f64, Output = Self>
{
    fn constant(c: f64) -> Self;
    fn value(&self) -> f64;
    /// Applies a univariate function given its value and first two
    /// derivatives at `self.value()`.
    fn apply(self, f: f64, df: f64, d2f: f64) -> Self;

    fn sin(self) -> Self {
        let x = self.value();
        self.apply(x.sin(), x.cos(), -x.sin())
    }
    fn cos(self) -> Self {
        let x = self.value();
        self.apply(x.cos(), -x.sin(), -x.cos())
    }
    fn exp(self) -> Self {
        let e = self.value().exp();
        self.apply(e, e, e)
    }
    fn sqrt(self) -> Self {
        let s = self.value().sqrt();
        self.apply(s, 0.5 / s, -0.25 / (s * s * s))
    }
    fn recip(self) -> Self {
        let x = self.value();
        self.apply(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }
}

impl Scalar for f64 {
    fn constant(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn apply(self, f: f64, _df: f64, _d2f: f64) -> Self {
        f
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn recip(self) -> Self {
        1.0 / self
    }
}

/// Second-order forward-mode dual number over (u, v, z).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dual2 {
    pub v: f64,
    pub g: [f64; 3],
    /// Hessian entries in [`pair_index`] order.
    pub h: [f64; 6],
}

impl Dual2 {
    /// The coordinate function `p[i]` seeded at `value`.
    pub fn variable(value: f64, i: usize) -> Self {
        let mut g = [0.0; 3];
        g[i] = 1.0;
        Dual2 { v: value, g, h: [0.0; 6] }
    }

    pub fn coordinates(p: [f64; 3]) -> [Dual2; 3] {
        [
            Dual2::variable(p[0], 0),
            Dual2::variable(p[1], 1),
            Dual2::variable(p[2], 2),
        ]
    }
}

impl Scalar for Dual2 {
    fn constant(c: f64) -> Self {
        Dual2 { v: c, g: [0.0; 3], h: [0.0; 6] }
    }
    fn value(&self) -> f64 {
        self.v
    }
    fn apply(self, f: f64, df: f64, d2f: f64) -> Self {
        let mut out = Dual2 {
            v: f,
            g: self.g.map(|x| df * x),
            h: [0.0; 6],
        };
        for i in 0..3 {
            for j in i..3 {
                let k = pair_index(i, j);
                out.h[k] = df * self.h[k] + d2f * self.g[i] * self.g[j];
            }
        }
        out
    }
}

impl Add for Dual2 {
    type Output = Dual2;
    fn add(self, o: Dual2) -> Dual2 {
        let mut out = self;
        out.v += o.v;
        for i in 0..3 {
            out.g[i] += o.g[i];
        }
        for k in 0..6 {
            out.h[k] += o.h[k];
        }
        out
    }
}

impl Sub for Dual2 {
    type Output = Dual2;
    fn sub(self, o: Dual2) -> Dual2 {
        self + (-o)
    }
}

impl Neg for Dual2 {
    type Output = Dual2;
    fn neg(self) -> Dual2 {
        self * -1.0
    }
}

impl Mul for Dual2 {
    type Output = Dual2;
    fn mul(self, o: Dual2) -> Dual2 {
        let mut out = Dual2 {
            v: self.v * o.v,
            g: [0.0; 3],
            h: [0.0; 6],
        };
        for i in 0..3 {
            out.g[i] = self.v * o.g[i] + o.v * self.g[i];
        }
        for i in 0..3 {
            for j in i..3 {
                let k = pair_index(i, j);
                out.h[k] = self.v * o.h[k]
                    + o.v * self.h[k]
                    + self.g[i] * o.g[j]
                    + self.g[j] * o.g[i];
            }
        }
        out
    }
}

impl Div for Dual2 {
    type Output = Dual2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Dual2) -> Dual2 {
        self * o.recip()
    }
}

impl Add<f64> for Dual2 {
    type Output = Dual2;
    fn add(mut self, c: f64) -> Dual2 {
        self.v += c;
        self
    }
}

impl Mul<f64> for Dual2 {
    type Output = Dual2;
    fn mul(self, c: f64) -> Dual2 {
        Dual2 {
            v: self.v * c,
            g: self.g.map(|x| x * c),
            h: self.h.map(|x| x * c),
        }
    }
}

/// Packs five dual components into a jet.
pub fn jet_from_duals(c: &[Dual2; 5]) -> Jet2 {
    let mut jet = Jet2::default();
    for (k, d) in c.iter().enumerate() {
        jet.value[k] = d.v;
        for i in 0..3 {
            jet.d1[i][k] = d.g[i];
        }
        for m in 0..6 {
            jet.d2[m][k] = d.h[m];
        }
    }
    jet
}

/// Unpacks five `f64` components.
pub fn point_from(c: &[f64; 5]) -> Point5 {
    Point5(*c)
}
