//! Phase-function solutions of the second-order linear ODE
//!
//! ```text
//! (c₂e^{2v} − 1 − c₁²e^{4v}) A'' + (1 − c₁²e^{4v}) A' + 2A = 0
//! ```
//!
//! on the interval where `c₂e^{2v} − 1 − c₁²e^{4v} > 0`. Writing
//! `A = √(c₂ − e^{−2v}) B` turns it into `B'' − (φ''/φ') B' + φ'² B = 0`
//! whose solutions are `a cos φ + b sin φ`, with φ' in closed form and φ
//! obtained by quadrature.

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson, gauss_legendre_16};

/// Evaluations closer than this to an interval endpoint are refused.
pub const ENDPOINT_GUARD: f64 = 1e-6;
/// Absolute tolerance of the φ quadrature.
pub const PHI_TOLERANCE: f64 = 1e-10;
/// Integrand evaluation budget per quadrature.
pub const QUADRATURE_BUDGET: usize = 1_000_000;
const TABLE_CELLS: usize = 4096;

/// Open interval of `v` on which `c₂e^{2v} − 1 − c₁²e^{4v} > 0`.
///
/// With `t = e^{2v}` this is `c₁²t² − c₂t + 1 < 0`, i.e. `t₋ < t < t₊`.
pub fn validity_interval(c1: f64, c2: f64) -> Result<(f64, f64)> {
    if !(c1 > 0.0 && c2 > 0.0) {
        return Err(Error::EmptyInterval { c1, c2 });
    }
    let disc = c2 * c2 - 4.0 * c1 * c1;
    if disc <= 0.0 {
        return Err(Error::EmptyInterval { c1, c2 });
    }
    let root = disc.sqrt();
    let t_plus = (c2 + root) / (2.0 * c1 * c1);
    // t₋ t₊ = 1/c₁², avoids cancellation in c₂ − √disc
    let t_minus = 2.0 / (c2 + root);
    Ok((0.5 * t_minus.ln(), 0.5 * t_plus.ln()))
}

/// `c₂e^{2v} − 1 − c₁²e^{4v}`.
pub fn discriminant_factor(v: f64, c1: f64, c2: f64) -> f64 {
    let t = (2.0 * v).exp();
    c2 * t - 1.0 - c1 * c1 * t * t
}

fn factors(v: f64, c1: f64, c2: f64) -> Option<(f64, f64, f64)> {
    let t = (2.0 * v).exp();
    let p = c2 * t - 1.0;
    let q = p - c1 * c1 * t * t;
    (p > 0.0 && q > 0.0 && q.is_finite()).then_some((t, p, q))
}

/// Closed-form φ'(v) = √(c₂c₁²e^{6v} / ((c₂e^{2v} − 1)²(c₂e^{2v} − 1 − c₁²e^{4v}))).
pub fn phi_prime(v: f64, c1: f64, c2: f64) -> Result<f64> {
    let (t, p, q) = factors(v, c1, c2).ok_or_else(|| out_of(v, c1, c2))?;
    Ok((c2 * c1 * c1 * t * t * t / (p * p * q)).sqrt())
}

/// φ''(v), from the logarithmic derivative of the closed form of φ'.
pub fn phi_second(v: f64, c1: f64, c2: f64) -> Result<f64> {
    let (t, p, q) = factors(v, c1, c2).ok_or_else(|| out_of(v, c1, c2))?;
    let dp = phi_prime(v, c1, c2)?;
    let log_deriv = 3.0 - 2.0 * c2 * t / p - (c2 * t - 2.0 * c1 * c1 * t * t) / q;
    Ok(dp * log_deriv)
}

/// The rational expression for φ''/φ' in terms of e^{2v}:
/// `(3 + c₁²e^{4v} + c₂c₁²e^{6v} − 3c₂e^{2v}) / ((c₂e^{2v} − 1)(c₂e^{2v} − 1 − c₁²e^{4v}))`.
pub fn phi_log_derivative(v: f64, c1: f64, c2: f64) -> Result<f64> {
    let (t, p, q) = factors(v, c1, c2).ok_or_else(|| out_of(v, c1, c2))?;
    let c1s = c1 * c1;
    Ok((3.0 + c1s * t * t + c2 * c1s * t * t * t - 3.0 * c2 * t) / (p * q))
}

fn out_of(v: f64, c1: f64, c2: f64) -> Error {
    let (lo, hi) = validity_interval(c1, c2).unwrap_or((f64::NAN, f64::NAN));
    Error::OutOfInterval { v, lo, hi }
}

/// Cached phase function and the particular solutions g, h.
#[derive(Clone, Debug)]
pub struct PhaseSolution {
    pub c1: f64,
    pub c2: f64,
    /// Validity interval (open).
    pub interval: (f64, f64),
    /// Anchor with φ(v0) = 0: the interval midpoint.
    pub v0: f64,
    /// Coefficient of the cosine solution g.
    pub a: f64,
    /// Coefficient of the sine solution h.
    pub b: f64,
    table: PhiTable,
}

/// φ at uniformly spaced knots, filled cell by cell with adaptive Simpson.
///
/// Inside a cell φ is the knot value plus a 16-point Gauss–Legendre
/// integral, with the small knot-to-knot mismatch spread linearly, so φ
/// stays smooth enough for nested finite differences. Cells whose mismatch
/// is large (next to the endpoint poles) fall back to adaptive Simpson.
#[derive(Clone, Debug)]
struct PhiTable {
    knots: Vec<f64>,
    values: Vec<f64>,
    defects: Vec<f64>,
    smooth: Vec<bool>,
}

const SMOOTH_DEFECT: f64 = 1e-12;

impl PhaseSolution {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        let interval = validity_interval(c1, c2)?;
        let v0 = 0.5 * (interval.0 + interval.1);
        let lo = interval.0 + ENDPOINT_GUARD;
        let hi = interval.1 - ENDPOINT_GUARD;
        let n = TABLE_CELLS;
        let dv = (hi - lo) / n as f64;
        let mut knots: Vec<f64> = (0..=n).map(|k| lo + k as f64 * dv).collect();
        knots[n] = hi;
        let mid = n / 2;
        knots[mid] = v0;

        let f = |v: f64| phi_prime(v, c1, c2).unwrap_or(f64::NAN);
        // half the budget spread over interior cells, a quarter to each end
        // cell, which carries the 1/√(v − endpoint) growth of φ'
        let cell_tol = |k: usize| {
            if k == 0 || k == n - 1 {
                0.25 * PHI_TOLERANCE
            } else {
                0.5 * PHI_TOLERANCE / n as f64
            }
        };
        let mut values = vec![0.0; n + 1];
        for k in mid..n {
            values[k + 1] =
                values[k] + adaptive_simpson(&f, knots[k], knots[k + 1], cell_tol(k), QUADRATURE_BUDGET)?;
        }
        for k in (0..mid).rev() {
            values[k] =
                values[k + 1] - adaptive_simpson(&f, knots[k], knots[k + 1], cell_tol(k), QUADRATURE_BUDGET)?;
        }
        let mut defects = vec![0.0; n];
        let mut smooth = vec![true; n];
        for k in 0..n {
            let gl = gauss_legendre_16(&f, knots[k], knots[k + 1]);
            defects[k] = values[k + 1] - values[k] - gl;
            smooth[k] = defects[k].is_finite() && defects[k].abs() <= SMOOTH_DEFECT;
        }
        let inv = 1.0 / c2.sqrt();
        Ok(PhaseSolution {
            c1,
            c2,
            interval,
            v0,
            a: inv,
            b: inv,
            table: PhiTable {
                knots,
                values,
                defects,
                smooth,
            },
        })
    }

    /// Interval on which φ may be evaluated: the validity interval minus
    /// [`ENDPOINT_GUARD`] at both ends.
    pub fn usable(&self) -> (f64, f64) {
        (
            self.interval.0 + ENDPOINT_GUARD,
            self.interval.1 - ENDPOINT_GUARD,
        )
    }

    /// Validity interval shrunk by `fraction` of its length at both ends.
    pub fn shrunk(&self, fraction: f64) -> (f64, f64) {
        let len = self.interval.1 - self.interval.0;
        (
            self.interval.0 + fraction * len,
            self.interval.1 - fraction * len,
        )
    }

    fn check(&self, v: f64) -> Result<()> {
        let (lo, hi) = self.usable();
        if v >= lo && v <= hi {
            Ok(())
        } else {
            Err(Error::OutOfInterval {
                v,
                lo: self.interval.0,
                hi: self.interval.1,
            })
        }
    }

    pub fn phi_prime(&self, v: f64) -> Result<f64> {
        self.check(v)?;
        phi_prime(v, self.c1, self.c2)
    }

    pub fn phi_second(&self, v: f64) -> Result<f64> {
        self.check(v)?;
        phi_second(v, self.c1, self.c2)
    }

    /// φ(v) from the cached table.
    pub fn phi(&self, v: f64) -> Result<f64> {
        self.check(v)?;
        let t = &self.table;
        let n = t.defects.len();
        let lo = t.knots[0];
        let dv = (t.knots[n] - lo) / n as f64;
        let mut k = (((v - lo) / dv).floor() as isize).clamp(0, n as isize - 1) as usize;
        // the anchor knot is not exactly on the uniform lattice
        while k > 0 && v < t.knots[k] {
            k -= 1;
        }
        while k + 1 < n && v > t.knots[k + 1] {
            k += 1;
        }
        let (a, b) = (t.knots[k], t.knots[k + 1]);
        let f = |x: f64| phi_prime(x, self.c1, self.c2).unwrap_or(f64::NAN);
        if t.smooth[k] {
            let frac = (v - a) / (b - a);
            Ok(t.values[k] + gauss_legendre_16(&f, a, v) + t.defects[k] * frac)
        } else {
            Ok(t.values[k] + adaptive_simpson(&f, a, v, PHI_TOLERANCE, QUADRATURE_BUDGET)?)
        }
    }

    /// φ(v) by a fresh adaptive Simpson quadrature from the anchor.
    pub fn phi_direct(&self, v: f64) -> Result<f64> {
        self.check(v)?;
        let f = |x: f64| phi_prime(x, self.c1, self.c2).unwrap_or(f64::NAN);
        adaptive_simpson(&f, self.v0, v, PHI_TOLERANCE, QUADRATURE_BUDGET)
    }

    /// √(c₂ − e^{−2v}), positive on the validity interval.
    pub fn amplitude(&self, v: f64) -> f64 {
        let s2 = self.c2 - (-2.0 * v).exp();
        debug_assert!(s2 > 0.0, "c2 - e^(-2v) must be positive inside the interval");
        s2.sqrt()
    }

    /// The particular solutions g (cosine) and h (sine).
    pub fn gh(&self, v: f64) -> Result<(f64, f64)> {
        let phi = self.phi(v)?;
        let s = self.amplitude(v);
        Ok((self.a * s * phi.cos(), self.b * s * phi.sin()))
    }

    /// General solution `A(v) = √(c₂ − e^{−2v}) (a cos φ + b sin φ)`.
    pub fn general_solution(&self, v: f64, a: f64, b: f64) -> Result<f64> {
        let phi = self.phi(v)?;
        Ok(self.amplitude(v) * (a * phi.cos() + b * phi.sin()))
    }

    /// Step for the finite-difference ODE residuals: small against both the
    /// local phase rate and the distance to the nearest endpoint.
    pub fn residual_step(&self, v: f64) -> Result<f64> {
        let dist = (v - self.interval.0).min(self.interval.1 - v);
        let rate = self.phi_prime(v)?;
        Ok((0.01 / (1.0 + rate)).min(0.01 * dist))
    }

    /// Sixth-order (two Richardson levels) first and second derivatives.
    fn derivatives<F: Fn(f64) -> Result<f64>>(&self, f: &F, v: f64) -> Result<(f64, f64)> {
        let h = self.residual_step(v)?;
        self.check(v - h)?;
        self.check(v + h)?;
        let f0 = f(v)?;
        let mut d1 = [0.0; 3];
        let mut d2 = [0.0; 3];
        for (level, s) in [h, 0.5 * h, 0.25 * h].into_iter().enumerate() {
            let (fp, fm) = (f(v + s)?, f(v - s)?);
            d1[level] = (fp - fm) / (2.0 * s);
            d2[level] = (fp - 2.0 * f0 + fm) / (s * s);
        }
        let extrapolate = |d: [f64; 3]| {
            let r0 = (4.0 * d[1] - d[0]) / 3.0;
            let r1 = (4.0 * d[2] - d[1]) / 3.0;
            (16.0 * r1 - r0) / 15.0
        };
        Ok((extrapolate(d1), extrapolate(d2)))
    }

    /// Left-hand side of the A-equation with finite-difference A', A''.
    pub fn coefficient_ode_residual<F: Fn(f64) -> Result<f64>>(&self, a: F, v: f64) -> Result<f64> {
        let (d1, d2) = self.derivatives(&a, v)?;
        let t = (2.0 * v).exp();
        let c1s = self.c1 * self.c1;
        let q = self.c2 * t - 1.0 - c1s * t * t;
        Ok(q * d2 + (1.0 - c1s * t * t) * d1 + 2.0 * a(v)?)
    }

    /// Residual of `B'' − (φ''/φ') B' + φ'² B` with finite-difference B', B''
    /// and φ'' (φ' itself in closed form).
    pub fn phase_ode_residual<F: Fn(f64) -> Result<f64>>(&self, b: F, v: f64) -> Result<f64> {
        let (d1, d2) = self.derivatives(&b, v)?;
        let dphi = self.phi_prime(v)?;
        let (_, ddphi) = self.derivatives(&|x| self.phi(x), v)?;
        Ok(d2 - ddphi / dphi * d1 + dphi * dphi * b(v)?)
    }

    /// Finite-difference φ'' divided by closed-form φ'.
    pub fn fd_log_derivative(&self, v: f64) -> Result<f64> {
        let (_, ddphi) = self.derivatives(&|x| self.phi(x), v)?;
        Ok(ddphi / self.phi_prime(v)?)
    }
}
