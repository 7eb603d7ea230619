//! One-dimensional quadrature: adaptive Simpson with an evaluation budget,
//! and fixed-order Gauss–Legendre rules.

use std::cell::Cell;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 60;

struct Simpson<'a, F> {
    f: &'a F,
    evals: Cell<usize>,
    budget: usize,
}

impl<F: Fn(f64) -> f64> Simpson<'_, F> {
    fn eval(&self, x: f64) -> Result<f64> {
        let n = self.evals.get() + 1;
        if n > self.budget {
            return Err(Error::QuadratureFailure { evaluations: n - 1 });
        }
        self.evals.set(n);
        Ok((self.f)(x))
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        &self,
        a: f64,
        m: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (self.eval(lm)?, self.eval(rm)?);
        let left = (m - a) * (fa + 4.0 * flm + fm) / 6.0;
        let right = (b - m) * (fm + 4.0 * frm + fb) / 6.0;
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol || depth == 0 {
            if depth == 0 && delta.abs() > 15.0 * tol {
                return Err(Error::QuadratureFailure {
                    evaluations: self.evals.get(),
                });
            }
            return Ok(left + right + delta / 15.0);
        }
        Ok(self.recurse(a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + self.recurse(m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
    }
}

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `tol`, failing once `max_evals` integrand evaluations are spent.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64, max_evals: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(0.0);
    }
    let s = Simpson {
        f,
        evals: Cell::new(0),
        budget: max_evals,
    };
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (s.eval(a)?, s.eval(m)?, s.eval(b)?);
    let whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0;
    s.recurse(a, m, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// 16-point Gauss–Legendre approximation of ∫ₐᵇ f. A smooth function of
/// both endpoints.
pub fn gauss_legendre_16<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (x, w) = gl16();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    half * x
        .iter()
        .zip(w.iter())
        .map(|(xi, wi)| wi * f(mid + half * xi))
        .sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_polynomial_and_trig() {
        let r = adaptive_simpson(&|x: f64| x * x * x, 0.0, 2.0, 1e-12, 10_000).unwrap();
        assert!((r - 4.0).abs() < 1e-12);
        let r = adaptive_simpson(&f64::sin, 0.0, std::f64::consts::PI, 1e-10, 100_000).unwrap();
        assert!((r - 2.0).abs() < 1e-10);
    }

    #[test]
    fn simpson_integrable_singularity() {
        // ∫₀¹ x^{-1/2} dx = 2, starting just off the pole
        let a = 1e-8;
        let r = adaptive_simpson(&|x: f64| 1.0 / x.sqrt(), a, 1.0, 1e-10, 1_000_000).unwrap();
        assert!((r - (2.0 - 2.0 * a.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn simpson_budget_exhaustion() {
        let r = adaptive_simpson(&|x: f64| (1.0 / x).sin(), 1e-9, 1.0, 1e-14, 500);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn gauss_legendre_weights() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // exact for degree 31
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((integral - 2.0 / 31.0).abs() < 1e-14);
        let r = gauss_legendre_16(&f64::exp, 0.0, 1.0);
        assert!((r - (1.0_f64.exp() - 1.0)).abs() < 1e-15);
    }
}
