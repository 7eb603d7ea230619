//! Second-order jets of maps ℝ³ → ℝ⁵ by central differences.
//!
//! Error model with Richardson on: truncation O(h⁴) plus roundoff of order
//! ε/h for first and ε/h² for second partials. With the default step
//! h = 1e-4 the second partials of an O(1) map carry roughly 1e-7 of noise.

use super::point::Point5;
use crate::error::Result;

/// Value, first and second partials at one chart point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet2 {
    pub value: Point5,
    /// Partials along u, v, z.
    pub d1: [Point5; 3],
    /// Distinct second partials in the order uu, uv, uz, vv, vz, zz.
    pub d2: [Point5; 6],
}

/// Position of the second partial (i, j) inside [`Jet2::d2`].
pub const fn pair_index(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    match (a, b) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        _ => 5,
    }
}

impl Jet2 {
    pub fn d2(&self, i: usize, j: usize) -> &Point5 {
        &self.d2[pair_index(i, j)]
    }

    pub fn d2_mut(&mut self, i: usize, j: usize) -> &mut Point5 {
        &mut self.d2[pair_index(i, j)]
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
            && self.d1.iter().all(Point5::is_finite)
            && self.d2.iter().all(Point5::is_finite)
    }
}

/// Finite-difference settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiffConfig {
    pub base_step: f64,
    pub richardson: bool,
    /// Eigenvalue separation below which a pencil counts as degenerate.
    pub degenerate_gap: f64,
}

impl Default for DiffConfig {
    fn default() -> Self {
        DiffConfig {
            base_step: 1e-4,
            richardson: true,
            degenerate_gap: 1e-9,
        }
    }
}

impl DiffConfig {
    /// Step used along a coordinate currently at value `c`.
    pub fn step_at(&self, c: f64) -> f64 {
        self.base_step * c.abs().max(1.0)
    }
}

fn shifted(p: [f64; 3], i: usize, hi: f64) -> [f64; 3] {
    let mut q = p;
    q[i] += hi;
    q
}

fn shifted2(p: [f64; 3], i: usize, hi: f64, j: usize, hj: f64) -> [f64; 3] {
    let mut q = p;
    q[i] += hi;
    q[j] += hj;
    q
}

struct Raw {
    d1: [Point5; 3],
    d2: [Point5; 6],
}

fn raw_differences<F>(f: &F, p: [f64; 3], center: &Point5, h: [f64; 3]) -> Result<Raw>
where
    F: Fn([f64; 3]) -> Result<Point5>,
{
    let mut d1 = [Point5::ZERO; 3];
    let mut d2 = [Point5::ZERO; 6];
    for i in 0..3 {
        let fp = f(shifted(p, i, h[i]))?;
        let fm = f(shifted(p, i, -h[i]))?;
        d1[i] = (fp - fm).scale(0.5 / h[i]);
        d2[pair_index(i, i)] = (fp + fm - center.scale(2.0)).scale(1.0 / (h[i] * h[i]));
    }
    for i in 0..3 {
        for j in (i + 1)..3 {
            let fpp = f(shifted2(p, i, h[i], j, h[j]))?;
            let fpm = f(shifted2(p, i, h[i], j, -h[j]))?;
            let fmp = f(shifted2(p, i, -h[i], j, h[j]))?;
            let fmm = f(shifted2(p, i, -h[i], j, -h[j]))?;
            d2[pair_index(i, j)] = (fpp - fpm - fmp + fmm).scale(0.25 / (h[i] * h[j]));
        }
    }
    Ok(Raw { d1, d2 })
}

fn richardson(fine: &Point5, coarse: &Point5) -> Point5 {
    (fine.scale(4.0) - *coarse).scale(1.0 / 3.0)
}

/// Central-difference jet of `f` at `p`.
///
/// `f` reports `DomainEscape` itself when a stencil point falls outside its
/// domain; that error is propagated unchanged.
pub fn jet<F>(f: F, p: [f64; 3], cfg: &DiffConfig) -> Result<Jet2>
where
    F: Fn([f64; 3]) -> Result<Point5>,
{
    let value = f(p)?;
    let h = p.map(|c| cfg.step_at(c));
    let coarse = raw_differences(&f, p, &value, h)?;
    if !cfg.richardson {
        return Ok(Jet2 {
            value,
            d1: coarse.d1,
            d2: coarse.d2,
        });
    }
    let fine = raw_differences(&f, p, &value, h.map(|x| 0.5 * x))?;
    let mut out = Jet2 {
        value,
        ..Jet2::default()
    };
    for i in 0..3 {
        out.d1[i] = richardson(&fine.d1[i], &coarse.d1[i]);
    }
    for k in 0..6 {
        out.d2[k] = richardson(&fine.d2[k], &coarse.d2[k]);
    }
    Ok(out)
}

/// Richardson-extrapolated central derivative of a scalar function.
pub fn central_diff<F>(f: F, x: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let d = |s: f64| -> Result<f64> { Ok((f(x + s)? - f(x - s)?) / (2.0 * s)) };
    let coarse = d(h)?;
    let fine = d(0.5 * h)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Richardson-extrapolated central derivative of a vector-valued map given
/// as a fixed-size array.
pub fn central_diff_array<const N: usize, F>(f: F, x: f64, h: f64) -> Result<[f64; N]>
where
    F: Fn(f64) -> Result<[f64; N]>,
{
    let fp = f(x + h)?;
    let fm = f(x - h)?;
    let fph = f(x + 0.5 * h)?;
    let fmh = f(x - 0.5 * h)?;
    let mut out = [0.0; N];
    for k in 0..N {
        let coarse = (fp[k] - fm[k]) / (2.0 * h);
        let fine = (fph[k] - fmh[k]) / h;
        out[k] = (4.0 * fine - coarse) / 3.0;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn constant_map_has_zero_derivatives() {
        let c = Point5([0.3, -0.2, 0.1, 0.9, 0.0]);
        let j = jet(|_| Ok(c), [0.4, -1.0, 2.0], &DiffConfig::default()).unwrap();
        assert_eq!(j.value, c);
        assert!(j.d1.iter().all(|d| d.max_abs() == 0.0));
        assert!(j.d2.iter().all(|d| d.max_abs() == 0.0));
    }

    #[test]
    fn quadratic_is_exact() {
        let f = |p: [f64; 3]| Ok(Point5([p[0] * p[0], 0.0, 0.0, 0.0, 0.0]));
        let j = jet(f, [1.0, 0.0, 0.0], &DiffConfig::default()).unwrap();
        assert!((j.d1[0][0] - 2.0).abs() < 1e-8);
        // roundoff of order ε/h² dominates
        assert!((j.d2(0, 0)[0] - 2.0).abs() < 1e-6);
        assert!(j.d2(0, 1).max_abs() < 1e-8);
    }

    #[test]
    fn domain_escape_propagates() {
        let f = |p: [f64; 3]| {
            if p[2] > 1.0 {
                Err(Error::DomainEscape { point: p })
            } else {
                Ok(Point5::ZERO)
            }
        };
        let r = jet(f, [0.0, 0.0, 1.0], &DiffConfig::default());
        assert!(matches!(r, Err(Error::DomainEscape { .. })));
    }

    #[test]
    fn pair_index_is_symmetric() {
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(pair_index(i, j), pair_index(j, i));
            }
        }
        assert_eq!(pair_index(2, 2), 5);
    }

    #[test]
    fn scalar_central_diff() {
        let d = central_diff(|x| Ok(x.sin()), 0.7, 1e-3).unwrap();
        assert!((d - 0.7_f64.cos()).abs() < 1e-12);
    }
}
