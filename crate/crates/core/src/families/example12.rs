use std::sync::Arc;

use super::example11::combine;
use super::{check_basis, Domain, FamilyKind, Immersion};
use crate::error::{Error, Result};
use crate::kernel::{jet_from_duals, Dual2, Point5, Scalar};
use crate::phase::PhaseSolution;

const BASIS_TOLERANCE: f64 = 1e-12;

/// Constants and orthonormal vectors of the second family, with its phase
/// solution.
#[derive(Clone, Debug)]
pub struct Example12Params {
    pub c1: f64,
    pub c2: f64,
    pub c: [Point5; 5],
    pub phase: PhaseSolution,
}

impl Example12Params {
    /// Standard basis for C₁..C₅.
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        Self::with_basis(c1, c2, std::array::from_fn(Point5::basis))
    }

    pub fn with_basis(c1: f64, c2: f64, c: [Point5; 5]) -> Result<Self> {
        if !(c1 > 0.0 && c2 > 0.0) {
            return Err(Error::EmptyInterval { c1, c2 });
        }
        check_basis(&c, [1.0; 5], BASIS_TOLERANCE)?;
        let phase = PhaseSolution::new(c1, c2)?;
        Ok(Example12Params { c1, c2, c, phase })
    }

    /// v-range used for default grids: the validity interval minus 1% of its
    /// length at each end.
    pub fn grid_v_range(&self) -> (f64, f64) {
        self.phase.shrunk(0.01)
    }
}

/// e^{−v}/√(c₂(z²+1)) (cos u C₁ + sin u C₂) + (z C₃ + g C₄ + h C₅)/√(z²+1),
/// with φ supplied as a scalar of the caller's kind.
fn formula<T: Scalar>(p: [T; 3], phi: T, par: &Example12Params) -> [T; 5] {
    let [u, v, z] = p;
    let w = (z * z + 1.0).sqrt().recip();
    let outer = (v * -1.0).exp() * w * (1.0 / par.c2.sqrt());
    let amp = ((v * -2.0).exp() * -1.0 + par.c2).sqrt();
    let g = amp * phi.cos() * par.phase.a;
    let h = amp * phi.sin() * par.phase.b;
    let coef = [outer * u.cos(), outer * u.sin(), z * w, g * w, h * w];
    combine(&coef, &par.c)
}

/// The second family on ℝ × (usable phase interval) × ℝ, with exact jets.
pub fn make_example12(params: Example12Params) -> Result<Immersion> {
    let par = Arc::new(params);
    let (lo, hi) = par.phase.usable();
    let inf = (f64::NEG_INFINITY, f64::INFINITY);
    let domain = Domain::new(inf, (lo, hi), inf);

    let pe = Arc::clone(&par);
    let eval = Arc::new(move |p: [f64; 3]| {
        let phi = pe.phase.phi(p[1])?;
        Ok(Point5(formula(p, phi, &pe)))
    });
    let pj = Arc::clone(&par);
    let analytic = Arc::new(move |p: [f64; 3]| {
        let ph = &pj.phase;
        let d = Dual2::coordinates(p);
        let phi = d[1].apply(ph.phi(p[1])?, ph.phi_prime(p[1])?, ph.phi_second(p[1])?);
        Ok(jet_from_duals(&formula(d, phi, &pj)))
    });
    let label = format!("example12(c1={}, c2={})", par.c1, par.c2);
    Ok(Immersion::new(
        label,
        domain,
        FamilyKind::Example12(par),
        eval,
        Some(analytic),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_interval() {
        assert!(matches!(
            Example12Params::new(1.0, 1.0),
            Err(Error::EmptyInterval { .. })
        ));
    }

    #[test]
    fn unit_norm_inside_interval() {
        let par = Example12Params::new(0.1, 1.0).unwrap();
        let (lo, hi) = par.grid_v_range();
        let imm = make_example12(par).unwrap();
        for i in 0..=20 {
            let v = lo + (hi - lo) * i as f64 / 20.0;
            let x = imm.eval([0.3 * i as f64, v, 0.7 - 0.1 * i as f64]).unwrap();
            assert!((x.norm() - 1.0).abs() < 1e-12, "v = {v}");
        }
    }

    #[test]
    fn outside_interval_escapes() {
        let par = Example12Params::new(0.1, 1.0).unwrap();
        let hi = par.phase.interval.1;
        let imm = make_example12(par).unwrap();
        assert!(matches!(
            imm.eval([0.0, hi + 0.1, 0.0]),
            Err(Error::DomainEscape { .. })
        ));
    }

    #[test]
    fn analytic_matches_fd() {
        let par = Example12Params::new(0.1, 1.0).unwrap();
        let imm = make_example12(par).unwrap();
        let p = [0.4, 0.8, -0.6];
        let a = imm.jet_analytic(p).unwrap();
        let f = imm.jet_fd(p, &Default::default()).unwrap();
        assert!((a.value - f.value).max_abs() < 1e-15);
        for i in 0..3 {
            assert!((a.d1[i] - f.d1[i]).max_abs() < 1e-8);
        }
        for m in 0..6 {
            assert!((a.d2[m] - f.d2[m]).max_abs() < 1e-5);
        }
    }
}
