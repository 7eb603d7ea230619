use std::sync::Arc;

use super::{check_basis, Domain, FamilyKind, Immersion};
use crate::error::Result;
use crate::kernel::{jet_from_duals, Dual2, Point5, Scalar};

const BASIS_TOLERANCE: f64 = 1e-12;

/// Constant vectors of the flat family: C₁..C₄ of squared length 1/2, C₅ unit,
/// all mutually orthogonal.
#[derive(Clone, Debug, PartialEq)]
pub struct Example11Params {
    pub c: [Point5; 5],
}

impl Default for Example11Params {
    fn default() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Example11Params {
            c: [
                Point5::basis(0).scale(s),
                Point5::basis(1).scale(s),
                Point5::basis(2).scale(s),
                Point5::basis(3).scale(s),
                Point5::basis(4),
            ],
        }
    }
}

impl Example11Params {
    pub fn new(c: [Point5; 5]) -> Result<Self> {
        let p = Example11Params { c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        check_basis(&self.c, [0.5, 0.5, 0.5, 0.5, 1.0], BASIS_TOLERANCE)
    }
}

/// Combines scalar coefficients with constant vectors.
pub(crate) fn combine<T: Scalar>(coef: &[T; 5], c: &[Point5; 5]) -> [T; 5] {
    std::array::from_fn(|k| {
        let mut acc = coef[0] * c[0][k];
        for i in 1..5 {
            acc = acc + coef[i] * c[i][k];
        }
        acc
    })
}

/// (cos √2u C₁ + sin √2u C₂ + cos √2v C₃ + sin √2v C₄ + z C₅) / √(1+z²).
fn formula<T: Scalar>(p: [T; 3], c: &[Point5; 5]) -> [T; 5] {
    let r2 = std::f64::consts::SQRT_2;
    let [u, v, z] = p;
    let w = (z * z + 1.0).sqrt().recip();
    let (su, sv) = (u * r2, v * r2);
    let coef = [su.cos() * w, su.sin() * w, sv.cos() * w, sv.sin() * w, z * w];
    combine(&coef, c)
}

/// The flat family on all of ℝ³, with exact jets.
pub fn make_example11(params: Example11Params) -> Result<Immersion> {
    params.validate()?;
    let c = params.c;
    let eval = Arc::new(move |p: [f64; 3]| Ok(Point5(formula(p, &c))));
    let analytic = Arc::new(move |p: [f64; 3]| Ok(jet_from_duals(&formula(Dual2::coordinates(p), &c))));
    Ok(Immersion::new(
        "example11",
        Domain::everywhere(),
        FamilyKind::Example11(params),
        eval,
        Some(analytic),
    ))
}
