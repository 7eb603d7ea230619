use std::sync::Arc;

use super::{Domain, FamilyKind, Immersion};
use crate::error::{Error, Result};
use crate::kernel::{jet_from_duals, Dual2, Point5, Scalar};

/// Smallest |sin θ| accepted by the tube chart.
pub const POLE_GUARD: f64 = 1e-6;

const SPHERE_TOLERANCE: f64 = 1e-12;

/// Isometry from traceless symmetric 3×3 matrices (Frobenius product) to ℝ⁵.
fn sym0_to_r5<T: Scalar>(m: [[T; 3]; 3]) -> [T; 5] {
    let r2 = std::f64::consts::SQRT_2;
    let r6 = 6.0_f64.sqrt();
    [
        m[1][2] * r2,
        m[0][2] * r2,
        m[0][1] * r2,
        (m[0][0] - m[1][1]) * (1.0 / r2),
        (m[0][0] + m[1][1] - m[2][2] * 2.0) * (1.0 / r6),
    ]
}

/// Veronese embedding of the unit 2-sphere into 𝕊⁴.
pub fn veronese(a: f64, b: f64, c: f64) -> Result<Point5> {
    let deviation = (a * a + b * b + c * c - 1.0).abs();
    if deviation > SPHERE_TOLERANCE {
        return Err(Error::NotOnSphere { deviation });
    }
    let r3 = 3.0_f64.sqrt();
    Ok(Point5([
        r3 * b * c,
        r3 * a * c,
        r3 * a * b,
        0.5 * r3 * (a * a - b * b),
        0.5 * (a * a + b * b - 2.0 * c * c),
    ]))
}

/// Orthonormal frame of ℝ³ adapted to spherical angles: the point a and the
/// unit tangents along θ and ϕ.
fn spherical_frame<T: Scalar>(theta: T, phi: T) -> [[T; 3]; 3] {
    let (st, ct) = (theta.sin(), theta.cos());
    let (sp, cp) = (phi.sin(), phi.cos());
    [
        [st * cp, st * sp, ct],
        [ct * cp, ct * sp, -st],
        [-sp, cp, T::constant(0.0)],
    ]
}

fn outer<T: Scalar>(a: &[T; 3], b: &[T; 3], scale: f64) -> [[T; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| (a[i] * b[j] + a[j] * b[i]) * (0.5 * scale)))
}

fn sub_m<T: Scalar>(a: [[T; 3]; 3], b: [[T; 3]; 3]) -> [[T; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] - b[i][j]))
}

/// Veronese point in spherical angles.
pub fn veronese_chart(theta: f64, phi: f64) -> Point5 {
    let [a, _, _] = spherical_frame(theta, phi);
    let r = (1.5_f64).sqrt();
    let mut m = outer(&a, &a, r);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= r / 3.0;
    }
    Point5(sym0_to_r5(m))
}

fn normal_frame<T: Scalar>(theta: T, phi: T) -> [[T; 5]; 2] {
    let [_, e1, e2] = spherical_frame(theta, phi);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let xi1 = sub_m(outer(&e1, &e1, s), outer(&e2, &e2, s));
    let xi2 = outer(&e1, &e2, 2.0 * s);
    [sym0_to_r5(xi1), sym0_to_r5(xi2)]
}

/// Orthonormal basis (ξ₁, ξ₂) of the normal plane of the Veronese surface
/// inside T𝕊⁴, smooth in the angles away from the poles.
pub fn veronese_normal_frame(theta: f64, phi: f64) -> (Point5, Point5) {
    let [a, b] = normal_frame(theta, phi);
    (Point5(a), Point5(b))
}

fn formula<T: Scalar>(p: [T; 3]) -> [T; 5] {
    let [xi1, xi2] = normal_frame(p[0], p[1]);
    let (c, s) = (p[2].cos(), p[2].sin());
    std::array::from_fn(|k| xi1[k] * c + xi2[k] * s)
}

fn pole_check(theta: f64) -> Result<()> {
    let s = theta.sin().abs();
    if s < POLE_GUARD {
        Err(Error::PoleSingularity { sin_polar: s })
    } else {
        Ok(())
    }
}

/// Tube of radius π/2 around the Veronese surface: u = polar angle,
/// v = azimuth, z = angle around the normal circle.
pub fn make_cartan_tube() -> Immersion {
    let eval = Arc::new(|p: [f64; 3]| {
        pole_check(p[0])?;
        Ok(Point5(formula(p)))
    });
    let analytic = Arc::new(|p: [f64; 3]| {
        pole_check(p[0])?;
        Ok(jet_from_duals(&formula(Dual2::coordinates(p))))
    });
    Immersion::new(
        "cartan",
        Domain::everywhere(),
        FamilyKind::Cartan,
        eval,
        Some(analytic),
    )
}
