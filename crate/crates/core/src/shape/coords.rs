//! The second-order systems satisfied by the explicit families in their
//! own coordinates.

use super::forms::{FundamentalForms, NormalRule};
use super::frame::FrameField;
use super::identities::normal_derivatives;
use super::{offsets, richardson, scaled_step, shifted, AnalysisConfig, Residuals};
use crate::error::{Error, Result};
use crate::families::{Example12Params, FamilyKind, Immersion};
use crate::kernel::{Jet2, Point5};

fn not_applicable(check: &str, imm: &Immersion) -> Error {
    Error::NotApplicable {
        check: check.to_string(),
        family: imm.label().to_string(),
    }
}

/// Richardson derivative along `axis` of a vector read off nearby jets.
fn jet_derivative(
    imm: &Immersion,
    p: [f64; 3],
    axis: usize,
    cfg: &AnalysisConfig,
    read: impl Fn(&Jet2) -> Point5,
) -> Result<Point5> {
    let h = scaled_step(cfg.frame_step, p[axis]);
    let mut s = [Point5::ZERO; 4];
    for (slot, off) in s.iter_mut().zip(offsets(h)) {
        *slot = read(&imm.jet(shifted(p, axis, off), &cfg.diff, cfg.jets)?);
    }
    Ok(Point5(std::array::from_fn(|k| {
        richardson([s[0][k], s[1][k], s[2][k], s[3][k]], h)
    })))
}

/// Normal sign minimizing the given vector residual.
fn best_normal(jet: &Jet2, residual: impl Fn(&Point5) -> Point5) -> Result<Point5> {
    let y = FundamentalForms::from_jet(jet)?.normal;
    Ok(if residual(&-y).max_abs() < residual(&y).max_abs() {
        -y
    } else {
        y
    })
}

/// Residuals of the flat family's coordinate system with λ = √(z²+1):
/// λ²x_uu = z(z²+1)x_z + λy − x, x_uv = 0, x_uz = −z/(z²+1) x_u,
/// λ²x_vv = z(z²+1)x_z − λy − x, x_vz = −z/(z²+1) x_v,
/// (z²+1)²x_zz = −2z(z²+1)x_z − x, y_u = −λx_u, y_v = λx_v, y_z = 0 and
/// x_uuu = −2x_u. Vector residuals report the largest component.
pub fn structure_residuals_example11(imm: &Immersion, p: [f64; 3], cfg: &AnalysisConfig) -> Result<Residuals> {
    if !matches!(imm.kind(), FamilyKind::Example11(_)) {
        return Err(not_applicable("ex11_system", imm));
    }
    let z = p[2];
    let w = z * z + 1.0;
    let lambda = w.sqrt();
    let jet = imm.jet(p, &cfg.diff, cfg.jets)?;
    let x = jet.value;
    let [xu, xv, xz] = jet.d1;
    let d2 = |i, j| *jet.d2(i, j);

    let uu = |y: &Point5| d2(0, 0).scale(lambda * lambda) - xz.scale(z * w) - y.scale(lambda) + x;
    let y = best_normal(&jet, uu)?;
    let (_, dy) = normal_derivatives(imm, p, cfg, NormalRule::Match(y))?;
    let xuuu = jet_derivative(imm, p, 0, cfg, |j| *j.d2(0, 0))?;

    Ok(vec![
        ("x_uu", uu(&y).max_abs()),
        ("x_uv", d2(0, 1).max_abs()),
        ("x_uz", (d2(0, 2) + xu.scale(z / w)).max_abs()),
        (
            "x_vv",
            (d2(1, 1).scale(lambda * lambda) - xz.scale(z * w) + y.scale(lambda) + x).max_abs(),
        ),
        ("x_vz", (d2(1, 2) + xv.scale(z / w)).max_abs()),
        ("x_zz", (d2(2, 2).scale(w * w) + xz.scale(2.0 * z * w) + x).max_abs()),
        ("y_u", (dy[0] + xu.scale(lambda)).max_abs()),
        ("y_v", (dy[1] - xv.scale(lambda)).max_abs()),
        ("y_z", dy[2].max_abs()),
        ("x_uuu", (xuuu + xu.scale(2.0)).max_abs()),
    ])
}

/// Residuals of the second family's coordinate system, using α₂ = z,
/// λ = c₁e^{2v}√(z²+1), α₁² = (z²+1)(c₂e^{2v} − 1 − c₁²e^{4v}) and
/// f² = e^{−2v}/(c₂(z²+1)); the third-order reduction x_uuu = −x_u; the
/// relations among the vector coefficients A₁..A₅ of
/// x = cos u A₁ + sin u A₂ + A₃, (z²+1)^{1/2} A₃ = z A₄ + A₅; and the
/// identity (1+z²)/(1+λ²+α₁²+α₂²) = e^{−2v}/c₂ with measured λ, α₁, α₂.
pub fn structure_residuals_example12(imm: &Immersion, p: [f64; 3], cfg: &AnalysisConfig) -> Result<Residuals> {
    let par: &Example12Params = match imm.kind() {
        FamilyKind::Example12(par) => par,
        _ => return Err(not_applicable("ex12_system", imm)),
    };
    let [u, v, z] = p;
    let w = z * z + 1.0;
    let t = (2.0 * v).exp();
    let lambda = par.c1 * t * w.sqrt();
    let a1s = w * (par.c2 * t - 1.0 - par.c1 * par.c1 * t * t);
    let f2 = 1.0 / (par.c2 * t * w);

    let jet = imm.jet(p, &cfg.diff, cfg.jets)?;
    let x = jet.value;
    let [xu, xv, xz] = jet.d1;
    let d2 = |i, j| *jet.d2(i, j);

    let uu = |y: &Point5| {
        d2(0, 0) - (xv.scale(a1s) + xz.scale(z * w) + y.scale(lambda) - x).scale(f2)
    };
    let y = best_normal(&jet, uu)?;
    let vv = d2(1, 1)
        - (xv.scale(-(a1s + w - lambda * lambda)) + xz.scale(z * w) - y.scale(lambda) - x)
            .scale(1.0 / a1s);
    let (_, dy) = normal_derivatives(imm, p, cfg, NormalRule::Match(y))?;
    let xuuu = jet_derivative(imm, p, 0, cfg, |j| *j.d2(0, 0))?;

    let (cu, su) = (u.cos(), u.sin());
    let a_1 = -d2(0, 0).scale(cu) - xu.scale(su);
    let a_2 = -d2(0, 0).scale(su) + xu.scale(cu);
    let a_3 = x + d2(0, 0);
    // A₄ = ∂z(√(z²+1) A₃), A₃ = x + x_uu at each stencil point
    let a_4 = {
        let h = scaled_step(cfg.frame_step, z);
        let mut s = [Point5::ZERO; 4];
        for (slot, off) in s.iter_mut().zip(offsets(h)) {
            let zq = z + off;
            let j = imm.jet([u, v, zq], &cfg.diff, cfg.jets)?;
            *slot = (j.value + *j.d2(0, 0)).scale((zq * zq + 1.0).sqrt());
        }
        Point5(std::array::from_fn(|k| {
            richardson([s[0][k], s[1][k], s[2][k], s[3][k]], h)
        }))
    };
    let a_5 = a_3.scale(w.sqrt()) - a_4.scale(z);

    let field = FrameField::build(imm, p, cfg, None)?;
    let al = field.alphas();
    let lam = field.center.lambdas[0];
    let f2_measured = 1.0 / (1.0 + lam * lam + al[0] * al[0] + al[1] * al[1]);

    Ok(vec![
        ("x_vz", (d2(1, 2) + xv.scale(z / w)).max_abs()),
        ("x_uz", (d2(0, 2) + xu.scale(z / w)).max_abs()),
        ("x_uv", (d2(0, 1) + xu).max_abs()),
        ("x_uu", uu(&y).max_abs()),
        ("x_zz", (d2(2, 2) + xz.scale(2.0 * z / w) + x.scale(1.0 / (w * w))).max_abs()),
        ("x_vv", vv.max_abs()),
        ("y_u", (dy[0] + xu.scale(lambda)).max_abs()),
        ("y_v", (dy[1] - xv.scale(lambda)).max_abs()),
        ("y_z", dy[2].max_abs()),
        ("x_uuu", (xuuu + xu).max_abs()),
        ("|A1|^2=f^2", a_1.dot(&a_1) - f2),
        ("|A2|^2=f^2", a_2.dot(&a_2) - f2),
        ("<A1,A2>", a_1.dot(&a_2)),
        ("f^2+|A3|^2=1", f2 + a_3.dot(&a_3) - 1.0),
        ("<A1,A3>", a_1.dot(&a_3)),
        ("<A2,A3>", a_2.dot(&a_3)),
        ("|A4|^2=1", a_4.dot(&a_4) - 1.0),
        ("|A5|^2", a_5.dot(&a_5) - (1.0 - 1.0 / (par.c2 * t))),
        ("f_identity", w * f2_measured - 1.0 / (par.c2 * t)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_cartan_tube, make_example11, make_example12, Example11Params};

    fn worst(r: &Residuals) -> (&'static str, f64) {
        r.iter()
            .fold(("", 0.0), |acc, &(n, v)| if v.abs() > acc.1 { (n, v.abs()) } else { acc })
    }

    #[test]
    fn example11_system() {
        let imm = make_example11(Example11Params::default()).unwrap();
        let cfg = AnalysisConfig::default();
        for p in [[0.2, 0.4, 0.0], [1.5, -2.0, 1.8], [-3.0, 0.7, -1.2]] {
            let r = structure_residuals_example11(&imm, p, &cfg).unwrap();
            let (n, v) = worst(&r);
            assert!(v < 1e-6, "{n}: {v} at {p:?}");
        }
    }

    #[test]
    fn example12_system() {
        let par = Example12Params::new(0.1, 1.0).unwrap();
        let (lo, hi) = par.grid_v_range();
        let imm = make_example12(par).unwrap();
        let cfg = AnalysisConfig::default();
        for (s, z) in [(0.1, -1.0), (0.5, 0.3), (0.9, 2.0)] {
            let p = [0.7, lo + s * (hi - lo), z];
            let r = structure_residuals_example12(&imm, p, &cfg).unwrap();
            let (n, v) = worst(&r);
            assert!(v < 1e-5, "{n}: {v} at {p:?}");
        }
    }

    #[test]
    fn wrong_family() {
        let tube = make_cartan_tube();
        let cfg = AnalysisConfig::default();
        assert!(matches!(
            structure_residuals_example11(&tube, [1.0, 1.0, 1.0], &cfg),
            Err(Error::NotApplicable { .. })
        ));
        assert!(matches!(
            structure_residuals_example12(&tube, [1.0, 1.0, 1.0], &cfg),
            Err(Error::NotApplicable { .. })
        ));
    }
}
