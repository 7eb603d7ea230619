use super::forms::{CurvatureSample, NormalRule};
use super::frame::FrameField;
use super::{offsets, richardson, scaled_step, shifted, AnalysisConfig, Residuals};
use crate::error::{Error, Result};
use crate::families::Immersion;
use crate::kernel::{Point5, Vec3};

/// Lie bracket [X, Y] of chart fields given their values and chart
/// derivatives (`dx[a]` = ∂ₐX).
pub fn lie_bracket(x: &Vec3, dx: &[Vec3; 3], y: &Vec3, dy: &[Vec3; 3]) -> Vec3 {
    std::array::from_fn(|c| (0..3).map(|a| x[a] * dy[a][c] - y[a] * dx[a][c]).sum())
}

impl FrameField {
    /// Codazzi relations between eᵢ(λⱼ) and the α's, their specializations
    /// to (λ, −λ, 0), and the relations among α's that follow.
    pub fn codazzi(&self) -> Residuals {
        let [l1, l2, l3] = self.lambdas();
        let a = self.alphas();
        let el = |i, j| self.e_lambda(i, j);
        vec![
            ("e1(lambda2)", el(0, 1) - a[3] * (l2 - l1)),
            ("e1(lambda3)", el(0, 2) - a[6] * (l3 - l1)),
            ("e2(lambda1)", el(1, 0) - a[0] * (l1 - l2)),
            ("e2(lambda3)", el(1, 2) - a[7] * (l3 - l2)),
            ("e3(lambda1)", el(2, 0) - a[1] * (l1 - l3)),
            ("e3(lambda2)", el(2, 1) - a[4] * (l2 - l3)),
            ("alpha9~alpha3", a[8] * (l1 - l2) - a[2] * (l2 - l3)),
            ("alpha3~alpha6", a[2] * (l2 - l3) - a[5] * (l1 - l3)),
            ("e1(lambda)", el(0, 0) - 2.0 * a[3] * l1),
            ("e2(lambda)", el(1, 0) - 2.0 * a[0] * l1),
            ("e3(lambda)", el(2, 0) - a[1] * l1),
            ("alpha5=alpha2", a[4] - a[1]),
            ("2alpha9=-alpha3", 2.0 * a[8] + a[2]),
            ("-alpha3=alpha6", a[2] + a[5]),
            ("alpha7", a[6]),
            ("alpha8", a[7]),
        ]
    }

    /// I-norm of each bracket minus its expression in the frame.
    pub fn lie_brackets(&self) -> Residuals {
        let a = self.alphas();
        let expected = [
            ("[e1,e2]", (0, 1), [-a[0], a[3], 2.0 * a[2]]),
            ("[e1,e3]", (0, 2), [-a[1], -0.5 * a[2], 0.0]),
            ("[e2,e3]", (1, 2), [0.5 * a[2], -a[1], 0.0]),
        ];
        let i = &self.center.first;
        expected
            .into_iter()
            .map(|(name, (p, q), c)| {
                let got = self.bracket(p, q);
                let want = self.combine(c);
                let d: Vec3 = std::array::from_fn(|k| got[k] - want[k]);
                (name, i.form(&d, &d).sqrt())
            })
            .collect()
    }

    /// Ambient derivatives of dx(eⱼ) and dy(eᵢ) against their frame
    /// expressions. `de2(dx(e3))/printed` uses dx(e₂) in place of dx(e₁) in
    /// the α₃ term and is report-only.
    pub fn structure(&self) -> Residuals {
        let a = self.alphas();
        let lambda = self.center.lambdas[0];
        let x = self.center.jet.value;
        let y = self.center.normal;
        let dx: [Point5; 3] = std::array::from_fn(|i| self.dx_e(i));
        let r = |got: Point5, want: Point5| (got - want).max_abs();
        vec![
            (
                "de1(dx(e1))",
                r(self.d_dx(0, 0), dx[1].scale(a[0]) + dx[2].scale(a[1]) + y.scale(lambda) - x),
            ),
            ("de1(dx(e2))", r(self.d_dx(0, 1), dx[0].scale(-a[0]) + dx[2].scale(a[2]))),
            ("de1(dx(e3))", r(self.d_dx(0, 2), dx[0].scale(-a[1]) - dx[1].scale(a[2]))),
            ("de2(dx(e1))", r(self.d_dx(1, 0), dx[1].scale(-a[3]) - dx[2].scale(a[2]))),
            (
                "de2(dx(e2))",
                r(self.d_dx(1, 1), dx[0].scale(a[3]) + dx[2].scale(a[1]) - y.scale(lambda) - x),
            ),
            ("de2(dx(e3))", r(self.d_dx(1, 2), dx[0].scale(a[2]) - dx[1].scale(a[1]))),
            ("de2(dx(e3))/printed", r(self.d_dx(1, 2), dx[1].scale(a[2]) - dx[1].scale(a[1]))),
            ("de3(dx(e1))", r(self.d_dx(2, 0), dx[1].scale(-0.5 * a[2]))),
            ("de3(dx(e2))", r(self.d_dx(2, 1), dx[0].scale(0.5 * a[2]))),
            ("de3(dx(e3))", r(self.d_dx(2, 2), -x)),
            ("dy(e1)", r(self.dy(0), dx[0].scale(-lambda))),
            ("dy(e2)", r(self.dy(1), dx[1].scale(lambda))),
            ("dy(e3)", r(self.dy(2), Point5::ZERO)),
        ]
    }
}

pub fn codazzi_residuals(imm: &Immersion, p: [f64; 3], cfg: &AnalysisConfig) -> Result<Residuals> {
    Ok(FrameField::build(imm, p, cfg, None)?.codazzi())
}

pub fn lie_bracket_residuals(imm: &Immersion, p: [f64; 3], cfg: &AnalysisConfig) -> Result<Residuals> {
    Ok(FrameField::build(imm, p, cfg, None)?.lie_brackets())
}

pub fn structure_residuals(imm: &Immersion, p: [f64; 3], cfg: &AnalysisConfig) -> Result<Residuals> {
    Ok(FrameField::build(imm, p, cfg, None)?.structure())
}

/// Center sample and chart derivatives ∂ₐy of the normal, with stencil
/// normals oriented like the center one.
pub(crate) fn normal_derivatives(
    imm: &Immersion,
    p: [f64; 3],
    cfg: &AnalysisConfig,
    rule: NormalRule,
) -> Result<(CurvatureSample, [Point5; 3])> {
    let center = CurvatureSample::at(imm, p, cfg, rule)?;
    let mut d = [Point5::ZERO; 3];
    for (a, da) in d.iter_mut().enumerate() {
        let h = scaled_step(cfg.frame_step, p[a]);
        let mut s = [Point5::ZERO; 4];
        for (slot, off) in s.iter_mut().zip(offsets(h)) {
            let jet = imm.jet(shifted(p, a, off), &cfg.diff, cfg.jets)?;
            *slot = super::forms::FundamentalForms::from_jet(&jet)?
                .matched(&center.normal)
                .normal;
        }
        for k in 0..5 {
            da[k] = richardson([s[0][k], s[1][k], s[2][k], s[3][k]], h);
        }
    }
    Ok((center, d))
}

/// |∂ₐy + Σⱼ Sⱼₐ xⱼ| (max component) for each chart direction.
pub fn weingarten_residuals(imm: &Immersion, p: [f64; 3], cfg: &AnalysisConfig) -> Result<Residuals> {
    let rule = NormalRule::Rule(cfg.orientation_for(imm));
    let (c, dy) = normal_derivatives(imm, p, cfg, rule)?;
    let names = ["y_u", "y_v", "y_z"];
    Ok((0..3)
        .map(|a| {
            let s_col = [c.shape[(0, a)], c.shape[(1, a)], c.shape[(2, a)]];
            (names[a], (dy[a] + c.dx(&s_col)).max_abs())
        })
        .collect())
}

/// Relations among frame derivatives of the α's, with α's differentiated
/// on a stencil of aligned frame fields.
/// Halvings of the nested step tried when a stencil leaves the domain or
/// the frame turns too far between samples.
const STEP_HALVINGS: u32 = 4;

/// α₁..α₉ at the Richardson offsets along `axis`, with the step used.
fn alpha_stencil(
    imm: &Immersion,
    field: &FrameField,
    axis: usize,
    cfg: &AnalysisConfig,
) -> Result<([[f64; 9]; 4], f64)> {
    let p = field.center.point;
    let mut h = scaled_step(cfg.alpha_step, p[axis]);
    let mut attempt = 0;
    loop {
        let sample = |off: f64| {
            FrameField::build(imm, shifted(p, axis, off), cfg, Some(&field.center))
                .map(|f| f.alphas())
        };
        let r = offsets(h)
            .into_iter()
            .map(sample)
            .collect::<Result<Vec<_>>>();
        match r {
            Ok(s) => return Ok(([s[0], s[1], s[2], s[3]], h)),
            Err(Error::FrameAlignmentFailure { .. } | Error::DomainEscape { .. })
                if attempt < STEP_HALVINGS =>
            {
                attempt += 1;
                h *= 0.5;
            }
            Err(e) => return Err(e),
        }
    }
}

pub fn alpha_pde_residuals(imm: &Immersion, p: [f64; 3], cfg: &AnalysisConfig) -> Result<Residuals> {
    let field = FrameField::build(imm, p, cfg, None)?;
    let a = field.alphas();
    let lambda = field.center.lambdas[0];
    // grad[m][axis] = ∂_axis α_{m+1}
    let mut grad = [[0.0; 3]; 9];
    for axis in 0..3 {
        let (s, h) = alpha_stencil(imm, &field, axis, cfg)?;
        for (m, g) in grad.iter_mut().enumerate() {
            g[axis] = richardson([s[0][m], s[1][m], s[2][m], s[3][m]], h);
        }
    }
    // e(i, m) = eᵢ(α_m), both 1-based
    let e = |i: usize, m: usize| field.directional(i - 1, &grad[m - 1]);
    let al = |m: usize| a[m - 1];
    Ok(vec![
        (
            "e1(alpha4)+e2(alpha1)",
            e(1, 4) + e(2, 1)
                - (1.0 - lambda * lambda
                    + al(1).powi(2)
                    + al(2).powi(2)
                    + 2.0 * al(3).powi(2)
                    + al(4).powi(2)),
        ),
        (
            "e3(alpha1)+e1(alpha3)/2",
            e(3, 1) + 0.5 * e(1, 3) - (al(1) * al(2) - 0.5 * al(3) * al(4)),
        ),
        (
            "e3(alpha4)-e2(alpha3)/2",
            e(3, 4) - 0.5 * e(2, 3) - (al(2) * al(4) + 0.5 * al(1) * al(3)),
        ),
        ("e3(alpha2)", e(3, 2) - (1.0 + al(2).powi(2) - al(3).powi(2))),
        ("e3(alpha3)", e(3, 3) - 2.0 * al(2) * al(3)),
        ("e1(alpha2)=e2(alpha3)", e(1, 2) - e(2, 3)),
        ("e1(alpha3)=-e2(alpha2)", e(1, 3) + e(2, 2)),
    ])
}
