use super::forms::{CurvatureSample, NormalRule};
use super::gauss::{christoffel, Christoffel};
use super::{offsets, richardson, scaled_step, shifted, AnalysisConfig};
use crate::error::{Error, Result};
use crate::families::Immersion;
use crate::kernel::{dot3, Point5, Vec3};

/// Smallest |I(eᵢ, ẽⱼ)| accepted when matching a frame to a reference.
const ALIGNMENT_FLOOR: f64 = 0.9;

/// Permutes and re-signs the frame of `s` to match `reference`, carrying
/// the principal curvatures along.
fn align(reference: &CurvatureSample, mut s: CurvatureSample) -> Result<CurvatureSample> {
    let mut used = [false; 3];
    let mut frame = s.frame;
    let mut lambdas = s.lambdas;
    for i in 0..3 {
        let mut best: Option<(usize, f64)> = None;
        for j in (0..3).filter(|&j| !used[j]) {
            let d = reference.first.form(&reference.frame[i], &s.frame[j]);
            if best.is_none_or(|(_, b)| d.abs() > b.abs()) {
                best = Some((j, d));
            }
        }
        let (j, d) = best.expect("three candidates for three slots");
        if d.abs() < ALIGNMENT_FLOOR {
            return Err(Error::FrameAlignmentFailure { best: d.abs() });
        }
        used[j] = true;
        frame[i] = s.frame[j].map(|c| c * d.signum());
        lambdas[i] = s.lambdas[j];
    }
    s.frame = frame;
    s.lambdas = lambdas;
    Ok(s)
}

/// Principal frame at a point together with its first derivatives, taken
/// from frames at neighbouring chart points aligned to the center.
#[derive(Clone, Debug)]
pub struct FrameField {
    pub center: CurvatureSample,
    /// `d_frame[a][i]` = ∂ₐeᵢ in chart components.
    pub d_frame: [[Vec3; 3]; 3],
    /// `d_lambda[a][i]` = ∂ₐλᵢ.
    pub d_lambda: [[f64; 3]; 3],
    /// `d_normal[a]` = ∂ₐy.
    pub d_normal: [Point5; 3],
    pub christoffel: Christoffel,
}

impl FrameField {
    /// Builds the field at `p`. With a reference sample, the normal and the
    /// center frame are aligned to it first.
    pub fn build(
        imm: &Immersion,
        p: [f64; 3],
        cfg: &AnalysisConfig,
        reference: Option<&CurvatureSample>,
    ) -> Result<Self> {
        let rule = match reference {
            Some(r) => NormalRule::Match(r.normal),
            None => NormalRule::Rule(cfg.orientation_for(imm)),
        };
        let mut center = CurvatureSample::at(imm, p, cfg, rule)?;
        center.require_separated()?;
        if let Some(r) = reference {
            center = align(r, center)?;
        }
        let gamma = christoffel(&center.jet, &center.first)?;

        let mut d_frame = [[[0.0; 3]; 3]; 3];
        let mut d_lambda = [[0.0; 3]; 3];
        let mut d_normal = [Point5::ZERO; 3];
        for a in 0..3 {
            let h = scaled_step(cfg.frame_step, p[a]);
            let mut samples = Vec::with_capacity(4);
            for s in offsets(h) {
                let q = shifted(p, a, s);
                let smp = CurvatureSample::at(imm, q, cfg, NormalRule::Match(center.normal))?;
                smp.require_separated()?;
                samples.push(align(&center, smp)?);
            }
            let pick = |f: &dyn Fn(&CurvatureSample) -> f64| {
                richardson([f(&samples[0]), f(&samples[1]), f(&samples[2]), f(&samples[3])], h)
            };
            for i in 0..3 {
                for c in 0..3 {
                    d_frame[a][i][c] = pick(&|s| s.frame[i][c]);
                }
                d_lambda[a][i] = pick(&|s| s.lambdas[i]);
            }
            for k in 0..5 {
                d_normal[a][k] = pick(&|s| s.normal[k]);
            }
        }
        Ok(FrameField {
            center,
            d_frame,
            d_lambda,
            d_normal,
            christoffel: gamma,
        })
    }

    pub fn frame(&self) -> &[Vec3; 3] {
        &self.center.frame
    }

    pub fn lambdas(&self) -> [f64; 3] {
        self.center.lambdas
    }

    /// eᵢ applied to a function with chart gradient `grad`.
    pub fn directional(&self, i: usize, grad: &Vec3) -> f64 {
        dot3(&self.center.frame[i], grad)
    }

    /// eᵢ(λⱼ).
    pub fn e_lambda(&self, i: usize, j: usize) -> f64 {
        self.directional(i, &[self.d_lambda[0][j], self.d_lambda[1][j], self.d_lambda[2][j]])
    }

    /// Derivative of the chart field eⱼ along eᵢ, without connection terms.
    fn flat_derivative(&self, i: usize, j: usize) -> Vec3 {
        let ei = &self.center.frame[i];
        std::array::from_fn(|c| (0..3).map(|a| ei[a] * self.d_frame[a][j][c]).sum())
    }

    /// ∇_{eᵢ}eⱼ in chart components.
    pub fn nabla(&self, i: usize, j: usize) -> Vec3 {
        let (ei, ej) = (&self.center.frame[i], &self.center.frame[j]);
        let mut out = self.flat_derivative(i, j);
        for (k, o) in out.iter_mut().enumerate() {
            for a in 0..3 {
                for b in 0..3 {
                    *o += self.christoffel[k][a][b] * ei[a] * ej[b];
                }
            }
        }
        out
    }

    /// Lie bracket [eᵢ, eⱼ] in chart components.
    pub fn bracket(&self, i: usize, j: usize) -> Vec3 {
        let (x, y) = (self.flat_derivative(i, j), self.flat_derivative(j, i));
        std::array::from_fn(|c| x[c] - y[c])
    }

    /// I(v, eₖ).
    pub fn component(&self, v: &Vec3, k: usize) -> f64 {
        self.center.first.form(v, &self.center.frame[k])
    }

    /// α₁..α₉.
    pub fn alphas(&self) -> [f64; 9] {
        let n = |i, j| self.nabla(i, j);
        let (n11, n12, n22, n21, n33, n31) = (n(0, 0), n(0, 1), n(1, 1), n(1, 0), n(2, 2), n(2, 0));
        [
            self.component(&n11, 1),
            self.component(&n11, 2),
            self.component(&n12, 2),
            self.component(&n22, 0),
            self.component(&n22, 2),
            self.component(&n21, 2),
            self.component(&n33, 0),
            self.component(&n33, 1),
            self.component(&n31, 1),
        ]
    }

    /// Chart vector Σ cₖ eₖ.
    pub fn combine(&self, c: [f64; 3]) -> Vec3 {
        let f = &self.center.frame;
        std::array::from_fn(|k| c[0] * f[0][k] + c[1] * f[1][k] + c[2] * f[2][k])
    }

    /// Ambient derivative of the ℝ⁵ field dx(eⱼ) along eᵢ.
    pub fn d_dx(&self, i: usize, j: usize) -> Point5 {
        let jet = &self.center.jet;
        let (ei, ej) = (&self.center.frame[i], &self.center.frame[j]);
        let mut out = Point5::ZERO;
        for a in 0..3 {
            for k in 0..3 {
                let coef = ei[a] * self.d_frame[a][j][k];
                out = out + jet.d1[k].scale(coef) + jet.d2(a, k).scale(ei[a] * ej[k]);
            }
        }
        out
    }

    /// dy(eᵢ).
    pub fn dy(&self, i: usize) -> Point5 {
        let e = &self.center.frame[i];
        self.d_normal[0].scale(e[0]) + self.d_normal[1].scale(e[1]) + self.d_normal[2].scale(e[2])
    }

    /// dx(eᵢ).
    pub fn dx_e(&self, i: usize) -> Point5 {
        self.center.dx(&self.center.frame[i])
    }
}

/// The nine connection coefficients with the positive principal curvature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaSample {
    pub alpha: [f64; 9],
    pub lambda: f64,
}

pub fn alpha_coefficients(imm: &Immersion, p: [f64; 3], cfg: &AnalysisConfig) -> Result<AlphaSample> {
    let field = FrameField::build(imm, p, cfg, None)?;
    Ok(AlphaSample {
        alpha: field.alphas(),
        lambda: field.center.lambdas[0],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_cartan_tube, make_example11, Example11Params};

    #[test]
    fn example11_alphas() {
        let imm = make_example11(Example11Params::default()).unwrap();
        let cfg = AnalysisConfig::default();
        for p in [[0.1, 0.2, 0.0], [1.0, -2.0, 1.5], [-0.4, 3.0, -2.0]] {
            let a = alpha_coefficients(&imm, p, &cfg).unwrap();
            assert!((a.lambda - (p[2] * p[2] + 1.0).sqrt()).abs() < 1e-12);
            assert!((a.alpha[1] - p[2]).abs() < 1e-6, "{:?}", a.alpha);
            for k in [0, 2, 3, 6, 7] {
                assert!(a.alpha[k].abs() < 1e-6, "alpha{} = {}", k + 1, a.alpha[k]);
            }
        }
    }

    #[test]
    fn cartan_alphas() {
        let tube = make_cartan_tube();
        let a = alpha_coefficients(&tube, [1.1, 0.4, 2.0], &AnalysisConfig::default()).unwrap();
        assert!((a.lambda - 3.0_f64.sqrt()).abs() < 1e-10);
        assert!((a.alpha[2].abs() - 1.0).abs() < 1e-6, "{:?}", a.alpha);
        assert!(a.alpha[6].abs() < 1e-6 && a.alpha[7].abs() < 1e-6);
    }

    #[test]
    fn alignment_floor() {
        let imm = make_example11(Example11Params::default()).unwrap();
        let cfg = AnalysisConfig::default();
        let a = super::super::curvature(&imm, [0.0, 0.0, 0.5], &cfg).unwrap();
        let mut b = a.clone();
        // rotate e₁, e₂ by 45° inside their plane
        let s = std::f64::consts::FRAC_1_SQRT_2;
        b.frame[0] = std::array::from_fn(|k| s * (a.frame[0][k] + a.frame[1][k]));
        b.frame[1] = std::array::from_fn(|k| s * (a.frame[0][k] - a.frame[1][k]));
        assert!(matches!(align(&a, b), Err(Error::FrameAlignmentFailure { .. })));
        let mut c = a.clone();
        c.frame.swap(0, 2);
        c.lambdas.swap(0, 2);
        c.frame[1] = c.frame[1].map(|x| -x);
        let r = align(&a, c).unwrap();
        assert_eq!(r.lambdas, a.lambdas);
        for i in 0..3 {
            for k in 0..3 {
                assert!((r.frame[i][k] - a.frame[i][k]).abs() < 1e-15);
            }
        }
    }
}
