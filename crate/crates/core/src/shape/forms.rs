use super::AnalysisConfig;
use crate::error::{Error, Result};
use crate::families::{Immersion, Orientation};
use crate::kernel::{generalized_sym_eig3, normal_complement, Jet2, Mat3, Point5, Vec3};

/// Components below this magnitude are skipped by the canonical sign rule.
const SIGN_THRESHOLD: f64 = 1e-8;

/// First and second fundamental forms with the unit normal used for II.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FundamentalForms {
    pub first: Mat3,
    pub second: Mat3,
    pub normal: Point5,
}

impl FundamentalForms {
    /// Forms of a jet, with the normal's first significant component positive.
    pub fn from_jet(jet: &Jet2) -> Result<Self> {
        let x = &jet.d1;
        let mut y = normal_complement(&jet.value, &x[0], &x[1], &x[2])?;
        if let Some(c) = y.0.iter().find(|c| c.abs() > SIGN_THRESHOLD) {
            if *c < 0.0 {
                y = -y;
            }
        }
        let first = Mat3::symmetric_from(|i, j| x[i].dot(&x[j]));
        let second = Mat3::symmetric_from(|i, j| jet.d2(i, j).dot(&y));
        Ok(FundamentalForms {
            first,
            second,
            normal: y,
        })
    }

    pub fn flipped(&self) -> Self {
        FundamentalForms {
            first: self.first,
            second: self.second.scale(-1.0),
            normal: -self.normal,
        }
    }

    pub fn oriented(self, o: Orientation) -> Self {
        match o {
            Orientation::Canonical => self,
            Orientation::PositiveUu if self.second[(0, 0)] < 0.0 => self.flipped(),
            Orientation::PositiveUu => self,
        }
    }

    /// Orients the normal to have a positive inner product with `y`.
    pub fn matched(self, y: &Point5) -> Self {
        if self.normal.dot(y) < 0.0 {
            self.flipped()
        } else {
            self
        }
    }
}

/// I, II and y at `p` with the canonical sign rule for y.
pub fn fundamental_forms(imm: &Immersion, p: [f64; 3], cfg: &AnalysisConfig) -> Result<FundamentalForms> {
    let jet = imm.jet(p, &cfg.diff, cfg.jets)?;
    FundamentalForms::from_jet(&jet)
}

/// Pointwise curvature data.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureSample {
    pub point: [f64; 3],
    pub jet: Jet2,
    pub first: Mat3,
    pub second: Mat3,
    /// S = I⁻¹ II in chart coordinates.
    pub shape: Mat3,
    pub normal: Point5,
    /// Principal curvatures sorted descending.
    pub raw: [f64; 3],
    /// Principal curvatures in frame order (relabeled when applicable).
    pub lambdas: [f64; 3],
    /// I-orthonormal principal directions in chart coordinates, paired with `lambdas`.
    pub frame: [Vec3; 3],
    /// Whether the (λ, −λ, 0) labeling was applied.
    pub relabeled: bool,
    pub min_gap: f64,
    /// Set when two principal curvatures are closer than the degeneracy gap;
    /// frame-dependent outputs are then unreliable.
    pub degenerate: bool,
    pub h: f64,
    pub h2: f64,
    pub k: f64,
}

/// How the normal of a sample is oriented.
#[derive(Clone, Copy, Debug)]
pub(crate) enum NormalRule {
    Rule(Orientation),
    Match(Point5),
}

impl CurvatureSample {
    pub(crate) fn from_jet(p: [f64; 3], jet: Jet2, rule: NormalRule, gap: f64) -> Result<Self> {
        let forms = FundamentalForms::from_jet(&jet)?;
        let forms = match rule {
            NormalRule::Rule(o) => forms.oriented(o),
            NormalRule::Match(y) => forms.matched(&y),
        };
        let eig = generalized_sym_eig3(&forms.second, &forms.first, gap)?;
        let inv = forms.first.inverse().ok_or(Error::NotPositiveDefinite)?;
        let shape = inv * forms.second;
        let [a, b, c] = eig.values;
        let relabeled = a > 0.0 && c < 0.0 && b.abs() <= a.abs().min(c.abs());
        let (lambdas, frame) = if relabeled {
            ([a, c, b], [eig.vectors[0], eig.vectors[2], eig.vectors[1]])
        } else {
            (eig.values, eig.vectors)
        };
        Ok(CurvatureSample {
            point: p,
            jet,
            first: forms.first,
            second: forms.second,
            shape,
            normal: forms.normal,
            raw: eig.values,
            lambdas,
            frame,
            relabeled,
            min_gap: eig.min_gap,
            degenerate: eig.degenerate,
            h: (a + b + c) / 3.0,
            h2: (a * b + a * c + b * c) / 3.0,
            k: a * b * c,
        })
    }

    pub(crate) fn at(imm: &Immersion, p: [f64; 3], cfg: &AnalysisConfig, rule: NormalRule) -> Result<Self> {
        let jet = imm.jet(p, &cfg.diff, cfg.jets)?;
        Self::from_jet(p, jet, rule, cfg.diff.degenerate_gap)
    }

    /// `DegeneratePencil` unless the principal curvatures are separated.
    pub fn require_separated(&self) -> Result<()> {
        if self.degenerate {
            Err(Error::DegeneratePencil { gap: self.min_gap })
        } else {
            Ok(())
        }
    }

    /// dx(v) for a chart vector v.
    pub fn dx(&self, v: &Vec3) -> Point5 {
        let d = &self.jet.d1;
        d[0].scale(v[0]) + d[1].scale(v[1]) + d[2].scale(v[2])
    }

    /// |I·S − (I·S)ᵀ| relative to |II|.
    pub fn self_adjoint_defect(&self) -> f64 {
        (self.first * self.shape).asymmetry() / self.second.frobenius().max(f64::MIN_POSITIVE)
    }

    /// Largest |I(eᵢ, eⱼ) − δᵢⱼ|.
    pub fn frame_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.first.form(&self.frame[i], &self.frame[j]) - want).abs());
            }
        }
        worst
    }

    /// Largest relative disagreement of H, H2, K with the trace formulas
    /// tr S/3, (tr² S − tr S²)/6, det S.
    pub fn scalar_defect(&self) -> f64 {
        let s = &self.shape;
        let tr = s.trace();
        let tr2 = (*s * *s).trace();
        let scale = 1.0 + self.raw.iter().map(|l| l.abs()).fold(0.0, f64::max).powi(3);
        [
            self.h - tr / 3.0,
            self.h2 - (tr * tr - tr2) / 6.0,
            self.k - s.det(),
        ]
        .iter()
        .map(|d| d.abs() / scale)
        .fold(0.0, f64::max)
    }
}

/// Curvature sample at `p` with the configured orientation.
pub fn curvature(imm: &Immersion, p: [f64; 3], cfg: &AnalysisConfig) -> Result<CurvatureSample> {
    CurvatureSample::at(imm, p, cfg, NormalRule::Rule(cfg.orientation_for(imm)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_example11, Example11Params};

    #[test]
    fn example11_at_origin() {
        let imm = make_example11(Example11Params::default()).unwrap();
        let cfg = AnalysisConfig::default();
        let f = fundamental_forms(&imm, [0.0, 0.0, 0.0], &cfg).unwrap();
        assert!((f.first - Mat3::IDENTITY).max_abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // canonical rule makes the first component positive
        let want = Point5([s, 0.0, -s, 0.0, 0.0]);
        assert!((f.normal - want).max_abs() < 1e-14);

        let c = curvature(&imm, [0.3, -1.2, 0.0], &cfg).unwrap();
        assert!(c.relabeled);
        for (l, w) in c.lambdas.iter().zip([1.0, -1.0, 0.0]) {
            assert!((l - w).abs() < 1e-12);
        }
        assert!(c.h.abs() < 1e-14 && c.k.abs() < 1e-14);
        assert!((c.h2 + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn orientation_flips_labels() {
        let imm = make_example11(Example11Params::default()).unwrap();
        let mut cfg = AnalysisConfig::default();
        let p = [0.2, 0.1, 1.0];
        let a = curvature(&imm, p, &cfg).unwrap();
        assert!(a.second[(0, 0)] > 0.0);
        cfg.orientation = Some(Orientation::Canonical);
        let b = CurvatureSample::at(&imm, p, &cfg, NormalRule::Match(-a.normal)).unwrap();
        assert!((a.normal + b.normal).max_abs() < 1e-15);
        assert!((a.lambdas[0] - b.lambdas[0]).abs() < 1e-12);
        // e₁ of one orientation is ±e₂ of the other
        assert!(a.first.form(&a.frame[0], &b.frame[1]).abs() > 1.0 - 1e-9);
    }

    #[test]
    fn scalar_and_frame_consistency() {
        let imm = make_example11(Example11Params::default()).unwrap();
        let c = curvature(&imm, [1.0, 2.0, -1.5], &AnalysisConfig::default()).unwrap();
        assert!(c.self_adjoint_defect() < 1e-12);
        assert!(c.frame_defect() < 1e-12);
        assert!(c.scalar_defect() < 1e-12);
    }
}
