use super::forms::{CurvatureSample, NormalRule};
use super::{offsets, richardson, scaled_step, shifted, AnalysisConfig};
use crate::error::{Error, Result};
use crate::families::Immersion;
use crate::kernel::{Jet2, Mat3, Vec3};

/// Christoffel symbols `Γ[k][a][b]` = Γᵏₐᵦ of the induced metric.
pub type Christoffel = [[[f64; 3]; 3]; 3];

/// `R[l][k][i][j]`: the l-th chart component of R(∂ᵢ, ∂ⱼ)∂ₖ.
pub type Riemann = [[[[f64; 3]; 3]; 3]; 3];

/// Γᵏₐᵦ = Iᵏˡ ⟨x_ab, x_l⟩.
pub fn christoffel(jet: &Jet2, first: &Mat3) -> Result<Christoffel> {
    let inv = first.inverse().ok_or(Error::NotPositiveDefinite)?;
    let mut lowered = [[[0.0; 3]; 3]; 3];
    for (l, row) in lowered.iter_mut().enumerate() {
        for a in 0..3 {
            for b in 0..3 {
                row[a][b] = jet.d2(a, b).dot(&jet.d1[l]);
            }
        }
    }
    let mut g = [[[0.0; 3]; 3]; 3];
    for (k, gk) in g.iter_mut().enumerate() {
        for a in 0..3 {
            for b in 0..3 {
                gk[a][b] = (0..3).map(|l| inv[(k, l)] * lowered[l][a][b]).sum();
            }
        }
    }
    Ok(g)
}

/// Riemann tensor at `p` from Christoffel symbols supplied by `gamma_at`,
/// differentiated with fourth-order central differences of step `base_step`
/// (scaled by the coordinate magnitude).
///
/// Rˡₖᵢⱼ = ∂ᵢΓˡⱼₖ − ∂ⱼΓˡᵢₖ + ΓˡᵢₘΓᵐⱼₖ − ΓˡⱼₘΓᵐᵢₖ.
pub fn riemann_from<F>(gamma_at: F, p: [f64; 3], base_step: f64) -> Result<(Riemann, Christoffel)>
where
    F: Fn([f64; 3]) -> Result<Christoffel>,
{
    let g = gamma_at(p)?;
    // dg[i][l][a][b] = ∂ᵢΓˡₐᵦ
    let mut dg = [[[[0.0; 3]; 3]; 3]; 3];
    for (i, dgi) in dg.iter_mut().enumerate() {
        let h = scaled_step(base_step, p[i]);
        let mut s = Vec::with_capacity(4);
        for off in offsets(h) {
            s.push(gamma_at(shifted(p, i, off))?);
        }
        for l in 0..3 {
            for a in 0..3 {
                for b in 0..3 {
                    dgi[l][a][b] =
                        richardson([s[0][l][a][b], s[1][l][a][b], s[2][l][a][b], s[3][l][a][b]], h);
                }
            }
        }
    }
    let mut r = [[[[0.0; 3]; 3]; 3]; 3];
    for l in 0..3 {
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut v = dg[i][l][j][k] - dg[j][l][i][k];
                    for m in 0..3 {
                        v += g[l][i][m] * g[m][j][k] - g[l][j][m] * g[m][i][k];
                    }
                    r[l][k][i][j] = v;
                }
            }
        }
    }
    Ok((r, g))
}

/// Riemann tensor of the induced metric together with the frame it is
/// reported in.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensorSample {
    pub christoffel: Christoffel,
    pub riemann: Riemann,
    pub frame: [Vec3; 3],
    /// `frame_components[a][b][c]` = R(e_a, e_b)e_c expanded in (e₁, e₂, e₃).
    pub frame_components: [[[Vec3; 3]; 3]; 3],
}

impl CurvatureTensorSample {
    /// R(x, y)w in chart components.
    pub fn apply(&self, x: &Vec3, y: &Vec3, w: &Vec3) -> Vec3 {
        let mut out = [0.0; 3];
        for (l, o) in out.iter_mut().enumerate() {
            for k in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        *o += self.riemann[l][k][i][j] * x[i] * y[j] * w[k];
                    }
                }
            }
        }
        out
    }
}

fn gamma_at<'a>(imm: &'a Immersion, cfg: &'a AnalysisConfig) -> impl Fn([f64; 3]) -> Result<Christoffel> + 'a {
    move |q| {
        let jet = imm.jet(q, &cfg.diff, cfg.jets)?;
        let first = Mat3::symmetric_from(|i, j| jet.d1[i].dot(&jet.d1[j]));
        christoffel(&jet, &first)
    }
}

/// Curvature sample and Riemann tensor at `p`. The frame need not be
/// separated: any I-orthonormal frame serves for the Gauss check.
pub fn curvature_tensor(
    imm: &Immersion,
    p: [f64; 3],
    cfg: &AnalysisConfig,
) -> Result<(CurvatureSample, CurvatureTensorSample)> {
    let c = CurvatureSample::at(imm, p, cfg, NormalRule::Rule(cfg.orientation_for(imm)))?;
    let (riemann, christoffel) = riemann_from(gamma_at(imm, cfg), p, cfg.gauss_step)?;
    let mut t = CurvatureTensorSample {
        christoffel,
        riemann,
        frame: c.frame,
        frame_components: [[[[0.0; 3]; 3]; 3]; 3],
    };
    for a in 0..3 {
        for b in 0..3 {
            for cc in 0..3 {
                let v = t.apply(&c.frame[a], &c.frame[b], &c.frame[cc]);
                t.frame_components[a][b][cc] = std::array::from_fn(|m| c.first.form(&v, &c.frame[m]));
            }
        }
    }
    Ok((c, t))
}

/// Largest I-norm of R(eₐ,e_b)e_c − [I(e_c,e_b)eₐ − I(e_c,eₐ)e_b + II(e_c,e_b)Seₐ − II(e_c,eₐ)Se_b]
/// over a < b and all c.
pub fn gauss_residual(imm: &Immersion, p: [f64; 3], cfg: &AnalysisConfig) -> Result<f64> {
    let (c, t) = curvature_tensor(imm, p, cfg)?;
    let (i, ii, s) = (&c.first, &c.second, &c.shape);
    let e = &c.frame;
    let mut worst: f64 = 0.0;
    for a in 0..3 {
        for b in (a + 1)..3 {
            for w in e {
                let lhs = t.apply(&e[a], &e[b], w);
                let (sa, sb) = (s.mul_vec(&e[a]), s.mul_vec(&e[b]));
                let (iwb, iwa) = (i.form(w, &e[b]), i.form(w, &e[a]));
                let (iiwb, iiwa) = (ii.form(w, &e[b]), ii.form(w, &e[a]));
                let d: Vec3 = std::array::from_fn(|k| {
                    lhs[k] - (iwb * e[a][k] - iwa * e[b][k] + iiwb * sa[k] - iiwa * sb[k])
                });
                worst = worst.max(i.form(&d, &d).sqrt());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_example11, Example11Params};

    fn max_abs(r: &Riemann) -> f64 {
        r.iter().flatten().flatten().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }

    #[test]
    fn constant_metric_is_flat() {
        let (r, _) = riemann_from(|_| Ok([[[0.0; 3]; 3]; 3]), [0.3, 1.0, -2.0], 1e-3).unwrap();
        assert_eq!(max_abs(&r), 0.0);
    }

    #[test]
    fn cylindrical_coordinates_are_flat() {
        // I = diag(1, r², 1): Γʳ_θθ = −r, Γ^θ_rθ = Γ^θ_θr = 1/r
        let gamma = |p: [f64; 3]| {
            let mut g = [[[0.0; 3]; 3]; 3];
            g[0][1][1] = -p[0];
            g[1][0][1] = 1.0 / p[0];
            g[1][1][0] = 1.0 / p[0];
            Ok(g)
        };
        let (r, _) = riemann_from(gamma, [1.7, 0.4, 0.0], 1e-3).unwrap();
        assert!(max_abs(&r) < 1e-10);
    }

    #[test]
    fn round_sphere_chart() {
        // unit 3-sphere, I = diag(1, sin²a, sin²a sin²b): sectional curvature 1
        let gamma = |p: [f64; 3]| {
            let (a, b) = (p[0], p[1]);
            let (sa, ca, sb, cb) = (a.sin(), a.cos(), b.sin(), b.cos());
            let mut g = [[[0.0; 3]; 3]; 3];
            g[0][1][1] = -sa * ca;
            g[0][2][2] = -sa * ca * sb * sb;
            g[1][0][1] = ca / sa;
            g[1][1][0] = ca / sa;
            g[1][2][2] = -sb * cb;
            g[2][0][2] = ca / sa;
            g[2][2][0] = ca / sa;
            g[2][1][2] = cb / sb;
            g[2][2][1] = cb / sb;
            Ok(g)
        };
        let p = [1.1, 0.7, 0.2];
        let (r, _) = riemann_from(gamma, p, 1e-3).unwrap();
        // R(∂ᵢ,∂ⱼ)∂ₖ = I(∂ₖ,∂ⱼ)∂ᵢ − I(∂ₖ,∂ᵢ)∂ⱼ
        let m = [1.0, p[0].sin().powi(2), (p[0].sin() * p[1].sin()).powi(2)];
        for l in 0..3 {
            for k in 0..3 {
                for i in 0..3 {
                    for j in 0..3 {
                        let d = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
                        let want = m[k] * d(k, j) * d(l, i) - m[k] * d(k, i) * d(l, j);
                        assert!((r[l][k][i][j] - want).abs() < 1e-9, "R[{l}][{k}][{i}][{j}]");
                    }
                }
            }
        }
    }

    #[test]
    fn example11_gauss_and_antisymmetry() {
        let imm = make_example11(Example11Params::default()).unwrap();
        let cfg = AnalysisConfig::default();
        let p = [0.5, -0.3, 0.8];
        assert!(gauss_residual(&imm, p, &cfg).unwrap() < 1e-6);
        let (_, t) = curvature_tensor(&imm, p, &cfg).unwrap();
        let e = &t.frame;
        let a = t.apply(&e[0], &e[1], &e[2]);
        let b = t.apply(&e[1], &e[0], &e[2]);
        for k in 0..3 {
            assert!((a[k] + b[k]).abs() <= 1e-12 * (1.0 + a[k].abs()));
        }
    }
}
