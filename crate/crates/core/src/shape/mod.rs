//! Fundamental forms, principal curvatures and frame connection
//! coefficients at chart points, the residuals of the structure equations
//! built from them, and grid scans aggregating those residuals.
//!
//! Frame quantities follow the labeling (λ₁, λ₂, λ₃) = (λ, −λ, 0): e₁ is the
//! eigenvector of the positive principal curvature, e₂ of the negative one
//! and e₃ of the one nearest zero. Connection coefficients are
//!
//! ```text
//! α₁ = I(∇_{e₁}e₁, e₂)   α₂ = I(∇_{e₁}e₁, e₃)   α₃ = I(∇_{e₁}e₂, e₃)
//! α₄ = I(∇_{e₂}e₂, e₁)   α₅ = I(∇_{e₂}e₂, e₃)   α₆ = I(∇_{e₂}e₁, e₃)
//! α₇ = I(∇_{e₃}e₃, e₁)   α₈ = I(∇_{e₃}e₃, e₂)   α₉ = I(∇_{e₃}e₁, e₂)
//! ```

mod coords;
mod forms;
mod frame;
mod gauss;
mod identities;
mod scan;

pub use coords::{structure_residuals_example11, structure_residuals_example12};
pub use forms::{curvature, fundamental_forms, CurvatureSample, FundamentalForms};
pub use frame::{alpha_coefficients, AlphaSample, FrameField};
pub use gauss::{
    christoffel, curvature_tensor, gauss_residual, riemann_from, Christoffel, CurvatureTensorSample,
    Riemann,
};
pub use identities::{
    codazzi_residuals, lie_bracket, lie_bracket_residuals, alpha_pde_residuals, structure_residuals,
    weingarten_residuals,
};
pub use scan::{
    sample_grid, scan_grid, scan_points, AxisGrid, Check, GridSpec, ResidualReport, ResidualStat, Tolerances,
    EXCLUSION_BUDGET,
};

use crate::families::{Immersion, JetMode, Orientation};
use crate::kernel::DiffConfig;

/// Named scalar residuals, in a fixed order.
pub type Residuals = Vec<(&'static str, f64)>;

/// Numerical settings for the point analyses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalysisConfig {
    pub diff: DiffConfig,
    pub jets: JetMode,
    /// Normal orientation; `None` uses the immersion's preferred one.
    pub orientation: Option<Orientation>,
    /// Step for differentiating frames, normals and principal curvatures.
    pub frame_step: f64,
    /// Step for differentiating the α fields (nested stencils).
    pub alpha_step: f64,
    /// Step for differentiating Christoffel symbols.
    pub gauss_step: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            diff: DiffConfig::default(),
            jets: JetMode::Auto,
            orientation: None,
            frame_step: 1e-3,
            alpha_step: 1e-2,
            gauss_step: 1e-3,
        }
    }
}

impl AnalysisConfig {
    pub fn orientation_for(&self, imm: &Immersion) -> Orientation {
        self.orientation.unwrap_or_else(|| imm.preferred_orientation())
    }
}

fn scaled_step(base: f64, c: f64) -> f64 {
    base * c.abs().max(1.0)
}

fn shifted(p: [f64; 3], axis: usize, s: f64) -> [f64; 3] {
    let mut q = p;
    q[axis] += s;
    q
}

/// Stencil offsets matching [`richardson`]: +h, −h, +h/2, −h/2.
fn offsets(h: f64) -> [f64; 4] {
    [h, -h, 0.5 * h, -0.5 * h]
}

/// Fourth-order central first derivative from samples at [`offsets`].
fn richardson(s: [f64; 4], h: f64) -> f64 {
    let coarse = (s[0] - s[1]) / (2.0 * h);
    let fine = (s[2] - s[3]) / h;
    (4.0 * fine - coarse) / 3.0
}
