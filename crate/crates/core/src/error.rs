use thiserror::Error;

use crate::expr::ExprError;

/// Errors raised by the geometry pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate frame: normal complement norm {norm:e} below threshold")]
    DegenerateFrame { norm: f64 },

    #[error("stencil point ({:.6}, {:.6}, {:.6}) leaves the validity domain", point[0], point[1], point[2])]
    DomainEscape { point: [f64; 3] },

    #[error("matrix is not positive-definite")]
    NotPositiveDefinite,

    #[error("bad basis: {0}")]
    BadBasis(String),

    #[error("empty validity interval (c2 <= 2*c1): c1 = {c1}, c2 = {c2}")]
    EmptyInterval { c1: f64, c2: f64 },

    #[error("point is off the unit sphere: ||x| - 1| = {deviation:e}")]
    NotOnSphere { deviation: f64 },

    #[error("chart point too close to a pole (|sin(polar)| = {sin_polar:e})")]
    PoleSingularity { sin_polar: f64 },

    #[error("v = {v} is outside the usable phase interval ({lo}, {hi})")]
    OutOfInterval { v: f64, lo: f64, hi: f64 },

    #[error("adaptive quadrature did not reach tolerance within {evaluations} evaluations")]
    QuadratureFailure { evaluations: usize },

    #[error("frame alignment failed: best dot product {best:.3} below 0.9")]
    FrameAlignmentFailure { best: f64 },

    #[error("principal curvatures are not separated (min gap {gap:e})")]
    DegeneratePencil { gap: f64 },

    #[error("analytic jet not available for immersion `{0}`")]
    NoAnalyticJet(String),

    #[error("check `{check}` does not apply to immersion `{family}`")]
    NotApplicable { check: String, family: String },

    #[error(transparent)]
    Expr(#[from] ExprError),
}

impl Error {
    /// Short stable tag, used for exclusion counting in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateFrame { .. } => "DegenerateFrame",
            Error::DomainEscape { .. } => "DomainEscape",
            Error::NotPositiveDefinite => "NotPositiveDefinite",
            Error::BadBasis(_) => "BadBasis",
            Error::EmptyInterval { .. } => "EmptyInterval",
            Error::NotOnSphere { .. } => "NotOnSphere",
            Error::PoleSingularity { .. } => "PoleSingularity",
            Error::OutOfInterval { .. } => "OutOfInterval",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::FrameAlignmentFailure { .. } => "FrameAlignmentFailure",
            Error::DegeneratePencil { .. } => "DegeneratePencil",
            Error::NoAnalyticJet(_) => "NoAnalyticJet",
            Error::NotApplicable { .. } => "NotApplicable",
            Error::Expr(e) => e.kind(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
