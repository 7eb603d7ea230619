//! Concrete immersions of open subsets of ℝ³ into the unit sphere 𝕊⁴ ⊂ ℝ⁵.

mod cartan;
mod example11;
mod example12;
mod expr_family;

use std::fmt;
use std::sync::Arc;

pub use cartan::{make_cartan_tube, veronese, veronese_chart, veronese_normal_frame, POLE_GUARD};
pub use example11::{make_example11, Example11Params};
pub use example12::{make_example12, Example12Params};
pub use expr_family::{make_expr_immersion, EXPR_NORM_ERROR, EXPR_NORM_WARN};

use crate::error::{Error, Result};
use crate::kernel::{jet, DiffConfig, Jet2, Point5};

/// Sign rule for the unit normal y.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// First component with magnitude above 1e-8 is positive.
    Canonical,
    /// II(∂u, ∂u) > 0; the orientation of the coordinate systems in which
    /// the explicit families are written.
    PositiveUu,
}

/// Open box in chart coordinates with an optional extra validity test.
#[derive(Clone)]
pub struct Domain {
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub z_range: (f64, f64),
    predicate: Option<Arc<dyn Fn([f64; 3]) -> bool + Send + Sync>>,
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Domain")
            .field("u_range", &self.u_range)
            .field("v_range", &self.v_range)
            .field("z_range", &self.z_range)
            .field("predicate", &self.predicate.is_some())
            .finish()
    }
}

impl Domain {
    pub fn new(u_range: (f64, f64), v_range: (f64, f64), z_range: (f64, f64)) -> Self {
        assert!(
            u_range.0 < u_range.1 && v_range.0 < v_range.1 && z_range.0 < z_range.1,
            "domain intervals must be nonempty"
        );
        Domain {
            u_range,
            v_range,
            z_range,
            predicate: None,
        }
    }

    /// All of ℝ³.
    pub fn everywhere() -> Self {
        let r = (f64::NEG_INFINITY, f64::INFINITY);
        Domain::new(r, r, r)
    }

    pub fn with_predicate(mut self, p: impl Fn([f64; 3]) -> bool + Send + Sync + 'static) -> Self {
        self.predicate = Some(Arc::new(p));
        self
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        let inside = |x: f64, r: (f64, f64)| x > r.0 && x < r.1;
        inside(p[0], self.u_range)
            && inside(p[1], self.v_range)
            && inside(p[2], self.z_range)
            && self.predicate.as_ref().is_none_or(|f| f(p))
    }
}

/// Which construction an immersion came from; some checks only make sense
/// for one family.
#[derive(Clone, Debug)]
pub enum FamilyKind {
    Example11(Example11Params),
    Example12(Arc<Example12Params>),
    Cartan,
    Expr,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Example11(_) => "example11",
            FamilyKind::Example12(_) => "example12",
            FamilyKind::Cartan => "cartan",
            FamilyKind::Expr => "expr",
        }
    }
}

type PointFn = dyn Fn([f64; 3]) -> Result<Point5> + Send + Sync;
type JetFn = dyn Fn([f64; 3]) -> Result<Jet2> + Send + Sync;

/// How jets are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum JetMode {
    /// Exact jets when the immersion provides them, else finite differences.
    #[default]
    Auto,
    Analytic,
    FiniteDifference,
}

/// An evaluatable chart (u, v, z) → 𝕊⁴ ⊂ ℝ⁵ with its validity domain.
#[derive(Clone)]
pub struct Immersion {
    label: String,
    domain: Domain,
    kind: FamilyKind,
    evaluator: Arc<PointFn>,
    analytic: Option<Arc<JetFn>>,
}

impl fmt::Debug for Immersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Immersion")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("analytic", &self.analytic.is_some())
            .finish()
    }
}

impl Immersion {
    pub(crate) fn new(
        label: impl Into<String>,
        domain: Domain,
        kind: FamilyKind,
        evaluator: Arc<PointFn>,
        analytic: Option<Arc<JetFn>>,
    ) -> Self {
        Immersion {
            label: label.into(),
            domain,
            kind,
            evaluator,
            analytic,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn has_analytic_jet(&self) -> bool {
        self.analytic.is_some()
    }

    /// Evaluates x(p); `DomainEscape` outside the domain.
    pub fn eval(&self, p: [f64; 3]) -> Result<Point5> {
        if !self.domain.contains(p) {
            return Err(Error::DomainEscape { point: p });
        }
        (self.evaluator)(p)
    }

    pub fn jet_fd(&self, p: [f64; 3], cfg: &DiffConfig) -> Result<Jet2> {
        jet(|q| self.eval(q), p, cfg)
    }

    pub fn jet_analytic(&self, p: [f64; 3]) -> Result<Jet2> {
        if !self.domain.contains(p) {
            return Err(Error::DomainEscape { point: p });
        }
        match &self.analytic {
            Some(f) => f(p),
            None => Err(Error::NoAnalyticJet(self.label.clone())),
        }
    }

    pub fn jet(&self, p: [f64; 3], cfg: &DiffConfig, mode: JetMode) -> Result<Jet2> {
        match mode {
            JetMode::Analytic => self.jet_analytic(p),
            JetMode::FiniteDifference => self.jet_fd(p, cfg),
            JetMode::Auto if self.analytic.is_some() => self.jet_analytic(p),
            JetMode::Auto => self.jet_fd(p, cfg),
        }
    }

    /// Closed-form positive principal curvature, where the family has one.
    pub fn expected_lambda(&self, p: [f64; 3]) -> Option<f64> {
        let z = p[2];
        match &self.kind {
            FamilyKind::Example11(_) => Some((z * z + 1.0).sqrt()),
            FamilyKind::Example12(par) => {
                Some(par.c1 * (2.0 * p[1]).exp() * (z * z + 1.0).sqrt())
            }
            FamilyKind::Cartan => Some(3.0_f64.sqrt()),
            FamilyKind::Expr => None,
        }
    }

    /// Normal orientation in which the family's coordinate identities hold.
    pub fn preferred_orientation(&self) -> Orientation {
        match self.kind {
            FamilyKind::Example11(_) | FamilyKind::Example12(_) => Orientation::PositiveUu,
            FamilyKind::Cartan | FamilyKind::Expr => Orientation::Canonical,
        }
    }
}

/// Checks that five vectors are mutually orthogonal with the given squared norms.
pub(crate) fn check_basis(c: &[Point5; 5], norms2: [f64; 5], tol: f64) -> Result<()> {
    for i in 0..5 {
        let n2 = c[i].dot(&c[i]);
        if (n2 - norms2[i]).abs() > tol {
            return Err(Error::BadBasis(format!(
                "<C{0}, C{0}> = {n2}, expected {1}",
                i + 1,
                norms2[i]
            )));
        }
        for j in 0..i {
            let d = c[i].dot(&c[j]);
            if d.abs() > tol {
                return Err(Error::BadBasis(format!(
                    "<C{}, C{}> = {d}, expected 0",
                    j + 1,
                    i + 1
                )));
            }
        }
    }
    Ok(())
}
