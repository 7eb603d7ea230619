use std::collections::BTreeMap;

use rayon::prelude::*;

use super::forms::{curvature, CurvatureSample};
use super::frame::FrameField;
use super::{
    coords, gauss_residual, alpha_pde_residuals, weingarten_residuals, AnalysisConfig, Residuals,
};
use crate::error::{Error, Result};
use crate::families::{FamilyKind, Immersion};
use crate::kernel::Point5;

/// Largest fraction of grid points that may be excluded by per-point errors.
pub const EXCLUSION_BUDGET: f64 = 0.01;

/// A verification run at every grid point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    UnitNorm,
    H,
    K,
    Lambda,
    SelfAdjoint,
    Weingarten,
    Codazzi,
    Gauss,
    Lie,
    AlphaPde,
    Structure,
    Example11System,
    Example12System,
    Alpha,
}

impl Check {
    pub const ALL: [Check; 14] = [
        Check::UnitNorm,
        Check::H,
        Check::K,
        Check::Lambda,
        Check::SelfAdjoint,
        Check::Weingarten,
        Check::Codazzi,
        Check::Gauss,
        Check::Lie,
        Check::AlphaPde,
        Check::Structure,
        Check::Example11System,
        Check::Example12System,
        Check::Alpha,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::UnitNorm => "unit_norm",
            Check::H => "H",
            Check::K => "K",
            Check::Lambda => "lambda",
            Check::SelfAdjoint => "self_adjoint",
            Check::Weingarten => "weingarten",
            Check::Codazzi => "codazzi",
            Check::Gauss => "gauss",
            Check::Lie => "lie",
            Check::AlphaPde => "alpha_pde",
            Check::Structure => "structure",
            Check::Example11System => "ex11_system",
            Check::Example12System => "ex12_system",
            Check::Alpha => "alpha",
        }
    }

    pub fn from_name(s: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.name() == s)
    }

    /// `NotApplicable` when the check needs family data `imm` lacks.
    pub fn applicable(self, imm: &Immersion) -> Result<()> {
        let ok = match self {
            Check::Lambda | Check::Alpha => !matches!(imm.kind(), FamilyKind::Expr),
            Check::Example11System => matches!(imm.kind(), FamilyKind::Example11(_)),
            Check::Example12System => matches!(imm.kind(), FamilyKind::Example12(_)),
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::NotApplicable {
                check: self.name().to_string(),
                family: imm.label().to_string(),
            })
        }
    }
}

/// Evenly spaced samples on `[min, max]`, both ends included.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisGrid {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        AxisGrid { min, max, count }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count <= 1 {
            return vec![self.min; self.count];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.max
                } else {
                    self.min + i as f64 * step
                }
            })
            .collect()
    }
}

/// Tensor grid; points are ordered with u slowest and z fastest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub u: AxisGrid,
    pub v: AxisGrid,
    pub z: AxisGrid,
}

impl GridSpec {
    pub fn points(&self) -> Vec<[f64; 3]> {
        let (us, vs, zs) = (self.u.values(), self.v.values(), self.z.values());
        let mut out = Vec::with_capacity(us.len() * vs.len() * zs.len());
        for &u in &us {
            for &v in &vs {
                for &z in &zs {
                    out.push([u, v, z]);
                }
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.u.count * self.v.count * self.z.count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Pass thresholds keyed by check name or `check/residual`. An infinite
/// threshold marks a residual as report-only.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    map: BTreeMap<String, f64>,
}

impl Tolerances {
    /// Tiered by differentiation depth: pointwise curvature quantities from
    /// second-order jets, frame derivatives, then nested frame derivatives.
    pub fn defaults(imm: &Immersion) -> Self {
        let mut map: BTreeMap<String, f64> = [
            ("unit_norm", 1e-10),
            ("H", 1e-6),
            ("K", 1e-6),
            ("lambda", 1e-5),
            ("self_adjoint", 1e-9),
            ("weingarten", 1e-4),
            ("codazzi", 1e-3),
            ("gauss", 1e-2),
            ("lie", 1e-3),
            ("alpha_pde", 1e-2),
            ("alpha_pde/e1(alpha4)+e2(alpha1)", 5e-2),
            ("structure", 1e-3),
            ("structure/de2(dx(e3))/printed", f64::INFINITY),
            ("ex11_system", 1e-4),
            ("ex11_system/x_uv", 1e-6),
            ("ex11_system/x_uuu", 1e-3),
            ("ex12_system", 1e-3),
            ("ex12_system/x_uv", 1e-5),
            ("alpha", 1e-4),
            ("alpha/alpha1^2", 1e-3),
            ("alpha/alpha3", 1e-3),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        if matches!(imm.kind(), FamilyKind::Expr) {
            // these assume principal curvatures (λ, −λ, 0)
            for sub in [
                "e1(lambda)",
                "e2(lambda)",
                "e3(lambda)",
                "alpha5=alpha2",
                "2alpha9=-alpha3",
                "-alpha3=alpha6",
                "alpha7",
                "alpha8",
            ] {
                map.insert(format!("codazzi/{sub}"), f64::INFINITY);
            }
        }
        Tolerances { map }
    }

    pub fn set(&mut self, key: impl Into<String>, value: f64) {
        self.map.insert(key.into(), value);
    }

    /// Threshold for a reported residual name; `None` when report-only or unset.
    pub fn get(&self, name: &str) -> Option<f64> {
        let check = name.split('/').next().unwrap_or(name);
        self.map
            .get(name)
            .or_else(|| self.map.get(check))
            .copied()
            .filter(|t| t.is_finite())
    }
}

/// Aggregate of one residual over the grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualStat {
    pub max_abs: f64,
    pub mean_abs: f64,
    pub worst_point: [f64; 3],
    /// Grid index of `worst_point`; ties go to the lowest index.
    pub worst_index: usize,
    pub samples: usize,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    pub checks: Vec<Check>,
    pub points: usize,
    pub stats: BTreeMap<String, ResidualStat>,
    /// Excluded points counted by error kind.
    pub exclusions: BTreeMap<String, usize>,
    pub excluded: usize,
}

impl ResidualReport {
    pub fn exclusion_fraction(&self) -> f64 {
        if self.points == 0 {
            0.0
        } else {
            self.excluded as f64 / self.points as f64
        }
    }

    pub fn numerical_failure(&self) -> bool {
        self.exclusion_fraction() > EXCLUSION_BUDGET
    }

    /// Residual names over tolerance.
    pub fn failures(&self) -> Vec<&str> {
        self.stats
            .iter()
            .filter(|(_, s)| !s.pass)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn passed(&self) -> bool {
        !self.numerical_failure() && self.failures().is_empty()
    }

    /// Largest |value| among residuals whose name is `check` or starts with `check/`.
    pub fn max_of(&self, check: &str) -> Option<f64> {
        let prefix = format!("{check}/");
        self.stats
            .iter()
            .filter(|(k, _)| *k == check || k.starts_with(&prefix))
            .map(|(_, s)| s.max_abs)
            .reduce(f64::max)
    }
}

fn family_alphas(field: &FrameField, imm: &Immersion, p: [f64; 3]) -> Residuals {
    let a = field.alphas();
    let lambda = field.center.lambdas[0];
    let z = p[2];
    match imm.kind() {
        FamilyKind::Example11(_) => vec![
            ("alpha1", a[0]),
            ("alpha2-z", a[1] - z),
            ("alpha3", a[2]),
            ("alpha4", a[3]),
        ],
        FamilyKind::Example12(par) => {
            let t = (2.0 * p[1]).exp();
            let want = (z * z + 1.0) * (par.c2 * t - 1.0 - par.c1 * par.c1 * t * t);
            vec![
                ("alpha1^2", (a[0] * a[0] - want) / want.abs().max(f64::MIN_POSITIVE)),
                ("alpha2-z", a[1] - z),
                ("alpha3", a[2]),
                ("alpha4", a[3]),
            ]
        }
        FamilyKind::Cartan => vec![
            ("alpha1", a[0]),
            ("alpha2", a[1]),
            ("|alpha3|-1", a[2].abs() - 1.0),
            ("alpha4", a[3]),
            ("alpha7", a[6]),
            ("alpha8", a[7]),
            ("lambda^2-3", lambda * lambda - 3.0),
        ],
        FamilyKind::Expr => Vec::new(),
    }
}

fn evaluate_point(
    imm: &Immersion,
    p: [f64; 3],
    checks: &[Check],
    cfg: &AnalysisConfig,
) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    let mut sample: Option<CurvatureSample> = None;
    let mut field: Option<FrameField> = None;
    let push = |out: &mut Vec<(String, f64)>, check: Check, r: Residuals| {
        for (sub, v) in r {
            out.push((format!("{}/{sub}", check.name()), v));
        }
    };
    for &check in checks {
        match check {
            Check::UnitNorm => {
                out.push((check.name().into(), imm.eval(p)?.norm() - 1.0));
            }
            Check::H | Check::K | Check::Lambda | Check::SelfAdjoint => {
                if sample.is_none() {
                    sample = Some(curvature(imm, p, cfg)?);
                }
                let s = sample.as_ref().expect("sample computed above");
                match check {
                    Check::H => out.push((check.name().into(), s.h)),
                    Check::K => out.push((check.name().into(), s.k)),
                    Check::Lambda => {
                        let want = imm.expected_lambda(p).expect("checked applicable");
                        out.push((check.name().into(), s.lambdas[0] - want));
                    }
                    _ => push(
                        &mut out,
                        check,
                        vec![
                            ("symmetry", s.self_adjoint_defect()),
                            ("frame", s.frame_defect()),
                            ("scalars", s.scalar_defect()),
                        ],
                    ),
                }
            }
            Check::Weingarten => push(&mut out, check, weingarten_residuals(imm, p, cfg)?),
            Check::Codazzi | Check::Lie | Check::Structure | Check::Alpha => {
                if field.is_none() {
                    field = Some(FrameField::build(imm, p, cfg, None)?);
                }
                let f = field.as_ref().expect("field computed above");
                let r = match check {
                    Check::Codazzi => f.codazzi(),
                    Check::Lie => f.lie_brackets(),
                    Check::Structure => f.structure(),
                    _ => family_alphas(f, imm, p),
                };
                push(&mut out, check, r);
            }
            Check::Gauss => out.push((check.name().into(), gauss_residual(imm, p, cfg)?)),
            Check::AlphaPde => push(&mut out, check, alpha_pde_residuals(imm, p, cfg)?),
            Check::Example11System => push(&mut out, check, coords::structure_residuals_example11(imm, p, cfg)?),
            Check::Example12System => push(&mut out, check, coords::structure_residuals_example12(imm, p, cfg)?),
        }
    }
    Ok(out)
}

/// Runs `checks` at every grid point; see [`scan_points`].
pub fn scan_grid(
    imm: &Immersion,
    grid: &GridSpec,
    checks: &[Check],
    tolerances: &Tolerances,
    cfg: &AnalysisConfig,
) -> Result<ResidualReport> {
    scan_points(imm, &grid.points(), checks, tolerances, cfg)
}

/// Runs `checks` at every point in parallel and aggregates the residuals.
/// Points where any check fails are excluded and counted by error kind; the
/// report is deterministic regardless of thread count.
pub fn scan_points(
    imm: &Immersion,
    points: &[[f64; 3]],
    checks: &[Check],
    tolerances: &Tolerances,
    cfg: &AnalysisConfig,
) -> Result<ResidualReport> {
    for c in checks {
        c.applicable(imm)?;
    }
    let results: Vec<Result<Vec<(String, f64)>>> = if checks.is_empty() {
        Vec::new()
    } else {
        points
            .par_iter()
            .map(|&p| evaluate_point(imm, p, checks, cfg))
            .collect()
    };

    struct Acc {
        max: f64,
        sum: f64,
        n: usize,
        worst: usize,
    }
    let mut acc: BTreeMap<String, Acc> = BTreeMap::new();
    let mut exclusions = BTreeMap::new();
    let mut excluded = 0;
    for (idx, r) in results.into_iter().enumerate() {
        match r {
            Ok(values) => {
                for (name, v) in values {
                    let a = v.abs();
                    let e = acc.entry(name).or_insert(Acc {
                        max: -1.0,
                        sum: 0.0,
                        n: 0,
                        worst: idx,
                    });
                    // NaN counts as worst
                    if a > e.max || (a.is_nan() && !e.max.is_nan()) {
                        e.max = a;
                        e.worst = idx;
                    }
                    e.sum += a;
                    e.n += 1;
                }
            }
            Err(err) => {
                log::debug!("excluded {:?}: {err}", points[idx]);
                *exclusions.entry(err.kind().to_string()).or_insert(0) += 1;
                excluded += 1;
            }
        }
    }
    let stats = acc
        .into_iter()
        .map(|(name, a)| {
            let tolerance = tolerances.get(&name);
            let pass = match tolerance {
                Some(t) => a.max <= t,
                None => true,
            };
            let stat = ResidualStat {
                max_abs: a.max,
                mean_abs: a.sum / a.n as f64,
                worst_point: points[a.worst],
                worst_index: a.worst,
                samples: a.n,
                tolerance,
                pass,
            };
            (name, stat)
        })
        .collect();
    Ok(ResidualReport {
        checks: checks.to_vec(),
        points: if checks.is_empty() { 0 } else { points.len() },
        stats,
        exclusions,
        excluded,
    })
}

/// Point and curvature sample at every grid point, in grid order.
pub fn sample_grid(
    imm: &Immersion,
    grid: &GridSpec,
    cfg: &AnalysisConfig,
) -> Vec<([f64; 3], Result<(Point5, CurvatureSample)>)> {
    grid.points()
        .into_par_iter()
        .map(|p| {
            let r = imm.eval(p).and_then(|x| Ok((x, curvature(imm, p, cfg)?)));
            (p, r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_example11, make_example12, Example11Params, Example12Params};

    #[test]
    fn linspace_is_inclusive() {
        let g = AxisGrid::new(-1.0, 1.0, 5);
        assert_eq!(g.values(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(AxisGrid::new(2.0, 3.0, 1).values(), vec![2.0]);
    }

    #[test]
    fn empty_check_set_passes() {
        let imm = make_example11(Example11Params::default()).unwrap();
        let a = AxisGrid::new(0.0, 1.0, 3);
        let grid = GridSpec { u: a, v: a, z: a };
        let r = scan_grid(&imm, &grid, &[], &Tolerances::defaults(&imm), &Default::default()).unwrap();
        assert!(r.stats.is_empty() && r.passed());
    }

    #[test]
    fn boundary_grid_exceeds_exclusion_budget() {
        let par = Example12Params::new(0.1, 1.0).unwrap();
        let (lo, hi) = par.phase.interval;
        let imm = make_example12(par).unwrap();
        let grid = GridSpec {
            u: AxisGrid::new(0.0, 1.0, 3),
            v: AxisGrid::new(lo, hi, 11),
            z: AxisGrid::new(-1.0, 1.0, 3),
        };
        let r = scan_grid(&imm, &grid, &[Check::H], &Tolerances::defaults(&imm), &Default::default())
            .unwrap();
        assert!(r.numerical_failure());
        assert!(r.exclusions.get("DomainEscape").copied().unwrap_or(0) > 0);
        assert!(!r.passed());
    }

    #[test]
    fn tolerance_lookup() {
        let imm = make_example11(Example11Params::default()).unwrap();
        let t = Tolerances::defaults(&imm);
        assert_eq!(t.get("ex11_system/x_uv"), Some(1e-6));
        assert_eq!(t.get("ex11_system/y_z"), Some(1e-4));
        assert_eq!(t.get("structure/de2(dx(e3))/printed"), None);
        assert_eq!(t.get("H"), Some(1e-6));
    }
}
