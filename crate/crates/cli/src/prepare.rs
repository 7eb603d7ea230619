//! Turns a parsed configuration into an immersion, sample points and
//! analysis settings.

use std::f64::consts::{PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use zerok_core::expr::Expr;
use zerok_core::families::{
    make_cartan_tube, make_example11, make_example12, make_expr_immersion, Domain, Example11Params,
    Example12Params, Immersion, JetMode,
};
use zerok_core::kernel::Point5;
use zerok_core::shape::{AnalysisConfig, AxisGrid, Check, GridSpec, Tolerances};

use crate::config::{AxisSpec, CheckSelection, FamilySpec, RunConfig};

/// Grid points per axis when a config leaves `count` unset.
pub const DEFAULT_COUNT: usize = 11;

/// A configuration resolved against its family.
#[derive(Debug)]
pub struct Prepared {
    pub immersion: Immersion,
    pub grid: GridSpec,
    /// Grid points in lexicographic order, then the seeded random points.
    pub points: Vec<[f64; 3]>,
    pub checks: Vec<Check>,
    pub tolerances: Tolerances,
    pub analysis: AnalysisConfig,
    /// Canonical JSON echo of the resolved configuration.
    pub echo: Value,
}

fn build_immersion(family: &FamilySpec) -> zerok_core::Result<Immersion> {
    match family {
        FamilySpec::Example11 { basis } => {
            let params = match basis {
                Some(c) => Example11Params::new(*c)?,
                None => Example11Params::default(),
            };
            make_example11(params)
        }
        FamilySpec::Example12 { c1, c2, basis } => {
            let params = match basis {
                Some(c) => Example12Params::with_basis(*c1, *c2, *c)?,
                None => Example12Params::new(*c1, *c2)?,
            };
            make_example12(params)
        }
        FamilySpec::Cartan => Ok(make_cartan_tube()),
        FamilySpec::Expr {
            components,
            constants,
            ranges,
        } => {
            let everywhere = (f64::NEG_INFINITY, f64::INFINITY);
            let [u, v, z] = ranges.map(|r| r.unwrap_or(everywhere));
            let exprs: [Expr; 5] = components.clone().map(|c| c.expr);
            make_expr_immersion("expr", exprs, constants, Domain::new(u, v, z))
        }
    }
}

/// Family-specific default sampling box.
fn default_ranges(imm: &Immersion, family: &FamilySpec) -> [(f64, f64); 3] {
    let half = PI / SQRT_2;
    match family {
        FamilySpec::Example11 { .. } => [(-half, half), (-half, half), (-2.0, 2.0)],
        FamilySpec::Example12 { .. } => {
            let v = match imm.kind() {
                zerok_core::families::FamilyKind::Example12(p) => p.grid_v_range(),
                _ => unreachable!("example12 spec builds an example12 immersion"),
            };
            [(-PI, PI), v, (-2.0, 2.0)]
        }
        FamilySpec::Cartan => [(0.1, PI - 0.1), (0.0, 2.0 * PI), (0.0, 2.0 * PI)],
        FamilySpec::Expr { .. } => {
            let d = imm.domain();
            [d.u_range, d.v_range, d.z_range].map(|(lo, hi)| {
                if lo.is_finite() && hi.is_finite() {
                    let pad = 0.01 * (hi - lo);
                    (lo + pad, hi - pad)
                } else {
                    (-1.0, 1.0)
                }
            })
        }
    }
}

fn resolve_axis(spec: AxisSpec, default: (f64, f64)) -> Result<AxisGrid, String> {
    let min = spec.min.unwrap_or(default.0);
    let max = spec.max.unwrap_or(default.1);
    if min >= max {
        return Err(format!("grid axis needs min < max after defaults, got [{min}, {max}]"));
    }
    Ok(AxisGrid::new(min, max, spec.count.unwrap_or(DEFAULT_COUNT)))
}

fn point_json(p: &Point5) -> Value {
    json!(p.0)
}

fn family_echo(family: &FamilySpec) -> Value {
    let basis = |b: &Option<[Point5; 5]>| match b {
        Some(c) => Value::Array(c.iter().map(point_json).collect()),
        None => Value::Null,
    };
    match family {
        FamilySpec::Example11 { basis: b } => json!({"name": "example11", "basis": basis(b)}),
        FamilySpec::Example12 { c1, c2, basis: b } => {
            json!({"name": "example12", "c1": c1, "c2": c2, "basis": basis(b)})
        }
        FamilySpec::Cartan => json!({"name": "cartan"}),
        FamilySpec::Expr {
            components,
            constants,
            ranges,
        } => json!({
            "name": "expr",
            "components": components.iter().map(|c| c.source.clone()).collect::<Vec<_>>(),
            "constants": constants,
            "ranges": ranges.map(|r| r.map(|(a, b)| [a, b])),
        }),
    }
}

/// Errors from preparation: a core error (family construction) or an
/// inconsistency only visible once defaults are filled in.
#[derive(Debug)]
pub enum PrepareError {
    Core(zerok_core::Error),
    Invalid(String),
}

pub fn prepare(cfg: &RunConfig) -> Result<Prepared, PrepareError> {
    let immersion = build_immersion(&cfg.family).map_err(PrepareError::Core)?;
    let defaults = default_ranges(&immersion, &cfg.family);
    let axes: Vec<AxisGrid> = cfg
        .grid
        .iter()
        .zip(defaults)
        .map(|(s, d)| resolve_axis(*s, d))
        .collect::<Result<_, _>>()
        .map_err(PrepareError::Invalid)?;
    let grid = GridSpec {
        u: axes[0],
        v: axes[1],
        z: axes[2],
    };

    let checks: Vec<Check> = match &cfg.checks {
        CheckSelection::All => Check::ALL
            .into_iter()
            .filter(|c| c.applicable(&immersion).is_ok())
            .collect(),
        CheckSelection::Listed(list) => {
            for c in list {
                c.applicable(&immersion).map_err(PrepareError::Core)?;
            }
            list.clone()
        }
    };

    let mut tolerances = Tolerances::defaults(&immersion);
    for (k, v) in &cfg.tolerances {
        tolerances.set(k.clone(), *v);
    }

    let mut analysis = AnalysisConfig {
        jets: cfg.jets,
        ..AnalysisConfig::default()
    };
    if let Some(h) = cfg.base_step {
        analysis.diff.base_step = h;
    }
    if let Some(r) = cfg.richardson {
        analysis.diff.richardson = r;
    }
    if cfg.jets == JetMode::Analytic && !immersion.has_analytic_jet() {
        return Err(PrepareError::Invalid(format!(
            "family `{}` has no analytic jets; use jets = auto or fd",
            cfg.family.name()
        )));
    }

    let mut points = grid.points();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.random_points {
        let p = [grid.u, grid.v, grid.z].map(|a| rng.gen_range(a.min..=a.max));
        points.push(p);
    }

    let jets = match cfg.jets {
        JetMode::Auto => "auto",
        JetMode::Analytic => "analytic",
        JetMode::FiniteDifference => "fd",
    };
    let axis_echo = |a: AxisGrid| json!({"min": a.min, "max": a.max, "count": a.count});
    let echo = json!({
        "seed": cfg.seed,
        "family": family_echo(&cfg.family),
        "grid": {"u": axis_echo(grid.u), "v": axis_echo(grid.v), "z": axis_echo(grid.z)},
        "random_points": cfg.random_points,
        "checks": checks.iter().map(|c| c.name()).collect::<Vec<_>>(),
        "jets": jets,
        "base_step": analysis.diff.base_step,
        "richardson": analysis.diff.richardson,
        "tolerance_overrides": cfg.tolerances.iter()
            .map(|(k, v)| (k.clone(), if v.is_finite() { json!(v) } else { json!("inf") }))
            .collect::<serde_json::Map<_, _>>(),
    });

    Ok(Prepared {
        immersion,
        grid,
        points,
        checks,
        tolerances,
        analysis,
        echo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;
    use zerok_core::phase::validity_interval;

    #[test]
    fn example12_v_defaults_to_shrunk_interval() {
        let cfg = parse_config("[family]\nname = example12\nc1 = 0.1\nc2 = 1.0\n").unwrap();
        let p = prepare(&cfg).unwrap();
        // oracle: roots of c1² t² − c2 t + 1 with t = e^{2v}, then 1% off each end
        let disc = (1.0f64 - 4.0 * 0.01).sqrt();
        let lo = ((1.0 - disc) / 0.02).ln() / 2.0;
        let hi = ((1.0 + disc) / 0.02).ln() / 2.0;
        let (a, b) = validity_interval(0.1, 1.0).unwrap();
        assert!((a - lo).abs() < 1e-12 && (b - hi).abs() < 1e-12);
        assert!(p.grid.v.min > lo && p.grid.v.max < hi);
        let w = hi - lo;
        assert!((p.grid.v.min - (lo + 0.01 * w)).abs() < 1e-4);
        assert!((p.grid.v.max - (hi - 0.01 * w)).abs() < 1e-4);
        assert_eq!(p.grid.v.count, DEFAULT_COUNT);
    }

    #[test]
    fn random_points_are_seeded() {
        let src = "seed = 9\n[family]\nname = cartan\n[grid.u]\ncount = 2\n[grid.v]\ncount = 2\n[grid.z]\ncount = 2\n[checks]\nrandom_points = 5\n";
        let a = prepare(&parse_config(src).unwrap()).unwrap();
        let b = prepare(&parse_config(src).unwrap()).unwrap();
        assert_eq!(a.points.len(), 13);
        assert_eq!(a.points, b.points);
        let c = prepare(&parse_config(&src.replace("seed = 9", "seed = 10")).unwrap()).unwrap();
        assert_ne!(a.points[8..], c.points[8..]);
    }

    #[test]
    fn inapplicable_check_is_rejected() {
        let cfg = parse_config("[family]\nname = cartan\n[checks]\nrun = ex11_system\n").unwrap();
        assert!(matches!(prepare(&cfg), Err(PrepareError::Core(_))));
    }
}
