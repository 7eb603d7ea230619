//! CSV point clouds and JSON residual reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use zerok_core::shape::{CurvatureSample, ResidualReport, EXCLUSION_BUDGET};
use zerok_core::kernel::Point5;

pub const CSV_HEADER: &str = "u,v,z,x1,x2,x3,x4,x5,lambda1,lambda2,lambda3,H,H2,K";

/// 17 significant digits, enough to round-trip any double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV text for successfully sampled points; failed points are skipped and
/// counted.
pub fn csv_text<'a, I>(rows: I) -> (String, usize)
where
    I: IntoIterator<Item = &'a ([f64; 3], zerok_core::Result<(Point5, CurvatureSample)>)>,
{
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    let mut skipped = 0;
    for (p, r) in rows {
        let Ok((x, s)) = r else {
            skipped += 1;
            continue;
        };
        let scalars = [s.h, s.h2, s.k];
        let values = p.iter().chain(&x.0).chain(&s.lambdas).chain(&scalars);
        let line: Vec<String> = values.map(|v| fmt_f64(*v)).collect();
        writeln!(out, "{}", line.join(",")).expect("writing to a String cannot fail");
    }
    (out, skipped)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    /// `null` when a residual was NaN.
    pub max_abs: Option<f64>,
    pub mean_abs: Option<f64>,
    pub worst_point: [f64; 3],
    /// `null` for report-only residuals.
    pub tolerance: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exclusions {
    pub points: usize,
    pub excluded: usize,
    pub budget: f64,
    pub by_kind: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub config_echo: Value,
    pub per_check: BTreeMap<String, CheckEntry>,
    pub exclusions: Exclusions,
    /// `null` unless timing was requested, so reports stay reproducible.
    pub wall_time_ms: Option<f64>,
}

/// Process exit status implied by a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    ToleranceFailure,
    NumericalFailure,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::ToleranceFailure => 1,
            Verdict::NumericalFailure => 3,
        }
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl JsonReport {
    pub fn new(echo: Value, report: &ResidualReport, wall_time_ms: Option<f64>) -> Self {
        let per_check = report
            .stats
            .iter()
            .map(|(k, s)| {
                let entry = CheckEntry {
                    max_abs: finite(s.max_abs),
                    mean_abs: finite(s.mean_abs),
                    worst_point: s.worst_point,
                    tolerance: s.tolerance,
                    pass: s.pass,
                };
                (k.clone(), entry)
            })
            .collect();
        JsonReport {
            config_echo: echo,
            per_check,
            exclusions: Exclusions {
                points: report.points,
                excluded: report.excluded,
                budget: EXCLUSION_BUDGET,
                by_kind: report.exclusions.clone(),
            },
            wall_time_ms,
        }
    }

    pub fn verdict(&self) -> Verdict {
        let e = &self.exclusions;
        if e.points > 0 && e.excluded as f64 > e.budget * e.points as f64 {
            Verdict::NumericalFailure
        } else if self.per_check.values().any(|c| !c.pass) {
            Verdict::ToleranceFailure
        } else {
            Verdict::Pass
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is serializable");
        s.push('\n');
        s
    }

    /// Human-readable table of the residuals and the verdict.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        let family = self.config_echo["family"]["name"].as_str().unwrap_or("?");
        writeln!(out, "family: {family}").ok();
        let width = self.per_check.keys().map(String::len).max().unwrap_or(5).max(5);
        writeln!(out, "{:<width$}  {:>10}  {:>10}  {:>9}  status", "check", "max|r|", "mean|r|", "tol").ok();
        let num = |x: Option<f64>| x.map_or("nan".to_string(), |v| format!("{v:.3e}"));
        for (k, c) in &self.per_check {
            let status = match (c.tolerance, c.pass) {
                (None, _) => "report",
                (_, true) => "pass",
                (_, false) => "FAIL",
            };
            let tol = c.tolerance.map_or("-".to_string(), |t| format!("{t:.0e}"));
            writeln!(
                out,
                "{k:<width$}  {:>10}  {:>10}  {tol:>9}  {status}",
                num(c.max_abs),
                num(c.mean_abs)
            )
            .ok();
        }
        let e = &self.exclusions;
        writeln!(out, "points: {}, excluded: {}", e.points, e.excluded).ok();
        for (kind, n) in &e.by_kind {
            writeln!(out, "  {kind}: {n}").ok();
        }
        if let Some(ms) = self.wall_time_ms {
            writeln!(out, "wall time: {ms:.1} ms").ok();
        }
        let verdict = match self.verdict() {
            Verdict::Pass => "PASS",
            Verdict::ToleranceFailure => "FAIL (tolerance)",
            Verdict::NumericalFailure => "FAIL (too many excluded points)",
        };
        writeln!(out, "result: {verdict}").ok();
        out
    }
}
