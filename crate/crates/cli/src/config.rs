//! Line-oriented run configuration.
//!
//! ```text
//! seed = 7
//! [family]
//! name = example12
//! c1 = 0.1
//! c2 = 1.0
//! [grid.z]
//! min = -2
//! max = 2
//! count = 11
//! [checks]
//! run = H, K, lambda
//! [tolerances]
//! H = 1e-8
//! [output]
//! json = example12.json
//! ```
//!
//! The value of a line is everything after its last `=`, so tolerance keys
//! such as `codazzi/alpha5=alpha2` may contain `=`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;
use zerok_core::expr::{parse_str, Expr};
use zerok_core::families::JetMode;
use zerok_core::kernel::Point5;
use zerok_core::shape::Check;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ConfigError {
    /// 1-based line number; 0 for whole-file errors.
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line,
            message: message.into(),
        }
    }
}

/// Partially specified axis; unset fields take family defaults.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AxisSpec {
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub count: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ExprComponent {
    pub source: String,
    pub expr: Expr,
}

#[derive(Clone, Debug)]
pub enum FamilySpec {
    Example11 {
        basis: Option<[Point5; 5]>,
    },
    Example12 {
        c1: f64,
        c2: f64,
        basis: Option<[Point5; 5]>,
    },
    Cartan,
    Expr {
        components: Box<[ExprComponent; 5]>,
        constants: BTreeMap<String, f64>,
        ranges: [Option<(f64, f64)>; 3],
    },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Example11 { .. } => "example11",
            FamilySpec::Example12 { .. } => "example12",
            FamilySpec::Cartan => "cartan",
            FamilySpec::Expr { .. } => "expr",
        }
    }
}

/// Which checks to run.
#[derive(Clone, Debug, PartialEq)]
pub enum CheckSelection {
    /// Every check that applies to the family.
    All,
    Listed(Vec<Check>),
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub family: FamilySpec,
    /// u, v, z.
    pub grid: [AxisSpec; 3],
    pub checks: CheckSelection,
    /// Extra uniformly random points in the grid box, drawn from `seed`.
    pub random_points: usize,
    pub jets: JetMode,
    pub base_step: Option<f64>,
    pub richardson: Option<bool>,
    pub tolerances: BTreeMap<String, f64>,
    pub csv: Option<String>,
    pub json: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Preamble,
    Family,
    Grid(usize),
    Checks,
    Tolerances,
    Output,
}

impl Section {
    fn parse(name: &str) -> Option<Section> {
        Some(match name {
            "family" => Section::Family,
            "grid.u" => Section::Grid(0),
            "grid.v" => Section::Grid(1),
            "grid.z" => Section::Grid(2),
            "checks" => Section::Checks,
            "tolerances" => Section::Tolerances,
            "output" => Section::Output,
            _ => return None,
        })
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Section::Preamble => write!(f, "preamble"),
            Section::Family => write!(f, "[family]"),
            Section::Grid(i) => write!(f, "[grid.{}]", ["u", "v", "z"][*i]),
            Section::Checks => write!(f, "[checks]"),
            Section::Tolerances => write!(f, "[tolerances]"),
            Section::Output => write!(f, "[output]"),
        }
    }
}

#[derive(Clone, Debug)]
struct Entry {
    value: String,
    line: usize,
}

type SectionMap = BTreeMap<String, Entry>;

fn split_sections(text: &str) -> Result<BTreeMap<Section, SectionMap>, ConfigError> {
    let mut out: BTreeMap<Section, SectionMap> = BTreeMap::new();
    out.insert(Section::Preamble, SectionMap::new());
    let mut current = Section::Preamble;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::new(line, "unterminated section header"))?
                .trim();
            current = Section::parse(name)
                .ok_or_else(|| ConfigError::new(line, format!("unknown section [{name}]")))?;
            if out.insert(current, SectionMap::new()).is_some() {
                return Err(ConfigError::new(line, format!("duplicate section {current}")));
            }
            continue;
        }
        let eq = content
            .rfind('=')
            .ok_or_else(|| ConfigError::new(line, "expected `key = value`"))?;
        let key = content[..eq].trim();
        let value = content[eq + 1..].trim();
        if key.is_empty() {
            return Err(ConfigError::new(line, "empty key"));
        }
        if value.is_empty() {
            return Err(ConfigError::new(line, format!("empty value for `{key}`")));
        }
        let map = out.get_mut(&current).expect("current section was inserted");
        if let Some(prev) = map.get(key) {
            return Err(ConfigError::new(
                line,
                format!("duplicate key `{key}` (first set on line {})", prev.line),
            ));
        }
        map.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                line,
            },
        );
    }
    Ok(out)
}

fn parse_f64(e: &Entry, key: &str) -> Result<f64, ConfigError> {
    e.value
        .parse::<f64>()
        .ok()
        .filter(|x| !x.is_nan())
        .ok_or_else(|| ConfigError::new(e.line, format!("`{key}` must be a number, got `{}`", e.value)))
}

fn parse_finite(e: &Entry, key: &str) -> Result<f64, ConfigError> {
    let x = parse_f64(e, key)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(ConfigError::new(e.line, format!("`{key}` must be finite")))
    }
}

fn parse_list(e: &Entry, key: &str, n: usize) -> Result<Vec<f64>, ConfigError> {
    let items: Vec<&str> = e.value.split(',').map(str::trim).collect();
    if items.len() != n {
        return Err(ConfigError::new(
            e.line,
            format!("`{key}` needs {n} comma-separated numbers, got {}", items.len()),
        ));
    }
    items
        .into_iter()
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| ConfigError::new(e.line, format!("`{key}`: bad number `{s}`")))
        })
        .collect()
}

fn parse_basis(map: &SectionMap) -> Result<Option<[Point5; 5]>, ConfigError> {
    let keys = ["C1", "C2", "C3", "C4", "C5"];
    let given: Vec<&str> = keys.iter().copied().filter(|k| map.contains_key(*k)).collect();
    if given.is_empty() {
        return Ok(None);
    }
    if given.len() != 5 {
        let line = map[given[0]].line;
        return Err(ConfigError::new(line, "basis override needs all of C1..C5"));
    }
    let mut c = [Point5::ZERO; 5];
    for (i, k) in keys.iter().enumerate() {
        let v = parse_list(&map[*k], k, 5)?;
        c[i] = Point5::new([v[0], v[1], v[2], v[3], v[4]]);
    }
    Ok(Some(c))
}

fn require<'a>(map: &'a SectionMap, key: &str, what: &str) -> Result<&'a Entry, ConfigError> {
    map.get(key)
        .ok_or_else(|| ConfigError::new(0, format!("{what} requires `{key}`")))
}

fn reject_unknown(map: &SectionMap, section: Section, allowed: impl Fn(&str) -> bool) -> Result<(), ConfigError> {
    // report the earliest offending line
    let bad = map
        .iter()
        .filter(|(k, _)| !allowed(k))
        .min_by_key(|(_, e)| e.line);
    match bad {
        Some((k, e)) => Err(ConfigError::new(e.line, format!("unknown key `{k}` in {section}"))),
        None => Ok(()),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_family(map: Option<&SectionMap>) -> Result<FamilySpec, ConfigError> {
    let map = map.ok_or_else(|| ConfigError::new(0, "missing [family] section"))?;
    let name = require(map, "name", "[family]")?;
    let basis_key = |k: &str| matches!(k, "C1" | "C2" | "C3" | "C4" | "C5");
    match name.value.as_str() {
        "example11" => {
            reject_unknown(map, Section::Family, |k| k == "name" || basis_key(k))?;
            Ok(FamilySpec::Example11 {
                basis: parse_basis(map)?,
            })
        }
        "example12" => {
            reject_unknown(map, Section::Family, |k| {
                matches!(k, "name" | "c1" | "c2") || basis_key(k)
            })?;
            let c1 = parse_finite(require(map, "c1", "family example12")?, "c1")?;
            let c2 = parse_finite(require(map, "c2", "family example12")?, "c2")?;
            Ok(FamilySpec::Example12 {
                c1,
                c2,
                basis: parse_basis(map)?,
            })
        }
        "cartan" => {
            reject_unknown(map, Section::Family, |k| k == "name")?;
            Ok(FamilySpec::Cartan)
        }
        "expr" => {
            reject_unknown(map, Section::Family, |k| {
                matches!(k, "name" | "x1" | "x2" | "x3" | "x4" | "x5" | "u_range" | "v_range" | "z_range")
                    || k.strip_prefix("const.").is_some_and(is_identifier)
            })?;
            let mut parsed = Vec::with_capacity(5);
            for k in ["x1", "x2", "x3", "x4", "x5"] {
                let e = require(map, k, "family expr")?;
                let expr = parse_str(&e.value)
                    .map_err(|err| ConfigError::new(e.line, format!("`{k}`: {err}")))?;
                parsed.push(ExprComponent {
                    source: e.value.clone(),
                    expr,
                });
            }
            let components: [ExprComponent; 5] =
                parsed.try_into().expect("exactly five components");
            let mut constants = BTreeMap::new();
            for (k, e) in map {
                if let Some(c) = k.strip_prefix("const.") {
                    constants.insert(c.to_string(), parse_finite(e, k)?);
                }
            }
            let mut ranges = [None; 3];
            for (i, k) in ["u_range", "v_range", "z_range"].iter().enumerate() {
                if let Some(e) = map.get(*k) {
                    let v = parse_list(e, k, 2)?;
                    if v[0] >= v[1] {
                        return Err(ConfigError::new(e.line, format!("`{k}` needs min < max")));
                    }
                    ranges[i] = Some((v[0], v[1]));
                }
            }
            Ok(FamilySpec::Expr {
                components: Box::new(components),
                constants,
                ranges,
            })
        }
        other => Err(ConfigError::new(
            name.line,
            format!("unknown family `{other}` (expected example11, example12, cartan or expr)"),
        )),
    }
}

fn parse_axis(map: Option<&SectionMap>, section: Section) -> Result<AxisSpec, ConfigError> {
    let Some(map) = map else {
        return Ok(AxisSpec::default());
    };
    reject_unknown(map, section, |k| matches!(k, "min" | "max" | "count"))?;
    let mut axis = AxisSpec::default();
    if let Some(e) = map.get("min") {
        axis.min = Some(parse_finite(e, "min")?);
    }
    if let Some(e) = map.get("max") {
        axis.max = Some(parse_finite(e, "max")?);
    }
    if let Some(e) = map.get("count") {
        let n: usize = e
            .value
            .parse()
            .map_err(|_| ConfigError::new(e.line, format!("`count` must be an integer, got `{}`", e.value)))?;
        if n < 2 {
            return Err(ConfigError::new(e.line, "`count` must be at least 2"));
        }
        axis.count = Some(n);
    }
    if let (Some(lo), Some(hi)) = (axis.min, axis.max) {
        if lo >= hi {
            let line = map["max"].line;
            return Err(ConfigError::new(line, format!("{section} needs min < max")));
        }
    }
    Ok(axis)
}

fn parse_check_list(e: &Entry) -> Result<CheckSelection, ConfigError> {
    if e.value == "all" {
        return Ok(CheckSelection::All);
    }
    let mut out = Vec::new();
    for name in e.value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let c = Check::from_name(name)
            .ok_or_else(|| ConfigError::new(e.line, format!("unknown check `{name}`")))?;
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(CheckSelection::Listed(out))
}

fn parse_bool(e: &Entry, key: &str) -> Result<bool, ConfigError> {
    match e.value.as_str() {
        "true" => Ok(true),
        "false" => Ok(false),
        v => Err(ConfigError::new(e.line, format!("`{key}` must be true or false, got `{v}`"))),
    }
}

/// Parses a configuration. Only syntax and local value constraints are
/// checked here; family construction happens when the run is prepared.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let sections = split_sections(text)?;

    let pre = &sections[&Section::Preamble];
    reject_unknown(pre, Section::Preamble, |k| k == "seed")?;
    let seed = match pre.get("seed") {
        Some(e) => e
            .value
            .parse()
            .map_err(|_| ConfigError::new(e.line, "`seed` must be a non-negative integer"))?,
        None => 0,
    };

    let family = parse_family(sections.get(&Section::Family))?;
    let mut grid = [AxisSpec::default(); 3];
    for (i, axis) in grid.iter_mut().enumerate() {
        *axis = parse_axis(sections.get(&Section::Grid(i)), Section::Grid(i))?;
    }

    let mut checks = CheckSelection::All;
    let mut random_points = 0;
    let mut jets = JetMode::Auto;
    let mut base_step = None;
    let mut richardson = None;
    if let Some(map) = sections.get(&Section::Checks) {
        reject_unknown(map, Section::Checks, |k| {
            matches!(k, "run" | "jets" | "base_step" | "richardson" | "random_points")
        })?;
        if let Some(e) = map.get("run") {
            checks = parse_check_list(e)?;
        }
        if let Some(e) = map.get("jets") {
            jets = match e.value.as_str() {
                "auto" => JetMode::Auto,
                "analytic" => JetMode::Analytic,
                "fd" => JetMode::FiniteDifference,
                v => {
                    return Err(ConfigError::new(
                        e.line,
                        format!("`jets` must be auto, analytic or fd, got `{v}`"),
                    ))
                }
            };
        }
        if let Some(e) = map.get("base_step") {
            let h = parse_finite(e, "base_step")?;
            if h <= 0.0 {
                return Err(ConfigError::new(e.line, "`base_step` must be positive"));
            }
            base_step = Some(h);
        }
        if let Some(e) = map.get("richardson") {
            richardson = Some(parse_bool(e, "richardson")?);
        }
        if let Some(e) = map.get("random_points") {
            random_points = e
                .value
                .parse()
                .map_err(|_| ConfigError::new(e.line, "`random_points` must be a non-negative integer"))?;
        }
    }

    let mut tolerances = BTreeMap::new();
    if let Some(map) = sections.get(&Section::Tolerances) {
        for (k, e) in map {
            let check = k.split('/').next().unwrap_or(k);
            if Check::from_name(check).is_none() {
                return Err(ConfigError::new(e.line, format!("unknown check `{check}` in tolerance key `{k}`")));
            }
            let t = parse_f64(e, k)?;
            if t <= 0.0 {
                return Err(ConfigError::new(e.line, format!("tolerance `{k}` must be positive (inf for report-only)")));
            }
            tolerances.insert(k.clone(), t);
        }
    }

    let (mut csv, mut json) = (None, None);
    if let Some(map) = sections.get(&Section::Output) {
        reject_unknown(map, Section::Output, |k| matches!(k, "csv" | "json"))?;
        csv = map.get("csv").map(|e| e.value.clone());
        json = map.get("json").map(|e| e.value.clone());
    }

    Ok(RunConfig {
        seed,
        family,
        grid,
        checks,
        random_points,
        jets,
        base_step,
        richardson,
        tolerances,
        csv,
        json,
    })
}
