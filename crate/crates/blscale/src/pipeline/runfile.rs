//! Run-file, config-file and synth-spec parsing.
//!
//! All three share one text format: UTF-8, `#` starts a comment anywhere,
//! header lines are `key = value`. In run files the header ends at the
//! first blank line and is followed by exactly two whitespace-separated
//! numeric columns, `y u` in SI units or `eta phi` when the header sets
//! `wall_units = true`. Numeric parsing is strict: NaN and infinities are
//! rejected.
//!
//! Every failure is reported as a [`ParseDiagnostic`] carrying one of the
//! documented [`DiagnosticCode`]s and a 1-based line number (0 = whole
//! file).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{DiagnosticCode, Error, ParseDiagnostic};
use crate::model::{DimensionlessProfile, PowerLaw, Run, RunMeta};
use crate::segfit::FitConfig;
use crate::synth::SynthSpec;

type ParseResult<T> = std::result::Result<T, ParseDiagnostic>;

/// A parsed run file: either a dimensional run or an already-dimensionless
/// profile with whatever metadata the header carried.
#[derive(Debug, Clone)]
pub enum ParsedRun {
    Dimensional(Run),
    WallUnits(WallUnitsRun),
}

/// A wall-units run: `(eta, phi)` columns plus optional metadata.
#[derive(Debug, Clone)]
pub struct WallUnitsRun {
    pub name: String,
    pub profile: DimensionlessProfile,
    pub u_star: Option<f64>,
    pub u_inf: Option<f64>,
    pub nu: Option<f64>,
    pub re_theta: Option<f64>,
}

impl ParsedRun {
    pub fn name(&self) -> &str {
        match self {
            ParsedRun::Dimensional(run) => run.name(),
            ParsedRun::WallUnits(w) => &w.name,
        }
    }

    pub fn re_theta(&self) -> Option<f64> {
        match self {
            ParsedRun::Dimensional(run) => run.meta().re_theta,
            ParsedRun::WallUnits(w) => w.re_theta,
        }
    }
}

fn diag(code: DiagnosticCode, line: usize, message: impl Into<String>) -> ParseDiagnostic {
    ParseDiagnostic::new(code, line, message)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(idx) => &line[..idx],
        None => line,
    }
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

/// Header entries in file order plus the raw body lines that follow.
struct Sections<'a> {
    header: Vec<(&'a str, &'a str, usize)>,
    body: Vec<(&'a str, usize)>,
}

fn split_sections(text: &str) -> ParseResult<Sections<'_>> {
    let mut header = Vec::new();
    let mut body = Vec::new();
    let mut in_header = true;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            if in_header && !header.is_empty() {
                in_header = false;
            }
            continue;
        }
        if in_header {
            let Some(eq) = line.find('=') else {
                return Err(diag(
                    DiagnosticCode::MalformedHeader,
                    line_no,
                    format!("expected 'key = value', got '{line}'"),
                ));
            };
            let key = line[..eq].trim();
            let value = line[eq + 1..].trim();
            if !is_identifier(key) {
                return Err(diag(
                    DiagnosticCode::MalformedHeader,
                    line_no,
                    format!("key '{key}' is not an identifier"),
                ));
            }
            if value.is_empty() {
                return Err(diag(
                    DiagnosticCode::InvalidValue,
                    line_no,
                    format!("key '{key}' has an empty value"),
                ));
            }
            header.push((key, value, line_no));
        } else {
            body.push((line, line_no));
        }
    }
    Ok(Sections { header, body })
}

/// Header map with duplicate detection and typed accessors.
struct HeaderMap<'a> {
    entries: BTreeMap<&'a str, (&'a str, usize)>,
}

impl<'a> HeaderMap<'a> {
    fn build(header: &[(&'a str, &'a str, usize)], known: &[&str]) -> ParseResult<Self> {
        let mut entries = BTreeMap::new();
        for &(key, value, line) in header {
            if !known.contains(&key) {
                return Err(diag(
                    DiagnosticCode::UnknownKey,
                    line,
                    format!("unknown key '{key}'"),
                ));
            }
            if entries.insert(key, (value, line)).is_some() {
                return Err(diag(
                    DiagnosticCode::DuplicateKey,
                    line,
                    format!("key '{key}' appears more than once"),
                ));
            }
        }
        Ok(HeaderMap { entries })
    }

    fn raw(&self, key: &str) -> Option<(&'a str, usize)> {
        self.entries.get(key).copied()
    }

    fn number(&self, key: &str) -> ParseResult<Option<f64>> {
        match self.raw(key) {
            None => Ok(None),
            Some((value, line)) => parse_number(value, line).map(Some),
        }
    }

    fn required_number(&self, key: &str) -> ParseResult<f64> {
        match self.number(key)? {
            Some(v) => Ok(v),
            None => Err(diag(
                DiagnosticCode::MissingKey,
                0,
                format!("mandatory key '{key}' is missing"),
            )),
        }
    }

    fn count(&self, key: &str, line_hint: &str) -> ParseResult<Option<usize>> {
        match self.raw(key) {
            None => Ok(None),
            Some((value, line)) => value.parse::<usize>().map(Some).map_err(|_| {
                diag(
                    DiagnosticCode::MalformedNumber,
                    line,
                    format!("{line_hint} '{value}' is not a non-negative integer"),
                )
            }),
        }
    }

    fn flag(&self, key: &str) -> ParseResult<bool> {
        match self.raw(key) {
            None => Ok(false),
            Some(("true", _)) => Ok(true),
            Some(("false", _)) => Ok(false),
            Some((other, line)) => Err(diag(
                DiagnosticCode::InvalidValue,
                line,
                format!("key '{key}' must be true or false, got '{other}'"),
            )),
        }
    }
}

fn parse_number(field: &str, line: usize) -> ParseResult<f64> {
    let v: f64 = field.parse().map_err(|_| {
        diag(
            DiagnosticCode::MalformedNumber,
            line,
            format!("'{field}' is not a number"),
        )
    })?;
    if !v.is_finite() {
        return Err(diag(
            DiagnosticCode::NonFiniteNumber,
            line,
            format!("'{field}' is not finite"),
        ));
    }
    Ok(v)
}

fn decode(bytes: &[u8]) -> ParseResult<&str> {
    std::str::from_utf8(bytes).map_err(|e| {
        diag(
            DiagnosticCode::Encoding,
            0,
            format!("input is not UTF-8: {e}"),
        )
    })
}

const RUN_KEYS: [&str; 9] = [
    "name",
    "u_star",
    "U_inf",
    "nu",
    "re_theta",
    "theta",
    "tau",
    "rho",
    "wall_units",
];

/// Parse a run file.
///
/// Returns either a validated dimensional [`Run`] or a wall-units profile
/// wrapper. Every rejection carries a diagnostic code and line number.
pub fn parse_run_file(bytes: &[u8]) -> ParseResult<ParsedRun> {
    let text = decode(bytes)?;
    let sections = split_sections(text)?;
    let map = HeaderMap::build(&sections.header, &RUN_KEYS)?;

    let (name, name_line) = match map.raw("name") {
        Some(pair) => pair,
        None => {
            return Err(diag(
                DiagnosticCode::MissingKey,
                0,
                "mandatory key 'name' is missing",
            ))
        }
    };
    if !is_identifier(name) {
        return Err(diag(
            DiagnosticCode::InvalidValue,
            name_line,
            format!("name '{name}' is not an identifier ([A-Za-z0-9._-]+)"),
        ));
    }

    let wall_units = map.flag("wall_units")?;

    let mut rows = Vec::with_capacity(sections.body.len());
    for &(line, line_no) in &sections.body {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(diag(
                DiagnosticCode::ColumnCount,
                line_no,
                format!("expected 2 columns, got {}", fields.len()),
            ));
        }
        let a = parse_number(fields[0], line_no)?;
        let b = parse_number(fields[1], line_no)?;
        rows.push((a, b, line_no));
    }
    if rows.is_empty() {
        return Err(diag(DiagnosticCode::EmptyBody, 0, "file has no data rows"));
    }
    for w in rows.windows(2) {
        if w[1].0 <= w[0].0 {
            let col = if wall_units { "eta" } else { "y" };
            return Err(diag(
                DiagnosticCode::NonMonotone,
                w[1].2,
                format!(
                    "{col} = {} does not increase over previous {}",
                    w[1].0, w[0].0
                ),
            ));
        }
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|&(a, b, _)| (a, b)).collect();

    let invariant = |e: Error| match e {
        Error::InvalidRun(msg) => diag(DiagnosticCode::InvariantViolation, 0, msg),
        Error::NonPositive { what, value } => diag(
            DiagnosticCode::InvariantViolation,
            0,
            format!("{what} must be positive, got {value}"),
        ),
        other => diag(DiagnosticCode::InvariantViolation, 0, other.to_string()),
    };

    if wall_units {
        let mut profile = DimensionlessProfile::new(points).map_err(invariant)?;
        let u_star = map.number("u_star")?;
        let u_inf = map.number("U_inf")?;
        let nu = map.number("nu")?;
        let re_theta = map.number("re_theta")?;
        for (key, value) in [
            ("u_star", u_star),
            ("U_inf", u_inf),
            ("nu", nu),
            ("re_theta", re_theta),
        ] {
            if let Some(v) = value {
                if !crate::model::positive_finite(v) {
                    return Err(diag(
                        DiagnosticCode::InvariantViolation,
                        0,
                        format!("{key} must be positive, got {v}"),
                    ));
                }
            }
        }
        if let (Some(us), Some(ui)) = (u_star, u_inf) {
            profile = profile.with_phi_freestream(ui / us).map_err(invariant)?;
        }
        Ok(ParsedRun::WallUnits(WallUnitsRun {
            name: name.to_string(),
            profile,
            u_star,
            u_inf,
            nu,
            re_theta,
        }))
    } else {
        let meta = RunMeta {
            u_star: map.required_number("u_star")?,
            u_inf: map.required_number("U_inf")?,
            nu: map.required_number("nu")?,
            re_theta: map.number("re_theta")?,
            tau: map.number("tau")?,
            rho: map.number("rho")?,
            theta: map.number("theta")?,
        };
        let run = Run::new(name, points, meta).map_err(invariant)?;
        Ok(ParsedRun::Dimensional(run))
    }
}

/// Render a dimensional run in the run-file format. Full float precision;
/// parses back to an identical run.
pub fn write_run_file(run: &Run) -> String {
    let meta = run.meta();
    let mut out = String::new();
    let _ = writeln!(out, "name = {}", run.name());
    let _ = writeln!(out, "u_star = {}", meta.u_star);
    let _ = writeln!(out, "U_inf = {}", meta.u_inf);
    let _ = writeln!(out, "nu = {}", meta.nu);
    for (key, value) in [
        ("re_theta", meta.re_theta),
        ("theta", meta.theta),
        ("tau", meta.tau),
        ("rho", meta.rho),
    ] {
        if let Some(v) = value {
            let _ = writeln!(out, "{key} = {v}");
        }
    }
    out.push('\n');
    for &(y, u) in run.points() {
        let _ = writeln!(out, "{y} {u}");
    }
    out
}

/// Render a wall-units profile in the run-file format.
pub fn write_wall_units_file(name: &str, profile: &DimensionlessProfile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name = {name}");
    let _ = writeln!(out, "wall_units = true");
    out.push('\n');
    for &(eta, phi) in profile.points() {
        let _ = writeln!(out, "{eta} {phi}");
    }
    out
}

const CONFIG_KEYS: [&str; 4] = ["eta_min", "frac_u_max", "min_seg_points", "exponent_tol"];

/// Parse a fit-config file: `key = value` lines mirroring [`FitConfig`],
/// missing keys keep their defaults.
pub fn parse_fit_config(bytes: &[u8]) -> ParseResult<FitConfig> {
    let text = decode(bytes)?;
    let sections = split_sections(text)?;
    if let Some(&(line, line_no)) = sections.body.first() {
        return Err(diag(
            DiagnosticCode::MalformedHeader,
            line_no,
            format!("config files have no data rows, got '{line}'"),
        ));
    }
    let map = HeaderMap::build(&sections.header, &CONFIG_KEYS)?;
    let mut config = FitConfig::default();
    if let Some(v) = map.number("eta_min")? {
        config.eta_min = v;
    }
    if let Some(v) = map.number("frac_u_max")? {
        config.frac_u_max = v;
    }
    if let Some(v) = map.count("min_seg_points", "min_seg_points")? {
        config.min_seg_points = v;
    }
    if let Some(v) = map.number("exponent_tol")? {
        config.exponent_tol = v;
    }
    config
        .validate()
        .map_err(|e| diag(DiagnosticCode::InvalidValue, 0, e.to_string()))?;
    Ok(config)
}

/// A synth-spec file evaluated into a generation job.
#[derive(Debug, Clone)]
pub enum SynthJob {
    TwoLayer {
        spec: SynthSpec,
        count: usize,
    },
    SingleLaw {
        name: String,
        law: PowerLaw,
        eta_lo: f64,
        eta_hi: f64,
        n_points: usize,
        noise_sigma: f64,
        seed: u64,
        count: usize,
    },
}

const SPEC_KEYS: [&str; 17] = [
    "kind",
    "name",
    "count",
    "ln_re",
    "eta_star",
    "beta",
    "eta_lo",
    "eta_hi",
    "n_points",
    "noise_sigma",
    "seed",
    "u_star_over_u_inf",
    "nu",
    "u_star",
    "re_theta",
    "prefactor",
    "exponent",
];

/// Parse a synth-spec file. `kind` selects the generator (`two_layer`,
/// the default, or `single_law`); unset keys fall back to the generator
/// defaults; `count` replicates the run with consecutive seeds.
pub fn parse_synth_spec(bytes: &[u8]) -> ParseResult<SynthJob> {
    let text = decode(bytes)?;
    let sections = split_sections(text)?;
    if let Some(&(line, line_no)) = sections.body.first() {
        return Err(diag(
            DiagnosticCode::MalformedHeader,
            line_no,
            format!("spec files have no data rows, got '{line}'"),
        ));
    }
    let map = HeaderMap::build(&sections.header, &SPEC_KEYS)?;
    let kind = map.raw("kind").map(|(v, _)| v).unwrap_or("two_layer");
    let count = map.count("count", "count")?.unwrap_or(1).max(1);
    let name = map.raw("name").map(|(v, l)| (v.to_string(), l));
    if let Some((ref n, line)) = name {
        if !is_identifier(n) {
            return Err(diag(
                DiagnosticCode::InvalidValue,
                line,
                format!("name '{n}' is not an identifier"),
            ));
        }
    }
    let seed = match map.raw("seed") {
        None => 0,
        Some((value, line)) => value.parse::<u64>().map_err(|_| {
            diag(
                DiagnosticCode::MalformedNumber,
                line,
                format!("seed '{value}' is not a non-negative integer"),
            )
        })?,
    };

    match kind {
        "two_layer" => {
            let mut spec = SynthSpec {
                name: name.map(|(n, _)| n),
                seed,
                ..SynthSpec::default()
            };
            if let Some(v) = map.number("ln_re")? {
                spec.ln_re = v;
            }
            if let Some(v) = map.number("eta_star")? {
                spec.eta_star = v;
            }
            if let Some(v) = map.number("beta")? {
                spec.beta = v;
            }
            if let Some(v) = map.number("eta_lo")? {
                spec.eta_lo = v;
            }
            if let Some(v) = map.number("eta_hi")? {
                spec.eta_hi = v;
            }
            if let Some(v) = map.count("n_points", "n_points")? {
                spec.n_points = v;
            }
            if let Some(v) = map.number("noise_sigma")? {
                spec.noise_sigma = v;
            }
            if let Some(v) = map.number("u_star_over_u_inf")? {
                spec.u_star_over_u_inf = v;
            }
            if let Some(v) = map.number("nu")? {
                spec.nu = v;
            }
            if let Some(v) = map.number("u_star")? {
                spec.u_star = v;
            }
            spec.re_theta = map.number("re_theta")?;
            spec.validate()
                .map_err(|e| diag(DiagnosticCode::InvalidValue, 0, e.to_string()))?;
            Ok(SynthJob::TwoLayer { spec, count })
        }
        "single_law" => {
            let prefactor = map.required_number("prefactor")?;
            let exponent = map.required_number("exponent")?;
            let law = PowerLaw::new(prefactor, exponent)
                .map_err(|e| diag(DiagnosticCode::InvalidValue, 0, e.to_string()))?;
            Ok(SynthJob::SingleLaw {
                name: name.map(|(n, _)| n).unwrap_or_else(|| "single".to_string()),
                law,
                eta_lo: map.number("eta_lo")?.unwrap_or(30.0),
                eta_hi: map.number("eta_hi")?.unwrap_or(3000.0),
                n_points: map.count("n_points", "n_points")?.unwrap_or(100),
                noise_sigma: map.number("noise_sigma")?.unwrap_or(0.0),
                seed,
                count,
            })
        }
        other => Err(diag(
            DiagnosticCode::InvalidValue,
            map.raw("kind").map(|(_, l)| l).unwrap_or(0),
            format!("kind must be two_layer or single_law, got '{other}'"),
        )),
    }
}
