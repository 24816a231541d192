//! Ingestion, per-run analysis, batch aggregation and report emission.

pub mod plotdata;
pub mod runfile;
pub mod table;

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{nondimensionalize, Run};
use crate::scales::{compute_scales_from_meta, ScaleReport};
use crate::segfit::{fit_two_layer, FitConfig, TwoLayerFit};
use crate::synth::{gen_single_law, gen_two_layer, SynthSpec};

pub use runfile::{parse_fit_config, parse_run_file, parse_synth_spec, ParsedRun, SynthJob};

/// Analyze one dimensional run: nondimensionalize, fit, compute scales.
///
/// This is the strict composition; any stage failing is an error carrying
/// the run name. Use [`analyze_parsed`] for the tolerant per-row path.
pub fn analyze_run(run: &Run, config: &FitConfig) -> Result<(TwoLayerFit, ScaleReport)> {
    let profile = nondimensionalize(run);
    let fit = fit_two_layer(&profile, config).map_err(|e| e.in_run(run.name()))?;
    let report = compute_scales_from_meta(&fit, run.meta().u_star, run.meta().u_inf, run.meta().nu)
        .map_err(|e| e.in_run(run.name()))?;
    Ok((fit, report))
}

/// Why a fitted run produced no scale report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleSkip {
    /// The fit has no interface point.
    NoInterface,
    /// The fitted wall law cannot be matched to the pipe-flow form.
    NonphysicalWallLaw,
    /// The run carries no dimensional metadata.
    MissingMetadata,
}

/// Fit a parsed run and compute scales when possible.
pub fn analyze_parsed(
    parsed: &ParsedRun,
    config: &FitConfig,
) -> Result<(TwoLayerFit, std::result::Result<ScaleReport, ScaleSkip>)> {
    let (profile, meta) = match parsed {
        ParsedRun::Dimensional(run) => {
            let m = run.meta();
            (nondimensionalize(run), Some((m.u_star, m.u_inf, m.nu)))
        }
        ParsedRun::WallUnits(w) => {
            let m = match (w.u_star, w.u_inf, w.nu) {
                (Some(us), Some(ui), Some(nu)) => Some((us, ui, nu)),
                _ => None,
            };
            (w.profile.clone(), m)
        }
    };
    let fit = fit_two_layer(&profile, config).map_err(|e| e.in_run(parsed.name()))?;
    // A fit without an interface has undefined scales no matter what
    // metadata is available.
    let scales = if fit.eta_star.is_none() {
        Err(ScaleSkip::NoInterface)
    } else {
        match meta {
            None => Err(ScaleSkip::MissingMetadata),
            Some((u_star, u_inf, nu)) => match compute_scales_from_meta(&fit, u_star, u_inf, nu) {
                Ok(rep) => Ok(rep),
                Err(Error::NoInterface) => Err(ScaleSkip::NoInterface),
                Err(Error::NonphysicalPrefactor { .. })
                | Err(Error::NonphysicalExponent { .. }) => Err(ScaleSkip::NonphysicalWallLaw),
                Err(e) => return Err(e.in_run(parsed.name())),
            },
        }
    };
    Ok((fit, scales))
}

/// Batch gates: rows outside these bounds stay in the report but are
/// excluded from the aggregate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchParams {
    pub re_theta_min: f64,
    pub delta_max: f64,
}

impl Default for BatchParams {
    fn default() -> Self {
        BatchParams {
            re_theta_min: 10000.0,
            delta_max: 0.03,
        }
    }
}

/// Machine-readable reason a run was excluded from the batch aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExclusionReason {
    Flagged,
    NonphysicalWallLaw,
    MissingMetadata,
    MissingReTheta,
    ReThetaBelowMin,
    DeltaAboveMax,
}

impl ExclusionReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExclusionReason::Flagged => "flagged",
            ExclusionReason::NonphysicalWallLaw => "nonphysical_wall_law",
            ExclusionReason::MissingMetadata => "missing_metadata",
            ExclusionReason::MissingReTheta => "missing_re_theta",
            ExclusionReason::ReThetaBelowMin => "re_theta_below_min",
            ExclusionReason::DeltaAboveMax => "delta_above_max",
        }
    }
}

impl std::fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One analyzed run in a batch summary.
#[derive(Debug, Clone)]
pub struct RunRow {
    pub name: String,
    pub re_theta: Option<f64>,
    pub fit: TwoLayerFit,
    pub scales: Option<ScaleReport>,
    pub exclusion: Option<ExclusionReason>,
}

impl RunRow {
    pub fn included(&self) -> bool {
        self.exclusion.is_none()
    }
}

/// A file that could not be parsed or fitted at all.
#[derive(Debug, Clone)]
pub struct RunFailure {
    pub file: String,
    pub error: String,
}

/// Mean and standard deviation of lg(Lambda/lambda) over included runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub lg_ratio_mean: f64,
    pub lg_ratio_std: f64,
    pub n: usize,
}

/// Batch result: per-run rows (included and excluded), per-file failures,
/// and the aggregate over included rows.
#[derive(Debug, Clone)]
pub struct BatchSummary {
    pub params: BatchParams,
    pub rows: Vec<RunRow>,
    pub failures: Vec<RunFailure>,
    pub aggregate: Option<Aggregate>,
}

impl BatchSummary {
    pub fn included_count(&self) -> usize {
        self.rows.iter().filter(|r| r.included()).count()
    }

    pub fn excluded_count(&self) -> usize {
        self.rows.len() - self.included_count()
    }
}

fn classify(
    row_fit: &TwoLayerFit,
    scales: &std::result::Result<ScaleReport, ScaleSkip>,
    re_theta: Option<f64>,
    params: &BatchParams,
) -> Option<ExclusionReason> {
    if !row_fit.flags.is_empty() {
        return Some(ExclusionReason::Flagged);
    }
    let rep = match scales {
        Ok(rep) => rep,
        Err(ScaleSkip::NonphysicalWallLaw) => return Some(ExclusionReason::NonphysicalWallLaw),
        Err(ScaleSkip::MissingMetadata) => return Some(ExclusionReason::MissingMetadata),
        // Unreachable without a NoDistinctLayers flag, but classify anyway.
        Err(ScaleSkip::NoInterface) => return Some(ExclusionReason::Flagged),
    };
    match re_theta {
        None => return Some(ExclusionReason::MissingReTheta),
        Some(rt) if rt < params.re_theta_min => return Some(ExclusionReason::ReThetaBelowMin),
        Some(_) => {}
    }
    if rep.delta > params.delta_max {
        return Some(ExclusionReason::DeltaAboveMax);
    }
    None
}

/// Analyze every run file in a directory.
///
/// Files are processed in name order; rows are sorted by run name before
/// aggregation so the reported mean does not depend on directory order.
pub fn batch_analyze(dir: &Path, config: &FitConfig, params: &BatchParams) -> Result<BatchSummary> {
    let mut paths: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            p.is_file()
                && p.file_name()
                    .and_then(|n| n.to_str())
                    .is_some_and(|n| !n.starts_with('.'))
        })
        .collect();
    paths.sort();

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for path in &paths {
        let file = path
            .file_name()
            .and_then(|n| n.to_str())
            .unwrap_or("<non-utf8>")
            .to_string();
        let bytes = match fs::read(path) {
            Ok(b) => b,
            Err(e) => {
                failures.push(RunFailure {
                    file,
                    error: e.to_string(),
                });
                continue;
            }
        };
        let parsed = match parse_run_file(&bytes) {
            Ok(p) => p,
            Err(d) => {
                failures.push(RunFailure {
                    file,
                    error: d.to_string(),
                });
                continue;
            }
        };
        match analyze_parsed(&parsed, config) {
            Ok((fit, scales)) => {
                let exclusion = classify(&fit, &scales, parsed.re_theta(), params);
                rows.push(RunRow {
                    name: parsed.name().to_string(),
                    re_theta: parsed.re_theta(),
                    scales: scales.ok(),
                    fit,
                    exclusion,
                });
            }
            Err(e) => failures.push(RunFailure {
                file,
                error: e.to_string(),
            }),
        }
    }

    if rows.is_empty() {
        return Err(Error::NoRuns(dir.to_path_buf()));
    }

    rows.sort_by(|a, b| a.name.cmp(&b.name));

    let values: Vec<f64> = rows
        .iter()
        .filter(|r| r.included())
        .filter_map(|r| r.scales.as_ref().map(|s| s.lg_ratio))
        .collect();
    let aggregate = if values.is_empty() {
        None
    } else {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64).sqrt()
        };
        Some(Aggregate {
            lg_ratio_mean: mean,
            lg_ratio_std: std,
            n,
        })
    };

    Ok(BatchSummary {
        params: *params,
        rows,
        failures,
        aggregate,
    })
}

/// Evaluate a synth job into `(file_name, contents)` pairs.
///
/// `count` replicas use consecutive seeds and seed-suffixed names.
pub fn run_synth_job(job: &SynthJob) -> Result<Vec<(String, String)>> {
    let mut files = Vec::new();
    match job {
        SynthJob::TwoLayer { spec, count } => {
            let base = spec.name.clone().unwrap_or_else(|| "synth".to_string());
            for i in 0..*count {
                let seed = spec.seed + i as u64;
                let replica = SynthSpec {
                    seed,
                    name: Some(if *count == 1 {
                        spec.run_name()
                    } else {
                        format!("{base}-s{seed}")
                    }),
                    ..spec.clone()
                };
                let (run, _) = gen_two_layer(&replica)?;
                files.push((format!("{}.run", run.name()), runfile::write_run_file(&run)));
            }
        }
        SynthJob::SingleLaw {
            name,
            law,
            eta_lo,
            eta_hi,
            n_points,
            noise_sigma,
            seed,
            count,
        } => {
            for i in 0..*count {
                let s = seed + i as u64;
                let run_name = if *count == 1 {
                    name.clone()
                } else {
                    format!("{name}-s{s}")
                };
                let profile = gen_single_law(law, *eta_lo, *eta_hi, *n_points, *noise_sigma, s)?;
                files.push((
                    format!("{run_name}.run"),
                    runfile::write_wall_units_file(&run_name, &profile),
                ));
            }
        }
    }
    Ok(files)
}
