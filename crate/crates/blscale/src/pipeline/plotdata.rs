//! Plot-data emission: the broken-line figure as columnar text.
//!
//! One three-column table, `series lg_eta lg_phi`, holding the measured
//! points (`data`), a sampled polyline per fitted law (`wall_fit`,
//! `outer_fit`) and a single `interface` marker at `eta*`. Any plotting
//! tool that can group by the first column can draw the figure.

use std::fmt::Write as _;

use crate::model::{nondimensionalize, DimensionlessProfile, Run};
use crate::segfit::TwoLayerFit;

const POLYLINE_POINTS: usize = 64;

/// Emit plot data for a dimensional run and its fit.
pub fn emit_plotdata(run: &Run, fit: &TwoLayerFit) -> String {
    emit_plotdata_profile(run.name(), &nondimensionalize(run), fit)
}

/// Emit plot data for an already-dimensionless profile and its fit.
pub fn emit_plotdata_profile(
    name: &str,
    profile: &DimensionlessProfile,
    fit: &TwoLayerFit,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# blscale plot data");
    let _ = writeln!(out, "# run = {name}");
    let flags = if fit.flags.is_empty() {
        "-".to_string()
    } else {
        fit.flags
            .iter()
            .map(|f| f.as_str())
            .collect::<Vec<_>>()
            .join(",")
    };
    let _ = writeln!(out, "# flags = {flags}");
    match fit.eta_star {
        Some(es) => {
            let _ = writeln!(out, "# eta_star = {es}");
        }
        None => {
            let _ = writeln!(out, "# eta_star = -");
        }
    }
    let _ = writeln!(out, "# columns: series lg_eta lg_phi");

    for &(eta, phi) in profile.points() {
        let _ = writeln!(out, "data {} {}", eta.log10(), phi.log10());
    }

    let (lo, hi) = fit.eta_range;
    // Split the polylines at the interface when it lies inside the data
    // range; otherwise draw both laws across the full range.
    let split = fit.eta_star.filter(|&es| es > lo && es < hi);
    let (wall_range, outer_range) = match split {
        Some(es) => ((lo, es), (es, hi)),
        None => ((lo, hi), (lo, hi)),
    };
    for (series, law, (a, b)) in [
        ("wall_fit", &fit.wall_law, wall_range),
        ("outer_fit", &fit.outer_law, outer_range),
    ] {
        let ratio = b / a;
        for i in 0..POLYLINE_POINTS {
            let eta = a * ratio.powf(i as f64 / (POLYLINE_POINTS - 1) as f64);
            let phi = law.prefactor() * eta.powf(law.exponent());
            let _ = writeln!(out, "{series} {} {}", eta.log10(), phi.log10());
        }
    }

    if let Some(es) = fit.eta_star {
        let phi = fit.wall_law.prefactor() * es.powf(fit.wall_law.exponent());
        let _ = writeln!(out, "interface {} {}", es.log10(), phi.log10());
    }
    out
}
