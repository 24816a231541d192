//! Segmented power-law regression: recovers the two scaling laws and their
//! breakpoint from an `(eta, phi)` profile.
//!
//! Both laws are straight lines in lg-lg coordinates, so each candidate
//! segmentation is scored by ordinary least squares on `lg phi` vs `lg eta`
//! and the breakpoint is found by exhaustive scan. The two segments are not
//! constrained to meet at the data breakpoint; the interface `eta*` comes
//! from the unconstrained laws themselves.

use crate::error::{Error, Result};
use crate::model::{
    interface_eta_with_tol, positive_finite, DimensionlessProfile, PowerLaw, DEFAULT_EXPONENT_TOL,
};

/// Fitting configuration.
///
/// `eta_min` excludes the viscous sublayer, `frac_u_max` excludes the
/// saturated free-stream plateau (points with `u/U_inf` above it), and
/// `min_seg_points` is the smallest segment either layer may keep.
#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    pub eta_min: f64,
    pub frac_u_max: f64,
    pub min_seg_points: usize,
    pub exponent_tol: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            eta_min: 30.0,
            frac_u_max: 0.99,
            min_seg_points: 5,
            exponent_tol: DEFAULT_EXPONENT_TOL,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        if !positive_finite(self.eta_min) {
            return Err(Error::NonPositive {
                what: "eta_min",
                value: self.eta_min,
            });
        }
        if !(self.frac_u_max > 0.0 && self.frac_u_max <= 1.0) {
            return Err(Error::InvalidRun(format!(
                "frac_u_max = {} outside (0, 1]",
                self.frac_u_max
            )));
        }
        if self.min_seg_points < 3 {
            return Err(Error::InvalidRun(format!(
                "min_seg_points = {} below 3",
                self.min_seg_points
            )));
        }
        if !positive_finite(self.exponent_tol) {
            return Err(Error::NonPositive {
                what: "exponent_tol",
                value: self.exponent_tol,
            });
        }
        Ok(())
    }
}

/// Diagnostic flags a fit can raise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FitFlag {
    /// The two fitted exponents agree within tolerance; no interface exists.
    NoDistinctLayers,
    /// The interface fell outside the range of retained data.
    EtaStarOutOfRange,
    /// The profile contains points at or above the free-stream velocity.
    FreeStreamOvershoot,
}

impl FitFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            FitFlag::NoDistinctLayers => "NO_DISTINCT_LAYERS",
            FitFlag::EtaStarOutOfRange => "ETA_STAR_OUT_OF_RANGE",
            FitFlag::FreeStreamOvershoot => "FREE_STREAM_OVERSHOOT",
        }
    }
}

impl std::fmt::Display for FitFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of a two-layer fit.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLayerFit {
    /// Law fitted to the layer adjacent to the viscous sublayer.
    pub wall_law: PowerLaw,
    /// Law fitted to the layer adjacent to the free stream.
    pub outer_law: PowerLaw,
    /// Index (into the retained points) of the last point in the wall layer.
    pub break_index: usize,
    /// Interface of the two fitted laws; absent when they are parallel.
    pub eta_star: Option<f64>,
    /// Coefficient of determination of the wall segment, in lg-lg space.
    pub r2_wall: f64,
    /// Coefficient of determination of the outer segment, in lg-lg space.
    pub r2_outer: f64,
    /// Summed squared lg-residuals over both segments.
    pub sse_total: f64,
    /// Diagnostic flags, sorted and deduplicated.
    pub flags: Vec<FitFlag>,
    /// Range `[first, last]` of retained eta values.
    pub eta_range: (f64, f64),
    /// Number of points that survived filtering and entered the fit.
    pub n_used: usize,
}

impl TwoLayerFit {
    pub fn has_flag(&self, flag: FitFlag) -> bool {
        self.flags.contains(&flag)
    }
}

/// (intercept, slope, r2, sse) of one segment in lg-lg space.
type OlsStats = (f64, f64, f64, f64);

/// OLS of `lg phi` on `lg eta` over already-log-transformed data.
fn ols_lg(lx: &[f64], ly: &[f64]) -> Result<OlsStats> {
    let n = lx.len();
    if n < 2 {
        return Err(Error::InsufficientData { needed: 2, got: n });
    }
    let nf = n as f64;
    let mx = lx.iter().sum::<f64>() / nf;
    let my = ly.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let dx = lx[i] - mx;
        let dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        // Degenerate abscissa: every eta identical.
        return Err(Error::InsufficientData { needed: 2, got: 1 });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut sse = 0.0;
    for i in 0..n {
        let r = ly[i] - (intercept + slope * lx[i]);
        sse += r * r;
    }
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok((intercept, slope, r2, sse))
}

/// Ordinary least squares of `lg phi` on `lg eta`.
///
/// Returns the power law `phi = 10^intercept * eta^slope` together with the
/// coefficient of determination and the summed squared residuals, both in
/// lg space.
pub fn loglog_ols(points: &[(f64, f64)]) -> Result<(PowerLaw, f64, f64)> {
    if points.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: points.len(),
        });
    }
    for &(eta, phi) in points {
        if !positive_finite(eta) {
            return Err(Error::NonPositive {
                what: "eta",
                value: eta,
            });
        }
        if !positive_finite(phi) {
            return Err(Error::NonPositive {
                what: "phi",
                value: phi,
            });
        }
    }
    let lx: Vec<f64> = points.iter().map(|p| p.0.log10()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.log10()).collect();
    let (intercept, slope, r2, sse) = ols_lg(&lx, &ly)?;
    Ok((PowerLaw::new(10.0_f64.powf(intercept), slope)?, r2, sse))
}

/// Fit the two-layer structure to a profile.
///
/// Points below `eta_min` and points above the `frac_u_max` free-stream
/// fraction are excluded, then every breakpoint that leaves at least
/// `min_seg_points` on each side is scored by the summed lg-lg OLS residual
/// of the two segments. The minimum wins; ties go to the smallest index.
pub fn fit_two_layer(profile: &DimensionlessProfile, config: &FitConfig) -> Result<TwoLayerFit> {
    config.validate()?;

    let mut flags = Vec::new();
    let phi_cap = profile.phi_freestream().map(|p| (p, config.frac_u_max * p));
    if let Some((phi_inf, _)) = phi_cap {
        if profile.points().iter().any(|&(_, phi)| phi >= phi_inf) {
            flags.push(FitFlag::FreeStreamOvershoot);
        }
    }

    let retained: Vec<(f64, f64)> = profile
        .points()
        .iter()
        .copied()
        .filter(|&(eta, phi)| eta >= config.eta_min && phi_cap.is_none_or(|(_, cap)| phi <= cap))
        .collect();

    let n = retained.len();
    let msp = config.min_seg_points;
    if n < 2 * msp {
        return Err(Error::InsufficientData {
            needed: 2 * msp,
            got: n,
        });
    }

    let lx: Vec<f64> = retained.iter().map(|p| p.0.log10()).collect();
    let ly: Vec<f64> = retained.iter().map(|p| p.1.log10()).collect();

    // Exhaustive scan over the last wall-layer index.
    let mut best: Option<(f64, usize, OlsStats, OlsStats)> = None;
    for k in (msp - 1)..=(n - msp - 1) {
        let wall = ols_lg(&lx[..=k], &ly[..=k])?;
        let outer = ols_lg(&lx[k + 1..], &ly[k + 1..])?;
        let total = wall.3 + outer.3;
        if best.as_ref().is_none_or(|b| total < b.0) {
            best = Some((total, k, wall, outer));
        }
    }
    let (sse_total, break_index, wall, outer) =
        best.expect("scan range is nonempty when n >= 2*min_seg_points");

    let wall_law = PowerLaw::new(10.0_f64.powf(wall.0), wall.1)?;
    let outer_law = PowerLaw::new(10.0_f64.powf(outer.0), outer.1)?;

    let eta_range = (retained[0].0, retained[n - 1].0);
    let eta_star = match interface_eta_with_tol(&wall_law, &outer_law, config.exponent_tol) {
        Ok(es) => {
            if es < eta_range.0 || es > eta_range.1 {
                flags.push(FitFlag::EtaStarOutOfRange);
            }
            Some(es)
        }
        Err(Error::NoIntersection { .. }) => {
            flags.push(FitFlag::NoDistinctLayers);
            None
        }
        Err(e) => return Err(e),
    };

    flags.sort();
    flags.dedup();

    Ok(TwoLayerFit {
        wall_law,
        outer_law,
        break_index,
        eta_star,
        r2_wall: wall.2,
        r2_outer: outer.2,
        sse_total,
        flags,
        eta_range,
        n_used: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::wall_law_from_re;
    use proptest::prelude::*;

    fn profile(points: Vec<(f64, f64)>) -> DimensionlessProfile {
        DimensionlessProfile::new(points).unwrap()
    }

    fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn ols_two_points_exact() {
        let (law, r2, sse) = loglog_ols(&[(1.0, 2.0), (10.0, 20.0)]).unwrap();
        assert!((law.prefactor() - 2.0).abs() < 1e-14);
        assert!((law.exponent() - 1.0).abs() < 1e-14);
        assert_eq!(r2, 1.0);
        assert!(sse < 1e-28);
    }

    #[test]
    fn ols_recovers_exact_power_law() {
        let pts: Vec<(f64, f64)> = log_spaced(1.0, 1e4, 50)
            .into_iter()
            .map(|eta| (eta, 3.0 * eta.powf(0.5)))
            .collect();
        let (law, r2, _) = loglog_ols(&pts).unwrap();
        assert!((law.prefactor() - 3.0).abs() < 1e-12 * 3.0);
        assert!((law.exponent() - 0.5).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ols_insufficient_data() {
        assert!(matches!(
            loglog_ols(&[(5.0, 7.0)]),
            Err(Error::InsufficientData { .. })
        ));
        // Degenerate abscissa.
        assert!(matches!(
            loglog_ols(&[(5.0, 7.0), (5.0, 8.0)]),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn ols_rejects_nonpositive() {
        assert!(loglog_ols(&[(1.0, 2.0), (-1.0, 3.0)]).is_err());
        assert!(loglog_ols(&[(1.0, 0.0), (2.0, 3.0)]).is_err());
    }

    fn two_layer_points(
        ln_re: f64,
        eta_star: f64,
        beta: f64,
        lo: f64,
        hi: f64,
        n: usize,
    ) -> (Vec<(f64, f64)>, PowerLaw, PowerLaw) {
        let wall = wall_law_from_re(ln_re).unwrap();
        let b = wall.prefactor() * eta_star.powf(wall.exponent() - beta);
        let outer = PowerLaw::new(b, beta).unwrap();
        let pts = log_spaced(lo, hi, n)
            .into_iter()
            .map(|eta| {
                let law = if eta <= eta_star { &wall } else { &outer };
                (eta, law.eval(eta).unwrap())
            })
            .collect();
        (pts, wall, outer)
    }

    #[test]
    fn recovers_noiseless_two_layer() {
        let (pts, wall, outer) = two_layer_points(10.0, 256.0, 0.08, 40.0, 4000.0, 200);
        let fit = fit_two_layer(&profile(pts), &FitConfig::default()).unwrap();
        assert!((fit.wall_law.exponent() - wall.exponent()).abs() < 1e-9);
        assert!((fit.outer_law.exponent() - outer.exponent()).abs() < 1e-9);
        let es = fit.eta_star.unwrap();
        assert!((es - 256.0).abs() / 256.0 < 1e-6, "eta* = {es}");
        assert!(fit.flags.is_empty(), "flags = {:?}", fit.flags);
        assert!(fit.sse_total <= 1e-18);
        assert!((fit.r2_wall - 1.0).abs() < 1e-12);
        assert!((fit.r2_outer - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_law_flags_no_distinct_layers() {
        let pts: Vec<(f64, f64)> = log_spaced(30.0, 3000.0, 100)
            .into_iter()
            .map(|eta| (eta, 2.0 * eta.powf(0.15)))
            .collect();
        let fit = fit_two_layer(&profile(pts), &FitConfig::default()).unwrap();
        assert!(fit.has_flag(FitFlag::NoDistinctLayers));
        assert!(fit.eta_star.is_none());
        assert!((fit.wall_law.exponent() - 0.15).abs() < 1e-9);
        assert!((fit.outer_law.exponent() - 0.15).abs() < 1e-9);
    }

    #[test]
    fn too_few_points_is_an_error() {
        let pts: Vec<(f64, f64)> = log_spaced(30.0, 300.0, 8)
            .into_iter()
            .map(|eta| (eta, 2.0 * eta.powf(0.15)))
            .collect();
        let err = fit_two_layer(&profile(pts), &FitConfig::default());
        assert!(matches!(
            err,
            Err(Error::InsufficientData { needed: 10, got: 8 })
        ));
    }

    #[test]
    fn eta_min_filter_applies() {
        // 10 points below eta_min plus 12 above: only the 12 survive, which
        // still satisfies 2 * min_seg_points = 10.
        let mut pts: Vec<(f64, f64)> = log_spaced(1.0, 20.0, 10)
            .into_iter()
            .map(|eta| (eta, 5.0 * eta.powf(0.5)))
            .collect();
        pts.extend(
            log_spaced(40.0, 400.0, 12)
                .into_iter()
                .map(|eta| (eta, 2.0 * eta.powf(0.15))),
        );
        let fit = fit_two_layer(&profile(pts), &FitConfig::default()).unwrap();
        assert_eq!(fit.n_used, 12);
        assert!(fit.eta_range.0 >= 30.0);
    }

    #[test]
    fn free_stream_filter_and_overshoot_flag() {
        let (mut pts, _, _) = two_layer_points(10.0, 256.0, 0.08, 40.0, 4000.0, 60);
        // Plateau level above every generated point (max phi is ~23.7), so
        // only the two appended points are affected by the cap.
        let phi_inf = 30.0;
        let last_eta = pts.last().unwrap().0;
        pts.push((last_eta * 1.2, phi_inf * 0.999));
        pts.push((last_eta * 1.4, phi_inf * 1.001));
        let p = DimensionlessProfile::new(pts)
            .unwrap()
            .with_phi_freestream(phi_inf)
            .unwrap();
        let fit = fit_two_layer(&p, &FitConfig::default()).unwrap();
        assert!(fit.has_flag(FitFlag::FreeStreamOvershoot));
        assert_eq!(fit.n_used, 60); // both plateau points dropped by the 0.99 cap
    }

    #[test]
    fn breakpoint_is_optimal() {
        // Noisy data so segment SSEs are all well away from zero.
        let spec = crate::synth::SynthSpec {
            ln_re: 9.0,
            eta_star: 150.0,
            beta: 0.22,
            eta_lo: 40.0,
            eta_hi: 2000.0,
            n_points: 80,
            noise_sigma: 0.02,
            seed: 11,
            // Plateau far above the profile so no point is capped and the
            // re-scan below sees the same retained set.
            u_star_over_u_inf: 0.01,
            ..crate::synth::SynthSpec::default()
        };
        let (run, _) = crate::synth::gen_two_layer(&spec).unwrap();
        let p = crate::model::nondimensionalize(&run);
        let cfg = FitConfig::default();
        let fit = fit_two_layer(&p, &cfg).unwrap();
        // Independent re-scan through the public OLS entry point.
        let retained: Vec<(f64, f64)> = p
            .points()
            .iter()
            .copied()
            .filter(|&(eta, _)| eta >= cfg.eta_min)
            .collect();
        let n = retained.len();
        for k in (cfg.min_seg_points - 1)..=(n - cfg.min_seg_points - 1) {
            let (_, _, s1) = loglog_ols(&retained[..=k]).unwrap();
            let (_, _, s2) = loglog_ols(&retained[k + 1..]).unwrap();
            assert!(s1 + s2 >= fit.sse_total, "k = {k} beats chosen breakpoint");
        }
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = FitConfig {
            min_seg_points: 2,
            ..FitConfig::default()
        };
        let (pts, _, _) = two_layer_points(10.0, 256.0, 0.08, 40.0, 4000.0, 50);
        assert!(fit_two_layer(&profile(pts), &cfg).is_err());
        let cfg = FitConfig {
            frac_u_max: 1.5,
            ..FitConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = FitConfig {
            eta_min: 0.0,
            ..FitConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    proptest! {
        #[test]
        fn raising_eta_min_never_retains_more(
            lo in 1.0_f64..50.0,
            span in 1.5_f64..100.0,
            n in 12usize..80,
            cut1 in 0.0_f64..200.0,
            extra in 0.0_f64..200.0,
        ) {
            let pts: Vec<(f64, f64)> = log_spaced(lo, lo * span, n)
                .into_iter()
                .map(|eta| (eta, 2.0 * eta.powf(0.2)))
                .collect();
            let p = profile(pts);
            let count = |eta_min: f64| {
                p.points().iter().filter(|&&(eta, _)| eta >= eta_min).count()
            };
            prop_assert!(count(cut1 + extra) <= count(cut1));
        }

        #[test]
        fn noiseless_two_layer_roundtrip(
            ln_re in 8.0_f64..12.0,
            eta_star in 100.0_f64..600.0,
            beta_off in 0.03_f64..0.1,
            flip in proptest::bool::ANY,
        ) {
            let wall = wall_law_from_re(ln_re).unwrap();
            let beta = if flip {
                wall.exponent() + beta_off
            } else {
                wall.exponent() - beta_off
            };
            let (pts, _, _) = two_layer_points(ln_re, eta_star, beta, 40.0, 4000.0, 120);
            let fit = fit_two_layer(&profile(pts), &FitConfig::default()).unwrap();
            prop_assert!((fit.wall_law.exponent() - wall.exponent()).abs() < 1e-9);
            prop_assert!((fit.outer_law.exponent() - beta).abs() < 1e-9);
            prop_assert!(fit.sse_total <= 1e-18);
            let es = fit.eta_star.unwrap();
            prop_assert!((es - eta_star).abs() / eta_star < 1e-6);
        }
    }
}
