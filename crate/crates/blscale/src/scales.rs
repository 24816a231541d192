//! Reynolds numbers and length scales derived from a two-layer fit.
//!
//! The fitted wall law is matched against the pipe-flow form
//! `phi = (ln Re / sqrt(3) + 5/2) eta^(3/(2 ln Re))`, giving two independent
//! estimates of ln Re:
//!
//! ```text
//! ln Re_1 = sqrt(3) (A - 5/2) ,    ln Re_2 = 3 / (2 alpha) ,
//! ```
//!
//! whose mean is the effective ln Re and whose relative gap `delta` is the
//! consistency diagnostic. The two length scales are the wall-region
//! thickness `lambda = eta* nu / u*` and the effective scale
//! `Lambda = Re nu / U`; their ratio is reported as
//! `lg(Lambda/lambda) = (lg Re - lg eta*) + lg(u*/U)`.

use crate::error::{Error, Result};
use crate::model::{positive_finite, Run, WALL_PREFACTOR_OFFSET};
use crate::segfit::TwoLayerFit;

/// Reynolds numbers and length scales for one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleReport {
    /// ln Re solved from the wall-law prefactor.
    pub ln_re1: f64,
    /// ln Re solved from the wall-law exponent.
    pub ln_re2: f64,
    /// Relative gap |ln Re_1 - ln Re_2| / ln Re.
    pub delta: f64,
    /// Effective ln Re, the mean of the two solutions.
    pub ln_re_eff: f64,
    /// Wall-region thickness lambda = eta* nu / u* (m).
    pub lambda_wall: f64,
    /// Effective length scale Lambda = Re nu / U (m).
    pub lambda_cap: f64,
    /// lg(Lambda / lambda).
    pub lg_ratio: f64,
    /// Velocity ratio u*/U from run metadata.
    pub u_star_over_u_inf: f64,
}

/// Solve `ln Re_1` from the wall-law prefactor: `sqrt(3) (A - 5/2)`.
pub fn re1_from_prefactor(prefactor: f64) -> Result<f64> {
    if prefactor.is_nan() || prefactor <= WALL_PREFACTOR_OFFSET {
        return Err(Error::NonphysicalPrefactor { prefactor });
    }
    Ok(3.0_f64.sqrt() * (prefactor - WALL_PREFACTOR_OFFSET))
}

/// Solve `ln Re_2` from the wall-law exponent: `3 / (2 alpha)`.
pub fn re2_from_exponent(exponent: f64) -> Result<f64> {
    if !positive_finite(exponent) {
        return Err(Error::NonphysicalExponent { exponent });
    }
    Ok(3.0 / (2.0 * exponent))
}

/// Combine the two ln Re estimates into the effective value and the
/// relative gap `delta = |ln Re_1 - ln Re_2| / ln Re`.
pub fn effective_re(ln_re1: f64, ln_re2: f64) -> Result<(f64, f64)> {
    if !positive_finite(ln_re1) {
        return Err(Error::NonPositive {
            what: "ln_re1",
            value: ln_re1,
        });
    }
    if !positive_finite(ln_re2) {
        return Err(Error::NonPositive {
            what: "ln_re2",
            value: ln_re2,
        });
    }
    let eff = (ln_re1 + ln_re2) / 2.0;
    Ok((eff, (ln_re1 - ln_re2).abs() / eff))
}

/// Compute the scale report for a fitted run.
pub fn compute_scales(fit: &TwoLayerFit, run: &Run) -> Result<ScaleReport> {
    let meta = run.meta();
    compute_scales_from_meta(fit, meta.u_star, meta.u_inf, meta.nu)
}

/// Compute the scale report from a fit and bare dimensional metadata.
pub fn compute_scales_from_meta(
    fit: &TwoLayerFit,
    u_star: f64,
    u_inf: f64,
    nu: f64,
) -> Result<ScaleReport> {
    for (what, value) in [("u_star", u_star), ("U_inf", u_inf), ("nu", nu)] {
        if !positive_finite(value) {
            return Err(Error::NonPositive { what, value });
        }
    }
    let eta_star = fit.eta_star.ok_or(Error::NoInterface)?;
    let ln_re1 = re1_from_prefactor(fit.wall_law.prefactor())?;
    let ln_re2 = re2_from_exponent(fit.wall_law.exponent())?;
    let (ln_re_eff, delta) = effective_re(ln_re1, ln_re2)?;
    let re = ln_re_eff.exp();
    let ratio = u_star / u_inf;
    Ok(ScaleReport {
        ln_re1,
        ln_re2,
        delta,
        ln_re_eff,
        lambda_wall: eta_star * nu / u_star,
        lambda_cap: re * nu / u_inf,
        lg_ratio: (re.log10() - eta_star.log10()) + ratio.log10(),
        u_star_over_u_inf: ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{wall_law_from_re, PowerLaw};
    use crate::segfit::{fit_two_layer, FitConfig};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn re1_values() {
        assert!(rel(re1_from_prefactor(8.273502691896258).unwrap(), 10.0) < 1e-12);
        let unit = 2.5 + 1.0 / 3.0_f64.sqrt();
        assert!(rel(re1_from_prefactor(unit).unwrap(), 1.0) < 1e-12);
        assert!(matches!(
            re1_from_prefactor(2.5),
            Err(Error::NonphysicalPrefactor { .. })
        ));
    }

    #[test]
    fn re2_values() {
        assert!(rel(re2_from_exponent(0.15).unwrap(), 10.0) < 1e-13);
        assert_eq!(re2_from_exponent(1.5).unwrap(), 1.0);
        assert!(matches!(
            re2_from_exponent(0.0),
            Err(Error::NonphysicalExponent { .. })
        ));
        assert!(re2_from_exponent(-0.1).is_err());
    }

    #[test]
    fn effective_re_values() {
        let (eff, delta) = effective_re(10.2, 9.8).unwrap();
        assert!(rel(eff, 10.0) < 1e-14);
        assert!(rel(delta, 0.04) < 1e-12);
        let (eff, delta) = effective_re(10.0, 10.0).unwrap();
        assert_eq!(eff, 10.0);
        assert_eq!(delta, 0.0);
        assert!(effective_re(0.0, 10.0).is_err());
        assert!(effective_re(10.0, -1.0).is_err());
    }

    #[test]
    fn inverse_pair_roundtrip() {
        for i in 0..50 {
            let ln_re = 5.0 + 10.0 * i as f64 / 49.0;
            let law = wall_law_from_re(ln_re).unwrap();
            assert!(rel(re1_from_prefactor(law.prefactor()).unwrap(), ln_re) < 1e-12);
            assert!(rel(re2_from_exponent(law.exponent()).unwrap(), ln_re) < 1e-12);
        }
    }

    fn fit_with(eta_star: Option<f64>, wall: PowerLaw) -> TwoLayerFit {
        TwoLayerFit {
            wall_law: wall,
            outer_law: PowerLaw::new(1.0, 0.05).unwrap(),
            break_index: 0,
            eta_star,
            r2_wall: 1.0,
            r2_outer: 1.0,
            sse_total: 0.0,
            flags: Vec::new(),
            eta_range: (30.0, 3000.0),
            n_used: 0,
        }
    }

    #[test]
    fn scale_report_oracle_values() {
        // lnRe = 10, eta* = 256, nu = 1.5e-5, u* = 0.5, u*/U = 0.035.
        let wall = wall_law_from_re(10.0).unwrap();
        let fit = fit_with(Some(256.0), wall);
        let u_star = 0.5;
        let u_inf = u_star / 0.035;
        let rep = compute_scales_from_meta(&fit, u_star, u_inf, 1.5e-5).unwrap();
        assert!(rel(rep.ln_re_eff, 10.0) < 1e-12);
        assert!(rep.delta < 1e-12);
        assert!(rel(rep.lambda_wall, 7.68e-3) < 1e-12);
        // Independently computed: Lambda = e^10 * 1.5e-5 / (0.5/0.035).
        assert!(rel(rep.lambda_cap, 2.3127789084547052e-2) < 1e-12);
        // Independently computed: lg(0.035 * e^10 / 256).
        assert!(rel(rep.lg_ratio, 0.47877289807094435) < 1e-12);
        // Eq-form identity: lg_ratio equals lg(Lambda/lambda).
        assert!((rep.lg_ratio - (rep.lambda_cap / rep.lambda_wall).log10()).abs() < 1e-12);
    }

    #[test]
    fn scale_report_lambda_example() {
        // Spec-style check with U = 14.2857 directly.
        let wall = wall_law_from_re(10.0).unwrap();
        let fit = fit_with(Some(256.0), wall);
        let rep = compute_scales_from_meta(&fit, 0.5, 14.2857, 1.5e-5).unwrap();
        assert!(rel(rep.lambda_cap, 0.023127812212359265) < 1e-6);
    }

    #[test]
    fn missing_interface_is_an_error() {
        let wall = wall_law_from_re(10.0).unwrap();
        let fit = fit_with(None, wall);
        assert!(matches!(
            compute_scales_from_meta(&fit, 0.5, 14.0, 1.5e-5),
            Err(Error::NoInterface)
        ));
    }

    #[test]
    fn nonphysical_fit_rejected() {
        let fit = fit_with(Some(256.0), PowerLaw::new(2.0, 0.15).unwrap());
        assert!(compute_scales_from_meta(&fit, 0.5, 14.0, 1.5e-5).is_err());
        let fit = fit_with(Some(256.0), PowerLaw::new(8.0, -0.1).unwrap());
        assert!(compute_scales_from_meta(&fit, 0.5, 14.0, 1.5e-5).is_err());
    }

    #[test]
    fn scales_linear_in_nu() {
        let wall = wall_law_from_re(10.0).unwrap();
        let fit = fit_with(Some(256.0), wall);
        let a = compute_scales_from_meta(&fit, 0.5, 14.0, 1.5e-5).unwrap();
        let b = compute_scales_from_meta(&fit, 0.5, 14.0, 3.0e-5).unwrap();
        assert!(rel(b.lambda_wall, 2.0 * a.lambda_wall) < 1e-12);
        assert!(rel(b.lambda_cap, 2.0 * a.lambda_cap) < 1e-12);
        assert!((a.lg_ratio - b.lg_ratio).abs() < 1e-12);
    }

    #[test]
    fn delta_zero_for_noiseless_wall_law_profile() {
        // A profile generated exactly from the wall law fits back to a wall
        // law whose two ln Re solutions coincide.
        let ln_re = 9.3;
        let wall = wall_law_from_re(ln_re).unwrap();
        let outer = PowerLaw::new(
            wall.prefactor() * 300.0_f64.powf(wall.exponent() - 0.08),
            0.08,
        )
        .unwrap();
        let pts: Vec<(f64, f64)> = (0..150)
            .map(|i| {
                let eta = 40.0 * (3000.0_f64 / 40.0).powf(i as f64 / 149.0);
                let law = if eta <= 300.0 { &wall } else { &outer };
                (eta, law.eval(eta).unwrap())
            })
            .collect();
        let p = crate::model::DimensionlessProfile::new(pts).unwrap();
        let fit = fit_two_layer(&p, &FitConfig::default()).unwrap();
        let rep = compute_scales_from_meta(&fit, 0.5, 14.0, 1.5e-5).unwrap();
        assert!(rep.delta < 1e-9, "delta = {}", rep.delta);
        assert!(rel(rep.ln_re_eff, ln_re) < 1e-9);
    }
}
