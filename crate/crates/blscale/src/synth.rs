//! Synthetic profile generation with known ground truth.
//!
//! The forward model assembles a two-layer profile from a wall law driven
//! by `ln Re` and an outer law forced to intersect it exactly at `eta*`,
//! so every generated profile carries its true fit parameters. Noise is
//! multiplicative lognormal on phi, which becomes additive Gaussian in lg
//! space where the fitting happens.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::model::{
    positive_finite, wall_law_from_re, DimensionlessProfile, PowerLaw, Run, RunMeta,
};

/// Specification of one synthetic two-layer run.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    /// Run name; derived from the parameters when absent.
    pub name: Option<String>,
    /// Drives the wall law.
    pub ln_re: f64,
    /// Interface position in wall units.
    pub eta_star: f64,
    /// Outer-law exponent.
    pub beta: f64,
    /// Sampling range in wall units.
    pub eta_lo: f64,
    pub eta_hi: f64,
    pub n_points: usize,
    /// Lognormal sigma on phi; 0 = noiseless.
    pub noise_sigma: f64,
    pub seed: u64,
    /// Velocity ratio u*/U used to embed dimensional metadata.
    pub u_star_over_u_inf: f64,
    /// Kinematic viscosity (m^2/s).
    pub nu: f64,
    /// Friction velocity (m/s).
    pub u_star: f64,
    /// Optional momentum-thickness Reynolds number written into the run.
    pub re_theta: Option<f64>,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            name: None,
            ln_re: 10.0,
            eta_star: 256.0,
            beta: 0.08,
            eta_lo: 40.0,
            eta_hi: 4000.0,
            n_points: 200,
            noise_sigma: 0.0,
            seed: 0,
            u_star_over_u_inf: 0.035,
            nu: 1.5e-5,
            u_star: 0.5,
            re_theta: None,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("ln_re", self.ln_re),
            ("eta_lo", self.eta_lo),
            ("u_star_over_u_inf", self.u_star_over_u_inf),
            ("nu", self.nu),
            ("u_star", self.u_star),
        ];
        for (key, value) in positive {
            if !positive_finite(value) {
                return Err(Error::InvalidSpec(format!(
                    "{key} = {value} is not positive"
                )));
            }
        }
        if !(self.eta_lo < self.eta_star && self.eta_star < self.eta_hi) {
            return Err(Error::InvalidSpec(format!(
                "need eta_lo < eta_star < eta_hi, got {} / {} / {}",
                self.eta_lo, self.eta_star, self.eta_hi
            )));
        }
        if self.n_points < 10 {
            return Err(Error::InvalidSpec(format!(
                "n_points = {} below 10",
                self.n_points
            )));
        }
        if self.noise_sigma.is_nan() || self.noise_sigma < 0.0 || !self.noise_sigma.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "noise_sigma = {} is negative",
                self.noise_sigma
            )));
        }
        if let Some(rt) = self.re_theta {
            if !positive_finite(rt) {
                return Err(Error::InvalidSpec(format!(
                    "re_theta = {rt} is not positive"
                )));
            }
        }
        Ok(())
    }

    /// Name for the generated run, deterministic in the parameters.
    pub fn run_name(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => format!("synth-s{}", self.seed),
        }
    }
}

/// True parameters embedded in a generated profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundTruth {
    pub wall_law: PowerLaw,
    pub outer_law: PowerLaw,
    pub eta_star: f64,
    pub ln_re: f64,
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    debug_assert!(n >= 2 && lo > 0.0 && lo < hi);
    let ratio = hi / lo;
    (0..n)
        .map(|i| lo * ratio.powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn sample_law(
    wall: &PowerLaw,
    outer: &PowerLaw,
    eta_star: f64,
    etas: &[f64],
    noise_sigma: f64,
    seed: u64,
) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    etas.iter()
        .map(|&eta| {
            let law = if eta <= eta_star { wall } else { outer };
            let mut phi = law.eval(eta).expect("sampled eta is positive");
            if noise_sigma > 0.0 {
                let z: f64 = StandardNormal.sample(&mut rng);
                phi *= (noise_sigma * z).exp();
            }
            (eta, phi)
        })
        .collect()
}

/// Generate a dimensional two-layer run with embedded ground truth.
///
/// The outer prefactor is derived as `B = A eta*^(alpha - beta)` so the two
/// laws intersect exactly at `eta*`. The dimensional run is reconstructed
/// via `y = eta nu / u*`, `u = phi u*`, `U = u* / (u*/U)`.
pub fn gen_two_layer(spec: &SynthSpec) -> Result<(Run, GroundTruth)> {
    spec.validate()?;
    let wall = wall_law_from_re(spec.ln_re)?;
    let outer = PowerLaw::new(
        wall.prefactor() * spec.eta_star.powf(wall.exponent() - spec.beta),
        spec.beta,
    )?;
    let etas = log_spaced(spec.eta_lo, spec.eta_hi, spec.n_points);
    let wall_points = sample_law(
        &wall,
        &outer,
        spec.eta_star,
        &etas,
        spec.noise_sigma,
        spec.seed,
    );
    let y_scale = spec.nu / spec.u_star;
    let dimensional = wall_points
        .into_iter()
        .map(|(eta, phi)| (eta * y_scale, phi * spec.u_star))
        .collect();
    let meta = RunMeta {
        u_star: spec.u_star,
        u_inf: spec.u_star / spec.u_star_over_u_inf,
        nu: spec.nu,
        re_theta: spec.re_theta,
        tau: None,
        rho: None,
        theta: None,
    };
    let run = Run::new(spec.run_name(), dimensional, meta)?;
    Ok((
        run,
        GroundTruth {
            wall_law: wall,
            outer_law: outer,
            eta_star: spec.eta_star,
            ln_re: spec.ln_re,
        },
    ))
}

/// Generate a single-law profile over `[eta_lo, eta_hi]`; the negative
/// control for two-layer detection.
pub fn gen_single_law(
    law: &PowerLaw,
    eta_lo: f64,
    eta_hi: f64,
    n_points: usize,
    noise_sigma: f64,
    seed: u64,
) -> Result<DimensionlessProfile> {
    if !positive_finite(eta_lo) || !eta_hi.is_finite() || eta_lo >= eta_hi {
        return Err(Error::InvalidSpec(format!(
            "invalid eta range [{eta_lo}, {eta_hi}]"
        )));
    }
    if n_points < 2 {
        return Err(Error::InvalidSpec(format!("n_points = {n_points} below 2")));
    }
    if noise_sigma.is_nan() || noise_sigma < 0.0 || !noise_sigma.is_finite() {
        return Err(Error::InvalidSpec(format!(
            "noise_sigma = {noise_sigma} is negative"
        )));
    }
    let etas = log_spaced(eta_lo, eta_hi, n_points);
    // Single law: the "outer" side is never selected.
    let points = sample_law(law, law, f64::INFINITY, &etas, noise_sigma, seed);
    DimensionlessProfile::new(points)
}
