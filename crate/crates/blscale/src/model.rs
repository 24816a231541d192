//! Core representation of boundary-layer velocity profiles and their
//! two-layer scaling-law structure.
//!
//! A measured profile is nondimensionalized into wall units,
//!
//! ```text
//! eta = u* y / nu ,    phi = u / u* ,
//! ```
//!
//! where `u*` is the friction velocity and `nu` the kinematic viscosity.
//! The intermediate structure between the viscous sublayer and the free
//! stream consists of two self-similar layers, each described by a power
//! law `phi = C eta^e`. The layer adjacent to the viscous sublayer follows
//! the wall law common to wall-bounded shear flows,
//!
//! ```text
//! phi = (ln Re / sqrt(3) + 5/2) * eta^(3 / (2 ln Re)) ,
//! ```
//!
//! and the two layers meet at the sharp interface
//!
//! ```text
//! eta* = (A/B)^(1/(beta - alpha)) ,
//! ```
//!
//! the root of `A eta^alpha = B eta^beta`.

use crate::error::{Error, Result};

/// Relative tolerance for cross-checking redundant run metadata
/// (u* against sqrt(tau/rho), Re_theta against U theta / nu).
pub const META_CONSISTENCY_TOL: f64 = 1e-6;

/// Exponent difference at or below which two power laws are treated as
/// parallel: below this the interface formula amplifies fit noise beyond
/// any physical meaning.
pub const DEFAULT_EXPONENT_TOL: f64 = 1e-6;

/// Additive offset of the wall-law prefactor, `A = ln Re / sqrt(3) + 5/2`.
pub(crate) const WALL_PREFACTOR_OFFSET: f64 = 2.5;

/// Strictly positive and finite; false for NaN and infinities.
pub(crate) fn positive_finite(value: f64) -> bool {
    value > 0.0 && value.is_finite()
}

fn require_positive(what: &'static str, value: f64) -> Result<()> {
    if positive_finite(value) {
        Ok(())
    } else {
        Err(Error::NonPositive { what, value })
    }
}

/// Dimensional flow metadata attached to a run.
///
/// `u_star`, `u_inf` and `nu` are mandatory; the optional fields carry
/// redundant quantities that, when present, are cross-checked against the
/// mandatory ones at construction.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunMeta {
    /// Friction velocity u* (m/s).
    pub u_star: f64,
    /// Free-stream velocity U (m/s).
    pub u_inf: f64,
    /// Kinematic viscosity (m^2/s).
    pub nu: f64,
    /// Momentum-thickness Reynolds number labelling the run.
    pub re_theta: Option<f64>,
    /// Wall shear stress (Pa).
    pub tau: Option<f64>,
    /// Fluid density (kg/m^3).
    pub rho: Option<f64>,
    /// Momentum thickness (m).
    pub theta: Option<f64>,
}

/// One experimental run: dimensional profile points plus flow metadata.
///
/// Invariants are enforced at construction; a `Run` that exists is valid.
#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    name: String,
    points: Vec<(f64, f64)>,
    meta: RunMeta,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

impl Run {
    /// Build a validated run from `(y, u)` points (meters, m/s) and metadata.
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>, meta: RunMeta) -> Result<Run> {
        let name = name.into();
        if !valid_name(&name) {
            return Err(Error::InvalidRun(format!(
                "name '{name}' is not an identifier ([A-Za-z0-9._-]+)"
            )));
        }
        require_positive("u_star", meta.u_star)?;
        require_positive("U_inf", meta.u_inf)?;
        require_positive("nu", meta.nu)?;
        if points.is_empty() {
            return Err(Error::InvalidRun("run has no profile points".into()));
        }
        let mut prev_y = 0.0;
        for (i, &(y, u)) in points.iter().enumerate() {
            if !positive_finite(y) {
                return Err(Error::InvalidRun(format!(
                    "point {i}: y = {y} is not positive"
                )));
            }
            if !positive_finite(u) {
                return Err(Error::InvalidRun(format!(
                    "point {i}: u = {u} is not positive"
                )));
            }
            if y <= prev_y {
                return Err(Error::InvalidRun(format!(
                    "point {i}: y = {y} does not increase over previous {prev_y}"
                )));
            }
            prev_y = y;
        }
        for (key, value) in [
            ("re_theta", meta.re_theta),
            ("tau", meta.tau),
            ("rho", meta.rho),
            ("theta", meta.theta),
        ] {
            if let Some(v) = value {
                require_positive(key, v)
                    .map_err(|_| Error::InvalidRun(format!("{key} = {v} is not positive")))?;
            }
        }
        if let (Some(tau), Some(rho)) = (meta.tau, meta.rho) {
            let derived = (tau / rho).sqrt();
            if (meta.u_star - derived).abs() / meta.u_star > META_CONSISTENCY_TOL {
                return Err(Error::InvalidRun(format!(
                    "u_star = {} inconsistent with sqrt(tau/rho) = {derived}",
                    meta.u_star
                )));
            }
        }
        if let (Some(theta), Some(re_theta)) = (meta.theta, meta.re_theta) {
            let derived = meta.u_inf * theta / meta.nu;
            if (re_theta - derived).abs() / re_theta > META_CONSISTENCY_TOL {
                return Err(Error::InvalidRun(format!(
                    "re_theta = {re_theta} inconsistent with U_inf*theta/nu = {derived}"
                )));
            }
        }
        Ok(Run { name, points, meta })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Profile points as `(y, u)` pairs, strictly increasing in y.
    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn meta(&self) -> &RunMeta {
        &self.meta
    }
}

/// A profile in wall units: ordered `(eta, phi)` points, all positive,
/// strictly increasing in eta.
///
/// When the profile came from a dimensional run the free-stream plateau
/// level `phi_inf = U / u*` is carried along so that fitting can exclude
/// saturated points.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionlessProfile {
    points: Vec<(f64, f64)>,
    phi_freestream: Option<f64>,
}

impl DimensionlessProfile {
    pub fn new(points: Vec<(f64, f64)>) -> Result<DimensionlessProfile> {
        if points.is_empty() {
            return Err(Error::InvalidRun("profile has no points".into()));
        }
        let mut prev = 0.0;
        for (i, &(eta, phi)) in points.iter().enumerate() {
            if !positive_finite(eta) {
                return Err(Error::InvalidRun(format!(
                    "point {i}: eta = {eta} is not positive"
                )));
            }
            if !positive_finite(phi) {
                return Err(Error::InvalidRun(format!(
                    "point {i}: phi = {phi} is not positive"
                )));
            }
            if eta <= prev {
                return Err(Error::InvalidRun(format!(
                    "point {i}: eta = {eta} does not increase over previous {prev}"
                )));
            }
            prev = eta;
        }
        Ok(DimensionlessProfile {
            points,
            phi_freestream: None,
        })
    }

    /// Attach the free-stream plateau level `phi_inf = U / u*`.
    pub fn with_phi_freestream(mut self, phi_inf: f64) -> Result<DimensionlessProfile> {
        require_positive("phi_freestream", phi_inf)?;
        self.phi_freestream = Some(phi_inf);
        Ok(self)
    }

    pub(crate) fn from_parts(points: Vec<(f64, f64)>, phi_freestream: Option<f64>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0].0 < w[1].0));
        DimensionlessProfile {
            points,
            phi_freestream,
        }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn phi_freestream(&self) -> Option<f64> {
        self.phi_freestream
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// One scaling law `phi = prefactor * eta^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    prefactor: f64,
    exponent: f64,
}

impl PowerLaw {
    pub fn new(prefactor: f64, exponent: f64) -> Result<PowerLaw> {
        require_positive("prefactor", prefactor)?;
        if !exponent.is_finite() {
            return Err(Error::NonPositive {
                what: "exponent (finite)",
                value: exponent,
            });
        }
        Ok(PowerLaw {
            prefactor,
            exponent,
        })
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Evaluate the law at a wall-unit distance `eta > 0`.
    pub fn eval(&self, eta: f64) -> Result<f64> {
        require_positive("eta", eta)?;
        Ok(self.prefactor * eta.powf(self.exponent))
    }
}

/// Map a dimensional run into wall units: `(y, u) -> (u* y / nu, u / u*)`.
///
/// Ordering is preserved. The free-stream plateau `U / u*` rides along on
/// the returned profile.
pub fn nondimensionalize(run: &Run) -> DimensionlessProfile {
    let meta = run.meta();
    let scale = meta.u_star / meta.nu;
    let points = run
        .points()
        .iter()
        .map(|&(y, u)| (scale * y, u / meta.u_star))
        .collect();
    DimensionlessProfile::from_parts(points, Some(meta.u_inf / meta.u_star))
}

/// Wall law for a given `ln Re`: prefactor `ln Re / sqrt(3) + 5/2`,
/// exponent `3 / (2 ln Re)`.
pub fn wall_law_from_re(ln_re: f64) -> Result<PowerLaw> {
    require_positive("ln_re", ln_re)?;
    PowerLaw::new(
        ln_re / 3.0_f64.sqrt() + WALL_PREFACTOR_OFFSET,
        3.0 / (2.0 * ln_re),
    )
}

/// Interface of two scaling laws, `eta* = (A/B)^(1/(beta - alpha))`, using
/// the default exponent tolerance.
pub fn interface_eta(wall: &PowerLaw, outer: &PowerLaw) -> Result<f64> {
    interface_eta_with_tol(wall, outer, DEFAULT_EXPONENT_TOL)
}

/// Interface of two scaling laws with an explicit parallel-law tolerance.
///
/// Computed in log space, `lg eta* = (lg A - lg B) / (beta - alpha)`, which
/// is algebraically identical to the direct form but does not overflow for
/// near-parallel laws. Symmetric under swapping the two laws.
pub fn interface_eta_with_tol(wall: &PowerLaw, outer: &PowerLaw, tol: f64) -> Result<f64> {
    let denom = outer.exponent - wall.exponent;
    if denom.abs() <= tol {
        return Err(Error::NoIntersection {
            alpha: wall.exponent,
            beta: outer.exponent,
        });
    }
    let lg_star = (wall.prefactor.log10() - outer.prefactor.log10()) / denom;
    let eta_star = 10.0_f64.powf(lg_star);
    // Laws separated by barely more than tol can still push eta* past the
    // representable range; report that as no usable intersection.
    if !eta_star.is_finite() || eta_star <= 0.0 {
        return Err(Error::NoIntersection {
            alpha: wall.exponent,
            beta: outer.exponent,
        });
    }
    Ok(eta_star)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    fn meta(u_star: f64, u_inf: f64, nu: f64) -> RunMeta {
        RunMeta {
            u_star,
            u_inf,
            nu,
            ..RunMeta::default()
        }
    }

    #[test]
    fn nondimensionalize_direct_arithmetic() {
        let run = Run::new("t", vec![(0.01, 5.0)], meta(0.5, 14.0, 1.5e-5)).unwrap();
        let p = nondimensionalize(&run);
        let (eta, phi) = p.points()[0];
        assert!(rel(eta, 1000.0 / 3.0) < 1e-14, "eta = {eta}");
        assert!(rel(phi, 10.0) < 1e-14);
        assert_eq!(p.phi_freestream(), Some(28.0));
    }

    #[test]
    fn nondimensionalize_identity_cases() {
        // u = u_star gives phi = 1; y = nu/u_star gives eta = 1.
        let nu = 1.5e-5;
        let u_star = 0.5;
        let run = Run::new("t", vec![(nu / u_star, u_star)], meta(u_star, 14.0, nu)).unwrap();
        let (eta, phi) = nondimensionalize(&run).points()[0];
        assert!(rel(eta, 1.0) < 1e-14);
        assert!(rel(phi, 1.0) < 1e-14);
    }

    #[test]
    fn run_rejects_nonpositive_inputs() {
        assert!(Run::new("t", vec![(0.01, 5.0)], meta(0.0, 14.0, 1.5e-5)).is_err());
        assert!(Run::new("t", vec![(0.01, 5.0)], meta(0.5, -1.0, 1.5e-5)).is_err());
        assert!(Run::new("t", vec![(0.01, 5.0)], meta(0.5, 14.0, 0.0)).is_err());
        assert!(Run::new("t", vec![(-0.01, 5.0)], meta(0.5, 14.0, 1.5e-5)).is_err());
        assert!(Run::new("t", vec![(0.01, 0.0)], meta(0.5, 14.0, 1.5e-5)).is_err());
    }

    #[test]
    fn run_rejects_non_monotone_y() {
        let r = Run::new("t", vec![(0.02, 5.0), (0.01, 6.0)], meta(0.5, 14.0, 1.5e-5));
        assert!(matches!(r, Err(Error::InvalidRun(_))));
    }

    #[test]
    fn run_checks_metadata_consistency() {
        // u_star = sqrt(tau/rho) holds: tau = rho * u_star^2.
        let mut m = meta(0.5, 14.0, 1.5e-5);
        m.rho = Some(1.2);
        m.tau = Some(1.2 * 0.25);
        assert!(Run::new("t", vec![(0.01, 5.0)], m.clone()).is_ok());
        m.tau = Some(1.2 * 0.26);
        assert!(Run::new("t", vec![(0.01, 5.0)], m).is_err());

        let mut m = meta(0.5, 14.0, 1.5e-5);
        m.theta = Some(0.012);
        m.re_theta = Some(14.0 * 0.012 / 1.5e-5);
        assert!(Run::new("t", vec![(0.01, 5.0)], m.clone()).is_ok());
        m.re_theta = Some(1.01 * 14.0 * 0.012 / 1.5e-5);
        assert!(Run::new("t", vec![(0.01, 5.0)], m).is_err());
    }

    #[test]
    fn run_rejects_bad_names() {
        for bad in ["", "a b", "a\tb", "x/y"] {
            assert!(Run::new(bad, vec![(0.01, 5.0)], meta(0.5, 14.0, 1.5e-5)).is_err());
        }
        assert!(Run::new("run-4.2_ok", vec![(0.01, 5.0)], meta(0.5, 14.0, 1.5e-5)).is_ok());
    }

    #[test]
    fn eval_law_cases() {
        let zero_exp = PowerLaw::new(2.0, 0.0).unwrap();
        assert_eq!(zero_exp.eval(123.4).unwrap(), 2.0);
        let identity = PowerLaw::new(1.0, 1.0).unwrap();
        assert_eq!(identity.eval(7.0).unwrap(), 7.0);
        // Oracle: 8.2735 * 256^0.15 computed independently to 40 digits.
        let law = PowerLaw::new(8.2735, 0.15).unwrap();
        assert!(rel(law.eval(256.0).unwrap(), 19.00751168013594) < 1e-12);
        assert!(law.eval(0.0).is_err());
        assert!(law.eval(-3.0).is_err());
        assert!(law.eval(f64::NAN).is_err());
    }

    #[test]
    fn wall_law_values() {
        let law = wall_law_from_re(10.0).unwrap();
        assert!(rel(law.prefactor(), 8.273502691896258) < 1e-15);
        assert!(rel(law.exponent(), 0.15) < 1e-15);
        // alpha = 1 exactly at ln Re = 1.5.
        assert_eq!(wall_law_from_re(1.5).unwrap().exponent(), 1.0);
        assert!(wall_law_from_re(0.0).is_err());
        assert!(wall_law_from_re(-2.0).is_err());
    }

    #[test]
    fn wall_law_exponent_identity() {
        for i in 0..50 {
            let ln_re = 5.0 + 10.0 * i as f64 / 49.0;
            let law = wall_law_from_re(ln_re).unwrap();
            assert!(rel(law.exponent() * ln_re, 1.5) < 1e-14);
        }
    }

    #[test]
    fn interface_exact_case() {
        let wall = PowerLaw::new(8.0, 0.15).unwrap();
        let outer = PowerLaw::new(2.0, 0.40).unwrap();
        let es = interface_eta(&wall, &outer).unwrap();
        assert!(rel(es, 256.0) < 1e-13, "eta* = {es}");
    }

    #[test]
    fn interface_oracle_case() {
        // Oracle: (8.2735/12)^(1/(0.08-0.15)) computed independently.
        let wall = PowerLaw::new(8.2735, 0.15).unwrap();
        let outer = PowerLaw::new(12.0, 0.08).unwrap();
        let es = interface_eta(&wall, &outer).unwrap();
        assert!(rel(es, 202.78144412182313) < 1e-12, "eta* = {es}");
    }

    #[test]
    fn interface_equal_prefactors() {
        let a = PowerLaw::new(5.0, 0.2).unwrap();
        let b = PowerLaw::new(5.0, 0.3).unwrap();
        assert_eq!(interface_eta(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn interface_parallel_laws_rejected() {
        let a = PowerLaw::new(5.0, 0.2).unwrap();
        let b = PowerLaw::new(6.0, 0.2 + 5e-7).unwrap();
        assert!(matches!(
            interface_eta(&a, &b),
            Err(Error::NoIntersection { .. })
        ));
    }

    #[test]
    fn interface_satisfies_defining_equation() {
        let wall = PowerLaw::new(8.2735, 0.15).unwrap();
        let outer = PowerLaw::new(12.0, 0.08).unwrap();
        let es = interface_eta(&wall, &outer).unwrap();
        let w = wall.eval(es).unwrap();
        let o = outer.eval(es).unwrap();
        assert!(rel(w, o) < 1e-12);
    }

    #[test]
    fn interface_swap_symmetric() {
        let wall = PowerLaw::new(8.2735, 0.15).unwrap();
        let outer = PowerLaw::new(12.0, 0.08).unwrap();
        let a = interface_eta(&wall, &outer).unwrap();
        let b = interface_eta(&outer, &wall).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn interface_unrepresentable_is_no_intersection() {
        // Exponents differ by just over the tolerance while the prefactors
        // differ by hundreds of decades: eta* overflows.
        let a = PowerLaw::new(1e300, 0.2).unwrap();
        let b = PowerLaw::new(1.0, 0.202).unwrap();
        assert!(matches!(
            interface_eta(&a, &b),
            Err(Error::NoIntersection { .. })
        ));
        // Mirror case underflows to zero.
        let c = PowerLaw::new(1e-300, 0.2).unwrap();
        assert!(matches!(
            interface_eta(&c, &b),
            Err(Error::NoIntersection { .. })
        ));
    }

    proptest::proptest! {
        // Rescaling y and nu together leaves eta unchanged.
        #[test]
        fn nondimensionalize_scale_consistent(
            c in 1e-3_f64..1e3,
            u_star in 0.05_f64..2.0,
            nu in 1e-6_f64..1e-4,
        ) {
            let ys = [1e-3, 3e-3, 1e-2, 5e-2];
            let us = [2.0, 3.0, 4.0, 5.0];
            let points: Vec<(f64, f64)> = ys.iter().zip(us).map(|(&y, u)| (y, u)).collect();
            let scaled: Vec<(f64, f64)> = points.iter().map(|&(y, u)| (c * y, u)).collect();
            let run = Run::new("t", points, meta(u_star, 14.0, nu)).unwrap();
            let run_scaled = Run::new("t", scaled, meta(u_star, 14.0, c * nu)).unwrap();
            let p = nondimensionalize(&run);
            let q = nondimensionalize(&run_scaled);
            for (&(ea, pa), &(eb, pb)) in p.points().iter().zip(q.points()) {
                proptest::prop_assert!(rel(ea, eb) < 1e-12);
                proptest::prop_assert_eq!(pa, pb);
            }
        }
    }
}
