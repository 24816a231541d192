//! Analysis of turbulent boundary-layer velocity profiles.
//!
//! The intermediate region of a zero-pressure-gradient boundary layer is
//! treated as two self-similar layers, each following a scaling law
//! `phi = C eta^e` in wall units, separated by a sharp interface. This
//! crate recovers both laws from measured profiles by segmented least
//! squares in lg-lg coordinates, locates the interface `eta*`, matches the
//! wall-side law to the pipe-flow form to obtain an effective Reynolds
//! number, and reports the two characteristic length scales: the
//! wall-region thickness `lambda = eta* nu / u*` and the effective scale
//! `Lambda = Re nu / U`, with their ratio `lg(Lambda/lambda)`.
//!
//! Modules:
//! - [`model`]: profiles, wall units, power laws, the interface formula.
//! - [`segfit`]: segmented lg-lg regression with exhaustive breakpoint scan.
//! - [`scales`]: Reynolds numbers and length scales from a fit.
//! - [`synth`]: seeded synthetic-profile generator with known ground truth.
//! - [`pipeline`]: run files, per-run and batch analysis, report emission.
//!
//! The `blscale` binary wraps the pipeline: `analyze` for one run file,
//! `batch` for a directory, `synth` to generate test corpora.

pub mod error;
pub mod model;
pub mod pipeline;
pub mod scales;
pub mod segfit;
pub mod synth;

pub use error::{DiagnosticCode, Error, ParseDiagnostic, Result};
pub use model::{
    interface_eta, interface_eta_with_tol, nondimensionalize, wall_law_from_re,
    DimensionlessProfile, PowerLaw, Run, RunMeta,
};
pub use scales::{
    compute_scales, compute_scales_from_meta, effective_re, re1_from_prefactor, re2_from_exponent,
    ScaleReport,
};
pub use segfit::{fit_two_layer, loglog_ols, FitConfig, FitFlag, TwoLayerFit};
pub use synth::{gen_single_law, gen_two_layer, GroundTruth, SynthSpec};
