//! Python bindings for the blscale analysis library.
//!
//! Exposes the main types and operations: power laws, the wall law and
//! interface formula, segmented two-layer fitting, scale computation, the
//! synthetic generator, and run-file analysis.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use blscale::pipeline::{analyze_parsed, parse_run_file, ScaleSkip};
use blscale::segfit;
use blscale::synth;
use blscale::{model, scales, DimensionlessProfile};

fn err(e: blscale::Error) -> PyErr {
    match e {
        blscale::Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn profile_from_arrays(
    eta: Vec<f64>,
    phi: Vec<f64>,
    phi_freestream: Option<f64>,
) -> PyResult<DimensionlessProfile> {
    if eta.len() != phi.len() {
        return Err(PyValueError::new_err(format!(
            "eta and phi lengths differ: {} vs {}",
            eta.len(),
            phi.len()
        )));
    }
    let points: Vec<(f64, f64)> = eta.into_iter().zip(phi).collect();
    let mut profile = DimensionlessProfile::new(points).map_err(err)?;
    if let Some(p) = phi_freestream {
        profile = profile.with_phi_freestream(p).map_err(err)?;
    }
    Ok(profile)
}

/// One scaling law phi = prefactor * eta^exponent.
#[pyclass(name = "PowerLaw", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPowerLaw {
    inner: model::PowerLaw,
}

#[pymethods]
impl PyPowerLaw {
    #[new]
    fn new(prefactor: f64, exponent: f64) -> PyResult<Self> {
        Ok(PyPowerLaw {
            inner: model::PowerLaw::new(prefactor, exponent).map_err(err)?,
        })
    }

    #[getter]
    fn prefactor(&self) -> f64 {
        self.inner.prefactor()
    }

    #[getter]
    fn exponent(&self) -> f64 {
        self.inner.exponent()
    }

    fn eval(&self, eta: f64) -> PyResult<f64> {
        self.inner.eval(eta).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "PowerLaw(prefactor={}, exponent={})",
            self.inner.prefactor(),
            self.inner.exponent()
        )
    }
}

/// Fitting configuration; defaults mirror the library defaults.
#[pyclass(name = "FitConfig", frozen, from_py_object)]
#[derive(Clone)]
struct PyFitConfig {
    inner: segfit::FitConfig,
}

#[pymethods]
impl PyFitConfig {
    #[new]
    #[pyo3(signature = (eta_min=30.0, frac_u_max=0.99, min_seg_points=5, exponent_tol=1e-6))]
    fn new(
        eta_min: f64,
        frac_u_max: f64,
        min_seg_points: usize,
        exponent_tol: f64,
    ) -> PyResult<Self> {
        let inner = segfit::FitConfig {
            eta_min,
            frac_u_max,
            min_seg_points,
            exponent_tol,
        };
        inner.validate().map_err(err)?;
        Ok(PyFitConfig { inner })
    }

    #[getter]
    fn eta_min(&self) -> f64 {
        self.inner.eta_min
    }

    #[getter]
    fn frac_u_max(&self) -> f64 {
        self.inner.frac_u_max
    }

    #[getter]
    fn min_seg_points(&self) -> usize {
        self.inner.min_seg_points
    }

    #[getter]
    fn exponent_tol(&self) -> f64 {
        self.inner.exponent_tol
    }
}

/// Result of a two-layer fit.
#[pyclass(name = "TwoLayerFit", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTwoLayerFit {
    inner: segfit::TwoLayerFit,
}

#[pymethods]
impl PyTwoLayerFit {
    #[getter]
    fn wall_law(&self) -> PyPowerLaw {
        PyPowerLaw {
            inner: self.inner.wall_law,
        }
    }

    #[getter]
    fn outer_law(&self) -> PyPowerLaw {
        PyPowerLaw {
            inner: self.inner.outer_law,
        }
    }

    #[getter]
    fn break_index(&self) -> usize {
        self.inner.break_index
    }

    #[getter]
    fn eta_star(&self) -> Option<f64> {
        self.inner.eta_star
    }

    #[getter]
    fn r2_wall(&self) -> f64 {
        self.inner.r2_wall
    }

    #[getter]
    fn r2_outer(&self) -> f64 {
        self.inner.r2_outer
    }

    #[getter]
    fn sse_total(&self) -> f64 {
        self.inner.sse_total
    }

    #[getter]
    fn flags(&self) -> Vec<String> {
        self.inner
            .flags
            .iter()
            .map(|f| f.as_str().to_string())
            .collect()
    }

    #[getter]
    fn eta_range(&self) -> (f64, f64) {
        self.inner.eta_range
    }

    #[getter]
    fn n_used(&self) -> usize {
        self.inner.n_used
    }

    fn __repr__(&self) -> String {
        format!(
            "TwoLayerFit(alpha={}, beta={}, eta_star={:?}, flags={:?})",
            self.inner.wall_law.exponent(),
            self.inner.outer_law.exponent(),
            self.inner.eta_star,
            self.inner
                .flags
                .iter()
                .map(|f| f.as_str())
                .collect::<Vec<_>>(),
        )
    }
}

/// Reynolds numbers and length scales for one run.
#[pyclass(name = "ScaleReport", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyScaleReport {
    inner: scales::ScaleReport,
}

#[pymethods]
impl PyScaleReport {
    #[getter]
    fn ln_re1(&self) -> f64 {
        self.inner.ln_re1
    }

    #[getter]
    fn ln_re2(&self) -> f64 {
        self.inner.ln_re2
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta
    }

    #[getter]
    fn ln_re(&self) -> f64 {
        self.inner.ln_re_eff
    }

    #[getter]
    fn lambda_wall(&self) -> f64 {
        self.inner.lambda_wall
    }

    #[getter]
    fn lambda_cap(&self) -> f64 {
        self.inner.lambda_cap
    }

    #[getter]
    fn lg_ratio(&self) -> f64 {
        self.inner.lg_ratio
    }

    #[getter]
    fn u_star_over_u_inf(&self) -> f64 {
        self.inner.u_star_over_u_inf
    }

    fn __repr__(&self) -> String {
        format!(
            "ScaleReport(ln_re={}, delta={}, lg_ratio={})",
            self.inner.ln_re_eff, self.inner.delta, self.inner.lg_ratio
        )
    }
}

/// Wall law for a given ln Re: (ln Re / sqrt(3) + 5/2) * eta^(3/(2 ln Re)).
#[pyfunction]
fn wall_law_from_re(ln_re: f64) -> PyResult<PyPowerLaw> {
    Ok(PyPowerLaw {
        inner: model::wall_law_from_re(ln_re).map_err(err)?,
    })
}

/// Interface of two scaling laws, eta* = (A/B)^(1/(beta-alpha)).
#[pyfunction]
fn interface_eta(wall: &PyPowerLaw, outer: &PyPowerLaw) -> PyResult<f64> {
    model::interface_eta(&wall.inner, &outer.inner).map_err(err)
}

/// Map dimensional (y, u) arrays into wall units (eta, phi).
#[pyfunction]
fn nondimensionalize(
    y: Vec<f64>,
    u: Vec<f64>,
    u_star: f64,
    u_inf: f64,
    nu: f64,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    if y.len() != u.len() {
        return Err(PyValueError::new_err("y and u lengths differ"));
    }
    let meta = model::RunMeta {
        u_star,
        u_inf,
        nu,
        ..model::RunMeta::default()
    };
    let run = model::Run::new("py", y.into_iter().zip(u).collect(), meta).map_err(err)?;
    let profile = model::nondimensionalize(&run);
    Ok(profile
        .points()
        .iter()
        .map(|p| (p.0, p.1))
        .collect::<Vec<_>>()
        .into_iter()
        .unzip())
}

/// OLS of lg phi on lg eta: returns (PowerLaw, r2, sse).
#[pyfunction]
fn loglog_ols(eta: Vec<f64>, phi: Vec<f64>) -> PyResult<(PyPowerLaw, f64, f64)> {
    if eta.len() != phi.len() {
        return Err(PyValueError::new_err("eta and phi lengths differ"));
    }
    let points: Vec<(f64, f64)> = eta.into_iter().zip(phi).collect();
    let (law, r2, sse) = segfit::loglog_ols(&points).map_err(err)?;
    Ok((PyPowerLaw { inner: law }, r2, sse))
}

/// Two-layer fit of an (eta, phi) profile.
#[pyfunction]
#[pyo3(signature = (eta, phi, config=None, phi_freestream=None))]
fn fit_two_layer(
    eta: Vec<f64>,
    phi: Vec<f64>,
    config: Option<PyFitConfig>,
    phi_freestream: Option<f64>,
) -> PyResult<PyTwoLayerFit> {
    let profile = profile_from_arrays(eta, phi, phi_freestream)?;
    let cfg = config.map(|c| c.inner).unwrap_or_default();
    Ok(PyTwoLayerFit {
        inner: segfit::fit_two_layer(&profile, &cfg).map_err(err)?,
    })
}

/// ln Re solved from the wall-law prefactor: sqrt(3) * (A - 5/2).
#[pyfunction]
fn re1_from_prefactor(prefactor: f64) -> PyResult<f64> {
    scales::re1_from_prefactor(prefactor).map_err(err)
}

/// ln Re solved from the wall-law exponent: 3 / (2 alpha).
#[pyfunction]
fn re2_from_exponent(exponent: f64) -> PyResult<f64> {
    scales::re2_from_exponent(exponent).map_err(err)
}

/// Effective ln Re and relative gap delta from the two solutions.
#[pyfunction]
fn effective_re(ln_re1: f64, ln_re2: f64) -> PyResult<(f64, f64)> {
    scales::effective_re(ln_re1, ln_re2).map_err(err)
}

/// Scale report from a fit plus dimensional metadata.
#[pyfunction]
fn compute_scales(
    fit: &PyTwoLayerFit,
    u_star: f64,
    u_inf: f64,
    nu: f64,
) -> PyResult<PyScaleReport> {
    Ok(PyScaleReport {
        inner: scales::compute_scales_from_meta(&fit.inner, u_star, u_inf, nu).map_err(err)?,
    })
}

/// Generate a synthetic two-layer profile with embedded ground truth.
///
/// Returns (eta, phi, truth) where truth is a dict of the true parameters.
#[pyfunction]
#[pyo3(signature = (ln_re=10.0, eta_star=256.0, beta=0.08, eta_lo=40.0, eta_hi=4000.0,
                    n_points=200, noise_sigma=0.0, seed=0, u_star_over_u_inf=0.035,
                    nu=1.5e-5, u_star=0.5))]
#[allow(clippy::too_many_arguments)]
fn gen_two_layer(
    py: Python<'_>,
    ln_re: f64,
    eta_star: f64,
    beta: f64,
    eta_lo: f64,
    eta_hi: f64,
    n_points: usize,
    noise_sigma: f64,
    seed: u64,
    u_star_over_u_inf: f64,
    nu: f64,
    u_star: f64,
) -> PyResult<(Vec<f64>, Vec<f64>, Py<PyAny>)> {
    let spec = synth::SynthSpec {
        name: None,
        ln_re,
        eta_star,
        beta,
        eta_lo,
        eta_hi,
        n_points,
        noise_sigma,
        seed,
        u_star_over_u_inf,
        nu,
        u_star,
        re_theta: None,
    };
    let (run, truth) = synth::gen_two_layer(&spec).map_err(err)?;
    let profile = model::nondimensionalize(&run);
    let (eta, phi): (Vec<f64>, Vec<f64>) = profile.points().iter().copied().unzip();
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("A", truth.wall_law.prefactor())?;
    dict.set_item("alpha", truth.wall_law.exponent())?;
    dict.set_item("B", truth.outer_law.prefactor())?;
    dict.set_item("beta", truth.outer_law.exponent())?;
    dict.set_item("eta_star", truth.eta_star)?;
    dict.set_item("ln_re", truth.ln_re)?;
    Ok((eta, phi, dict.into_any().unbind()))
}

/// Parse and analyze one run file; returns (TwoLayerFit, ScaleReport | None).
#[pyfunction]
#[pyo3(signature = (path, config=None))]
fn analyze_run_file(
    path: &str,
    config: Option<PyFitConfig>,
) -> PyResult<(PyTwoLayerFit, Option<PyScaleReport>)> {
    let bytes = std::fs::read(path).map_err(|e| PyIOError::new_err(format!("{path}: {e}")))?;
    let parsed =
        parse_run_file(&bytes).map_err(|d| PyValueError::new_err(format!("{path}: {d}")))?;
    let cfg = config.map(|c| c.inner).unwrap_or_default();
    let (fit, scales) = analyze_parsed(&parsed, &cfg).map_err(err)?;
    let report = match scales {
        Ok(rep) => Some(PyScaleReport { inner: rep }),
        Err(ScaleSkip::MissingMetadata) => None,
        Err(ScaleSkip::NoInterface) => {
            return Err(PyValueError::new_err(format!(
                "run '{}': no interface point; scales undefined",
                parsed.name()
            )))
        }
        Err(ScaleSkip::NonphysicalWallLaw) => {
            return Err(PyValueError::new_err(format!(
                "run '{}': fitted wall law cannot be matched to the pipe-flow form",
                parsed.name()
            )))
        }
    };
    Ok((PyTwoLayerFit { inner: fit }, report))
}

#[pymodule]
fn blscale_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPowerLaw>()?;
    m.add_class::<PyFitConfig>()?;
    m.add_class::<PyTwoLayerFit>()?;
    m.add_class::<PyScaleReport>()?;
    m.add_function(wrap_pyfunction!(wall_law_from_re, m)?)?;
    m.add_function(wrap_pyfunction!(interface_eta, m)?)?;
    m.add_function(wrap_pyfunction!(nondimensionalize, m)?)?;
    m.add_function(wrap_pyfunction!(loglog_ols, m)?)?;
    m.add_function(wrap_pyfunction!(fit_two_layer, m)?)?;
    m.add_function(wrap_pyfunction!(re1_from_prefactor, m)?)?;
    m.add_function(wrap_pyfunction!(re2_from_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(effective_re, m)?)?;
    m.add_function(wrap_pyfunction!(compute_scales, m)?)?;
    m.add_function(wrap_pyfunction!(gen_two_layer, m)?)?;
    m.add_function(wrap_pyfunction!(analyze_run_file, m)?)?;
    Ok(())
}
