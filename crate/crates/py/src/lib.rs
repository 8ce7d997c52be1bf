//! Python bindings for `v2v_signal`.
//!
//! Probabilities cross the boundary as plain floats and regions as strings
//! such as `"E3"`. Invalid input raises `ValueError`; solver failures raise
//! `RuntimeError`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use v2v_signal as core;
use v2v_signal::{MonotoneCurve, Probability};

fn to_py(err: core::Error) -> PyErr {
    match err {
        core::Error::Internal(_) | core::Error::Ambiguous { .. } => PyRuntimeError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn prob(x: f64) -> PyResult<Probability> {
    Probability::new(x).map_err(to_py)
}

#[pyclass(name = "CurveSpec", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyCurveSpec(pub core::CurveSpec);

#[pymethods]
impl PyCurveSpec {
    #[staticmethod]
    fn affine(slope: f64, intercept: f64) -> Self {
        PyCurveSpec(core::CurveSpec::affine(slope, intercept))
    }

    #[staticmethod]
    fn power(exponent: f64) -> Self {
        PyCurveSpec(core::CurveSpec::power(exponent))
    }

    #[staticmethod]
    fn linear(coefficient: f64) -> Self {
        PyCurveSpec(core::CurveSpec::linear(coefficient))
    }

    fn eval(&self, x: f64) -> f64 {
        self.0.eval(x)
    }

    fn invert(&self, v: f64) -> PyResult<f64> {
        self.0.invert(v).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "ModelSpec", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyModelSpec(pub core::ModelSpec);

#[pymethods]
impl PyModelSpec {
    #[new]
    fn new(p: PyCurveSpec, t: PyCurveSpec, f: PyCurveSpec) -> Self {
        PyModelSpec(core::ModelSpec::new(p.0, t.0, f.0))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        core::ModelSpec::from_json(text)
            .map(PyModelSpec)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// Diagnostics as strings; empty when the model is valid.
    fn validate(&self) -> Vec<String> {
        self.0.validate().iter().map(ToString::to_string).collect()
    }

    fn eval_p(&self, d: f64) -> PyResult<f64> {
        self.0.eval_p(d).map(Probability::get).map_err(to_py)
    }

    fn invert_p(&self, v: f64) -> PyResult<f64> {
        self.0.invert_p(prob(v)?).map_err(to_py)
    }

    fn eval_t(&self, y: f64) -> PyResult<f64> {
        Ok(self.0.eval_t(prob(y)?).get())
    }

    fn eval_f(&self, y: f64) -> PyResult<f64> {
        Ok(self.0.eval_f(prob(y)?).get())
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

#[pyclass(name = "GameParams", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyGameParams(pub core::GameParams);

#[pymethods]
impl PyGameParams {
    #[new]
    fn new(beta: f64, y: f64, r: f64) -> PyResult<Self> {
        core::GameParams::new(beta, y, r).map(PyGameParams).map_err(to_py)
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.0.beta.get()
    }

    #[getter]
    fn y(&self) -> f64 {
        self.0.y.get()
    }

    #[getter]
    fn r(&self) -> f64 {
        self.0.r
    }

    fn __repr__(&self) -> String {
        format!("GameParams(beta={}, y={}, r={})", self.0.beta, self.0.y, self.0.r)
    }
}

#[pyclass(name = "BehaviorProfile", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyBehaviorProfile(pub core::BehaviorProfile);

#[pymethods]
impl PyBehaviorProfile {
    #[new]
    fn new(x_n: f64, x_vu: f64, x_vs: f64) -> Self {
        PyBehaviorProfile(core::BehaviorProfile::new(x_n, x_vu, x_vs))
    }

    #[getter]
    fn x_n(&self) -> f64 {
        self.0.x_n
    }

    #[getter]
    fn x_vu(&self) -> f64 {
        self.0.x_vu
    }

    #[getter]
    fn x_vs(&self) -> f64 {
        self.0.x_vs
    }

    fn aggregate(&self, q: f64) -> f64 {
        self.0.aggregate(q)
    }

    fn __repr__(&self) -> String {
        format!("BehaviorProfile{}", self.0)
    }
}

#[pyclass(name = "EquilibriumResult", frozen, from_py_object)]
#[derive(Clone, Copy)]
pub struct PyEquilibriumResult(pub core::EquilibriumResult);

#[pymethods]
impl PyEquilibriumResult {
    #[getter]
    fn profile(&self) -> PyBehaviorProfile {
        PyBehaviorProfile(self.0.profile)
    }

    #[getter]
    fn p(&self) -> f64 {
        self.0.p.get()
    }

    #[getter]
    fn q(&self) -> f64 {
        self.0.q.get()
    }

    #[getter]
    fn region(&self) -> String {
        self.0.region.to_string()
    }

    #[getter]
    fn residual(&self) -> f64 {
        self.0.residual
    }

    fn __repr__(&self) -> String {
        format!(
            "EquilibriumResult(region={}, P={}, Q={}, profile={})",
            self.0.region, self.0.p, self.0.q, self.0.profile
        )
    }
}

#[pyfunction]
fn solve_equilibrium(model: PyModelSpec, game: PyGameParams) -> PyResult<PyEquilibriumResult> {
    core::solve_equilibrium(&model.0, &game.0)
        .map(PyEquilibriumResult)
        .map_err(to_py)
}

#[pyfunction]
fn classify_region(model: PyModelSpec, game: PyGameParams) -> PyResult<String> {
    core::classify_region(&model.0, &game.0)
        .map(|r| r.to_string())
        .map_err(to_py)
}

/// `(p_vs, p_n, p_vu)`; `p_vs` is 0 when no warning is ever shown.
#[pyfunction]
fn thresholds(model: PyModelSpec, game: PyGameParams) -> (f64, f64, f64) {
    let th = core::thresholds(&model.0, &game.0);
    (th.p_vs.get(), th.p_n.get(), th.p_vu.get())
}

#[pyfunction]
fn warning_probability(model: PyModelSpec, game: PyGameParams, p: f64) -> PyResult<f64> {
    Ok(core::warning_probability(&model.0, &game.0, prob(p)?).get())
}

#[pyfunction]
fn consistency_fixed_points(model: PyModelSpec, game: PyGameParams, profile: PyBehaviorProfile) -> Vec<f64> {
    core::consistency_fixed_points(&model.0, &game.0, &profile.0)
        .into_iter()
        .map(Probability::get)
        .collect()
}

#[pyfunction]
fn social_cost(model: PyModelSpec, game: PyGameParams, eq: PyEquilibriumResult) -> f64 {
    core::social_cost(&model.0, &game.0, &eq.0)
}

/// `(best_beta, best_value)` minimizing equilibrium accident probability.
#[pyfunction]
fn optimize_beta_accident(model: PyModelSpec, y: f64, r: f64) -> PyResult<(f64, f64)> {
    let out = core::optimize_beta_accident(&model.0, y, r).map_err(to_py)?;
    Ok((out.best_beta.get(), out.best_value))
}

/// `(best_beta, best_value)` minimizing equilibrium social cost.
#[pyfunction]
#[pyo3(signature = (model, y, r, grid_size = core::optimize::DEFAULT_SOCIAL_GRID))]
fn optimize_beta_social(model: PyModelSpec, y: f64, r: f64, grid_size: usize) -> PyResult<(f64, f64)> {
    let out = core::optimize_beta_social(&model.0, y, r, grid_size).map_err(to_py)?;
    Ok((out.best_beta.get(), out.best_value))
}

/// Breakpoint of `P` in `beta`: a float, or the string `"increasing"` /
/// `"decreasing"` when `P` is monotone on all of `[0, 1]`.
#[pyfunction]
fn beta_bar<'py>(py: Python<'py>, model: PyModelSpec, y: f64, r: f64) -> PyResult<Bound<'py, PyAny>> {
    Ok(match core::beta_bar(&model.0, y, r).map_err(to_py)? {
        core::BetaBar::Root { beta, .. } => beta.get().into_pyobject(py)?.into_any(),
        core::BetaBar::AllIncreasing => "increasing".into_pyobject(py)?.into_any(),
        core::BetaBar::AllDecreasing => "decreasing".into_pyobject(py)?.into_any(),
    })
}

/// One dict per `beta` with keys beta, region, P, S, x_n, x_vu, x_vs, Q.
#[pyfunction]
fn sweep_beta<'py>(py: Python<'py>, model: PyModelSpec, y: f64, r: f64, n: usize) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let records = core::sweep_beta(&model.0, y, r, n).map_err(to_py)?;
    records
        .iter()
        .map(|rec| {
            let row = PyDict::new(py);
            row.set_item("beta", rec.beta.get())?;
            row.set_item("region", rec.region.to_string())?;
            row.set_item("P", rec.p.get())?;
            row.set_item("S", rec.s)?;
            row.set_item("x_n", rec.profile.x_n)?;
            row.set_item("x_vu", rec.profile.x_vu)?;
            row.set_item("x_vs", rec.profile.x_vs)?;
            row.set_item("Q", rec.q.get())?;
            Ok(row)
        })
        .collect()
}

/// Region indices (1 to 7); rows follow `r_grid`, columns follow `y_grid`.
#[pyfunction]
fn region_map(model: PyModelSpec, beta: f64, y_grid: Vec<f64>, r_grid: Vec<f64>) -> PyResult<Vec<Vec<u8>>> {
    let cells = core::region_map(&model.0, beta, &y_grid, &r_grid).map_err(to_py)?;
    Ok(cells
        .into_iter()
        .map(|row| row.into_iter().map(core::Region::index).collect())
        .collect())
}

/// Dict with keys passed, violated (condition labels), residual, P, Q.
#[pyfunction]
fn verify_equilibrium<'py>(
    py: Python<'py>,
    model: PyModelSpec,
    game: PyGameParams,
    profile: PyBehaviorProfile,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let report = core::verify_equilibrium(&model.0, &game.0, &profile.0, tol).map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("passed", report.passed)?;
    let violated: Vec<&str> = report.violated_conditions.iter().map(|c| c.label()).collect();
    out.set_item("violated", violated)?;
    out.set_item("residual", report.consistency_residual)?;
    out.set_item("P", report.p.get())?;
    out.set_item("Q", report.q.get())?;
    Ok(out)
}

/// List of `(profile, P, Q)` lattice equilibria.
#[pyfunction]
fn brute_force_equilibria(
    model: PyModelSpec,
    game: PyGameParams,
    grid_n: usize,
    tol: f64,
) -> PyResult<Vec<(PyBehaviorProfile, f64, f64)>> {
    let hits = core::brute_force_equilibria(&model.0, &game.0, grid_n, tol).map_err(to_py)?;
    Ok(hits
        .into_iter()
        .map(|h| (PyBehaviorProfile(h.profile), h.p.get(), h.q.get()))
        .collect())
}

#[pymodule]
fn v2v_signal_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds every class and function to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurveSpec>()?;
    m.add_class::<PyModelSpec>()?;
    m.add_class::<PyGameParams>()?;
    m.add_class::<PyBehaviorProfile>()?;
    m.add_class::<PyEquilibriumResult>()?;
    m.add_function(wrap_pyfunction!(solve_equilibrium, m)?)?;
    m.add_function(wrap_pyfunction!(classify_region, m)?)?;
    m.add_function(wrap_pyfunction!(thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(warning_probability, m)?)?;
    m.add_function(wrap_pyfunction!(consistency_fixed_points, m)?)?;
    m.add_function(wrap_pyfunction!(social_cost, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_beta_accident, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_beta_social, m)?)?;
    m.add_function(wrap_pyfunction!(beta_bar, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_beta, m)?)?;
    m.add_function(wrap_pyfunction!(region_map, m)?)?;
    m.add_function(wrap_pyfunction!(verify_equilibrium, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_equilibria, m)?)?;
    Ok(())
}
