use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use tameplan::cli::{cmd_verify, Overrides, QueryDocument};
use tameplan::random::{random_query, random_query_in_domain};
use tameplan::verify::{self, audit_domains};
use tameplan::{Algorithm, PlanError, Query, Tolerances};

create_exception!(pytameplan, PlanningError, PyValueError, "Planning, classification or verification failed.");

fn err(e: PlanError) -> PyErr {
    PlanningError::new_err(e.to_string())
}

fn parse_algorithm(name: &str) -> PyResult<Algorithm> {
    name.parse().map_err(err)
}

fn tolerances(eps_proj: Option<f64>, eps_antipode: Option<f64>) -> PyResult<Tolerances> {
    let mut tol = Tolerances::default();
    if let Some(e) = eps_proj {
        tol.eps_proj = e;
    }
    if let Some(e) = eps_antipode {
        tol.eps_antipode = e;
    }
    tol.validate().map_err(err)?;
    Ok(tol)
}

fn build_query(configurations: Vec<Vec<Vec<f64>>>, tol: &Tolerances) -> PyResult<Query> {
    Query::from_coords(configurations, tol.eps_sep).map_err(err)
}

/// Serializes through JSON so Python receives plain dicts and lists.
fn to_python<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PlanningError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A planned path; evaluate it at any time in `[0, 1]`.
#[pyclass(name = "Trajectory", module = "pytameplan", skip_from_py_object)]
#[derive(Clone)]
pub struct PyTrajectory {
    inner: tameplan::Trajectory,
}

#[pymethods]
impl PyTrajectory {
    /// Robot coordinates at time `t`, as a `k x d` nested list.
    fn eval(&self, t: f64) -> Vec<Vec<f64>> {
        self.inner.eval(t).to_coords()
    }

    #[getter]
    fn waypoint_times(&self) -> Vec<f64> {
        self.inner.waypoint_times().to_vec()
    }

    #[getter]
    fn robots(&self) -> usize {
        self.inner.robots()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// `(t, coords)` pairs with `per_segment` steps per waypoint segment.
    #[pyo3(signature = (per_segment = 200))]
    fn sample(&self, per_segment: usize) -> Vec<(f64, Vec<Vec<f64>>)> {
        self.inner
            .sample_per_segment(per_segment)
            .into_iter()
            .map(|(t, c)| (t, c.to_coords()))
            .collect()
    }

    fn junction_gap_max(&self) -> f64 {
        self.inner.junction_gap_max()
    }

    fn __len__(&self) -> usize {
        self.inner.pieces().len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Trajectory(robots={}, dim={}, pieces={}, waypoints={})",
            self.inner.robots(),
            self.inner.dim(),
            self.inner.pieces().len(),
            self.inner.waypoint_times().len()
        )
    }
}

/// Plans a path through `configurations` (`n x k x d`).
#[pyfunction]
#[pyo3(signature = (configurations, algorithm = "general", eps_proj = None, eps_antipode = None))]
fn plan(
    configurations: Vec<Vec<Vec<f64>>>,
    algorithm: &str,
    eps_proj: Option<f64>,
    eps_antipode: Option<f64>,
) -> PyResult<PyTrajectory> {
    let tol = tolerances(eps_proj, eps_antipode)?;
    let query = build_query(configurations, &tol)?;
    let inner = parse_algorithm(algorithm)?.planner(tol).plan(&query).map_err(err)?;
    Ok(PyTrajectory { inner })
}

/// Fine cell and domain index: `{"cells": [...], "antipodes": j?, "ell": l}`.
#[pyfunction]
#[pyo3(signature = (configurations, algorithm = "general", eps_proj = None, eps_antipode = None))]
fn classify<'py>(
    py: Python<'py>,
    configurations: Vec<Vec<Vec<f64>>>,
    algorithm: &str,
    eps_proj: Option<f64>,
    eps_antipode: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let tol = tolerances(eps_proj, eps_antipode)?;
    let query = build_query(configurations, &tol)?;
    let label = parse_algorithm(algorithm)?.planner(tol).classify(&query).map_err(err)?;
    let doc = tameplan::cli::ClassifyDocument {
        algorithm: parse_algorithm(algorithm)?,
        cells: label.per_config_counts().to_vec(),
        antipodes: label.antipode_count(),
        ell: label.domain_index(),
    };
    to_python(py, &doc)
}

#[pyfunction]
fn expected_tc(d: usize, k: usize, n: usize) -> PyResult<usize> {
    if d < 2 || k < 2 || n < 2 {
        return Err(PyValueError::new_err("d, k and n must all be at least 2"));
    }
    Ok(verify::expected_tc(d, k, n))
}

/// Domain-count audit for one `(d, k, n)`.
#[pyfunction]
#[pyo3(signature = (d, k, n, algorithm = "general", samples = 20, seed = 0))]
fn audit<'py>(
    py: Python<'py>,
    d: usize,
    k: usize,
    n: usize,
    algorithm: &str,
    samples: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let report = audit_domains(parse_algorithm(algorithm)?, &Tolerances::default(), d, k, n, samples, seed)
        .map_err(err)?;
    to_python(py, &report)
}

/// Plans and verifies; returns the verification report as a dict.
#[pyfunction]
#[pyo3(signature = (configurations, algorithm = "general", resolution = 10_000))]
fn verify_query<'py>(
    py: Python<'py>,
    configurations: Vec<Vec<Vec<f64>>>,
    algorithm: &str,
    resolution: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let query = build_query(configurations, &Tolerances::default())?;
    let doc = QueryDocument::from_query(&query, parse_algorithm(algorithm)?);
    let report = cmd_verify(&doc, &Overrides::default(), resolution, None)
        .map_err(|e| PlanningError::new_err(e.to_string()))?;
    to_python(py, &report)
}

/// Largest distance between the trajectory at `j/(n-1)` and the `j+1`-th configuration.
#[pyfunction]
fn check_waypoints(trajectory: &PyTrajectory, configurations: Vec<Vec<Vec<f64>>>) -> PyResult<f64> {
    let query = build_query(configurations, &Tolerances::default())?;
    Ok(verify::check_waypoints(&trajectory.inner, &query))
}

/// `(min_separation, t, (robot_a, robot_b))`; raises on a collision.
#[pyfunction]
#[pyo3(signature = (trajectory, resolution = 10_000))]
fn scan_collisions(trajectory: &PyTrajectory, resolution: usize) -> PyResult<(f64, f64, (usize, usize))> {
    let scan = verify::scan_collisions(&trajectory.inner, resolution).map_err(err)?;
    Ok((scan.min_separation, scan.t, scan.pair))
}

/// Seeded random queries as nested lists; `ell` restricts them to one domain.
#[pyfunction]
#[pyo3(signature = (d, k, n, count = 1, algorithm = "general", seed = 0, ell = None))]
fn random_queries(
    d: usize,
    k: usize,
    n: usize,
    count: usize,
    algorithm: &str,
    seed: u64,
    ell: Option<usize>,
) -> PyResult<Vec<Vec<Vec<Vec<f64>>>>> {
    let algorithm = parse_algorithm(algorithm)?;
    if d < 2 || k < 2 || n < 2 {
        return Err(PyValueError::new_err("d, k and n must all be at least 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let q = match ell {
                Some(l) => random_query_in_domain(&mut rng, algorithm, d, k, n, l),
                None => random_query(&mut rng, algorithm, d, k, n),
            };
            q.map(|q| q.to_coords()).map_err(err)
        })
        .collect()
}

#[pymodule]
pub fn pytameplan(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PlanningError", m.py().get_type::<PlanningError>())?;
    m.add_class::<PyTrajectory>()?;
    m.add_function(wrap_pyfunction!(plan, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(expected_tc, m)?)?;
    m.add_function(wrap_pyfunction!(audit, m)?)?;
    m.add_function(wrap_pyfunction!(verify_query, m)?)?;
    m.add_function(wrap_pyfunction!(check_waypoints, m)?)?;
    m.add_function(wrap_pyfunction!(scan_collisions, m)?)?;
    m.add_function(wrap_pyfunction!(random_queries, m)?)?;
    Ok(())
}
