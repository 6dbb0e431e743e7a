//! Python bindings for the berglab core: quadrature rules, weight families,
//! Gram matrices and kernels, curvature minima, and the scenario runner.
//! Build as a cdylib and import the module as `berglab`.

use berglab::bergman::{Basis, FiberSpace};
use berglab::bundle::{chern_curvature, nakano_min_eig, DerivativeMode, GramField};
use berglab::kahlerpath;
use berglab::linalg::CVec;
use berglab::num::C64;
use berglab::quadrature::{self, PlaneDomainSpec, QuadratureRule};
use berglab::scenario;
use berglab::weights::{psh_check, WeightFamily, WeightSpec, DEFAULT_FD_STEP};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::sync::Arc;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Nodes and positive area weights of a polar tensor rule.
#[pyclass(name = "Rule", skip_from_py_object)]
#[derive(Clone)]
struct PyRule {
    inner: Arc<QuadratureRule>,
}

#[pymethods]
impl PyRule {
    #[staticmethod]
    fn disk(radius: f64, n_radial: usize, n_angular: usize) -> PyResult<Self> {
        let rule = quadrature::build_plane_rule(
            PlaneDomainSpec::Disk { radius },
            n_radial,
            n_angular,
        )
        .map_err(err)?;
        Ok(PyRule {
            inner: Arc::new(rule),
        })
    }

    #[staticmethod]
    fn gaussian_plane(
        envelope_scale: f64,
        cutoff_radius: f64,
        n_radial: usize,
        n_angular: usize,
    ) -> PyResult<Self> {
        let rule = quadrature::build_plane_rule(
            PlaneDomainSpec::GaussianPlane {
                envelope_scale,
                cutoff_radius,
            },
            n_radial,
            n_angular,
        )
        .map_err(err)?;
        Ok(PyRule {
            inner: Arc::new(rule),
        })
    }

    #[staticmethod]
    fn p1(n_radial: usize, n_angular: usize) -> PyResult<Self> {
        let rule = quadrature::build_p1_rule(n_radial, n_angular).map_err(err)?;
        Ok(PyRule {
            inner: Arc::new(rule),
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn nodes(&self) -> Vec<Complex64> {
        self.inner.nodes.clone()
    }

    fn weights(&self) -> Vec<f64> {
        self.inner.weights.clone()
    }

    fn total_weight(&self) -> f64 {
        self.inner.total_weight()
    }

    /// Σ wᵢ·sampleᵢ with the deterministic pairwise reduction.
    fn integrate(&self, samples: Vec<Complex64>) -> PyResult<Complex64> {
        quadrature::integrate(&self.inner, &samples).map_err(err)
    }
}

/// A weight potential φ(t, z), built from the same JSON descriptors the
/// command-line configuration uses.
#[pyclass(name = "Weight", skip_from_py_object)]
#[derive(Clone)]
struct PyWeight {
    inner: WeightFamily,
}

#[pymethods]
impl PyWeight {
    #[staticmethod]
    fn from_json(spec: &str) -> PyResult<Self> {
        let spec: WeightSpec = serde_json::from_str(spec).map_err(err)?;
        Ok(PyWeight {
            inner: spec.build().map_err(err)?,
        })
    }

    #[staticmethod]
    fn fock_scaled(base_dim: usize) -> PyResult<Self> {
        if base_dim != 1 && base_dim != 2 {
            return Err(err("base_dim must be 1 or 2"));
        }
        Ok(PyWeight {
            inner: WeightFamily::fock_scaled(base_dim),
        })
    }

    #[staticmethod]
    fn mobius_flow(l: u32) -> Self {
        PyWeight {
            inner: WeightFamily::mobius_flow(l),
        }
    }

    fn family_id(&self) -> String {
        self.inner.family_id().to_string()
    }

    fn base_dim(&self) -> usize {
        self.inner.base_dim()
    }

    fn eval(&self, t: Vec<Complex64>, z: Complex64) -> f64 {
        self.inner.eval(&t, z)
    }

    /// Wirtinger derivative table at (t, z) as a dict.
    fn wirtinger(
        &self,
        py: Python<'_>,
        t: Vec<Complex64>,
        z: Complex64,
    ) -> PyResult<Py<pyo3::types::PyDict>> {
        let d = self.inner.wirtinger(&t, z, DEFAULT_FD_STEP).map_err(err)?;
        let m = self.inner.base_dim();
        let dict = pyo3::types::PyDict::new(py);
        dict.set_item("grad_t", d.grad_t.clone())?;
        dict.set_item(
            "hess_tt",
            (0..m)
                .map(|j| (0..m).map(|k| d.hess_tt[(j, k)]).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )?;
        dict.set_item("grad_z", d.grad_z)?;
        dict.set_item("hess_zz", d.hess_zz)?;
        dict.set_item("mixed_tz", d.mixed_tz.clone())?;
        Ok(dict.unbind())
    }

    /// Minimum eigenvalue of the joint complex Hessian over (t, z) points.
    fn psh_check(&self, points: Vec<(Vec<Complex64>, Complex64)>) -> PyResult<f64> {
        psh_check(&self.inner, &points).map_err(err)
    }

    /// Geodesic curvature C(ψ) at (t, z) for one-parameter families.
    fn geodesic_curvature(&self, t: Complex64, z: Complex64) -> PyResult<f64> {
        kahlerpath::geodesic_curvature(&self.inner, t, z).map_err(err)
    }
}

/// An ordered holomorphic section basis on the fiber.
#[pyclass(name = "SectionBasis", skip_from_py_object)]
#[derive(Clone)]
struct PyBasis {
    inner: Basis,
}

#[pymethods]
impl PyBasis {
    #[staticmethod]
    fn plane_monomials(cutoff: usize) -> Self {
        PyBasis {
            inner: Basis::plane_monomials(cutoff),
        }
    }

    #[staticmethod]
    fn p1_sections(l: u32) -> PyResult<Self> {
        Ok(PyBasis {
            inner: Basis::p1_sections(l).map_err(err)?,
        })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }
}

/// Gram matrix h[α][β] of the basis under exp(−φ(t, ·)) on the rule.
#[pyfunction]
fn gram_matrix(
    basis: &PyBasis,
    weight: &PyWeight,
    t: Vec<Complex64>,
    rule: &PyRule,
) -> PyResult<Vec<Vec<Complex64>>> {
    let g = berglab::bergman::gram(&basis.inner, &weight.inner, &t, &rule.inner).map_err(err)?;
    let d = basis.inner.dim();
    Ok((0..d)
        .map(|i| (0..d).map(|j| g.h[(i, j)]).collect())
        .collect())
}

/// Truncated Bergman kernel K(z, w) at base point t.
#[pyfunction]
fn kernel(
    basis: &PyBasis,
    weight: &PyWeight,
    t: Vec<Complex64>,
    rule: &PyRule,
    z: Complex64,
    w: Complex64,
) -> PyResult<Complex64> {
    let fs = FiberSpace::new(&basis.inner, &weight.inner, &t, &rule.inner).map_err(err)?;
    fs.kernel(z, w).map_err(err)
}

/// Minimum generalized curvature eigenvalue of the section bundle at t.
#[pyfunction]
#[pyo3(signature = (basis, weight, t, rule, analytic = true))]
fn nakano_minimum(
    basis: &PyBasis,
    weight: &PyWeight,
    t: Vec<Complex64>,
    rule: &PyRule,
    analytic: bool,
) -> PyResult<f64> {
    let mode = if analytic {
        DerivativeMode::AnalyticWeight
    } else {
        DerivativeMode::fd()
    };
    let field = GramField::from_quadrature(
        basis.inner.clone(),
        weight.inner.clone(),
        rule.inner.clone(),
        mode,
    )
    .map_err(err)?;
    let curv = chern_curvature(&field, &t).map_err(err)?;
    nakano_min_eig(&curv).map_err(err)
}

/// Toeplitz compression of a real symbol sampled at the rule nodes.
#[pyfunction]
fn toeplitz(
    basis: &PyBasis,
    weight: &PyWeight,
    t: Vec<Complex64>,
    rule: &PyRule,
    chi: Vec<f64>,
) -> PyResult<Vec<Vec<Complex64>>> {
    let fs = FiberSpace::new(&basis.inner, &weight.inner, &t, &rule.inner).map_err(err)?;
    let m = fs.toeplitz(&chi).map_err(err)?;
    let d = basis.inner.dim();
    Ok((0..d)
        .map(|i| (0..d).map(|j| m[(i, j)]).collect())
        .collect())
}

/// Coefficients of the weighted-L² projection of node samples onto the basis.
#[pyfunction]
fn project(
    basis: &PyBasis,
    weight: &PyWeight,
    t: Vec<Complex64>,
    rule: &PyRule,
    samples: Vec<Complex64>,
) -> PyResult<Vec<Complex64>> {
    let fs = FiberSpace::new(&basis.inner, &weight.inner, &t, &rule.inner).map_err(err)?;
    if samples.len() != rule.inner.len() {
        return Err(err(format!(
            "expected {} samples, got {}",
            rule.inner.len(),
            samples.len()
        )));
    }
    let c: CVec = fs.project(&samples).map_err(err)?;
    Ok(c.iter().copied().collect())
}

/// Built-in scenario ids with one-line descriptions.
#[pyfunction]
fn list_scenarios() -> Vec<(String, String)> {
    scenario::list_scenarios()
}

/// JSON configuration document of a built-in scenario.
#[pyfunction]
fn show_scenario(id: &str) -> PyResult<String> {
    let cfg = scenario::builtin_scenario(id).map_err(err)?;
    serde_json::to_string_pretty(&cfg).map_err(err)
}

/// Run a scenario from its JSON configuration; returns the report as JSON.
#[pyfunction]
fn run_scenario(config_json: &str) -> PyResult<String> {
    let cfg: scenario::ScenarioConfig = serde_json::from_str(config_json).map_err(err)?;
    let report = scenario::run(&cfg).map_err(err)?;
    Ok(report.to_json())
}

/// Run a built-in scenario by id; returns the report as JSON.
#[pyfunction]
fn run_builtin(id: &str) -> PyResult<String> {
    let cfg = scenario::builtin_scenario(id).map_err(err)?;
    let report = scenario::run(&cfg).map_err(err)?;
    Ok(report.to_json())
}

#[pymodule(name = "berglab")]
fn berglab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", scenario::CODE_VERSION)?;
    m.add_class::<PyRule>()?;
    m.add_class::<PyWeight>()?;
    m.add_class::<PyBasis>()?;
    m.add_function(wrap_pyfunction!(gram_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(kernel, m)?)?;
    m.add_function(wrap_pyfunction!(nakano_minimum, m)?)?;
    m.add_function(wrap_pyfunction!(toeplitz, m)?)?;
    m.add_function(wrap_pyfunction!(project, m)?)?;
    m.add_function(wrap_pyfunction!(list_scenarios, m)?)?;
    m.add_function(wrap_pyfunction!(show_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(run_builtin, m)?)?;
    Ok(())
}

// the C64 alias from the core crate is the same num_complex type the
// bindings convert; keep the assertion close to the conversions
const _: fn(C64) -> Complex64 = |x| x;
