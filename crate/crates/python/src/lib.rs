//! Python bindings: entropy families, generators and the axiom harness.

use genentropy::harness::{run_subject, run_suite, AxiomReport, Subject, TrialConfig};
use genentropy::{
    EntropyParams, JointDist, Normalization, ProbDist, PseudoAddGenerator, System,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mode(normalize: bool) -> Normalization {
    if normalize {
        Normalization::Renormalize
    } else {
        Normalization::Strict
    }
}

fn dist(p: Vec<f64>, normalize: bool) -> PyResult<ProbDist> {
    genentropy::make_dist(&p, mode(normalize)).map_err(err)
}

/// Validates a probability vector and returns it (renormalized if asked).
#[pyfunction]
#[pyo3(signature = (values, normalize = false))]
fn make_dist(values: Vec<f64>, normalize: bool) -> PyResult<Vec<f64>> {
    Ok(dist(values, normalize)?.into_vec())
}

#[pyfunction]
fn escort(p: Vec<f64>, alpha: f64) -> PyResult<Vec<f64>> {
    Ok(genentropy::escort(&dist(p, false)?, alpha).map_err(err)?.into_vec())
}

#[pyfunction]
#[pyo3(signature = (p, tau = -1.0))]
fn shannon(p: Vec<f64>, tau: f64) -> PyResult<f64> {
    genentropy::shannon(&dist(p, false)?, tau).map_err(err)
}

#[pyfunction]
fn nath(p: Vec<f64>, tau: f64, lam: f64, alpha: f64) -> PyResult<f64> {
    genentropy::nath(&dist(p, false)?, tau, lam, alpha).map_err(err)
}

#[pyfunction]
fn renyi(p: Vec<f64>, alpha: f64) -> PyResult<f64> {
    genentropy::renyi(&dist(p, false)?, alpha).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (p, alpha, gamma, tau = -1.0))]
fn tsallis(p: Vec<f64>, alpha: f64, gamma: f64, tau: f64) -> PyResult<f64> {
    genentropy::tsallis(&dist(p, false)?, alpha, gamma, tau).map_err(err)
}

#[pyfunction]
fn sharma_mittal(p: Vec<f64>, q: f64, alpha: f64, gamma: f64) -> PyResult<f64> {
    genentropy::sharma_mittal(&dist(p, false)?, q, alpha, gamma).map_err(err)
}

#[pyfunction]
fn gaussian_entropy(p: Vec<f64>, q: f64, gamma: f64) -> PyResult<f64> {
    genentropy::gaussian_entropy(&dist(p, false)?, q, gamma).map_err(err)
}

#[pyfunction]
fn biparametric(p: Vec<f64>, tau: f64, lam: f64, alpha: f64) -> PyResult<f64> {
    genentropy::biparametric(&dist(p, false)?, tau, lam, alpha).map_err(err)
}

/// `u + v + γuv`.
#[pyfunction]
fn gamma_add(u: f64, v: f64, gamma: f64) -> f64 {
    genentropy::gamma_add(u, v, gamma)
}

/// Pseudo-addition generator `h`.
#[pyclass(name = "Generator", module = "genentropy_py", frozen)]
struct PyGenerator(PseudoAddGenerator);

#[pymethods]
impl PyGenerator {
    #[staticmethod]
    fn linear(a: f64) -> PyResult<Self> {
        PseudoAddGenerator::linear(a).map(PyGenerator).map_err(err)
    }

    #[staticmethod]
    fn gamma_exp(lam: f64, gamma: f64) -> PyResult<Self> {
        PseudoAddGenerator::gamma_exp(lam, gamma).map(PyGenerator).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyGenerator).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("generator serializes")
    }

    fn eval(&self, x: f64) -> PyResult<f64> {
        self.0.eval(x).map_err(err)
    }

    fn invert(&self, y: f64) -> PyResult<f64> {
        self.0.invert(y).map_err(err)
    }

    /// `h(h⁻¹(u) + h⁻¹(v))`.
    fn induced_add(&self, u: f64, v: f64) -> PyResult<f64> {
        genentropy::induced_add(&self.0, u, v).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Generator({})", self.to_json())
    }
}

/// An entropy family with validated parameters, e.g.
/// `Entropy.from_json('{"family": "renyi", "alpha": 2}')`.
#[pyclass(name = "Entropy", module = "genentropy_py", frozen)]
struct PyEntropy(EntropyParams);

#[pymethods]
impl PyEntropy {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(PyEntropy).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("params serialize")
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.0.name()
    }

    /// The axiom system whose composition rule the family satisfies.
    #[getter]
    fn system(&self) -> &'static str {
        self.0.composition_rule().system.as_str()
    }

    fn generator(&self) -> PyGenerator {
        PyGenerator(self.0.generator())
    }

    #[pyo3(signature = (p, normalize = false))]
    fn value(&self, p: Vec<f64>, normalize: bool) -> PyResult<f64> {
        self.0.value(&dist(p, normalize)?).map_err(err)
    }

    /// Conditional entropy `H(Q|P)` of a joint given as rows, under the
    /// family's own composition rule.
    #[pyo3(signature = (rows, normalize = false))]
    fn conditional(&self, rows: Vec<Vec<f64>>, normalize: bool) -> PyResult<f64> {
        let joint = JointDist::new(&rows, mode(normalize)).map_err(err)?;
        genentropy::conditional(&joint, &self.0, &self.0.composition_rule()).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Entropy({})", self.to_json())
    }
}

fn config(seed: u64, trials: usize, simplex_trials: usize) -> TrialConfig {
    TrialConfig {
        trials,
        simplex_trials,
        ..TrialConfig::with_seed(seed)
    }
}

/// Runs the axiom checks for one family; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (entropy, system = None, seed = 42, trials = 1000, simplex_trials = 10000))]
fn verify(
    py: Python<'_>,
    entropy: &PyEntropy,
    system: Option<&str>,
    seed: u64,
    trials: usize,
    simplex_trials: usize,
) -> PyResult<String> {
    let params = entropy.0;
    let system = match system {
        Some(s) => System::parse(s).ok_or_else(|| err(format!("unknown axiom system {s:?}")))?,
        None => params.composition_rule().system,
    };
    let cfg = config(seed, trials, simplex_trials);
    let checks = py
        .detach(|| run_subject(&Subject::Family(params), system, &cfg))
        .map_err(err)?;
    Ok(AxiomReport::new(system.as_str(), seed, trials, checks).to_json())
}

/// Runs the full suite over the default parameter grid; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (seed = 42, trials = 1000, simplex_trials = 10000))]
fn verify_all(py: Python<'_>, seed: u64, trials: usize, simplex_trials: usize) -> PyResult<String> {
    let cfg = config(seed, trials, simplex_trials);
    Ok(py.detach(|| run_suite(&cfg)).map_err(err)?.to_json())
}

#[pymodule]
fn genentropy_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEntropy>()?;
    m.add_class::<PyGenerator>()?;
    m.add_function(wrap_pyfunction!(make_dist, m)?)?;
    m.add_function(wrap_pyfunction!(escort, m)?)?;
    m.add_function(wrap_pyfunction!(shannon, m)?)?;
    m.add_function(wrap_pyfunction!(nath, m)?)?;
    m.add_function(wrap_pyfunction!(renyi, m)?)?;
    m.add_function(wrap_pyfunction!(tsallis, m)?)?;
    m.add_function(wrap_pyfunction!(sharma_mittal, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(biparametric, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_add, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_all, m)?)?;
    Ok(())
}
