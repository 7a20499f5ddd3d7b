//! Python bindings for the `adasub` library.

use adasub::bundled;
use adasub::evaluation::{exact_favg, mc_favg, EvaluationReport};
use adasub::format::{parse_instance, serialize_instance};
use adasub::oracles::{
    self, check_adaptive_monotone, check_adaptive_submodular, monotonicity_ratio, optimal_policy,
    OracleLimits,
};
use adasub::policies::{simulate, Action, Policy};
use adasub::{Error, Problem};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

/// `(action, item, state)` for one executed step.
type Step = (String, Option<String>, Option<String>);
/// Whether a property holds, with a witness when it does not.
type Verdict = (bool, Option<String>);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::TooLarge { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// A validated problem instance.
#[pyclass(module = "adasub_py", frozen)]
struct Instance {
    problem: Problem,
}

impl Instance {
    fn wrap(inst: adasub::Instance) -> PyResult<Self> {
        Ok(Instance {
            problem: Problem::new(inst).map_err(py_err)?,
        })
    }

    fn policy(&self, id: &str, sample_set: Option<&str>) -> PyResult<Policy> {
        let sample = sample_set
            .map(|s| self.problem.instance().parse_set(s))
            .transpose()
            .map_err(py_err)?;
        Policy::from_id(id, sample).map_err(py_err)
    }
}

#[pymethods]
impl Instance {
    /// Parses instance-file text.
    #[staticmethod]
    #[pyo3(signature = (text, name = "instance"))]
    fn parse(text: &str, name: &str) -> PyResult<Self> {
        Self::wrap(parse_instance(text, name).map_err(py_err)?)
    }

    /// Loads a bundled instance by name.
    #[staticmethod]
    fn bundled(name: &str) -> PyResult<Self> {
        Self::wrap(bundled::load(name).map_err(py_err)?)
    }

    #[getter]
    fn name(&self) -> &str {
        self.problem.instance().name()
    }

    #[getter]
    fn items(&self) -> Vec<String> {
        let inst = self.problem.instance();
        inst.item_ids()
            .map(|e| inst.item_name(e).to_string())
            .collect()
    }

    #[getter]
    fn constraint(&self) -> String {
        self.problem.instance().constraint().to_string()
    }

    #[getter]
    fn budget(&self) -> f64 {
        self.problem.instance().budget()
    }

    fn __len__(&self) -> usize {
        self.problem.len()
    }

    /// The instance in file format.
    fn to_text(&self) -> PyResult<String> {
        serialize_instance(self.problem.instance()).map_err(py_err)
    }

    /// Expected utility of a policy, exactly or by Monte Carlo.
    #[pyo3(signature = (policy, method = "exact", samples = 100_000, seed = 42, sample_set = None))]
    fn evaluate(
        &self,
        py: Python<'_>,
        policy: &str,
        method: &str,
        samples: u64,
        seed: u64,
        sample_set: Option<&str>,
    ) -> PyResult<Evaluation> {
        let policy = self.policy(policy, sample_set)?;
        let p = &self.problem;
        let rep = py.detach(|| match method {
            "exact" => exact_favg(p, &policy, OracleLimits::default().node_limit),
            "mc" => mc_favg(p, &policy, samples, seed),
            other => Err(Error::InvalidArgument(format!("unknown method `{other}`"))),
        });
        Ok(Evaluation::from(rep.map_err(py_err)?))
    }

    /// Runs a policy once and returns `(action, item, state)` steps and the utility.
    #[pyo3(signature = (policy, seed = 42, sample_set = None))]
    fn run(&self, policy: &str, seed: u64, sample_set: Option<&str>) -> PyResult<(Vec<Step>, f64)> {
        let policy = self.policy(policy, sample_set)?;
        policy.validate(&self.problem).map_err(py_err)?;
        let traj = simulate(&self.problem, &policy, seed).map_err(py_err)?;
        let inst = self.problem.instance();
        let steps = traj
            .steps
            .iter()
            .map(|s| {
                let (action, item) = match s.action {
                    Action::Select(e) => ("select", Some(inst.item_name(e).to_string())),
                    Action::NoOp => ("no-op", None),
                    Action::Dummy(d) => ("dummy", Some(format!("d{d}"))),
                };
                let state = s.state.map(|st| inst.states().token(st).to_string());
                (action.to_string(), item, state)
            })
            .collect();
        Ok((steps, traj.utility))
    }

    /// Optimal adaptive value and the rendered optimal policy.
    fn optimum(&self, py: Python<'_>) -> PyResult<(f64, String)> {
        let (tree, value) = py
            .detach(|| optimal_policy(&self.problem, &OracleLimits::default()))
            .map_err(py_err)?;
        Ok((value, tree.render(self.problem.instance())))
    }

    /// Adaptive monotonicity ratio.
    fn ratio(&self, py: Python<'_>) -> PyResult<Ratio> {
        let r = py
            .detach(|| monotonicity_ratio(&self.problem, &OracleLimits::default()))
            .map_err(py_err)?;
        let inst = self.problem.instance();
        Ok(Ratio {
            m: r.m,
            raw: r.raw,
            feasible: r.feasible,
            policy: r.witness.as_ref().map(|w| w.policy.render(inst)),
            follow_up: r.witness.as_ref().map(|w| w.follow_up.render(inst)),
        })
    }

    /// `(adaptive_submodular, adaptive_monotone)` with witnesses on failure.
    #[pyo3(signature = (tolerance = 1e-9))]
    fn check(&self, py: Python<'_>, tolerance: f64) -> PyResult<(Verdict, Verdict)> {
        let limits = OracleLimits::default();
        let inst = self.problem.instance();
        let (sub, mono) = py
            .detach(|| {
                Ok::<_, Error>((
                    check_adaptive_submodular(&self.problem, tolerance, &limits)?,
                    check_adaptive_monotone(&self.problem, tolerance, &limits)?,
                ))
            })
            .map_err(py_err)?;
        let pair = |o: &oracles::CheckOutcome| (o.passed(), o.witness().map(|w| w.describe(inst)));
        Ok((pair(&sub), pair(&mono)))
    }

    /// Checks a policy against its approximation guarantee.
    #[pyo3(signature = (policy, sample_set = None))]
    fn certify(
        &self,
        py: Python<'_>,
        policy: &str,
        sample_set: Option<&str>,
    ) -> PyResult<Certificate> {
        let policy = self.policy(policy, sample_set)?;
        let r = py
            .detach(|| oracles::certify(&self.problem, &policy, &OracleLimits::default()))
            .map_err(py_err)?;
        Ok(Certificate {
            m: r.m,
            opt_value: r.opt_value,
            policy_value: r.policy_value,
            theoretical_ratio: r.theoretical_ratio,
            achieved_ratio: r.achieved_ratio,
            passed: r.pass,
        })
    }

    fn __repr__(&self) -> String {
        let inst = self.problem.instance();
        format!(
            "Instance({:?}, n={}, {} {})",
            inst.name(),
            inst.len(),
            inst.constraint(),
            inst.budget()
        )
    }
}

#[pyclass(module = "adasub_py", frozen, get_all)]
struct Evaluation {
    value: f64,
    method: String,
    samples: Option<u64>,
    std_error: Option<f64>,
}

impl From<EvaluationReport> for Evaluation {
    fn from(r: EvaluationReport) -> Self {
        Evaluation {
            value: r.value,
            method: r.method.to_string(),
            samples: r.samples,
            std_error: r.std_error,
        }
    }
}

#[pyclass(module = "adasub_py", frozen, get_all)]
struct Ratio {
    m: f64,
    raw: f64,
    feasible: f64,
    policy: Option<String>,
    follow_up: Option<String>,
}

#[pyclass(module = "adasub_py", frozen, get_all)]
struct Certificate {
    m: f64,
    opt_value: f64,
    policy_value: f64,
    theoretical_ratio: f64,
    achieved_ratio: Option<f64>,
    passed: bool,
}

/// Guaranteed approximation ratio for monotonicity ratio `m`.
#[pyfunction]
#[pyo3(signature = (m, constraint = "cardinality"))]
fn bound(m: f64, constraint: &str) -> PyResult<f64> {
    let c = constraint.parse().map_err(py_err)?;
    oracles::ratio_bound(m, c).map_err(py_err)
}

/// Names of the bundled instances.
#[pyfunction]
fn bundled_names() -> Vec<String> {
    bundled::names().map(str::to_string).collect()
}

#[pymodule]
fn adasub_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Instance>()?;
    m.add_class::<Evaluation>()?;
    m.add_class::<Ratio>()?;
    m.add_class::<Certificate>()?;
    m.add_function(wrap_pyfunction!(bound, m)?)?;
    m.add_function(wrap_pyfunction!(bundled_names, m)?)?;
    Ok(())
}
