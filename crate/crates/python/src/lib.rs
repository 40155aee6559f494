use complexkit::output::{series_row, Summary, SERIES_HEADER};
use complexkit::propagator::Route;
use complexkit::scenarios::{
    self, ComplexityReport, RunOptions, ScenarioName, ScenarioParams, ScenarioSpec, TolerancePolicy,
};
use complexkit::{
    krylov, Error, FieldConfiguration, IntegratorOptions, PureQubitState, Trajectory,
};
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(_) | Error::NotNormalized { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

fn route(numeric: bool) -> Route {
    if numeric {
        Route::Numeric
    } else {
        Route::Best
    }
}

/// Summary as a dict (NaN becomes None) plus one list per series column.
fn report_dict<'py>(py: Python<'py>, r: &ComplexityReport) -> PyResult<Bound<'py, PyDict>> {
    let json = serde_json::to_string(&Summary::from_report(r))
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let summary = py.import("json")?.call_method1("loads", (json,))?;
    let out = PyDict::new(py);
    out.set_item("summary", summary)?;
    let rows: Vec<[f64; 14]> = (0..r.trajectory.len()).map(|i| series_row(r, i)).collect();
    for (j, name) in SERIES_HEADER.iter().enumerate() {
        out.set_item(*name, PyList::new(py, rows.iter().map(|row| row[j]))?)?;
    }
    Ok(out)
}

/// Runs a reference scenario; unset parameters keep their defaults.
#[pyfunction]
#[pyo3(signature = (name, samples=2049, numeric=false, omega=None, omega0=None, nu0=None, beta0=None, nu=None, t_f=None))]
#[allow(clippy::too_many_arguments)]
fn run_scenario<'py>(
    py: Python<'py>,
    name: &str,
    samples: usize,
    numeric: bool,
    omega: Option<f64>,
    omega0: Option<f64>,
    nu0: Option<f64>,
    beta0: Option<f64>,
    nu: Option<f64>,
    t_f: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let name: ScenarioName = name.parse().map_err(to_py)?;
    let mut p = ScenarioParams::default();
    let pairs = [
        ("omega", omega),
        ("omega0", omega0),
        ("nu0", nu0),
        ("beta0", beta0),
        ("nu", nu),
        ("t_f", t_f),
    ];
    for (k, v) in pairs {
        if let Some(v) = v {
            p.set(k, v).map_err(to_py)?;
        }
    }
    let spec = ScenarioSpec::new(name, &p).map_err(to_py)?;
    let opts = RunOptions {
        samples,
        route: route(numeric),
        ..RunOptions::default()
    };
    let report = py
        .detach(|| scenarios::run_scenario(&spec, &opts))
        .map_err(to_py)?;
    report_dict(py, &report)
}

/// Evolves the state at angles `(theta0, phi0)` under a JSON field config.
#[pyfunction]
#[pyo3(signature = (config, t1, theta0=0.0, phi0=0.0, t0=0.0, samples=2049, numeric=false))]
#[allow(clippy::too_many_arguments)]
fn trace<'py>(
    py: Python<'py>,
    config: &str,
    t1: f64,
    theta0: f64,
    phi0: f64,
    t0: f64,
    samples: usize,
    numeric: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg =
        FieldConfiguration::from_json(config).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let psi0 = PureQubitState::from_angles(theta0, phi0).map_err(to_py)?;
    let report = py
        .detach(|| {
            let traj = Trajectory::build(
                &cfg,
                &psi0,
                t0,
                t1,
                samples,
                IntegratorOptions::default(),
                route(numeric),
            )?;
            scenarios::analyze(&traj)
        })
        .map_err(to_py)?;
    report_dict(py, &report)
}

/// Runs the golden-value table. Returns `(all_passed, rendered_table)`.
#[pyfunction]
#[pyo3(signature = (strict=false, quadrature_tolerance=None))]
fn verify(
    py: Python<'_>,
    strict: bool,
    quadrature_tolerance: Option<f64>,
) -> PyResult<(bool, String)> {
    let mut policy = if strict {
        TolerancePolicy::strict()
    } else {
        TolerancePolicy::default()
    };
    if let Some(t) = quadrature_tolerance {
        if t.is_nan() || t <= 0.0 {
            return Err(PyValueError::new_err(
                "quadrature_tolerance must be positive",
            ));
        }
        policy.quadrature_override = Some(t);
    }
    let table = py.detach(|| scenarios::verify_all(&policy));
    Ok((table.all_passed(), table.render()))
}

/// Krylov complexity of `psi_t` relative to `psi0`, both given as amplitude pairs.
#[pyfunction]
fn krylov_complexity(psi0: [Complex64; 2], psi_t: [Complex64; 2]) -> PyResult<f64> {
    let a = PureQubitState::from_amplitudes(psi0).map_err(to_py)?;
    let b = PureQubitState::from_amplitudes(psi_t).map_err(to_py)?;
    Ok(krylov::krylov_from_bloch(&a.to_bloch(), &b.to_bloch()))
}

/// Closed-form Krylov complexity of the rotating field started in |0⟩.
#[pyfunction]
fn rotating_field_krylov(omega: f64, nu: f64, t: f64) -> f64 {
    krylov::rotating_field_krylov(omega, nu, t)
}

#[pyfunction]
fn scenario_names() -> Vec<&'static str> {
    ScenarioName::ALL.iter().map(|n| n.as_str()).collect()
}

#[pymodule]
fn pycomplexkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(krylov_complexity, m)?)?;
    m.add_function(wrap_pyfunction!(rotating_field_krylov, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_names, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
