//! Python bindings for the actinwire channel model and network simulator.
//!
//! Build with `maturin develop` (or `cargo build --release` and copy the
//! shared library to `actinwire.so`), then:
//!
//! ```python
//! import actinwire
//! c = actinwire.build_filament(10.0)
//! c.group_delay_s(0.0)
//! ```

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use actinwire::config::Config;
use actinwire::frequency_response::{self as fr, DelayMethod, PhaseMode};
use actinwire::monomer_circuit::{self as mc, CircuitMode};
use actinwire::wannet::{self, Dimension};
use actinwire::{charge_transport as ct, ModelError};

/// `(freq_hz, omega, atten_db, phase_deg, delay_s)`.
type SweepRow = (f64, f64, f64, f64, f64);

fn to_py(e: ModelError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = String>>(s: &str) -> PyResult<T> {
    s.parse().map_err(PyValueError::new_err)
}

#[pyclass(name = "PhysicalParams", from_py_object)]
#[derive(Clone, Copy)]
struct PyPhysicalParams {
    inner: mc::PhysicalParams,
}

#[pymethods]
impl PyPhysicalParams {
    #[new]
    #[pyo3(signature = (r_actin_m=2.5e-9, lambda_b_m=7.13e-10, epsilon_r=80.0, mu_r=1.0, rho_ohm_m=0.826, l_monomer_m=5.4e-9, h_turns=15.0))]
    fn new(
        r_actin_m: f64,
        lambda_b_m: f64,
        epsilon_r: f64,
        mu_r: f64,
        rho_ohm_m: f64,
        l_monomer_m: f64,
        h_turns: f64,
    ) -> PyResult<Self> {
        let inner = mc::PhysicalParams {
            r_actin: r_actin_m,
            lambda_b: lambda_b_m,
            epsilon_r,
            mu_r,
            rho: rho_ohm_m,
            l_monomer: l_monomer_m,
            h_turns,
            ..Default::default()
        };
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Per-monomer `(C0, L0, R0)` in farads, henries and ohms.
    fn monomer_rlc(&self) -> PyResult<(f64, f64, f64)> {
        let m = mc::monomer_rlc(&self.inner).map_err(to_py)?;
        Ok((m.c0, m.l0, m.r0))
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

#[pyclass(name = "TransportParams", from_py_object)]
#[derive(Clone, Copy)]
struct PyTransportParams {
    inner: ct::TransportParams,
}

#[pymethods]
impl PyTransportParams {
    #[new]
    #[pyo3(signature = (omega=2.3810, mu1=10.0, mu2=1.0, alpha_s=7.0e-7, beta_m=1.08e-8, charge_per_monomer=4.0, monomers_per_um=370.0, t_stop_s=Some(60e-6)))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        omega: f64,
        mu1: f64,
        mu2: f64,
        alpha_s: f64,
        beta_m: f64,
        charge_per_monomer: f64,
        monomers_per_um: f64,
        t_stop_s: Option<f64>,
    ) -> PyResult<Self> {
        let inner = ct::TransportParams {
            omega,
            mu1,
            mu2,
            alpha: alpha_s,
            beta: beta_m,
            charge_per_monomer,
            monomers_per_um,
            t_stop_s,
        };
        inner.validate().map_err(to_py)?;
        Ok(Self { inner })
    }

    fn velocity(&self, t_s: f64) -> f64 {
        ct::velocity(t_s, &self.inner)
    }

    fn max_throughput(&self, t_s: f64) -> f64 {
        ct::max_throughput(t_s, &self.inner)
    }

    fn charge_capacity(&self, length_um: f64) -> f64 {
        ct::charge_capacity(length_um, &self.inner)
    }

    /// Seconds to push `message_bits` through, or `None` if the channel
    /// stops first.
    fn transmission_time(&self, message_bits: u64) -> PyResult<Option<f64>> {
        Ok(ct::transmission_time(message_bits, &self.inner)
            .map_err(to_py)?
            .seconds())
    }
}

#[pyclass(name = "FilamentCircuit", skip_from_py_object)]
struct PyFilamentCircuit {
    inner: mc::FilamentCircuit,
}

#[pymethods]
impl PyFilamentCircuit {
    #[getter]
    fn length_um(&self) -> f64 {
        self.inner.length_um
    }

    #[getter]
    fn r_eq(&self) -> f64 {
        self.inner.r_eq
    }

    #[getter]
    fn l_eq(&self) -> f64 {
        self.inner.l_eq
    }

    #[getter]
    fn c_eq(&self) -> f64 {
        self.inner.c_eq
    }

    /// `(p1, p2)` in rad/s with `p1 < p2 < 0`.
    fn poles(&self) -> PyResult<(f64, f64)> {
        let p = fr::compute_poles(&self.inner).map_err(to_py)?;
        Ok((p.p1, p.p2))
    }

    fn attenuation_db(&self, omega: f64) -> PyResult<f64> {
        fr::attenuation_db(&self.inner, omega).map_err(to_py)
    }

    #[pyo3(signature = (omega, mode="standard"))]
    fn phase_deg(&self, omega: f64, mode: &str) -> PyResult<f64> {
        fr::phase_deg(&self.inner, omega, parse(mode)?).map_err(to_py)
    }

    /// `method` is "closed" or "fd"; `fd_step` defaults to 1e-4·max(|p2|, ω).
    #[pyo3(signature = (omega, mode="standard", method="closed", fd_step=None))]
    fn group_delay_s(
        &self,
        omega: f64,
        mode: &str,
        method: &str,
        fd_step: Option<f64>,
    ) -> PyResult<f64> {
        let method = match method {
            "closed" => DelayMethod::ClosedForm,
            "fd" => DelayMethod::FiniteDifference(fd_step),
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown delay method `{other}`"
                )))
            }
        };
        fr::group_delay_s(&self.inner, omega, parse::<PhaseMode>(mode)?, method).map_err(to_py)
    }

    /// List of `(freq_hz, omega, atten_db, phase_deg, delay_s)` tuples.
    #[pyo3(signature = (f_start_hz, f_stop_hz, n_points, mode="standard"))]
    fn sweep(
        &self,
        f_start_hz: f64,
        f_stop_hz: f64,
        n_points: usize,
        mode: &str,
    ) -> PyResult<Vec<SweepRow>> {
        let points =
            fr::sweep(&self.inner, f_start_hz, f_stop_hz, n_points, parse(mode)?).map_err(to_py)?;
        Ok(points
            .iter()
            .map(|p| (p.freq_hz, p.omega, p.atten_db, p.phase_deg, p.delay_s))
            .collect())
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "FilamentCircuit(length_um={}, r_eq={:e}, l_eq={:e}, c_eq={:e}, source={})",
            c.length_um, c.r_eq, c.l_eq, c.c_eq, c.source
        )
    }
}

#[pyfunction]
#[pyo3(signature = (length_um, mode="paper", n_eff_per_um=200.0, params=None))]
fn build_filament(
    length_um: f64,
    mode: &str,
    n_eff_per_um: f64,
    params: Option<PyPhysicalParams>,
) -> PyResult<PyFilamentCircuit> {
    let p = params.map(|p| p.inner).unwrap_or_default();
    let inner = mc::build_filament(&p, length_um, parse::<CircuitMode>(mode)?, n_eff_per_um)
        .map_err(to_py)?;
    Ok(PyFilamentCircuit { inner })
}

#[pyfunction]
#[pyo3(signature = (source, target, radius_um, dimension=2, max_length_um=100.0))]
fn hit_probability(
    source: [f64; 3],
    target: [f64; 3],
    radius_um: f64,
    dimension: u8,
    max_length_um: f64,
) -> PyResult<f64> {
    let dim = Dimension::try_from(dimension).map_err(PyValueError::new_err)?;
    Ok(wannet::hit_probability(
        &source,
        &target,
        radius_um,
        dim,
        max_length_um,
    ))
}

/// Runs a seed campaign for a TOML scenario and returns one dict per seed.
#[pyfunction]
#[pyo3(signature = (config_toml, seeds=None))]
fn simulate<'py>(
    py: Python<'py>,
    config_toml: &str,
    seeds: Option<u64>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let no: &[&str] = &[];
    let cfg =
        Config::from_toml_str(config_toml, no).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let scenario = cfg.scenario_config();
    let seeds = wannet::campaign_seeds(cfg.scenario.rng_seed, seeds.unwrap_or(cfg.scenario.seeds));
    let results = py
        .detach(|| wannet::run_campaign(&scenario, &seeds))
        .map_err(to_py)?;
    results
        .iter()
        .map(|m| {
            let d = PyDict::new(py);
            d.set_item("seed", m.seed)?;
            d.set_item("delivered", m.delivered)?;
            d.set_item("delivery_time_s", m.delivery_time_s)?;
            d.set_item("hops", m.hops_to_gateway)?;
            d.set_item("wires_attempted", m.wires_attempted)?;
            d.set_item("wires_established", m.wires_established)?;
            d.set_item("timeline", m.informed_fraction_timeline.clone())?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
#[pyo3(name = "actinwire")]
fn py_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPhysicalParams>()?;
    m.add_class::<PyTransportParams>()?;
    m.add_class::<PyFilamentCircuit>()?;
    m.add_function(wrap_pyfunction!(build_filament, m)?)?;
    m.add_function(wrap_pyfunction!(hit_probability, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
