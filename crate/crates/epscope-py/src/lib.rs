//! Python bindings for the chain-impurity spectral library: the closed-form
//! spectrum, exceptional-point location, Puiseux expansion, winding and
//! encirclement, counting formulas, and the scaling observables.
//!
//! Complex energies cross the boundary as Python `complex`; errors raised by
//! the library surface as `ValueError` with the library message.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use epscope::counting::{self, SystemShape};
use epscope::eplocator::{self, PrototypeSelfEnergy};
use epscope::expansion;
use epscope::model::{self, ModelParams, RiemannSheet, Sign};
use epscope::qpt::{self, CriticalSide};
use epscope::spectrum::{self, SpectralPoint};
use epscope::topology::{self, ContourSpec, Permutation};

fn err(e: epscope::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_sheet(name: &str) -> PyResult<RiemannSheet> {
    match name {
        "first" | "I" => Ok(RiemannSheet::First),
        "second" | "II" => Ok(RiemannSheet::Second),
        _ => Err(PyValueError::new_err(format!(
            "sheet must be 'first' or 'second', got '{name}'"
        ))),
    }
}

fn parse_side(name: &str) -> PyResult<Sign> {
    match name {
        "plus" | "+" => Ok(Sign::Plus),
        "minus" | "-" => Ok(Sign::Minus),
        _ => Err(PyValueError::new_err(format!(
            "side must be 'plus' or 'minus', got '{name}'"
        ))),
    }
}

fn point_dict<'py>(py: Python<'py>, point: &SpectralPoint) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    dict.set_item("z", point.z)?;
    dict.set_item("k", point.k)?;
    dict.set_item(
        "sheet",
        match point.sheet {
            RiemannSheet::First => "first",
            RiemannSheet::Second => "second",
        },
    )?;
    dict.set_item("label", point.label.as_str())?;
    Ok(dict)
}

/// Model parameters (ε_d, g, F); F defaults to the chain value 1/2.
#[pyclass(name = "Model", skip_from_py_object)]
#[derive(Clone)]
struct Model {
    params: ModelParams,
}

#[pymethods]
impl Model {
    #[new]
    #[pyo3(signature = (eps_d, g, f=0.5))]
    fn new(eps_d: Complex64, g: f64, f: f64) -> PyResult<Self> {
        if g < 0.0 {
            return Err(PyValueError::new_err("coupling g must be nonnegative"));
        }
        Ok(Model {
            params: ModelParams::with_f(eps_d, g, f),
        })
    }

    #[getter]
    fn eps_d(&self) -> Complex64 {
        self.params.eps_d
    }

    #[getter]
    fn g(&self) -> f64 {
        self.params.g
    }

    #[getter]
    fn f(&self) -> f64 {
        self.params.f
    }

    /// Closed-form eigenvalue pair (z_minus, z_plus).
    fn eigenvalues(&self) -> PyResult<(Complex64, Complex64)> {
        spectrum::eigenvalues(&self.params).map_err(err)
    }

    /// Effective wave numbers (k_minus, k_plus).
    fn wave_numbers(&self) -> PyResult<(Complex64, Complex64)> {
        spectrum::wave_numbers(&self.params).map_err(err)
    }

    /// Both solutions with sheet and label metadata.
    fn spectral_pair<'py>(&self, py: Python<'py>) -> PyResult<(Bound<'py, PyDict>, Bound<'py, PyDict>)> {
        let pair = spectrum::spectral_pair(&self.params).map_err(err)?;
        Ok((point_dict(py, &pair.minus)?, point_dict(py, &pair.plus)?))
    }

    /// Discriminant value and factors (value, f1, f2, prefactor).
    fn discriminant(&self) -> PyResult<(f64, f64, f64, f64)> {
        let d = eplocator::discriminant(&self.params).map_err(err)?;
        Ok((d.value, d.f1, d.f2, d.prefactor))
    }

    /// Decay width Γ = −2 Im z_minus.
    fn decay_width(&self) -> PyResult<f64> {
        qpt::decay_width(&self.params).map_err(err)
    }

    /// Anti-bound pseudo-gap z_plus − z_minus inside its window.
    fn pseudo_gap(&self) -> PyResult<f64> {
        qpt::pseudo_gap(&self.params).map_err(err)
    }

    /// Resonance phase φ_res ∈ (0, π).
    fn resonance_phase(&self) -> PyResult<f64> {
        spectrum::resonance_phase(&self.params).map_err(err)
    }

    /// Correlation C(x) ∝ e^{i k_res x} through the resonant state.
    fn correlation(&self, x: u32) -> PyResult<Complex64> {
        qpt::correlation(x, &self.params).map_err(err)
    }

    /// Observable bundle {gamma, gap, xi_inverse, side}.
    fn observables<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let obs = qpt::observables(&self.params).map_err(err)?;
        let dict = PyDict::new(py);
        dict.set_item("gamma", obs.gamma)?;
        dict.set_item("gap", obs.gap)?;
        dict.set_item("xi_inverse", obs.xi_inverse)?;
        dict.set_item(
            "side",
            match obs.side {
                CriticalSide::Critical => "critical",
                CriticalSide::NonCritical => "non-critical",
                CriticalSide::AtEp => "at-ep",
            },
        )?;
        Ok(dict)
    }

    /// Ascending coefficients of the w = e^{ik} polynomial.
    fn w_polynomial(&self) -> Vec<Complex64> {
        counting::w_polynomial(&self.params).coefficients
    }

    /// Roots of the w-polynomial as (w, z) pairs.
    fn w_roots(&self) -> PyResult<Vec<(Complex64, Complex64)>> {
        counting::w_spectrum(&self.params)
            .map(|roots| roots.into_iter().map(|r| (r.w, r.z)).collect())
            .map_err(err)
    }

    /// Largest eigenvalue of the (n+1)-site finite-chain matrix.
    fn finite_chain_top(&self, n: usize) -> PyResult<f64> {
        model::finite_chain_matrix(n, &self.params)
            .map(|chain| chain.top_eigenvalue())
            .map_err(err)
    }

    /// All eigenvalues of the finite-chain matrix, ascending.
    fn finite_chain_eigenvalues(&self, n: usize) -> PyResult<Vec<f64>> {
        model::finite_chain_matrix(n, &self.params)
            .map(|chain| chain.eigenvalues())
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Model(eps_d={}, g={}, f={})",
            self.params.eps_d, self.params.g, self.params.f
        )
    }
}

/// Truncated fractional-power expansion around one exceptional point.
#[pyclass(name = "PuiseuxSeries")]
struct PySeries {
    inner: expansion::PuiseuxSeries,
}

#[pymethods]
impl PySeries {
    #[getter]
    fn z_center(&self) -> Complex64 {
        self.inner.z_center
    }

    #[getter]
    fn eps_bar(&self) -> Complex64 {
        self.inner.ep.eps_bar
    }

    #[getter]
    fn period(&self) -> u32 {
        self.inner.period
    }

    #[getter]
    fn coefficients(&self) -> Vec<Complex64> {
        self.inner.coefficients.clone()
    }

    /// Evaluate branch h at ε_d, truncating after `order` coefficients.
    /// Returns (value, extrapolated_flag).
    #[pyo3(signature = (eps_d, branch_h=0, order=None))]
    fn evaluate(
        &self,
        eps_d: Complex64,
        branch_h: usize,
        order: Option<usize>,
    ) -> PyResult<(Complex64, bool)> {
        let order = order.unwrap_or(self.inner.coefficients.len());
        let value = self.inner.evaluate(eps_d, branch_h, order).map_err(err)?;
        Ok((value.value, value.extrapolated))
    }

    /// Exact eigenvalue of the coalescing family at the same λ.
    #[pyo3(signature = (lam, branch_h=0))]
    fn closed_form_on_path(&self, lam: Complex64, branch_h: usize) -> PyResult<Complex64> {
        self.inner.closed_form_on_path(lam, branch_h).map_err(err)
    }
}

/// √(z² − 1) with the branch cut on [−1, 1].
#[pyfunction]
fn branch_sqrt(z: Complex64) -> Complex64 {
    model::branch_sqrt(z)
}

/// Self-energy Σ(z) on the given sheet ("first" or "second").
#[pyfunction]
fn self_energy(z: Complex64, sheet: &str, g: f64) -> PyResult<Complex64> {
    Ok(model::self_energy(z, parse_sheet(sheet)?, g))
}

/// dΣ/dz on the given sheet.
#[pyfunction]
fn self_energy_derivative(z: Complex64, sheet: &str, g: f64) -> PyResult<Complex64> {
    model::self_energy_derivative(z, parse_sheet(sheet)?, g).map_err(err)
}

/// A wave number with −cos k = z; branch "plus" is the bounded profile.
#[pyfunction]
#[pyo3(signature = (z, branch="plus"))]
fn k_of_z(z: Complex64, branch: &str) -> PyResult<Complex64> {
    Ok(model::k_of_z(z, parse_side(branch)?))
}

/// Window thresholds {eps_delta, eps_bar, eps_bar_real} at coupling g.
#[pyfunction]
fn thresholds<'py>(py: Python<'py>, g: f64) -> PyResult<Bound<'py, PyDict>> {
    let t = spectrum::thresholds(g);
    let dict = PyDict::new(py);
    dict.set_item("eps_delta_plus", t.eps_delta_plus)?;
    dict.set_item("eps_delta_minus", t.eps_delta_minus)?;
    dict.set_item("eps_bar_plus", t.eps_bar_plus)?;
    dict.set_item("eps_bar_minus", t.eps_bar_minus)?;
    dict.set_item("eps_bar_real", t.eps_bar_real)?;
    Ok(dict)
}

/// Exceptional points ±√(1 − 2g²) with a reality flag.
#[pyfunction]
fn ep_locations(g: f64) -> (Complex64, Complex64, bool) {
    let locations = eplocator::ep_locations_closed_form(g);
    (locations.plus, locations.minus, locations.real)
}

/// Closed-form coalescence centers ±(1 − g²)/√(1 − 2g²).
#[pyfunction]
fn ep_centers(g: f64) -> PyResult<(f64, f64)> {
    eplocator::centers_closed_form(g).map_err(err)
}

/// Newton search for a coalescence center from a complex guess.
#[pyfunction]
#[pyo3(signature = (g, z_guess, sheet="second", tol=1e-12, max_iter=100))]
fn locate_ep<'py>(
    py: Python<'py>,
    g: f64,
    z_guess: Complex64,
    sheet: &str,
    tol: f64,
    max_iter: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let sigma = PrototypeSelfEnergy { g };
    let record =
        eplocator::locate_ep_numeric(&sigma, parse_sheet(sheet)?, z_guess, tol, max_iter)
            .map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("eps_bar", record.eps_bar)?;
    dict.set_item("z_center", record.z_center)?;
    dict.set_item("period", record.period)?;
    dict.set_item(
        "sign_q",
        match record.sign_q {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        },
    )?;
    dict.set_item("factor", record.factor)?;
    Ok(dict)
}

/// Closed-form Puiseux coefficients on one side ("plus"/"minus").
#[pyfunction]
#[pyo3(signature = (g, side="plus", order=8))]
fn puiseux_series(g: f64, side: &str, order: usize) -> PyResult<PySeries> {
    expansion::puiseux_coefficients_prototype(parse_side(side)?, g, order)
        .map(|inner| PySeries { inner })
        .map_err(err)
}

/// Winding number of z − ε_d − Σ(z) around a circle; returns (p, residual).
#[pyfunction]
#[pyo3(signature = (g, eps_d, center, radius, sheet="second", points=2048))]
fn winding_period(
    g: f64,
    eps_d: Complex64,
    center: Complex64,
    radius: f64,
    sheet: &str,
    points: usize,
) -> PyResult<(i64, f64)> {
    let params = ModelParams::complex(eps_d, g);
    let contour = ContourSpec::new(center, radius, parse_sheet(sheet)?).with_points(points);
    topology::winding_period(&contour, &params).map_err(err)
}

/// Encircle the positive exceptional point; returns "swap" or "identity".
#[pyfunction]
#[pyo3(signature = (g, delta, steps=400, loops=1, side="plus"))]
fn encircle(g: f64, delta: f64, steps: usize, loops: usize, side: &str) -> PyResult<&'static str> {
    let permutation =
        topology::encircle_loops(parse_side(side)?, g, delta, steps, loops).map_err(err)?;
    Ok(match permutation {
        Permutation::Swap => "swap",
        Permutation::Identity => "identity",
    })
}

/// Number of discrete solutions 2^{n_C}(n_D + n_C).
#[pyfunction]
fn n_solutions(nd: u32, nc: u32) -> PyResult<u64> {
    SystemShape::new(nd, nc)
        .map(counting::n_solutions)
        .map_err(err)
}

/// Number of exceptional points N(N − 1) of the open system.
#[pyfunction]
fn n_eps_open(nd: u32, nc: u32) -> PyResult<u64> {
    SystemShape::new(nd, nc)
        .map(counting::n_eps_open)
        .map_err(err)
}

/// Number of exceptional points n(n − 1) of a closed n-level system.
#[pyfunction]
fn n_eps_closed(n: u64) -> u64 {
    counting::n_eps_closed(n)
}

/// Critical exponents (beta_order, z_dynamic) fitted on (lo, hi) ⊂ (0, ε̄₊).
#[pyfunction]
fn critical_exponents(g: f64, lo: f64, hi: f64) -> PyResult<(f64, f64)> {
    qpt::fit_critical_exponents(g, (lo, hi))
        .map(|e| (e.beta_order, e.z_dynamic))
        .map_err(err)
}

#[pymodule]
fn epscope_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(branch_sqrt, m)?)?;
    m.add_function(wrap_pyfunction!(self_energy, m)?)?;
    m.add_function(wrap_pyfunction!(self_energy_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(k_of_z, m)?)?;
    m.add_function(wrap_pyfunction!(thresholds, m)?)?;
    m.add_function(wrap_pyfunction!(ep_locations, m)?)?;
    m.add_function(wrap_pyfunction!(ep_centers, m)?)?;
    m.add_function(wrap_pyfunction!(locate_ep, m)?)?;
    m.add_function(wrap_pyfunction!(puiseux_series, m)?)?;
    m.add_function(wrap_pyfunction!(winding_period, m)?)?;
    m.add_function(wrap_pyfunction!(encircle, m)?)?;
    m.add_function(wrap_pyfunction!(n_solutions, m)?)?;
    m.add_function(wrap_pyfunction!(n_eps_open, m)?)?;
    m.add_function(wrap_pyfunction!(n_eps_closed, m)?)?;
    m.add_function(wrap_pyfunction!(critical_exponents, m)?)?;
    Ok(())
}
