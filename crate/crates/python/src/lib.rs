//! Python bindings. Reports are returned as JSON strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;
use sumdil::bounds::{self, WTable};
use sumdil::fourier;
use sumdil::literal::parse_residue_set;
use sumdil::localize;
use sumdil::rectify;
use sumdil::search::{self, SampleMode, SearchOptions};

fn err(e: sumdil::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json<T: Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// A subset of Z/pZ.
#[pyclass(name = "ResidueSet", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyResidueSet(sumdil::ResidueSet);

#[pymethods]
impl PyResidueSet {
    #[new]
    fn new(p: u64, elements: Vec<i64>) -> PyResult<Self> {
        sumdil::ResidueSet::from_integers(p as i64, &elements)
            .map(Self)
            .map_err(err)
    }

    /// Parses `p=11;{0,1,2}`.
    #[staticmethod]
    fn parse(literal: &str) -> PyResult<Self> {
        parse_residue_set(literal).map(Self).map_err(err)
    }

    #[getter]
    fn modulus(&self) -> u64 {
        self.0.modulus()
    }

    #[getter]
    fn elements(&self) -> Vec<u64> {
        self.0.elements().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __contains__(&self, a: i64) -> bool {
        self.0.contains(a.rem_euclid(self.0.modulus() as i64) as u64)
    }

    fn __repr__(&self) -> String {
        format!("ResidueSet('{}')", self.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn dilate(&self, t: i64) -> Self {
        Self(self.0.dilate(t))
    }

    fn translate(&self, v: i64) -> Self {
        Self(self.0.translate(v))
    }

    fn sum_of_dilates(&self, t: i64) -> PyResult<Self> {
        self.0.sum_of_dilates(t).map(Self).map_err(err)
    }

    fn canonical_form(&self) -> Self {
        Self(self.0.canonical_form())
    }

    /// `{p, sizeA, bias, argmax, eta}` as JSON.
    fn bias_summary(&self) -> PyResult<String> {
        to_json(&fourier::indicator_dft(&self.0).map_err(err)?.summary())
    }

    fn magnitudes(&self) -> PyResult<Vec<f64>> {
        Ok(fourier::indicator_dft(&self.0).map_err(err)?.magnitudes)
    }

    fn bias_lower_bound(&self, t: i64) -> PyResult<f64> {
        fourier::bias_lower_bound(&self.0, t).map_err(err)
    }

    fn concentration_check(&self, beta: f64) -> PyResult<String> {
        to_json(&localize::concentration_check(&self.0, beta).map_err(err)?)
    }

    fn pipeline(&self, t: i64) -> PyResult<String> {
        to_json(&rectify::run_proof_pipeline(&self.0, t).map_err(err)?)
    }
}

#[pyfunction]
fn f_t(t: i64, c: f64) -> PyResult<f64> {
    bounds::f_t(t, c).map_err(err)
}

#[pyfunction]
fn critical_density(t: i64) -> PyResult<f64> {
    bounds::critical_density(t).map_err(err)
}

/// Density `c` with `f_t(c) = x`.
#[pyfunction]
fn solve_density(t: i64, x: f64) -> PyResult<f64> {
    bounds::f_t_inverse_density(t, x).map_err(err)
}

#[pyfunction]
fn lower_bound(p: u64, size: u64, t: i64) -> PyResult<f64> {
    bounds::lower_bound(p, size, t).map_err(err)
}

/// Bound profile `{t, c, c0, f, w, ...}` as JSON.
#[pyfunction]
fn bound_profile(t: i64, c: f64) -> PyResult<String> {
    to_json(&bounds::BoundProfile::new(t, c, &WTable::default()).map_err(err)?)
}

#[pyfunction]
fn concentration(beta: f64, eta: f64) -> PyResult<f64> {
    Ok(bounds::concentration_m(beta, eta).map_err(err)?.m)
}

#[pyfunction]
#[pyo3(signature = (t, k, p=None, cap=None, witness_cap=16))]
fn search_min(t: i64, k: u64, p: Option<u64>, cap: Option<i64>, witness_cap: usize) -> PyResult<String> {
    let opts = SearchOptions {
        witness_cap,
        ..SearchOptions::default()
    };
    let table = WTable::default();
    let report = match p {
        Some(p) => search::exhaustive_min_sumset_modp_with(p, t, k, &opts, &table),
        None => search::exhaustive_min_sumset_integers_with(k, t, cap.unwrap_or(3 * k as i64), &opts, &table),
    };
    to_json(&report.map_err(err)?)
}

/// Exhaustive when `sample` is None, otherwise `sample` seeded random sets.
#[pyfunction]
#[pyo3(signature = (p, t, sample=None, seed=42))]
fn verify(p: u64, t: i64, sample: Option<u64>, seed: u64) -> PyResult<String> {
    let mode = match sample {
        Some(n) => SampleMode::Sample {
            n,
            seed,
            max_size: None,
        },
        None => SampleMode::Exhaustive,
    };
    to_json(&search::verify_lower_bound(p, t, mode).map_err(err)?)
}

#[pymodule]
fn sumdil_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyResidueSet>()?;
    m.add_function(wrap_pyfunction!(f_t, m)?)?;
    m.add_function(wrap_pyfunction!(critical_density, m)?)?;
    m.add_function(wrap_pyfunction!(solve_density, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(bound_profile, m)?)?;
    m.add_function(wrap_pyfunction!(concentration, m)?)?;
    m.add_function(wrap_pyfunction!(search_min, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
