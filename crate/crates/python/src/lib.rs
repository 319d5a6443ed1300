//! Python bindings: the main types and operations, driven in-process.
//!
//! Build the cdylib and import it as `scalefree_py` (see python/smoke_test.py
//! for the copy-and-import dance without maturin).

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use scalefree::{
    asymptotic_correction as core_correction, extended_unity as core_extended_unity,
    fit_exponent, golden_cf as core_golden_cf, invert_to_infinitesimal as core_invert,
    prime_ladder_walk, rel_abs as core_rel_abs, scan_range, sieve_pi as core_sieve_pi,
    solve_rescaled as core_solve_rescaled, ultra_norm as core_ultra_norm, PAdicNumber,
    RescalingSchedule, UltrametricTree,
};

fn to_py_err(e: scalefree::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A bounded-precision p-adic number in canonical form.
#[pyclass(from_py_object)]
#[derive(Clone)]
struct PAdic {
    inner: PAdicNumber,
}

#[pymethods]
impl PAdic {
    /// Build `p^r * (digits[0] + digits[1] p + ...)`, canonicalized.
    #[new]
    #[pyo3(signature = (prime, digits, r = 0, precision = 32))]
    fn new(prime: u64, digits: Vec<u64>, r: i64, precision: usize) -> PyResult<Self> {
        Ok(Self {
            inner: PAdicNumber::with_precision(prime, r, &digits, precision).map_err(to_py_err)?,
        })
    }

    fn add(&self, other: &PAdic) -> PyResult<PAdic> {
        Ok(PAdic {
            inner: self.inner.add(&other.inner).map_err(to_py_err)?,
        })
    }

    fn sub(&self, other: &PAdic) -> PyResult<PAdic> {
        Ok(PAdic {
            inner: self.inner.sub(&other.inner).map_err(to_py_err)?,
        })
    }

    fn mul(&self, other: &PAdic) -> PyResult<PAdic> {
        Ok(PAdic {
            inner: self.inner.mul(&other.inner).map_err(to_py_err)?,
        })
    }

    /// The p-adic absolute value as an exact fraction `(numerator, denominator)`.
    fn abs_fraction(&self) -> (BigInt, BigInt) {
        let abs = self.inner.abs();
        (abs.numer().clone(), abs.denom().clone())
    }

    /// Order-reversing embedding into the reals; zero raises ValueError.
    fn monna(&self) -> PyResult<f64> {
        self.inner.monna().map_err(to_py_err)
    }

    fn valuation(&self) -> Option<i64> {
        self.inner.valuation()
    }

    fn digits(&self) -> Vec<u64> {
        self.inner.digits().to_vec()
    }

    fn prime(&self) -> u64 {
        self.inner.p()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __repr__(&self) -> String {
        match self.inner.valuation() {
            Some(r) => {
                let digits: Vec<String> = self
                    .inner
                    .digits()
                    .iter()
                    .take(6)
                    .map(|d| d.to_string())
                    .collect();
                format!(
                    "PAdic(p={}, r={r}, digits=[{}...])",
                    self.inner.p(),
                    digits.join(",")
                )
            }
            None => format!("PAdic(p={}, zero)", self.inner.p()),
        }
    }
}

/// Log-based absolute value of `t_e` relative to the scale `delta`.
#[pyfunction]
fn rel_abs(t_e: f64, delta: f64) -> PyResult<f64> {
    core_rel_abs(t_e, delta).map_err(to_py_err)
}

/// Extended norm: returns `(regime, value)`.
#[pyfunction]
fn ultra_norm(value: f64, delta: f64, cap: f64) -> PyResult<(String, f64)> {
    let scalar = core_ultra_norm(value, delta, cap).map_err(to_py_err)?;
    let regime = match scalar.regime {
        scalefree::Regime::Finite => "finite",
        scalefree::Regime::Infinitesimal => "infinitesimal",
        scalefree::Regime::Infinite => "infinite",
    };
    Ok((regime.to_string(), scalar.value))
}

/// Extended norm serialized to the JSON interchange form.
#[pyfunction]
fn ultra_norm_json(value: f64, delta: f64, cap: f64) -> PyResult<String> {
    Ok(core_ultra_norm(value, delta, cap)
        .map_err(to_py_err)?
        .to_json())
}

/// Inversion rule: returns `(t_tilde, mu)`.
#[pyfunction]
fn invert_to_infinitesimal(t: f64, delta: f64, lam: f64) -> PyResult<(f64, f64)> {
    core_invert(t, delta, lam).map_err(to_py_err)
}

/// Iterate `x <- 1/(1+x)`: returns `(value, error_ratios)`.
#[pyfunction]
fn golden_cf(iters: usize) -> PyResult<(f64, Vec<f64>)> {
    let cf = core_golden_cf(iters).map_err(to_py_err)?;
    Ok((cf.value, cf.error_ratios))
}

/// Exact prime count up to `limit`.
#[pyfunction]
fn sieve_pi(limit: u64) -> PyResult<u64> {
    Ok(core_sieve_pi(limit).map_err(to_py_err)?.pi_limit())
}

/// Inversion count of the prime-ladder walk (equals the prime count).
#[pyfunction]
fn ladder_count(x_max: f64) -> PyResult<u64> {
    Ok(prime_ladder_walk(x_max).map_err(to_py_err)?.inversion_count)
}

/// Closed-form solution `C / ln t` of the rescaled equation.
#[pyfunction]
fn solve_rescaled(c: f64, t: f64) -> PyResult<f64> {
    core_solve_rescaled(c, t).map_err(to_py_err)
}

/// Predicted correction `t ln(1/t) * pi * (1 - t^nu)`.
#[pyfunction]
fn asymptotic_correction(t: f64, pi_value: u64, nu: f64) -> PyResult<f64> {
    core_correction(t, pi_value, nu).map_err(to_py_err)
}

/// Run a rescaling schedule: returns `(etas, final_product, left_value)`.
#[pyfunction]
#[pyo3(signature = (eta, levels, alphas = None, epsilons = None))]
fn iterate_schedule(
    eta: f64,
    levels: usize,
    alphas: Option<Vec<f64>>,
    epsilons: Option<Vec<f64>>,
) -> PyResult<(Vec<f64>, f64, f64)> {
    let alphas = alphas.unwrap_or_else(|| vec![1.0; levels]);
    let epsilons = epsilons.unwrap_or_else(|| vec![0.0; levels]);
    let schedule = RescalingSchedule::new(eta, alphas, epsilons, levels).map_err(to_py_err)?;
    let trace = schedule.iterate().map_err(to_py_err)?;
    Ok((
        trace.etas().to_vec(),
        trace.final_product(),
        trace.left_value(),
    ))
}

/// `T(eta) = (1 + eta) * prod (1 + sigma_q)` over a prime window.
#[pyfunction]
fn extended_unity(eta: f64, primes: Vec<u64>, sigmas: Vec<f64>) -> PyResult<f64> {
    if primes.len() != sigmas.len() {
        return Err(PyValueError::new_err("primes and sigmas differ in length"));
    }
    let window: Vec<(u64, f64)> = primes.into_iter().zip(sigmas).collect();
    Ok(core_extended_unity(eta, &window).map_err(to_py_err)?.value)
}

/// Sieve, scan, and fit in one call: returns `(exponent, intercept, r2)`.
#[pyfunction]
fn pnt_fit(x_min: f64, x_max: f64, points: usize) -> PyResult<(f64, f64, f64)> {
    let scan = scan_range(x_min, x_max, points).map_err(to_py_err)?;
    let fit = fit_exponent(&scan, x_min, x_max).map_err(to_py_err)?;
    Ok((fit.exponent, fit.intercept, fit.r2))
}

/// Ultrametric ball tree of same-length digit vectors, as JSON.
#[pyfunction]
fn ball_tree_json(prime: u64, points: Vec<Vec<u64>>) -> PyResult<String> {
    let precision = points.iter().map(|p| p.len()).max().unwrap_or(1).max(1);
    let values: Result<Vec<PAdicNumber>, _> = points
        .iter()
        .map(|digits| PAdicNumber::with_precision(prime, 0, digits, precision))
        .collect();
    let tree = UltrametricTree::build(&values.map_err(to_py_err)?).map_err(to_py_err)?;
    Ok(tree.to_json())
}

#[pymodule]
fn scalefree_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PAdic>()?;
    m.add_function(wrap_pyfunction!(rel_abs, m)?)?;
    m.add_function(wrap_pyfunction!(ultra_norm, m)?)?;
    m.add_function(wrap_pyfunction!(ultra_norm_json, m)?)?;
    m.add_function(wrap_pyfunction!(invert_to_infinitesimal, m)?)?;
    m.add_function(wrap_pyfunction!(golden_cf, m)?)?;
    m.add_function(wrap_pyfunction!(sieve_pi, m)?)?;
    m.add_function(wrap_pyfunction!(ladder_count, m)?)?;
    m.add_function(wrap_pyfunction!(solve_rescaled, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_correction, m)?)?;
    m.add_function(wrap_pyfunction!(iterate_schedule, m)?)?;
    m.add_function(wrap_pyfunction!(extended_unity, m)?)?;
    m.add_function(wrap_pyfunction!(pnt_fit, m)?)?;
    m.add_function(wrap_pyfunction!(ball_tree_json, m)?)?;
    Ok(())
}
