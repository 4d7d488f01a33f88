//! Python bindings for the rcd toolkit: exact graded q-expansions, the
//! polynomial weight maps, Rankin-Cohen brackets, decomposition coefficient
//! tables, and the verification harnesses.
//!
//! Exact values cross the boundary as canonical fraction strings (`p/q`,
//! integers without the `/1`); numeric evaluation returns Python complex
//! numbers.

use num_complex::Complex64;
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use rcd_core::brackets::{self, BracketSpec, CoefficientRoute};
use rcd_core::dirichlet;
use rcd_core::forms;
use rcd_core::jets::{
    self, EquivarianceConfig, GroupElement, RoundtripConfig, DEFAULT_SEED,
};
use rcd_core::qseries::{EvalPoint, PiGradedSeries};
use rcd_core::rational::{format_rational, parse_rational};
use rcd_core::report::VerificationReport;
use rcd_core::{Error, ErrorClass};

fn py_err(error: Error) -> PyErr {
    match error.class() {
        ErrorClass::Usage => PyValueError::new_err(error.to_string()),
        ErrorClass::File => PyIOError::new_err(error.to_string()),
        ErrorClass::Internal => PyRuntimeError::new_err(error.to_string()),
    }
}

fn parse_fraction(text: &str) -> PyResult<rcd_core::Rational> {
    parse_rational(text).map_err(PyValueError::new_err)
}

fn parse_route(route: &str) -> PyResult<CoefficientRoute> {
    match route {
        "derived" => Ok(CoefficientRoute::Derived),
        "printed" => Ok(CoefficientRoute::Printed),
        other => Err(PyValueError::new_err(format!(
            "route must be `derived` or `printed`, got `{other}`"
        ))),
    }
}

/// Truncated q-expansion with exact rational coefficients, graded by formal
/// powers of 2*pi*i/h.
#[pyclass(name = "Series", skip_from_py_object)]
#[derive(Clone)]
struct PySeries {
    inner: PiGradedSeries,
}

#[pymethods]
impl PySeries {
    /// Zero series of the given width ("p/q" string) and precision.
    #[staticmethod]
    fn zero(width: &str, precision: usize) -> PyResult<Self> {
        let width = parse_fraction(width)?;
        Ok(PySeries {
            inner: PiGradedSeries::zero(width, precision).map_err(py_err)?,
        })
    }

    /// Series with a single graded slice of coefficients ("p/q" strings).
    #[staticmethod]
    fn from_coefficients(
        width: &str,
        grade: usize,
        coefficients: Vec<String>,
    ) -> PyResult<Self> {
        let width = parse_fraction(width)?;
        let parsed: PyResult<Vec<_>> =
            coefficients.iter().map(|c| parse_fraction(c)).collect();
        let coeffs = parsed?;
        let precision = coeffs.len().saturating_sub(1);
        Ok(PySeries {
            inner: PiGradedSeries::from_graded_coeffs(width, precision, grade, coeffs)
                .map_err(py_err)?,
        })
    }

    fn width(&self) -> String {
        format_rational(self.inner.width())
    }

    fn precision(&self) -> usize {
        self.inner.precision()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn grades(&self) -> Vec<usize> {
        self.inner.grades()
    }

    /// The unique grade of a nonzero homogeneous series.
    fn grade(&self) -> PyResult<usize> {
        self.inner.homogeneous_grade().map_err(py_err)
    }

    /// Coefficients of the given grade slice as fraction strings.
    fn coefficients(&self, grade: usize) -> Vec<String> {
        (0..=self.inner.precision())
            .map(|k| format_rational(&self.inner.coefficient(grade, k)))
            .collect()
    }

    fn coefficient(&self, grade: usize, k: usize) -> String {
        format_rational(&self.inner.coefficient(grade, k))
    }

    fn add(&self, other: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: self.inner.add(&other.inner).map_err(py_err)?,
        })
    }

    fn sub(&self, other: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: self.inner.sub(&other.inner).map_err(py_err)?,
        })
    }

    fn mul(&self, other: &PySeries) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: self.inner.mul(&other.inner).map_err(py_err)?,
        })
    }

    fn scale(&self, factor: &str) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: self.inner.scale(&parse_fraction(factor)?),
        })
    }

    /// r-fold z-derivative; raises every grade by r.
    #[pyo3(signature = (order=1))]
    fn derivative(&self, order: u32) -> PySeries {
        PySeries {
            inner: self.inner.nth_z_derivative(order),
        }
    }

    /// Sums the truncation at z (Im z > 0) using `terms` q-powers.
    fn eval(&self, z: Complex64, terms: usize) -> PyResult<Complex64> {
        let point = EvalPoint::new(z, terms).map_err(py_err)?;
        self.inner.eval_at(&point).map_err(py_err)
    }

    fn __eq__(&self, other: &PySeries) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Series(width={}, precision={}, grades={:?})",
            format_rational(self.inner.width()),
            self.inner.precision(),
            self.inner.grades()
        )
    }
}

/// Named expansion with weight and depth metadata.
#[pyclass(name = "Form", skip_from_py_object)]
#[derive(Clone)]
struct PyForm {
    inner: forms::FormDescriptor,
}

#[pymethods]
impl PyForm {
    /// Eisenstein generator of weight 2, 4, or 6.
    #[staticmethod]
    fn eisenstein(weight: u32, precision: usize) -> PyResult<Self> {
        Ok(PyForm {
            inner: forms::eisenstein(weight, precision).map_err(py_err)?,
        })
    }

    /// The weight-12 cusp form (E4^3 - E6^2) / 1728.
    #[staticmethod]
    fn delta(precision: usize) -> Self {
        PyForm {
            inner: forms::delta(precision),
        }
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyForm {
            inner: forms::load_form(path).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn new(name: &str, weight: u32, depth: u32, series: &PySeries) -> PyResult<Self> {
        Ok(PyForm {
            inner: forms::FormDescriptor::new(name, weight, depth, series.inner.clone())
                .map_err(py_err)?,
        })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        forms::save_form(&self.inner, path).map_err(py_err)
    }

    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn weight(&self) -> u32 {
        self.inner.weight()
    }

    fn depth(&self) -> u32 {
        self.inner.depth()
    }

    fn precision(&self) -> usize {
        self.inner.precision()
    }

    fn series(&self) -> PySeries {
        PySeries {
            inner: self.inner.series().clone(),
        }
    }

    /// r-th z-derivative: weight + 2r, depth + r.
    #[pyo3(signature = (order=1))]
    fn derivative(&self, order: u32) -> PyForm {
        PyForm {
            inner: self.inner.derivative(order),
        }
    }

    fn __eq__(&self, other: &PyForm) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Form(name={:?}, weight={}, depth={}, precision={})",
            self.inner.name(),
            self.inner.weight(),
            self.inner.depth(),
            self.inner.precision()
        )
    }
}

/// Degree-bounded polynomial on the modular side of the correspondence.
#[pyclass(name = "ModularPolynomial", skip_from_py_object)]
#[derive(Clone)]
struct PyModularPolynomial {
    inner: jets::ModularPolynomial,
}

#[pymethods]
impl PyModularPolynomial {
    /// Views a depth-0 form as a constant polynomial of the given degree
    /// bound.
    #[staticmethod]
    fn embed(form: &PyForm, degree_bound: usize) -> PyResult<Self> {
        Ok(PyModularPolynomial {
            inner: jets::ModularPolynomial::embed_modular(&form.inner, degree_bound)
                .map_err(py_err)?,
        })
    }

    fn weight(&self) -> i64 {
        self.inner.weight()
    }

    fn degree_bound(&self) -> usize {
        self.inner.degree_bound()
    }

    fn coefficient(&self, r: usize) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: self.inner.coefficient(r).map_err(py_err)?.clone(),
        })
    }

    /// The weight-raising isomorphism; requires lambda >= 2m + 2 and
    /// weight = lambda - 2m.
    fn lambda_map(&self, lambda: i64) -> PyResult<PyQuasimodularPolynomial> {
        Ok(PyQuasimodularPolynomial {
            inner: self.inner.lambda_map(lambda).map_err(py_err)?,
        })
    }

    /// Max residual of the numeric equivariance identities at z with the
    /// given truncation.
    fn equivariance_residual(
        &self,
        lambda: i64,
        z: Complex64,
        terms: usize,
    ) -> PyResult<f64> {
        let point = EvalPoint::new(z, terms).map_err(py_err)?;
        let mut residual = 0.0f64;
        for gamma in [
            GroupElement::inversion(),
            GroupElement::translation(),
            GroupElement::translation().compose(&GroupElement::inversion()),
        ] {
            residual = residual.max(
                self.inner
                    .check_equivariance(lambda, &gamma, &point)
                    .map_err(py_err)?,
            );
        }
        Ok(residual)
    }

    fn __eq__(&self, other: &PyModularPolynomial) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "ModularPolynomial(weight={}, degree_bound={})",
            self.inner.weight(),
            self.inner.degree_bound()
        )
    }
}

/// Degree-bounded polynomial on the quasimodular side.
#[pyclass(name = "QuasimodularPolynomial", skip_from_py_object)]
#[derive(Clone)]
struct PyQuasimodularPolynomial {
    inner: jets::QuasimodularPolynomial,
}

#[pymethods]
impl PyQuasimodularPolynomial {
    fn weight(&self) -> i64 {
        self.inner.weight()
    }

    fn degree_bound(&self) -> usize {
        self.inner.degree_bound()
    }

    /// The weight-lowering inverse of `ModularPolynomial.lambda_map`.
    fn xi_map(&self) -> PyResult<PyModularPolynomial> {
        Ok(PyModularPolynomial {
            inner: self.inner.xi_map().map_err(py_err)?,
        })
    }

    /// X^l coefficient; l = 0 recovers the underlying quasimodular form.
    fn project(&self, l: usize) -> PyResult<PySeries> {
        Ok(PySeries {
            inner: self.inner.project(l).map_err(py_err)?,
        })
    }

    /// Polynomial product; weights and degree bounds add.
    fn mul(&self, other: &PyQuasimodularPolynomial) -> PyResult<PyQuasimodularPolynomial> {
        Ok(PyQuasimodularPolynomial {
            inner: self.inner.mul(&other.inner).map_err(py_err)?,
        })
    }

    fn __eq__(&self, other: &PyQuasimodularPolynomial) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "QuasimodularPolynomial(weight={}, degree_bound={})",
            self.inner.weight(),
            self.inner.degree_bound()
        )
    }
}

/// Structured pass/fail record from a verification harness.
#[pyclass(name = "Report")]
struct PyReport {
    inner: VerificationReport,
}

#[pymethods]
impl PyReport {
    fn check(&self) -> String {
        self.inner.check().to_string()
    }

    fn passed(&self) -> bool {
        self.inner.passed()
    }

    fn failures(&self) -> usize {
        self.inner.failures()
    }

    fn params(&self) -> Vec<(String, String)> {
        self.inner.params().to_vec()
    }

    /// Per-index rows as (n, lhs, rhs, pass).
    fn rows(&self) -> Vec<(u64, String, String, bool)> {
        self.inner
            .per_index()
            .iter()
            .map(|c| {
                (
                    c.index,
                    format_rational(&c.lhs),
                    format_rational(&c.rhs),
                    c.pass,
                )
            })
            .collect()
    }

    /// Audit rows as (l, printed, derived, agree).
    fn coefficient_rows(&self) -> Vec<(u32, String, String, bool)> {
        self.inner
            .coefficient_table()
            .iter()
            .map(|row| {
                (
                    row.l,
                    format_rational(&row.printed),
                    format_rational(&row.derived),
                    row.agree(),
                )
            })
            .collect()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner.to_json()).expect("reports serialize")
    }

    fn __repr__(&self) -> String {
        format!(
            "Report(check={:?}, passed={}, indices={})",
            self.inner.check(),
            self.inner.passed(),
            self.inner.per_index().len()
        )
    }
}

/// Rankin-Cohen bracket of two depth-0 forms at index w.
#[pyfunction]
fn rankin_cohen(phi: &PyForm, psi: &PyForm, w: u32) -> PyResult<PySeries> {
    let spec =
        BracketSpec::new(phi.inner.weight(), psi.inner.weight(), w).map_err(py_err)?;
    Ok(PySeries {
        inner: brackets::rankin_cohen(&phi.inner, &psi.inner, &spec).map_err(py_err)?,
    })
}

/// [phi, psi]_w - (-1)^w [psi, phi]_w; zero when the symmetry holds.
#[pyfunction]
fn bracket_symmetry_residual(phi: &PyForm, psi: &PyForm, w: u32) -> PyResult<PySeries> {
    let spec =
        BracketSpec::new(phi.inner.weight(), psi.inner.weight(), w).map_err(py_err)?;
    Ok(PySeries {
        inner: brackets::bracket_symmetry_residual(&phi.inner, &psi.inner, &spec)
            .map_err(py_err)?,
    })
}

/// One decomposition coefficient as a fraction string.
#[pyfunction]
#[pyo3(signature = (m, n, mu, nu, l, route="derived"))]
fn a_coefficient(m: u32, n: u32, mu: u32, nu: u32, l: u32, route: &str) -> PyResult<String> {
    let route = parse_route(route)?;
    Ok(format_rational(
        &brackets::a_coefficient(m, n, mu, nu, l, route)
            .map_err(py_err)?
            .value,
    ))
}

/// Proportionality constant between the direct expansion and the bracket.
#[pyfunction]
fn b_constant(m: u32, n: u32, mu: u32, nu: u32, w: u32) -> PyResult<String> {
    Ok(format_rational(
        &brackets::b_constant(m, n, mu, nu, w).map_err(py_err)?,
    ))
}

/// Full audit table [(l, printed, derived, agree)] for given (m, n, mu, nu).
#[pyfunction]
fn coefficient_table(
    m: u32,
    n: u32,
    mu: u32,
    nu: u32,
) -> PyResult<Vec<(u32, String, String, bool)>> {
    let mut rows = Vec::with_capacity((m + n + 1) as usize);
    for l in 0..=(m + n) {
        let printed = brackets::a_coefficient(m, n, mu, nu, l, CoefficientRoute::Printed)
            .map_err(py_err)?
            .value;
        let derived = brackets::a_coefficient(m, n, mu, nu, l, CoefficientRoute::Derived)
            .map_err(py_err)?
            .value;
        let agree = printed == derived;
        rows.push((
            l,
            format_rational(&printed),
            format_rational(&derived),
            agree,
        ));
    }
    Ok(rows)
}

/// Coefficientwise bracket decomposition of phi^(m) psi^(n) through q^n_max.
#[pyfunction]
#[pyo3(signature = (phi, psi, m, n, n_max, route="derived"))]
fn verify_theorem(
    phi: &PyForm,
    psi: &PyForm,
    m: u32,
    n: u32,
    n_max: usize,
    route: &str,
) -> PyResult<PyReport> {
    let route = parse_route(route)?;
    Ok(PyReport {
        inner: dirichlet::verify_theorem(&phi.inner, &psi.inner, m, n, n_max, route)
            .map_err(py_err)?,
    })
}

/// Coefficientwise reconstruction of a polynomial's degree-0 projection
/// from its modular image.
#[pyfunction]
fn verify_prop31(poly: &PyQuasimodularPolynomial, n_max: usize) -> PyResult<PyReport> {
    let lambda = poly.inner.weight();
    Ok(PyReport {
        inner: dirichlet::verify_prop31(&poly.inner, lambda, n_max).map_err(py_err)?,
    })
}

/// Derived coefficients against the closed-form triples on a weight grid.
#[pyfunction]
#[pyo3(signature = (mu_max=20, nu_max=20))]
fn verify_section5(mu_max: u32, nu_max: u32) -> PyResult<PyReport> {
    Ok(PyReport {
        inner: dirichlet::verify_section5(mu_max, nu_max).map_err(py_err)?,
    })
}

/// Binomial-sum identities of the decomposition coefficients.
#[pyfunction]
#[pyo3(signature = (w_max=8, mu_max=12, nu_max=12))]
fn verify_section6(w_max: u32, mu_max: u32, nu_max: u32) -> PyResult<PyReport> {
    Ok(PyReport {
        inner: dirichlet::verify_section6(w_max, mu_max, nu_max).map_err(py_err)?,
    })
}

/// Exact round trip of the weight maps on seeded random polynomials.
#[pyfunction]
#[pyo3(signature = (count=200, seed=DEFAULT_SEED))]
fn verify_roundtrip(count: usize, seed: u64) -> PyReport {
    PyReport {
        inner: jets::roundtrip_harness(&RoundtripConfig {
            count,
            seed,
            ..RoundtripConfig::default()
        }),
    }
}

/// Numeric invariance of pipeline polynomials under the slash actions.
#[pyfunction]
#[pyo3(signature = (precision=40, tol=1e-8))]
fn verify_equivariance(precision: usize, tol: f64) -> PyResult<PyReport> {
    Ok(PyReport {
        inner: jets::equivariance_harness(&EquivarianceConfig {
            precision,
            tolerance: tol,
        })
        .map_err(py_err)?,
    })
}

#[pymodule]
fn pyrcd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PySeries>()?;
    m.add_class::<PyForm>()?;
    m.add_class::<PyModularPolynomial>()?;
    m.add_class::<PyQuasimodularPolynomial>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(rankin_cohen, m)?)?;
    m.add_function(wrap_pyfunction!(bracket_symmetry_residual, m)?)?;
    m.add_function(wrap_pyfunction!(a_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(b_constant, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_table, m)?)?;
    m.add_function(wrap_pyfunction!(verify_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(verify_prop31, m)?)?;
    m.add_function(wrap_pyfunction!(verify_section5, m)?)?;
    m.add_function(wrap_pyfunction!(verify_section6, m)?)?;
    m.add_function(wrap_pyfunction!(verify_roundtrip, m)?)?;
    m.add_function(wrap_pyfunction!(verify_equivariance, m)?)?;
    Ok(())
}
