//! Python bindings for `dodeca-core`.

use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyComplex, PyDict, PyList, PyString};
use serde::Serialize;
use serde_json::Value;

use dodeca_core::abelian::abelian_invariants;
use dodeca_core::census::{
    census_csv, parse_plan, run_plan, shipped_plan, verify_main_lemma, CensusConfig, PlanRow,
};
use dodeca_core::coset::{enumerate_cosets, EnumerationOptions, Strategy, DEFAULT_MAX_COSETS};
use dodeca_core::field::FieldElement;
use dodeca_core::fp::{catalog, Presentation};
use dodeca_core::representation::{
    torsion_certificate, verify_representation, DEFAULT_TORSION_DEPTH,
};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (_, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(a) => {
            let items = a
                .iter()
                .map(|x| to_py(py, x))
                .collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn serialize<'py>(py: Python<'py>, x: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(x).map_err(value_err)?)
}

fn enumeration(max_cosets: usize, strategy: &str) -> PyResult<EnumerationOptions> {
    if max_cosets == 0 {
        return Err(PyValueError::new_err("max_cosets must be at least 1"));
    }
    Ok(EnumerationOptions {
        strategy: strategy
            .parse::<Strategy>()
            .map_err(PyValueError::new_err)?,
        max_cosets,
    })
}

fn config(max_cosets: usize, strategy: &str, torsion_depth: usize) -> PyResult<CensusConfig> {
    if torsion_depth == 0 {
        return Err(PyValueError::new_err("torsion_depth must be at least 1"));
    }
    Ok(CensusConfig {
        enumeration: enumeration(max_cosets, strategy)?,
        torsion_depth,
    })
}

fn plan_rows(plan: Option<&str>) -> PyResult<Vec<PlanRow>> {
    match plan {
        None => Ok(shipped_plan()),
        Some(text) => parse_plan(text).map_err(value_err),
    }
}

/// An element of Q(u, ω) with u² = u + 1 and ω² = ω − 1, written
/// a + b·u + c·ω + d·uω.
#[pyclass(
    name = "FieldElement",
    module = "dodeca",
    frozen,
    eq,
    skip_from_py_object
)]
#[derive(Clone, PartialEq)]
struct PyFieldElement(FieldElement);

#[pymethods]
impl PyFieldElement {
    #[new]
    #[pyo3(signature = (a, b = 0, c = 0, d = 0))]
    fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self(FieldElement::from_ints([a, b, c, d]))
    }

    #[staticmethod]
    fn u() -> Self {
        Self(FieldElement::u())
    }

    #[staticmethod]
    fn omega() -> Self {
        Self(FieldElement::omega())
    }

    /// Coefficients as exact rational strings.
    fn coefficients(&self) -> Vec<String> {
        self.0
            .coefficients()
            .iter()
            .map(|q| q.to_string())
            .collect()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn inverse(&self) -> PyResult<Self> {
        self.0
            .inv()
            .map(Self)
            .map_err(|e| PyZeroDivisionError::new_err(e.to_string()))
    }

    fn conjugate(&self) -> Self {
        Self(self.0.complex_conjugate())
    }

    fn __add__(&self, o: PyRef<'_, Self>) -> Self {
        Self(&self.0 + &o.0)
    }

    fn __sub__(&self, o: PyRef<'_, Self>) -> Self {
        Self(&self.0 - &o.0)
    }

    fn __mul__(&self, o: PyRef<'_, Self>) -> Self {
        Self(&self.0 * &o.0)
    }

    fn __truediv__(&self, o: PyRef<'_, Self>) -> PyResult<Self> {
        self.0
            .div(&o.0)
            .map(Self)
            .map_err(|e| PyZeroDivisionError::new_err(e.to_string()))
    }

    fn __neg__(&self) -> Self {
        Self(-&self.0)
    }

    fn __pow__(&self, n: i64, _modulo: Option<Py<PyAny>>) -> PyResult<Self> {
        self.0
            .pow(n)
            .map(Self)
            .map_err(|e| PyZeroDivisionError::new_err(e.to_string()))
    }

    fn __complex__<'py>(&self, py: Python<'py>) -> Bound<'py, PyComplex> {
        let z = self.0.to_complex();
        PyComplex::from_doubles(py, z.re, z.im)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("FieldElement({})", self.0)
    }
}

/// A finite presentation with named generators.
#[pyclass(name = "Presentation", module = "dodeca", frozen)]
struct PyPresentation(Presentation);

#[pymethods]
impl PyPresentation {
    #[new]
    fn new(generators: Vec<String>, relators: Vec<String>) -> PyResult<Self> {
        let g: Vec<&str> = generators.iter().map(String::as_str).collect();
        let r: Vec<&str> = relators.iter().map(String::as_str).collect();
        Presentation::parse(&g, &r).map(Self).map_err(value_err)
    }

    /// A presentation from the built-in catalog, e.g. `gamma53333`.
    #[staticmethod]
    fn builtin(key: &str) -> PyResult<Self> {
        catalog()
            .presentation(key)
            .cloned()
            .map(Self)
            .map_err(value_err)
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.0.names().to_vec()
    }

    #[getter]
    fn relators(&self) -> Vec<String> {
        self.0
            .relators()
            .iter()
            .map(|w| w.display(self.0.names()).to_string())
            .collect()
    }

    /// Index of the subgroup generated by `subgroup`, or None past the cap.
    #[pyo3(signature = (subgroup, max_cosets = DEFAULT_MAX_COSETS, strategy = "hlt"))]
    fn coset_index(
        &self,
        py: Python<'_>,
        subgroup: Vec<String>,
        max_cosets: usize,
        strategy: &str,
    ) -> PyResult<Option<usize>> {
        let opts = enumeration(max_cosets, strategy)?;
        let gens = subgroup
            .iter()
            .map(|s| self.0.parse_word(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(value_err)?;
        let t = py
            .detach(|| enumerate_cosets(&self.0, &gens, opts))
            .map_err(value_err)?;
        Ok(t.index())
    }

    /// Abelian invariants, e.g. "Z" or "Z/2 x Z".
    fn abelian_invariants(&self) -> String {
        abelian_invariants(&self.0).to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "Presentation({:?}, {:?})",
            self.generators(),
            self.relators()
        )
    }
}

/// Runs the representation checks; returns {"pass": bool, "checks": [...]}.
#[pyfunction]
#[pyo3(signature = (max_cosets = DEFAULT_MAX_COSETS))]
fn verify_rep<'py>(py: Python<'py>, max_cosets: usize) -> PyResult<Bound<'py, PyAny>> {
    let opts = enumeration(max_cosets, "hlt")?;
    let r = py
        .detach(|| verify_representation(opts))
        .map_err(value_err)?;
    serialize(
        py,
        &serde_json::json!({ "pass": r.pass(), "checks": r.checks }),
    )
}

/// Replays a plan (the shipped one by default) and returns one dict per row.
#[pyfunction]
#[pyo3(signature = (plan = None, max_cosets = DEFAULT_MAX_COSETS, strategy = "hlt", torsion_depth = DEFAULT_TORSION_DEPTH))]
fn census<'py>(
    py: Python<'py>,
    plan: Option<&str>,
    max_cosets: usize,
    strategy: &str,
    torsion_depth: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(max_cosets, strategy, torsion_depth)?;
    let rows = plan_rows(plan)?;
    let out = py.detach(|| run_plan(&rows, &cfg)).map_err(value_err)?;
    let list = PyList::empty(py);
    for r in &out {
        let d = serialize(py, r)?;
        d.set_item("match", r.matches())?;
        list.append(d)?;
    }
    Ok(list.into_any())
}

/// Same as `census` but rendered as CSV.
#[pyfunction]
#[pyo3(signature = (plan = None, max_cosets = DEFAULT_MAX_COSETS, strategy = "hlt", torsion_depth = DEFAULT_TORSION_DEPTH))]
fn census_table(
    py: Python<'_>,
    plan: Option<&str>,
    max_cosets: usize,
    strategy: &str,
    torsion_depth: usize,
) -> PyResult<String> {
    let cfg = config(max_cosets, strategy, torsion_depth)?;
    let rows = plan_rows(plan)?;
    let out = py.detach(|| run_plan(&rows, &cfg)).map_err(value_err)?;
    Ok(census_csv(&out))
}

/// Evaluates one meridian assignment such as "0 1 0 1 0".
#[pyfunction]
#[pyo3(signature = (pattern, max_cosets = DEFAULT_MAX_COSETS, torsion_depth = DEFAULT_TORSION_DEPTH))]
fn census_row<'py>(
    py: Python<'py>,
    pattern: &str,
    max_cosets: usize,
    torsion_depth: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(max_cosets, "hlt", torsion_depth)?;
    let row = PlanRow::from_pattern(pattern).map_err(value_err)?;
    let mut out = py.detach(|| run_plan(&[row], &cfg)).map_err(value_err)?;
    let mut d = serde_json::to_value(out.remove(0)).map_err(value_err)?;
    d.as_object_mut().map(|m| m.remove("plan"));
    to_py(py, &d)
}

/// Shortest elliptic product of the pattern's meridians, as (word, order).
#[pyfunction]
#[pyo3(signature = (pattern, depth = DEFAULT_TORSION_DEPTH))]
fn torsion(py: Python<'_>, pattern: &str, depth: usize) -> PyResult<Option<(String, u32)>> {
    let row = PlanRow::from_pattern(pattern).map_err(value_err)?;
    let gens = row.generators();
    let labels: Vec<String> = row.meridians().iter().map(|m| m.key()).collect();
    let c = py
        .detach(|| torsion_certificate(&gens, depth))
        .map_err(value_err)?;
    Ok(c.map(|c| (c.describe(&labels), c.order)))
}

/// Checks the conjugacy-class statements; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (plan = None, max_cosets = DEFAULT_MAX_COSETS, torsion_depth = DEFAULT_TORSION_DEPTH))]
fn lemma<'py>(
    py: Python<'py>,
    plan: Option<&str>,
    max_cosets: usize,
    torsion_depth: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = config(max_cosets, "hlt", torsion_depth)?;
    let rows = plan_rows(plan)?;
    let r = py
        .detach(|| verify_main_lemma(&rows, &cfg))
        .map_err(value_err)?;
    serialize(py, &r)
}

#[pymodule]
fn dodeca(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFieldElement>()?;
    m.add_class::<PyPresentation>()?;
    m.add_function(wrap_pyfunction!(verify_rep, m)?)?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(census_table, m)?)?;
    m.add_function(wrap_pyfunction!(census_row, m)?)?;
    m.add_function(wrap_pyfunction!(torsion, m)?)?;
    m.add_function(wrap_pyfunction!(lemma, m)?)?;
    m.add("DEFAULT_MAX_COSETS", DEFAULT_MAX_COSETS)?;
    m.add("DEFAULT_TORSION_DEPTH", DEFAULT_TORSION_DEPTH)?;
    Ok(())
}
