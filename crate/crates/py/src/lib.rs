//! Python bindings: the field and graph types plus the recovery,
//! census, and counterexample entry points. Structured results come back
//! as JSON strings (the same models the CLI prints), so Python callers
//! can `json.loads` them.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use grassmann_codes::counterexamples;
use grassmann_codes::error::Error;
use grassmann_codes::field::Field;
use grassmann_codes::grassmann::{classify_maximal_cliques, GraphKind, GrassmannGraph};
use grassmann_codes::recovery::{recover_and_verify, RecoverOptions, Route, SpecialSetMode};
use grassmann_codes::report::{CensusJson, InstanceJson};
use grassmann_codes::subspace::{self, Ambient};
use grassmann_codes::Caps;

fn pyerr(e: Error) -> PyErr {
    match e {
        Error::Violation(_) => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// GF(q) arithmetic on integer encodings.
#[pyclass(frozen)]
struct Gf {
    inner: Field,
}

#[pymethods]
impl Gf {
    #[new]
    fn new(q: u64) -> PyResult<Self> {
        Ok(Gf {
            inner: Field::new(q).map_err(pyerr)?,
        })
    }

    fn q(&self) -> u8 {
        self.inner.q()
    }

    fn characteristic(&self) -> u8 {
        self.inner.characteristic()
    }

    fn extension_degree(&self) -> u8 {
        self.inner.extension_degree()
    }

    fn elements(&self) -> Vec<u8> {
        self.inner.elements().iter().map(|e| e.encoding()).collect()
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u8> {
        let f = &self.inner;
        let (a, b) = (f.element(a).map_err(pyerr)?, f.element(b).map_err(pyerr)?);
        Ok(f.add(a, b).map_err(pyerr)?.encoding())
    }

    fn sub(&self, a: u64, b: u64) -> PyResult<u8> {
        let f = &self.inner;
        let (a, b) = (f.element(a).map_err(pyerr)?, f.element(b).map_err(pyerr)?);
        Ok(f.sub(a, b).map_err(pyerr)?.encoding())
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u8> {
        let f = &self.inner;
        let (a, b) = (f.element(a).map_err(pyerr)?, f.element(b).map_err(pyerr)?);
        Ok(f.mul(a, b).map_err(pyerr)?.encoding())
    }

    fn neg(&self, a: u64) -> PyResult<u8> {
        let f = &self.inner;
        let a = f.element(a).map_err(pyerr)?;
        Ok(f.neg(a).map_err(pyerr)?.encoding())
    }

    fn inv(&self, a: u64) -> PyResult<u8> {
        let f = &self.inner;
        let a = f.element(a).map_err(pyerr)?;
        Ok(f.inv(a).map_err(pyerr)?.encoding())
    }

    fn spec_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.spec())
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("Gf({})", self.inner.q())
    }
}

/// A Grassmann graph (kind "gamma") or its non-degenerate subgraph
/// (kind "delta"), with vertices keyed by canonical basis text.
#[pyclass(frozen)]
struct Grassmann {
    inner: GrassmannGraph,
}

#[pymethods]
impl Grassmann {
    #[new]
    #[pyo3(signature = (n, k, q, kind = "gamma"))]
    fn new(n: usize, k: usize, q: u64, kind: &str) -> PyResult<Self> {
        let ambient = Ambient::new(n, k, q).map_err(pyerr)?;
        let kind = match kind {
            "gamma" => GraphKind::Full,
            "delta" => GraphKind::NonDegenerate,
            other => {
                return Err(PyValueError::new_err(format!(
                    "kind must be 'gamma' or 'delta', got '{other}'"
                )))
            }
        };
        Ok(Grassmann {
            inner: GrassmannGraph::build(&ambient, kind, &Caps::default()).map_err(pyerr)?,
        })
    }

    fn vertex_count(&self) -> usize {
        self.inner.graph.vertex_count()
    }

    fn edge_count(&self) -> usize {
        self.inner.graph.edge_count()
    }

    fn vertices(&self) -> Vec<String> {
        self.inner.graph.keys().to_vec()
    }

    fn vertex(&self, u: u32) -> PyResult<String> {
        self.check_vertex(u)?;
        Ok(self.inner.graph.key(u).to_string())
    }

    fn neighbors(&self, u: u32) -> PyResult<Vec<u32>> {
        self.check_vertex(u)?;
        Ok(self.inner.graph.neighbors(u).to_vec())
    }

    fn has_edge(&self, u: u32, v: u32) -> PyResult<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.inner.graph.has_edge(u, v))
    }

    fn index_of(&self, basis_text: &str) -> PyResult<Option<u32>> {
        let field = self.inner.ambient.field();
        let s = subspace::SubspaceBasis::from_text(field, self.inner.ambient.n(), basis_text)
            .map_err(pyerr)?;
        Ok(self.inner.vertex_of(&s))
    }

    fn is_degenerate_vertex(&self, u: u32) -> PyResult<bool> {
        self.check_vertex(u)?;
        Ok(self.inner.bases[u as usize].is_degenerate())
    }

    fn __repr__(&self) -> String {
        format!(
            "Grassmann(n={}, k={}, q={}, vertices={}, edges={})",
            self.inner.ambient.n(),
            self.inner.ambient.k(),
            self.inner.ambient.q(),
            self.inner.graph.vertex_count(),
            self.inner.graph.edge_count()
        )
    }
}

impl Grassmann {
    fn check_vertex(&self, u: u32) -> PyResult<()> {
        if (u as usize) < self.inner.graph.vertex_count() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!("vertex {u} out of range")))
        }
    }
}

/// [t]_q, the number of points of PG(t-1, q).
#[pyfunction]
fn count_points(t: u32, q: u64) -> u128 {
    subspace::count_points(t, q)
}

/// Gaussian binomial [m choose d]_q.
#[pyfunction]
fn gaussian_binomial(m: u32, d: u32, q: u64) -> u128 {
    subspace::gaussian_binomial(m, d, q)
}

/// Canonical texts of every d-subspace of F_q^n.
#[pyfunction]
#[pyo3(signature = (n, q, d, cap = 2_000_000))]
fn enumerate_subspaces(n: usize, q: u64, d: usize, cap: u64) -> PyResult<Vec<String>> {
    let field = Field::new(q).map_err(pyerr)?;
    let bases = subspace::enumerate_subspaces(&field, n, d, cap).map_err(pyerr)?;
    Ok(bases.iter().map(|b| b.text()).collect())
}

/// Runs the recovery pipeline; returns the verdict report as JSON.
#[pyfunction]
#[pyo3(signature = (n, k, q, route = "auto", mode = "auto", exploratory = false))]
fn recover(
    n: usize,
    k: usize,
    q: u64,
    route: &str,
    mode: &str,
    exploratory: bool,
) -> PyResult<String> {
    let ambient = Ambient::new(n, k, q).map_err(pyerr)?;
    let opts = RecoverOptions {
        route: match route {
            "auto" => Route::Auto,
            "stars" => Route::Stars,
            "tops" => Route::Tops,
            "n4" => Route::N4,
            other => return Err(PyValueError::new_err(format!("unknown route '{other}'"))),
        },
        mode: match mode {
            "auto" => SpecialSetMode::Auto,
            "blind" => SpecialSetMode::Blind,
            "assisted" => SpecialSetMode::Assisted,
            other => return Err(PyValueError::new_err(format!("unknown mode '{other}'"))),
        },
        exploratory,
        caps: Caps::default(),
        timing: false,
    };
    let verdict = recover_and_verify(&ambient, &opts).map_err(pyerr)?;
    serde_json::to_string(&verdict).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Classifies every maximal clique of the non-degenerate graph; returns
/// the census as JSON.
#[pyfunction]
fn classify_cliques(n: usize, k: usize, q: u64) -> PyResult<String> {
    let ambient = Ambient::new(n, k, q).map_err(pyerr)?;
    let delta =
        GrassmannGraph::build(&ambient, GraphKind::NonDegenerate, &Caps::default()).map_err(pyerr)?;
    let census = classify_maximal_cliques(&delta, &Caps::default()).map_err(pyerr)?;
    let json = CensusJson::from_census(InstanceJson::new(n, k, q), &census);
    serde_json::to_string(&json).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

/// Reproduces one of the packaged counterexamples; returns its report as
/// JSON.
#[pyfunction]
#[pyo3(signature = (which, n, k, q, sweep = false))]
fn run_example(which: u8, n: usize, k: usize, q: u64, sweep: bool) -> PyResult<String> {
    let ambient = Ambient::new(n, k, q).map_err(pyerr)?;
    let report =
        counterexamples::run_example(&ambient, which, sweep, &Caps::default()).map_err(pyerr)?;
    serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn grassmann_codes_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Gf>()?;
    m.add_class::<Grassmann>()?;
    m.add_function(wrap_pyfunction!(count_points, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_subspaces, m)?)?;
    m.add_function(wrap_pyfunction!(recover, m)?)?;
    m.add_function(wrap_pyfunction!(classify_cliques, m)?)?;
    m.add_function(wrap_pyfunction!(run_example, m)?)?;
    Ok(())
}
