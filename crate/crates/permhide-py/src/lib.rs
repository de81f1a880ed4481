//! Python module `permhide`.
//!
//! Permutations are passed as one-indexed image lists, as in the file formats.

use permhide::cli::parse_sigma;
use permhide::dist::{self, DistSb};
use permhide::hiding::{self, GenParams};
use permhide::layered::{self, LayeredGraph};
use permhide::matching;
use permhide::perm::{self, Equipartition};
use permhide::stream::{greedy_matching_baseline, run_passes, EdgeStream, RandomTape, RunConfig};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Permutation", module = "permhide", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyPermutation(perm::Permutation);

#[pymethods]
impl PyPermutation {
    #[new]
    fn new(images: Vec<usize>) -> PyResult<Self> {
        perm::Permutation::from_images(&images).map(Self).map_err(err)
    }

    #[staticmethod]
    fn identity(m: usize) -> Self {
        Self(perm::Permutation::identity(m))
    }

    #[staticmethod]
    #[pyo3(signature = (m, seed=0))]
    fn random(m: usize, seed: u64) -> Self {
        Self(perm::Permutation::random(m, &mut ChaCha8Rng::seed_from_u64(seed)))
    }

    /// `id`, `cross`, `random:<seed>` or a comma-separated image list.
    #[staticmethod]
    fn parse(spec: &str, m: usize) -> PyResult<Self> {
        parse_sigma(spec, m).map(Self).map_err(err)
    }

    fn images(&self) -> Vec<usize> {
        self.0.images()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __call__(&self, x: usize) -> PyResult<usize> {
        if x == 0 || x > self.0.len() {
            return Err(PyValueError::new_err(format!("{x} is outside 1..={}", self.0.len())));
        }
        Ok(self.0.at(x - 1) + 1)
    }

    /// `f * g` is the map x -> f(g(x)).
    fn __mul__(&self, other: &PyPermutation) -> PyResult<Self> {
        perm::compose(&self.0, &other.0).map(Self).map_err(err)
    }

    fn inverse(&self) -> Self {
        Self(perm::inverse(&self.0))
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    /// Simple on the partition of [m] into consecutive groups of `b`.
    fn is_simple(&self, b: usize) -> PyResult<bool> {
        Ok(perm::is_simple(&self.0, &Equipartition::lex(self.0.len(), b).map_err(err)?))
    }

    fn extend(&self, b: usize) -> Self {
        Self(perm::extend(&self.0, b))
    }

    fn __repr__(&self) -> String {
        format!("Permutation({:?})", self.0.images())
    }
}

#[pyclass(name = "Graph", module = "permhide", frozen)]
struct PyGraph(LayeredGraph);

#[pymethods]
impl PyGraph {
    #[staticmethod]
    fn basic(sigma: &PyPermutation) -> Self {
        Self(layered::basic(&sigma.0))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        LayeredGraph::from_json(text).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn provenance_json(&self) -> String {
        self.0.provenance_json()
    }

    fn layers(&self) -> Vec<usize> {
        self.0.layers().to_vec()
    }

    fn num_vertices(&self) -> usize {
        self.0.num_vertices()
    }

    fn num_edges(&self) -> usize {
        self.0.edges().len()
    }

    /// The permutation between the first `m` sources and the last layer.
    fn extract(&self, m: usize) -> PyResult<PyPermutation> {
        layered::extract_permutation(&self.0, m).map(PyPermutation).map_err(err)
    }

    /// Directed edge stream in the PHSTREAM text format.
    #[pyo3(signature = (shuffle=None))]
    fn stream_text(&self, shuffle: Option<u64>) -> String {
        let s = EdgeStream::from_layered(&self.0);
        match shuffle {
            Some(seed) => s.shuffled(seed).to_text(),
            None => s.to_text(),
        }
    }

    /// Bipartite matching instance as PHSTREAM text.
    fn matching_stream_text(&self, m: usize) -> PyResult<String> {
        Ok(matching::bipartite_of(&self.0, m).map_err(err)?.to_stream().to_text())
    }

    /// Maximum matching size of the bipartite instance, with a verified cover.
    fn max_matching(&self, m: usize) -> PyResult<(usize, usize)> {
        let inst = matching::bipartite_of(&self.0, m).map_err(err)?;
        let mm = matching::max_matching(&inst).map_err(err)?;
        Ok((mm.size, inst.n))
    }
}

fn params(m: usize, b: usize, k: usize, p: usize) -> PyResult<GenParams> {
    GenParams::new(m, b, k, p).map_err(err)
}

/// Permutation-hiding graph for any permutation of [m].
#[pyfunction]
#[pyo3(signature = (sigma, b=2, k=2, p=1, seed=0))]
fn generate(sigma: &PyPermutation, b: usize, k: usize, p: usize, seed: u64) -> PyResult<PyGraph> {
    let params = params(sigma.0.len(), b, k, p)?;
    hiding::gen_general(&sigma.0, &params, &mut ChaCha8Rng::seed_from_u64(seed)).map(PyGraph).map_err(err)
}

/// Graph for a permutation simple on consecutive groups of `b`.
#[pyfunction]
#[pyo3(signature = (rho, b=2, k=2, p=1, seed=0))]
fn generate_simple(rho: &PyPermutation, b: usize, k: usize, p: usize, seed: u64) -> PyResult<PyGraph> {
    let params = params(rho.0.len(), b, k, p)?;
    let part = Equipartition::lex(rho.0.len(), b).map_err(err)?;
    hiding::gen_simple_checked(&rho.0, &part, &params, &mut ChaCha8Rng::seed_from_u64(seed)).map(PyGraph).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (m, b=2, k=2, p=1, general=true))]
fn vertex_count(m: usize, b: usize, k: usize, p: usize, general: bool) -> PyResult<usize> {
    hiding::vertex_count(&params(m, b, k, p)?, general).map_err(err)
}

fn dist_pair(b: usize, mu: Vec<f64>, nu: Vec<f64>) -> PyResult<(DistSb, DistSb)> {
    Ok((DistSb::new(b, mu).map_err(err)?, DistSb::new(b, nu).map_err(err)?))
}

/// Total variation distance between two distributions over S_b, indexed by Lehmer rank.
#[pyfunction]
fn tvd(b: usize, mu: Vec<f64>, nu: Vec<f64>) -> PyResult<f64> {
    let (mu, nu) = dist_pair(b, mu, nu)?;
    dist::tvd(&mu, &nu).map_err(err)
}

#[pyfunction]
fn kl(b: usize, mu: Vec<f64>, nu: Vec<f64>) -> PyResult<f64> {
    let (mu, nu) = dist_pair(b, mu, nu)?;
    dist::kl(&mu, &nu).map_err(err)
}

#[pyfunction]
fn convolve(b: usize, mu: Vec<f64>, nu: Vec<f64>) -> PyResult<Vec<f64>> {
    let (mu, nu) = dist_pair(b, mu, nu)?;
    Ok(mu.convolve(&nu).map_err(err)?.probs().to_vec())
}

/// One-pass greedy matching over a PHSTREAM text; returns one-indexed pairs.
#[pyfunction]
fn greedy_matching(stream_text: &str) -> PyResult<Vec<(usize, usize)>> {
    let s = EdgeStream::from_text(stream_text).map_err(err)?;
    let res = run_passes(&greedy_matching_baseline(), &s, &RunConfig::passes(1), &RandomTape::empty()).map_err(err)?;
    Ok(res.output.into_iter().map(|(u, v)| (u + 1, v + 1)).collect())
}

/// Exact maximum matching size of the graph in a PHSTREAM text.
#[pyfunction]
fn max_matching_size(stream_text: &str) -> PyResult<usize> {
    let s = EdgeStream::from_text(stream_text).map_err(err)?;
    matching::max_matching_of_edges(s.n, &s.edges).map_err(err)
}

#[pymodule]
#[pyo3(name = "permhide")]
fn permhide_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPermutation>()?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(generate_simple, m)?)?;
    m.add_function(wrap_pyfunction!(vertex_count, m)?)?;
    m.add_function(wrap_pyfunction!(tvd, m)?)?;
    m.add_function(wrap_pyfunction!(kl, m)?)?;
    m.add_function(wrap_pyfunction!(convolve, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_matching, m)?)?;
    m.add_function(wrap_pyfunction!(max_matching_size, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
