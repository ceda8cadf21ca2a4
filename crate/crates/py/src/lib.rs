//! Python bindings: graphs, path models, the diameter-2 Steiner solver,
//! the exact oracles, the gadgets and the verification sweeps.
//!
//! Vertex sets cross the boundary as sorted lists of ints; reports cross
//! as JSON strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use upath_core::diam2::{self, Reduction};
use upath_core::reduction::{self as red, ThreeDMInstance};
use upath_core::{io, oracle, tree_model, verify, Error, VertexSet};

fn err(e: Error) -> PyErr {
    match e {
        Error::Integrity(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

type EdgeList = Vec<(usize, usize)>;

fn set(v: Vec<usize>) -> VertexSet {
    VertexSet::new(v)
}

#[pyclass(name = "Graph", module = "pyupath", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyGraph(pub upath_core::Graph);

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        upath_core::Graph::new(n, edges).map(PyGraph).map_err(err)
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        PyGraph(upath_core::Graph::complete(n))
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        PyGraph(upath_core::Graph::path(n))
    }

    #[staticmethod]
    fn cycle(n: usize) -> Self {
        PyGraph(upath_core::Graph::cycle(n))
    }

    #[staticmethod]
    fn star(k: usize) -> Self {
        PyGraph(upath_core::Graph::star(k))
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        io::parse_graph(text).map(PyGraph).map_err(err)
    }

    fn to_text(&self) -> String {
        io::emit_graph(&self.0)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.0.has_edge(u, v)
    }

    #[pyo3(signature = (v, closed = false))]
    fn neighbors(&self, v: usize, closed: bool) -> PyResult<Vec<usize>> {
        self.0.neighbors(v, closed).map(VertexSet::into_vec).map_err(err)
    }

    fn diameter(&self) -> Option<usize> {
        self.0.diameter()
    }

    fn is_connected(&self) -> bool {
        self.0.is_connected()
    }

    fn is_dominating(&self, d: Vec<usize>) -> PyResult<bool> {
        self.0.is_dominating(&set(d)).map_err(err)
    }

    fn is_connected_induced(&self, s: Vec<usize>) -> PyResult<bool> {
        self.0.is_connected_induced(&set(s)).map_err(err)
    }

    fn is_clique(&self, s: Vec<usize>) -> bool {
        self.0.is_clique(&set(s))
    }

    /// `(u, v, "open" | "closed")` for every twin pair.
    fn twins(&self) -> Vec<(usize, usize, String)> {
        self.0
            .twins()
            .into_iter()
            .map(|t| (t.u, t.v, serde_json::to_value(t.kind).unwrap().as_str().unwrap().to_owned()))
            .collect()
    }

    fn simplicial_vertices(&self) -> Vec<usize> {
        self.0.simplicial_vertices().into_vec()
    }

    fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        self.0.maximal_cliques().into_iter().map(VertexSet::into_vec).collect()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.0.n(), self.0.m())
    }
}

#[pyclass(name = "TreeModel", module = "pyupath", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyTreeModel(pub tree_model::TreeModel);

#[pymethods]
impl PyTreeModel {
    /// `assignment[u]` lists the host nodes of vertex `u`.
    #[new]
    fn new(host: PyGraph, assignment: Vec<Vec<usize>>) -> PyResult<Self> {
        tree_model::TreeModel::new(host.0, assignment.into_iter().map(set).collect())
            .map(PyTreeModel)
            .map_err(err)
    }

    /// A path model of `g`, or None when there is none within the search cap.
    #[staticmethod]
    fn search(g: &PyGraph) -> PyResult<Option<Self>> {
        tree_model::search_model(&g.0, true, g.0.n()).map(|m| m.map(PyTreeModel)).map_err(err)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        io::parse_model(text).map(PyTreeModel).map_err(err)
    }

    fn to_text(&self) -> String {
        io::emit_model(&self.0)
    }

    #[getter]
    fn host(&self) -> PyGraph {
        PyGraph(self.0.host().clone())
    }

    #[getter]
    fn num_nodes(&self) -> usize {
        self.0.num_nodes()
    }

    fn nodes_of(&self, u: usize) -> Vec<usize> {
        self.0.nodes_of(u).as_slice().to_vec()
    }

    #[pyo3(signature = (g, require_paths = true))]
    fn is_valid_for(&self, g: &PyGraph, require_paths: bool) -> bool {
        self.0.is_valid_for(&g.0, require_paths)
    }

    /// Validation report as JSON.
    #[pyo3(signature = (g, require_paths = true))]
    fn validate(&self, g: &PyGraph, require_paths: bool) -> PyResult<String> {
        self.0.validate(&g.0, require_paths).map(|r| r.to_json()).map_err(err)
    }

    fn is_minimal(&self) -> bool {
        self.0.is_minimal()
    }

    fn make_minimal(&self) -> PyResult<Self> {
        self.0.make_minimal().map(PyTreeModel).map_err(err)
    }

    fn realized_graph(&self) -> PyGraph {
        PyGraph(self.0.realized_graph())
    }

    fn host_leaves(&self) -> Vec<usize> {
        self.0.host_leaves()
    }

    /// `{vertex: leaf}` for the leafy vertices.
    fn leafy_vertices(&self) -> std::collections::BTreeMap<usize, usize> {
        self.0.leafy_vertices().leaf_of
    }
}

#[pyclass(name = "Witness", module = "pyupath", frozen, get_all)]
pub struct PyWitness {
    /// "yes" or "no".
    status: String,
    set: Vec<usize>,
    objective: usize,
}

impl From<oracle::Witness> for PyWitness {
    fn from(w: oracle::Witness) -> Self {
        PyWitness {
            status: if w.is_yes() { "yes" } else { "no" }.to_owned(),
            set: w.set.into_vec(),
            objective: w.objective,
        }
    }
}

#[pymethods]
impl PyWitness {
    fn __repr__(&self) -> String {
        format!("Witness(status={:?}, objective={}, set={:?})", self.status, self.objective, self.set)
    }
}

#[pyclass(name = "Solution", module = "pyupath", frozen, get_all)]
pub struct PySolution {
    /// Budgeted answer.
    witness: Py<PyWitness>,
    /// Optimum Steiner set in input ids.
    optimum: Vec<usize>,
    objective: usize,
    rule: String,
    removed_twins: Vec<usize>,
    removed_simplicials: Vec<usize>,
    removed_leafy: Vec<usize>,
    chosen_node: Option<usize>,
    trace_json: String,
}

#[pyclass(name = "SteinerInstance", module = "pyupath", frozen, from_py_object)]
#[derive(Clone)]
pub struct PySteinerInstance(pub diam2::SteinerInstance);

fn reduction(r: Reduction) -> (PySteinerInstance, Vec<usize>, Vec<usize>) {
    (PySteinerInstance(r.instance), r.removed, r.map)
}

#[pymethods]
impl PySteinerInstance {
    /// Budget defaults to the vertex count.
    #[new]
    #[pyo3(signature = (graph, model, terminals, budget = None))]
    fn new(graph: PyGraph, model: PyTreeModel, terminals: Vec<usize>, budget: Option<usize>) -> PyResult<Self> {
        let budget = budget.unwrap_or(graph.0.n());
        diam2::SteinerInstance::new(graph.0, model.0, set(terminals), budget)
            .map(PySteinerInstance)
            .map_err(err)
    }

    #[getter]
    fn graph(&self) -> PyGraph {
        PyGraph(self.0.graph.clone())
    }

    #[getter]
    fn model(&self) -> PyTreeModel {
        PyTreeModel(self.0.model.clone())
    }

    #[getter]
    fn terminals(&self) -> Vec<usize> {
        self.0.terminals.as_slice().to_vec()
    }

    #[getter]
    fn budget(&self) -> usize {
        self.0.budget
    }

    fn solve(&self, py: Python<'_>) -> PyResult<PySolution> {
        let (w, trace) = py.detach(|| diam2::solve(&self.0)).map_err(err)?;
        let rule = serde_json::to_value(trace.rule).unwrap().as_str().unwrap().to_owned();
        Ok(PySolution {
            witness: Py::new(py, PyWitness::from(w))?,
            optimum: trace.witness.set.as_slice().to_vec(),
            objective: trace.witness.objective,
            rule,
            trace_json: serde_json::to_string(&trace).unwrap(),
            removed_twins: trace.removed_twins,
            removed_simplicials: trace.removed_simplicials,
            removed_leafy: trace.removed_leafy,
            chosen_node: trace.chosen_node,
        })
    }

    /// `(reduced, removed, map)`; `map[i]` is the input id of reduced vertex `i`.
    fn reduce_twins(&self) -> (PySteinerInstance, Vec<usize>, Vec<usize>) {
        reduction(diam2::reduce_twins(&self.0))
    }

    fn reduce_simplicial(&self) -> (PySteinerInstance, Vec<usize>, Vec<usize>) {
        reduction(diam2::reduce_simplicial(&self.0))
    }

    fn reduce_leafy(&self) -> PyResult<(PySteinerInstance, Vec<usize>, Vec<usize>)> {
        diam2::reduce_leafy(&self.0).map(reduction).map_err(err)
    }

    fn min_clique_dominating_leafy(&self) -> PyResult<(PyWitness, Option<usize>)> {
        diam2::min_clique_dominating_leafy(&self.0).map(|(w, t)| (w.into(), t)).map_err(err)
    }

    fn digest(&self) -> String {
        upath_core::report::digest(&verify::instance_text(&self.0))
    }
}

#[pyfunction]
fn steiner_min(py: Python<'_>, g: &PyGraph, terminals: Vec<usize>) -> PyResult<PyWitness> {
    py.detach(|| oracle::steiner_min(&g.0, &set(terminals))).map(Into::into).map_err(err)
}

#[pyfunction]
fn cds_min(py: Python<'_>, g: &PyGraph) -> PyResult<PyWitness> {
    py.detach(|| oracle::cds_min(&g.0)).map(Into::into).map_err(err)
}

#[pyfunction]
fn ds_min(py: Python<'_>, g: &PyGraph) -> PyResult<PyWitness> {
    py.detach(|| oracle::ds_min(&g.0)).map(Into::into).map_err(err)
}

#[pyfunction]
fn three_dm(n: usize, triples: Vec<(usize, usize, usize)>) -> PyResult<PyWitness> {
    let inst = ThreeDMInstance::new(n, triples).map_err(err)?;
    oracle::three_dm(&inst).map(Into::into).map_err(err)
}

#[pyfunction]
fn isomorphic(g1: &PyGraph, g2: &PyGraph) -> bool {
    oracle::isomorphic(&g1.0, &g2.0)
}

/// `(graph, model, terminals, budget)` of the Steiner gadget for a 3DM instance.
#[pyfunction]
fn steiner_gadget(n: usize, triples: Vec<(usize, usize, usize)>) -> PyResult<(PyGraph, PyTreeModel, Vec<usize>, usize)> {
    let inst = ThreeDMInstance::new(n, triples).map_err(err)?;
    let out = red::steiner_from_3dm(&inst).map_err(err)?;
    let model = out.model.expect("3DM gadgets carry a model");
    Ok((PyGraph(out.graph), PyTreeModel(model), out.terminals.into_vec(), out.budget))
}

/// `(graph, terminals, budget)` of the dominating-set gadget.
#[pyfunction]
fn ds_gadget(g: &PyGraph, k: usize) -> PyResult<(PyGraph, Vec<usize>, usize)> {
    let out = red::steiner_from_ds(&g.0, k).map_err(err)?;
    Ok((PyGraph(out.graph), out.terminals.into_vec(), out.budget))
}

/// `(subdivision, part1, part2)`.
#[pyfunction]
fn subdivide(g: &PyGraph) -> (PyGraph, EdgeList, EdgeList) {
    let w = red::subdivide(&g.0);
    (PyGraph(w.sub), w.part1, w.part2)
}

#[pyfunction]
fn verify_gadgets(py: Python<'_>, nmax: usize, mmax: usize) -> PyResult<String> {
    py.detach(|| verify::verify_gadgets(nmax, mmax)).map(|r| r.to_json()).map_err(err)
}

#[pyfunction]
fn verify_solver(py: Python<'_>, nmax: usize, seed: u64, per_graph: usize) -> PyResult<String> {
    py.detach(|| verify::verify_solver(nmax, seed, per_graph)).map(|r| r.to_json()).map_err(err)
}

#[pyfunction]
fn verify_lemmas(py: Python<'_>, seed: u64, pairs: usize, nmax: usize) -> PyResult<String> {
    py.detach(|| verify::verify_lemmas(seed, pairs, nmax)).map(|r| r.to_json()).map_err(err)
}

#[pymodule]
pub fn pyupath(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyTreeModel>()?;
    m.add_class::<PyWitness>()?;
    m.add_class::<PySolution>()?;
    m.add_class::<PySteinerInstance>()?;
    m.add_function(wrap_pyfunction!(steiner_min, m)?)?;
    m.add_function(wrap_pyfunction!(cds_min, m)?)?;
    m.add_function(wrap_pyfunction!(ds_min, m)?)?;
    m.add_function(wrap_pyfunction!(three_dm, m)?)?;
    m.add_function(wrap_pyfunction!(isomorphic, m)?)?;
    m.add_function(wrap_pyfunction!(steiner_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(ds_gadget, m)?)?;
    m.add_function(wrap_pyfunction!(subdivide, m)?)?;
    m.add_function(wrap_pyfunction!(verify_gadgets, m)?)?;
    m.add_function(wrap_pyfunction!(verify_solver, m)?)?;
    m.add_function(wrap_pyfunction!(verify_lemmas, m)?)?;
    Ok(())
}
