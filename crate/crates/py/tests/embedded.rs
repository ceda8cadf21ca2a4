use pyo3::prelude::*;
use pyo3::types::PyDict;

#[test]
fn module_runs_in_embedded_interpreter() {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "pyupath").unwrap();
        pyupath::pyupath(&m).unwrap();
        let locals = PyDict::new(py);
        locals.set_item("pu", m).unwrap();
        let code = c"
g = pu.Graph(4, [(0, 1), (0, 2), (0, 3)])
inst = pu.SteinerInstance(g, pu.TreeModel.search(g), [1, 2, 3])
sol = inst.solve()
result = (sol.objective, sol.optimum, sol.rule, pu.ds_min(pu.Graph.cycle(6)).objective)
";
        py.run(code, None, Some(&locals)).unwrap();
        let result: (usize, Vec<usize>, String, usize) = locals.get_item("result").unwrap().unwrap().extract().unwrap();
        assert_eq!(result, (1, vec![0], "two-terminals".to_owned(), 2));
    });
}

#[test]
fn errors_map_to_value_error() {
    Python::initialize();
    Python::attach(|py| {
        let m = PyModule::new(py, "pyupath").unwrap();
        pyupath::pyupath(&m).unwrap();
        let e = m.getattr("Graph").unwrap().call1((2, vec![(0usize, 0usize)])).unwrap_err();
        assert!(e.is_instance_of::<pyo3::exceptions::PyValueError>(py));
    });
}
