use pyo3::prelude::*;
use pyo3::types::PyDict;

fn module(py: Python<'_>) -> Bound<'_, PyModule> {
    let m = PyModule::new(py, "v2v_signal_py").unwrap();
    v2v_signal_py::register(&m).unwrap();
    m
}

#[test]
fn solve_through_python() {
    Python::attach(|py| {
        let m = module(py);
        let globals = PyDict::new(py);
        globals.set_item("v", &m).unwrap();
        let code = c"
model = v.ModelSpec(v.CurveSpec.affine(0.3, 0.1), v.CurveSpec.linear(0.8), v.CurveSpec.linear(0.1))
eq = v.solve_equilibrium(model, v.GameParams(1.0, 0.9, 3.0))
region, p = eq.region, eq.p
";
        py.run(code, Some(&globals), None).unwrap();
        let region: String = globals.get_item("region").unwrap().unwrap().extract().unwrap();
        let p: f64 = globals.get_item("p").unwrap().unwrap().extract().unwrap();
        assert_eq!(region, "E3");
        assert!((p - 0.2954).abs() < 1e-4);
    });
}

#[test]
fn errors_map_to_value_error() {
    Python::attach(|py| {
        let m = module(py);
        let globals = PyDict::new(py);
        globals.set_item("v", &m).unwrap();
        let code = c"
try:
    v.GameParams(0.5, 0.5, 0.9)
    raised = False
except ValueError:
    raised = True
";
        py.run(code, Some(&globals), None).unwrap();
        let raised: bool = globals.get_item("raised").unwrap().unwrap().extract().unwrap();
        assert!(raised);
    });
}
