use pyo3::prelude::*;
use pyo3::types::PyModule;

fn with_module<R>(f: impl FnOnce(&Bound<'_, PyModule>) -> R) -> R {
    pyo3::prepare_freethreaded_python();
    Python::with_gil(|py| {
        let m = PyModule::new(py, "hankel").unwrap();
        hankel::register(&m).unwrap();
        f(&m)
    })
}

#[test]
fn functions_are_callable_from_python() {
    with_module(|m| {
        let text: String = m.getattr("compute").unwrap().call1(("E", 3, 30)).unwrap().extract().unwrap();
        assert!(text.starts_with("u + u^5 + u^9"));
        let v: Option<i64> = m.getattr("valuation").unwrap().call1(("E[1,2]", 3, 100)).unwrap().extract().unwrap();
        assert_eq!(v, Some(30));
        let (ord, _series, poly): (i64, String, String) =
            m.getattr("extremal").unwrap().call1((10u64, 1u64, 1u64, 3u32)).unwrap().extract().unwrap();
        assert_eq!(ord, 9);
        assert_eq!(poly, "(1/[1]*[2])*E*g^4 + (1/[2])*E*h^2 + (1/[1]*[2])*g^3*h");
    });
}

#[test]
fn errors_become_value_errors() {
    with_module(|m| {
        Python::with_gil(|py| {
            let err = m.getattr("compute").unwrap().call1(("nope", 3, 10)).unwrap_err();
            assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
            let err = m.getattr("compute").unwrap().call1(("E", 6, 10)).unwrap_err();
            assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
        })
    });
}

#[test]
fn verify_returns_a_json_report() {
    with_module(|m| {
        let report: String = m.getattr("verify").unwrap().call1(("moore", vec![2u32, 3])).unwrap().extract().unwrap();
        assert!(report.contains("\"moore.divisibility\""));
        assert!(!report.contains("\"fail\""));
    });
}
