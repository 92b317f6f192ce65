use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module<R>(f: impl FnOnce(Python<'_>, &Bound<'_, PyDict>) -> R) -> R {
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(pysofree::pysofree)(py);
        let globals = PyDict::new(py);
        globals.set_item("sf", module).unwrap();
        f(py, &globals)
    })
}

fn eval<'py>(py: Python<'py>, globals: &Bound<'py, PyDict>, code: &str) -> Bound<'py, PyAny> {
    let code = std::ffi::CString::new(code).unwrap();
    py.eval(&code, Some(globals), None).unwrap_or_else(|e| panic!("{e}"))
}

#[test]
fn counts_cross_the_boundary() {
    with_module(|py, g| {
        assert_eq!(eval(py, g, "len(sf.enumerate_nc(4))").extract::<usize>().unwrap(), 14);
        assert_eq!(eval(py, g, "len(sf.enumerate_snc(2, 2))").extract::<usize>().unwrap(), 18);
        assert_eq!(eval(py, g, "len(sf.enumerate_ps_nc(1, 1))").extract::<usize>().unwrap(), 2);
    });
}

#[test]
fn rationals_are_fractions() {
    with_module(|py, g| {
        let v = eval(py, g, "sf.Model('haar_unitary').phi2('u.u.u', 'u*.u*.u*')");
        assert_eq!(v.get_type().name().unwrap().to_string(), "Fraction");
        assert_eq!(v.str().unwrap().to_string(), "3");
        let six = eval(py, g, "sf.square_cumulants(sf.Model('semicircular'), 's', 4)['second'][(2, 2)]");
        assert_eq!(six.str().unwrap().to_string(), "6");
    });
}

#[test]
fn errors_map_to_exceptions() {
    with_module(|py, g| {
        let code = std::ffi::CString::new("sf.enumerate_snc(9, 9)").unwrap();
        let e = py.eval(&code, Some(g), None).unwrap_err();
        assert!(e.to_string().starts_with("CapExceededError"), "{e}");
        let code = std::ffi::CString::new("sf.Permutation('(1,2', 3)").unwrap();
        let e = py.eval(&code, Some(g), None).unwrap_err();
        assert!(e.is_instance_of::<pyo3::exceptions::PyValueError>(py));
    });
}

#[test]
fn permutation_methods() {
    with_module(|py, g| {
        let s = eval(py, g, "str(sf.Permutation('(1,5)(2,6)(3,4,7,8)', 8).kreweras(5, 3))");
        let want = sofree::annular::kreweras_annulus(
            &sofree::perm::Permutation::parse_sized("(1,5)(2,6)(3,4,7,8)", 8).unwrap(),
            sofree::perm::AnnulusShape::new(5, 3),
        )
        .unwrap();
        assert_eq!(s.to_string(), want.to_string());
        assert!(eval(py, g, "sf.Permutation('(1,3)(2)', 3).inverse() * sf.Permutation('(1,3)', 3) == sf.Permutation('()', 3)")
            .extract::<bool>()
            .unwrap());
    });
}
