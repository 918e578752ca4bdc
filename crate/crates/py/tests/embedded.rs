use pyo3::prelude::*;
use pyo3::types::PyDict;
use pyo3::wrap_pymodule;

fn run(code: &str) {
    Python::attach(|py| {
        let m = wrap_pymodule!(pyloony::loony_module)(py);
        let globals = PyDict::new(py);
        globals.set_item("loony", m).unwrap();
        let code = std::ffi::CString::new(code).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("python code failed");
        }
    });
}

#[test]
fn values_and_moves() {
    run(r#"
assert loony.value("3+4+100*4L+100*6L") == 3
assert loony.best_open("3+3*6L")[0] == "3"
assert loony.oracle_value("4+7L+7L") == 4
assert loony.controlled_value("4+7L+7L")[2] == 2
assert loony.optimal_opens("5+7") == ["5", "7"]
big = loony.value("3+1000000000000000000*18446744073709551614")
assert big == 1000000000000000000 * (18446744073709551614 - 4) + 3, big
"#);
}

#[test]
fn errors_are_value_errors() {
    run(r#"
for call in (lambda: loony.value("3+2"), lambda: loony.value("4+7L"),
             lambda: loony.oracle_value("100+100"), lambda: loony.Session("3", "C")):
    try:
        call()
    except ValueError:
        pass
    else:
        raise AssertionError("no error")
"#);
}

#[test]
fn session_plays_out() {
    run(r#"
s = loony.Session("2*3+4+6L")
while not s.terminal:
    s.step()
assert (s.score_a, s.score_b) == (7, 9)
assert loony.self_play("2*3+4+6L", "B") == (9, 7)
"#);
}
