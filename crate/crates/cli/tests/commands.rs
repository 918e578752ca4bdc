use loony::report::{Analysis, ClosedForm};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = loony_cli::run(
        std::iter::once("loony").chain(args.iter().copied()),
        &ClosedForm,
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn run_json(args: &[&str]) -> Value {
    let mut v = args.to_vec();
    v.push("--json");
    let (code, out, err) = run(&v);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn value_records() {
    let v = run_json(&["value", "2*3+4+6L"]);
    assert_eq!((v["value"].as_i64(), v["cv"].as_i64()), (Some(2), Some(0)));
    assert_eq!(run_json(&["value", ""])["value"], 0);
    assert_eq!(run_json(&["value", "3+4+100*4L+100*6L"])["value"], 3);
}

#[test]
fn json_is_the_service_analysis() {
    let (_, out, _) = run(&["value", "3+5+2*4L+8L", "--json", "--oracle"]);
    let a: Analysis = serde_json::from_str(&out).unwrap();
    assert_eq!(a.oracle_agrees, Some(true));
    assert_eq!((a.value - a.cv).rem_euclid(2), 0);
    assert_eq!(serde_json::to_string_pretty(&a).unwrap() + "\n", out);
}

#[test]
fn move_examples() {
    assert_eq!(run_json(&["move", "3+3*6L"])["advisedOpen"], "3");
    assert_eq!(run_json(&["move", "4+4L+6L"])["advisedOpen"], "4L");
    assert_eq!(run_json(&["move", "3+3+6+4L"])["advisedOpen"], "4L");
    let all = run_json(&["move", "4L+6L", "--all"]);
    assert_eq!(all["optimalOpens"], serde_json::json!(["4L", "6L"]));
    assert_eq!(all["oracleAgrees"], true);
    let (code, _, err) = run(&["move", ""]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
}

#[test]
fn line_examples() {
    let v = run_json(&["line", "2*3+4+6L", "--oracle"]);
    assert_eq!(v["steps"].as_array().unwrap().len(), 4);
    assert_eq!(v["margin"], 2);
    let v = run_json(&["line", "5"]);
    assert_eq!(
        (v["scoreA"].as_u64(), v["scoreB"].as_u64()),
        (Some(0), Some(5))
    );
    let v = run_json(&["line", "6L"]);
    assert_eq!(
        (v["scoreA"].as_u64(), v["scoreB"].as_u64()),
        (Some(0), Some(6))
    );
    assert_eq!(run(&["line", "3+"]).0, 2);
}

#[test]
fn line_margin_equals_value() {
    for pos in ["3+3", "3+4+4L+6L", "2*3+5+8L", "4+2*7L", "3*4L+6"] {
        let line = run_json(&["line", pos]);
        let value = run_json(&["value", pos]);
        assert_eq!(line["margin"], value["value"], "{pos}");
    }
}

#[test]
fn check_bounds() {
    let (code, out, _) = run(&["check", "--max-components", "0"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("1 positions"));
    assert_eq!(run(&["check", "--chain-max", "99"]).0, 2);
}
