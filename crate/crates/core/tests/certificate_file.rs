use weylks_core::certificate::{
    builtin, builtin_peres2, compile, find_assignment, find_contradiction,
};
use weylks_core::{Certificate, Error};

#[test]
fn builtins_round_trip_through_json() {
    for name in ["peres2", "mermin3"] {
        let cert = builtin(name).unwrap();
        let text = cert.to_json();
        let back = Certificate::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        let a = find_contradiction(&compile(&cert).unwrap()).unwrap();
        let b = find_contradiction(&compile(&back).unwrap()).unwrap();
        assert_eq!(a, b);
    }
    assert!(matches!(builtin("peres3"), Err(Error::UnknownBuiltin(_))));
}

#[test]
fn consistent_file() {
    let text = r#"{
        "dofs": 2,
        "monomials": {"a": "U1", "b": "U2^-1", "ab": "U1 U2^-1", "c": "U1^-1"},
        "contexts": [["a", "b", "ab"], ["ab", "c"]]
    }"#;
    let cert = Certificate::from_json(text).unwrap();
    let sys = compile(&cert).unwrap();
    assert!(find_contradiction(&sys).is_none());
    let asg = find_assignment(&sys).unwrap();
    assert_eq!(asg.values.len(), 4);
}

#[test]
fn malformed_files_name_the_problem() {
    let cases = [
        (
            r#"{"dofs": 1, "monomials": {"a": "U1", "b": "V1"}, "contexts": [["a", "b"]]}"#,
            "do not commute",
        ),
        (
            r#"{"dofs": 1, "monomials": {"a": "U1"}, "contexts": [["a", "z"]]}"#,
            "unknown monomial \"z\"",
        ),
        (
            r#"{"dofs": 1, "monomials": {"a": "U3"}, "contexts": []}"#,
            "parse error",
        ),
        (
            r#"{"dofs": 2, "theta": [1], "monomials": {}, "contexts": []}"#,
            "expected 2",
        ),
        (
            r#"{"dofs": 1, "theta": [0], "monomials": {}, "contexts": []}"#,
            "zero",
        ),
        (
            r#"{"dofs": 1, "monomials": {"a": "U1", "a": "V1"}, "contexts": []}"#,
            "duplicate",
        ),
        (
            r#"{"dofs": 1, "monomials": {"a": "U1"}, "contexts": [["a", "a"]]}"#,
            "more than once",
        ),
        (
            r#"{"dofs": 1, "monomials": {}, "contexts": [], "extra": 1}"#,
            "unknown field",
        ),
    ];
    for (text, needle) in cases {
        let err = Certificate::from_json(text).unwrap_err().to_string();
        assert!(err.contains(needle), "{text}: {err}");
    }
}

#[test]
fn restricting_peres2_loses_the_contradiction() {
    let cert = builtin_peres2();
    for drop in 0..cert.contexts().len() {
        let keep: Vec<usize> = (0..cert.contexts().len()).filter(|&i| i != drop).collect();
        let sub = cert.restrict(&keep);
        assert!(find_contradiction(&compile(&sub).unwrap()).is_none());
    }
}
