use std::process::{Command, Output};

use aode_core::poly::parse_polynomial;

fn aode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aode")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const EX1: &str = "(y')^2 - y^3 - y^2";

#[test]
fn solve_prints_the_cusp_solution() {
    let o = aode(&["solve", "--ode", EX1, "--at", "-1, 0", "--order", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "y(t) = -1 + 1/4*t^2 - 1/24*t^4 + O(t^5)\n");
}

#[test]
fn solve_at_a_cusp_of_the_family_is_empty() {
    let o = aode(&["solve", "--ode", "(y'-1)^2 - y^3", "--at", "0, 1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("no non-constant solutions"));
    let o = aode(&["solve", "--ode", "(y'-1)^2 - y^3", "--at", "0, 1", "--format", "json"]);
    assert_eq!(stdout(&o).trim(), "[]");
}

#[test]
fn classify_nodal_cubic() {
    let o = aode(&["classify", "--ode", EX1]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("A0 = {(0, 0)}"), "{text}");
    assert!(text.contains("A1 = C(F) \\ {(0, 0)}"), "{text}");
    assert!(text.contains("constants = {-1, 0}"), "{text}");
    let o = aode(&["classify", "--ode", EX1, "--format", "json", "--jobs", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["A0"], serde_json::json!([["0", "0"]]));
    assert_eq!(v["A1"]["complement_of"], serde_json::json!([["0", "0"]]));
    assert_eq!(v["constants"], serde_json::json!(["-1", "0"]));
}

#[test]
fn places_use_the_default_bound() {
    let o = aode(&["places", "--ode", EX1, "--at", "0, 0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let places = v.as_array().unwrap();
    assert_eq!(places.len(), 2);
    for p in places {
        assert_eq!(p["B"]["trunc"], 9);
        assert_eq!(p["kind"], "singular");
        assert_eq!(p["order"], 1);
        assert_eq!(p["e"], 1);
    }
    let o = aode(&["places", "--ode", EX1, "--at", "-1, 0"]);
    assert!(stdout(&o).contains("A = -1 + t^2, B = t - t^3; e = 2, order = 1, tangent = (0, 1), kind = z_ramification"));
}

#[test]
fn other_subcommands() {
    let o = aode(&["bound", "--ode", "((y'-1)^2 + y^2)^3 - 4*(y'-1)^2*y^2"]);
    assert_eq!(stdout(&o), "61\n");
    let o = aode(&["critical", "--ode", EX1, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["point"], serde_json::json!(["-1", "0"]));
    assert_eq!(v[0]["tags"], serde_json::json!(["z_axis", "separant"]));
    let o = aode(&["constants", "--ode", EX1]);
    assert_eq!(stdout(&o), "y(t) = -1\ny(t) = 0\n");
    let o = aode(&["direct", "--ode", EX1, "--at", "1, sqrt(2)", "--order", "3"]);
    assert_eq!(stdout(&o), "y(t) = 1 + sqrt(2)*t + 5/4*t^2 + 2/3*sqrt(2)*t^3 + O(t^4)\n");
}

#[test]
fn exit_codes() {
    let o = aode(&["solve", "--ode", "y -", "--at", "0, 0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("offset 3"), "{}", stderr(&o));
    let o = aode(&["solve", "--ode", "y'^2 - y^2", "--at", "0, 0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not irreducible"));
    let o = aode(&["direct", "--ode", EX1, "--at", "0, 0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = aode(&["classify", "--ode", EX1, "--at", "0, 0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = aode(&["solve", "--ode", EX1, "--at", "root(x^2-3, 3), 0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = aode(&["solve", "--ode", EX1, "--at", "0, 0", "--order", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = aode(&["critical", "--ode", "((y'-1)^2 + y^2)^3 - 4*(y'-1)^2*y^2", "--degree-cap", "1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("exceeds the cap"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn output_is_deterministic() {
    let args = ["classify", "--ode", "((y'-1)^2 + y^2)^3 - 4*(y'-1)^2*y^2", "--format", "json", "--jobs", "4"];
    let a = aode(&args);
    let b = aode(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut single = args.to_vec();
    single[6] = "1";
    assert_eq!(aode(&single).stdout, a.stdout);
}

#[test]
fn rendered_polynomials_parse_back() {
    for src in [EX1, "((y'-1)^2 + y^2)^3 - 4*(y'-1)^2*y^2", "3/4*y*y' - y^5 + 7", "-(y' - sqrt(2))^2"] {
        let f = parse_polynomial(src).unwrap();
        assert_eq!(parse_polynomial(&f.render()).unwrap(), f, "{src}");
    }
}
