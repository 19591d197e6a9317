use std::io::Write;
use std::process::{Command, Stdio};

use monsch_cli::{parse, run, Options};

const EXAMPLE: &str = "monoid M { gens: a b e; rel: a b = a b e; rel: e e = e; }\n\
                       scheme SpecM = spec(M);\n";

fn monsch(args: &[&str], input: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_monsch"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap(), String::from_utf8(o.stderr).unwrap())
}

fn report(src: &str) -> String {
    run(&parse(src).unwrap(), &Options::default()).unwrap().render()
}

#[test]
fn spec_of_example_lists_seven_primes() {
    let r = report(&format!("{EXAMPLE} compute spec(M)"));
    assert!(r.contains("7 points, dimension 3"), "{r}");
    assert_eq!(r.lines().filter(|l| l.contains(" < ")).count(), 9);
}

#[test]
fn pic_of_builtin_line() {
    assert_eq!(report("compute pic(P1)"), "== pic(P1) ==\nZ^1\n");
}

#[test]
fn s_smooth_collection() {
    let r = report(&format!("{EXAMPLE} compute check(s-smooth, SpecM)"));
    assert!(r.contains("true; collection: Z at (a), Z at (b)"), "{r}");
}

#[test]
fn glued_line_matches_builtin() {
    let src = "monoid L { gens: t; } monoid T { gens: t; inv: t; }\n\
               scheme A = glue { chart U = spec(L); chart V = spec(L); overlap U V = spec(T) via U: t -> t, V: t -> t^-1; }\n\
               compute pic(A); compute scl(A); compute vanishing(A)";
    let r = report(src);
    assert!(r.starts_with("== pic(A) ==\nZ^1\n"), "{r}");
    assert!(r.contains("matches pic: true"));
}

#[test]
fn doubled_point_has_infinite_cyclic_pic() {
    let src = "monoid L { gens: t; } monoid T { gens: t; inv: t; }\n\
               scheme D = glue { chart U = spec(L); chart V = spec(L); overlap U V = spec(T) via U: t -> t, V: t -> t; }\n\
               compute pic(D)";
    assert_eq!(report(src), "== pic(D) ==\nZ^1\n");
}

#[test]
fn export_task() {
    let r = report("monoid Z { gens: t; inv: t; } compute export(Z)");
    assert!(r.contains("ring k[t, t_inv]\nt*t_inv - 1\n"), "{r}");
}

#[test]
fn exit_codes() {
    let (code, out, _) = monsch(&[], "compute pic(P1)");
    assert_eq!((code, out.as_str()), (0, "== pic(P1) ==\nZ^1\n"));
    let (code, _, err) = monsch(&[], "compute pic(P1");
    assert_eq!(code, 2);
    assert!(err.contains("1:15"), "{err}");
    let (code, _, err) = monsch(&[], "compute pic(Nowhere)");
    assert_eq!(code, 2);
    assert!(err.contains("Nowhere"));
    let (code, _, _) = monsch(&["--bound", "x"], "");
    assert_eq!(code, 2);
    // a gluing whose overlap is not a localization is a mathematical error
    let bad = "monoid L { gens: t; } monoid T { gens: t; inv: t; }\n\
               scheme B = glue { chart U = spec(L); chart V = spec(L); overlap U V = spec(T) via U: t -> t^2, V: t -> t; }\n\
               compute pic(B); compute pic(P1)";
    let (code, out, _) = monsch(&[], bad);
    assert_eq!(code, 1);
    assert!(out.contains("error: ") && out.contains("== pic(P1) ==\nZ^1"));
}

#[test]
fn reports_are_deterministic() {
    let src = format!(
        "{EXAMPLE} scheme Q = product(P1, P1); compute units(SpecM); compute cohomology(Q); compute scl(Q); compute check(cancellative, M); compute pic(P2)"
    );
    let a = monsch(&["--check-oracles"], &src);
    let b = monsch(&["--check-oracles", "--parallel"], &src);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
    let j1 = monsch(&["--json"], &src);
    let j2 = monsch(&["--json", "--parallel"], &src);
    assert_eq!(j1, j2);
    let v: serde_json::Value = serde_json::from_str(&j1.1).unwrap();
    assert_eq!(v["tasks"][1]["result"]["1"]["group"], "Z^2");
    assert_eq!(v["bound"], 8);
}

#[test]
fn degree_flag() {
    let (_, out, _) = monsch(&["--degree", "1"], "scheme Q = product(P1, P1); compute cohomology(Q)");
    assert_eq!(out, "== cohomology(Q) ==\nH^1 = Z^2\n");
}
