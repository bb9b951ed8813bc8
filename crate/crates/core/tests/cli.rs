//! The binary agrees with direct library calls.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lmrl::cutelim;
use lmrl::derivation::{check, Calculus};
use lmrl::frontend::{self, print_derivation, Body, Document};
use lmrl::pilmrl;

fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(rel)
}

fn lmrl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmrl")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(out: &str, key: &str) -> Option<String> {
    let k = format!("{key}: ");
    out.lines().find_map(|l| l.strip_prefix(&k)).map(|v| v.replace("\\n", "\n"))
}

fn doc(rel: &str) -> Document {
    frontend::parse_document(&std::fs::read_to_string(corpus(rel)).unwrap()).unwrap()
}

#[test]
fn check_accepts_and_rejects() {
    let good = corpus("logic/eta-tensor.seq");
    let o = lmrl(&["check", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let bad = corpus("logic/rules/tensor-pos.bad.seq");
    let o = lmrl(&["--json", "check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(field(&stdout(&o), "status").as_deref(), Some("fail"));
}

#[test]
fn parse_errors_exit_2() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "base 2\n|- [{{0}} a").unwrap();
    let o = lmrl(&["check", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = lmrl(&["check", "/nonexistent/file.seq"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dualize_matches_library() {
    let path = corpus("logic/eta-tensor.seq");
    let d = match doc("logic/eta-tensor.seq").body {
        Body::Derivation(d) => d,
        _ => unreachable!(),
    };
    let dual = d.dualize();
    assert!(check(&dual, Calculus::Disj).is_ok());
    let o = lmrl(&["--json", "dualize", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(field(&out, "derivation").unwrap(), print_derivation(&dual, Calculus::Disj));
    assert_eq!(field(&out, "conclusion").unwrap(), dual.conclusion.to_string());
}

#[test]
fn eta_matches_library() {
    let base = lmrl::roles::RoleBase::Finite(3);
    let a = frontend::parse_formula("a *[0] b", base).unwrap();
    let parts = frontend::parse_rolesets("{0},{1},{2}", base).unwrap();
    let d = cutelim::eta_expand(&a, &parts).unwrap();
    let o = lmrl(&["--json", "eta", "--base", "3", "--formula", "a *[0] b", "--parts", "{0},{1},{2}"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "derivation").unwrap(), print_derivation(&d, Calculus::Conj));
}

#[test]
fn run_matches_library() {
    for rel in ["proc/tensor2.pi", "proc/bang-spawn.pi", "proc/with-inr.pi"] {
        let (p, env) = match doc(rel).body {
            Body::Process { process, env } => (process, env),
            _ => unreachable!(),
        };
        assert!(pilmrl::typecheck(&p, &env).is_ok(), "{rel}");
        let n = pilmrl::normalize(&p, 1000);
        let o = lmrl(&["--json", "run", corpus(rel).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{rel}");
        let out = stdout(&o);
        assert_eq!(field(&out, "steps").unwrap(), n.steps.len().to_string(), "{rel}");
        assert_eq!(field(&out, "process").unwrap(), n.process.to_string(), "{rel}");

        let o = lmrl(&["--json", "sr-check", corpus(rel).to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{rel}");
        assert_eq!(field(&stdout(&o), "process").unwrap(), n.process.to_string(), "{rel}");
    }
}

#[test]
fn typecheck_rejects_ill_typed() {
    let o = lmrl(&["--json", "typecheck", corpus("proc/rules/tensor-pos.bad.pi").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(field(&stdout(&o), "status").as_deref(), Some("fail"));
}
