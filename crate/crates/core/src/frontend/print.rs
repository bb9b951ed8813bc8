use std::fmt::Write;

use super::{Body, Document};
use crate::derivation::{Calculus, Derivation, Instance};
use crate::pilmrl::{TypeEnv, TypingDerivation};

/// S-expression form of a derivation, one node per line.
pub fn print_derivation(d: &Derivation, calc: Calculus) -> String {
    let mut out = String::new();
    node(d, calc, 0, &mut out);
    out
}

fn node(d: &Derivation, calc: Calculus, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let _ = write!(out, "{pad}(rule {} :major {}", d.rule.name(calc), d.major);
    match &d.instance {
        Instance::None => {}
        Instance::Witness(t) => {
            let _ = write!(out, " :witness {t}");
        }
        Instance::Eigen(x) => {
            let _ = write!(out, " :eigen {x}");
        }
    }
    let _ = write!(out, " :concl {}", d.conclusion);
    for p in &d.premises {
        out.push('\n');
        node(p, calc, depth + 1, out);
    }
    out.push(')');
}

pub fn print_env(env: &TypeEnv) -> String {
    env.iter().map(|(x, t)| format!("{x}:{t}")).collect::<Vec<_>>().join(", ")
}

pub fn print_document(doc: &Document) -> String {
    let mut out = format!("base {}\n", doc.base);
    if doc.calculus == Calculus::Disj {
        out.push_str("calculus disj\n");
    }
    match &doc.body {
        Body::Sequent(s) => {
            let _ = writeln!(out, "{s}");
        }
        Body::Derivation(d) => {
            let _ = writeln!(out, "{}", print_derivation(d, doc.calculus));
        }
        Body::Process { env, process } => {
            if !env.is_empty() {
                let _ = writeln!(out, "env {}", print_env(env));
            }
            let _ = writeln!(out, "proc {process}");
        }
    }
    out
}

/// Indented typing tree: one `rule(subject)  P |- env` line per node.
pub fn print_typing(td: &TypingDerivation) -> String {
    let mut out = String::new();
    typing_node(td, 0, &mut out);
    out
}

fn typing_node(td: &TypingDerivation, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let _ = writeln!(out, "{pad}{}({})  {} |- {}", td.rule, td.subject, td.process, print_env(&td.env));
    for p in &td.premises {
        typing_node(p, depth + 1, out);
    }
}
