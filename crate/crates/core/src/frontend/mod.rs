//! Text formats: formulas, sequents, derivations and processes.
//!
//! The grammar is documented in `corpus/GRAMMAR.md`. Every printer here
//! produces text the matching parser reads back to an equal value.

mod lexer;
mod parser;
mod print;

use thiserror::Error;

pub use parser::Parser;
pub use print::{print_derivation, print_document, print_env, print_typing};

use crate::derivation::{Calculus, Derivation};
use crate::pilmrl::{Process, TypeEnv};
use crate::roles::{RoleBase, RoleSet};
use crate::syntax::{Formula, IFormula, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub fn at(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError { line, col, msg: msg.into() }
    }
}

#[derive(Debug, Clone)]
pub enum Body {
    Sequent(Sequent),
    Derivation(Derivation),
    Process { env: TypeEnv, process: Process },
}

/// A parsed input file.
#[derive(Debug, Clone)]
pub struct Document {
    pub base: RoleBase,
    pub calculus: Calculus,
    pub body: Body,
}

pub fn parse_document(src: &str) -> Result<Document, ParseError> {
    Parser::new(src, RoleBase::Omega)?.document()
}

fn whole<T>(src: &str, base: RoleBase, f: impl FnOnce(&mut Parser) -> Result<T, ParseError>) -> Result<T, ParseError> {
    let mut p = Parser::new(src, base)?;
    let v = f(&mut p)?;
    p.expect_end()?;
    Ok(v)
}

pub fn parse_formula(src: &str, base: RoleBase) -> Result<Formula, ParseError> {
    whole(src, base, Parser::formula)
}

pub fn parse_iformula(src: &str, base: RoleBase) -> Result<IFormula, ParseError> {
    whole(src, base, Parser::iformula)
}

pub fn parse_sequent(src: &str, base: RoleBase) -> Result<Sequent, ParseError> {
    whole(src, base, Parser::sequent)
}

pub fn parse_derivation(src: &str, base: RoleBase) -> Result<Derivation, ParseError> {
    whole(src, base, Parser::derivation)
}

pub fn parse_process(src: &str, base: RoleBase) -> Result<Process, ParseError> {
    whole(src, base, Parser::process)
}

pub fn parse_rolesets(src: &str, base: RoleBase) -> Result<Vec<RoleSet>, ParseError> {
    whole(src, base, Parser::roleset_list)
}

pub fn parse_env(src: &str, base: RoleBase) -> Result<TypeEnv, ParseError> {
    whole(src, base, Parser::env)
}
