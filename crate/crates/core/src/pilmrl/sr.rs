use thiserror::Error;

use super::equiv::struct_equiv;
use super::process::Process;
use super::reduce::{step, Step};
use super::typing::{typecheck, TypeEnv, TypeError};

#[derive(Debug, Clone)]
pub struct SrReport {
    pub steps: Vec<Step>,
    pub normal_form: Process,
    pub exhausted: bool,
}

impl SrReport {
    /// Every tensor step's alternative result is equivalent to the taken one.
    pub fn tensor_confluent(&self) -> bool {
        self.steps.iter().all(|s| s.alternative.as_ref().is_none_or(|q2| struct_equiv(&s.result, q2)))
    }
}

#[derive(Debug, Clone, Error)]
pub enum SrError {
    #[error("initial process does not typecheck: {0}")]
    Initial(TypeError),
    #[error("step {index} ({kind}) breaks typing: {error}\n  result: {process}")]
    Step { index: usize, kind: &'static str, process: String, error: TypeError },
    #[error("no step applies to a process with cuts: {0}")]
    Stuck(String),
}

/// Run the strategy, re-typechecking every intermediate process (and the
/// alternative result of tensor steps) against the same environment.
pub fn check_subject_reduction(p: &Process, env: &TypeEnv, fuel: usize) -> Result<SrReport, SrError> {
    typecheck(p, env).map_err(SrError::Initial)?;
    let mut cur = p.clone();
    let mut steps = Vec::new();
    loop {
        if steps.len() >= fuel {
            let exhausted = step(&cur).is_some();
            return Ok(SrReport { steps, normal_form: cur, exhausted });
        }
        let Some(s) = step(&cur) else {
            if cur.cut_count() > 0 {
                return Err(SrError::Stuck(cur.to_string()));
            }
            return Ok(SrReport { steps, normal_form: cur, exhausted: false });
        };
        let index = steps.len();
        for q in std::iter::once(&s.result).chain(s.alternative.as_ref()) {
            typecheck(q, env).map_err(|error| SrError::Step { index, kind: s.kind.name(), process: q.to_string(), error })?;
        }
        cur = s.result.clone();
        steps.push(s);
    }
}
