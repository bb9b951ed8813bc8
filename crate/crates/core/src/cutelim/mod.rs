//! Cut elimination as derivation transformers, a bounded prover used as an
//! independent oracle, and the two-role translation into classical linear
//! logic sequents.

mod cll2;
mod cut1;
mod dual;
mod eta;
mod prove;
mod spill;
mod subst;

pub use cll2::{translate_cll2, Cll2Formula};
pub use cut1::cut1;
pub use dual::{cosplit_disj, cut2_disj, cut2_spill_disj, cutn_disj, eta_expand_disj, fulset_disj};
pub use eta::eta_expand;
pub use prove::prove_bounded;
pub use spill::{cut2, cut2_spill, cutn, split, CutPart};
pub use subst::subst_derivation;

use thiserror::Error;

use crate::derivation::RuleViolation;
use crate::roles::RoleError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutError {
    #[error("input derivation does not check: {0}")]
    Input(RuleViolation),
    #[error("occurrence {0} is out of range")]
    OccurrenceOutOfRange(usize),
    #[error("no cut occurrences designated")]
    NoOccurrences,
    #[error("designated occurrences carry different formulas")]
    MixedOccurrences,
    #[error("repeated occurrences are only allowed for ?-formulas, not {0}")]
    RepeatedNonWhynot(String),
    #[error("role condition failed: {0}")]
    Roles(String),
    #[error("cut formula {0} mentions msg, which the logic kernel does not know")]
    MsgFormula(String),
    #[error("role base: {0}")]
    Base(#[from] RoleError),
    #[error("cut measure did not decrease: {from:?} to {to:?}")]
    MeasureNotDecreasing { from: (usize, usize), to: (usize, usize) },
    #[error("internal: {0}")]
    Internal(String),
}

fn internal(e: String) -> CutError {
    CutError::Internal(e)
}
