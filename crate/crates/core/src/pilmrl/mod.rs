//! Processes typed by i-formulas, their typing derivations and reductions.

mod equiv;
mod erase;
mod process;
mod reduce;
mod sr;
mod typing;


pub use erase::{erase_to_sequent, is_principal_cut};
pub use equiv::{assoc_neighbours, struct_equiv, EQUIV_STATE_CAP};
pub use process::{Branch, MsgKind, Process};
pub use reduce::{normalize, step, Normalized, Step, StepKind};
pub use sr::{check_subject_reduction, SrError, SrReport};
pub use typing::{header_roles_of, typecheck, TypeEnv, TypeError, TypeErrorKind, TypingDerivation, TypingRule};
