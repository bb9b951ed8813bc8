//! Terms, formulas, i-formulas and sequents.

pub mod formula;
pub mod sequent;
pub mod term;

pub use formula::Formula;
pub use sequent::{IFormula, Sequent};
pub use term::Term;
