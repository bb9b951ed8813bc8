//! Proof kernel for linear multirole logic and its process calculus.
//!
//! The crate checks derivations in the conjunctive and disjunctive calculi,
//! runs cut elimination as a derivation transformer, and typechecks and
//! reduces processes.

pub mod cutelim;
pub mod derivation;
pub mod fresh;
pub mod frontend;
pub mod pilmrl;
pub mod roles;
pub mod syntax;
