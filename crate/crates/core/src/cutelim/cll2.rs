use std::fmt;

use super::CutError;
use crate::roles::{RoleBase, RoleError};
use crate::syntax::{Formula, Sequent};

/// A formula of the two-sided translation; `Unit` is the tensor unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cll2Formula {
    Formula(Formula),
    Unit,
}

impl fmt::Display for Cll2Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cll2Formula::Formula(a) => write!(f, "{a}"),
            Cll2Formula::Unit => write!(f, "1"),
        }
    }
}

/// Read a two-role sequent as `left |- right`: role 0 goes right, role 1
/// left, and the full and empty sets become units.
pub fn translate_cll2(seq: &Sequent) -> Result<(Vec<Cll2Formula>, Vec<Cll2Formula>), CutError> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for it in &seq.items {
        let base = it.roles.base();
        if base != RoleBase::Finite(2) {
            return Err(CutError::Base(RoleError::MixedBases(base, RoleBase::Finite(2))));
        }
        match (it.roles.contains(0), it.roles.contains(1)) {
            (true, false) => right.push(Cll2Formula::Formula(it.body.clone())),
            (false, true) => left.push(Cll2Formula::Formula(it.body.clone())),
            (true, true) => right.push(Cll2Formula::Unit),
            (false, false) => left.push(Cll2Formula::Unit),
        }
    }
    Ok((left, right))
}
