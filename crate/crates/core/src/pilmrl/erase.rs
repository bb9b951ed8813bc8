use super::typing::{TypingDerivation, TypingRule};
use crate::cutelim::{cutn, CutError, CutPart};
use crate::derivation::{Derivation, Instance};
use crate::syntax::IFormula;

/// Forget the process: the underlying LMRL∧ derivation of the environment.
/// Cuts become n-ary cuts eliminated by the cut lemma, so the result is
/// cut-free. Message rules have no logical counterpart and are rejected.
pub fn erase_to_sequent(td: &TypingDerivation) -> Result<Derivation, CutError> {
    let major = || -> IFormula { td.env[&td.subject].clone() };
    match td.rule {
        TypingRule::OnePos => Ok(Derivation::one_pos(major())),
        TypingRule::NCut => {
            let mut parts = Vec::new();
            for (prem, roles) in td.premises.iter().zip(&td.cut_roles) {
                let d = erase_to_sequent(prem)?;
                let a = td.cut_formula.clone().ok_or_else(|| CutError::Internal("cut without formula".into()))?;
                let item = IFormula::new(roles.clone(), a);
                let occ = d
                    .conclusion
                    .items
                    .iter()
                    .position(|i| *i == item)
                    .ok_or_else(|| CutError::Internal(format!("{item} missing from erased premise")))?;
                parts.push(CutPart { derivation: d, occs: vec![occ] });
            }
            cutn(&parts)
        }
        rule => {
            let Some(k) = rule.kernel() else { return Err(CutError::MsgFormula(td.rule.name().to_string())) };
            let premises = td.premises.iter().map(erase_to_sequent).collect::<Result<Vec<_>, _>>()?;
            Derivation::infer(k, major(), Instance::None, premises).map_err(CutError::Internal)
        }
    }
}

/// A cut is principal when every part acts on the cut name at its root.
pub fn is_principal_cut(td: &TypingDerivation) -> bool {
    td.rule == TypingRule::NCut
        && td.premises.iter().all(|p| p.process.subject() == Some(td.subject.as_str()))
}
