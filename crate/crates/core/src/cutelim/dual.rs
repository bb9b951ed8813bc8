//! Disjunctive lemmas, each computed through the complement transform.

use super::{cut1, cut2, cut2_spill, cutn, eta_expand, split, CutError, CutPart};
use crate::derivation::Derivation;
use crate::roles::RoleSet;
use crate::syntax::Formula;

fn dual_part(p: &CutPart) -> CutPart {
    CutPart::new(p.derivation.dualize(), p.occs.clone())
}

/// From `Γ, [full]A` derive `Γ`.
pub fn fulset_disj(d: &Derivation, occs: &[usize]) -> Result<Derivation, CutError> {
    Ok(cut1(&d.dualize(), occs)?.dualize())
}

/// `|- [R1]A, ..., [Rn]A` whenever the complements partition the base.
pub fn eta_expand_disj(a: &Formula, rs: &[RoleSet]) -> Result<Derivation, CutError> {
    let comps: Vec<RoleSet> = rs.iter().map(RoleSet::complement).collect();
    Ok(eta_expand(a, &comps)?.dualize())
}

pub fn cut2_disj(d1: &Derivation, occ1: usize, d2: &Derivation, occ2: usize) -> Result<Derivation, CutError> {
    Ok(cut2(&d1.dualize(), occ1, &d2.dualize(), occ2)?.dualize())
}

/// From `Γ1, {[R1]A}` and `Γ2, {[R2]A}` with `R1`, `R2` disjoint derive
/// `Γ1, Γ2, [R1 ⊎ R2]A`.
pub fn cut2_spill_disj(p1: &CutPart, p2: &CutPart) -> Result<Derivation, CutError> {
    Ok(cut2_spill(&dual_part(p1), &dual_part(p2))?.dualize())
}

pub fn cutn_disj(parts: &[CutPart]) -> Result<Derivation, CutError> {
    let parts: Vec<CutPart> = parts.iter().map(dual_part).collect();
    Ok(cutn(&parts)?.dualize())
}

/// From `Γ, [R1 ∩ R2]A` with disjoint complements derive `Γ, [R1]A, [R2]A`.
pub fn cosplit_disj(d: &Derivation, occ: usize, r1: &RoleSet, r2: &RoleSet) -> Result<Derivation, CutError> {
    Ok(split(&d.dualize(), occ, &r1.complement(), &r2.complement())?.dualize())
}
