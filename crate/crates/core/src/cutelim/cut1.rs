use super::{internal, CutError};
use crate::derivation::{check, Calculus, Derivation, RuleName};
use crate::syntax::Sequent;

/// Remove `[∅]A` occurrences from the conclusion of a checking derivation.
pub fn cut1(d: &Derivation, occs: &[usize]) -> Result<Derivation, CutError> {
    check(d, Calculus::Conj).map_err(CutError::Input)?;
    for &o in occs {
        let it = d.conclusion.items.get(o).ok_or(CutError::OccurrenceOutOfRange(o))?;
        if !it.roles.is_empty() {
            return Err(CutError::Roles(format!("{it} is not annotated with the empty set")));
        }
    }
    let mut occs = occs.to_vec();
    occs.sort_unstable();
    occs.dedup();
    erase(d, &occs)
}

/// Erase the designated occurrences (all with empty role set). No positive
/// rule can act on them, so every principal step is dropped.
pub(crate) fn erase(d: &Derivation, occs: &[usize]) -> Result<Derivation, CutError> {
    if occs.is_empty() {
        return Ok(d.clone());
    }
    if d.rule == RuleName::Id {
        let items = d
            .conclusion
            .items
            .iter()
            .enumerate()
            .filter(|(i, _)| !occs.contains(i))
            .map(|(_, x)| x.clone())
            .collect();
        return Ok(Derivation::id(Sequent::new(items)));
    }
    let layout = d.layout().ok_or_else(|| internal(format!("node {} does not fit its rule", d.rule.name(Calculus::Conj))))?;
    let mut per_premise: Vec<Vec<usize>> = vec![vec![]; d.premises.len()];
    for &o in occs {
        if o == d.major {
            continue;
        }
        for &(k, j) in &layout.ctx[o] {
            per_premise[k].push(j);
        }
    }
    if occs.contains(&d.major) {
        if d.premises.len() != 1 {
            return Err(internal(format!("positive rule {} on an empty-set formula", d.rule.name(Calculus::Conj))));
        }
        per_premise[0].extend(&layout.actives[0]);
        return erase(&d.premises[0], &per_premise[0]);
    }
    let premises = d
        .premises
        .iter()
        .zip(&per_premise)
        .map(|(p, o)| erase(p, o))
        .collect::<Result<Vec<_>, _>>()?;
    // Each premise lost exactly the images of the erased occurrences, so the
    // node stays valid with those occurrences dropped from its conclusion.
    let keep: Vec<usize> = (0..d.conclusion.len()).filter(|i| !occs.contains(i)).collect();
    let major = keep.iter().position(|&i| i == d.major).ok_or_else(|| internal("major occurrence erased".into()))?;
    Ok(Derivation {
        rule: d.rule,
        conclusion: Sequent::new(keep.iter().map(|&i| d.conclusion.items[i].clone()).collect()),
        major,
        instance: d.instance.clone(),
        premises,
    })
}
