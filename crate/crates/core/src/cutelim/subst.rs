use crate::derivation::{Derivation, Instance, RuleName};
use crate::fresh::fresh_avoiding;
use crate::syntax::Term;

/// `D{t/x}`: substitute in every sequent and witness, renaming eigenvariables
/// that `t` would capture.
pub fn subst_derivation(d: &Derivation, x: &str, t: &Term) -> Derivation {
    if !d.conclusion.free_term_vars().contains(x) && !mentions_above(d, x) {
        return d.clone();
    }
    match (&d.rule, &d.instance) {
        (RuleName::ForallPos, Instance::Eigen(y)) => {
            if y == x {
                // x is bound by this step; nothing below sees it free.
                return d.clone();
            }
            let (premise, y) = if t.mentions(y) {
                let tv = t.free_vars();
                let taken = d.premises[0].conclusion.free_term_vars();
                let y2 = fresh_avoiding(y, |n| tv.contains(n) || taken.contains(n) || n == x);
                (subst_derivation(&d.premises[0], y, &Term::var(y2.clone())), y2)
            } else {
                (d.premises[0].clone(), y.clone())
            };
            Derivation {
                rule: d.rule,
                conclusion: d.conclusion.subst(x, t),
                major: d.major,
                instance: Instance::Eigen(y),
                premises: vec![subst_derivation(&premise, x, t)],
            }
        }
        _ => Derivation {
            rule: d.rule,
            conclusion: d.conclusion.subst(x, t),
            major: d.major,
            instance: match &d.instance {
                Instance::Witness(w) => Instance::Witness(w.subst(x, t)),
                other => other.clone(),
            },
            premises: d.premises.iter().map(|p| subst_derivation(p, x, t)).collect(),
        },
    }
}

// x can be free above a node without being free in its conclusion when a
// witness mentions it and the formula discards the bound variable.
fn mentions_above(d: &Derivation, x: &str) -> bool {
    d.premises.iter().any(|p| p.conclusion.free_term_vars().contains(x) || mentions_above(p, x))
        || matches!(&d.instance, Instance::Witness(w) if w.mentions(x))
}
