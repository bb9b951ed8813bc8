use std::fmt;

use thiserror::Error;

use super::{actives, Calculus, Derivation, Instance, RuleName};
use crate::roles::{complements_partition_full, is_partition_of_full, RoleBase, RoleSet};
use crate::syntax::{Formula, IFormula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("expected {expected} premises, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("major index {0} is out of range")]
    MajorOutOfRange(usize),
    #[error("major formula {0} does not fit the rule")]
    Shape(String),
    #[error("wrong polarity: role {role} against {roles}")]
    Polarity { role: u32, roles: RoleSet },
    #[error("role sets do not partition the base: {0}")]
    Partition(String),
    #[error("identity needs one atom; found {0}")]
    IdFormula(String),
    #[error("context mismatch: {0}")]
    Context(String),
    #[error("banged context violation: {0} is not a ?-formula")]
    BangedContext(String),
    #[error("eigenvariable {0} is free in the conclusion")]
    Eigen(String),
    #[error("missing forall instance data")]
    Instance,
    #[error("role base: {0}")]
    Base(String),
}

/// A failed rule instance, located by a path of premise indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct RuleViolation {
    pub path: Vec<usize>,
    pub rule: RuleName,
    pub kind: Violation,
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "at node [{}] ({}): {}", path.join("."), self.rule.name(Calculus::Conj), self.kind)
    }
}

/// Check every node of `d` against the rules of `calc`.
pub fn check(d: &Derivation, calc: Calculus) -> Result<(), RuleViolation> {
    let base = d.conclusion.items.first().map(|it| it.roles.base());
    let mut path = Vec::new();
    walk(d, calc, base, &mut path)
}

fn walk(d: &Derivation, calc: Calculus, base: Option<RoleBase>, path: &mut Vec<usize>) -> Result<(), RuleViolation> {
    check_node(d, calc, base).map_err(|kind| RuleViolation { path: path.clone(), rule: d.rule, kind })?;
    for (i, p) in d.premises.iter().enumerate() {
        path.push(i);
        walk(p, calc, base, path)?;
        path.pop();
    }
    Ok(())
}

fn shown(items: &[IFormula]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}

fn check_node(d: &Derivation, calc: Calculus, base: Option<RoleBase>) -> Result<(), Violation> {
    if let Some(b) = base {
        d.conclusion.check_base(b).map_err(|e| Violation::Base(e.to_string()))?;
    }
    let arity = d.rule.arity();
    if d.premises.len() != arity {
        return Err(Violation::Arity { expected: arity, found: d.premises.len() });
    }
    if d.rule == RuleName::Id {
        return check_id(d, calc);
    }
    let major = d.conclusion.items.get(d.major).ok_or(Violation::MajorOutOfRange(d.major))?;
    let acts = actives(d.rule, major, &d.instance).ok_or_else(|| match (&major.body, &d.instance) {
        (Formula::Forall(..), Instance::None) => Violation::Instance,
        _ => Violation::Shape(major.to_string()),
    })?;

    let r = match &major.body {
        Formula::Tensor(r, ..) | Formula::With(r, ..) | Formula::Bang(r, _) | Formula::Forall(r, ..) | Formula::One(r) => *r,
        _ => return Err(Violation::Shape(major.to_string())),
    };
    let want_positive = matches!(
        d.rule,
        RuleName::TensorPos | RuleName::WithPos | RuleName::BangPos | RuleName::ForallPos | RuleName::OnePos
    );
    if calc.positive(r, &major.roles) != want_positive {
        return Err(Violation::Polarity { role: r, roles: major.roles.clone() });
    }

    let ctx = || d.conclusion.items.iter().enumerate().filter(|(i, _)| *i != d.major).map(|(_, x)| x);

    match d.rule {
        RuleName::OnePos => {
            if d.conclusion.len() > 1 {
                let extra: Vec<IFormula> = ctx().cloned().collect();
                return Err(Violation::Context(format!("unit leaf has extra items {}", shown(&extra))));
            }
            return Ok(());
        }
        RuleName::BangPos => {
            if let Some(bad) = ctx().find(|it| !calc.is_whynot(it)) {
                return Err(Violation::BangedContext(bad.to_string()));
            }
        }
        RuleName::ForallPos => {
            let Instance::Eigen(y) = &d.instance else { return Err(Violation::Instance) };
            if d.conclusion.free_term_vars().contains(y) {
                return Err(Violation::Eigen(y.clone()));
            }
        }
        _ => {}
    }

    // A complete layout means the contexts agree; otherwise work out why.
    if d.layout().is_some() {
        return Ok(());
    }
    let ctx: Vec<IFormula> = ctx().cloned().collect();

    // Recompute each premise's context and compare with the conclusion's.
    let mut rests = Vec::new();
    for (k, p) in d.premises.iter().enumerate() {
        let a = acts.premise(k);
        let rest = p.conclusion.remove_all(a).ok_or_else(|| {
            Violation::Context(format!("premise {k} lacks active formulas {}", shown(a)))
        })?;
        rests.push(rest);
    }
    let expected = match d.rule {
        RuleName::WithPos => {
            if rests[0] != rests[1] {
                return Err(Violation::Context(format!(
                    "with-pos premises have different contexts: {} vs {}",
                    shown(&rests[0].items),
                    shown(&rests[1].items)
                )));
            }
            rests.swap_remove(0)
        }
        _ => crate::syntax::Sequent::new(rests.into_iter().flat_map(|s| s.items).collect()),
    };
    let ctx = crate::syntax::Sequent::new(ctx);
    if expected != ctx {
        return Err(Violation::Context(format!(
            "conclusion context {} does not match premises' {}",
            shown(&ctx.items),
            shown(&expected.items)
        )));
    }
    Ok(())
}

fn check_id(d: &Derivation, calc: Calculus) -> Result<(), Violation> {
    let items = &d.conclusion.items;
    let Some(first) = items.first() else {
        return Err(Violation::Partition("empty identity".into()));
    };
    if !matches!(first.body, Formula::Atom { .. }) {
        return Err(Violation::IdFormula(first.body.to_string()));
    }
    if let Some(other) = items.iter().find(|it| it.body != first.body) {
        return Err(Violation::IdFormula(format!("{} and {}", first.body, other.body)));
    }
    let sets: Vec<RoleSet> = items.iter().map(|it| it.roles.clone()).collect();
    let ok = match calc {
        Calculus::Conj => is_partition_of_full(&sets),
        Calculus::Disj => complements_partition_full(&sets),
    }
    .map_err(|e| Violation::Base(e.to_string()))?;
    if !ok {
        let s: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        return Err(Violation::Partition(s.join(", ")));
    }
    Ok(())
}
