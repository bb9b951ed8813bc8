//! Derivation trees for the conjunctive and disjunctive calculi.
//!
//! Both calculi share one tree shape. A node's rule is read against a
//! [`Calculus`]: under `Disj` every polarity test is flipped, which is the
//! same as complementing every role set and reading the tree under `Conj`.

mod check;

use std::fmt;

use smallvec::{smallvec, SmallVec};

pub use check::{check, RuleViolation, Violation};

use crate::syntax::{Formula, IFormula, Sequent, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Calculus {
    Conj,
    Disj,
}

impl Calculus {
    pub fn dual(self) -> Self {
        match self {
            Calculus::Conj => Calculus::Disj,
            Calculus::Disj => Calculus::Conj,
        }
    }

    /// Whether `[R]` reads a connective annotated with `r` positively.
    pub fn positive(self, r: crate::roles::Role, roles: &crate::roles::RoleSet) -> bool {
        match self {
            Calculus::Conj => roles.contains(r),
            Calculus::Disj => !roles.contains(r),
        }
    }

    /// `[R]!_r B` read as a `?`-formula in this calculus.
    pub fn is_whynot(self, it: &IFormula) -> bool {
        matches!(&it.body, Formula::Bang(r, _) if !self.positive(*r, &it.roles))
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Calculus::Conj => "conj",
            Calculus::Disj => "disj",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleName {
    Id,
    TensorNeg,
    TensorPos,
    WithNegL,
    WithNegR,
    WithPos,
    BangPos,
    BangNegWeaken,
    BangNegDerelict,
    BangNegContract,
    ForallNeg,
    ForallPos,
    OneNeg,
    OnePos,
}

const NAMES: [(RuleName, &str, &str); 14] = [
    (RuleName::Id, "id", "id"),
    (RuleName::TensorNeg, "tensor-neg", "par-pos"),
    (RuleName::TensorPos, "tensor-pos", "par-neg"),
    (RuleName::WithNegL, "with-neg-l", "plus-pos-l"),
    (RuleName::WithNegR, "with-neg-r", "plus-pos-r"),
    (RuleName::WithPos, "with-pos", "plus-neg"),
    (RuleName::BangPos, "bang-pos", "whynot-neg"),
    (RuleName::BangNegWeaken, "bang-neg-weaken", "whynot-pos-weaken"),
    (RuleName::BangNegDerelict, "bang-neg-derelict", "whynot-pos-derelict"),
    (RuleName::BangNegContract, "bang-neg-contract", "whynot-pos-contract"),
    (RuleName::ForallNeg, "forall-neg", "exists-pos"),
    (RuleName::ForallPos, "forall-pos", "exists-neg"),
    (RuleName::OneNeg, "one-neg", "bot-pos"),
    (RuleName::OnePos, "one-pos", "bot-neg"),
];

impl RuleName {
    pub const ALL: [RuleName; 14] = [
        RuleName::Id,
        RuleName::TensorNeg,
        RuleName::TensorPos,
        RuleName::WithNegL,
        RuleName::WithNegR,
        RuleName::WithPos,
        RuleName::BangPos,
        RuleName::BangNegWeaken,
        RuleName::BangNegDerelict,
        RuleName::BangNegContract,
        RuleName::ForallNeg,
        RuleName::ForallPos,
        RuleName::OneNeg,
        RuleName::OnePos,
    ];

    /// Rule label as written in the given calculus.
    pub fn name(self, calc: Calculus) -> &'static str {
        let (_, c, d) = NAMES.iter().find(|(r, _, _)| *r == self).expect("every rule is named");
        match calc {
            Calculus::Conj => c,
            Calculus::Disj => d,
        }
    }

    /// Parse a label; the calculus is `None` for labels shared by both.
    pub fn parse(s: &str) -> Option<(RuleName, Option<Calculus>)> {
        NAMES.iter().find_map(|(r, c, d)| {
            if s == *c && s == *d {
                Some((*r, None))
            } else if s == *c {
                Some((*r, Some(Calculus::Conj)))
            } else if s == *d {
                Some((*r, Some(Calculus::Disj)))
            } else {
                None
            }
        })
    }

    pub fn arity(self) -> usize {
        match self {
            RuleName::Id | RuleName::OnePos => 0,
            RuleName::TensorPos | RuleName::WithPos => 2,
            _ => 1,
        }
    }
}

/// Rule-instance data beyond the major formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instance {
    None,
    /// The term `t` of a `forall-neg` step.
    Witness(Term),
    /// The eigenvariable of a `forall-pos` step.
    Eigen(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: RuleName,
    pub conclusion: Sequent,
    /// Index of the major occurrence in `conclusion` (unused by `id`).
    pub major: usize,
    pub instance: Instance,
    pub premises: Vec<Derivation>,
}

/// Where each part of a node's conclusion comes from.
#[derive(Debug, Clone)]
pub struct Layout {
    /// Per premise, positions of the active formulas in that premise.
    pub actives: SmallVec<[SmallVec<[usize; 2]>; 2]>,
    /// Per conclusion index, the premise positions it is copied from
    /// (empty for the major occurrence). `with-pos` copies into both.
    pub ctx: SmallVec<[SmallVec<[(usize, usize); 2]>; 6]>,
}

/// Active formulas per premise, stored flat: premise 0 owns `items[..split]`.
#[derive(Debug, Clone)]
pub struct Actives {
    items: SmallVec<[IFormula; 2]>,
    split: usize,
    arity: usize,
}

impl Actives {
    fn none(arity: usize) -> Self {
        Actives { items: SmallVec::new(), split: 0, arity }
    }

    fn one(items: SmallVec<[IFormula; 2]>) -> Self {
        let split = items.len();
        Actives { items, split, arity: 1 }
    }

    fn two(a: IFormula, b: IFormula) -> Self {
        Actives { items: smallvec![a, b], split: 1, arity: 2 }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn premise(&self, k: usize) -> &[IFormula] {
        match k {
            0 => &self.items[..self.split],
            _ => &self.items[self.split..],
        }
    }
}

/// Active formulas a rule needs in each premise, given its major formula.
/// `None` means the major formula has the wrong shape for the rule.
pub fn actives(rule: RuleName, major: &IFormula, instance: &Instance) -> Option<Actives> {
    let at = |f: &Formula| major.with_body(f.clone());
    Some(match (rule, &major.body) {
        (RuleName::Id, _) | (RuleName::OnePos, _) => Actives::none(0),
        (RuleName::TensorNeg, Formula::Tensor(_, a, b)) => Actives::one(smallvec![at(a), at(b)]),
        (RuleName::TensorPos, Formula::Tensor(_, a, b)) => Actives::two(at(a), at(b)),
        (RuleName::WithNegL, Formula::With(_, a, _)) => Actives::one(smallvec![at(a)]),
        (RuleName::WithNegR, Formula::With(_, _, b)) => Actives::one(smallvec![at(b)]),
        (RuleName::WithPos, Formula::With(_, a, b)) => Actives::two(at(a), at(b)),
        (RuleName::BangPos, Formula::Bang(_, b)) => Actives::one(smallvec![at(b)]),
        (RuleName::BangNegWeaken, Formula::Bang(..)) => Actives::none(1),
        (RuleName::BangNegDerelict, Formula::Bang(_, b)) => Actives::one(smallvec![at(b)]),
        (RuleName::BangNegContract, Formula::Bang(..)) => Actives::one(smallvec![major.clone(), major.clone()]),
        (RuleName::ForallNeg, Formula::Forall(_, x, b)) => match instance {
            Instance::Witness(t) => Actives::one(smallvec![at(&b.subst(x, t))]),
            _ => return None,
        },
        (RuleName::ForallPos, Formula::Forall(_, x, b)) => match instance {
            Instance::Eigen(y) => Actives::one(smallvec![at(&b.subst(x, &Term::var(y.clone())))]),
            _ => return None,
        },
        (RuleName::OneNeg, Formula::One(_)) => Actives::none(1),
        _ => return None,
    })
}

impl Derivation {
    /// Identity leaf concluding `seq`.
    pub fn id(seq: Sequent) -> Self {
        Derivation { rule: RuleName::Id, conclusion: seq, major: 0, instance: Instance::None, premises: vec![] }
    }

    /// Unit leaf `|- [R]one[r]`.
    pub fn one_pos(item: IFormula) -> Self {
        Derivation {
            rule: RuleName::OnePos,
            conclusion: Sequent::new(vec![item]),
            major: 0,
            instance: Instance::None,
            premises: vec![],
        }
    }

    /// Apply `rule` with the given major formula to `premises`, locating the
    /// active formulas in each premise. The major occurrence goes last.
    /// Side conditions are left to [`check`].
    pub fn infer(
        rule: RuleName,
        major: IFormula,
        instance: Instance,
        premises: Vec<Derivation>,
    ) -> Result<Self, String> {
        let acts = actives(rule, &major, &instance)
            .ok_or_else(|| format!("{} does not apply to {major}", rule.name(Calculus::Conj)))?;
        if premises.len() != rule.arity() || acts.arity() != rule.arity() {
            return Err(format!("{} needs {} premises", rule.name(Calculus::Conj), rule.arity()));
        }
        let mut items = Vec::with_capacity(premises.iter().map(|p| p.conclusion.len()).sum::<usize>() + 1);
        for (k, p) in premises.iter().enumerate() {
            let a = acts.premise(k);
            let mut used: SmallVec<[bool; 8]> = smallvec![false; p.conclusion.len()];
            for it in a {
                let i = p.conclusion.find_unused(it, &used).ok_or_else(|| {
                    format!("active formulas {:?} missing from premise {k}", a.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                })?;
                used[i] = true;
            }
            if rule == RuleName::WithPos && k == 1 {
                break;
            }
            items.extend(p.conclusion.items.iter().zip(&used).filter(|(_, u)| !**u).map(|(x, _)| x.clone()));
        }
        items.push(major);
        let major = items.len() - 1;
        Ok(Derivation { rule, conclusion: Sequent::new(items), major, instance, premises })
    }

    pub fn major_formula(&self) -> &IFormula {
        &self.conclusion.items[self.major]
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Derivation::node_count).sum::<usize>()
    }

    /// Replace every role set by its complement. Rule names are shared, so
    /// the result reads as the same rules of the dual calculus.
    pub fn dualize(&self) -> Derivation {
        self.map_sequents(&|s| s.complement())
    }

    pub fn map_sequents(&self, f: &dyn Fn(&Sequent) -> Sequent) -> Derivation {
        Derivation {
            rule: self.rule,
            conclusion: f(&self.conclusion),
            major: self.major,
            instance: self.instance.clone(),
            premises: self.premises.iter().map(|p| p.map_sequents(f)).collect(),
        }
    }

    /// Match conclusion items to premise positions. `None` if the node does
    /// not fit its rule's shape.
    pub fn layout(&self) -> Option<Layout> {
        let n = self.conclusion.len();
        if self.premises.len() != self.rule.arity() {
            return None;
        }
        if self.premises.is_empty() {
            return Some(Layout { actives: SmallVec::new(), ctx: smallvec![SmallVec::new(); n] });
        }
        let major = self.conclusion.items.get(self.major)?;
        let acts = actives(self.rule, major, &self.instance)?;
        let mut used: SmallVec<[SmallVec<[bool; 8]>; 2]> =
            self.premises.iter().map(|p| smallvec![false; p.conclusion.len()]).collect();
        let mut act_pos = SmallVec::new();
        for k in 0..acts.arity() {
            let a = acts.premise(k);
            let mut pos = SmallVec::new();
            for it in a {
                let i = self.premises[k].conclusion.find_unused(it, &used[k])?;
                used[k][i] = true;
                pos.push(i);
            }
            act_pos.push(pos);
        }
        let mut ctx: SmallVec<[SmallVec<[(usize, usize); 2]>; 6]> = smallvec![SmallVec::new(); n];
        for (i, it) in self.conclusion.items.iter().enumerate() {
            if i == self.major {
                continue;
            }
            if self.rule == RuleName::WithPos {
                for k in 0..2 {
                    let j = self.premises[k].conclusion.find_unused(it, &used[k])?;
                    used[k][j] = true;
                    ctx[i].push((k, j));
                }
            } else {
                let found = (0..self.premises.len())
                    .find_map(|k| self.premises[k].conclusion.find_unused(it, &used[k]).map(|j| (k, j)))?;
                used[found.0][found.1] = true;
                ctx[i].push(found);
            }
        }
        if used.iter().flatten().any(|u| !u) {
            return None;
        }
        Some(Layout { actives: act_pos, ctx })
    }
}
