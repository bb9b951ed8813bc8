use std::collections::{BTreeSet, HashMap};

use crate::derivation::{Calculus, Derivation, Instance, RuleName};
use crate::fresh::stem;
use crate::roles::is_partition_of_full;
use crate::syntax::{Formula, IFormula, Sequent, Term};

/// Contexts longer than this are not split for `tensor-pos`.
const SPLIT_CAP: usize = 8;

/// Exhaustive backward search for a derivation of height at most `depth`.
/// `forall-neg` witnesses come from `pool` and the terms already in the goal.
pub fn prove_bounded(seq: &Sequent, calc: Calculus, depth: usize, pool: &[Term]) -> Option<Derivation> {
    let mut p = Prover { pool: pool.to_vec(), failed: HashMap::new() };
    match calc {
        Calculus::Conj => p.search(seq, depth),
        Calculus::Disj => p.search(&seq.complement(), depth).map(|d| d.dualize()),
    }
}

struct Prover {
    pool: Vec<Term>,
    // Largest depth at which a sequent (by key) is known to fail.
    failed: HashMap<String, usize>,
}

fn without(items: &[IFormula], m: usize) -> Vec<IFormula> {
    items.iter().enumerate().filter(|(i, _)| *i != m).map(|(_, x)| x.clone()).collect()
}

fn seq(mut ctx: Vec<IFormula>, more: &[IFormula]) -> Sequent {
    ctx.extend(more.iter().cloned());
    Sequent::new(ctx)
}

fn eigen_for(x: &str, s: &Sequent) -> String {
    let fv = s.free_term_vars();
    let base = stem(x);
    if !fv.contains(base) {
        return base.to_string();
    }
    (0..).map(|i| format!("{base}${i}")).find(|n| !fv.contains(n)).expect("unbounded")
}

impl Prover {
    fn search(&mut self, s: &Sequent, depth: usize) -> Option<Derivation> {
        if depth == 0 {
            return None;
        }
        let key = s.key();
        if self.failed.get(&key).is_some_and(|&d| d >= depth) {
            return None;
        }
        let found = self.try_rules(s, depth);
        if found.is_none() {
            let e = self.failed.entry(key).or_insert(0);
            *e = (*e).max(depth);
        }
        found
    }

    fn witnesses(&self, s: &Sequent) -> Vec<Term> {
        let mut ts = self.pool.clone();
        for it in &s.items {
            it.body.subterms_into(&mut ts);
        }
        for v in s.free_term_vars() {
            ts.push(Term::var(v));
        }
        let mut seen = BTreeSet::new();
        ts.retain(|t| seen.insert(t.clone()));
        if ts.is_empty() {
            ts.push(Term::var("w"));
        }
        ts
    }

    fn try_rules(&mut self, s: &Sequent, depth: usize) -> Option<Derivation> {
        let items = &s.items;
        if let Some(first) = items.first() {
            if matches!(first.body, Formula::Atom { .. }) && items.iter().all(|it| it.body == first.body) {
                let sets: Vec<_> = items.iter().map(|it| it.roles.clone()).collect();
                if is_partition_of_full(&sets).unwrap_or(false) {
                    return Some(Derivation::id(s.clone()));
                }
            }
        }
        if let [it] = items.as_slice() {
            if matches!(it.body, Formula::One(r) if it.roles.contains(r)) {
                return Some(Derivation::one_pos(it.clone()));
            }
        }
        let mut tried = BTreeSet::new();
        for m in 0..items.len() {
            if !tried.insert(items[m].key()) {
                continue;
            }
            if let Some(d) = self.on_major(s, m, depth) {
                return Some(d);
            }
        }
        None
    }

    fn unary(&mut self, rule: RuleName, it: &IFormula, inst: Instance, prem: Sequent, depth: usize) -> Option<Derivation> {
        let p = self.search(&prem, depth - 1)?;
        Derivation::infer(rule, it.clone(), inst, vec![p]).ok()
    }

    fn binary(&mut self, rule: RuleName, it: &IFormula, l: Sequent, r: Sequent, depth: usize) -> Option<Derivation> {
        let pl = self.search(&l, depth - 1)?;
        let pr = self.search(&r, depth - 1)?;
        Derivation::infer(rule, it.clone(), Instance::None, vec![pl, pr]).ok()
    }

    fn on_major(&mut self, s: &Sequent, m: usize, depth: usize) -> Option<Derivation> {
        let it = s.items[m].clone();
        let ctx = without(&s.items, m);
        let at = |f: &Formula| it.with_body(f.clone());
        match &it.body {
            Formula::Atom { .. } | Formula::Msg(..) => None,
            Formula::One(r) => {
                if it.roles.contains(*r) {
                    None
                } else {
                    self.unary(RuleName::OneNeg, &it, Instance::None, Sequent::new(ctx), depth)
                }
            }
            Formula::Tensor(r, a, b) => {
                if !it.roles.contains(*r) {
                    return self.unary(RuleName::TensorNeg, &it, Instance::None, seq(ctx, &[at(a), at(b)]), depth);
                }
                if ctx.len() > SPLIT_CAP {
                    return None;
                }
                let mut seen = BTreeSet::new();
                for mask in 0u32..(1 << ctx.len()) {
                    let (l, r): (Vec<_>, Vec<_>) = ctx.iter().enumerate().partition(|(i, _)| mask & (1 << i) != 0);
                    let l: Vec<IFormula> = l.into_iter().map(|(_, x)| x.clone()).collect();
                    let r: Vec<IFormula> = r.into_iter().map(|(_, x)| x.clone()).collect();
                    if !seen.insert(Sequent::new(l.clone()).key()) {
                        continue;
                    }
                    if let Some(d) = self.binary(RuleName::TensorPos, &it, seq(l, &[at(a)]), seq(r, &[at(b)]), depth) {
                        return Some(d);
                    }
                }
                None
            }
            Formula::With(r, a, b) => {
                if it.roles.contains(*r) {
                    return self.binary(RuleName::WithPos, &it, seq(ctx.clone(), &[at(a)]), seq(ctx, &[at(b)]), depth);
                }
                self.unary(RuleName::WithNegL, &it, Instance::None, seq(ctx.clone(), &[at(a)]), depth)
                    .or_else(|| self.unary(RuleName::WithNegR, &it, Instance::None, seq(ctx, &[at(b)]), depth))
            }
            Formula::Bang(r, b) => {
                if it.roles.contains(*r) {
                    if !ctx.iter().all(IFormula::is_whynot) {
                        return None;
                    }
                    return self.unary(RuleName::BangPos, &it, Instance::None, seq(ctx, &[at(b)]), depth);
                }
                self.unary(RuleName::BangNegWeaken, &it, Instance::None, Sequent::new(ctx.clone()), depth)
                    .or_else(|| self.unary(RuleName::BangNegDerelict, &it, Instance::None, seq(ctx.clone(), &[at(b)]), depth))
                    .or_else(|| {
                        self.unary(RuleName::BangNegContract, &it, Instance::None, seq(ctx, &[it.clone(), it.clone()]), depth)
                    })
            }
            Formula::Forall(r, x, b) => {
                if it.roles.contains(*r) {
                    let y = eigen_for(x, s);
                    let prem = seq(ctx, &[at(&b.subst(x, &Term::var(y.clone())))]);
                    return self.unary(RuleName::ForallPos, &it, Instance::Eigen(y), prem, depth);
                }
                for t in self.witnesses(s) {
                    let prem = seq(ctx.clone(), &[at(&b.subst(x, &t))]);
                    if let Some(d) = self.unary(RuleName::ForallNeg, &it, Instance::Witness(t), prem, depth) {
                        return Some(d);
                    }
                }
                None
            }
        }
    }
}
