//! Generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use lmrl::derivation::{check, Calculus, Derivation, Instance, RuleName};
use lmrl::roles::{RoleBase, RoleSet};
use lmrl::syntax::{Formula, IFormula, Sequent};

pub fn base(n: u32) -> RoleBase {
    RoleBase::Finite(n)
}

pub fn set(n: u32, roles: &[u32]) -> RoleSet {
    RoleSet::from_roles(base(n), roles.iter().copied()).unwrap()
}

/// All partitions of `0..n` into nonempty blocks, by restricted growth strings.
pub fn partitions(n: u32) -> Vec<Vec<RoleSet>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n as usize];
    loop {
        let blocks = rgs.iter().max().unwrap() + 1;
        let mut parts: Vec<Vec<u32>> = vec![vec![]; blocks];
        for (r, b) in rgs.iter().enumerate() {
            parts[*b].push(r as u32);
        }
        out.push(parts.iter().map(|p| set(n, p)).collect());
        // Next restricted growth string.
        let mut i = n as usize - 1;
        loop {
            if i == 0 {
                return out;
            }
            let max_before = *rgs[..i].iter().max().unwrap();
            if rgs[i] <= max_before {
                rgs[i] += 1;
                for x in &mut rgs[i + 1..] {
                    *x = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Every subset of `0..n`.
pub fn subsets(n: u32) -> Vec<RoleSet> {
    (0u32..1 << n).map(|m| set(n, &(0..n).filter(|r| m & (1 << r) != 0).collect::<Vec<_>>())).collect()
}

fn infer(rule: RuleName, major: IFormula, premises: Vec<Derivation>) -> Option<Derivation> {
    let d = Derivation::infer(rule, major, Instance::None, premises).ok()?;
    check(&d, Calculus::Conj).is_ok().then_some(d)
}

fn add(out: &mut Vec<Derivation>, seen: &mut HashSet<String>, d: Option<Derivation>) {
    if let Some(d) = d {
        if seen.insert(shape_key(&d)) {
            out.push(d);
        }
    }
}

/// Identifies a derivation up to reordering of conclusions.
pub fn shape_key(d: &Derivation) -> String {
    let mut s = format!("{:?}:{}[", d.rule, d.conclusion.key());
    for p in &d.premises {
        s.push_str(&shape_key(p));
        s.push(',');
    }
    s.push(']');
    s
}

/// The small world: derivations of height at most 3 over atoms `a`, `b`,
/// connectives on role 0, built bottom-up.
///
/// Height 1 is every identity on `a`/`b` and every `one-pos` leaf on role 0.
/// Each later height applies every unary rule to every derivation of the
/// previous height, and the binary rules to pairs drawn from the previous
/// height and height 1.
pub fn small_world(n: u32) -> Vec<Derivation> {
    let r = 0;
    let atoms = [Formula::atom("a"), Formula::atom("b")];
    let neg = set(n, &(1..n).collect::<Vec<_>>());
    let mut seen = HashSet::new();
    let mut h1 = Vec::new();
    for p in partitions(n).into_iter().filter(|p| p.len() >= 2) {
        for a in &atoms {
            let s = Sequent::new(p.iter().map(|rs| IFormula::new(rs.clone(), a.clone())).collect());
            add(&mut h1, &mut seen, Some(Derivation::id(s)));
        }
    }
    for rs in subsets(n).into_iter().filter(|s| s.contains(r)) {
        add(&mut h1, &mut seen, Some(Derivation::one_pos(IFormula::new(rs, Formula::One(r)))));
    }
    let mut levels = vec![h1];
    for _ in 1..3 {
        let prev = levels.last().unwrap().clone();
        let mut next = Vec::new();
        for d in &prev {
            let items = &d.conclusion.items;
            add(&mut next, &mut seen, infer(RuleName::OneNeg, IFormula::new(neg.clone(), Formula::One(r)), vec![d.clone()]));
            add(
                &mut next,
                &mut seen,
                infer(RuleName::BangNegWeaken, IFormula::new(neg.clone(), Formula::bang(r, atoms[0].clone())), vec![d.clone()]),
            );
            for (i, it) in items.iter().enumerate() {
                let up = |f: Formula| it.with_body(f);
                if it.roles.contains(r) {
                    add(&mut next, &mut seen, infer(RuleName::BangPos, up(Formula::bang(r, it.body.clone())), vec![d.clone()]));
                    add(&mut next, &mut seen, infer(RuleName::WithPos, up(Formula::with(r, it.body.clone(), it.body.clone())), vec![d.clone(), d.clone()]));
                } else {
                    add(&mut next, &mut seen, infer(RuleName::BangNegDerelict, up(Formula::bang(r, it.body.clone())), vec![d.clone()]));
                    add(&mut next, &mut seen, infer(RuleName::WithNegL, up(Formula::with(r, it.body.clone(), atoms[1].clone())), vec![d.clone()]));
                    add(&mut next, &mut seen, infer(RuleName::WithNegR, up(Formula::with(r, atoms[0].clone(), it.body.clone())), vec![d.clone()]));
                    for jt in items.iter().skip(i + 1) {
                        if jt.roles == it.roles {
                            add(&mut next, &mut seen, infer(RuleName::TensorNeg, up(Formula::tensor(r, it.body.clone(), jt.body.clone())), vec![d.clone()]));
                        }
                        if jt == it && it.is_whynot() {
                            add(&mut next, &mut seen, infer(RuleName::BangNegContract, it.clone(), vec![d.clone()]));
                        }
                    }
                }
            }
            for e in &levels[0] {
                for it in d.conclusion.items.iter().filter(|it| it.roles.contains(r)) {
                    for jt in e.conclusion.items.iter().filter(|jt| jt.roles == it.roles) {
                        let t = it.with_body(Formula::tensor(r, it.body.clone(), jt.body.clone()));
                        add(&mut next, &mut seen, infer(RuleName::TensorPos, t, vec![d.clone(), e.clone()]));
                    }
                }
            }
        }
        levels.push(next);
    }
    levels.concat()
}

/// Occurrence groups: for each distinct item, its positions.
pub fn occurrence_groups(s: &Sequent) -> BTreeMap<String, (IFormula, Vec<usize>)> {
    let mut out: BTreeMap<String, (IFormula, Vec<usize>)> = BTreeMap::new();
    for (i, it) in s.items.iter().enumerate() {
        out.entry(it.key()).or_insert_with(|| (it.clone(), vec![])).1.push(i);
    }
    out
}

/// Multiset of items, for endpoint comparison.
pub fn multiset(items: impl IntoIterator<Item = IFormula>) -> Vec<String> {
    let mut v: Vec<String> = items.into_iter().map(|i| i.key()).collect();
    v.sort();
    v
}

/// Every session type (`one`, `*`, `&`, `!`) with at most `size` connectives
/// over roles `0..n`.
pub fn session_types(n: u32, size: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![(0..n).map(Formula::One).collect()];
    for s in 1..=size {
        let mut v = Vec::new();
        for r in 0..n {
            for a in &by_size[s - 1] {
                v.push(Formula::bang(r, a.clone()));
            }
            for k in 0..s {
                for a in &by_size[k] {
                    for b in &by_size[s - 1 - k] {
                        v.push(Formula::tensor(r, a.clone(), b.clone()));
                        v.push(Formula::with(r, a.clone(), b.clone()));
                    }
                }
            }
        }
        by_size.push(v);
    }
    by_size.concat()
}
