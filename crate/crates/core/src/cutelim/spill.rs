use std::borrow::Cow;
use std::cell::OnceCell;

use super::cut1::erase;
use super::subst::subst_derivation;
use super::{eta_expand, internal, CutError};
use crate::derivation::{check, Calculus, Derivation, Instance, Layout, RuleName};
use crate::fresh::{fresh_avoiding, fresh_name};
use crate::roles::{complements_partition_full, RoleSet};
use crate::syntax::{Formula, IFormula, Sequent, Term};

/// One premise of a cut: a derivation and the designated occurrences of the
/// cut formula in its conclusion.
#[derive(Debug, Clone)]
pub struct CutPart {
    pub derivation: Derivation,
    pub occs: Vec<usize>,
}

impl CutPart {
    pub fn new(derivation: Derivation, occs: Vec<usize>) -> Self {
        CutPart { derivation, occs }
    }
}

/// A side of a cut in progress. `occs` may be empty only for the `?`-side.
#[derive(Debug, Clone)]
struct Side<'a> {
    d: Cow<'a, Derivation>,
    occs: Vec<usize>,
    roles: RoleSet,
    layout: OnceCell<Option<Layout>>,
}

impl<'a> Side<'a> {
    fn new(d: Cow<'a, Derivation>, occs: Vec<usize>, roles: RoleSet) -> Self {
        Side { d, occs, roles, layout: OnceCell::new() }
    }

    fn layout(&self) -> Result<&Layout, CutError> {
        self.layout
            .get_or_init(|| self.d.layout())
            .as_ref()
            .ok_or_else(|| internal(format!("node {} does not fit its rule", self.d.rule.name(Calculus::Conj))))
    }

    fn item(&self, a: &Formula) -> IFormula {
        IFormula::new(self.roles.clone(), a.clone())
    }

    fn context(&self) -> Vec<IFormula> {
        self.d
            .conclusion
            .items
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.occs.contains(i))
            .map(|(_, x)| x.clone())
            .collect()
    }

    fn principal(&self) -> bool {
        !self.occs.is_empty()
            && (matches!(self.d.rule, RuleName::Id | RuleName::OnePos) || self.occs.contains(&self.d.major))
    }
}

fn infer(rule: RuleName, major: IFormula, inst: Instance, premises: Vec<Derivation>) -> Result<Derivation, CutError> {
    Derivation::infer(rule, major, inst, premises).map_err(internal)
}

fn locate(d: &Derivation, it: &IFormula) -> Result<usize, CutError> {
    d.conclusion
        .items
        .iter()
        .rposition(|x| x == it)
        .ok_or_else(|| internal(format!("{it} missing from {}", d.conclusion)))
}

fn contract_all(mut d: Derivation, items: &[IFormula]) -> Result<Derivation, CutError> {
    for it in items {
        d = infer(RuleName::BangNegContract, it.clone(), Instance::None, vec![d])?;
    }
    Ok(d)
}

fn validate(part: &CutPart) -> Result<IFormula, CutError> {
    check(&part.derivation, Calculus::Conj).map_err(CutError::Input)?;
    let items = &part.derivation.conclusion.items;
    let first = *part.occs.first().ok_or(CutError::NoOccurrences)?;
    let mut seen = Vec::new();
    for &o in &part.occs {
        let it = items.get(o).ok_or(CutError::OccurrenceOutOfRange(o))?;
        if it != &items[first] {
            return Err(CutError::MixedOccurrences);
        }
        if seen.contains(&o) {
            return Err(CutError::MixedOccurrences);
        }
        seen.push(o);
    }
    let it = items[first].clone();
    if part.occs.len() > 1 && !it.is_whynot() {
        return Err(CutError::RepeatedNonWhynot(it.to_string()));
    }
    if it.body.contains_msg() {
        return Err(CutError::MsgFormula(it.body.to_string()));
    }
    Ok(it)
}

/// The strengthened two-premise cut: from `Γ1, {[R1]A}` and `Γ2, {[R2]A}`
/// with disjoint complements, derive `Γ1, Γ2, [R1 ∩ R2]A`.
pub fn cut2_spill(p1: &CutPart, p2: &CutPart) -> Result<Derivation, CutError> {
    let i1 = validate(p1)?;
    let i2 = validate(p2)?;
    if i1.body != i2.body {
        return Err(CutError::Roles(format!("cut formulas differ: {} and {}", i1.body, i2.body)));
    }
    if !i1.roles.complement().is_disjoint(&i2.roles.complement())? {
        return Err(CutError::Roles(format!("complements of {} and {} overlap", i1.roles, i2.roles)));
    }
    let a = i1.body.clone();
    let s1 = Side::new(Cow::Borrowed(&p1.derivation), p1.occs.clone(), i1.roles);
    let s2 = Side::new(Cow::Borrowed(&p2.derivation), p2.occs.clone(), i2.roles);
    Spill.go(&a, &s1, &s2, None)
}

/// Cut on complementary occurrences: from `Γ1, [R]A` and `Γ2, [R̄]A` derive `Γ1, Γ2`.
pub fn cut2(d1: &Derivation, occ1: usize, d2: &Derivation, occ2: usize) -> Result<Derivation, CutError> {
    let r1 = &d1.conclusion.items.get(occ1).ok_or(CutError::OccurrenceOutOfRange(occ1))?.roles;
    let r2 = &d2.conclusion.items.get(occ2).ok_or(CutError::OccurrenceOutOfRange(occ2))?.roles;
    if r1.complement() != *r2 {
        return Err(CutError::Roles(format!("{r1} and {r2} are not complementary")));
    }
    let spilled = cut2_spill(&CutPart::new(d1.clone(), vec![occ1]), &CutPart::new(d2.clone(), vec![occ2]))?;
    residue_cut1(spilled, &d1.conclusion.items[occ1].with_roles(r1.intersect(r2)?))
}

fn residue_cut1(d: Derivation, residue: &IFormula) -> Result<Derivation, CutError> {
    let i = locate(&d, residue)?;
    erase(&d, &[i])
}

/// Multi-cut over parts whose role-set complements partition the base.
pub fn cutn(parts: &[CutPart]) -> Result<Derivation, CutError> {
    let Some(first) = parts.first() else {
        return Err(CutError::NoOccurrences);
    };
    let items = parts.iter().map(validate).collect::<Result<Vec<_>, _>>()?;
    if items.iter().any(|i| i.body != items[0].body) {
        return Err(CutError::Roles("cut formulas differ between parts".into()));
    }
    let sets: Vec<RoleSet> = items.iter().map(|i| i.roles.clone()).collect();
    if !complements_partition_full(&sets)? {
        let shown: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        return Err(CutError::Roles(format!("complements of {} do not partition the base", shown.join(", "))));
    }
    if parts.len() == 1 {
        return erase(&first.derivation, &first.occs);
    }
    let merged = cut2_spill(&parts[0], &parts[1])?;
    let residue = items[0].with_roles(sets[0].intersect(&sets[1])?);
    let occ = locate(&merged, &residue)?;
    let mut rest = vec![CutPart::new(merged, vec![occ])];
    rest.extend(parts[2..].iter().cloned());
    cutn(&rest)
}

/// From `Γ, [R1 ⊎ R2]A` derive `Γ, [R1]A, [R2]A`.
pub fn split(d: &Derivation, occ: usize, r1: &RoleSet, r2: &RoleSet) -> Result<Derivation, CutError> {
    let it = d.conclusion.items.get(occ).ok_or(CutError::OccurrenceOutOfRange(occ))?.clone();
    if !r1.is_disjoint(r2)? {
        return Err(CutError::Roles(format!("{r1} and {r2} overlap")));
    }
    if it.roles != r1.union(r2)? {
        return Err(CutError::Roles(format!("{} is not {r1} + {r2}", it.roles)));
    }
    let outer = r1.complement().intersect(&r2.complement())?;
    let eta = eta_expand(&it.body, &[outer.clone(), r1.clone(), r2.clone()])?;
    cut2(d, occ, &eta, locate(&eta, &it.with_roles(outer))?)
}

struct Spill;

type Measure = (usize, usize);

impl Spill {
    /// Cut `a` between the two sides; the result concludes both contexts and
    /// `[R1 ∩ R2]a`.
    fn go(&self, a: &Formula, s1: &Side, s2: &Side, bound: Option<Measure>) -> Result<Derivation, CutError> {
        let m = (a.size(), s1.d.height() + s2.d.height());
        if let Some(b) = bound {
            if m >= b {
                return Err(CutError::MeasureNotDecreasing { from: b, to: m });
            }
        }
        let r12 = s1.roles.intersect(&s2.roles)?;
        let result = IFormula::new(r12, a.clone());

        // A ?-side that has run out of designated occurrences.
        for (z, o) in [(s1, s2), (s2, s1)] {
            if z.occs.is_empty() {
                if o.principal() && o.d.rule == RuleName::BangPos {
                    let mut d = z.d.clone().into_owned();
                    for it in o.context().into_iter().chain(std::iter::once(result.clone())) {
                        d = infer(RuleName::BangNegWeaken, it, Instance::None, vec![d])?;
                    }
                    return Ok(d);
                }
                return self.commute(a, o, z, m);
            }
        }
        if self.commutable(a, s1, s2) {
            return self.commute(a, s1, s2, m);
        }
        if self.commutable(a, s2, s1) {
            return self.commute(a, s2, s1, m);
        }
        if !(s1.principal() && s2.principal()) {
            return Err(internal(format!("no cut step applies to {} against {}", s1.d.conclusion, s2.d.conclusion)));
        }
        self.principal(a, s1, s2, &result, m)
    }

    fn commutable(&self, a: &Formula, s: &Side, o: &Side) -> bool {
        if s.principal() || s.d.premises.is_empty() {
            return false;
        }
        let whynot_ctx = || o.context().iter().all(IFormula::is_whynot) && s.item(a).is_whynot();
        match s.d.rule {
            RuleName::BangPos => whynot_ctx(),
            RuleName::TensorPos => {
                let Ok(l) = s.layout() else { return false };
                let into: Vec<usize> = s.occs.iter().map(|&o| l.ctx[o][0].0).collect();
                into.iter().all(|&k| k == into[0]) || whynot_ctx()
            }
            _ => true,
        }
    }

    /// Move the cut above the last rule of `s`, which does not act on a
    /// designated occurrence.
    fn commute<'a>(&self, a: &Formula, s: &'a Side, o: &Side, m: Measure) -> Result<Derivation, CutError> {
        let d = &s.d;
        let l = s.layout()?;
        let mut occs: Vec<Vec<usize>> = vec![vec![]; d.premises.len()];
        for &i in &s.occs {
            for &(k, j) in &l.ctx[i] {
                occs[k].push(j);
            }
        }
        let side = |k: usize, prem: Cow<'a, Derivation>| Side::new(prem, occs[k].clone(), s.roles.clone());
        let major = d.major_formula().clone();
        match d.rule {
            RuleName::TensorPos => {
                let holding: Vec<usize> = (0..2).filter(|&k| !occs[k].is_empty()).collect();
                if holding.len() == 2 {
                    let r0 = self.go(a, &side(0, Cow::Borrowed(&d.premises[0])), o, Some(m))?;
                    let r1 = self.go(a, &side(1, Cow::Borrowed(&d.premises[1])), o, Some(m))?;
                    let both = infer(RuleName::TensorPos, major, Instance::None, vec![r0, r1])?;
                    let mut dup = o.context();
                    dup.push(IFormula::new(s.roles.intersect(&o.roles)?, a.clone()));
                    return contract_all(both, &dup);
                }
                // A zero-occurrence ?-side rides along with premise 0.
                let k = holding.first().copied().unwrap_or(0);
                let done = self.go(a, &side(k, Cow::Borrowed(&d.premises[k])), o, Some(m))?;
                let prems = if k == 0 { vec![done, d.premises[1].clone()] } else { vec![d.premises[0].clone(), done] };
                infer(RuleName::TensorPos, major, Instance::None, prems)
            }
            RuleName::WithPos => {
                let r0 = self.go(a, &side(0, Cow::Borrowed(&d.premises[0])), o, Some(m))?;
                let r1 = self.go(a, &side(1, Cow::Borrowed(&d.premises[1])), o, Some(m))?;
                infer(RuleName::WithPos, major, Instance::None, vec![r0, r1])
            }
            RuleName::ForallPos => {
                let Instance::Eigen(y) = &d.instance else { return Err(internal("forall-pos without eigenvariable".into())) };
                let mut o_vars = Sequent::new(o.context()).free_term_vars();
                o_vars.extend(a.free_vars());
                let (prem, y) = if o_vars.contains(y) {
                    let taken = d.premises[0].conclusion.free_term_vars();
                    let y2 = fresh_avoiding(y, |n| o_vars.contains(n) || taken.contains(n));
                    (Cow::Owned(subst_derivation(&d.premises[0], y, &Term::var(y2.clone()))), y2)
                } else {
                    (Cow::Borrowed(&d.premises[0]), y.clone())
                };
                let r = self.go(a, &side(0, prem), o, Some(m))?;
                infer(RuleName::ForallPos, major, Instance::Eigen(y), vec![r])
            }
            _ => {
                let r = self.go(a, &side(0, Cow::Borrowed(&d.premises[0])), o, Some(m))?;
                infer(d.rule, major, d.instance.clone(), vec![r])
            }
        }
    }

    fn premise_side<'a>(&self, s: &'a Side, k: usize, extra: &[usize]) -> Side<'a> {
        let l = s.layout().expect("checked node");
        let mut occs: Vec<usize> = s
            .occs
            .iter()
            .filter(|&&i| i != s.d.major)
            .flat_map(|&i| l.ctx[i].iter().filter(|(p, _)| *p == k).map(|(_, j)| *j))
            .collect();
        occs.extend(extra.iter().map(|&e| l.actives[k][e]));
        Side::new(Cow::Borrowed(&s.d.premises[k]), occs, s.roles.clone())
    }

    /// Side on a premise whose only designated occurrence is active formula `e`.
    fn active_side<'a>(&self, s: &'a Side, k: usize, e: usize) -> Side<'a> {
        let l = s.layout().expect("checked node");
        Side::new(Cow::Borrowed(&s.d.premises[k]), vec![l.actives[k][e]], s.roles.clone())
    }

    fn principal(&self, a: &Formula, s1: &Side, s2: &Side, result: &IFormula, m: Measure) -> Result<Derivation, CutError> {
        use RuleName::*;
        // Order so that a positive rule, if any, comes first.
        let positive = |s: &Side| matches!(s.d.rule, TensorPos | WithPos | BangPos | ForallPos | OnePos);
        let (p, q) = if !positive(s1) && positive(s2) { (s2, s1) } else { (s1, s2) };
        match (a, p.d.rule, q.d.rule) {
            (Formula::Atom { .. }, Id, Id) => {
                let mut items = p.context();
                items.extend(q.context());
                items.push(result.clone());
                Ok(Derivation::id(Sequent::new(items)))
            }
            (Formula::One(_), OnePos, OnePos) => Ok(Derivation::one_pos(result.clone())),
            (Formula::One(_), OnePos, OneNeg) => infer(OneNeg, result.clone(), Instance::None, vec![q.d.premises[0].clone()]),
            (Formula::Tensor(_, a1, a2), TensorPos, TensorNeg) => {
                let e = self.go(a1, &self.active_side(p, 0, 0), &self.active_side(q, 0, 0), Some(m))?;
                let b_occ = locate(&e, &q.item(a2))?;
                let e_side = Side::new(Cow::Owned(e), vec![b_occ], q.roles.clone());
                let f = self.go(a2, &self.active_side(p, 1, 0), &e_side, Some(m))?;
                infer(TensorNeg, result.clone(), Instance::None, vec![f])
            }
            (Formula::Tensor(_, a1, a2), TensorPos, TensorPos) => {
                let l = self.go(a1, &self.active_side(p, 0, 0), &self.active_side(q, 0, 0), Some(m))?;
                let r = self.go(a2, &self.active_side(p, 1, 0), &self.active_side(q, 1, 0), Some(m))?;
                infer(TensorPos, result.clone(), Instance::None, vec![l, r])
            }
            (Formula::With(_, a1, a2), WithPos, WithNegL | WithNegR) => {
                let (k, ak) = if q.d.rule == WithNegL { (0, a1) } else { (1, a2) };
                let e = self.go(ak, &self.active_side(p, k, 0), &self.active_side(q, 0, 0), Some(m))?;
                infer(q.d.rule, result.clone(), Instance::None, vec![e])
            }
            (Formula::With(_, a1, a2), WithPos, WithPos) => {
                let l = self.go(a1, &self.active_side(p, 0, 0), &self.active_side(q, 0, 0), Some(m))?;
                let r = self.go(a2, &self.active_side(p, 1, 0), &self.active_side(q, 1, 0), Some(m))?;
                infer(WithPos, result.clone(), Instance::None, vec![l, r])
            }
            (Formula::Bang(_, b), BangPos, BangPos) => {
                let e = self.go(b, &self.active_side(p, 0, 0), &self.active_side(q, 0, 0), Some(m))?;
                infer(BangPos, result.clone(), Instance::None, vec![e])
            }
            (Formula::Bang(..), BangPos, BangNegWeaken) => self.go(a, p, &self.premise_side(q, 0, &[]), Some(m)),
            (Formula::Bang(..), BangPos, BangNegContract) => self.go(a, p, &self.premise_side(q, 0, &[0, 1]), Some(m)),
            (Formula::Bang(_, b), BangPos, BangNegDerelict) => {
                // Cut the remaining copies first, then the dereliction on B.
                let rest = self.premise_side(q, 0, &[]);
                let e = self.go(a, p, &rest, Some(m))?;
                let b_occ = locate(&e, &q.item(b))?;
                let e_side = Side::new(Cow::Owned(e), vec![b_occ], q.roles.clone());
                let f = self.go(b, &self.active_side(p, 0, 0), &e_side, Some(m))?;
                let f = infer(BangNegDerelict, result.clone(), Instance::None, vec![f])?;
                let mut dup = p.context();
                dup.push(result.clone());
                contract_all(f, &dup)
            }
            (Formula::Forall(_, x, body), ForallPos, ForallNeg) => {
                let (Instance::Eigen(y), Instance::Witness(t)) = (&p.d.instance, &q.d.instance) else {
                    return Err(internal("forall rule without instance".into()));
                };
                let p0 = subst_derivation(&p.d.premises[0], y, t);
                let inst = IFormula::new(p.roles.clone(), body.subst(x, t));
                let occ = locate(&p0, &inst)?;
                let pside = Side::new(Cow::Owned(p0), vec![occ], p.roles.clone());
                let e = self.go(&body.subst(x, t), &pside, &self.active_side(q, 0, 0), Some(m))?;
                infer(ForallNeg, result.clone(), Instance::Witness(t.clone()), vec![e])
            }
            (Formula::Forall(_, x, body), ForallPos, ForallPos) => {
                let (Instance::Eigen(y1), Instance::Eigen(y2)) = (&p.d.instance, &q.d.instance) else {
                    return Err(internal("forall rule without instance".into()));
                };
                let w = fresh_name(x);
                let wt = Term::var(w.clone());
                let body_w = body.subst(x, &wt);
                let mk = |s: &Side, y: &String| -> Result<Side, CutError> {
                    let d0 = subst_derivation(&s.d.premises[0], y, &wt);
                    let occ = locate(&d0, &IFormula::new(s.roles.clone(), body_w.clone()))?;
                    Ok(Side::new(Cow::Owned(d0), vec![occ], s.roles.clone()))
                };
                let e = self.go(&body_w, &mk(p, y1)?, &mk(q, y2)?, Some(m))?;
                infer(ForallPos, result.clone(), Instance::Eigen(w), vec![e])
            }
            _ => Err(internal(format!(
                "unexpected principal pair {} / {} on {a}",
                p.d.rule.name(Calculus::Conj),
                q.d.rule.name(Calculus::Conj)
            ))),
        }
    }
}
