use super::{internal, CutError};
use crate::derivation::{Derivation, Instance, RuleName};
use crate::fresh::fresh_avoiding;
use crate::roles::{is_partition_of_full, RoleSet};
use crate::syntax::{Formula, IFormula, Sequent, Term};

/// A derivation of `|- [R1]A, ..., [Rn]A` for a partition `R1, ..., Rn`.
pub fn eta_expand(a: &Formula, rs: &[RoleSet]) -> Result<Derivation, CutError> {
    if !is_partition_of_full(rs)? {
        let shown: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
        return Err(CutError::Roles(format!("{} is not a partition", shown.join(", "))));
    }
    if a.contains_msg() {
        return Err(CutError::MsgFormula(a.to_string()));
    }
    for r in rs {
        a.check_roles(r.base())?;
    }
    build(a, rs)
}

fn pos_index(r: u32, rs: &[RoleSet]) -> usize {
    rs.iter().position(|s| s.contains(r)).expect("a partition covers every role")
}

fn step(rule: RuleName, major: IFormula, inst: Instance, premises: Vec<Derivation>) -> Result<Derivation, CutError> {
    Derivation::infer(rule, major, inst, premises).map_err(internal)
}

/// Apply `rule` to `[Rj]A` for every `j != p`.
fn negs(mut d: Derivation, rule: RuleName, a: &Formula, rs: &[RoleSet], p: usize, inst: &Instance) -> Result<Derivation, CutError> {
    for (j, r) in rs.iter().enumerate() {
        if j != p {
            d = step(rule, IFormula::new(r.clone(), a.clone()), inst.clone(), vec![d])?;
        }
    }
    Ok(d)
}

fn build(a: &Formula, rs: &[RoleSet]) -> Result<Derivation, CutError> {
    let at = |j: usize| IFormula::new(rs[j].clone(), a.clone());
    match a {
        Formula::Atom { .. } => Ok(Derivation::id(Sequent::new(rs.iter().map(|r| IFormula::new(r.clone(), a.clone())).collect()))),
        Formula::One(r) => {
            let p = pos_index(*r, rs);
            negs(Derivation::one_pos(at(p)), RuleName::OneNeg, a, rs, p, &Instance::None)
        }
        Formula::Tensor(r, a1, a2) => {
            let p = pos_index(*r, rs);
            let d = step(RuleName::TensorPos, at(p), Instance::None, vec![build(a1, rs)?, build(a2, rs)?])?;
            negs(d, RuleName::TensorNeg, a, rs, p, &Instance::None)
        }
        Formula::With(r, a1, a2) => {
            let p = pos_index(*r, rs);
            let left = negs(build(a1, rs)?, RuleName::WithNegL, a, rs, p, &Instance::None)?;
            let right = negs(build(a2, rs)?, RuleName::WithNegR, a, rs, p, &Instance::None)?;
            step(RuleName::WithPos, at(p), Instance::None, vec![left, right])
        }
        Formula::Bang(r, b) => {
            let p = pos_index(*r, rs);
            let d = negs(build(b, rs)?, RuleName::BangNegDerelict, a, rs, p, &Instance::None)?;
            step(RuleName::BangPos, at(p), Instance::None, vec![d])
        }
        Formula::Forall(r, x, b) => {
            let p = pos_index(*r, rs);
            let fv = a.free_vars();
            let w = fresh_avoiding(x, |n| fv.contains(n));
            let wt = Term::var(w.clone());
            let d = negs(build(&b.subst(x, &wt), rs)?, RuleName::ForallNeg, a, rs, p, &Instance::Witness(wt))?;
            step(RuleName::ForallPos, at(p), Instance::Eigen(w), vec![d])
        }
        Formula::Msg(..) => Err(CutError::MsgFormula(a.to_string())),
    }
}
