use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::process::{Branch, MsgKind, Process};
use crate::derivation::RuleName;
use crate::fresh::fresh_avoiding;
use crate::roles::{complements_partition_full, RoleSet};
use crate::syntax::{Formula, IFormula};

/// Names mapped to i-types.
pub type TypeEnv = BTreeMap<String, IFormula>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TypingRule {
    NCut,
    TensorNeg,
    TensorPos,
    OneNeg,
    OnePos,
    WithNegL,
    WithNegR,
    WithPos,
    BangPos,
    BangNegWeaken,
    BangNegDerelict,
    BangNegContract,
    MsgPosPos,
    MsgNegNeg,
    MsgPosNeg,
    MsgNegPos,
}

impl TypingRule {
    pub const ALL: [TypingRule; 16] = [
        TypingRule::NCut,
        TypingRule::TensorNeg,
        TypingRule::TensorPos,
        TypingRule::OneNeg,
        TypingRule::OnePos,
        TypingRule::WithNegL,
        TypingRule::WithNegR,
        TypingRule::WithPos,
        TypingRule::BangPos,
        TypingRule::BangNegWeaken,
        TypingRule::BangNegDerelict,
        TypingRule::BangNegContract,
        TypingRule::MsgPosPos,
        TypingRule::MsgNegNeg,
        TypingRule::MsgPosNeg,
        TypingRule::MsgNegPos,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TypingRule::NCut => "n-cut",
            TypingRule::TensorNeg => "tensor-neg",
            TypingRule::TensorPos => "tensor-pos",
            TypingRule::OneNeg => "one-neg",
            TypingRule::OnePos => "one-pos",
            TypingRule::WithNegL => "with-neg-l",
            TypingRule::WithNegR => "with-neg-r",
            TypingRule::WithPos => "with-pos",
            TypingRule::BangPos => "bang-pos",
            TypingRule::BangNegWeaken => "bang-neg-weaken",
            TypingRule::BangNegDerelict => "bang-neg-derelict",
            TypingRule::BangNegContract => "bang-neg-contract",
            TypingRule::MsgPosPos => "msg-pos-pos",
            TypingRule::MsgNegNeg => "msg-neg-neg",
            TypingRule::MsgPosNeg => "msg-pos-neg",
            TypingRule::MsgNegPos => "msg-neg-pos",
        }
    }

    /// The logic rule this typing rule erases to, if any.
    pub fn kernel(self) -> Option<RuleName> {
        Some(match self {
            TypingRule::TensorNeg => RuleName::TensorNeg,
            TypingRule::TensorPos => RuleName::TensorPos,
            TypingRule::OneNeg => RuleName::OneNeg,
            TypingRule::OnePos => RuleName::OnePos,
            TypingRule::WithNegL => RuleName::WithNegL,
            TypingRule::WithNegR => RuleName::WithNegR,
            TypingRule::WithPos => RuleName::WithPos,
            TypingRule::BangPos => RuleName::BangPos,
            TypingRule::BangNegWeaken => RuleName::BangNegWeaken,
            TypingRule::BangNegDerelict => RuleName::BangNegDerelict,
            TypingRule::BangNegContract => RuleName::BangNegContract,
            _ => return None,
        })
    }
}

impl fmt::Display for TypingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A typing derivation. `subject` is the major name (the cut name for
/// `n-cut`); `cut_roles` lists the parts' role sets of a cut.
#[derive(Debug, Clone)]
pub struct TypingDerivation {
    pub rule: TypingRule,
    pub process: Process,
    pub env: TypeEnv,
    pub subject: String,
    pub cut_roles: Vec<RoleSet>,
    pub cut_formula: Option<Formula>,
    pub premises: Vec<TypingDerivation>,
}

impl TypingDerivation {
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(TypingDerivation::height).max().unwrap_or(0)
    }

    /// Every rule used anywhere in the derivation.
    pub fn rules(&self) -> BTreeSet<&'static str> {
        let mut out = BTreeSet::new();
        self.rules_into(&mut out);
        out
    }

    fn rules_into(&self, out: &mut BTreeSet<&'static str>) {
        out.insert(self.rule.name());
        self.premises.iter().for_each(|p| p.rules_into(out));
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeErrorKind {
    #[error("name {0} has no type in the environment")]
    Unbound(String),
    #[error("linear name {0} is never used")]
    LinearUnused(String),
    #[error("linear name {0} is used in more than one place")]
    LinearShared(String),
    #[error("wrong polarity for {0}")]
    Polarity(String),
    #[error("header annotation on {name} says {header} but the type is {ty}")]
    Annotation { name: String, header: String, ty: String },
    #[error("header on {name} does not fit its type {ty}")]
    Shape { name: String, ty: String },
    #[error("cut role sets {0} do not have complements partitioning the base")]
    Partition(String),
    #[error("cannot determine the role sets of cut {0}")]
    CutRoles(String),
    #[error("cut on {0} has no type annotation")]
    MissingCutType(String),
    #[error("{0} is not a session type")]
    NotSessionType(String),
    #[error("server on {server} needs ?-typed context, but {name} is not")]
    NonWhynotContext { server: String, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule}: {kind}")]
pub struct TypeError {
    pub rule: &'static str,
    pub kind: TypeErrorKind,
}

fn err(rule: TypingRule, kind: TypeErrorKind) -> TypeError {
    TypeError { rule: rule.name(), kind }
}

/// Typecheck `p` against `env`, building a derivation syntax-directedly.
/// Unused `?`-typed names are weakened; `?`-typed names used in several
/// places are contracted.
pub fn typecheck(p: &Process, env: &TypeEnv) -> Result<TypingDerivation, TypeError> {
    for it in env.values() {
        if !it.body.is_msg_session_type() {
            return Err(TypeError { rule: "env", kind: TypeErrorKind::NotSessionType(it.body.to_string()) });
        }
    }
    tc(p, env)
}

fn node(rule: TypingRule, p: &Process, env: &TypeEnv, subject: &str, premises: Vec<TypingDerivation>) -> TypingDerivation {
    TypingDerivation {
        rule,
        process: p.clone(),
        env: env.clone(),
        subject: subject.to_string(),
        cut_roles: vec![],
        cut_formula: None,
        premises,
    }
}

fn fresh_for(n: &str, env: &TypeEnv, p: &Process) -> String {
    let fv = p.free_names();
    fresh_avoiding(n, |c| env.contains_key(c) || fv.contains(c))
}

fn tc(p: &Process, env: &TypeEnv) -> Result<TypingDerivation, TypeError> {
    let fnames = p.free_names();
    if let Some(n) = fnames.iter().find(|n| !env.contains_key(*n)) {
        return Err(err(TypingRule::NCut, TypeErrorKind::Unbound(n.clone())).retag(p));
    }
    let unused: Vec<&String> = env.keys().filter(|n| !fnames.contains(*n)).collect();
    if unused.is_empty() {
        return tc_used(p, env);
    }
    for n in &unused {
        if !env[*n].is_whynot() {
            return Err(err(TypingRule::BangNegWeaken, TypeErrorKind::LinearUnused((*n).clone())));
        }
    }
    let mut inner = env.clone();
    for n in &unused {
        inner.remove(*n);
    }
    let mut td = tc_used(p, &inner)?;
    for n in unused.iter().rev() {
        inner.insert((*n).clone(), env[*n].clone());
        td = node(TypingRule::BangNegWeaken, p, &inner, n, vec![td]);
    }
    Ok(td)
}

impl TypeError {
    fn retag(self, p: &Process) -> TypeError {
        let rule = match p {
            Process::Cut { .. } => "n-cut",
            _ => "header",
        };
        TypeError { rule, kind: self.kind }
    }
}

/// `x`'s type, and a check that the header annotation agrees with it.
fn lookup(rule: TypingRule, env: &TypeEnv, x: &str, roles: &RoleSet, r: u32) -> Result<IFormula, TypeError> {
    let ty = env.get(x).ok_or_else(|| err(rule, TypeErrorKind::Unbound(x.to_string())))?.clone();
    let top = match &ty.body {
        Formula::Tensor(r, ..) | Formula::With(r, ..) | Formula::Bang(r, _) | Formula::One(r) | Formula::Msg(r, ..) => Some(*r),
        _ => None,
    };
    if &ty.roles != roles || top != Some(r) {
        return Err(err(rule, TypeErrorKind::Annotation { name: x.to_string(), header: format!("{roles}@{r}"), ty: ty.to_string() }));
    }
    Ok(ty)
}

fn shape(rule: TypingRule, x: &str, ty: &IFormula) -> TypeError {
    err(rule, TypeErrorKind::Shape { name: x.to_string(), ty: ty.to_string() })
}

fn polarity(rule: TypingRule, x: &str, want_in: bool, roles: &RoleSet, r: u32) -> Result<(), TypeError> {
    if roles.contains(r) != want_in {
        return Err(err(rule, TypeErrorKind::Polarity(x.to_string())));
    }
    Ok(())
}

fn minus(env: &TypeEnv, x: &str) -> TypeEnv {
    let mut e = env.clone();
    e.remove(x);
    e
}

fn plus(env: &TypeEnv, x: &str, it: IFormula) -> TypeEnv {
    let mut e = env.clone();
    e.insert(x.to_string(), it);
    e
}

/// Restrict `env` to the names free in `p`.
fn restrict(env: &TypeEnv, p: &Process) -> TypeEnv {
    let fv = p.free_names();
    env.iter().filter(|(n, _)| fv.contains(*n)).map(|(n, t)| (n.clone(), t.clone())).collect()
}

/// Rename a bound name that clashes with the environment.
fn freshen(y: &str, body: &Process, env: &TypeEnv) -> (String, Process) {
    if env.contains_key(y) {
        let y2 = fresh_for(y, env, body);
        (y2.clone(), body.rename(y, &y2))
    } else {
        (y.to_string(), body.clone())
    }
}

/// Contract a `?`-name shared by several subterms: occurrences in the first
/// subterm using it are renamed to a fresh copy `n'`.
fn contract_shared(
    p: &Process,
    env: &TypeEnv,
    n: &str,
    rename_first: impl Fn(&str) -> Process,
) -> Result<TypingDerivation, TypeError> {
    if !env[n].is_whynot() {
        return Err(err(TypingRule::BangNegContract, TypeErrorKind::LinearShared(n.to_string())));
    }
    let copy = fresh_avoiding(n, |c| env.contains_key(c) || p.has_free(c));
    let renamed = rename_first(&copy);
    let td = tc(&renamed, &plus(env, &copy, env[n].clone()))?;
    Ok(node(TypingRule::BangNegContract, p, env, n, vec![td]))
}

fn shared_between(a: &BTreeSet<String>, b: &BTreeSet<String>, skip: &[&str]) -> Option<String> {
    a.intersection(b).find(|n| !skip.contains(&n.as_str())).cloned()
}

fn tc_used(p: &Process, env: &TypeEnv) -> Result<TypingDerivation, TypeError> {
    match p {
        Process::InEmpty { x, roles, r } => {
            let rule = TypingRule::OnePos;
            let ty = lookup(rule, env, x, roles, *r)?;
            if !matches!(ty.body, Formula::One(_)) {
                return Err(shape(rule, x, &ty));
            }
            polarity(rule, x, true, roles, *r)?;
            Ok(node(rule, p, env, x, vec![]))
        }
        Process::OutEmpty { x, roles, r, body } => {
            let rule = TypingRule::OneNeg;
            let ty = lookup(rule, env, x, roles, *r)?;
            if !matches!(ty.body, Formula::One(_)) {
                return Err(shape(rule, x, &ty));
            }
            polarity(rule, x, false, roles, *r)?;
            Ok(node(rule, p, env, x, vec![tc(body, &minus(env, x))?]))
        }
        Process::OutName { x, roles, y, r, body } => {
            let rule = TypingRule::TensorNeg;
            let ty = lookup(rule, env, x, roles, *r)?;
            let Formula::Tensor(_, a1, a2) = &ty.body else { return Err(shape(rule, x, &ty)) };
            polarity(rule, x, false, roles, *r)?;
            let (y, body) = freshen(y, body, &minus(env, x));
            let e = plus(&plus(&minus(env, x), &y, ty.with_body((**a1).clone())), x, ty.with_body((**a2).clone()));
            Ok(node(rule, p, env, x, vec![tc(&body, &e)?]))
        }
        Process::InName { x, roles, y, r, left, right } => {
            let rule = TypingRule::TensorPos;
            let ty = lookup(rule, env, x, roles, *r)?;
            let Formula::Tensor(_, a1, a2) = &ty.body else { return Err(shape(rule, x, &ty)) };
            polarity(rule, x, true, roles, *r)?;
            let rest = minus(env, x);
            let (y, left) = freshen(y, left, &rest);
            let mut fl = left.free_names();
            fl.remove(&y);
            if fl.contains(x) {
                return Err(err(rule, TypeErrorKind::LinearShared(x.clone())));
            }
            if let Some(n) = shared_between(&fl, &right.free_names(), &[x]) {
                return contract_shared(p, env, &n, |copy| Process::InName {
                    x: x.clone(),
                    roles: roles.clone(),
                    y: y.clone(),
                    r: *r,
                    left: Box::new(left.rename(&n, copy)),
                    right: right.clone(),
                });
            }
            let lenv = plus(&restrict(&rest, &left), &y, ty.with_body((**a1).clone()));
            let renv = plus(&restrict(&rest, right), x, ty.with_body((**a2).clone()));
            Ok(node(rule, p, env, x, vec![tc(&left, &lenv)?, tc(right, &renv)?]))
        }
        Process::Select { x, roles, r, branch, body } => {
            let rule = if *branch == Branch::Inl { TypingRule::WithNegL } else { TypingRule::WithNegR };
            let ty = lookup(rule, env, x, roles, *r)?;
            let Formula::With(_, a1, a2) = &ty.body else { return Err(shape(rule, x, &ty)) };
            polarity(rule, x, false, roles, *r)?;
            let ak = if *branch == Branch::Inl { a1 } else { a2 };
            let e = plus(&minus(env, x), x, ty.with_body((**ak).clone()));
            Ok(node(rule, p, env, x, vec![tc(body, &e)?]))
        }
        Process::Case { x, roles, r, left, right } => {
            let rule = TypingRule::WithPos;
            let ty = lookup(rule, env, x, roles, *r)?;
            let Formula::With(_, a1, a2) = &ty.body else { return Err(shape(rule, x, &ty)) };
            polarity(rule, x, true, roles, *r)?;
            let l = tc(left, &plus(&minus(env, x), x, ty.with_body((**a1).clone())))?;
            let rr = tc(right, &plus(&minus(env, x), x, ty.with_body((**a2).clone())))?;
            Ok(node(rule, p, env, x, vec![l, rr]))
        }
        Process::Server { x, roles, y, r, body } => {
            let rule = TypingRule::BangPos;
            let ty = lookup(rule, env, x, roles, *r)?;
            let Formula::Bang(_, b) = &ty.body else { return Err(shape(rule, x, &ty)) };
            polarity(rule, x, true, roles, *r)?;
            let rest = minus(env, x);
            if let Some((n, _)) = rest.iter().find(|(_, t)| !t.is_whynot()) {
                return Err(err(rule, TypeErrorKind::NonWhynotContext { server: x.clone(), name: n.clone() }));
            }
            let (y, body) = freshen(y, body, &rest);
            if body.has_free(x) {
                return Err(err(rule, TypeErrorKind::LinearShared(x.clone())));
            }
            let e = plus(&rest, &y, ty.with_body((**b).clone()));
            Ok(node(rule, p, env, x, vec![tc(&body, &e)?]))
        }
        Process::Request { x, roles, y, r, body } => {
            let rule = TypingRule::BangNegDerelict;
            let ty = lookup(rule, env, x, roles, *r)?;
            let Formula::Bang(_, b) = &ty.body else { return Err(shape(rule, x, &ty)) };
            polarity(rule, x, false, roles, *r)?;
            let rest = minus(env, x);
            let (y, body) = freshen(y, body, &rest);
            if body.has_free(x) {
                let (y2, body2) = (y.clone(), body.clone());
                return contract_shared(p, env, x, |copy| Process::Request {
                    x: copy.to_string(),
                    roles: roles.clone(),
                    y: y2.clone(),
                    r: *r,
                    body: Box::new(body2.clone()),
                });
            }
            let e = plus(&rest, &y, ty.with_body((**b).clone()));
            Ok(node(rule, p, env, x, vec![tc(&body, &e)?]))
        }
        Process::Msg { x, roles, kind, r, s, body } => {
            let (rule, want_r, want_s) = match kind {
                MsgKind::SkipIn => (TypingRule::MsgPosPos, true, true),
                MsgKind::SkipOut => (TypingRule::MsgNegNeg, false, false),
                MsgKind::Recv => (TypingRule::MsgPosNeg, true, false),
                MsgKind::Send => (TypingRule::MsgNegPos, false, true),
            };
            let ty = lookup(rule, env, x, roles, *r)?;
            let Formula::Msg(_, s2, a) = &ty.body else { return Err(shape(rule, x, &ty)) };
            if s2 != s {
                return Err(err(rule, TypeErrorKind::Annotation { name: x.clone(), header: format!("{{{r},{s}}}"), ty: ty.to_string() }));
            }
            polarity(rule, x, want_r, roles, *r)?;
            polarity(rule, x, want_s, roles, *s)?;
            let e = plus(&minus(env, x), x, ty.with_body((**a).clone()));
            Ok(node(rule, p, env, x, vec![tc(body, &e)?]))
        }
        Process::Cut { name, ann, parts } => tc_cut(p, env, name, ann, parts),
    }
}

/// Role set of the first header on `x` inside `p`, skipping rebinding scopes.
pub fn header_roles_of(p: &Process, x: &str) -> Option<RoleSet> {
    if p.subject() == Some(x) {
        return p.header_roles().cloned();
    }
    let shadowed = |y: &str| y == x;
    match p {
        Process::Cut { name, parts, .. } => {
            if shadowed(name) {
                return None;
            }
            parts.iter().find_map(|q| header_roles_of(q, x))
        }
        Process::OutName { y, body, .. } | Process::Server { y, body, .. } | Process::Request { y, body, .. } => {
            if shadowed(y) {
                None
            } else {
                header_roles_of(body, x)
            }
        }
        Process::InName { y, left, right, .. } => {
            let l = if shadowed(y) { None } else { header_roles_of(left, x) };
            l.or_else(|| header_roles_of(right, x))
        }
        _ => p.children().into_iter().find_map(|q| header_roles_of(q, x)),
    }
}

fn tc_cut(p: &Process, env: &TypeEnv, name: &str, ann: &Option<Formula>, parts: &[Process]) -> Result<TypingDerivation, TypeError> {
    let rule = TypingRule::NCut;
    let a = ann.clone().ok_or_else(|| err(rule, TypeErrorKind::MissingCutType(name.to_string())))?;
    if !a.is_msg_session_type() {
        return Err(err(rule, TypeErrorKind::NotSessionType(a.to_string())));
    }
    if env.contains_key(name) {
        let mut fv = BTreeSet::new();
        parts.iter().for_each(|q| fv.extend(q.free_names()));
        let n2 = fresh_avoiding(name, |c| env.contains_key(c) || fv.contains(c));
        let parts: Vec<Process> = parts.iter().map(|q| q.rename(name, &n2)).collect();
        let mut td = tc_cut(&Process::Cut { name: n2.clone(), ann: ann.clone(), parts: parts.clone() }, env, &n2, ann, &parts)?;
        td.process = p.clone();
        return Ok(td);
    }
    // Contract ?-names used by several parts.
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            if let Some(n) = shared_between(&parts[i].free_names(), &parts[j].free_names(), &[name]) {
                return contract_shared(p, env, &n, |copy| {
                    let mut ps = parts.to_vec();
                    ps[i] = ps[i].rename(&n, copy);
                    Process::Cut { name: name.to_string(), ann: ann.clone(), parts: ps }
                });
            }
        }
    }
    let found: Vec<Option<RoleSet>> = parts.iter().map(|q| header_roles_of(q, name)).collect();
    let missing: Vec<usize> = (0..parts.len()).filter(|&i| found[i].is_none()).collect();
    let roles: Vec<RoleSet> = match missing.as_slice() {
        [] => found.into_iter().flatten().collect(),
        [m] => {
            let known: Vec<RoleSet> = found.iter().flatten().cloned().collect();
            let Some(first) = known.first() else {
                return Err(err(rule, TypeErrorKind::CutRoles(name.to_string())));
            };
            let mut u = RoleSet::empty(first.base());
            for k in &known {
                u = u.union(&k.complement()).map_err(|e| err(rule, TypeErrorKind::Partition(e.to_string())))?;
            }
            let mut rs: Vec<RoleSet> = found.iter().map(|f| f.clone().unwrap_or_else(|| u.clone())).collect();
            rs[*m] = u;
            rs
        }
        _ => return Err(err(rule, TypeErrorKind::CutRoles(name.to_string()))),
    };
    let ok = complements_partition_full(&roles).unwrap_or(false);
    if !ok {
        let shown: Vec<String> = roles.iter().map(|r| r.to_string()).collect();
        return Err(err(rule, TypeErrorKind::Partition(shown.join(", "))));
    }
    let mut premises = Vec::new();
    for (q, rset) in parts.iter().zip(&roles) {
        let e = plus(&restrict(env, q), name, IFormula::new(rset.clone(), a.clone()));
        premises.push(tc(q, &e)?);
    }
    let mut td = node(rule, p, env, name, premises);
    td.cut_roles = roles;
    td.cut_formula = Some(a);
    Ok(td)
}
