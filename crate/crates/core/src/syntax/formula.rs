use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::fresh::fresh_avoiding;
use crate::roles::{Role, RoleBase, RoleError};
use crate::syntax::term::Term;

/// An LMRL formula, extended with the session-type unit `1_r` and the
/// point-to-point constructor `msg_{r,s}`.
///
/// Equality is α-equivalence: `all[0] x. p(x)` equals `all[0] y. p(y)`.
#[derive(Debug, Clone)]
pub enum Formula {
    Atom { pred: String, args: Vec<Term> },
    Tensor(Role, Arc<Formula>, Arc<Formula>),
    With(Role, Arc<Formula>, Arc<Formula>),
    Bang(Role, Arc<Formula>),
    Forall(Role, String, Arc<Formula>),
    One(Role),
    Msg(Role, Role, Arc<Formula>),
}

impl Formula {
    pub fn atom(pred: impl Into<String>) -> Self {
        Formula::Atom { pred: pred.into(), args: Vec::new() }
    }

    pub fn pred(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom { pred: pred.into(), args }
    }

    pub fn tensor(r: Role, a: Formula, b: Formula) -> Self {
        Formula::Tensor(r, Arc::new(a), Arc::new(b))
    }

    pub fn with(r: Role, a: Formula, b: Formula) -> Self {
        Formula::With(r, Arc::new(a), Arc::new(b))
    }

    pub fn bang(r: Role, a: Formula) -> Self {
        Formula::Bang(r, Arc::new(a))
    }

    pub fn forall(r: Role, x: impl Into<String>, a: Formula) -> Self {
        Formula::Forall(r, x.into(), Arc::new(a))
    }

    pub fn msg(r: Role, s: Role, a: Formula) -> Self {
        Formula::Msg(r, s, Arc::new(a))
    }

    /// Number of connectives; atoms and units count zero.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom { .. } | Formula::One(_) => 0,
            Formula::Tensor(_, a, b) | Formula::With(_, a, b) => 1 + a.size() + b.size(),
            Formula::Bang(_, a) | Formula::Forall(_, _, a) | Formula::Msg(_, _, a) => 1 + a.size(),
        }
    }

    /// Built from `one`, `*`, `&` and `!` only.
    pub fn is_session_type(&self) -> bool {
        match self {
            Formula::One(_) => true,
            Formula::Tensor(_, a, b) | Formula::With(_, a, b) => a.is_session_type() && b.is_session_type(),
            Formula::Bang(_, a) => a.is_session_type(),
            Formula::Atom { .. } | Formula::Forall(..) | Formula::Msg(..) => false,
        }
    }

    /// Session type possibly containing `msg` constructors.
    pub fn is_msg_session_type(&self) -> bool {
        match self {
            Formula::One(_) => true,
            Formula::Tensor(_, a, b) | Formula::With(_, a, b) => {
                a.is_msg_session_type() && b.is_msg_session_type()
            }
            Formula::Bang(_, a) => a.is_msg_session_type(),
            Formula::Msg(r, s, a) => r != s && a.is_msg_session_type(),
            Formula::Atom { .. } | Formula::Forall(..) => false,
        }
    }

    pub fn contains_msg(&self) -> bool {
        match self {
            Formula::Msg(..) => true,
            Formula::Atom { .. } | Formula::One(_) => false,
            Formula::Tensor(_, a, b) | Formula::With(_, a, b) => a.contains_msg() || b.contains_msg(),
            Formula::Bang(_, a) | Formula::Forall(_, _, a) => a.contains_msg(),
        }
    }

    /// Every role annotation must lie in the base, and `msg` needs `r != s`.
    pub fn check_roles(&self, base: RoleBase) -> Result<(), RoleError> {
        match self {
            Formula::Atom { .. } => Ok(()),
            Formula::One(r) => base.check_role(*r),
            Formula::Tensor(r, a, b) | Formula::With(r, a, b) => {
                base.check_role(*r)?;
                a.check_roles(base)?;
                b.check_roles(base)
            }
            Formula::Bang(r, a) | Formula::Forall(r, _, a) => {
                base.check_role(*r)?;
                a.check_roles(base)
            }
            Formula::Msg(r, s, a) => {
                base.check_role(*r)?;
                base.check_role(*s)?;
                a.check_roles(base)
            }
        }
    }

    pub fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom { args, .. } => args.iter().for_each(|t| t.free_vars_into(out)),
            Formula::One(_) => {}
            Formula::Tensor(_, a, b) | Formula::With(_, a, b) => {
                a.free_vars_into(out);
                b.free_vars_into(out);
            }
            Formula::Bang(_, a) | Formula::Msg(_, _, a) => a.free_vars_into(out),
            Formula::Forall(_, x, a) => {
                let mut inner = BTreeSet::new();
                a.free_vars_into(&mut inner);
                inner.remove(x);
                out.extend(inner);
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut out);
        out
    }

    pub fn has_free(&self, x: &str) -> bool {
        match self {
            Formula::Atom { args, .. } => args.iter().any(|t| t.mentions(x)),
            Formula::One(_) => false,
            Formula::Tensor(_, a, b) | Formula::With(_, a, b) => a.has_free(x) || b.has_free(x),
            Formula::Bang(_, a) | Formula::Msg(_, _, a) => a.has_free(x),
            Formula::Forall(_, y, a) => y != x && a.has_free(x),
        }
    }

    /// Capture-avoiding substitution `self{t/x}`.
    pub fn subst(&self, x: &str, t: &Term) -> Formula {
        match self {
            Formula::Atom { pred, args } => Formula::Atom {
                pred: pred.clone(),
                args: args.iter().map(|a| a.subst(x, t)).collect(),
            },
            Formula::One(_) => self.clone(),
            Formula::Tensor(r, a, b) => Formula::tensor(*r, a.subst(x, t), b.subst(x, t)),
            Formula::With(r, a, b) => Formula::with(*r, a.subst(x, t), b.subst(x, t)),
            Formula::Bang(r, a) => Formula::bang(*r, a.subst(x, t)),
            Formula::Msg(r, s, a) => Formula::msg(*r, *s, a.subst(x, t)),
            Formula::Forall(r, y, a) => {
                if y == x || !a.has_free(x) {
                    return self.clone();
                }
                if t.mentions(y) {
                    let body_vars = a.free_vars();
                    let y2 = fresh_avoiding(y, |n| t.mentions(n) || body_vars.contains(n) || n == x);
                    let renamed = a.subst(y, &Term::Var(y2.clone()));
                    Formula::forall(*r, y2, renamed.subst(x, t))
                } else {
                    Formula::forall(*r, y.clone(), a.subst(x, t))
                }
            }
        }
    }

    /// Terms occurring as atom arguments (and their subterms).
    pub fn subterms_into(&self, out: &mut Vec<Term>) {
        match self {
            Formula::Atom { args, .. } => args.iter().for_each(|t| t.subterms_into(out)),
            Formula::One(_) => {}
            Formula::Tensor(_, a, b) | Formula::With(_, a, b) => {
                a.subterms_into(out);
                b.subterms_into(out);
            }
            Formula::Bang(_, a) | Formula::Msg(_, _, a) => a.subterms_into(out),
            Formula::Forall(_, x, a) => {
                let mut inner = Vec::new();
                a.subterms_into(&mut inner);
                for t in inner {
                    if !t.mentions(x) && !out.contains(&t) {
                        out.push(t);
                    }
                }
            }
        }
    }

    /// Predicate and function symbols with arities, for signature checks.
    pub fn signature_into(&self, preds: &mut Vec<(String, usize)>, funs: &mut Vec<(String, usize)>) {
        match self {
            Formula::Atom { pred, args } => {
                preds.push((pred.clone(), args.len()));
                args.iter().for_each(|t| t.signature_into(funs));
            }
            Formula::One(_) => {}
            Formula::Tensor(_, a, b) | Formula::With(_, a, b) => {
                a.signature_into(preds, funs);
                b.signature_into(preds, funs);
            }
            Formula::Bang(_, a) | Formula::Forall(_, _, a) | Formula::Msg(_, _, a) => {
                a.signature_into(preds, funs)
            }
        }
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha(self, other, &mut Vec::new())
    }

    /// A string that is identical for α-equivalent formulas.
    pub fn key(&self) -> String {
        let mut s = String::new();
        write_key(self, &mut Vec::new(), &mut s);
        s
    }
}

fn bound_index(stack: &[&str], v: &str) -> Option<usize> {
    stack.iter().rev().position(|b| *b == v)
}

fn term_alpha(a: &Term, b: &Term, stack: &[(&str, &str)]) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let ix = stack.iter().rev().position(|(l, _)| *l == x);
            let iy = stack.iter().rev().position(|(_, r)| *r == y);
            match (ix, iy) {
                (None, None) => x == y,
                (i, j) => i == j,
            }
        }
        (Term::Fun(f, xs), Term::Fun(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_alpha(x, y, stack))
        }
        _ => false,
    }
}

fn alpha<'a>(a: &'a Formula, b: &'a Formula, stack: &mut Vec<(&'a str, &'a str)>) -> bool {
    // Shared subtrees are equal unless a binder above renames them.
    if stack.is_empty() && std::ptr::eq(a, b) {
        return true;
    }
    match (a, b) {
        (Formula::Atom { pred: p, args: xs }, Formula::Atom { pred: q, args: ys }) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_alpha(x, y, stack))
        }
        (Formula::One(r), Formula::One(s)) => r == s,
        (Formula::Tensor(r, a1, a2), Formula::Tensor(s, b1, b2))
        | (Formula::With(r, a1, a2), Formula::With(s, b1, b2)) => {
            r == s && alpha(a1, b1, stack) && alpha(a2, b2, stack)
        }
        (Formula::Bang(r, a1), Formula::Bang(s, b1)) => r == s && alpha(a1, b1, stack),
        (Formula::Msg(r, r2, a1), Formula::Msg(s, s2, b1)) => r == s && r2 == s2 && alpha(a1, b1, stack),
        (Formula::Forall(r, x, a1), Formula::Forall(s, y, b1)) => {
            if r != s {
                return false;
            }
            stack.push((x, y));
            let ok = alpha(a1, b1, stack);
            stack.pop();
            ok
        }
        _ => false,
    }
}

fn write_term_key(t: &Term, stack: &[&str], out: &mut String) {
    match t {
        Term::Var(v) => match bound_index(stack, v) {
            Some(i) => out.push_str(&format!("#{i}")),
            None => out.push_str(v),
        },
        Term::Fun(f, args) => {
            out.push_str(f);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_term_key(a, stack, out);
            }
            out.push(')');
        }
    }
}

fn write_key<'a>(f: &'a Formula, stack: &mut Vec<&'a str>, out: &mut String) {
    match f {
        Formula::Atom { pred, args } => {
            out.push_str(pred);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_term_key(a, stack, out);
            }
            out.push(')');
        }
        Formula::One(r) => out.push_str(&format!("1_{r}")),
        Formula::Tensor(r, a, b) | Formula::With(r, a, b) => {
            let op = if matches!(f, Formula::Tensor(..)) { '*' } else { '&' };
            out.push('(');
            write_key(a, stack, out);
            out.push_str(&format!("{op}{r}"));
            write_key(b, stack, out);
            out.push(')');
        }
        Formula::Bang(r, a) => {
            out.push_str(&format!("!{r}"));
            write_key(a, stack, out);
        }
        Formula::Msg(r, s, a) => {
            out.push_str(&format!("m{r},{s}"));
            write_key(a, stack, out);
        }
        Formula::Forall(r, x, a) => {
            out.push_str(&format!("A{r}."));
            stack.push(x);
            write_key(a, stack, out);
            stack.pop();
        }
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.alpha_eq(other)
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(a: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match a {
                Formula::Tensor(..) | Formula::With(..) | Formula::Forall(..) => write!(f, "({a})"),
                _ => write!(f, "{a}"),
            }
        }
        match self {
            Formula::Atom { pred, args } => {
                write!(f, "{pred}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::One(r) => write!(f, "one[{r}]"),
            Formula::Tensor(r, a, b) => {
                operand(a, f)?;
                write!(f, " *[{r}] ")?;
                operand(b, f)
            }
            Formula::With(r, a, b) => {
                operand(a, f)?;
                write!(f, " &[{r}] ")?;
                operand(b, f)
            }
            Formula::Bang(r, a) => {
                write!(f, "![{r}] ")?;
                operand(a, f)
            }
            Formula::Msg(r, s, a) => {
                write!(f, "msg[{r},{s}] ")?;
                operand(a, f)
            }
            Formula::Forall(r, x, a) => write!(f, "all[{r}] {x}. {a}"),
        }
    }
}
