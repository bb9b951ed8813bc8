use std::collections::BTreeSet;
use std::fmt;

use crate::fresh::fresh_avoiding;
use crate::roles::{Role, RoleSet};
use crate::syntax::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Inl,
    Inr,
}

/// The four point-to-point headers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MsgKind {
    /// `x(skip)`: both `r` and `s` in the role set.
    SkipIn,
    /// `x[skip]`: neither `r` nor `s` in the role set.
    SkipOut,
    /// `x(recv)`: `r` in the role set, `s` not.
    Recv,
    /// `x[send]`: `s` in the role set, `r` not.
    Send,
}

impl MsgKind {
    pub fn keyword(self) -> &'static str {
        match self {
            MsgKind::SkipIn | MsgKind::SkipOut => "skip",
            MsgKind::Recv => "recv",
            MsgKind::Send => "send",
        }
    }

    /// Input-style headers are written with parentheses.
    pub fn is_input(self) -> bool {
        matches!(self, MsgKind::SkipIn | MsgKind::Recv)
    }
}

/// A process term. Every header names a subject endpoint `x` with its role
/// set and the connective's role.
#[derive(Debug, Clone)]
pub enum Process {
    /// `new x:A.(P1 | ... | Pn)`
    Cut { name: String, ann: Option<Formula>, parts: Vec<Process> },
    /// `x{R}[y]@r.P`
    OutName { x: String, roles: RoleSet, y: String, r: Role, body: Box<Process> },
    /// `x{R}(y)@r.(P1|P2)`; `y` is bound in `left` only.
    InName { x: String, roles: RoleSet, y: String, r: Role, left: Box<Process>, right: Box<Process> },
    /// `x{R}[]@r.P`
    OutEmpty { x: String, roles: RoleSet, r: Role, body: Box<Process> },
    /// `x{R}()@r.end`
    InEmpty { x: String, roles: RoleSet, r: Role },
    /// `x{R}[inl]@r.P` or `x{R}[inr]@r.P`
    Select { x: String, roles: RoleSet, r: Role, branch: Branch, body: Box<Process> },
    /// `x{R}(case)@r.(P1,P2)`
    Case { x: String, roles: RoleSet, r: Role, left: Box<Process>, right: Box<Process> },
    /// `!x{R}(y)@r.P`
    Server { x: String, roles: RoleSet, y: String, r: Role, body: Box<Process> },
    /// `?x{R}[y]@r.P`
    Request { x: String, roles: RoleSet, y: String, r: Role, body: Box<Process> },
    /// `x{R}(skip)@{r,s}.P` and the other three point-to-point headers.
    Msg { x: String, roles: RoleSet, kind: MsgKind, r: Role, s: Role, body: Box<Process> },
}

impl Process {
    /// Subject of the top header; `None` for a cut.
    pub fn subject(&self) -> Option<&str> {
        match self {
            Process::Cut { .. } => None,
            Process::OutName { x, .. }
            | Process::InName { x, .. }
            | Process::OutEmpty { x, .. }
            | Process::InEmpty { x, .. }
            | Process::Select { x, .. }
            | Process::Case { x, .. }
            | Process::Server { x, .. }
            | Process::Request { x, .. }
            | Process::Msg { x, .. } => Some(x),
        }
    }

    /// Role-set annotation of the top header.
    pub fn header_roles(&self) -> Option<&RoleSet> {
        match self {
            Process::Cut { .. } => None,
            Process::OutName { roles, .. }
            | Process::InName { roles, .. }
            | Process::OutEmpty { roles, .. }
            | Process::InEmpty { roles, .. }
            | Process::Select { roles, .. }
            | Process::Case { roles, .. }
            | Process::Server { roles, .. }
            | Process::Request { roles, .. }
            | Process::Msg { roles, .. } => Some(roles),
        }
    }

    pub fn is_cut(&self) -> bool {
        matches!(self, Process::Cut { .. })
    }

    pub fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_names_into(&mut out);
        out
    }

    fn free_names_into(&self, out: &mut BTreeSet<String>) {
        let scoped = |p: &Process, y: &str, out: &mut BTreeSet<String>| {
            let mut inner = p.free_names();
            inner.remove(y);
            out.extend(inner);
        };
        match self {
            Process::Cut { name, parts, .. } => {
                for p in parts {
                    scoped(p, name, out);
                }
            }
            Process::OutName { x, y, body, .. } | Process::Server { x, y, body, .. } | Process::Request { x, y, body, .. } => {
                out.insert(x.clone());
                scoped(body, y, out);
            }
            Process::InName { x, y, left, right, .. } => {
                out.insert(x.clone());
                scoped(left, y, out);
                right.free_names_into(out);
            }
            Process::OutEmpty { x, body, .. } | Process::Select { x, body, .. } | Process::Msg { x, body, .. } => {
                out.insert(x.clone());
                body.free_names_into(out);
            }
            Process::InEmpty { x, .. } => {
                out.insert(x.clone());
            }
            Process::Case { x, left, right, .. } => {
                out.insert(x.clone());
                left.free_names_into(out);
                right.free_names_into(out);
            }
        }
    }

    pub fn has_free(&self, n: &str) -> bool {
        self.free_names().contains(n)
    }

    /// Capture-avoiding renaming of free `from` to `to`.
    pub fn rename(&self, from: &str, to: &str) -> Process {
        if from == to {
            return self.clone();
        }
        let sub = |s: &String| if s == from { to.to_string() } else { s.clone() };
        // Rename under binder `y`; refresh `y` if it would capture `to`.
        let under = |y: &String, p: &Process| -> (String, Process) {
            if y == from {
                return (y.clone(), p.clone());
            }
            if y == to && p.has_free(from) {
                let fv = p.free_names();
                let y2 = fresh_avoiding(y, |n| fv.contains(n) || n == to || n == from);
                return (y2.clone(), p.rename(y, &y2).rename(from, to));
            }
            (y.clone(), p.rename(from, to))
        };
        match self {
            Process::Cut { name, ann, parts } => {
                if name == from {
                    return self.clone();
                }
                if name == to && parts.iter().any(|p| p.has_free(from)) {
                    let mut fv = BTreeSet::new();
                    parts.iter().for_each(|p| fv.extend(p.free_names()));
                    let n2 = fresh_avoiding(name, |n| fv.contains(n) || n == to || n == from);
                    let parts = parts.iter().map(|p| p.rename(name, &n2).rename(from, to)).collect();
                    return Process::Cut { name: n2, ann: ann.clone(), parts };
                }
                Process::Cut { name: name.clone(), ann: ann.clone(), parts: parts.iter().map(|p| p.rename(from, to)).collect() }
            }
            Process::OutName { x, roles, y, r, body } => {
                let (y, body) = under(y, body);
                Process::OutName { x: sub(x), roles: roles.clone(), y, r: *r, body: Box::new(body) }
            }
            Process::Server { x, roles, y, r, body } => {
                let (y, body) = under(y, body);
                Process::Server { x: sub(x), roles: roles.clone(), y, r: *r, body: Box::new(body) }
            }
            Process::Request { x, roles, y, r, body } => {
                let (y, body) = under(y, body);
                Process::Request { x: sub(x), roles: roles.clone(), y, r: *r, body: Box::new(body) }
            }
            Process::InName { x, roles, y, r, left, right } => {
                let (y, left) = under(y, left);
                Process::InName { x: sub(x), roles: roles.clone(), y, r: *r, left: Box::new(left), right: Box::new(right.rename(from, to)) }
            }
            Process::OutEmpty { x, roles, r, body } => {
                Process::OutEmpty { x: sub(x), roles: roles.clone(), r: *r, body: Box::new(body.rename(from, to)) }
            }
            Process::InEmpty { x, roles, r } => Process::InEmpty { x: sub(x), roles: roles.clone(), r: *r },
            Process::Select { x, roles, r, branch, body } => Process::Select {
                x: sub(x),
                roles: roles.clone(),
                r: *r,
                branch: *branch,
                body: Box::new(body.rename(from, to)),
            },
            Process::Case { x, roles, r, left, right } => Process::Case {
                x: sub(x),
                roles: roles.clone(),
                r: *r,
                left: Box::new(left.rename(from, to)),
                right: Box::new(right.rename(from, to)),
            },
            Process::Msg { x, roles, kind, r, s, body } => Process::Msg {
                x: sub(x),
                roles: roles.clone(),
                kind: *kind,
                r: *r,
                s: *s,
                body: Box::new(body.rename(from, to)),
            },
        }
    }

    /// Replace the subject of the top header only.
    pub fn with_subject(&self, to: &str) -> Process {
        let mut p = self.clone();
        match &mut p {
            Process::Cut { .. } => {}
            Process::OutName { x, .. }
            | Process::InName { x, .. }
            | Process::OutEmpty { x, .. }
            | Process::InEmpty { x, .. }
            | Process::Select { x, .. }
            | Process::Case { x, .. }
            | Process::Server { x, .. }
            | Process::Request { x, .. }
            | Process::Msg { x, .. } => *x = to.to_string(),
        }
        p
    }

    /// Number of cut nodes in the term.
    pub fn cut_count(&self) -> usize {
        let own = usize::from(self.is_cut());
        own + self.children().iter().map(|c| c.cut_count()).sum::<usize>()
    }

    pub fn children(&self) -> Vec<&Process> {
        match self {
            Process::Cut { parts, .. } => parts.iter().collect(),
            Process::InName { left, right, .. } | Process::Case { left, right, .. } => vec![left, right],
            Process::InEmpty { .. } => vec![],
            Process::OutName { body, .. }
            | Process::OutEmpty { body, .. }
            | Process::Select { body, .. }
            | Process::Server { body, .. }
            | Process::Request { body, .. }
            | Process::Msg { body, .. } => vec![body],
        }
    }

    /// Canonical text identical for α-equivalent terms. With `perm`, the
    /// parts of every cut are sorted, so (perm)-variants agree as well.
    pub fn canonical_key(&self, perm: bool) -> String {
        let mut out = String::new();
        write_key(self, &mut Vec::new(), perm, &mut out);
        out
    }
}

fn name_key(n: &str, stack: &[String]) -> String {
    match stack.iter().rev().position(|b| b == n) {
        Some(i) => format!("#{i}"),
        None => n.to_string(),
    }
}

fn write_key(p: &Process, stack: &mut Vec<String>, perm: bool, out: &mut String) {
    let bind = |y: &str, q: &Process, stack: &mut Vec<String>, out: &mut String| {
        stack.push(y.to_string());
        write_key(q, stack, perm, out);
        stack.pop();
    };
    match p {
        Process::Cut { name, ann, parts } => {
            let ann = ann.as_ref().map(Formula::key).unwrap_or_default();
            stack.push(name.clone());
            let mut ks: Vec<String> = parts
                .iter()
                .map(|q| {
                    let mut s = String::new();
                    write_key(q, stack, perm, &mut s);
                    s
                })
                .collect();
            stack.pop();
            if perm {
                ks.sort();
            }
            out.push_str(&format!("nu:{ann}({})", ks.join("|")));
        }
        Process::OutName { x, roles, y, r, body } => {
            out.push_str(&format!("{}{roles}[]{r}.", name_key(x, stack)));
            bind(y, body, stack, out);
        }
        Process::InName { x, roles, y, r, left, right } => {
            out.push_str(&format!("{}{roles}(){r}.(", name_key(x, stack)));
            bind(y, left, stack, out);
            out.push('|');
            write_key(right, stack, perm, out);
            out.push(')');
        }
        Process::OutEmpty { x, roles, r, body } => {
            out.push_str(&format!("{}{roles}[_]{r}.", name_key(x, stack)));
            write_key(body, stack, perm, out);
        }
        Process::InEmpty { x, roles, r } => out.push_str(&format!("{}{roles}(_){r}", name_key(x, stack))),
        Process::Select { x, roles, r, branch, body } => {
            out.push_str(&format!("{}{roles}[{branch:?}]{r}.", name_key(x, stack)));
            write_key(body, stack, perm, out);
        }
        Process::Case { x, roles, r, left, right } => {
            out.push_str(&format!("{}{roles}(case){r}.(", name_key(x, stack)));
            write_key(left, stack, perm, out);
            out.push(',');
            write_key(right, stack, perm, out);
            out.push(')');
        }
        Process::Server { x, roles, y, r, body } => {
            out.push_str(&format!("!{}{roles}{r}.", name_key(x, stack)));
            bind(y, body, stack, out);
        }
        Process::Request { x, roles, y, r, body } => {
            out.push_str(&format!("?{}{roles}{r}.", name_key(x, stack)));
            bind(y, body, stack, out);
        }
        Process::Msg { x, roles, kind, r, s, body } => {
            out.push_str(&format!("{}{roles}{kind:?}{r},{s}.", name_key(x, stack)));
            write_key(body, stack, perm, out);
        }
    }
}

impl PartialEq for Process {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_key(false) == other.canonical_key(false)
    }
}

impl Eq for Process {}

impl std::hash::Hash for Process {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canonical_key(false).hash(state);
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Process::Cut { name, ann, parts } => {
                write!(f, "new {name}")?;
                if let Some(a) = ann {
                    write!(f, ":{a}")?;
                }
                write!(f, ".(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            Process::OutName { x, roles, y, r, body } => write!(f, "{x}{roles}[{y}]@{r}.{body}"),
            Process::InName { x, roles, y, r, left, right } => {
                write!(f, "{x}{}({y})@{r}.({left} | {right})", roles)
            }
            Process::OutEmpty { x, roles, r, body } => write!(f, "{x}{}[]@{r}.{body}", roles),
            Process::InEmpty { x, roles, r } => write!(f, "{x}{}()@{r}.end", roles),
            Process::Select { x, roles, r, branch, body } => {
                let b = match branch {
                    Branch::Inl => "inl",
                    Branch::Inr => "inr",
                };
                write!(f, "{x}{}[{b}]@{r}.{body}", roles)
            }
            Process::Case { x, roles, r, left, right } => {
                write!(f, "{x}{}(case)@{r}.({left}, {right})", roles)
            }
            Process::Server { x, roles, y, r, body } => write!(f, "!{x}{}({y})@{r}.{body}", roles),
            Process::Request { x, roles, y, r, body } => write!(f, "?{x}{roles}[{y}]@{r}.{body}"),
            Process::Msg { x, roles, kind, r, s, body } => {
                let (open, close) = if kind.is_input() { ('(', ')') } else { ('[', ']') };
                write!(f, "{x}{}{open}{}{close}@{{{r},{s}}}.{body}", roles, kind.keyword())
            }
        }
    }
}
