use std::collections::BTreeSet;
use std::fmt;

use super::process::{Branch, Process};
use crate::fresh::fresh_avoiding;
use crate::syntax::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Tensor,
    One,
    With,
    Msg,
    BangCollect,
    BangSpawn,
    BangReplicate,
    Commute,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::Tensor => "tensor",
            StepKind::One => "one",
            StepKind::With => "with",
            StepKind::Msg => "msg",
            StepKind::BangCollect => "bang-collect",
            StepKind::BangSpawn => "bang-spawn",
            StepKind::BangReplicate => "bang-replicate",
            StepKind::Commute => "commute",
        }
    }

    pub fn is_principal(self) -> bool {
        self != StepKind::Commute
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One reduction. `alternative` is the other admissible result of a
/// tensor step (cut `A2` outermost instead of `A1`).
#[derive(Debug, Clone)]
pub struct Step {
    pub kind: StepKind,
    pub cut: String,
    pub result: Process,
    pub alternative: Option<Process>,
}

fn cut(name: &str, ann: Option<Formula>, parts: Vec<Process>) -> Process {
    Process::Cut { name: name.to_string(), ann, parts }
}

fn free_of_all(ps: &[Process]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    ps.iter().for_each(|p| out.extend(p.free_names()));
    out
}

fn fresh_for(base: &str, avoid: &BTreeSet<String>) -> String {
    fresh_avoiding(base, |c| avoid.contains(c))
}

/// One step of the deterministic strategy, or `None` for a normal form.
pub fn step(p: &Process) -> Option<Step> {
    match p {
        Process::Cut { name, ann, parts } => {
            if let Some(s) = principal(name, ann, parts).or_else(|| commute(name, ann, parts)) {
                return Some(s);
            }
            for (i, q) in parts.iter().enumerate() {
                if let Some(mut s) = step(q) {
                    let mut ps = parts.clone();
                    ps[i] = s.result;
                    s.result = cut(name, ann.clone(), ps.clone());
                    s.alternative = s.alternative.map(|alt| {
                        ps[i] = alt;
                        cut(name, ann.clone(), ps)
                    });
                    return Some(s);
                }
            }
            None
        }
        _ => {
            let kids = p.children();
            for (i, q) in kids.iter().enumerate() {
                if let Some(mut s) = step(q) {
                    s.result = replace_child(p, i, s.result);
                    s.alternative = s.alternative.map(|alt| replace_child(p, i, alt));
                    return Some(s);
                }
            }
            None
        }
    }
}

pub(super) fn replace_child(p: &Process, i: usize, new: Process) -> Process {
    let mut p = p.clone();
    match &mut p {
        Process::Cut { parts, .. } => parts[i] = new,
        Process::InName { left, right, .. } | Process::Case { left, right, .. } => {
            if i == 0 {
                **left = new
            } else {
                **right = new
            }
        }
        Process::OutName { body, .. }
        | Process::OutEmpty { body, .. }
        | Process::Select { body, .. }
        | Process::Server { body, .. }
        | Process::Request { body, .. }
        | Process::Msg { body, .. } => **body = new,
        Process::InEmpty { .. } => {}
    }
    p
}

fn is_server_on(p: &Process, x: &str) -> bool {
    matches!(p, Process::Server { x: s, .. } if s == x)
}

fn principal(x: &str, ann: &Option<Formula>, parts: &[Process]) -> Option<Step> {
    let done = |kind, result| Some(Step { kind, cut: x.to_string(), result, alternative: None });
    if parts.iter().all(|q| q.subject() == Some(x)) {
        let outs: Vec<usize> = (0..parts.len())
            .filter(|&i| matches!(parts[i], Process::OutName { .. } | Process::OutEmpty { .. } | Process::Select { .. }))
            .collect();
        if let [o] = outs.as_slice() {
            let rest: Vec<&Process> = parts.iter().enumerate().filter(|(i, _)| i != o).map(|(_, q)| q).collect();
            match &parts[*o] {
                Process::OutEmpty { body, .. } if rest.iter().all(|q| matches!(q, Process::InEmpty { .. })) => {
                    return done(StepKind::One, (**body).clone());
                }
                Process::Select { branch, body, .. } if rest.iter().all(|q| matches!(q, Process::Case { .. })) => {
                    let sub = match ann {
                        Some(Formula::With(_, a1, a2)) => Some(if *branch == Branch::Inl { (**a1).clone() } else { (**a2).clone() }),
                        _ => None,
                    };
                    let mut ps = vec![(**body).clone()];
                    for q in rest {
                        let Process::Case { left, right, .. } = q else { unreachable!() };
                        ps.push(if *branch == Branch::Inl { (**left).clone() } else { (**right).clone() });
                    }
                    return done(StepKind::With, cut(x, sub, ps));
                }
                Process::OutName { .. } if rest.iter().all(|q| matches!(q, Process::InName { .. })) => {
                    return tensor(x, ann, &parts[*o], &rest);
                }
                _ => {}
            }
        }
        if parts.iter().all(|q| matches!(q, Process::Msg { .. })) {
            let sub = match ann {
                Some(Formula::Msg(_, _, a)) => Some((**a).clone()),
                _ => None,
            };
            let ps = parts.iter().map(|q| q.children()[0].clone()).collect();
            return done(StepKind::Msg, cut(x, sub, ps));
        }
    }
    bang(x, ann, parts)
}

fn tensor(x: &str, ann: &Option<Formula>, out: &Process, ins: &[&Process]) -> Option<Step> {
    let Process::OutName { y: y1, body: p1, .. } = out else { return None };
    let (a1, a2) = match ann {
        Some(Formula::Tensor(_, a1, a2)) => (Some((**a1).clone()), Some((**a2).clone())),
        _ => (None, None),
    };
    let mut avoid: BTreeSet<String> = free_of_all(&ins.iter().map(|q| (*q).clone()).collect::<Vec<_>>());
    avoid.extend(p1.free_names());
    avoid.insert(x.to_string());
    let y = fresh_for(y1, &avoid);
    let p1 = p1.rename(y1, &y);
    let mut lefts = Vec::new();
    let mut rights = Vec::new();
    for q in ins {
        let Process::InName { y: yi, left, right, .. } = q else { return None };
        lefts.push(left.rename(yi, &y));
        rights.push((**right).clone());
    }
    let inner1 = cut(&y, a1.clone(), std::iter::once(p1.clone()).chain(lefts.clone()).collect());
    let q1 = cut(x, a2.clone(), std::iter::once(inner1).chain(rights.clone()).collect());
    let inner2 = cut(x, a2, std::iter::once(p1).chain(rights).collect());
    let q2 = cut(&y, a1, std::iter::once(inner2).chain(lefts).collect());
    Some(Step { kind: StepKind::Tensor, cut: x.to_string(), result: q1, alternative: Some(q2) })
}

/// The `!` case: every part but one is a server on `x`.
fn bang(x: &str, ann: &Option<Formula>, parts: &[Process]) -> Option<Step> {
    let clients: Vec<usize> = (0..parts.len()).filter(|&i| !is_server_on(&parts[i], x)).collect();
    let [c] = clients.as_slice() else { return None };
    let client = &parts[*c];
    let servers: Vec<&Process> = parts.iter().enumerate().filter(|(i, _)| i != c).map(|(_, q)| q).collect();
    if servers.is_empty() {
        return None;
    }
    let done = |kind, result| Some(Step { kind, cut: x.to_string(), result, alternative: None });
    if !client.has_free(x) {
        return done(StepKind::BangCollect, client.clone());
    }
    if let Process::Request { x: cx, y: cy, body, .. } = client {
        if cx == x && !body.has_free(x) {
            let b = match ann {
                Some(Formula::Bang(_, b)) => Some((**b).clone()),
                _ => None,
            };
            let mut avoid = free_of_all(parts);
            avoid.extend(body.free_names());
            avoid.insert(x.to_string());
            let y = fresh_for(cy, &avoid);
            let mut ps = vec![body.rename(cy, &y)];
            for s in &servers {
                let Process::Server { y: sy, body: sb, .. } = s else { unreachable!() };
                ps.push(sb.rename(sy, &y));
            }
            return done(StepKind::BangSpawn, cut(&y, b, ps));
        }
    }
    // Replicate: split the client's uses of x into a fresh x' and x.
    let split = split_uses(client, x)?;
    let (copy, client2) = split;
    let copies: Vec<Process> = servers.iter().map(|s| s.with_subject(&copy)).collect();
    let inner = cut(&copy, ann.clone(), std::iter::once(client2).chain(copies).collect());
    let outer = cut(x, ann.clone(), std::iter::once(inner).chain(servers.into_iter().cloned()).collect());
    done(StepKind::BangReplicate, outer)
}

/// Where typing would contract `x`, rename the first use to a fresh copy.
fn split_uses(p: &Process, x: &str) -> Option<(String, Process)> {
    let copy = fresh_avoiding(x, |c| c == x || p.has_free(c));
    match p {
        Process::Request { x: cx, body, .. } if cx == x && body.has_free(x) => Some((copy.clone(), p.with_subject(&copy))),
        Process::InName { x: z, y, left, right, .. } if z != x && y != x && left.has_free(x) && right.has_free(x) => {
            let mut q = p.clone();
            if let Process::InName { left, .. } = &mut q {
                **left = left.rename(x, &copy);
            }
            Some((copy, q))
        }
        Process::Cut { name, parts, .. } if name != x && parts.iter().filter(|q| q.has_free(x)).count() >= 2 => {
            let mut q = p.clone();
            if let Process::Cut { parts, .. } = &mut q {
                let i = parts.iter().position(|q| q.has_free(x))?;
                parts[i] = parts[i].rename(x, &copy);
            }
            Some((copy, q))
        }
        _ => None,
    }
}

/// Push the cut under the top header of the first part acting on another
/// name.
fn commute(x: &str, ann: &Option<Formula>, parts: &[Process]) -> Option<Step> {
    for (i, part) in parts.iter().enumerate() {
        if let Some(result) = commute_part(x, ann, parts, i, part) {
            return Some(Step { kind: StepKind::Commute, cut: x.to_string(), result, alternative: None });
        }
    }
    None
}

fn commute_part(x: &str, ann: &Option<Formula>, parts: &[Process], i: usize, part: &Process) -> Option<Process> {
    let z = part.subject()?;
    if z == x {
        return None;
    }
    let others: Vec<Process> = parts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q.clone()).collect();
    let mut avoid = free_of_all(&others);
    avoid.insert(x.to_string());
    // A cut with `q` in the place of the part.
    let with = |q: Process| {
        let mut ps = parts.to_vec();
        ps[i] = q;
        cut(x, ann.clone(), ps)
    };
    // Refresh a bound name that would capture names of the other parts.
    let bound = |y: &str, body: &Process| -> (String, Process) {
        if avoid.contains(y) {
            let mut av = avoid.clone();
            av.extend(body.free_names());
            let y2 = fresh_for(y, &av);
            (y2.clone(), body.rename(y, &y2))
        } else {
            (y.to_string(), body.clone())
        }
    };
    let mut p = part.clone();
    match &mut p {
        Process::InEmpty { .. } | Process::Cut { .. } => return None,
        Process::OutName { y, body, .. } | Process::Request { y, body, .. } => {
            let (y2, b) = bound(y, body);
            *y = y2;
            **body = with(b);
        }
        Process::Server { y, body, .. } => {
            if !others.iter().all(|q| is_server_on(q, x)) {
                return None;
            }
            let (y2, b) = bound(y, body);
            *y = y2;
            **body = with(b);
        }
        Process::InName { y, left, right, .. } => {
            let (y2, l) = bound(y, left);
            let in_left = l.has_free(x);
            let in_right = right.has_free(x);
            if in_left && in_right {
                return None;
            }
            *y = y2;
            if in_left {
                **left = with(l);
            } else {
                **left = l;
                **right = with((**right).clone());
            }
        }
        Process::OutEmpty { body, .. } | Process::Select { body, .. } | Process::Msg { body, .. } => {
            **body = with((**body).clone());
        }
        Process::Case { left, right, .. } => {
            **left = with((**left).clone());
            **right = with((**right).clone());
        }
    }
    Some(p)
}

/// Result of running the strategy.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub process: Process,
    pub steps: Vec<Step>,
    /// The fuel ran out before a normal form was reached.
    pub exhausted: bool,
}

pub fn normalize(p: &Process, fuel: usize) -> Normalized {
    let mut cur = p.clone();
    let mut steps = Vec::new();
    while steps.len() < fuel {
        match step(&cur) {
            Some(s) => {
                cur = s.result.clone();
                steps.push(s);
            }
            None => return Normalized { process: cur, steps, exhausted: false },
        }
    }
    let exhausted = step(&cur).is_some();
    Normalized { process: cur, steps, exhausted }
}
