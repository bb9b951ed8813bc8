use std::collections::{HashSet, VecDeque};

use super::process::Process;

/// Search budget for [`struct_equiv`]; terms needing more distinct
/// rearrangements than this are reported as not equivalent.
pub const EQUIV_STATE_CAP: usize = 20_000;

/// Structural equivalence: α, part permutation under a cut, and the
/// exchange `νx.(νy.(P|P1)|P2) ≡ νy.(νx.(P|P2)|P1)` when `x, y ∈ fn(P)`,
/// `x ∉ fn(P1)` and `y ∉ fn(P2)`.
pub fn struct_equiv(p: &Process, q: &Process) -> bool {
    let target = q.canonical_key(true);
    let start = p.canonical_key(true);
    if start == target {
        return true;
    }
    if p.cut_count() != q.cut_count() {
        return false;
    }
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([p.clone()]);
    while let Some(cur) = queue.pop_front() {
        for n in assoc_neighbours(&cur) {
            let k = n.canonical_key(true);
            if k == target {
                return true;
            }
            if seen.len() >= EQUIV_STATE_CAP {
                return false;
            }
            if seen.insert(k) {
                queue.push_back(n);
            }
        }
    }
    false
}

/// Every term one (assoc) exchange away, at any depth.
pub fn assoc_neighbours(p: &Process) -> Vec<Process> {
    let mut out = Vec::new();
    if let Process::Cut { name: x, ann: a, parts } = p {
        for (i, inner) in parts.iter().enumerate() {
            let Process::Cut { name: y, ann: b, parts: qs } = inner else { continue };
            if x == y {
                continue;
            }
            let p2: Vec<&Process> = parts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q).collect();
            if p2.iter().any(|q| q.has_free(y)) {
                continue;
            }
            for (k, pk) in qs.iter().enumerate() {
                let p1: Vec<&Process> = qs.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, q)| q).collect();
                if !pk.has_free(x) || !pk.has_free(y) || p1.iter().any(|q| q.has_free(x)) {
                    continue;
                }
                let new_inner = Process::Cut {
                    name: x.clone(),
                    ann: a.clone(),
                    parts: std::iter::once(pk.clone()).chain(p2.iter().map(|q| (*q).clone())).collect(),
                };
                out.push(Process::Cut {
                    name: y.clone(),
                    ann: b.clone(),
                    parts: std::iter::once(new_inner).chain(p1.into_iter().cloned()).collect(),
                });
            }
        }
    }
    for (i, c) in p.children().into_iter().enumerate() {
        for n in assoc_neighbours(c) {
            out.push(with_child(p, i, n));
        }
    }
    out
}

fn with_child(p: &Process, i: usize, new: Process) -> Process {
    super::reduce::replace_child(p, i, new)
}
