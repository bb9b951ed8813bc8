//! Acceptance suite: one line per criterion, run in order, then a single
//! verdict. Time limits are wall-clock on one core with the test profile.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use lmrl::cutelim::{
    cut2, cut2_disj, cut2_spill, cut2_spill_disj, cutn, cutn_disj, eta_expand, prove_bounded, split, translate_cll2,
    Cll2Formula, CutError, CutPart,
};
use lmrl::derivation::{check, Calculus, Derivation, RuleName};
use lmrl::frontend::{parse_document, parse_sequent, Body};
use lmrl::pilmrl::{check_subject_reduction, step, struct_equiv, typecheck, Process, StepKind, TypingRule};
use lmrl::roles::{RoleBase, RoleSet};
use lmrl::syntax::{Formula, IFormula, Sequent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[global_allocator]
static GLOBAL: mimalloc::MiMalloc = mimalloc::MiMalloc;

type Verdict = Result<String, String>;

struct Outcome {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn run(id: usize, name: &'static str, limit: Option<Duration>, f: impl FnOnce() -> Verdict) -> Outcome {
    let t = Instant::now();
    let r = f();
    let took = t.elapsed();
    let (mut pass, mut detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    match limit {
        Some(l) => {
            detail = format!("{detail}; {:.2}s (limit {}s)", took.as_secs_f64(), l.as_secs());
            if took > l {
                pass = false;
                detail.push_str(" TOO SLOW");
            }
        }
        None => detail = format!("{detail}; {:.2}s", took.as_secs_f64()),
    }
    let o = Outcome { id, name, pass, detail };
    println!("[{}] criterion {} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.id, o.name, o.detail);
    o
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn files(dir: &Path, ext: &str) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|x| x == ext) {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

fn file_name(p: &Path) -> String {
    p.file_name().unwrap().to_string_lossy().into_owned()
}

/// Expected failing rule of a negative fixture `<rule>.bad.<ext>`, or `None`
/// for positives. `bad<anything>` files are negatives with no fixed rule.
fn negative(p: &Path) -> Option<Option<String>> {
    let n = file_name(p);
    if let Some((rule, _)) = n.split_once(".bad.") {
        return Some(Some(rule.to_string()));
    }
    n.starts_with("bad").then_some(None)
}

fn rules_used(d: &Derivation, calc: Calculus, out: &mut BTreeSet<&'static str>) {
    out.insert(d.rule.name(calc));
    d.premises.iter().for_each(|p| rules_used(p, calc, out));
}

fn criterion_1() -> Verdict {
    let mut seen_pos = BTreeSet::new();
    let mut seen_neg = BTreeSet::new();
    let mut count = 0;
    for p in files(&corpus().join("logic"), "seq") {
        let doc = parse_document(&fs::read_to_string(&p).unwrap()).map_err(|e| format!("{}: {e}", p.display()))?;
        let Body::Derivation(d) = doc.body else { continue };
        count += 1;
        let res = check(&d, doc.calculus);
        match negative(&p) {
            None => {
                res.map_err(|e| format!("{} should check: {e}", file_name(&p)))?;
                rules_used(&d, doc.calculus, &mut seen_pos);
            }
            Some(want) => {
                let e = res.err().ok_or_else(|| format!("{} should fail", file_name(&p)))?;
                if let Some(w) = want {
                    let got = e.rule.name(doc.calculus);
                    ensure(e.path.is_empty() && got == w, || format!("{}: failed at {e}, expected root {w}", file_name(&p)))?;
                    seen_neg.insert(w);
                }
            }
        }
    }
    let conj: BTreeSet<&str> = RuleName::ALL.iter().map(|r| r.name(Calculus::Conj)).collect();
    let disj: BTreeSet<&str> = RuleName::ALL.iter().map(|r| r.name(Calculus::Disj)).collect();
    for r in RuleName::ALL {
        let (c, d) = (r.name(Calculus::Conj), r.name(Calculus::Disj));
        ensure(seen_pos.contains(c) || seen_pos.contains(d), || format!("no positive logic fixture uses {c}"))?;
        ensure(seen_neg.contains(c), || format!("no negative logic fixture for {c}"))?;
    }
    ensure(seen_pos.iter().all(|r| conj.contains(r) || disj.contains(r)), || "unknown rule name".into())?;

    let mut typed_pos = BTreeSet::new();
    let mut typed_neg = BTreeSet::new();
    for p in files(&corpus().join("proc"), "pi") {
        let doc = parse_document(&fs::read_to_string(&p).unwrap()).map_err(|e| format!("{}: {e}", p.display()))?;
        let Body::Process { env, process } = doc.body else { return Err(format!("{} is not a process", file_name(&p))) };
        count += 1;
        let res = typecheck(&process, &env);
        match negative(&p) {
            None => {
                let td = res.map_err(|e| format!("{} should typecheck: {e}", file_name(&p)))?;
                typed_pos.extend(td.rules());
            }
            Some(want) => {
                let e = res.err().ok_or_else(|| format!("{} should be rejected", file_name(&p)))?;
                if let Some(w) = want {
                    ensure(e.rule == w, || format!("{}: rejected by {} ({e}), expected {w}", file_name(&p), e.rule))?;
                    typed_neg.insert(w);
                }
            }
        }
    }
    for r in TypingRule::ALL {
        ensure(typed_pos.contains(r.name()), || format!("no positive process uses {}", r.name()))?;
        ensure(typed_neg.contains(r.name()), || format!("no negative process for {}", r.name()))?;
    }
    Ok(format!("{count} fixtures, {} logic rules and {} typing rules covered both ways", RuleName::ALL.len(), TypingRule::ALL.len()))
}

// Role sets as bitmasks, computed from membership only.
fn mask(r: &RoleSet, n: u32) -> u32 {
    (0..n).filter(|&i| r.contains(i)).fold(0, |m, i| m | 1 << i)
}

fn from_mask(n: u32, m: u32) -> RoleSet {
    common::set(n, &(0..n).filter(|i| m & (1 << i) != 0).collect::<Vec<_>>())
}

fn full(n: u32) -> u32 {
    (1 << n) - 1
}

fn whynot(it: &IFormula) -> bool {
    matches!(&it.body, Formula::Bang(r, _) if !it.roles.contains(*r))
}

/// A cut side candidate: derivation index, the designated occurrences (all
/// copies for a ?-formula, one otherwise) and the role mask.
#[derive(Clone)]
struct Entry {
    d: usize,
    item: IFormula,
    occs: Vec<usize>,
    mask: u32,
}

fn entries(world: &[Derivation], n: u32) -> Vec<(String, Vec<Entry>)> {
    let mut by_body: std::collections::BTreeMap<String, Vec<Entry>> = Default::default();
    for (d, der) in world.iter().enumerate() {
        for (_, (item, occs)) in common::occurrence_groups(&der.conclusion) {
            let occs = if whynot(&item) { occs } else { vec![occs[0]] };
            let mask = mask(&item.roles, n);
            by_body.entry(item.body.key()).or_default().push(Entry { d, item, occs, mask });
        }
    }
    by_body.into_iter().collect()
}

fn context(d: &Derivation, occs: &[usize]) -> Vec<IFormula> {
    d.conclusion.items.iter().enumerate().filter(|(i, _)| !occs.contains(i)).map(|(_, x)| x.clone()).collect()
}

fn part(world: &[Derivation], e: &Entry) -> CutPart {
    CutPart::new(world[e.d].clone(), e.occs.clone())
}

#[derive(Default)]
struct Tally {
    instances: usize,
    failures: Vec<String>,
    measure: usize,
}

impl Tally {
    fn record(&mut self, what: &str, r: Result<Derivation, CutError>, calc: Calculus, want: Vec<IFormula>) {
        self.instances += 1;
        match r {
            Err(CutError::MeasureNotDecreasing { from, to }) => {
                self.measure += 1;
                self.fail(format!("{what}: measure {from:?} -> {to:?}"));
            }
            Err(e) => self.fail(format!("{what}: {e}")),
            Ok(d) => {
                if let Err(e) = check(&d, calc) {
                    self.fail(format!("{what}: output does not check: {e}"));
                } else if common::multiset(d.conclusion.items.clone()) != common::multiset(want) {
                    self.fail(format!("{what}: endpoint {}", d.conclusion));
                }
            }
        }
    }

    fn fail(&mut self, m: String) {
        if self.failures.len() < 5 {
            self.failures.push(m);
        } else {
            self.failures.push(String::new());
        }
    }
}

/// Triples whose complements partition the base, every `stride`-th one.
fn triples(group: &[Entry], n: u32, stride: usize, mut f: impl FnMut(&Entry, &Entry, &Entry)) -> usize {
    let mut k = 0;
    let f_all = full(n);
    for a in group {
        for b in group {
            let (ca, cb) = (!a.mask & f_all, !b.mask & f_all);
            if ca & cb != 0 {
                continue;
            }
            for c in group {
                let cc = !c.mask & f_all;
                if cc & (ca | cb) == 0 && ca | cb | cc == f_all {
                    if k % stride == 0 {
                        f(a, b, c);
                    }
                    k += 1;
                }
            }
        }
    }
    k
}

const TRIPLE_STRIDE: [usize; 2] = [1, 20];

fn criterion_2() -> Verdict {
    let mut t = Tally::default();
    let mut per_kind = [0usize; 3];
    for (ni, n) in [2u32, 3].into_iter().enumerate() {
        let world = common::small_world(n);
        for (_, group) in entries(&world, n) {
            for a in &group {
                for b in &group {
                    if a.mask | b.mask != full(n) {
                        continue;
                    }
                    let (da, db) = (&world[a.d], &world[b.d]);
                    let mut want = context(da, &a.occs);
                    want.extend(context(db, &b.occs));
                    let mut spill_want = want.clone();
                    spill_want.push(IFormula::new(from_mask(n, a.mask & b.mask), a.item.body.clone()));
                    t.record("cut2_spill", cut2_spill(&part(&world, a), &part(&world, b)), Calculus::Conj, spill_want);
                    per_kind[0] += 1;
                    if a.mask & b.mask == 0 && a.occs.len() == 1 && b.occs.len() == 1 {
                        t.record("cut2", cut2(da, a.occs[0], db, b.occs[0]), Calculus::Conj, want);
                        per_kind[1] += 1;
                    }
                }
            }
            triples(&group, n, TRIPLE_STRIDE[ni], |a, b, c| {
                let mut want = context(&world[a.d], &a.occs);
                want.extend(context(&world[b.d], &b.occs));
                want.extend(context(&world[c.d], &c.occs));
                t.record("cutn", cutn(&[part(&world, a), part(&world, b), part(&world, c)]), Calculus::Conj, want);
                per_kind[2] += 1;
            });
        }
    }
    let summary = format!(
        "{} instances (spill {}, cut2 {}, cutn {}), {} failures, {} measure violations",
        t.instances,
        per_kind[0],
        per_kind[1],
        per_kind[2],
        t.failures.len(),
        t.measure
    );
    ensure(t.failures.is_empty(), || format!("{summary}: {}", t.failures[0]))?;
    ensure(t.instances >= 500, || format!("{summary}: fewer than 500"))?;
    Ok(summary)
}

fn random_formula(rng: &mut ChaCha8Rng, size: usize) -> Formula {
    let r = rng.gen_range(0..2);
    if size == 0 {
        return match rng.gen_range(0..3) {
            0 => Formula::atom("a"),
            1 => Formula::atom("b"),
            _ => Formula::One(r),
        };
    }
    match rng.gen_range(0..3) {
        0 => Formula::bang(r, random_formula(rng, size - 1)),
        k => {
            let left = rng.gen_range(0..size);
            let (a, b) = (random_formula(rng, left), random_formula(rng, size - 1 - left));
            if k == 1 {
                Formula::tensor(r, a, b)
            } else {
                Formula::with(r, a, b)
            }
        }
    }
}

fn random_sequent(rng: &mut ChaCha8Rng) -> Sequent {
    let len = rng.gen_range(1..=3);
    Sequent::new(
        (0..len)
            .map(|_| {
                let m = rng.gen_range(0..4);
                let size = rng.gen_range(0..=2);
                IFormula::new(from_mask(2, m), random_formula(rng, size))
            })
            .collect(),
    )
}

const ORACLE_SEED: u64 = 0x6c6d_726c;
const ORACLE_SAMPLES: usize = 240;
const ORACLE_DEPTH: usize = 5;
const ROUTE_DEPTH: usize = 6;
const PAIR_CAP: usize = 150;

/// A derivation the oracle proved: it must check and conclude its goal.
fn oracle_ok(goal: &Sequent, depth: usize) -> Result<Option<Derivation>, String> {
    match prove_bounded(goal, Calculus::Conj, depth, &[]) {
        None => Ok(None),
        Some(d) => {
            check(&d, Calculus::Conj).map_err(|e| format!("oracle proof of {goal} does not check: {e}"))?;
            ensure(common::multiset(d.conclusion.items.clone()) == common::multiset(goal.items.clone()), || {
                format!("oracle proved {} for goal {goal}", d.conclusion)
            })?;
            Ok(Some(d))
        }
    }
}

/// A transformer output: checks, has the expected endpoint, and the oracle
/// re-derives that endpoint.
fn route_ok(what: &str, out: Result<Derivation, CutError>, want: Vec<IFormula>) -> Result<(), String> {
    let d = out.map_err(|e| format!("{what}: {e}"))?;
    check(&d, Calculus::Conj).map_err(|e| format!("{what}: output does not check: {e}"))?;
    ensure(common::multiset(d.conclusion.items.clone()) == common::multiset(want), || format!("{what}: endpoint {}", d.conclusion))?;
    let depth = ROUTE_DEPTH.max(d.height());
    ensure(oracle_ok(&d.conclusion, depth)?.is_some(), || format!("{what}: oracle finds no proof of {} at depth {depth}", d.conclusion))
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
    let mut seen = BTreeSet::new();
    let mut samples = Vec::new();
    while samples.len() < ORACLE_SAMPLES {
        let s = random_sequent(&mut rng);
        if seen.insert(common::multiset(s.items.clone())) {
            samples.push(s);
        }
    }
    let mut proved = Vec::new();
    for s in &samples {
        if let Some(d) = oracle_ok(s, ORACLE_DEPTH)? {
            proved.push(d);
        }
    }
    let mut routes = [0usize; 3];
    for s in &samples {
        for it in &s.items {
            let rs = [it.roles.clone(), it.roles.complement()];
            route_ok("eta", eta_expand(&it.body, &rs), rs.iter().map(|r| IFormula::new(r.clone(), it.body.clone())).collect())?;
            routes[0] += 1;
        }
    }
    'pairs: for (i, d1) in proved.iter().enumerate() {
        for d2 in &proved[i..] {
            for (o1, x) in d1.conclusion.items.iter().enumerate() {
                for (o2, y) in d2.conclusion.items.iter().enumerate() {
                    if x.body != y.body || mask(&x.roles, 2) ^ mask(&y.roles, 2) != full(2) {
                        continue;
                    }
                    let mut want = context(d1, &[o1]);
                    want.extend(context(d2, &[o2]));
                    route_ok("cut2", cut2(d1, o1, d2, o2), want)?;
                    routes[1] += 1;
                    if routes[1] >= PAIR_CAP {
                        break 'pairs;
                    }
                }
            }
        }
    }
    let (r0, r1) = (from_mask(2, 1), from_mask(2, 2));
    for d in &proved {
        for (o, it) in d.conclusion.items.iter().enumerate() {
            if mask(&it.roles, 2) == full(2) {
                let mut want = context(d, &[o]);
                want.push(IFormula::new(r0.clone(), it.body.clone()));
                want.push(IFormula::new(r1.clone(), it.body.clone()));
                route_ok("split", split(d, o, &r0, &r1), want)?;
                routes[2] += 1;
            }
        }
    }
    ensure(routes.iter().all(|&k| k > 0), || format!("a transformer route went unexercised: {routes:?}"))?;
    Ok(format!(
        "{} sampled sequents, {} proved at depth {ORACLE_DEPTH}; transformer outputs re-derived: eta {}, cut2 {}, split {}",
        samples.len(),
        proved.len(),
        routes[0],
        routes[1],
        routes[2]
    ))
}

/// Root-level corruptions: a swapped rule of the same arity, and a
/// complemented major formula.
fn mutants(d: &Derivation) -> Vec<Derivation> {
    use RuleName::*;
    let swapped = match d.rule {
        TensorPos => Some(WithPos),
        WithPos => Some(TensorPos),
        TensorNeg => Some(WithNegL),
        WithNegL => Some(WithNegR),
        WithNegR => Some(WithNegL),
        BangPos => Some(BangNegDerelict),
        BangNegDerelict => Some(BangPos),
        BangNegWeaken => Some(OneNeg),
        OneNeg => Some(BangNegWeaken),
        BangNegContract => Some(TensorNeg),
        _ => None,
    };
    let mut out = Vec::new();
    if let Some(r) = swapped {
        out.push(Derivation { rule: r, ..d.clone() });
    }
    let mut flipped = d.clone();
    if let Some(it) = flipped.conclusion.items.get_mut(d.major) {
        it.roles = it.roles.complement();
        out.push(flipped);
    }
    out
}

const DISJ_STRIDE: [usize; 2] = [1, 5];

fn criterion_4() -> Verdict {
    let (mut checked, mut invalid) = (0, 0);
    let mut t = Tally::default();
    for (ni, n) in [2u32, 3].into_iter().enumerate() {
        let world = common::small_world(n);
        for d in &world {
            for m in std::iter::once(d.clone()).chain(mutants(d)) {
                let conj = check(&m, Calculus::Conj).is_ok();
                let disj = check(&m.dualize(), Calculus::Disj).is_ok();
                ensure(conj == disj, || format!("duality breaks on {}: conj {conj}, disj {disj}", m.conclusion))?;
                checked += 1;
                invalid += usize::from(!conj);
            }
        }
        let dual: Vec<Derivation> = world.iter().map(Derivation::dualize).collect();
        let dual_part = |e: &Entry| CutPart::new(dual[e.d].clone(), e.occs.clone());
        let dual_ctx = |e: &Entry| context(&dual[e.d], &e.occs);
        let mut k = 0;
        for (_, group) in entries(&world, n) {
            for a in &group {
                for b in &group {
                    if a.mask | b.mask != full(n) {
                        continue;
                    }
                    k += 1;
                    if k % DISJ_STRIDE[ni] != 0 {
                        continue;
                    }
                    let mut want = dual_ctx(a);
                    want.extend(dual_ctx(b));
                    let mut spill_want = want.clone();
                    let union = !(a.mask & b.mask) & full(n);
                    spill_want.push(IFormula::new(from_mask(n, union), a.item.body.clone()));
                    t.record("cut2_spill_disj", cut2_spill_disj(&dual_part(a), &dual_part(b)), Calculus::Disj, spill_want);
                    if a.mask & b.mask == 0 && a.occs.len() == 1 && b.occs.len() == 1 {
                        t.record("cut2_disj", cut2_disj(&dual[a.d], a.occs[0], &dual[b.d], b.occs[0]), Calculus::Disj, want);
                    }
                }
            }
            triples(&group, n, TRIPLE_STRIDE[ni] * DISJ_STRIDE[ni], |a, b, c| {
                let mut want = dual_ctx(a);
                want.extend(dual_ctx(b));
                want.extend(dual_ctx(c));
                t.record("cutn_disj", cutn_disj(&[dual_part(a), dual_part(b), dual_part(c)]), Calculus::Disj, want);
            });
        }
    }
    ensure(invalid > 0, || "no mutant was invalid".into())?;
    ensure(t.failures.is_empty(), || format!("{} disjunctive failures: {}", t.failures.len(), t.failures[0]))?;
    Ok(format!("{checked} derivations agree ({invalid} invalid mutants); {} disjunctive lemma outputs re-check", t.instances))
}

fn criterion_5() -> Verdict {
    let mut total = 0;
    for n in [2u32, 3] {
        let singles: Vec<RoleSet> = (0..n).map(|r| from_mask(n, 1 << r)).collect();
        let r = from_mask(n, 1);
        let rbar = from_mask(n, full(n) & !1);
        for a in common::session_types(n, 3) {
            let d = eta_expand(&a, &singles).map_err(|e| format!("eta {a}: {e}"))?;
            let e = eta_expand(&a, &[rbar.clone(), r.clone()]).map_err(|e| format!("eta {a}: {e}"))?;
            let o1 = d.conclusion.items.iter().position(|i| i.roles == r).ok_or("no [{0}] occurrence")?;
            let o2 = e.conclusion.items.iter().position(|i| i.roles == rbar).ok_or("no complement occurrence")?;
            let c = cut2(&d, o1, &e, o2).map_err(|err| format!("cut on {a}: {err}"))?;
            ensure(common::multiset(c.conclusion.items) == common::multiset(d.conclusion.items.clone()), || {
                format!("cut on {a} changed the endpoint")
            })?;
            total += 1;
        }
    }
    Ok(format!("{total} session types (N=2,3, size <= 3) keep their endpoint"))
}

fn max_cut_arity(p: &Process) -> usize {
    let here = match p {
        Process::Cut { parts, .. } => parts.len(),
        _ => 0,
    };
    p.children().into_iter().map(max_cut_arity).fold(here, usize::max)
}

fn has_skip(p: &Process) -> bool {
    use lmrl::pilmrl::MsgKind;
    matches!(p, Process::Msg { kind: MsgKind::SkipIn | MsgKind::SkipOut, .. }) || p.children().into_iter().any(has_skip)
}

const SR_FUEL: usize = 10_000;

struct Traces {
    tensor_steps: Vec<(Process, Process)>,
}

fn criterion_6(traces: &mut Traces) -> Verdict {
    let mut kinds = BTreeSet::new();
    let (mut count, mut steps, mut arity, mut skips) = (0, 0, BTreeSet::new(), 0);
    for p in files(&corpus().join("proc"), "pi") {
        if negative(&p).is_some() {
            continue;
        }
        let doc = parse_document(&fs::read_to_string(&p).unwrap()).map_err(|e| format!("{}: {e}", p.display()))?;
        let Body::Process { env, process } = doc.body else { continue };
        let rep = check_subject_reduction(&process, &env, SR_FUEL).map_err(|e| format!("{}: {e}", file_name(&p)))?;
        ensure(!rep.exhausted, || format!("{} ran out of fuel", file_name(&p)))?;
        ensure(rep.normal_form.cut_count() == 0, || format!("{} ends with cuts", file_name(&p)))?;
        ensure(step(&rep.normal_form).is_none(), || format!("{} normal form still steps", file_name(&p)))?;
        for s in &rep.steps {
            kinds.insert(s.kind.name());
            if s.kind == StepKind::Tensor {
                let alt = s.alternative.clone().ok_or_else(|| format!("{}: tensor step without alternative", file_name(&p)))?;
                traces.tensor_steps.push((s.result.clone(), alt));
            }
        }
        arity.insert(max_cut_arity(&process));
        skips += usize::from(has_skip(&process));
        steps += rep.steps.len();
        count += 1;
    }
    ensure(count >= 15, || format!("only {count} corpus processes"))?;
    let need = [
        StepKind::Tensor,
        StepKind::One,
        StepKind::With,
        StepKind::Msg,
        StepKind::BangCollect,
        StepKind::BangSpawn,
        StepKind::BangReplicate,
    ];
    for k in need {
        ensure(kinds.contains(k.name()), || format!("no {} step in any trace", k.name()))?;
    }
    ensure(skips > 0, || "no process uses a skip prefix".into())?;
    ensure(arity.contains(&3) && arity.contains(&4), || format!("cut arities seen: {arity:?}"))?;
    Ok(format!("{count} processes normalize in {steps} steps; step kinds {kinds:?}; cut arities {arity:?}"))
}

fn criterion_7(traces: &Traces) -> Verdict {
    ensure(!traces.tensor_steps.is_empty(), || "no tensor steps recorded".into())?;
    for (q1, q2) in &traces.tensor_steps {
        ensure(struct_equiv(q1, q2), || format!("alternative not equivalent:\n  {q1}\n  {q2}"))?;
    }
    Ok(format!("{} tensor steps, every alternative equivalent", traces.tensor_steps.len()))
}

fn shown(v: &[Cll2Formula]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

fn criterion_8() -> Verdict {
    let cases = [
        ("|- [{0}] a", "[]", "[a]"),
        ("|- [{1}] a", "[a]", "[]"),
        ("|- [{0,1}] a", "[]", "[1]"),
        ("|- [{}] a", "[1]", "[]"),
        ("|- [{0}] a, [{1}] b", "[b]", "[a]"),
        ("|- [{1}] a, [{0}] b", "[a]", "[b]"),
    ];
    for (src, left, right) in cases {
        let s = parse_sequent(src, RoleBase::Finite(2)).map_err(|e| format!("{src}: {e}"))?;
        let (l, r) = translate_cll2(&s).map_err(|e| format!("{src}: {e}"))?;
        ensure(shown(&l) == left && shown(&r) == right, || format!("{src} gave {} |- {}", shown(&l), shown(&r)))?;
    }
    Ok(format!("{} cases", cases.len()))
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    let mut traces = Traces { tensor_steps: Vec::new() };
    let outcomes = vec![
        run(1, "rule coverage", Some(secs(1)), criterion_1),
        run(2, "exhaustive small-world cuts", Some(secs(60)), criterion_2),
        run(3, "oracle agreement", Some(secs(60)), criterion_3),
        run(4, "duality", None, criterion_4),
        run(5, "eta-cut identity", Some(secs(10)), criterion_5),
        run(6, "subject reduction and progress", Some(secs(10)), || criterion_6(&mut traces)),
        run(7, "tensor confluence", None, || criterion_7(&traces)),
        run(8, "two-role translation", None, criterion_8),
    ];
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.pass).map(|o| format!("{} ({})", o.id, o.name)).collect();
    println!("acceptance: {}/{} criteria pass", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failing criteria: {}", failed.join(", "));
}
