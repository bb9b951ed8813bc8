use std::fmt::Display;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser as ClapParser, Subcommand, ValueEnum};

use lmrl::cutelim::{self, CutPart};
use lmrl::derivation::{check, Calculus, Derivation};
use lmrl::frontend::{self, print_derivation, print_env, print_typing, Body, Document};
use lmrl::pilmrl::{self, Process, TypeEnv};
use lmrl::roles::RoleBase;
use lmrl::syntax::{Formula, Sequent};

#[derive(ClapParser)]
#[command(name = "lmrl", about = "Check, cut-eliminate and run linear multirole logic proofs and processes")]
struct Cli {
    /// Flat `key: value` output instead of pretty text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CalcArg {
    Conj,
    Disj,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check derivation files; a bare sequent is checked as an identity axiom.
    Check {
        #[arg(required = true)]
        files: Vec<String>,
        #[arg(long)]
        calc: Option<CalcArg>,
    },
    /// Bounded proof search for the sequent in a file.
    Prove {
        file: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Eta-expanded identity of a formula over the given role sets.
    Eta {
        #[arg(long)]
        base: String,
        #[arg(long)]
        formula: String,
        /// Comma-separated role sets, e.g. `{0},{1}`.
        #[arg(long)]
        parts: String,
        #[arg(long, value_enum, default_value = "conj")]
        calc: CalcArg,
    },
    /// Cut away `[∅]`-occurrences: `FILE:i,j`.
    Cut1 { part: String },
    /// Binary cut of single occurrences: `FILE:i FILE:j`.
    Cut2 { left: String, right: String },
    /// Generalized binary cut, several occurrences per side: `FILE:i,j FILE:k`.
    Cutspill { left: String, right: String },
    /// n-ary cut: `FILE:i` per part.
    Cutn {
        #[arg(required = true)]
        parts: Vec<String>,
    },
    /// Split the occurrence `FILE:i` of `[R1 ∪ R2] A` into `[R1] A, [R2] A`.
    Split {
        part: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Complement every role set, moving to the other calculus.
    Dualize { file: String },
    /// Two-role reading of a sequent over base 2.
    Cll2 { file: String },
    /// Typecheck a process file.
    Typecheck { file: String },
    /// Perform up to K reduction steps.
    Step {
        file: String,
        #[arg(short = 'n', default_value_t = 1)]
        n: usize,
    },
    /// Reduce to normal form.
    Run {
        file: String,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
        #[arg(long)]
        trace: bool,
    },
    /// Reduce while re-typechecking after every step.
    SrCheck {
        file: String,
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
    },
}

enum Failure {
    /// Bad input text or arguments: exit 2.
    Usage(String),
    /// Well-formed input that is wrong: exit 1.
    Semantic(Report),
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// Output as ordered fields; the pretty text is the concatenation of the
/// `text` parts.
#[derive(Default)]
struct Report {
    fields: Vec<(String, String)>,
    text: String,
}

impl Report {
    fn field(&mut self, k: &str, v: impl Display) -> &mut Self {
        self.fields.push((k.to_string(), v.to_string()));
        self
    }

    fn line(&mut self, s: impl Display) -> &mut Self {
        self.text.push_str(&s.to_string());
        self.text.push('\n');
        self
    }

    fn emit(&self, json: bool) {
        if json {
            for (k, v) in &self.fields {
                println!("{k}: {}", v.replace('\\', "\\\\").replace('\n', "\\n"));
            }
        } else {
            print!("{}", self.text);
        }
    }
}

fn semantic(mut r: Report, msg: impl Display) -> Failure {
    r.field("status", "fail").field("error", &msg).line(format!("error: {msg}"));
    Failure::Semantic(r)
}

fn read(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(usage)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("{path}: {e}")))
}

fn load(path: &str) -> Result<Document, Failure> {
    frontend::parse_document(&read(path)?).map_err(|e| usage(format!("{path}:{e}")))
}

fn load_derivation(path: &str) -> Result<(Derivation, Calculus), Failure> {
    let doc = load(path)?;
    match doc.body {
        Body::Derivation(d) => Ok((d, doc.calculus)),
        _ => Err(usage(format!("{path}: expected a derivation"))),
    }
}

fn load_sequent(path: &str) -> Result<(Sequent, Document), Failure> {
    let doc = load(path)?;
    match &doc.body {
        Body::Sequent(s) => Ok((s.clone(), doc)),
        Body::Derivation(d) => Ok((d.conclusion.clone(), doc)),
        _ => Err(usage(format!("{path}: expected a sequent"))),
    }
}

fn load_process(path: &str) -> Result<(Process, TypeEnv), Failure> {
    let doc = load(path)?;
    match doc.body {
        Body::Process { env, process } => Ok((process, env)),
        _ => Err(usage(format!("{path}: expected `env ... proc ...`"))),
    }
}

/// `FILE:i,j` into the derivation and its occurrence list.
fn load_part(spec: &str) -> Result<(CutPart, Calculus), Failure> {
    let (path, occs) = spec.rsplit_once(':').ok_or_else(|| usage(format!("{spec}: expected FILE:OCCURRENCES")))?;
    let occs = occs
        .split(',')
        .map(|o| o.trim().parse::<usize>().map_err(|_| usage(format!("{spec}: bad occurrence {o:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let (derivation, calc) = load_derivation(path)?;
    Ok((CutPart { derivation, occs }, calc))
}

fn parse_base(s: &str) -> Result<RoleBase, Failure> {
    if s == "omega" {
        return Ok(RoleBase::Omega);
    }
    let n: u32 = s.parse().map_err(|_| usage(format!("bad role base {s:?}")))?;
    RoleBase::finite(n).map_err(usage)
}

fn calc_of(c: CalcArg) -> Calculus {
    match c {
        CalcArg::Conj => Calculus::Conj,
        CalcArg::Disj => Calculus::Disj,
    }
}

fn derivation_report(d: &Derivation, calc: Calculus) -> Report {
    let mut r = Report::default();
    let text = print_derivation(d, calc);
    r.field("status", "ok")
        .field("calculus", calc)
        .field("conclusion", &d.conclusion)
        .field("height", d.height())
        .field("derivation", &text)
        .line(&text);
    r
}

fn cut_result(res: Result<Derivation, cutelim::CutError>, calc: Calculus) -> Result<Report, Failure> {
    let d = res.map_err(|e| semantic(Report::default(), e))?;
    check(&d, calc).map_err(|e| semantic(Report::default(), format!("internal: result fails the checker: {e}")))?;
    Ok(derivation_report(&d, calc))
}

fn run(cmd: Cmd) -> Result<Report, Failure> {
    match cmd {
        Cmd::Check { files, calc } => {
            let mut r = Report::default();
            let mut failed = false;
            for f in &files {
                let doc = load(f)?;
                let c = calc.map(calc_of).unwrap_or(doc.calculus);
                let d = match doc.body {
                    Body::Derivation(d) => d,
                    Body::Sequent(s) => Derivation::id(s),
                    Body::Process { .. } => return Err(usage(format!("{f}: a process; use `typecheck`"))),
                };
                match check(&d, c) {
                    Ok(()) => {
                        r.field("file", f).field("status", "ok").field("conclusion", &d.conclusion);
                        r.line(format!("{f}: ok ({c}) {}", d.conclusion));
                    }
                    Err(e) => {
                        failed = true;
                        r.field("file", f).field("status", "fail").field("error", &e);
                        r.line(format!("{f}: invalid ({c}) {e}"));
                    }
                }
            }
            if failed {
                Err(Failure::Semantic(r))
            } else {
                Ok(r)
            }
        }
        Cmd::Prove { file, depth } => {
            let (seq, doc) = load_sequent(&file)?;
            match cutelim::prove_bounded(&seq, doc.calculus, depth, &[]) {
                Some(d) => Ok(derivation_report(&d, doc.calculus)),
                None => Err(semantic(Report::default(), format!("no proof of {seq} within depth {depth}"))),
            }
        }
        Cmd::Eta { base, formula, parts, calc } => {
            let b = parse_base(&base)?;
            let a: Formula = frontend::parse_formula(&formula, b).map_err(|e| usage(format!("--formula:{e}")))?;
            let rs = frontend::parse_rolesets(&parts, b).map_err(|e| usage(format!("--parts:{e}")))?;
            let calc = calc_of(calc);
            let res = match calc {
                Calculus::Conj => cutelim::eta_expand(&a, &rs),
                Calculus::Disj => cutelim::eta_expand_disj(&a, &rs),
            };
            cut_result(res, calc)
        }
        Cmd::Cut1 { part } => {
            let (p, calc) = load_part(&part)?;
            let res = match calc {
                Calculus::Conj => cutelim::cut1(&p.derivation, &p.occs),
                Calculus::Disj => cutelim::fulset_disj(&p.derivation, &p.occs),
            };
            cut_result(res, calc)
        }
        Cmd::Cut2 { left, right } => {
            let ((a, calc), (b, _)) = (load_part(&left)?, load_part(&right)?);
            let [o1] = a.occs[..] else { return Err(usage("cut2 takes one occurrence per side")) };
            let [o2] = b.occs[..] else { return Err(usage("cut2 takes one occurrence per side")) };
            let res = match calc {
                Calculus::Conj => cutelim::cut2(&a.derivation, o1, &b.derivation, o2),
                Calculus::Disj => cutelim::cut2_disj(&a.derivation, o1, &b.derivation, o2),
            };
            cut_result(res, calc)
        }
        Cmd::Cutspill { left, right } => {
            let ((a, calc), (b, _)) = (load_part(&left)?, load_part(&right)?);
            let res = match calc {
                Calculus::Conj => cutelim::cut2_spill(&a, &b),
                Calculus::Disj => cutelim::cut2_spill_disj(&a, &b),
            };
            cut_result(res, calc)
        }
        Cmd::Cutn { parts } => {
            let loaded = parts.iter().map(|p| load_part(p)).collect::<Result<Vec<_>, _>>()?;
            let calc = loaded[0].1;
            let ps: Vec<CutPart> = loaded.into_iter().map(|(p, _)| p).collect();
            let res = match calc {
                Calculus::Conj => cutelim::cutn(&ps),
                Calculus::Disj => cutelim::cutn_disj(&ps),
            };
            cut_result(res, calc)
        }
        Cmd::Split { part, left, right } => {
            let (p, calc) = load_part(&part)?;
            let [occ] = p.occs[..] else { return Err(usage("split takes one occurrence")) };
            let base = p.derivation.conclusion.items.get(occ).map(|i| i.roles.base()).unwrap_or(RoleBase::Omega);
            let r1 = frontend::parse_rolesets(&left, base).map_err(|e| usage(format!("--left:{e}")))?;
            let r2 = frontend::parse_rolesets(&right, base).map_err(|e| usage(format!("--right:{e}")))?;
            let ([r1], [r2]) = (&r1[..], &r2[..]) else { return Err(usage("--left and --right take one role set each")) };
            let res = match calc {
                Calculus::Conj => cutelim::split(&p.derivation, occ, r1, r2),
                Calculus::Disj => cutelim::cosplit_disj(&p.derivation, occ, r1, r2),
            };
            cut_result(res, calc)
        }
        Cmd::Dualize { file } => {
            let (d, calc) = load_derivation(&file)?;
            cut_result(Ok(d.dualize()), calc.dual())
        }
        Cmd::Cll2 { file } => {
            let (seq, _) = load_sequent(&file)?;
            let (left, right) = cutelim::translate_cll2(&seq).map_err(|e| semantic(Report::default(), e))?;
            let show = |v: &[cutelim::Cll2Formula]| v.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ");
            let mut r = Report::default();
            r.field("status", "ok").field("left", show(&left)).field("right", show(&right));
            r.line(format!("{} |- {}", show(&left), show(&right)));
            Ok(r)
        }
        Cmd::Typecheck { file } => {
            let (p, env) = load_process(&file)?;
            let td = pilmrl::typecheck(&p, &env).map_err(|e| semantic(Report::default(), e))?;
            let mut r = Report::default();
            let tree = print_typing(&td);
            r.field("status", "ok").field("env", print_env(&env)).field("height", td.height()).field("derivation", tree.trim_end());
            r.text = tree;
            Ok(r)
        }
        Cmd::Step { file, n } => {
            let (p, _) = load_process(&file)?;
            let mut r = Report::default();
            let mut cur = p;
            let mut taken = 0;
            while taken < n {
                let Some(s) = pilmrl::step(&cur) else { break };
                taken += 1;
                r.field("step", format!("{taken} {} {}", s.kind, s.cut)).field("process", &s.result);
                r.line(format!("[{taken}] {} on {}: {}", s.kind, s.cut, s.result));
                cur = s.result;
            }
            if taken == 0 {
                r.line("normal form");
            }
            r.field("status", "ok").field("steps", taken).field("normal", pilmrl::step(&cur).is_none());
            Ok(r)
        }
        Cmd::Run { file, fuel, trace } => {
            let (p, _) = load_process(&file)?;
            let n = pilmrl::normalize(&p, fuel);
            let mut r = Report::default();
            if trace {
                for (i, s) in n.steps.iter().enumerate() {
                    r.line(format!("[{}] {} on {}: {}", i + 1, s.kind, s.cut, s.result));
                }
            }
            r.field("steps", n.steps.len()).field("exhausted", n.exhausted).field("process", &n.process);
            r.line(&n.process).line(format!("{} steps{}", n.steps.len(), if n.exhausted { ", fuel exhausted" } else { "" }));
            if n.exhausted {
                return Err(semantic(r, format!("fuel {fuel} exhausted")));
            }
            r.field("status", "ok");
            Ok(r)
        }
        Cmd::SrCheck { file, fuel } => {
            let (p, env) = load_process(&file)?;
            let rep = pilmrl::check_subject_reduction(&p, &env, fuel).map_err(|e| semantic(Report::default(), e))?;
            let mut r = Report::default();
            r.field("steps", rep.steps.len())
                .field("exhausted", rep.exhausted)
                .field("tensor_confluent", rep.tensor_confluent())
                .field("process", &rep.normal_form);
            r.line(format!("subject reduction holds over {} steps", rep.steps.len())).line(&rep.normal_form);
            if rep.exhausted {
                return Err(semantic(r, format!("fuel {fuel} exhausted")));
            }
            r.field("status", "ok");
            Ok(r)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(r) => {
            r.emit(cli.json);
            ExitCode::SUCCESS
        }
        Err(Failure::Semantic(r)) => {
            r.emit(cli.json);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            if cli.json {
                println!("status: usage\nerror: {msg}");
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
    }
}
