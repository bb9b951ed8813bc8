use std::collections::BTreeSet;
use std::fmt;

/// A first-order term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Fun(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn fun(sym: impl Into<String>, args: Vec<Term>) -> Self {
        Term::Fun(sym.into(), args)
    }

    pub fn free_vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Fun(_, args) => args.iter().for_each(|a| a.free_vars_into(out)),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_vars_into(&mut out);
        out
    }

    pub fn mentions(&self, x: &str) -> bool {
        match self {
            Term::Var(v) => v == x,
            Term::Fun(_, args) => args.iter().any(|a| a.mentions(x)),
        }
    }

    pub fn subst(&self, x: &str, t: &Term) -> Term {
        match self {
            Term::Var(v) if v == x => t.clone(),
            Term::Var(_) => self.clone(),
            Term::Fun(f, args) => Term::Fun(f.clone(), args.iter().map(|a| a.subst(x, t)).collect()),
        }
    }

    /// All subterms, outermost first.
    pub fn subterms_into(&self, out: &mut Vec<Term>) {
        if !out.contains(self) {
            out.push(self.clone());
        }
        if let Term::Fun(_, args) = self {
            args.iter().for_each(|a| a.subterms_into(out));
        }
    }

    /// Function symbols with their arities.
    pub fn signature_into(&self, out: &mut Vec<(String, usize)>) {
        if let Term::Fun(f, args) = self {
            out.push((f.clone(), args.len()));
            args.iter().for_each(|a| a.signature_into(out));
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Fun(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}
