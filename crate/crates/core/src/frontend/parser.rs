use super::lexer::{lex, Tok, Token};
use super::{Body, Document, ParseError};
use crate::derivation::{Calculus, Derivation, Instance, RuleName};
use crate::pilmrl::{Branch, MsgKind, Process, TypeEnv};
use crate::roles::{Role, RoleBase, RoleSet};
use crate::syntax::{Formula, IFormula, Sequent, Term};

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
    pub base: RoleBase,
    /// Calculus fixed by a header or by the first calculus-specific rule name.
    pub calculus: Option<Calculus>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub fn new(src: &str, base: RoleBase) -> PResult<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0, base, calculus: None })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.tok)
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) if self.pos < self.toks.len() => ParseError::at(t.line, t.col, msg),
            Some(t) => ParseError::at(t.line, t.col + 1, format!("{} (at end of input)", msg.into())),
            None => ParseError::at(1, 1, format!("{} (empty input)", msg.into())),
        }
    }

    /// The next token is `s` with no whitespace before it.
    fn at_glued(&self, s: &str) -> bool {
        self.at_sym(s) && self.toks[self.pos].glued
    }

    fn describe(&self) -> String {
        match self.peek() {
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Num(n)) => format!("`{n}`"),
            Some(Tok::Sym(s)) => format!("`{s}`"),
            None => "end of input".to_string(),
        }
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn expect_end(&self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", self.describe())))
        }
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(t)) if *t == s)
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(t)) if t == w)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.at_word(w) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`, found {}", self.describe())))
        }
    }

    fn word(&mut self, w: &str) -> PResult<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{w}`, found {}", self.describe())))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected a name, found {}", self.describe()))),
        }
    }

    fn num(&mut self) -> PResult<u32> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error(format!("expected a number, found {}", self.describe()))),
        }
    }

    fn role(&mut self) -> PResult<Role> {
        let r = self.num()?;
        self.base.check_role(r).map_err(|e| {
            self.pos -= 1;
            self.error(e.to_string())
        })?;
        Ok(r)
    }

    /// `[r]`
    fn role_in_brackets(&mut self) -> PResult<Role> {
        self.sym("[")?;
        let r = self.role()?;
        self.sym("]")?;
        Ok(r)
    }

    /// `{0,1}` or `~{0}`
    pub fn roleset(&mut self) -> PResult<RoleSet> {
        let co = self.eat_sym("~");
        self.sym("{")?;
        let mut rs = Vec::new();
        if !self.at_sym("}") {
            loop {
                rs.push(self.role()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.sym("}")?;
        let set = RoleSet::from_roles(self.base, rs).map_err(|e| self.error(e.to_string()))?;
        Ok(if co { set.complement() } else { set })
    }

    /// `{0},{1,2}`: role sets separated by commas.
    pub fn roleset_list(&mut self) -> PResult<Vec<RoleSet>> {
        let mut out = vec![self.roleset()?];
        while self.eat_sym(",") {
            out.push(self.roleset()?);
        }
        Ok(out)
    }

    pub fn term(&mut self) -> PResult<Term> {
        let f = self.ident()?;
        if !self.at_glued("(") {
            return Ok(Term::var(f));
        }
        self.pos += 1;
        let args = self.comma_list(")", Parser::term)?;
        Ok(Term::fun(f, args))
    }

    fn comma_list<T>(&mut self, close: &str, item: fn(&mut Parser) -> PResult<T>) -> PResult<Vec<T>> {
        let mut out = Vec::new();
        if !self.eat_sym(close) {
            loop {
                out.push(item(self)?);
                if self.eat_sym(close) {
                    break;
                }
                self.sym(",")?;
            }
        }
        Ok(out)
    }

    pub fn formula(&mut self) -> PResult<Formula> {
        let a = self.unary()?;
        let Some(op) = self.binary_op() else { return Ok(a) };
        self.pos += 1;
        let r = self.role_in_brackets()?;
        let b = self.unary()?;
        if self.binary_op().is_some() {
            return Err(self.error("chained binary connectives need parentheses"));
        }
        Ok(if op == "*" { Formula::tensor(r, a, b) } else { Formula::with(r, a, b) })
    }

    fn binary_op(&self) -> Option<&'static str> {
        match (self.peek(), self.peek2()) {
            (Some(Tok::Sym(s @ ("*" | "&"))), Some(Tok::Sym("["))) => Some(s),
            _ => None,
        }
    }

    fn keyword_ahead(&self, w: &str) -> bool {
        self.at_word(w) && matches!(self.peek2(), Some(Tok::Sym("[")))
    }

    fn unary(&mut self) -> PResult<Formula> {
        if self.eat_sym("(") {
            let a = self.formula()?;
            self.sym(")")?;
            return Ok(a);
        }
        if self.eat_sym("!") {
            let r = self.role_in_brackets()?;
            return Ok(Formula::bang(r, self.unary()?));
        }
        if self.keyword_ahead("one") {
            self.pos += 1;
            return Ok(Formula::One(self.role_in_brackets()?));
        }
        if self.keyword_ahead("msg") {
            self.pos += 1;
            self.sym("[")?;
            let r = self.role()?;
            self.sym(",")?;
            let s = self.role()?;
            self.sym("]")?;
            if r == s {
                return Err(self.error("msg needs two distinct roles"));
            }
            return Ok(Formula::msg(r, s, self.unary()?));
        }
        if self.keyword_ahead("all") {
            self.pos += 1;
            let r = self.role_in_brackets()?;
            let x = self.ident()?;
            self.sym(".")?;
            return Ok(Formula::forall(r, x, self.formula()?));
        }
        let p = self.ident()?;
        let args = if self.at_glued("(") {
            self.pos += 1;
            self.comma_list(")", Parser::term)?
        } else {
            vec![]
        };
        Ok(Formula::pred(p, args))
    }

    /// `[R] A`
    pub fn iformula(&mut self) -> PResult<IFormula> {
        self.sym("[")?;
        let roles = self.roleset()?;
        self.sym("]")?;
        Ok(IFormula::new(roles, self.formula()?))
    }

    /// `|- [R1] A1, ..., [Rn] An`
    pub fn sequent(&mut self) -> PResult<Sequent> {
        self.sym("|-")?;
        let mut items = Vec::new();
        if self.at_sym("[") {
            loop {
                items.push(self.iformula()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        Ok(Sequent::new(items))
    }

    /// `(rule NAME [:major i] [:witness t | :eigen x] :concl SEQUENT PREMISES...)`
    pub fn derivation(&mut self) -> PResult<Derivation> {
        self.sym("(")?;
        self.word("rule")?;
        let label = self.ident()?;
        let Some((rule, calc)) = RuleName::parse(&label) else {
            self.pos -= 1;
            return Err(self.error(format!("unknown rule `{label}`")));
        };
        if let Some(c) = calc {
            match self.calculus {
                Some(fixed) if fixed != c => {
                    self.pos -= 1;
                    return Err(self.error(format!("rule `{label}` belongs to the {c} calculus, not {fixed}")));
                }
                _ => self.calculus = Some(c),
            }
        }
        let mut major = 0;
        let mut instance = Instance::None;
        let mut conclusion = None;
        while self.eat_sym(":") {
            let key = self.ident()?;
            match key.as_str() {
                "major" => major = self.num()? as usize,
                "witness" => instance = Instance::Witness(self.term()?),
                "eigen" => instance = Instance::Eigen(self.ident()?),
                "concl" => conclusion = Some(self.sequent()?),
                _ => {
                    self.pos -= 1;
                    return Err(self.error(format!("unknown field `:{key}`")));
                }
            }
        }
        let conclusion = conclusion.ok_or_else(|| self.error("missing `:concl`"))?;
        let mut premises = Vec::new();
        while self.at_sym("(") {
            premises.push(self.derivation()?);
        }
        self.sym(")")?;
        Ok(Derivation { rule, conclusion, major, instance, premises })
    }

    /// `x:[R] A, y:[S] B`
    pub fn env(&mut self) -> PResult<TypeEnv> {
        let mut env = TypeEnv::new();
        if !matches!(self.peek(), Some(Tok::Ident(_))) || !matches!(self.peek2(), Some(Tok::Sym(":"))) {
            return Ok(env);
        }
        loop {
            let x = self.ident()?;
            self.sym(":")?;
            let it = self.iformula()?;
            if env.insert(x.clone(), it).is_some() {
                return Err(self.error(format!("name {x} is declared twice")));
            }
            if !self.eat_sym(",") {
                return Ok(env);
            }
        }
    }

    fn header_role(&mut self) -> PResult<Role> {
        self.sym("@")?;
        self.role()
    }

    fn msg_roles(&mut self) -> PResult<(Role, Role)> {
        self.sym("@")?;
        self.sym("{")?;
        let r = self.role()?;
        self.sym(",")?;
        let s = self.role()?;
        self.sym("}")?;
        if r == s {
            return Err(self.error("msg headers need two distinct roles"));
        }
        Ok((r, s))
    }

    fn cont(&mut self) -> PResult<Box<Process>> {
        self.sym(".")?;
        Ok(Box::new(self.process()?))
    }

    pub fn process(&mut self) -> PResult<Process> {
        if self.eat_sym("(") {
            let p = self.process()?;
            self.sym(")")?;
            return Ok(p);
        }
        if self.eat_word("new") {
            let name = self.ident()?;
            let ann = if self.eat_sym(":") { Some(self.formula()?) } else { None };
            self.sym(".")?;
            self.sym("(")?;
            let mut parts = vec![self.process()?];
            while self.eat_sym("|") {
                parts.push(self.process()?);
            }
            self.sym(")")?;
            return Ok(Process::Cut { name, ann, parts });
        }
        if self.eat_sym("!") {
            let x = self.ident()?;
            let roles = self.roleset()?;
            self.sym("(")?;
            let y = self.ident()?;
            self.sym(")")?;
            let r = self.header_role()?;
            return Ok(Process::Server { x, roles, y, r, body: self.cont()? });
        }
        if self.eat_sym("?") {
            let x = self.ident()?;
            let roles = self.roleset()?;
            self.sym("[")?;
            let y = self.ident()?;
            self.sym("]")?;
            let r = self.header_role()?;
            return Ok(Process::Request { x, roles, y, r, body: self.cont()? });
        }
        let x = self.ident()?;
        let roles = self.roleset()?;
        if self.eat_sym("[") {
            if self.eat_sym("]") {
                let r = self.header_role()?;
                return Ok(Process::OutEmpty { x, roles, r, body: self.cont()? });
            }
            let y = self.ident()?;
            self.sym("]")?;
            return Ok(match y.as_str() {
                "inl" | "inr" => {
                    let branch = if y == "inl" { Branch::Inl } else { Branch::Inr };
                    let r = self.header_role()?;
                    Process::Select { x, roles, r, branch, body: self.cont()? }
                }
                "skip" | "send" => {
                    let kind = if y == "skip" { MsgKind::SkipOut } else { MsgKind::Send };
                    let (r, s) = self.msg_roles()?;
                    Process::Msg { x, roles, kind, r, s, body: self.cont()? }
                }
                _ => {
                    let r = self.header_role()?;
                    Process::OutName { x, roles, y, r, body: self.cont()? }
                }
            });
        }
        self.sym("(")?;
        if self.eat_sym(")") {
            let r = self.header_role()?;
            self.sym(".")?;
            self.word("end")?;
            return Ok(Process::InEmpty { x, roles, r });
        }
        let y = self.ident()?;
        self.sym(")")?;
        match y.as_str() {
            "case" => {
                let r = self.header_role()?;
                self.sym(".")?;
                self.sym("(")?;
                let left = Box::new(self.process()?);
                self.sym(",")?;
                let right = Box::new(self.process()?);
                self.sym(")")?;
                Ok(Process::Case { x, roles, r, left, right })
            }
            "skip" | "recv" => {
                let kind = if y == "skip" { MsgKind::SkipIn } else { MsgKind::Recv };
                let (r, s) = self.msg_roles()?;
                Ok(Process::Msg { x, roles, kind, r, s, body: self.cont()? })
            }
            _ => {
                let r = self.header_role()?;
                self.sym(".")?;
                self.sym("(")?;
                let left = Box::new(self.process()?);
                self.sym("|")?;
                let right = Box::new(self.process()?);
                self.sym(")")?;
                Ok(Process::InName { x, roles, y, r, left, right })
            }
        }
    }

    /// A whole file: `base N`, an optional `calculus conj|disj`, then a
    /// sequent, a derivation, or an `env ... proc ...` pair.
    pub fn document(&mut self) -> PResult<Document> {
        self.word("base")?;
        self.base = if self.eat_word("omega") {
            RoleBase::Omega
        } else {
            let n = self.num()?;
            RoleBase::finite(n).map_err(|e| {
                self.pos -= 1;
                self.error(e.to_string())
            })?
        };
        if self.eat_word("calculus") {
            self.calculus = Some(if self.eat_word("conj") {
                Calculus::Conj
            } else if self.eat_word("disj") {
                Calculus::Disj
            } else {
                return Err(self.error(format!("expected `conj` or `disj`, found {}", self.describe())));
            });
        }
        let body = if self.at_sym("|-") {
            Body::Sequent(self.sequent()?)
        } else if self.at_sym("(") {
            Body::Derivation(self.derivation()?)
        } else if self.at_word("env") || self.at_word("proc") {
            let env = if self.eat_word("env") { self.env()? } else { TypeEnv::new() };
            self.word("proc")?;
            Body::Process { env, process: self.process()? }
        } else {
            return Err(self.error(format!("expected `|-`, `(rule ...)`, `env` or `proc`, found {}", self.describe())));
        };
        self.expect_end()?;
        Ok(Document { base: self.base, calculus: self.calculus.unwrap_or(Calculus::Conj), body })
    }
}
