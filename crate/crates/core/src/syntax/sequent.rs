use std::collections::BTreeSet;
use std::fmt;

use crate::roles::{RoleBase, RoleError, RoleSet};
use crate::syntax::formula::Formula;
use crate::syntax::term::Term;

/// A role-interpreted formula `[R]A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IFormula {
    pub roles: RoleSet,
    pub body: Formula,
}

impl IFormula {
    pub fn new(roles: RoleSet, body: Formula) -> Self {
        IFormula { roles, body }
    }

    pub fn with_body(&self, body: Formula) -> Self {
        IFormula { roles: self.roles.clone(), body }
    }

    pub fn with_roles(&self, roles: RoleSet) -> Self {
        IFormula { roles, body: self.body.clone() }
    }

    pub fn complement(&self) -> Self {
        self.with_roles(self.roles.complement())
    }

    pub fn subst(&self, x: &str, t: &Term) -> Self {
        self.with_body(self.body.subst(x, t))
    }

    pub fn key(&self) -> String {
        format!("{}{}", self.roles, self.body.key())
    }

    /// `[R]!_r B` with `r ∉ R`: the LMRL spelling of a `?`-formula.
    pub fn is_whynot(&self) -> bool {
        matches!(&self.body, Formula::Bang(r, _) if !self.roles.contains(*r))
    }

    pub fn check_base(&self, base: RoleBase) -> Result<(), RoleError> {
        if self.roles.base() != base {
            return Err(RoleError::MixedBases(self.roles.base(), base));
        }
        self.body.check_roles(base)
    }
}

impl fmt::Display for IFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.roles, self.body)
    }
}

/// A sequent: a list of i-formula occurrences compared up to permutation.
#[derive(Debug, Clone, Default)]
pub struct Sequent {
    pub items: Vec<IFormula>,
}

impl Sequent {
    pub fn new(items: Vec<IFormula>) -> Self {
        Sequent { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn free_term_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for it in &self.items {
            it.body.free_vars_into(&mut out);
        }
        out
    }

    /// Order-independent canonical key.
    pub fn key(&self) -> String {
        let mut ks: Vec<String> = self.items.iter().map(IFormula::key).collect();
        ks.sort();
        ks.join(";")
    }

    /// Position of the first occurrence of `it` not in `used`.
    pub fn find_unused(&self, it: &IFormula, used: &[bool]) -> Option<usize> {
        self.items.iter().enumerate().position(|(i, x)| !used[i] && x == it)
    }

    /// Remove one occurrence of each of `its`, or `None` if some is missing.
    pub fn remove_all(&self, its: &[IFormula]) -> Option<Sequent> {
        let mut used = vec![false; self.items.len()];
        for it in its {
            let i = self.find_unused(it, &used)?;
            used[i] = true;
        }
        Some(Sequent::new(
            self.items.iter().zip(&used).filter(|(_, u)| !**u).map(|(x, _)| x.clone()).collect(),
        ))
    }

    pub fn plus(&self, more: impl IntoIterator<Item = IFormula>) -> Sequent {
        let mut items = self.items.clone();
        items.extend(more);
        Sequent::new(items)
    }

    pub fn concat(&self, other: &Sequent) -> Sequent {
        self.plus(other.items.iter().cloned())
    }

    pub fn complement(&self) -> Sequent {
        Sequent::new(self.items.iter().map(IFormula::complement).collect())
    }

    pub fn subst(&self, x: &str, t: &Term) -> Sequent {
        Sequent::new(self.items.iter().map(|it| it.subst(x, t)).collect())
    }

    pub fn check_base(&self, base: RoleBase) -> Result<(), RoleError> {
        self.items.iter().try_for_each(|it| it.check_base(base))
    }
}

impl PartialEq for Sequent {
    fn eq(&self, other: &Self) -> bool {
        if self.items.len() != other.items.len() {
            return false;
        }
        let mut used = vec![false; other.items.len()];
        for it in &self.items {
            match other.find_unused(it, &used) {
                Some(i) => used[i] = true,
                None => return false,
            }
        }
        true
    }
}

impl Eq for Sequent {}

impl std::hash::Hash for Sequent {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|-")?;
        for (i, it) in self.items.iter().enumerate() {
            write!(f, "{}{it}", if i == 0 { " " } else { ", " })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rs: &[u32]) -> RoleSet {
        RoleSet::from_roles(RoleBase::Finite(2), rs.iter().copied()).unwrap()
    }

    fn px() -> Formula {
        Formula::pred("p", vec![Term::var("x")])
    }

    #[test]
    fn free_term_vars_examples() {
        let s = Sequent::new(vec![IFormula::new(set(&[0]), px())]);
        assert_eq!(s.free_term_vars(), BTreeSet::from(["x".to_string()]));
        let s = Sequent::new(vec![IFormula::new(set(&[0]), Formula::forall(0, "x", px()))]);
        assert!(s.free_term_vars().is_empty());
        assert!(Sequent::default().free_term_vars().is_empty());
    }

    #[test]
    fn permutation_equality() {
        let a = IFormula::new(set(&[0]), Formula::atom("a"));
        let b = IFormula::new(set(&[1]), Formula::atom("a"));
        let s1 = Sequent::new(vec![a.clone(), b.clone(), a.clone()]);
        let s2 = Sequent::new(vec![b.clone(), a.clone(), a.clone()]);
        let s3 = Sequent::new(vec![b.clone(), b.clone(), a.clone()]);
        assert_eq!(s1, s2);
        assert_ne!(s1, s3);
        assert_eq!(s1.key(), s2.key());
        assert_eq!(s1.remove_all(&[a.clone(), b.clone()]), Some(Sequent::new(vec![a.clone()])));
        assert_eq!(s3.remove_all(&[a.clone(), a]), None);
    }

    #[test]
    fn whynot_detection() {
        assert!(IFormula::new(set(&[0]), Formula::bang(1, Formula::atom("a"))).is_whynot());
        assert!(!IFormula::new(set(&[1]), Formula::bang(1, Formula::atom("a"))).is_whynot());
    }
}
