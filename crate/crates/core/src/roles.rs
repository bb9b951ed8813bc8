//! Role bases and role-set algebra.
//!
//! A role set is a subset of the ambient base (`R_N` or `R_ω`). Sets are
//! stored canonically so that structural equality coincides with set
//! equality: under a finite base every set is `Included`, under `Omega` a
//! set is either a finite `Included` list or a cofinite `Excluded` one.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A single role.
pub type Role = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RoleBase {
    /// Roles `0..n`, `n >= 2`.
    Finite(u32),
    /// All natural numbers.
    Omega,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoleError {
    #[error("a finite role base needs at least two roles, got {0}")]
    BaseTooSmall(u32),
    #[error("role {role} is outside the base {base}")]
    OutOfBase { role: Role, base: RoleBase },
    #[error("role sets over different bases ({0} and {1})")]
    MixedBases(RoleBase, RoleBase),
}

impl RoleBase {
    pub fn finite(n: u32) -> Result<Self, RoleError> {
        if n < 2 {
            return Err(RoleError::BaseTooSmall(n));
        }
        Ok(RoleBase::Finite(n))
    }

    pub fn contains(&self, r: Role) -> bool {
        match self {
            RoleBase::Finite(n) => r < *n,
            RoleBase::Omega => true,
        }
    }

    pub fn check_role(&self, r: Role) -> Result<(), RoleError> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(RoleError::OutOfBase { role: r, base: *self })
        }
    }

    /// The full set of the base.
    pub fn full(&self) -> RoleSet {
        RoleSet::empty(*self).complement()
    }

    pub fn empty(&self) -> RoleSet {
        RoleSet::empty(*self)
    }

    /// Singleton role sets `{0}, {1}, ...` for a finite base.
    pub fn singletons(&self) -> Option<Vec<RoleSet>> {
        match self {
            RoleBase::Finite(n) => Some((0..*n).map(|r| RoleSet::singleton(*self, r)).collect()),
            RoleBase::Omega => None,
        }
    }

    /// Every subset of a finite base, in binary-counting order.
    pub fn all_subsets(&self) -> Option<Vec<RoleSet>> {
        match self {
            RoleBase::Finite(n) if *n <= 16 => Some(
                (0u32..(1 << n))
                    .map(|mask| {
                        RoleSet::from_roles(*self, (0..*n).filter(|r| mask & (1 << r) != 0))
                            .expect("roles are in range")
                    })
                    .collect(),
            ),
            _ => None,
        }
    }
}

impl fmt::Display for RoleBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoleBase::Finite(n) => write!(f, "{n}"),
            RoleBase::Omega => write!(f, "omega"),
        }
    }
}

/// A finite set of roles. Roles below 64 live in a bitmask; the tree is
/// only used once a larger role appears, so equality stays structural.
fn bit_roles(mut bits: u64) -> impl Iterator<Item = Role> {
    std::iter::from_fn(move || {
        if bits == 0 {
            return None;
        }
        let r = bits.trailing_zeros();
        bits &= bits - 1;
        Some(r)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Roles {
    Small(u64),
    Large(BTreeSet<Role>),
}

impl Roles {
    const EMPTY: Roles = Roles::Small(0);

    fn from_iter(it: impl IntoIterator<Item = Role>) -> Roles {
        let mut bits = 0u64;
        let mut large = BTreeSet::new();
        for r in it {
            if r < 64 {
                bits |= 1 << r;
            } else {
                large.insert(r);
            }
        }
        if large.is_empty() {
            Roles::Small(bits)
        } else {
            large.extend(bit_roles(bits));
            Roles::Large(large)
        }
    }

    fn to_set(&self) -> BTreeSet<Role> {
        match self {
            Roles::Small(b) => bit_roles(*b).collect(),
            Roles::Large(s) => s.clone(),
        }
    }

    fn contains(&self, r: Role) -> bool {
        match self {
            Roles::Small(b) => r < 64 && b & (1 << r) != 0,
            Roles::Large(s) => s.contains(&r),
        }
    }

    fn is_empty(&self) -> bool {
        matches!(self, Roles::Small(0))
    }

    fn and(&self, o: &Roles) -> Roles {
        match (self, o) {
            (Roles::Small(a), Roles::Small(b)) => Roles::Small(a & b),
            _ => Roles::from_iter(self.to_set().intersection(&o.to_set()).copied()),
        }
    }

    fn or(&self, o: &Roles) -> Roles {
        match (self, o) {
            (Roles::Small(a), Roles::Small(b)) => Roles::Small(a | b),
            _ => Roles::from_iter(self.to_set().union(&o.to_set()).copied()),
        }
    }

    fn minus(&self, o: &Roles) -> Roles {
        match (self, o) {
            (Roles::Small(a), Roles::Small(b)) => Roles::Small(a & !b),
            _ => Roles::from_iter(self.to_set().difference(&o.to_set()).copied()),
        }
    }

    /// `0..n` without the members of `self`.
    fn complement_below(&self, n: u32) -> Roles {
        match self {
            Roles::Small(b) if n <= 64 => {
                let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
                Roles::Small(full & !b)
            }
            _ => Roles::from_iter((0..n).filter(|&r| !self.contains(r))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Rep {
    Included(Roles),
    Excluded(Roles),
}

/// A subset of a role base.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoleSet {
    base: RoleBase,
    rep: Rep,
}

impl RoleSet {
    pub fn empty(base: RoleBase) -> Self {
        RoleSet { base, rep: Rep::Included(Roles::EMPTY) }
    }

    pub fn singleton(base: RoleBase, r: Role) -> Self {
        RoleSet { base, rep: Rep::Included(Roles::from_iter([r])) }
    }

    pub fn from_roles(base: RoleBase, roles: impl IntoIterator<Item = Role>) -> Result<Self, RoleError> {
        let mut set = Vec::new();
        for r in roles {
            base.check_role(r)?;
            set.push(r);
        }
        Ok(RoleSet { base, rep: Rep::Included(Roles::from_iter(set)) })
    }

    /// The complement of the listed roles, i.e. `~{...}` in text form.
    pub fn excluding(base: RoleBase, roles: impl IntoIterator<Item = Role>) -> Result<Self, RoleError> {
        Ok(Self::from_roles(base, roles)?.complement())
    }

    pub fn base(&self) -> RoleBase {
        self.base
    }

    pub fn contains(&self, r: Role) -> bool {
        match &self.rep {
            Rep::Included(s) => s.contains(r),
            Rep::Excluded(s) => self.base.contains(r) && !s.contains(r),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(&self.rep, Rep::Included(s) if s.is_empty())
    }

    pub fn is_full(&self) -> bool {
        self.complement().is_empty()
    }

    /// `Some(finite listing)` for `Included` sets, `None` for cofinite ones.
    pub fn finite_roles(&self) -> Option<BTreeSet<Role>> {
        match &self.rep {
            Rep::Included(s) => Some(s.to_set()),
            Rep::Excluded(_) => None,
        }
    }

    /// The finite roles a cofinite set leaves out.
    pub fn excluded_roles(&self) -> Option<BTreeSet<Role>> {
        match &self.rep {
            Rep::Excluded(s) => Some(s.to_set()),
            Rep::Included(_) => None,
        }
    }

    pub fn complement(&self) -> RoleSet {
        let rep = match (&self.rep, self.base) {
            (Rep::Included(s), RoleBase::Finite(n)) => Rep::Included(s.complement_below(n)),
            (Rep::Included(s), RoleBase::Omega) => Rep::Excluded(s.clone()),
            (Rep::Excluded(s), _) => Rep::Included(s.clone()),
        };
        RoleSet { base: self.base, rep }
    }

    fn same_base(&self, other: &RoleSet) -> Result<(), RoleError> {
        if self.base == other.base {
            Ok(())
        } else {
            Err(RoleError::MixedBases(self.base, other.base))
        }
    }

    pub fn intersect(&self, other: &RoleSet) -> Result<RoleSet, RoleError> {
        self.same_base(other)?;
        let rep = match (&self.rep, &other.rep) {
            (Rep::Included(a), Rep::Included(b)) => Rep::Included(a.and(b)),
            (Rep::Included(a), Rep::Excluded(b)) | (Rep::Excluded(b), Rep::Included(a)) => Rep::Included(a.minus(b)),
            (Rep::Excluded(a), Rep::Excluded(b)) => Rep::Excluded(a.or(b)),
        };
        Ok(RoleSet { base: self.base, rep })
    }

    pub fn union(&self, other: &RoleSet) -> Result<RoleSet, RoleError> {
        Ok(self.complement().intersect(&other.complement())?.complement())
    }

    pub fn is_disjoint(&self, other: &RoleSet) -> Result<bool, RoleError> {
        Ok(self.intersect(other)?.is_empty())
    }

    pub fn is_subset(&self, other: &RoleSet) -> Result<bool, RoleError> {
        Ok(self.intersect(&other.complement())?.is_empty())
    }
}

/// Union of pairwise disjoint sets; `Ok(None)` signals an overlap.
pub fn disjoint_union(sets: &[RoleSet]) -> Result<Option<RoleSet>, RoleError> {
    let Some(first) = sets.first() else {
        return Ok(None);
    };
    let mut acc = RoleSet::empty(first.base());
    for s in sets {
        if !acc.is_disjoint(s)? {
            return Ok(None);
        }
        acc = acc.union(s)?;
    }
    Ok(Some(acc))
}

/// True iff the sets are pairwise disjoint and cover the whole base.
pub fn is_partition_of_full(sets: &[RoleSet]) -> Result<bool, RoleError> {
    Ok(disjoint_union(sets)?.is_some_and(|u| u.is_full()))
}

/// True iff the complements of the sets partition the base.
pub fn complements_partition_full(sets: &[RoleSet]) -> Result<bool, RoleError> {
    let comps: Vec<RoleSet> = sets.iter().map(RoleSet::complement).collect();
    is_partition_of_full(&comps)
}

impl fmt::Display for RoleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (prefix, set) = match &self.rep {
            Rep::Included(s) => ("", s),
            Rep::Excluded(s) => ("~", s),
        };
        let body: Vec<String> = set.to_set().iter().map(|r| r.to_string()).collect();
        write!(f, "{prefix}{{{}}}", body.join(","))
    }
}
