//! Term representation.
//!
//! Terms are immutable trees shared through [`Arc`]. Variables do not carry
//! their binding inline: a [`Term::Var`] or [`Term::EVar`] names a cell in the
//! engine's [`Store`](crate::store::Store), which is where bindings, display
//! names and the interclausal flag live.

use std::fmt;
use std::sync::Arc;

/// An atom name. Cheap to clone; equality short-circuits on pointer identity.
#[derive(Clone, Eq, PartialOrd, Ord)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Self {
        Atom(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl std::hash::Hash for Atom {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl PartialEq<str> for Atom {
    fn eq(&self, other: &str) -> bool {
        &*self.0 == other
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom::new(s)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Index of a binding cell. Lower ids are older cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Atom(Atom),
    Int(i64),
    /// Clause-local logic variable.
    Var(VarId),
    /// Interclausal variable: shared by name across the whole program.
    EVar(VarId),
    Compound(Arc<Compound>),
}

#[derive(Debug, PartialEq)]
pub struct Compound {
    pub functor: Atom,
    pub args: Box<[Term]>,
    /// No variable occurs anywhere below this node. Such subterms can be
    /// shared instead of copied.
    pub ground: bool,
}

/// `(name, arity)` identifying a predicate or functor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PredKey {
    pub name: Atom,
    pub arity: usize,
}

impl PredKey {
    pub fn new(name: &str, arity: usize) -> Self {
        PredKey { name: Atom::new(name), arity }
    }
}

impl fmt::Display for PredKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

pub const NIL: &str = "[]";
pub const CONS: &str = ".";

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(Atom::new(name))
    }

    /// Builds a compound, or an atom when `args` is empty.
    pub fn compound(functor: impl Into<Atom>, args: Vec<Term>) -> Term {
        let functor = functor.into();
        if args.is_empty() {
            return Term::Atom(functor);
        }
        let ground = args.iter().all(Term::is_ground_shallow);
        Term::Compound(Arc::new(Compound { functor, args: args.into_boxed_slice(), ground }))
    }

    pub fn nil() -> Term {
        Term::atom(NIL)
    }

    pub fn cons(head: Term, tail: Term) -> Term {
        Term::compound(CONS, vec![head, tail])
    }

    /// Builds `[t1, ..., tn | tail]`.
    pub fn list_with_tail(items: impl IntoIterator<Item = Term, IntoIter: DoubleEndedIterator>, tail: Term) -> Term {
        items.into_iter().rev().fold(tail, |acc, t| Term::cons(t, acc))
    }

    pub fn list(items: impl IntoIterator<Item = Term, IntoIter: DoubleEndedIterator>) -> Term {
        Term::list_with_tail(items, Term::nil())
    }

    /// True when the term contains no variable cells at all. Only looks at the
    /// cached flag for compounds.
    fn is_ground_shallow(&self) -> bool {
        match self {
            Term::Atom(_) | Term::Int(_) => true,
            Term::Var(_) | Term::EVar(_) => false,
            Term::Compound(c) => c.ground,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_) | Term::EVar(_))
    }

    pub fn var_id(&self) -> Option<VarId> {
        match self {
            Term::Var(v) | Term::EVar(v) => Some(*v),
            _ => None,
        }
    }

    /// Functor name and arity for atoms and compounds.
    pub fn functor(&self) -> Option<(&Atom, usize)> {
        match self {
            Term::Atom(a) => Some((a, 0)),
            Term::Compound(c) => Some((&c.functor, c.args.len())),
            _ => None,
        }
    }

    pub fn key(&self) -> Option<PredKey> {
        self.functor().map(|(name, arity)| PredKey { name: name.clone(), arity })
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Compound(c) => &c.args,
            _ => &[],
        }
    }

    pub fn is_atom(&self, name: &str) -> bool {
        matches!(self, Term::Atom(a) if a == name)
    }

    /// Matches a compound with the given name and arity.
    pub fn is_functor(&self, name: &str, arity: usize) -> bool {
        matches!(self, Term::Compound(c) if c.args.len() == arity && c.functor == *name)
    }
}
