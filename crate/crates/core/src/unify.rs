//! Unification, clause renaming, term copying and the standard order of terms.
//!
//! Renaming and copying give fresh cells to clause-local variables only. An
//! interclausal variable is never duplicated: every instance of a clause sees
//! the same cell, which is what makes its bindings visible program-wide.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use crate::store::Store;
use crate::term::{Atom, Term, VarId};

/// Unifies two terms, trailing every binding.
///
/// On failure the store is restored to its state before the call.
pub fn unify(store: &mut Store, a: &Term, b: &Term, occurs_check: bool) -> bool {
    let mark = store.mark();
    let mut stack = vec![(a.clone(), b.clone())];
    while let Some((x, y)) = stack.pop() {
        let x = store.deref(&x);
        let y = store.deref(&y);
        let ok = match (&x, &y) {
            (Term::Var(v) | Term::EVar(v), Term::Var(w) | Term::EVar(w)) => {
                if v != w {
                    // Younger cell points at the older one.
                    if v > w {
                        store.bind(*v, y.clone());
                    } else {
                        store.bind(*w, x.clone());
                    }
                }
                true
            }
            (Term::Var(v) | Term::EVar(v), other) | (other, Term::Var(v) | Term::EVar(v)) => {
                if occurs_check && occurs(store, *v, other) {
                    false
                } else {
                    store.bind(*v, other.clone());
                    true
                }
            }
            (Term::Atom(p), Term::Atom(q)) => p == q,
            (Term::Int(p), Term::Int(q)) => p == q,
            (Term::Compound(p), Term::Compound(q)) => {
                if Arc::ptr_eq(p, q) {
                    true
                } else if p.functor != q.functor || p.args.len() != q.args.len() {
                    false
                } else {
                    stack.extend(p.args.iter().cloned().zip(q.args.iter().cloned()).rev());
                    true
                }
            }
            _ => false,
        };
        if !ok {
            store.undo_to(mark);
            return false;
        }
    }
    true
}

fn occurs(store: &Store, v: VarId, t: &Term) -> bool {
    match store.deref(t) {
        Term::Var(w) | Term::EVar(w) => v == w,
        Term::Compound(c) => !c.ground && c.args.iter().any(|a| occurs(store, v, a)),
        _ => false,
    }
}

/// Maps the clause-local variables of one stored clause to fresh cells.
///
/// Stored clauses own a contiguous range of cells starting at `base`; the map
/// is a dense vector over that range. Interclausal variables are not in the
/// map and pass through unchanged.
pub struct RenameMap {
    base: u32,
    fresh: Vec<Option<Term>>,
}

impl RenameMap {
    pub fn new(base: u32, count: u32) -> Self {
        RenameMap { base, fresh: vec![None; count as usize] }
    }

    pub fn rename(&mut self, store: &mut Store, t: &Term) -> Term {
        match t {
            Term::Var(v) => {
                let slot =
                    v.0.checked_sub(self.base)
                        .and_then(|i| self.fresh.get_mut(i as usize))
                        .expect("clause variable outside its clause range");
                slot.get_or_insert_with(|| store.fresh_var()).clone()
            }
            Term::Compound(c) if !c.ground => {
                let args = c.args.iter().map(|a| self.rename(store, a)).collect::<Vec<_>>();
                Term::compound(c.functor.clone(), args)
            }
            _ => t.clone(),
        }
    }
}

/// Copies a term, giving fresh cells to unbound clause-local variables.
/// Unbound interclausal variables are returned as-is; bound variables of
/// either kind are replaced by copies of their values.
pub fn copy_term(store: &mut Store, t: &Term) -> Term {
    let mut map = HashMap::new();
    copy_rec(store, t, &mut map)
}

fn copy_rec(store: &mut Store, t: &Term, map: &mut HashMap<VarId, Term>) -> Term {
    match store.deref(t) {
        Term::Var(v) => map.entry(v).or_insert_with(|| store.fresh_var()).clone(),
        Term::Compound(c) if !c.ground => {
            let args = c.args.iter().map(|a| copy_rec(store, a, map)).collect::<Vec<_>>();
            Term::compound(c.functor.clone(), args)
        }
        other => other,
    }
}

/// A store-independent snapshot of a term, used to carry results out of a
/// region whose cells are about to be released (e.g. `findall/3`).
#[derive(Clone, Debug)]
pub enum Template {
    Atom(Atom),
    Int(i64),
    Local(usize),
    Shared(VarId),
    Ground(Term),
    Compound(Atom, Vec<Template>),
}

impl Template {
    /// Captures `t` with copy-term sharing rules.
    pub fn capture(store: &Store, t: &Term) -> Template {
        let mut locals = HashMap::new();
        Self::capture_rec(store, t, &mut locals)
    }

    fn capture_rec(store: &Store, t: &Term, locals: &mut HashMap<VarId, usize>) -> Template {
        match store.deref(t) {
            Term::Atom(a) => Template::Atom(a),
            Term::Int(i) => Template::Int(i),
            Term::EVar(v) => Template::Shared(v),
            Term::Var(v) => {
                let n = locals.len();
                Template::Local(*locals.entry(v).or_insert(n))
            }
            Term::Compound(c) if c.ground => Template::Ground(Term::Compound(c)),
            Term::Compound(c) => Template::Compound(
                c.functor.clone(),
                c.args.iter().map(|a| Self::capture_rec(store, a, locals)).collect(),
            ),
        }
    }

    /// Rebuilds the term with fresh cells for its local variables.
    pub fn instantiate(&self, store: &mut Store) -> Term {
        let mut locals = HashMap::new();
        self.instantiate_rec(store, &mut locals)
    }

    fn instantiate_rec(&self, store: &mut Store, locals: &mut HashMap<usize, Term>) -> Term {
        match self {
            Template::Atom(a) => Term::Atom(a.clone()),
            Template::Int(i) => Term::Int(*i),
            Template::Shared(v) => Term::EVar(*v),
            Template::Ground(t) => t.clone(),
            Template::Local(n) => locals.entry(*n).or_insert_with(|| store.fresh_var()).clone(),
            Template::Compound(f, args) => {
                Term::compound(f.clone(), args.iter().map(|a| a.instantiate_rec(store, locals)).collect())
            }
        }
    }
}

/// Standard order: variables < integers < atoms < compounds. Variables by
/// cell age, compounds by arity, then name, then arguments.
pub fn compare(store: &Store, a: &Term, b: &Term) -> Ordering {
    let a = store.deref(a);
    let b = store.deref(b);
    fn rank(t: &Term) -> u8 {
        match t {
            Term::Var(_) | Term::EVar(_) => 0,
            Term::Int(_) => 1,
            Term::Atom(_) => 2,
            Term::Compound(_) => 3,
        }
    }
    match (&a, &b) {
        (Term::Var(v) | Term::EVar(v), Term::Var(w) | Term::EVar(w)) => v.cmp(w),
        (Term::Int(x), Term::Int(y)) => x.cmp(y),
        (Term::Atom(x), Term::Atom(y)) => x.as_str().cmp(y.as_str()),
        (Term::Compound(x), Term::Compound(y)) => {
            if Arc::ptr_eq(x, y) {
                return Ordering::Equal;
            }
            x.args.len().cmp(&y.args.len()).then_with(|| x.functor.as_str().cmp(y.functor.as_str())).then_with(|| {
                x.args
                    .iter()
                    .zip(y.args.iter())
                    .map(|(p, q)| compare(store, p, q))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
        }
        _ => rank(&a).cmp(&rank(&b)),
    }
}

/// True when the terms are equal up to a consistent, one-to-one renaming of
/// their unbound variables.
pub fn is_variant(store: &Store, a: &Term, b: &Term) -> bool {
    let mut fwd = HashMap::new();
    let mut back = HashMap::new();
    variant_rec(store, a, b, &mut fwd, &mut back)
}

fn variant_rec(
    store: &Store,
    a: &Term,
    b: &Term,
    fwd: &mut HashMap<VarId, VarId>,
    back: &mut HashMap<VarId, VarId>,
) -> bool {
    match (store.deref(a), store.deref(b)) {
        (Term::Var(v) | Term::EVar(v), Term::Var(w) | Term::EVar(w)) => {
            *fwd.entry(v).or_insert(w) == w && *back.entry(w).or_insert(v) == v
        }
        (Term::Atom(x), Term::Atom(y)) => x == y,
        (Term::Int(x), Term::Int(y)) => x == y,
        (Term::Compound(x), Term::Compound(y)) => {
            x.functor == y.functor
                && x.args.len() == y.args.len()
                && x.args.iter().zip(y.args.iter()).all(|(p, q)| variant_rec(store, p, q, fwd, back))
        }
        _ => false,
    }
}

/// Collects the distinct cells of unbound variables reachable from `t`.
pub fn term_vars(store: &Store, t: &Term, out: &mut Vec<VarId>) {
    match store.deref(t) {
        Term::Var(v) | Term::EVar(v) => {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        Term::Compound(c) if !c.ground => c.args.iter().for_each(|a| term_vars(store, a, out)),
        _ => {}
    }
}
