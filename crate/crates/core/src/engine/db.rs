use std::sync::Arc;

use indexmap::IndexMap;

use crate::dcg;
use crate::error::ReadError;
use crate::reader::ReadTerm;
use crate::store::Store;
use crate::term::{PredKey, Term};

use super::builtins;

/// A stored, un-renamed clause.
#[derive(Clone, Debug)]
pub struct Clause {
    pub head: Term,
    pub body: Term,
    pub key: PredKey,
    /// First cell of the clause's private variable range.
    pub var_base: u32,
    pub var_count: u32,
}

impl Clause {
    /// Builds a clause from a read term whose variables were allocated from
    /// cell `base` onwards. Grammar rules are translated here.
    pub fn from_read_term(rt: ReadTerm, base: usize, store: &mut Store) -> Result<Clause, ReadError> {
        let line = rt.line;
        let err = |message: String| ReadError::Clause { line, message };
        let t = store.deref(&rt.term);
        let (head, body) = if t.is_functor("-->", 2) {
            dcg::translate_rule(store, &t.args()[0], &t.args()[1]).map_err(err)?
        } else if t.is_functor(":-", 2) {
            let (h, b) = (t.args()[0].clone(), t.args()[1].clone());
            check_no_curly(store, &h).map_err(err)?;
            check_no_curly(store, &b).map_err(err)?;
            (h, b)
        } else {
            check_no_curly(store, &t).map_err(err)?;
            (t, Term::atom("true"))
        };
        let key = match &head {
            Term::Var(_) | Term::EVar(_) => return Err(err("clause head is a variable".into())),
            Term::Int(_) => return Err(err("clause head is not callable".into())),
            h => h.key().expect("callable head"),
        };
        if builtins::is_builtin(key.name.as_str(), key.arity) {
            return Err(err(format!("cannot redefine built-in {key}")));
        }
        let var_count = (store.cell_count() - base) as u32;
        Ok(Clause { head, body, key, var_base: base as u32, var_count })
    }
}

/// `{}/1` only belongs in grammar rule bodies, including `phrase/2,3` bodies.
fn check_no_curly(store: &Store, t: &Term) -> Result<(), String> {
    match store.deref(t) {
        Term::Compound(c) => {
            if c.functor == *"{}" && c.args.len() == 1 {
                return Err("`{}` is only allowed in grammar rule bodies".into());
            }
            let skip_first = c.functor == *"phrase" && matches!(c.args.len(), 2 | 3);
            c.args.iter().skip(usize::from(skip_first)).try_for_each(|a| check_no_curly(store, a))
        }
        _ => Ok(()),
    }
}

/// Clauses by predicate, in definition order.
#[derive(Clone, Debug, Default)]
pub struct Database {
    preds: IndexMap<PredKey, Arc<Vec<Clause>>>,
}

impl Database {
    pub fn add(&mut self, clause: Clause) {
        let entry = self.preds.entry(clause.key.clone()).or_default();
        Arc::make_mut(entry).push(clause);
    }

    pub fn clauses(&self, key: &PredKey) -> Option<&Arc<Vec<Clause>>> {
        self.preds.get(key)
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&PredKey, &Arc<Vec<Clause>>)> {
        self.preds.iter()
    }

    pub fn contains(&self, key: &PredKey) -> bool {
        self.preds.contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }
}
