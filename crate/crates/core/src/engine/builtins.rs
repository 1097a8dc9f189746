use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::EngineError;
use crate::reader::writer::variable_names;
use crate::reader::{Naming, WriteStyle, Writer};
use crate::term::{Atom, PredKey, Term, CONS, NIL};
use crate::unify::{compare, copy_term, unify};

use super::arith::eval;
use super::Engine;

/// Control constructs handled by the machine itself.
const CONTROL: &[(&str, usize)] = &[
    ("true", 0),
    ("fail", 0),
    ("false", 0),
    ("!", 0),
    (",", 2),
    (";", 2),
    ("->", 2),
    ("\\+", 1),
    ("call", 1),
    ("findall", 3),
    ("phrase", 2),
    ("phrase", 3),
];

/// Deterministic built-ins: they succeed at most once.
const DETERMINISTIC: &[(&str, usize)] = &[
    ("=", 2),
    ("\\=", 2),
    ("==", 2),
    ("\\==", 2),
    ("var", 1),
    ("nonvar", 1),
    ("is", 2),
    ("<", 2),
    (">", 2),
    ("=<", 2),
    (">=", 2),
    ("=:=", 2),
    ("=\\=", 2),
    ("arg", 3),
    ("functor", 3),
    ("copy_term", 2),
    ("sort", 2),
    ("listing", 1),
];

pub fn is_builtin(name: &str, arity: usize) -> bool {
    builtin_keys().any(|(n, a)| n == name && a == arity)
}

/// Name and arity of every built-in, control constructs included.
pub fn builtin_keys() -> impl Iterator<Item = (&'static str, usize)> {
    CONTROL.iter().chain(DETERMINISTIC).copied()
}

/// Runs a deterministic built-in, or returns `None` if `name/args.len()` is
/// not one.
pub(crate) fn call_deterministic(eng: &mut Engine, name: &str, args: &[Term]) -> Option<Result<bool, EngineError>> {
    let oc = eng.config.occurs_check;
    let result = match (name, args) {
        ("=", [a, b]) => Ok(unify(&mut eng.store, a, b, oc)),
        ("\\=", [a, b]) => {
            let mark = eng.store.mark();
            let unifiable = unify(&mut eng.store, a, b, oc);
            eng.store.undo_to(mark);
            Ok(!unifiable)
        }
        ("==", [a, b]) => Ok(compare(&eng.store, a, b) == Ordering::Equal),
        ("\\==", [a, b]) => Ok(compare(&eng.store, a, b) != Ordering::Equal),
        ("var", [a]) => Ok(eng.store.deref(a).is_var()),
        ("nonvar", [a]) => Ok(!eng.store.deref(a).is_var()),
        ("is", [r, e]) => eval(&eng.store, e).map(|v| unify(&mut eng.store, r, &Term::Int(v), oc)),
        ("<" | ">" | "=<" | ">=" | "=:=" | "=\\=", [a, b]) => compare_numbers(eng, name, a, b),
        ("arg", [n, t, a]) => arg(eng, n, t, a),
        ("functor", [t, n, a]) => functor(eng, t, n, a),
        ("copy_term", [a, b]) => {
            let copy = copy_term(&mut eng.store, a);
            Ok(unify(&mut eng.store, &copy, b, oc))
        }
        ("sort", [l, s]) => sort(eng, l, s),
        ("listing", [spec]) => listing(eng, spec),
        _ => return None,
    };
    Some(result)
}

fn compare_numbers(eng: &Engine, op: &str, a: &Term, b: &Term) -> Result<bool, EngineError> {
    let (x, y) = (eval(&eng.store, a)?, eval(&eng.store, b)?);
    Ok(match op {
        "<" => x < y,
        ">" => x > y,
        "=<" => x <= y,
        ">=" => x >= y,
        "=:=" => x == y,
        _ => x != y,
    })
}

fn arg(eng: &mut Engine, n: &Term, t: &Term, a: &Term) -> Result<bool, EngineError> {
    let n = match eng.store.deref(n) {
        Term::Int(n) => n,
        Term::Var(_) | Term::EVar(_) => return Err(EngineError::Instantiation("arg/3".into())),
        other => return Err(type_error(eng, "arg/3", "integer", &other)),
    };
    let t = eng.store.deref(t);
    let args = match &t {
        Term::Compound(c) => &c.args,
        Term::Var(_) | Term::EVar(_) => return Err(EngineError::Instantiation("arg/3".into())),
        other => return Err(type_error(eng, "arg/3", "compound", other)),
    };
    if n < 1 || n as usize > args.len() {
        return Ok(false);
    }
    let item = args[n as usize - 1].clone();
    Ok(unify(&mut eng.store, &item, a, eng.config.occurs_check))
}

fn functor(eng: &mut Engine, t: &Term, n: &Term, a: &Term) -> Result<bool, EngineError> {
    let oc = eng.config.occurs_check;
    let t = eng.store.deref(t);
    if !t.is_var() {
        let (name, arity) = match &t {
            Term::Int(i) => (Term::Int(*i), 0),
            other => {
                let (name, arity) = other.functor().expect("callable");
                (Term::Atom(name.clone()), arity)
            }
        };
        return Ok(unify(&mut eng.store, n, &name, oc) && unify(&mut eng.store, a, &Term::Int(arity as i64), oc));
    }
    let arity = match eng.store.deref(a) {
        Term::Int(k) if k >= 0 => k as usize,
        Term::Var(_) | Term::EVar(_) => return Err(EngineError::Instantiation("functor/3".into())),
        other => return Err(type_error(eng, "functor/3", "non-negative integer", &other)),
    };
    let built = match eng.store.deref(n) {
        Term::Var(_) | Term::EVar(_) => return Err(EngineError::Instantiation("functor/3".into())),
        Term::Int(i) if arity == 0 => Term::Int(i),
        Term::Atom(name) => {
            let args = (0..arity).map(|_| eng.store.fresh_var()).collect();
            Term::compound(name, args)
        }
        other => return Err(type_error(eng, "functor/3", "atomic", &other)),
    };
    Ok(unify(&mut eng.store, &t, &built, oc))
}

fn sort(eng: &mut Engine, list: &Term, sorted: &Term) -> Result<bool, EngineError> {
    let mut items = list_items(eng, list, "sort/2")?;
    items.sort_by(|a, b| compare(&eng.store, a, b));
    items.dedup_by(|a, b| compare(&eng.store, a, b) == Ordering::Equal);
    Ok(unify(&mut eng.store, &Term::list(items), sorted, eng.config.occurs_check))
}

fn list_items(eng: &Engine, list: &Term, context: &str) -> Result<Vec<Term>, EngineError> {
    let mut items = Vec::new();
    let mut cur = eng.store.deref(list);
    loop {
        match &cur {
            Term::Compound(c) if c.functor == *CONS && c.args.len() == 2 => {
                items.push(c.args[0].clone());
                cur = eng.store.deref(&c.args[1]);
            }
            Term::Atom(a) if *a == *NIL => return Ok(items),
            Term::Var(_) | Term::EVar(_) => return Err(EngineError::Instantiation(context.into())),
            other => return Err(type_error(eng, context, "list", other)),
        }
    }
}

/// `listing(Name)` or `listing(Name/Arity)`; one blank line after each
/// predicate.
fn listing(eng: &mut Engine, spec: &Term) -> Result<bool, EngineError> {
    let spec = eng.store.deref(spec);
    let (name, arity): (Atom, Option<usize>) = match &spec {
        Term::Atom(a) => (a.clone(), None),
        Term::Compound(c) if c.functor == *"/" && c.args.len() == 2 => {
            match (eng.store.deref(&c.args[0]), eng.store.deref(&c.args[1])) {
                (Term::Atom(a), Term::Int(k)) => (a, Some(k as usize)),
                (Term::Var(_) | Term::EVar(_), _) | (_, Term::Var(_) | Term::EVar(_)) => {
                    return Err(EngineError::Instantiation("listing/1".into()))
                }
                _ => return Err(type_error(eng, "listing/1", "predicate_indicator", &spec)),
            }
        }
        Term::Var(_) | Term::EVar(_) => return Err(EngineError::Instantiation("listing/1".into())),
        other => return Err(type_error(eng, "listing/1", "predicate_indicator", other)),
    };
    let keys: Vec<PredKey> = eng
        .db
        .predicates()
        .map(|(k, _)| k)
        .filter(|k| k.name == name && arity.is_none_or(|a| a == k.arity))
        .cloned()
        .collect();
    let mut text = String::new();
    for key in keys {
        let clauses = eng.db.clauses(&key).expect("listed key").clone();
        for c in clauses.iter() {
            let names = variable_names(&eng.store, &[&c.head, &c.body], HashMap::new(), |_| false);
            let mut w = Writer::new(&eng.store, &eng.ops, WriteStyle::Compact).with_naming(Naming::Custom(&names));
            text.push_str(&w.write_clause(&c.head, &c.body));
        }
        text.push('\n');
    }
    eng.output.push_str(&text);
    Ok(true)
}

fn type_error(eng: &Engine, context: &str, expected: &'static str, culprit: &Term) -> EngineError {
    let culprit = Writer::new(&eng.store, &eng.ops, WriteStyle::Compact).write(culprit);
    EngineError::Type { context: context.into(), expected, culprit }
}
