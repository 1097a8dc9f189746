//! Grammar-rule translation and the assumption-grammar prelude.
//!
//! A rule `H --> B` becomes a clause whose head gains two arguments `S0, S`
//! threaded through `B` left to right. `phrase/2,3` uses the same body
//! translation at call time.

use crate::store::Store;
use crate::term::{Term, CONS, NIL};

/// Library source for assumption grammars, loaded into every engine unless
/// disabled.
pub const ASSUMPTIONS_PRELUDE: &str = include_str!("../prelude/assumptions.pl");

/// Translates a grammar rule into `(head, body)`.
pub fn translate_rule(store: &mut Store, head: &Term, body: &Term) -> Result<(Term, Term), String> {
    let head = store.deref(head);
    if head.is_functor(",", 2) {
        return Err("pushback in grammar rule heads is not supported".into());
    }
    if head.functor().is_none() {
        return Err("grammar rule head must be an atom or compound".into());
    }
    if store.deref(body).is_atom(NIL) {
        let s = store.fresh_var();
        return Ok((extend(&head, s.clone(), s), Term::atom("true")));
    }
    let s0 = store.fresh_var();
    let s = store.fresh_var();
    let goal = translate_body(store, body, s0.clone(), s.clone())?;
    Ok((extend(&head, s0, s), goal))
}

/// Translates a grammar body into a goal relating `s0` to `s`.
pub fn translate_body(store: &mut Store, body: &Term, s0: Term, s: Term) -> Result<Term, String> {
    let b = store.deref(body);
    let eq = |a: Term, b: Term| Term::compound("=", vec![a, b]);
    match &b {
        Term::Var(_) | Term::EVar(_) => Err("unbound variable in grammar body".into()),
        Term::Int(i) => Err(format!("integer {i} is not a grammar body")),
        Term::Atom(a) => Ok(match a.as_str() {
            NIL | "true" => eq(s0, s),
            "!" => conj(Term::atom("!"), eq(s0, s)),
            "fail" | "false" => Term::atom("fail"),
            _ => extend(&b, s0, s),
        }),
        Term::Compound(c) => {
            let args = &c.args;
            match (c.functor.as_str(), args.len()) {
                (",", 2) => {
                    let mid = store.fresh_var();
                    let left = translate_body(store, &args[0], s0, mid.clone())?;
                    let right = translate_body(store, &args[1], mid, s)?;
                    Ok(conj(left, right))
                }
                (";", 2) => {
                    let left = translate_body(store, &args[0], s0.clone(), s.clone())?;
                    let right = translate_body(store, &args[1], s0, s)?;
                    Ok(Term::compound(";", vec![left, right]))
                }
                ("->", 2) => {
                    let mid = store.fresh_var();
                    let cond = translate_body(store, &args[0], s0, mid.clone())?;
                    let then = translate_body(store, &args[1], mid, s)?;
                    Ok(Term::compound("->", vec![cond, then]))
                }
                ("\\+", 1) => {
                    let ignored = store.fresh_var();
                    let inner = translate_body(store, &args[0], s0.clone(), ignored)?;
                    Ok(conj(Term::compound("\\+", vec![inner]), eq(s0, s)))
                }
                ("{}", 1) => Ok(conj(args[0].clone(), eq(s0, s))),
                (CONS, 2) => {
                    let list = terminal_list(store, &b, s)?;
                    Ok(eq(s0, list))
                }
                _ => Ok(extend(&b, s0, s)),
            }
        }
    }
}

/// Right-associated conjunction, flattening a conjunction on the left.
fn conj(a: Term, b: Term) -> Term {
    if a.is_functor(",", 2) {
        let rest = conj(a.args()[1].clone(), b);
        return Term::compound(",", vec![a.args()[0].clone(), rest]);
    }
    Term::compound(",", vec![a, b])
}

/// Re-tails a proper terminal list onto `tail`.
fn terminal_list(store: &Store, list: &Term, tail: Term) -> Result<Term, String> {
    let mut items = Vec::new();
    let mut cur = store.deref(list);
    while cur.is_functor(CONS, 2) {
        items.push(cur.args()[0].clone());
        cur = store.deref(&cur.args()[1]);
    }
    if !cur.is_atom(NIL) {
        return Err("terminal list in grammar body is not a proper list".into());
    }
    Ok(Term::list_with_tail(items, tail))
}

fn extend(t: &Term, s0: Term, s: Term) -> Term {
    let (name, _) = t.functor().expect("callable");
    let mut args = t.args().to_vec();
    args.push(s0);
    args.push(s);
    Term::compound(name.clone(), args)
}
