//! Source-level elimination of interclausal variables.
//!
//! Every interclausal variable gets a fixed slot in one environment term
//! `evs(_,...,_)`. User predicates gain a final argument carrying that term,
//! and each clause reads the slots it mentions with `arg/3`. Built-ins and
//! library predicates keep their arity.
//!
//! Goals only known at run time (a variable in goal position) go through
//! `'$env_call'/2`, a small helper emitted into the output that threads the
//! environment into the goal before calling it.

use std::collections::{HashMap, HashSet};
use std::sync::LazyLock;

use crate::dcg::{self, ASSUMPTIONS_PRELUDE};
use crate::engine::builtins::builtin_keys;
use crate::error::TranspileError;
use crate::reader::writer::variable_names;
use crate::reader::{read_program, read_query, Naming, OpTable, WriteStyle, Writer};
use crate::store::Store;
use crate::term::{Term, VarId};

/// Functor of the environment term.
pub const ENV_FUNCTOR: &str = "evs";

const RESERVED_PREFIX: &str = "$env_";

const HELPER_CLAUSES: &str = r"'$env_call'(G,_) :- var(G), !, call(G).
'$env_call'(G,E) :- '$env_goal'(G,E,G1), call(G1).
'$env_goal'(G,E,'$env_call'(G,E)) :- var(G), !.
'$env_goal'((A,B),E,(A1,B1)) :- !, '$env_goal'(A,E,A1), '$env_goal'(B,E,B1).
'$env_goal'((A;B),E,(A1;B1)) :- !, '$env_goal'(A,E,A1), '$env_goal'(B,E,B1).
'$env_goal'((A->B),E,(A1->B1)) :- !, '$env_goal'(A,E,A1), '$env_goal'(B,E,B1).
'$env_goal'(\+ A,E,\+ A1) :- !, '$env_goal'(A,E,A1).
'$env_goal'(call(A),E,call(A1)) :- !, '$env_goal'(A,E,A1).
'$env_goal'(findall(T,A,L),E,findall(T,A1,L)) :- !, '$env_goal'(A,E,A1).
'$env_goal'(G,_,G) :- functor(G,N,A), '$env_library'(N,A), !.
'$env_goal'(G,E,G1) :- functor(G,N,A), A1 is A+1, functor(G1,N,A1), '$env_args'(A,G,G1), arg(A1,G1,E).
'$env_args'(0,_,_) :- !.
'$env_args'(I,G,G1) :- arg(I,G,X), arg(I,G1,X), J is I-1, '$env_args'(J,G,G1).
";

const HELPER_KEYS: &[(&str, usize)] = &[("$env_call", 2), ("$env_goal", 3), ("$env_args", 3), ("$env_library", 2)];

/// Predicates whose arity is never extended: built-ins, the assumption
/// grammar library and the run-time helper.
static LIBRARY: LazyLock<HashSet<(String, usize)>> = LazyLock::new(|| {
    let mut store = Store::new();
    let prelude = read_program(ASSUMPTIONS_PRELUDE, &OpTable::default(), &mut store, false).expect("prelude parses");
    builtin_keys()
        .chain(HELPER_KEYS.iter().copied())
        .map(|(n, a)| (n.to_string(), a))
        .chain(prelude.iter().map(|c| (c.key.name.to_string(), c.key.arity)))
        .collect()
});

fn is_library(name: &str, arity: usize) -> bool {
    LIBRARY.contains(&(name.to_string(), arity))
}

/// Source for `'$env_call'/2` and the table of library predicates it must
/// leave unextended.
pub fn helper_source() -> String {
    let ops = OpTable::default();
    let store = Store::new();
    let mut keys: Vec<&(String, usize)> = LIBRARY.iter().collect();
    keys.sort();
    let mut out = String::from(HELPER_CLAUSES);
    for (name, arity) in keys {
        let fact = Term::compound("$env_library", vec![Term::atom(name), Term::Int(*arity as i64)]);
        out.push_str(&Writer::new(&store, &ops, WriteStyle::Compact).write_clause(&fact, &Term::atom("true")));
    }
    out
}

/// Slot assignment for the interclausal variables of a program.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EnvLayout {
    /// Names without `~`, in order of first occurrence. Slot `i + 1` holds
    /// `evars[i]`.
    pub evars: Vec<String>,
}

impl EnvLayout {
    pub fn position(&self, name: &str) -> Option<usize> {
        self.evars.iter().position(|n| n == name).map(|i| i + 1)
    }
}

/// A transpiled program or query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    /// The text calls `'$env_call'/2`, so [`helper_source`] must be loaded
    /// with it.
    pub needs_helper: bool,
}

pub fn collect_evars(program: &str) -> Result<EnvLayout, TranspileError> {
    let mut store = Store::new();
    read_program(program, &OpTable::default(), &mut store, true)?;
    Ok(EnvLayout { evars: store.evar_names().map(str::to_string).collect() })
}

/// Rewrites a program into plain syntax. The helper is appended to the text
/// when the program needs it.
pub fn transpile(program: &str) -> Result<(Output, EnvLayout), TranspileError> {
    let ops = OpTable::default();
    let mut store = Store::new();
    let clauses = read_program(program, &ops, &mut store, true)?;
    let layout = EnvLayout { evars: store.evar_names().map(str::to_string).collect() };
    let mut text = String::new();
    let mut needs_helper = false;
    for clause in &clauses {
        if clause.key.name.as_str().starts_with(RESERVED_PREFIX) {
            return Err(TranspileError::ReservedName(clause.key.to_string()));
        }
        let mut rw = Rewriter::new(&mut store, &layout);
        let head = rw.extend(&clause.head);
        let body = rw.goal(&clause.body)?;
        let body = rw.with_reads(body);
        needs_helper |= rw.needs_helper;
        let env = rw.env.clone();
        let slots = rw.slots;
        let names = clause_names(&store, &[&head, &body], &env, &slots);
        text.push_str(
            &Writer::new(&store, &ops, WriteStyle::Compact)
                .with_naming(Naming::Custom(&names))
                .write_clause(&head, &body),
        );
    }
    if needs_helper {
        text.push_str(&helper_source());
    }
    Ok((Output { text, needs_helper }, layout))
}

/// Rewrites a query for a program transpiled with `layout`: binds the
/// environment, reads the interclausal variables it mentions and threads the
/// environment into user goals.
pub fn transform_query(query: &str, layout: &EnvLayout) -> Result<Output, TranspileError> {
    let ops = OpTable::default();
    let mut store = Store::new();
    let rt = read_query(query, &ops, &mut store, true)?;
    if let Some(name) = store.evar_names().find(|n| layout.position(n).is_none()) {
        return Err(TranspileError::UnknownEVar(name.to_string()));
    }
    let mut rw = Rewriter::new(&mut store, layout);
    let goal = rw.goal(&rt.term)?;
    let goal = rw.with_reads(goal);
    let slots = (0..layout.evars.len()).map(|_| rw.store.fresh_var()).collect::<Vec<_>>();
    let bind = Term::compound("=", vec![rw.env.clone(), env_term(slots)]);
    let needs_helper = rw.needs_helper;
    let env = rw.env.clone();
    let used_slots = rw.slots;
    let full = Term::compound(",", vec![bind, goal]);
    let names = clause_names(&store, &[&full], &env, &used_slots);
    let text = Writer::new(&store, &ops, WriteStyle::Compact).with_naming(Naming::Custom(&names)).write(&full);
    Ok(Output { text, needs_helper })
}

fn env_term(slots: Vec<Term>) -> Term {
    Term::compound(ENV_FUNCTOR, slots)
}

struct Rewriter<'a> {
    store: &'a mut Store,
    layout: &'a EnvLayout,
    env: Term,
    /// Slot position and replacement variable per interclausal variable.
    slots: Vec<(usize, Term, VarId)>,
    needs_helper: bool,
}

impl<'a> Rewriter<'a> {
    fn new(store: &'a mut Store, layout: &'a EnvLayout) -> Self {
        let env = store.fresh_var();
        Rewriter { store, layout, env, slots: Vec::new(), needs_helper: false }
    }

    /// Replaces interclausal variables by clause variables.
    fn plain(&mut self, t: &Term) -> Term {
        match t {
            Term::EVar(v) => {
                if let Some((_, var, _)) = self.slots.iter().find(|(_, _, e)| e == v) {
                    return var.clone();
                }
                let name = self.store.var_name(*v).expect("interned name").to_string();
                let pos = self.layout.position(&name).expect("layout covers program");
                let var = self.store.fresh_var();
                self.slots.push((pos, var.clone(), *v));
                var
            }
            Term::Compound(c) if !c.ground => {
                let args = c.args.iter().map(|a| self.plain(a)).collect();
                Term::compound(c.functor.clone(), args)
            }
            _ => t.clone(),
        }
    }

    /// Appends the environment to a user predicate call.
    fn extend(&mut self, t: &Term) -> Term {
        let (name, _) = t.functor().expect("callable");
        let name = name.clone();
        let mut args: Vec<Term> = t.args().iter().map(|a| self.plain(a)).collect();
        args.push(self.env.clone());
        Term::compound(name, args)
    }

    fn goal(&mut self, t: &Term) -> Result<Term, TranspileError> {
        let t = self.store.deref(t);
        let (name, arity) = match &t {
            Term::Var(_) | Term::EVar(_) => {
                self.needs_helper = true;
                let g = self.plain(&t);
                return Ok(Term::compound("$env_call", vec![g, self.env.clone()]));
            }
            Term::Int(_) => return Ok(t),
            other => {
                let (n, a) = other.functor().expect("callable");
                (n.as_str().to_string(), a)
            }
        };
        let args = t.args();
        match (name.as_str(), arity) {
            ("," | ";" | "->", 2) => {
                let (a, b) = (self.goal(&args[0])?, self.goal(&args[1])?);
                Ok(Term::compound(name.as_str(), vec![a, b]))
            }
            ("\\+" | "call", 1) => {
                let g = self.goal(&args[0])?;
                Ok(Term::compound(name.as_str(), vec![g]))
            }
            ("findall", 3) => {
                let template = self.plain(&args[0]);
                let g = self.goal(&args[1])?;
                let list = self.plain(&args[2]);
                Ok(Term::compound("findall", vec![template, g, list]))
            }
            ("phrase", 2 | 3) => {
                let body = self.store.deref(&args[0]);
                if body.is_var() {
                    return Err(TranspileError::Unthreadable("phrase/2,3 with a variable body".into()));
                }
                let rest = if arity == 3 { args[2].clone() } else { Term::nil() };
                let translated = dcg::translate_body(self.store, &body, args[1].clone(), rest)
                    .map_err(|e| TranspileError::Unthreadable(format!("phrase body: {e}")))?;
                let g = self.goal(&translated)?;
                Ok(Term::compound("call", vec![g]))
            }
            _ if is_library(&name, arity) => Ok(self.plain(&t)),
            _ => Ok(self.extend(&t)),
        }
    }

    /// Prefixes `body` with one `arg/3` read per interclausal variable used,
    /// in slot order.
    fn with_reads(&mut self, body: Term) -> Term {
        self.slots.sort_by_key(|(pos, _, _)| *pos);
        let reads: Vec<Term> = self
            .slots
            .iter()
            .map(|(pos, var, _)| Term::compound("arg", vec![Term::Int(*pos as i64), self.env.clone(), var.clone()]))
            .collect();
        let mut goals = reads;
        if !body.is_atom("true") || goals.is_empty() {
            goals.push(body);
        }
        let last = goals.pop().expect("at least one goal");
        goals.into_iter().rev().fold(last, |acc, g| Term::compound(",", vec![g, acc]))
    }
}

/// Names every variable of the rewritten terms, keeping source names unless
/// they clash with the reserved `_Env`/`_IV` names.
fn clause_names(store: &Store, terms: &[&Term], env: &Term, slots: &[(usize, Term, VarId)]) -> HashMap<VarId, String> {
    let mut preset = HashMap::new();
    preset.insert(env.var_id().expect("env is a variable"), "_Env".to_string());
    for (pos, var, _) in slots {
        preset.insert(var.var_id().expect("slot variable"), format!("_IV{pos}"));
    }
    variable_names(store, terms, preset, |n| n == "_Env" || n.starts_with("_IV"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn program(src: &str) -> String {
        transpile(src).unwrap().0.text
    }

    #[test]
    fn layout_is_first_occurrence_order() {
        let layout = collect_evars("v(1,~C1). v(2,~C2). w(~C2,~C1,~C3).").unwrap();
        assert_eq!(layout.evars, ["C1", "C2", "C3"]);
        assert_eq!(layout.position("C3"), Some(3));
        assert!(collect_evars("color(red).").unwrap().evars.is_empty());
    }

    #[test]
    fn evars_become_arg_reads() {
        assert_eq!(program("a(~X)."), "a(_IV1,_Env) :-\n    arg(1,_Env,_IV1).\n");
        assert_eq!(program("color(red)."), "color(red,_Env).\n");
    }

    #[test]
    fn reads_follow_slot_order() {
        let text = program("s(~A). t(~B, ~A) :- u.");
        assert!(
            text.contains("t(_IV2,_IV1,_Env) :-\n    arg(1,_Env,_IV1),\n    arg(2,_Env,_IV2),\n    u(_Env).\n"),
            "{text}"
        );
    }

    #[test]
    fn builtins_and_library_keep_their_arity() {
        let text = program("p(X) :- X > 1, \\+ q(X), findall(Y, q(Y), _), nonvar_member(X, [X]).");
        assert_eq!(
            text,
            "p(X,_Env) :-\n    X>1,\n    \\+q(X,_Env),\n    findall(Y,q(Y,_Env),_),\n    nonvar_member(X,[X]).\n"
        );
    }

    #[test]
    fn metavariable_goals_use_the_helper() {
        let (out, _) = transpile("p(X) :- ~Gate, q(X). q(1).").unwrap();
        assert!(out.needs_helper);
        assert!(out
            .text
            .starts_with("p(X,_Env) :-\n    arg(1,_Env,_IV1),\n    '$env_call'(_IV1,_Env),\n    q(X,_Env).\n"));
        assert!(out.text.contains("'$env_library'(is,2)."));
        assert!(!program("q(1).").contains("$env_call"));
    }

    #[test]
    fn queries_bind_the_environment() {
        let layout = collect_evars("a(~X). b(~X).").unwrap();
        assert_eq!(transform_query("a(10),b(V)", &layout).unwrap().text, "_Env=evs(_),a(10,_Env),b(V,_Env)");
        let layout = collect_evars("p(X) :- ~Gate, q(X). q(1).").unwrap();
        assert_eq!(
            transform_query("~Gate = fail, p(X)", &layout).unwrap().text,
            "_Env=evs(_),arg(1,_Env,_IV1),_IV1=fail,p(X,_Env)"
        );
        let empty = EnvLayout::default();
        assert_eq!(transform_query("color(C)", &empty).unwrap().text, "_Env=evs,color(C,_Env)");
    }

    #[test]
    fn unknown_query_evar_is_an_error() {
        let layout = collect_evars("a(~X).").unwrap();
        assert_eq!(transform_query("a(~Y)", &layout), Err(TranspileError::UnknownEVar("Y".into())));
    }

    #[test]
    fn reserved_names_are_rejected() {
        assert!(matches!(transpile("'$env_x'(1)."), Err(TranspileError::ReservedName(_))));
    }

    #[test]
    fn colliding_variable_names_are_renamed() {
        assert_eq!(program("p(_Env, _IV1) :- q(_Env)."), "p(_U0,_U1,_Env) :-\n    q(_U0,_Env).\n");
    }

    #[test]
    fn variable_phrase_body_cannot_be_threaded() {
        assert!(matches!(transpile("p(G, L) :- phrase(G, L)."), Err(TranspileError::Unthreadable(_))));
    }

    #[test]
    fn static_phrase_is_translated() {
        let text = program("g --> [a]. p(L) :- phrase(g, L).");
        assert!(text.contains("p(L,_Env) :-\n    call(g(L,[],_Env)).\n"), "{text}");
    }

    #[test]
    fn output_rereads_without_evars() {
        let (out, _) = transpile("v(1,~C1). p(X) :- ~G, v(X, ~C1). s --> [x], {~C1 = y}.").unwrap();
        assert!(!out.text.contains('~'));
        let mut store = Store::new();
        let clauses = read_program(&out.text, &OpTable::default(), &mut store, false).unwrap();
        assert!(clauses.iter().any(|c| c.key.to_string() == "v/3"));
        assert!(clauses.iter().any(|c| c.key.to_string() == "s/3"));
    }
}
