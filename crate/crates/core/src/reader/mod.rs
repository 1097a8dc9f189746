//! Tokenizer, operator-precedence parser, program reader and term writer.

pub mod lexer;
pub mod ops;
pub mod parser;
pub mod writer;

pub use crate::error::ReadError;
pub use lexer::{tokenize, Token, TokenKind};
pub use ops::{OpDef, OpTable, OpType};
pub use parser::{Parser, ReadTerm};
pub use writer::{Naming, WriteStyle, Writer};

use crate::engine::db::Clause;
use crate::store::Store;

/// Reads every clause-terminated term of `src`.
pub fn read_terms(src: &str, ops: &OpTable, store: &mut Store, allow_evars: bool) -> Result<Vec<ReadTerm>, ReadError> {
    let tokens = tokenize(src, allow_evars)?;
    let mut parser = Parser::new(tokens, ops, store);
    let mut out = Vec::new();
    while let Some(t) = parser.next_term()? {
        out.push(t);
    }
    Ok(out)
}

/// Reads a single term; the terminating `.` is optional.
pub fn read_query(src: &str, ops: &OpTable, store: &mut Store, allow_evars: bool) -> Result<ReadTerm, ReadError> {
    let mut tokens = tokenize(src, allow_evars)?;
    match tokens.last() {
        None => return Err(ReadError::Syntax { line: 1, col: 1, message: "empty query".into() }),
        Some(last) if last.kind != TokenKind::End => {
            let (line, col) = (last.line, last.col + last.text.chars().count());
            tokens.push(Token { kind: TokenKind::End, text: ".".into(), line, col, layout_before: false });
        }
        Some(_) => {}
    }
    let mut parser = Parser::new(tokens, ops, store);
    let term = parser.next_term()?.expect("non-empty token stream");
    if !parser.at_eof() {
        return Err(ReadError::Syntax { line: term.line, col: 1, message: "more than one term in query".into() });
    }
    Ok(term)
}

/// Reads a program into clauses. Grammar rules are translated on the way in.
///
/// Each clause owns the contiguous range of cells allocated while it was read,
/// so it can be renamed with a dense map.
pub fn read_program(src: &str, ops: &OpTable, store: &mut Store, allow_evars: bool) -> Result<Vec<Clause>, ReadError> {
    let tokens = tokenize(src, allow_evars)?;
    let mut parser = Parser::new(tokens, ops, store);
    let mut out = Vec::new();
    loop {
        let base = parser.store.cell_count();
        let Some(rt) = parser.next_term()? else { break };
        out.push(Clause::from_read_term(rt, base, parser.store)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;

    fn parse(src: &str) -> (Term, Store) {
        let mut store = Store::new();
        let t = read_query(src, &OpTable::default(), &mut store, true).unwrap().term;
        (t, store)
    }

    fn show(src: &str) -> String {
        let (t, store) = parse(src);
        Writer::new(&store, &OpTable::default(), WriteStyle::Compact).write(&t)
    }

    #[test]
    fn compound_and_operators() {
        let (t, _) = parse("edge(70,1,3)");
        assert_eq!(t, Term::compound("edge", vec![Term::Int(70), Term::Int(1), Term::Int(3)]));
        let (t, _) = parse("Db-Xs");
        assert!(t.is_functor("-", 2));
        assert!(t.args()[0].is_var() && t.args()[1].is_var());
    }

    #[test]
    fn list_sugar() {
        let (t, _) = parse("[a,b|T]");
        assert!(t.is_functor(".", 2));
        assert_eq!(t.args()[0], Term::atom("a"));
        let rest = &t.args()[1];
        assert_eq!(rest.args()[0], Term::atom("b"));
        assert!(rest.args()[1].is_var());
    }

    #[test]
    fn same_name_shares_cell_but_underscore_is_fresh() {
        let (t, _) = parse("p(X,X,_,_)");
        let a = t.args();
        assert_eq!(a[0], a[1]);
        assert_ne!(a[2], a[3]);
    }

    #[test]
    fn evars_are_program_wide() {
        let mut store = Store::new();
        let ops = OpTable::default();
        let terms = read_terms("a(~X). b(~X).", &ops, &mut store, true).unwrap();
        assert_eq!(terms[0].term.args()[0], terms[1].term.args()[0]);
        let mut fresh = Store::new();
        let again = read_terms("a(~X).", &ops, &mut fresh, true).unwrap();
        assert!(fresh.deref(&again[0].term.args()[0]).is_var());
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(show("1-2-3"), "1-2-3");
        let (t, _) = parse("1-2-3");
        assert!(t.args()[0].is_functor("-", 2));
        assert_eq!(show("1-(2-3)"), "1-(2-3)");
        assert_eq!(show("a:-b,c;d->e"), "a :- b,c;d->e");
        let (t, _) = parse("a:-b,c;d->e");
        assert!(t.args()[1].is_functor(";", 2));
    }

    #[test]
    fn negative_numbers_and_prefix_minus() {
        let (t, _) = parse("-1");
        assert_eq!(t, Term::Int(-1));
        let (t, _) = parse("- 1");
        assert!(t.is_functor("-", 1));
        let (t, _) = parse("N-1");
        assert!(t.is_functor("-", 2));
        assert_eq!(show("a - -1"), "a - -1");
        assert_eq!(show("-(1)"), "- 1");
        assert_eq!(show("-(-(a))"), "- -a");
    }

    #[test]
    fn negation_forms() {
        let (a, _) = parse("\\+(C=D)");
        let (b, _) = parse("\\+ C=D");
        assert!(a.is_functor("\\+", 1) && b.is_functor("\\+", 1));
        assert_eq!(show("\\+ (a,b)"), "\\+ (a,b)");
    }

    #[test]
    fn writer_examples() {
        assert_eq!(show("[a,b]"), "[a,b]");
        assert_eq!(show("'#<'([a,b,c])"), "#<([a,b,c])");
        assert_eq!(show("f((a,b))"), "f((a,b))");
        assert_eq!(show("'$x'(-)"), "'$x'(-)");
        assert_eq!(show("X is N mod 2"), "X is N mod 2");
        assert_eq!(show("{a,b}"), "{a,b}");
        assert_eq!(show("*(p(88))"), "*(p(88))");
        assert_eq!(show("[*(p(88))|T]/T-[b,c]"), "[*(p(88))|T]/T-[b,c]");
    }

    #[test]
    fn unbound_evar_prints_with_tilde() {
        assert_eq!(show("vertex(1,~C1)"), "vertex(1,~C1)");
    }

    #[test]
    fn spaced_style() {
        let (t, store) = parse("f(a,[b,c])");
        assert_eq!(Writer::new(&store, &OpTable::default(), WriteStyle::Spaced).write(&t), "f(a, [b, c])");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let mut store = Store::new();
        let ops = OpTable::default();
        let err = read_terms("p(X :-", &ops, &mut store, true).unwrap_err();
        assert!(matches!(err, ReadError::Syntax { line: 1, .. }), "{err:?}");
        let err = read_terms("p(a", &ops, &mut store, true).unwrap_err();
        assert!(matches!(err, ReadError::Syntax { .. }));
        let err = read_terms("a = b = c.", &ops, &mut store, true).unwrap_err();
        assert!(matches!(err, ReadError::Syntax { .. }));
    }

    #[test]
    fn program_clauses() {
        let mut store = Store::new();
        let ops = OpTable::default();
        let cs = read_program("color(red).\nmst0(1,_,[]).\np(X) :- q(X).", &ops, &mut store, true).unwrap();
        assert_eq!(cs.len(), 3);
        assert!(cs[0].body.is_atom("true"));
        assert_eq!(cs[1].key.to_string(), "mst0/3");
        assert!(cs[2].body.is_functor("q", 1));
        let err = read_program("X :- true.", &ops, &mut store, true).unwrap_err();
        assert!(matches!(err, ReadError::Clause { .. }));
    }
}
