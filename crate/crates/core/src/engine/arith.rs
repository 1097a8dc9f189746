use crate::error::EngineError;
use crate::store::Store;
use crate::term::Term;

/// Evaluates an integer expression over `+ - * / mod` and unary `-`.
pub fn eval(store: &Store, t: &Term) -> Result<i64, EngineError> {
    let overflow = || EngineError::Evaluation("int_overflow");
    match store.deref(t) {
        Term::Int(i) => Ok(i),
        Term::Var(_) | Term::EVar(_) => Err(EngineError::Instantiation("is/2".into())),
        Term::Atom(a) => {
            Err(EngineError::Type { context: "is/2".into(), expected: "evaluable", culprit: format!("{a}/0") })
        }
        Term::Compound(c) => match (c.functor.as_str(), &c.args[..]) {
            ("-", [x]) => eval(store, x)?.checked_neg().ok_or_else(overflow),
            ("+", [x]) => eval(store, x),
            (op @ ("+" | "-" | "*" | "/" | "mod"), [x, y]) => {
                let (x, y) = (eval(store, x)?, eval(store, y)?);
                match op {
                    "+" => x.checked_add(y).ok_or_else(overflow),
                    "-" => x.checked_sub(y).ok_or_else(overflow),
                    "*" => x.checked_mul(y).ok_or_else(overflow),
                    _ if y == 0 => Err(EngineError::Evaluation("zero_divisor")),
                    "/" => x.checked_div(y).ok_or_else(overflow),
                    _ => Ok(x.checked_rem(y).map_or(0, |r| if r != 0 && (r < 0) != (y < 0) { r + y } else { r })),
                }
            }
            (name, args) => Err(EngineError::Type {
                context: "is/2".into(),
                expected: "evaluable",
                culprit: format!("{name}/{}", args.len()),
            }),
        },
    }
}
