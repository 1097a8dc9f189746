//! Term writer.
//!
//! Output re-reads to the same term under the fixed operator table. Variables
//! print under one of three naming schemes, see [`Naming`].

use std::collections::{HashMap, HashSet};

use crate::store::Store;
use crate::term::{Term, VarId, CONS, NIL};

use super::lexer::is_symbol_char;
use super::ops::OpTable;

/// Nesting depth past which output is elided as `...`.
pub const MAX_WRITE_DEPTH: usize = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WriteStyle {
    /// `f(a,b)`, `[a,b]`
    #[default]
    Compact,
    /// `f(a, b)`, `[a, b]`
    Spaced,
}

pub enum Naming<'a> {
    /// Interclausal variables as `~Name`, named variables by their source
    /// name, everything else as `_G<cell>`.
    Source,
    /// Every unbound variable as `_V<k>`, numbered by first occurrence. Two
    /// canonical renderings are equal iff the terms are variants.
    Canonical(HashMap<VarId, usize>),
    /// Explicit names, falling back to [`Naming::Source`].
    Custom(&'a HashMap<VarId, String>),
}

pub struct Writer<'a> {
    store: &'a Store,
    ops: &'a OpTable,
    style: WriteStyle,
    naming: Naming<'a>,
}

impl<'a> Writer<'a> {
    pub fn new(store: &'a Store, ops: &'a OpTable, style: WriteStyle) -> Self {
        Writer { store, ops, style, naming: Naming::Source }
    }

    pub fn with_naming(mut self, naming: Naming<'a>) -> Self {
        self.naming = naming;
        self
    }

    pub fn write(&mut self, t: &Term) -> String {
        self.term(t, 1200, 0)
    }

    /// Writes `t` as an argument (priority 999).
    pub fn write_arg(&mut self, t: &Term) -> String {
        self.term(t, 999, 0)
    }

    /// Writes a clause in listing layout, terminated by `.` and a newline.
    pub fn write_clause(&mut self, head: &Term, body: &Term) -> String {
        let mut s = self.term(head, 1199, 0);
        if !self.store.deref(body).is_atom("true") {
            s.push_str(" :-");
            let goals = conjuncts(self.store, body);
            for (i, g) in goals.iter().enumerate() {
                s.push_str("\n    ");
                s.push_str(&self.term(g, 999, 0));
                if i + 1 < goals.len() {
                    s.push(',');
                }
            }
        }
        terminate(&mut s);
        s.push('\n');
        s
    }

    fn sep(&self) -> &'static str {
        match self.style {
            WriteStyle::Compact => ",",
            WriteStyle::Spaced => ", ",
        }
    }

    fn var_name(&mut self, v: VarId) -> String {
        match &mut self.naming {
            Naming::Canonical(map) => {
                let n = map.len();
                format!("_V{}", map.entry(v).or_insert(n))
            }
            Naming::Custom(names) if names.contains_key(&v) => names[&v].clone(),
            _ => source_var_name(self.store, v),
        }
    }

    fn term(&mut self, t: &Term, max: u16, depth: usize) -> String {
        if depth > MAX_WRITE_DEPTH {
            return "...".into();
        }
        match self.store.deref(t) {
            Term::Int(i) => i.to_string(),
            Term::Var(v) | Term::EVar(v) => self.var_name(v),
            Term::Atom(a) => {
                let s = quote_atom(a.as_str());
                if max < 999 && self.ops.is_op(a.as_str()) {
                    format!("({s})")
                } else {
                    s
                }
            }
            Term::Compound(c) => {
                let name = c.functor.as_str();
                match c.args.len() {
                    2 if name == CONS => self.list(&Term::Compound(c.clone()), depth),
                    1 if name == "{}" => format!("{{{}}}", self.term(&c.args[0], 1200, depth + 1)),
                    2 if self.ops.infix(name).is_some() => {
                        let op = self.ops.infix(name).unwrap();
                        let (la, ra) = op.infix_arg_priorities();
                        let l = self.term(&c.args[0], la, depth + 1);
                        let r = self.term(&c.args[1], ra, depth + 1);
                        let op_text = if name == "," {
                            self.sep().to_string()
                        } else if name.chars().all(char::is_alphanumeric)
                            || matches!(name, ":-" | "-->")
                            || l.ends_with(is_symbol_char)
                            || r.starts_with(is_symbol_char)
                        {
                            format!(" {name} ")
                        } else {
                            name.to_string()
                        };
                        paren(format!("{l}{op_text}{r}"), op.priority > max)
                    }
                    1 if self.ops.prefix(name).is_some() => {
                        let op = self.ops.prefix(name).unwrap();
                        let arg = self.store.deref(&c.args[0]);
                        let a = self.term(&arg, op.prefix_arg_priority(), depth + 1);
                        let space = name.chars().all(char::is_alphanumeric)
                            || matches!(arg, Term::Int(_))
                            || a.starts_with(|ch: char| is_symbol_char(ch) || ch == '(');
                        let s = format!("{name}{}{a}", if space { " " } else { "" });
                        paren(s, op.priority > max)
                    }
                    _ => {
                        let args: Vec<String> = c.args.iter().map(|a| self.term(a, 999, depth + 1)).collect();
                        format!("{}({})", quote_atom(name), args.join(self.sep()))
                    }
                }
            }
        }
    }

    fn list(&mut self, t: &Term, depth: usize) -> String {
        let mut items = Vec::new();
        let mut cur = self.store.deref(t);
        let mut steps = 0;
        while cur.is_functor(CONS, 2) {
            steps += 1;
            if steps > MAX_WRITE_DEPTH {
                items.push("...".to_string());
                cur = Term::nil();
                break;
            }
            items.push(self.term(&cur.args()[0], 999, depth + 1));
            cur = self.store.deref(&cur.args()[1]);
        }
        let mut s = format!("[{}", items.join(self.sep()));
        if !cur.is_atom(NIL) {
            s.push('|');
            s.push_str(&self.term(&cur, 999, depth + 1));
        }
        s.push(']');
        s
    }
}

/// Names for every variable in `terms`, for printing them as one clause.
///
/// `preset` names are used as given. Source names are kept unless `reserved`
/// rejects them; interclausal variables print as `~Name`. Unnamed variables
/// print as `_` when they occur once and as `_G<k>` otherwise.
pub fn variable_names(
    store: &Store,
    terms: &[&Term],
    preset: HashMap<VarId, String>,
    reserved: impl Fn(&str) -> bool,
) -> HashMap<VarId, String> {
    let mut counts: HashMap<VarId, usize> = HashMap::new();
    let mut order = Vec::new();
    for t in terms {
        count_vars(store, t, &mut counts, &mut order);
    }
    let mut used: HashSet<String> = order.iter().filter_map(|v| store.var_name(*v)).map(str::to_string).collect();
    used.extend(preset.values().cloned());
    let mut names = preset;
    let fresh = |prefix: &str, used: &mut HashSet<String>| {
        let name = (0..).map(|k| format!("{prefix}{k}")).find(|n| !used.contains(n)).expect("unbounded");
        used.insert(name.clone());
        name
    };
    for v in order {
        if names.contains_key(&v) {
            continue;
        }
        let name = match store.var_name(v) {
            Some(n) if store.is_evar(v) => format!("~{n}"),
            Some(n) if !reserved(n) => n.to_string(),
            Some(_) => fresh("_U", &mut used),
            None if counts[&v] == 1 => "_".to_string(),
            None => fresh("_G", &mut used),
        };
        names.insert(v, name);
    }
    names
}

fn count_vars(store: &Store, t: &Term, counts: &mut HashMap<VarId, usize>, order: &mut Vec<VarId>) {
    match store.deref(t) {
        Term::Var(v) | Term::EVar(v) => {
            let c = counts.entry(v).or_insert(0);
            if *c == 0 {
                order.push(v);
            }
            *c += 1;
        }
        Term::Compound(c) if !c.ground => c.args.iter().for_each(|a| count_vars(store, a, counts, order)),
        _ => {}
    }
}

pub fn source_var_name(store: &Store, v: VarId) -> String {
    match store.var_name(v) {
        Some(n) if store.is_evar(v) => format!("~{n}"),
        Some(n) => n.to_string(),
        None => format!("_G{}", v.0),
    }
}

fn paren(s: String, wrap: bool) -> String {
    if wrap {
        format!("({s})")
    } else {
        s
    }
}

/// Appends the clause terminator, keeping it apart from a trailing symbol atom.
pub fn terminate(s: &mut String) {
    if s.ends_with(is_symbol_char) {
        s.push(' ');
    }
    s.push('.');
}

fn conjuncts(store: &Store, body: &Term) -> Vec<Term> {
    let mut out = Vec::new();
    let mut cur = store.deref(body);
    while cur.is_functor(",", 2) {
        out.push(cur.args()[0].clone());
        cur = store.deref(&cur.args()[1]);
    }
    out.push(cur);
    out
}

pub fn quote_atom(name: &str) -> String {
    if atom_needs_no_quotes(name) {
        return name.to_string();
    }
    let mut s = String::with_capacity(name.len() + 2);
    s.push('\'');
    for c in name.chars() {
        match c {
            '\'' => s.push_str("\\'"),
            '\\' => s.push_str("\\\\"),
            '\n' => s.push_str("\\n"),
            '\t' => s.push_str("\\t"),
            c => s.push(c),
        }
    }
    s.push('\'');
    s
}

fn atom_needs_no_quotes(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        None => false,
        Some(c) if c.is_lowercase() => chars.all(|c| c.is_alphanumeric() || c == '_'),
        Some(_) if matches!(name, "[]" | "{}" | "!" | ";") => true,
        // A lone `.` would read back as a clause terminator.
        Some(_) if name == "." => false,
        Some(_) => name.chars().all(is_symbol_char),
    }
}
