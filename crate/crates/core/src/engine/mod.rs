//! Solver, clause database and built-ins.

mod arith;
pub mod builtins;
pub mod db;
mod machine;

use std::collections::HashMap;

pub use db::{Clause, Database};

use crate::dcg::ASSUMPTIONS_PRELUDE;
use crate::error::{EngineError, ReadError};
use crate::reader::{read_program, read_query, Naming, OpTable, WriteStyle, Writer};
use crate::store::{Mark, Store};
use crate::term::Term;
use machine::Machine;

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub occurs_check: bool,
    /// Unknown predicates fail instead of raising an existence error.
    pub unknown_fail: bool,
    /// Accept `~Name` tokens.
    pub evars: bool,
    /// Load the assumption-grammar library at start-up.
    pub prelude: bool,
    pub max_frames: usize,
    /// Layout of rendered answers.
    pub style: WriteStyle,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            occurs_check: false,
            unknown_fail: false,
            evars: true,
            prelude: true,
            max_frames: 1_000_000,
            style: WriteStyle::Compact,
        }
    }
}

/// One engine instance: a binding store, a clause database and the text
/// written by `listing/1`.
pub struct Engine {
    pub(crate) store: Store,
    pub(crate) db: Database,
    pub(crate) ops: OpTable,
    pub(crate) config: EngineConfig,
    pub(crate) output: String,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Self {
        let load_prelude = config.prelude;
        let mut eng = Engine {
            store: Store::new(),
            db: Database::default(),
            ops: OpTable::default(),
            config,
            output: String::new(),
        };
        if load_prelude {
            eng.consult(ASSUMPTIONS_PRELUDE).expect("prelude parses");
        }
        eng
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn store(&self) -> &Store {
        &self.store
    }

    pub fn database(&self) -> &Database {
        &self.db
    }

    pub fn ops(&self) -> &OpTable {
        &self.ops
    }

    /// Adds the clauses of `text`. Nothing is added if any clause is invalid.
    pub fn consult(&mut self, text: &str) -> Result<usize, ReadError> {
        let mark = self.store.mark();
        match read_program(text, &self.ops, &mut self.store, self.config.evars) {
            Ok(clauses) => {
                let n = clauses.len();
                clauses.into_iter().for_each(|c| self.db.add(c));
                Ok(n)
            }
            Err(e) => {
                self.store.rollback_allocations(mark);
                Err(e)
            }
        }
    }

    /// Starts solving `query`. Bindings are reset when the returned iterator
    /// is exhausted or dropped.
    pub fn solve(&mut self, query: &str) -> Result<Solutions<'_>, ReadError> {
        let mark = self.store.mark();
        let rt = match read_query(query, &self.ops, &mut self.store, self.config.evars) {
            Ok(rt) => rt,
            Err(e) => {
                self.store.rollback_allocations(mark);
                return Err(e);
            }
        };
        let machine = Machine::new(rt.term, self.config.max_frames);
        Ok(Solutions { engine: self, machine, vars: rt.vars, mark, started: false, done: false })
    }

    /// Collects every answer of `query`, stopping after `limit` solutions or
    /// at the first error.
    pub fn solve_all(&mut self, query: &str, limit: Option<usize>) -> Result<Answers, ReadError> {
        let mut answers = Answers::default();
        for r in self.solve(query)?.take(limit.unwrap_or(usize::MAX)) {
            match r {
                Ok(s) => answers.solutions.push(s),
                Err(e) => answers.error = Some(e),
            }
        }
        Ok(answers)
    }

    /// Returns and clears the text written by `listing/1`.
    pub fn take_output(&mut self) -> String {
        std::mem::take(&mut self.output)
    }
}

/// The outcome of [`Engine::solve_all`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Answers {
    pub solutions: Vec<Solution>,
    pub error: Option<EngineError>,
}

/// An answer, rendered at the moment of success.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// Every named query variable with its rendered value, in order of first
    /// appearance.
    pub bindings: Vec<(String, String)>,
    /// Rendering of the visible bindings, sorted by name, with variables
    /// numbered by first occurrence. Equal for two answers iff they are
    /// variants.
    pub canonical: String,
}

impl Solution {
    /// `Name = Value` pairs joined by `, `, or `true`. Variables whose name
    /// starts with `_` and unbound variables shown as themselves are omitted.
    pub fn display(&self) -> String {
        let shown: Vec<String> = self
            .bindings
            .iter()
            .filter(|(name, value)| is_visible(name) && name != value)
            .map(|(name, value)| format!("{name} = {value}"))
            .collect();
        if shown.is_empty() {
            "true".into()
        } else {
            shown.join(", ")
        }
    }
}

fn is_visible(name: &str) -> bool {
    !name.starts_with('_')
}

pub struct Solutions<'e> {
    engine: &'e mut Engine,
    machine: Machine,
    vars: Vec<(String, Term)>,
    mark: Mark,
    started: bool,
    done: bool,
}

impl Solutions<'_> {
    /// Names of the query variables, in order of first appearance.
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.vars.iter().map(|(n, _)| n.as_str())
    }

    /// Text written by `listing/1` since the last call.
    pub fn take_output(&mut self) -> String {
        self.engine.take_output()
    }

    fn render(&self) -> Solution {
        let eng = &*self.engine;
        let mut w = Writer::new(&eng.store, &eng.ops, eng.config.style);
        let bindings = self.vars.iter().map(|(n, t)| (n.clone(), w.write_arg(t))).collect();
        let mut canon =
            Writer::new(&eng.store, &eng.ops, WriteStyle::Compact).with_naming(Naming::Canonical(HashMap::new()));
        let mut visible: Vec<&(String, Term)> = self.vars.iter().filter(|(n, _)| is_visible(n)).collect();
        visible.sort_by(|a, b| a.0.cmp(&b.0));
        let canonical =
            visible.into_iter().map(|(n, t)| format!("{n}={}", canon.write_arg(t))).collect::<Vec<_>>().join(", ");
        Solution { bindings, canonical }
    }

    fn finish(&mut self) {
        if !self.done {
            self.done = true;
            self.engine.store.rollback_allocations(self.mark);
        }
    }
}

impl Iterator for Solutions<'_> {
    type Item = Result<Solution, EngineError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let step = if self.started {
            self.machine.retry(self.engine)
        } else {
            self.started = true;
            self.machine.run(self.engine)
        };
        match step {
            Ok(true) => Some(Ok(self.render())),
            Ok(false) => {
                self.finish();
                None
            }
            Err(e) => {
                self.finish();
                Some(Err(e))
            }
        }
    }
}

impl Drop for Solutions<'_> {
    fn drop(&mut self) {
        self.finish();
    }
}
