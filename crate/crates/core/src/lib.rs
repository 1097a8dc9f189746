//! A small Prolog engine with interclausal logic variables.
//!
//! A variable written `~Name` is shared by every clause of the loaded
//! program. It is bound by ordinary unification, unbound again on
//! backtracking, and reset to free once a query has been answered.
//!
//! ```
//! use entangle_core::{Engine, EngineConfig};
//!
//! let mut engine = Engine::new(EngineConfig::default());
//! engine.consult("a(~X). b(~X).").unwrap();
//! let answers = engine.solve_all("a(10), b(V)", None).unwrap();
//! assert_eq!(answers.solutions[0].display(), "V = 10");
//! ```

pub mod dcg;
pub mod engine;
pub mod error;
pub mod oracle;
pub mod reader;
pub mod store;
pub mod term;
pub mod transpile;
pub mod unify;

pub use engine::{Answers, Engine, EngineConfig, Solution, Solutions};
pub use error::{EngineError, Error, ReadError, TranspileError};
pub use reader::WriteStyle;
pub use store::Store;
pub use term::{Atom, PredKey, Term, VarId};
