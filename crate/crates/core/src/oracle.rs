//! Cross-checks the native engine against transpiled programs.
//!
//! A pairs file lists one `program.pl ⊢ query` per line (`|-` also works).
//! Blank lines and lines starting with `%` are ignored. For each pair the
//! program runs natively and, after transpilation, on an engine with `~`
//! syntax disabled. The multisets of outcomes must be equal.

use std::path::Path;

use crate::engine::{Engine, EngineConfig};
use crate::error::Error;
use crate::transpile::{helper_source, transform_query, transpile};

/// Upper bound on solutions collected per run.
pub const SOLUTION_LIMIT: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair {
    /// Program file name as written in the pairs file.
    pub program: String,
    pub source: String,
    pub query: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Match {
        solutions: usize,
    },
    Mismatch {
        native: Vec<String>,
        transpiled: Vec<String>,
    },
    /// `listing/1` output differs between the two programs by construction.
    Skipped,
    Failed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub pair: Pair,
    pub verdict: Verdict,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        matches!(self.verdict, Verdict::Match { .. } | Verdict::Skipped)
    }

    /// One status line: `OK`, `SKIP`, `MISMATCH` or `ERROR`, then the pair.
    pub fn line(&self) -> String {
        let pair = format!("{} ⊢ {}", self.pair.program, self.pair.query);
        match &self.verdict {
            Verdict::Match { solutions } => format!("OK {pair} (solutions: {solutions})"),
            Verdict::Skipped => format!("SKIP {pair}"),
            Verdict::Mismatch { native, transpiled } => {
                format!("MISMATCH {pair}\n  native:     {native:?}\n  transpiled: {transpiled:?}")
            }
            Verdict::Failed(e) => format!("ERROR {pair}: {e}"),
        }
    }
}

/// Splits a pairs line into program name and query.
pub fn parse_pair_line(line: &str) -> Option<(&str, &str)> {
    let line = line.trim();
    if line.is_empty() || line.starts_with('%') {
        return None;
    }
    let (p, q) = line.split_once('⊢').or_else(|| line.split_once("|-"))?;
    Some((p.trim(), q.trim()))
}

/// Reads `pairs.txt` in `dir` and the programs it names.
pub fn load_pairs(dir: &Path) -> Result<Vec<Pair>, Error> {
    let read = |path: &Path| {
        std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
    };
    let index = read(&dir.join("pairs.txt"))?;
    let mut pairs = Vec::new();
    for line in index.lines() {
        let Some((program, query)) = parse_pair_line(line) else { continue };
        let source = read(&dir.join(program))?;
        pairs.push(Pair { program: program.into(), source, query: query.into() });
    }
    Ok(pairs)
}

/// Sorted outcomes of one run: canonical answers plus `error:<kind>` if the
/// run stopped on an error.
fn outcomes(engine: &mut Engine, query: &str) -> Result<Vec<String>, String> {
    let answers = engine.solve_all(query, Some(SOLUTION_LIMIT)).map_err(|e| e.to_string())?;
    let mut out: Vec<String> = answers.solutions.into_iter().map(|s| s.canonical).collect();
    out.extend(answers.error.map(|e| format!("error:{}", e.kind())));
    out.sort();
    Ok(out)
}

pub fn native_outcomes(source: &str, query: &str) -> Result<Vec<String>, String> {
    let mut engine = Engine::new(EngineConfig::default());
    engine.consult(source).map_err(|e| e.to_string())?;
    outcomes(&mut engine, query)
}

pub fn transpiled_outcomes(source: &str, query: &str) -> Result<Vec<String>, String> {
    let (program, layout) = transpile(source).map_err(|e| e.to_string())?;
    let query = transform_query(query, &layout).map_err(|e| e.to_string())?;
    let mut engine = Engine::new(EngineConfig { evars: false, ..EngineConfig::default() });
    engine.consult(&program.text).map_err(|e| format!("transpiled program: {e}"))?;
    if query.needs_helper && !program.needs_helper {
        engine.consult(&helper_source()).map_err(|e| e.to_string())?;
    }
    outcomes(&mut engine, &query.text)
}

pub fn check_pair(pair: &Pair) -> Verdict {
    if pair.query.contains("listing(") {
        return Verdict::Skipped;
    }
    let native = native_outcomes(&pair.source, &pair.query);
    let transpiled = transpiled_outcomes(&pair.source, &pair.query);
    match (native, transpiled) {
        (Ok(n), Ok(t)) if n == t => Verdict::Match { solutions: n.len() },
        (Ok(native), Ok(transpiled)) => Verdict::Mismatch { native, transpiled },
        (Err(e), _) | (_, Err(e)) => Verdict::Failed(e),
    }
}

pub fn check_pairs_sequential(pairs: &[Pair]) -> Vec<Report> {
    pairs.iter().map(|p| Report { pair: p.clone(), verdict: check_pair(p) }).collect()
}

/// Checks pairs on the rayon pool; every pair uses its own engines. Reports
/// keep the input order.
#[cfg(feature = "parallel")]
pub fn check_pairs_parallel(pairs: &[Pair]) -> Vec<Report> {
    use rayon::prelude::*;
    pairs.par_iter().map(|p| Report { pair: p.clone(), verdict: check_pair(p) }).collect()
}

/// Parallel when the `parallel` feature is enabled, sequential otherwise.
pub fn check_pairs(pairs: &[Pair]) -> Vec<Report> {
    #[cfg(feature = "parallel")]
    return check_pairs_parallel(pairs);
    #[cfg(not(feature = "parallel"))]
    return check_pairs_sequential(pairs);
}
