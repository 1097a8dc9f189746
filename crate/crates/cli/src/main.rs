use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use entangle_core::oracle::{check_pairs, load_pairs};
use entangle_core::transpile::transpile;
use entangle_core::{Engine, EngineConfig, WriteStyle};

const STACK_SIZE: usize = 512 * 1024 * 1024;

/// Prolog with interclausal variables: consult files, run queries, transpile,
/// or cross-check the engine against transpiled programs.
#[derive(Parser, Debug)]
#[command(name = "entangle-pl", version)]
struct Cli {
    /// Program files, consulted in order.
    files: Vec<PathBuf>,

    /// Run one query, print every solution and exit.
    #[arg(short, long, value_name = "QUERY", conflicts_with_all = ["transpile", "oracle_check"])]
    query: Option<String>,

    /// Write the program with interclausal variables eliminated (`-` for
    /// standard output).
    #[arg(long, value_name = "OUT", conflicts_with = "oracle_check")]
    transpile: Option<PathBuf>,

    /// Check every pair listed in DIR/pairs.txt natively and transpiled.
    #[arg(long, value_name = "DIR")]
    oracle_check: Option<PathBuf>,

    /// Unify with the occurs check.
    #[arg(long)]
    occurs_check: bool,

    /// Reject `~Name` tokens.
    #[arg(long)]
    no_evar: bool,

    /// Do not load the assumption-grammar library.
    #[arg(long)]
    no_prelude: bool,

    /// Let calls to unknown predicates fail instead of raising an error.
    #[arg(long)]
    unknown_fail: bool,

    /// Stop after N solutions in query mode.
    #[arg(long, value_name = "N")]
    max_solutions: Option<usize>,

    /// Cap on goal and choice-point stack frames.
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    max_frames: usize,

    /// Print answers with a space after each argument separator.
    #[arg(long)]
    spaced: bool,
}

impl Cli {
    fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            occurs_check: self.occurs_check,
            unknown_fail: self.unknown_fail,
            evars: !self.no_evar,
            prelude: !self.no_prelude,
            max_frames: self.max_frames,
            style: if self.spaced { WriteStyle::Spaced } else { WriteStyle::Compact },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let worker = std::thread::Builder::new().stack_size(STACK_SIZE).spawn(move || run(&cli));
    match worker.map(|h| h.join()) {
        Ok(Ok(code)) => ExitCode::from(code),
        _ => {
            eprintln!("entangle-pl: internal error");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> u8 {
    if let Some(dir) = &cli.oracle_check {
        return oracle_check(dir);
    }
    if let Some(out) = &cli.transpile {
        return transpile_files(&cli.files, out);
    }
    let mut engine = Engine::new(cli.engine_config());
    for path in &cli.files {
        let loaded =
            read_file(path).and_then(|text| engine.consult(&text).map_err(|e| format!("{}: {e}", path.display())));
        if let Err(e) = loaded {
            eprintln!("{e}");
            return 2;
        }
    }
    match &cli.query {
        Some(q) => run_query(&mut engine, q, cli.max_solutions),
        None => repl(&mut engine),
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn run_query(engine: &mut Engine, query: &str, limit: Option<usize>) -> u8 {
    let mut out = io::stdout().lock();
    let mut solutions = match engine.solve(query) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    let mut found = 0;
    while limit.is_none_or(|l| found < l) {
        let next = solutions.next();
        let _ = write!(out, "{}", solutions.take_output());
        match next {
            Some(Ok(s)) => {
                found += 1;
                let _ = writeln!(out, "{}.", s.display());
            }
            Some(Err(e)) => {
                eprintln!("{e}");
                return 1;
            }
            None => break,
        }
    }
    if found == 0 {
        let _ = writeln!(out, "false.");
        return 1;
    }
    0
}

fn repl(engine: &mut Engine) -> u8 {
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut out = io::stdout();
    loop {
        let _ = write!(out, "?- ");
        let _ = out.flush();
        let Some(Ok(line)) = lines.next() else {
            let _ = writeln!(out);
            return 0;
        };
        let query = line.trim();
        if query.is_empty() {
            continue;
        }
        if query == "halt." || query == "halt" {
            return 0;
        }
        let mut solutions = match engine.solve(query) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("{e}");
                continue;
            }
        };
        loop {
            let next = solutions.next();
            let _ = write!(out, "{}", solutions.take_output());
            match next {
                Some(Ok(s)) => {
                    let _ = write!(out, "{}", s.display());
                    let _ = out.flush();
                    let more = matches!(lines.next(), Some(Ok(reply)) if reply.trim() == ";");
                    if !more {
                        let _ = writeln!(out, ".");
                        break;
                    }
                    let _ = writeln!(out, " ;");
                }
                Some(Err(e)) => {
                    let _ = out.flush();
                    eprintln!("{e}");
                    break;
                }
                None => {
                    let _ = writeln!(out, "false.");
                    break;
                }
            }
        }
    }
}

fn transpile_files(files: &[PathBuf], out: &Path) -> u8 {
    let mut program = String::new();
    for path in files {
        match read_file(path) {
            Ok(text) => {
                program.push_str(&text);
                program.push('\n');
            }
            Err(e) => {
                eprintln!("{e}");
                return 2;
            }
        }
    }
    let text = match transpile(&program) {
        Ok((output, _)) => output.text,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    let written = if out == Path::new("-") {
        io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string())
    } else {
        std::fs::write(out, text).map_err(|e| format!("{}: {e}", out.display()))
    };
    match written {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            2
        }
    }
}

fn oracle_check(dir: &Path) -> u8 {
    let pairs = match load_pairs(dir) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    let reports = check_pairs(&pairs);
    for r in &reports {
        println!("{}", r.line());
    }
    let failed = reports.iter().filter(|r| !r.is_ok()).count();
    println!("{} pairs, {failed} failed", reports.len());
    u8::from(failed > 0)
}
