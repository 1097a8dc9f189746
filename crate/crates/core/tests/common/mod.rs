#![allow(dead_code)]

use std::path::PathBuf;

use entangle_core::{Engine, EngineConfig, Solution};

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(name)).unwrap()
}

pub fn engine_with(src: &str, config: EngineConfig) -> Engine {
    let mut e = Engine::new(config);
    e.consult(src).unwrap();
    e
}

pub fn engine(src: &str) -> Engine {
    engine_with(src, EngineConfig::default())
}

pub fn displays(e: &mut Engine, query: &str) -> Vec<String> {
    let answers = e.solve_all(query, None).unwrap();
    assert_eq!(answers.error, None, "{query}");
    answers.solutions.iter().map(Solution::display).collect()
}
