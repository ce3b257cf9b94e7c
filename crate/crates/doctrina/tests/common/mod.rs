#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn corpus_file(name: &str) -> PathBuf {
    corpus().join(name)
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(corpus_file(name)).unwrap()
}

/// The `.theory` files of the corpus in name order.
pub fn theory_files() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(corpus())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "theory"))
        .collect();
    out.sort();
    out
}

pub fn model_files() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(corpus().join("models"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    out.sort();
    out
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn doctrina(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_doctrina"))
        .args(args)
        .env_remove("DOCTRINA_MAX_TABLE_BITS")
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}
