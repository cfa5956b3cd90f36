//! Browser bindings: verify an algebra, decompose a module and check BGG
//! reciprocity from `.gta` text or a built-in algebra name.
//!
//! Every entry point returns the JSON report rendered by the command layer;
//! failures come back as `{"error": ..., "exit_code": ...}`.

use gradtri::cli::{run, Command, Format, Options, Source};
use wasm_bindgen::prelude::*;

/// `corpus:<name>[:<cutoff>]` selects a built-in algebra; anything else is `.gta` text.
fn source(input: &str) -> Source {
    match input.trim().strip_prefix("corpus:") {
        Some(spec) => Source::Corpus(spec.trim().to_string()),
        None => Source::Text(input.to_string()),
    }
}

fn options(window: Option<i32>) -> Options {
    Options { window: window.map(i64::from), format: Format::Json, ..Options::default() }
}

fn report(input: &str, command: Command, window: Option<i32>) -> String {
    run(&source(input), &command, &options(window)).stdout
}

/// Axiom table for the algebra.
#[wasm_bindgen]
pub fn verify(input: &str) -> String {
    report(input, Command::Verify, None)
}

/// Graded composition multiplicities of a module `FAMILY:block[^*]`.
#[wasm_bindgen]
pub fn decompose(input: &str, module: &str, window: Option<i32>) -> String {
    report(input, Command::Decompose { module: module.to_string() }, window)
}

/// BGG reciprocity for one block, or all blocks when `block` is empty.
#[wasm_bindgen]
pub fn bgg(input: &str, block: &str, window: Option<i32>) -> String {
    let block = (!block.trim().is_empty()).then(|| block.trim().to_string());
    report(input, Command::Bgg { block }, window)
}

/// The built-in algebra as `.gta` text, to seed the editor.
#[wasm_bindgen]
pub fn corpus_text(name: &str) -> String {
    match gradtri::corpus::by_name(name) {
        Ok(data) => gradtri::gta::export_gta(&data),
        Err(e) => format!("# {e}\n"),
    }
}
