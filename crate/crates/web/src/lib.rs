//! Browser bindings: each function takes an algebra document (or a built-in model name)
//! and returns the report the CLI would print.

use hptk::commands::{self, Output, SplittingChoice, TransferOptions};
use hptk::corpus;
use wasm_bindgen::prelude::*;

fn resolve(doc: &str) -> &str {
    corpus::source(doc.trim()).unwrap_or(doc)
}

fn report(out: Output) -> String {
    let text = out.text.trim_end();
    if out.certificate.is_none() && out.status != commands::Status::Success {
        format!("error: {text}\n")
    } else {
        format!("{text}\n")
    }
}

#[wasm_bindgen]
pub fn validate(doc: &str) -> String {
    report(commands::validate(resolve(doc)))
}

/// A∞ transfer to cohomology up to `arity`, capped at 6 in the browser.
#[wasm_bindgen]
pub fn transfer(doc: &str, arity: usize) -> String {
    let opts = TransferOptions { arity: arity.min(6), ..Default::default() };
    report(commands::transfer(resolve(doc), opts))
}

#[wasm_bindgen]
pub fn massey(doc: &str, x: &str, y: &str, z: &str) -> String {
    report(commands::massey(resolve(doc), [x, y, z], SplittingChoice::Auto))
}

#[wasm_bindgen]
pub fn models() -> String {
    corpus::ALL.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(" ")
}

#[wasm_bindgen]
pub fn model_source(name: &str) -> String {
    corpus::source(name).unwrap_or_default().to_owned()
}
