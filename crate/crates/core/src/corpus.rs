//! The built-in model documents.

use crate::algebra::AlgebraPresentation;
use crate::document::parse;

pub const T2: &str = include_str!("../corpus/t2.alg");
pub const D2: &str = include_str!("../corpus/d2.alg");
pub const H3CE: &str = include_str!("../corpus/h3ce.alg");
pub const H3GBV: &str = include_str!("../corpus/h3gbv.alg");
pub const MAT2: &str = include_str!("../corpus/mat2.alg");

/// `(name, document)` in a fixed order.
pub const ALL: [(&str, &str); 5] = [("T2", T2), ("D2", D2), ("H3CE", H3CE), ("H3GBV", H3GBV), ("MAT2", MAT2)];

pub fn source(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| n.eq_ignore_ascii_case(name)).map(|(_, s)| *s)
}

/// Parses a built-in model. Panics only if a shipped document is malformed.
pub fn load(name: &str) -> AlgebraPresentation {
    let text = source(name).unwrap_or_else(|| panic!("no built-in model named {name}"));
    parse(text).unwrap_or_else(|e| panic!("built-in model {name} does not parse: {e}"))
}
