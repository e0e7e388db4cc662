//! The three example grammars shipped with the crate.

use crate::grammar::{parse_grammar, Grammar};

pub const SIERPINSKI: &str = include_str!("../assets/sierpinski.hrg");
pub const SERIES_PARALLEL: &str = include_str!("../assets/sp.hrg");
pub const FLOWCHART: &str = include_str!("../assets/flowchart.hrg");

pub fn sierpinski() -> Grammar {
    parse_grammar(SIERPINSKI).expect("bundled grammar is valid")
}

pub fn series_parallel() -> Grammar {
    parse_grammar(SERIES_PARALLEL).expect("bundled grammar is valid")
}

pub fn flowchart() -> Grammar {
    parse_grammar(FLOWCHART).expect("bundled grammar is valid")
}

/// Looks up a bundled grammar by its short name.
pub fn by_name(name: &str) -> Option<Grammar> {
    match name {
        "sierpinski" => Some(sierpinski()),
        "sp" | "series-parallel" => Some(series_parallel()),
        "flowchart" => Some(flowchart()),
        _ => None,
    }
}

pub const NAMES: [&str; 3] = ["sierpinski", "sp", "flowchart"];
