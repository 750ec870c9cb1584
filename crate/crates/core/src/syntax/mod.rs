//! Concepts, knowledge bases and the `.dkb` text format.
//!
//! One statement per line: `C => D` (strict), `C ~> D` (typical `C`s are `D`),
//! `A(a)` and `R(a, b)` assertions. `#` starts a comment.

mod concept;
mod kb;
mod lexer;
mod parser;

pub use concept::Concept;
pub use kb::{Assertion, Inclusion, KnowledgeBase, Query, Signature, Typical};
pub use parser::{parse_concept, parse_kb, parse_query, ParseError, ParseErrorKind};
