//! Bundle documents, reports and the `kodaira` command line on top of
//! `kodaira-core`.

pub mod cli;
pub mod document;
pub mod report;

pub use document::{parse_document, to_string, DocumentError};
