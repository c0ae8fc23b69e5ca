//! Allocation-only building blocks of the wikitools toolkit.
//!
//! Everything here is pure: title parsing, Wikidata claim simplification,
//! daily count series, value tables, and the formula grid evaluator. IO,
//! HTTP and the command line live in the `wikitools` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod claims;
pub mod error;
pub mod formula;
pub mod grid;
pub mod links;
pub mod render;
pub mod series;
pub mod table;
pub mod title;

pub use crate::claims::{simplify_claims, Claim, DataValue, EntityId, RawClaimSet, SimpleValue, Snak};
pub use crate::error::{ErrorKind, Result, ToolkitError};
pub use crate::formula::{parse_formula, print_formula, CellRef, FormulaExpr};
pub use crate::grid::{
    evaluate_grid, evaluate_grid_with, CellValue, ErrorToken, EvaluatedGrid, FunctionRegistry, Grid, Scheduler,
};
pub use crate::render::{print_grid, print_table, OutputFormat};
pub use crate::series::DailyCountSeries;
pub use crate::table::ValueTable;
pub use crate::title::{parse_qualified, to_request_title, LanguageCode, NamespaceHint, QualifiedTitle};
