//! Text output of evaluated grids and tables.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::ToolkitError;
use crate::grid::EvaluatedGrid;
use crate::table::ValueTable;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum OutputFormat {
    #[default]
    Tsv,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = ToolkitError;

    fn from_str(s: &str) -> Result<Self, ToolkitError> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(OutputFormat::Tsv),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(ToolkitError::bad_input(alloc::format!(
                "unknown output format {other:?}"
            ))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Tsv => "tsv",
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

pub fn print_grid(grid: &EvaluatedGrid, format: OutputFormat) -> String {
    print_rows(&grid.to_rows(), format)
}

pub fn print_table(table: &ValueTable, format: OutputFormat) -> String {
    print_rows(table.rows(), format)
}

/// TSV and CSV end every row with `\n`; JSON is a row-major array of arrays.
pub fn print_rows(rows: &[Vec<String>], format: OutputFormat) -> String {
    match format {
        OutputFormat::Tsv => rows.iter().map(|r| r.join("\t") + "\n").collect(),
        OutputFormat::Csv => rows
            .iter()
            .map(|r| {
                let fields: Vec<String> = r.iter().map(|f| csv_field(f)).collect();
                fields.join(",") + "\n"
            })
            .collect(),
        OutputFormat::Json => serde_json::to_string(rows).expect("strings always serialize"),
    }
}

fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        alloc::format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Lines of `text` without terminators; a final trailing newline does not
/// start another line.
pub fn split_lines(text: &str) -> Vec<&str> {
    if text.is_empty() {
        return Vec::new();
    }
    let body = text.strip_suffix('\n').unwrap_or(text);
    body.split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect()
}

pub fn parse_tsv(text: &str) -> Vec<Vec<String>> {
    split_lines(text)
        .into_iter()
        .map(|l| l.split('\t').map(str::to_string).collect())
        .collect()
}
