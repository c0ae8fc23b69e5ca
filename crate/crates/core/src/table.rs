use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Result, ToolkitError};

/// Rectangular table of strings: the shape every toolkit function spills
/// into a grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValueTable {
    rows: Vec<Vec<String>>,
    n_cols: usize,
}

impl ValueTable {
    /// An empty table with `n_cols` columns.
    pub fn empty(n_cols: usize) -> Self {
        assert!(n_cols >= 1, "a table has at least one column");
        Self {
            rows: Vec::new(),
            n_cols,
        }
    }

    pub fn from_rows(n_cols: usize, rows: Vec<Vec<String>>) -> Result<Self> {
        if n_cols == 0 {
            return Err(ToolkitError::bad_input("a table has at least one column"));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != n_cols) {
            return Err(ToolkitError::bad_input(alloc::format!(
                "row {i} has {} cells, expected {n_cols}",
                rows[i].len()
            )));
        }
        Ok(Self { rows, n_cols })
    }

    pub fn column<I, S>(values: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            rows: values.into_iter().map(|v| alloc::vec![v.into()]).collect(),
            n_cols: 1,
        }
    }

    pub fn pairs<I, A, B>(values: I) -> Self
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<String>,
        B: Into<String>,
    {
        Self {
            rows: values
                .into_iter()
                .map(|(a, b)| alloc::vec![a.into(), b.into()])
                .collect(),
            n_cols: 2,
        }
    }

    pub fn single(value: impl Into<String>) -> Self {
        Self::column([value])
    }

    pub fn push_row(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.n_cols {
            return Err(ToolkitError::bad_input(alloc::format!(
                "row has {} cells, expected {}",
                row.len(),
                self.n_cols
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<String>> {
        self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&str> {
        self.rows.get(row)?.get(col).map(String::as_str)
    }

    /// Values of the given column, top to bottom.
    pub fn column_values(&self, col: usize) -> impl Iterator<Item = &str> {
        self.rows.iter().filter_map(move |r| r.get(col).map(String::as_str))
    }
}
