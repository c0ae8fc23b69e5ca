//! Sparse formula grid and its evaluator.
//!
//! Evaluation order is a wave schedule over the dependency graph: every cell
//! of a wave only depends on cells from earlier waves, so the cells of one
//! wave may be computed in any order (or concurrently through a
//! [`Scheduler`]). Results are committed in row-major order within a wave,
//! which makes the output independent of the scheduler.
//!
//! A formula whose result is a multi-cell table spills it into the rectangle
//! anchored at the formula cell. Reads of a spilled cell add an edge to the
//! producing anchor; since those edges are only known after a pass, the
//! evaluator reruns until no new spill edges show up.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Result, ToolkitError};
use crate::formula::{parse_formula, CellRef, FormulaExpr};
use crate::table::ValueTable;

pub const DEFAULT_MAX_CELLS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub enum CellInput {
    Literal(String),
    Formula { source: String, expr: FormulaExpr },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Grid {
    cells: BTreeMap<CellRef, CellInput>,
}

impl Grid {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets a cell from raw text: `=`-prefixed text is a formula, empty text
    /// clears the cell, anything else is a literal.
    pub fn set(&mut self, cell: CellRef, raw: &str) -> Result<()> {
        if raw.is_empty() {
            self.cells.remove(&cell);
        } else if raw.starts_with('=') {
            let expr = parse_formula(raw).map_err(|e| {
                ToolkitError::parse_failure(alloc::format!("{cell}: {e}"))
            })?;
            self.cells.insert(
                cell,
                CellInput::Formula {
                    source: raw.to_string(),
                    expr,
                },
            );
        } else {
            self.cells.insert(cell, CellInput::Literal(raw.to_string()));
        }
        Ok(())
    }

    pub fn set_literal(&mut self, cell: CellRef, text: impl Into<String>) {
        self.cells.insert(cell, CellInput::Literal(text.into()));
    }

    pub fn set_expr(&mut self, cell: CellRef, expr: FormulaExpr) {
        let source = crate::formula::print_formula(&expr);
        self.cells.insert(cell, CellInput::Formula { source, expr });
    }

    pub fn get(&self, cell: CellRef) -> Option<&CellInput> {
        self.cells.get(&cell)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CellRef, &CellInput)> {
        self.cells.iter()
    }

    /// Reads the TSV grid format: one row per line, one cell per tab-separated
    /// field, `=`-prefixed fields are formulas.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let mut grid = Grid::new();
        for (i, line) in crate::render::split_lines(text).into_iter().enumerate() {
            for (j, field) in line.split('\t').enumerate() {
                if field.is_empty() {
                    continue;
                }
                grid.set(CellRef::new(j as u32 + 1, i as u32 + 1), field)?;
            }
        }
        Ok(grid)
    }
}

/// In-band error tokens written into evaluated cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErrorToken {
    Name,
    Cycle,
    Spill,
    Value,
}

impl ErrorToken {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorToken::Name => "#NAME",
            ErrorToken::Cycle => "#CYCLE",
            ErrorToken::Spill => "#SPILL",
            ErrorToken::Value => "#VALUE",
        }
    }
}

impl fmt::Display for ErrorToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CellValue {
    Text(String),
    Error(ErrorToken),
}

impl CellValue {
    pub fn display(&self) -> &str {
        match self {
            CellValue::Text(s) => s,
            CellValue::Error(t) => t.as_str(),
        }
    }

    pub fn error(&self) -> Option<ErrorToken> {
        match self {
            CellValue::Error(t) => Some(*t),
            CellValue::Text(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SpillRegion {
    pub anchor: CellRef,
    pub rows: u32,
    pub cols: u32,
}

impl SpillRegion {
    pub fn contains(&self, cell: CellRef) -> bool {
        cell.row >= self.anchor.row
            && cell.row < self.anchor.row + self.rows
            && cell.column >= self.anchor.column
            && cell.column < self.anchor.column + self.cols
    }

    pub fn overlaps(&self, other: &SpillRegion) -> bool {
        self.anchor.row < other.anchor.row + other.rows
            && other.anchor.row < self.anchor.row + self.rows
            && self.anchor.column < other.anchor.column + other.cols
            && other.anchor.column < self.anchor.column + self.cols
    }

    pub fn cells(&self) -> impl Iterator<Item = CellRef> + '_ {
        (0..self.rows).flat_map(move |r| (0..self.cols).map(move |c| self.anchor.offset(r, c)))
    }
}

/// Result of evaluating a grid: the value of every occupied cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluatedGrid {
    values: BTreeMap<CellRef, CellValue>,
    spills: Vec<SpillRegion>,
}

impl EvaluatedGrid {
    pub fn get(&self, cell: CellRef) -> Option<&CellValue> {
        self.values.get(&cell)
    }

    /// Display text of a cell; empty for unoccupied cells.
    pub fn text(&self, cell: CellRef) -> &str {
        self.values.get(&cell).map_or("", CellValue::display)
    }

    pub fn spills(&self) -> &[SpillRegion] {
        &self.spills
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CellRef, &CellValue)> {
        self.values.iter()
    }

    pub fn cells_with(&self, token: ErrorToken) -> BTreeSet<CellRef> {
        self.values
            .iter()
            .filter(|(_, v)| v.error() == Some(token))
            .map(|(c, _)| *c)
            .collect()
    }

    /// Dense rows from A1 to the bottom-right occupied cell.
    pub fn to_rows(&self) -> Vec<Vec<String>> {
        let max_row = self.values.keys().map(|c| c.row).max().unwrap_or(0);
        let max_col = self.values.keys().map(|c| c.column).max().unwrap_or(0);
        (1..=max_row)
            .map(|r| {
                (1..=max_col)
                    .map(|c| self.text(CellRef::new(c, r)).to_string())
                    .collect()
            })
            .collect()
    }
}

/// Builtin functions callable from formulas.
pub trait FunctionRegistry: Sync {
    fn has_function(&self, name: &str) -> bool;

    fn call(&self, name: &str, args: &[String]) -> Result<ValueTable>;
}

/// Outcome of evaluating one formula cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellOutcome(Outcome);

#[derive(Debug, Clone, PartialEq)]
enum Outcome {
    Scalar(String),
    Table(ValueTable),
    Error(ErrorToken),
}

/// Runs the independent jobs of one wave. Implementations may run them in
/// any order or concurrently; results must be returned in job order.
pub trait Scheduler {
    fn run_wave(&self, jobs: usize, job: &(dyn Fn(usize) -> CellOutcome + Sync)) -> Vec<CellOutcome>;
}

/// Evaluates waves one job at a time.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Scheduler for Sequential {
    fn run_wave(&self, jobs: usize, job: &(dyn Fn(usize) -> CellOutcome + Sync)) -> Vec<CellOutcome> {
        (0..jobs).map(job).collect()
    }
}

pub fn evaluate_grid(grid: &Grid, functions: &dyn FunctionRegistry, max_cells: usize) -> Result<EvaluatedGrid> {
    evaluate_grid_with(grid, functions, max_cells, &Sequential)
}

pub fn evaluate_grid_with(
    grid: &Grid,
    functions: &dyn FunctionRegistry,
    max_cells: usize,
    scheduler: &dyn Scheduler,
) -> Result<EvaluatedGrid> {
    if grid.len() > max_cells {
        return Err(too_many_cells(grid.len(), max_cells));
    }
    let formulas: Vec<CellRef> = grid
        .iter()
        .filter(|(_, input)| matches!(input, CellInput::Formula { .. }))
        .map(|(c, _)| *c)
        .collect();
    let mut spill_edges: BTreeSet<(CellRef, CellRef)> = BTreeSet::new();
    loop {
        let pass = Pass::run(grid, &formulas, &spill_edges, functions, max_cells, scheduler)?;
        let mut discovered = false;
        for cell in &formulas {
            let Some(CellInput::Formula { expr, .. }) = grid.get(*cell) else {
                continue;
            };
            for r in expr.references() {
                if grid.get(r).is_some() {
                    continue;
                }
                if let Some(anchor) = pass.covered.get(&r) {
                    discovered |= spill_edges.insert((*cell, *anchor));
                }
            }
        }
        if !discovered {
            return Ok(pass.finish());
        }
    }
}

fn too_many_cells(n: usize, max: usize) -> ToolkitError {
    ToolkitError::bad_input(alloc::format!(
        "evaluated grid needs {n} cells, limit is {max}"
    ))
}

struct Pass<'a> {
    grid: &'a Grid,
    values: BTreeMap<CellRef, CellValue>,
    /// Spilled (non-anchor) cell → anchor.
    covered: BTreeMap<CellRef, CellRef>,
    spills: Vec<SpillRegion>,
    occupied: usize,
}

impl<'a> Pass<'a> {
    fn run(
        grid: &'a Grid,
        formulas: &[CellRef],
        spill_edges: &BTreeSet<(CellRef, CellRef)>,
        functions: &dyn FunctionRegistry,
        max_cells: usize,
        scheduler: &dyn Scheduler,
    ) -> Result<Self> {
        let index: BTreeMap<CellRef, usize> =
            formulas.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut deps: Vec<Vec<usize>> = vec![Vec::new(); formulas.len()];
        for (i, cell) in formulas.iter().enumerate() {
            if let Some(CellInput::Formula { expr, .. }) = grid.get(*cell) {
                deps[i].extend(expr.references().iter().filter_map(|r| index.get(r).copied()));
            }
        }
        for (from, to) in spill_edges {
            deps[index[from]].push(index[to]);
        }
        for d in &mut deps {
            d.sort_unstable();
            d.dedup();
        }

        let mut pass = Pass {
            grid,
            values: BTreeMap::new(),
            covered: BTreeMap::new(),
            spills: Vec::new(),
            occupied: grid.len(),
        };
        for (cell, input) in grid.iter() {
            if let CellInput::Literal(text) = input {
                pass.values.insert(*cell, CellValue::Text(text.clone()));
            }
        }

        let in_cycle = cycle_members(&deps);
        for (i, cell) in formulas.iter().enumerate() {
            if in_cycle[i] {
                pass.values.insert(*cell, CellValue::Error(ErrorToken::Cycle));
            }
        }

        for wave in waves(&deps, &in_cycle) {
            let cells: Vec<CellRef> = wave.iter().map(|&i| formulas[i]).collect();
            let outcomes = {
                let view = &pass;
                scheduler.run_wave(cells.len(), &|j| {
                    let Some(CellInput::Formula { expr, .. }) = view.grid.get(cells[j]) else {
                        unreachable!("waves only contain formula cells");
                    };
                    CellOutcome(view.eval(expr, functions))
                })
            };
            if outcomes.len() != cells.len() {
                return Err(ToolkitError::bad_input("scheduler returned a short wave"));
            }
            for (cell, outcome) in cells.into_iter().zip(outcomes) {
                pass.commit(cell, outcome.0, max_cells)?;
            }
        }
        Ok(pass)
    }

    fn read(&self, cell: CellRef) -> CellValue {
        self.values
            .get(&cell)
            .cloned()
            .unwrap_or_else(|| CellValue::Text(String::new()))
    }

    fn eval(&self, expr: &FormulaExpr, functions: &dyn FunctionRegistry) -> Outcome {
        match expr {
            FormulaExpr::StringLiteral(s) => Outcome::Scalar(s.clone()),
            FormulaExpr::NumberLiteral(n) => Outcome::Scalar(alloc::format!("{n}")),
            FormulaExpr::CellReference(r) => match self.read(*r) {
                CellValue::Text(s) => Outcome::Scalar(s),
                CellValue::Error(t) => Outcome::Error(t),
            },
            FormulaExpr::Call { name, args } => {
                if !functions.has_function(name) {
                    return Outcome::Error(ErrorToken::Name);
                }
                let mut values = Vec::with_capacity(args.len());
                for arg in args {
                    match self.eval(arg, functions) {
                        Outcome::Scalar(s) => values.push(s),
                        Outcome::Table(t) => values.push(t.get(0, 0).unwrap_or("").to_string()),
                        Outcome::Error(t) => return Outcome::Error(t),
                    }
                }
                match functions.call(name, &values) {
                    Ok(table) => Outcome::Table(table),
                    Err(_) => Outcome::Error(ErrorToken::Value),
                }
            }
        }
    }

    fn commit(&mut self, anchor: CellRef, outcome: Outcome, max_cells: usize) -> Result<()> {
        let table = match outcome {
            Outcome::Scalar(s) => {
                self.values.insert(anchor, CellValue::Text(s));
                return Ok(());
            }
            Outcome::Error(t) => {
                self.values.insert(anchor, CellValue::Error(t));
                return Ok(());
            }
            Outcome::Table(t) => t,
        };
        if table.n_rows() <= 1 && table.n_cols() == 1 {
            let text = table.get(0, 0).unwrap_or("").to_string();
            self.values.insert(anchor, CellValue::Text(text));
            return Ok(());
        }
        if table.is_empty() {
            self.values.insert(anchor, CellValue::Text(String::new()));
            return Ok(());
        }
        let region = SpillRegion {
            anchor,
            rows: table.n_rows() as u32,
            cols: table.n_cols() as u32,
        };
        let blocked = region
            .cells()
            .filter(|c| *c != anchor)
            .any(|c| self.grid.get(c).is_some() || self.covered.contains_key(&c));
        if blocked {
            self.values.insert(anchor, CellValue::Error(ErrorToken::Spill));
            return Ok(());
        }
        let extra = table.n_rows() * table.n_cols() - 1;
        if self.occupied + extra > max_cells {
            return Err(too_many_cells(self.occupied + extra, max_cells));
        }
        self.occupied += extra;
        for (r, row) in table.rows().iter().enumerate() {
            for (c, text) in row.iter().enumerate() {
                let cell = anchor.offset(r as u32, c as u32);
                if cell != anchor {
                    self.covered.insert(cell, anchor);
                }
                self.values.insert(cell, CellValue::Text(text.clone()));
            }
        }
        self.spills.push(region);
        Ok(())
    }

    fn finish(self) -> EvaluatedGrid {
        EvaluatedGrid {
            values: self.values,
            spills: self.spills,
        }
    }
}

/// Marks nodes on a directed cycle: members of a strongly connected
/// component with more than one node, or with a self-loop. Iterative Tarjan.
fn cycle_members(deps: &[Vec<usize>]) -> Vec<bool> {
    const UNVISITED: usize = usize::MAX;
    let n = deps.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut result = vec![false; n];
    let mut next = 0;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        // (node, next edge position)
        let mut frames = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut edge)) = frames.last_mut() {
            if let Some(&w) = deps[v].get(*edge) {
                *edge += 1;
                if index[w] == UNVISITED {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                let cyclic = component.len() > 1 || deps[v].contains(&v);
                if cyclic {
                    for w in component {
                        result[w] = true;
                    }
                }
            }
        }
    }
    result
}

/// Groups acyclic nodes into waves (Kahn levels); each wave is sorted.
fn waves(deps: &[Vec<usize>], in_cycle: &[bool]) -> Vec<Vec<usize>> {
    let n = deps.len();
    let mut pending = vec![0usize; n];
    let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        if in_cycle[v] {
            continue;
        }
        for &w in &deps[v] {
            if !in_cycle[w] {
                pending[v] += 1;
                dependents[w].push(v);
            }
        }
    }
    let mut current: Vec<usize> = (0..n).filter(|&v| !in_cycle[v] && pending[v] == 0).collect();
    let mut out = Vec::new();
    while !current.is_empty() {
        let mut following = Vec::new();
        for &v in &current {
            for &d in &dependents[v] {
                pending[d] -= 1;
                if pending[d] == 0 {
                    following.push(d);
                }
            }
        }
        following.sort_unstable();
        out.push(core::mem::replace(&mut current, following));
    }
    out
}
