//! Formula expressions: `=NAME(arg, ...)` with string and number literals,
//! A1-style cell references and nested calls.
//!
//! Grammar (whitespace allowed between any two tokens):
//!
//! ```text
//! formula := '=' expr
//! expr    := string | number | cellref | call
//! call    := NAME '(' [ expr { ',' expr } ] ')'
//! string  := '"' { any char, with "" for a quote } '"'
//! number  := ['-'] digits [ '.' digits ]
//! cellref := LETTERS DIGITS
//! ```

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{ErrorKind, ToolkitError};

/// A1-style cell address, both indices 1-based. Orders row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellRef {
    pub row: u32,
    pub column: u32,
}

/// Columns beyond `ZZZZZZ` are rejected to keep indices in `u32`.
const MAX_COLUMN_LETTERS: usize = 6;

impl CellRef {
    pub fn new(column: u32, row: u32) -> Self {
        assert!(column >= 1 && row >= 1, "cell indices are 1-based");
        Self { row, column }
    }

    /// Offsets this cell by `down` rows and `right` columns.
    pub fn offset(self, down: u32, right: u32) -> Self {
        Self {
            row: self.row + down,
            column: self.column + right,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let split = s.find(|c: char| !c.is_ascii_alphabetic())?;
        let (letters, digits) = s.split_at(split);
        let column = letters_to_column(letters)?;
        if digits.is_empty() || digits.starts_with('0') || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let row = digits.parse().ok()?;
        Some(Self { row, column })
    }
}

/// `A` → 1, `Z` → 26, `AA` → 27.
pub fn letters_to_column(letters: &str) -> Option<u32> {
    if letters.is_empty() || letters.len() > MAX_COLUMN_LETTERS {
        return None;
    }
    letters.bytes().try_fold(0u32, |acc, b| {
        let b = b.to_ascii_uppercase();
        b.is_ascii_uppercase()
            .then(|| acc * 26 + u32::from(b - b'A' + 1))
    })
}

pub fn column_to_letters(mut column: u32) -> String {
    assert!(column >= 1);
    let mut out = Vec::new();
    while column > 0 {
        let rem = (column - 1) % 26;
        out.push(b'A' + rem as u8);
        column = (column - 1) / 26;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

impl fmt::Display for CellRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", column_to_letters(self.column), self.row)
    }
}

impl FromStr for CellRef {
    type Err = ToolkitError;

    fn from_str(s: &str) -> Result<Self, ToolkitError> {
        Self::parse(s).ok_or_else(|| ToolkitError::bad_input(alloc::format!("invalid cell reference {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FormulaExpr {
    StringLiteral(String),
    NumberLiteral(f64),
    CellReference(CellRef),
    Call { name: String, args: Vec<FormulaExpr> },
}

impl FormulaExpr {
    pub fn call(name: &str, args: Vec<FormulaExpr>) -> Self {
        FormulaExpr::Call {
            name: name.to_string(),
            args,
        }
    }

    /// Every cell reference in the expression, in source order.
    pub fn references(&self) -> Vec<CellRef> {
        let mut out = Vec::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs(&self, out: &mut Vec<CellRef>) {
        match self {
            FormulaExpr::CellReference(r) => out.push(*r),
            FormulaExpr::Call { args, .. } => args.iter().for_each(|a| a.collect_refs(out)),
            _ => {}
        }
    }
}

impl fmt::Display for FormulaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaExpr::StringLiteral(s) => {
                f.write_str("\"")?;
                for part in s.split('"').enumerate() {
                    if part.0 > 0 {
                        f.write_str("\"\"")?;
                    }
                    f.write_str(part.1)?;
                }
                f.write_str("\"")
            }
            FormulaExpr::NumberLiteral(n) => write!(f, "{n}"),
            FormulaExpr::CellReference(r) => write!(f, "{r}"),
            FormulaExpr::Call { name, args } => {
                write!(f, "{name}(")?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{arg}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Prints a formula with its leading `=`.
pub fn print_formula(expr: &FormulaExpr) -> String {
    alloc::format!("={expr}")
}

/// Parse error carrying the 0-based character offset of the offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for FormulaParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)
    }
}

impl From<FormulaParseError> for ToolkitError {
    fn from(e: FormulaParseError) -> Self {
        ToolkitError::new(ErrorKind::ParseFailure, e.to_string())
    }
}

pub fn parse_formula(source: &str) -> Result<FormulaExpr, FormulaParseError> {
    let mut parser = Parser {
        chars: source.chars().collect(),
        pos: 0,
    };
    parser.skip_ws();
    if parser.peek() != Some('=') {
        return Err(parser.error("formula must start with '='"));
    }
    parser.pos += 1;
    let expr = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> FormulaParseError {
        self.error_at(self.pos, message)
    }

    fn error_at(&self, offset: usize, message: &str) -> FormulaParseError {
        FormulaParseError {
            offset,
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<FormulaExpr, FormulaParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("expected an expression")),
            Some('"') => self.string(),
            Some(c) if c.is_ascii_digit() || c == '-' || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.name_or_ref(),
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn string(&mut self) -> Result<FormulaExpr, FormulaParseError> {
        let open = self.pos;
        self.pos += 1;
        let mut text = String::new();
        loop {
            match self.peek() {
                None => return Err(self.error_at(open, "unterminated string literal")),
                Some('"') if self.chars.get(self.pos + 1) == Some(&'"') => {
                    text.push('"');
                    self.pos += 2;
                }
                Some('"') => {
                    self.pos += 1;
                    return Ok(FormulaExpr::StringLiteral(text));
                }
                Some(c) => {
                    text.push(c);
                    self.pos += 1;
                }
            }
        }
    }

    fn number(&mut self) -> Result<FormulaExpr, FormulaParseError> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.pos += 1;
        }
        let int_start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == int_start {
            return Err(self.error_at(start, "malformed number"));
        }
        if self.peek() == Some('.') {
            self.pos += 1;
            let frac_start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == frac_start {
                return Err(self.error_at(start, "malformed number"));
            }
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<f64>()
            .map(FormulaExpr::NumberLiteral)
            .map_err(|_| self.error_at(start, "malformed number"))
    }

    fn name_or_ref(&mut self) -> Result<FormulaExpr, FormulaParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let word: String = self.chars[start..self.pos].iter().collect();
        let after_word = self.pos;
        self.skip_ws();
        if self.peek() == Some('(') {
            let open = self.pos;
            self.pos += 1;
            let args = self.args(open)?;
            return Ok(FormulaExpr::Call {
                name: word.to_ascii_uppercase(),
                args,
            });
        }
        self.pos = after_word;
        CellRef::parse(&word)
            .map(FormulaExpr::CellReference)
            .ok_or_else(|| self.error_at(start, "expected a cell reference or a call"))
    }

    fn args(&mut self, open: usize) -> Result<Vec<FormulaExpr>, FormulaParseError> {
        let mut args = Vec::new();
        self.skip_ws();
        match self.peek() {
            None => return Err(self.error_at(open, "unclosed '('")),
            Some(')') => {
                self.pos += 1;
                return Ok(args);
            }
            Some(_) => {}
        }
        loop {
            args.push(self.expr().map_err(|e| {
                if e.offset >= self.chars.len() {
                    self.error_at(open, "unclosed '('")
                } else {
                    e
                }
            })?);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    return Ok(args);
                }
                None => return Err(self.error_at(open, "unclosed '('")),
                Some(_) => return Err(self.error("expected ',' or ')'")),
            }
        }
    }
}
