//! Grid interchange formats.
//!
//! * `text`: a header line `rows cols alphabet`, then one line per row of
//!   space-separated integers.
//! * `pbm`: plain Netpbm bitmap (`P1`), binary grids only. `#` comments are
//!   accepted on load; bits may be separated by whitespace or packed.

use std::fmt::Write as _;

use super::{Grid2D, GridError, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridFormat {
    Text,
    Pbm,
}

impl std::str::FromStr for GridFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" | "txt" => Ok(GridFormat::Text),
            "pbm" => Ok(GridFormat::Pbm),
            other => Err(format!(
                "unknown grid format `{other}` (expected text or pbm)"
            )),
        }
    }
}

/// A malformed grid file. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub fn save_grid(grid: &Grid2D, format: GridFormat) -> Result<Vec<u8>, GridError> {
    let mut out = String::new();
    match format {
        GridFormat::Text => {
            let _ = writeln!(out, "{} {} {}", grid.rows(), grid.cols(), grid.alphabet());
            for r in 0..grid.rows() {
                write_row(&mut out, grid.row(r));
            }
        }
        GridFormat::Pbm => {
            if !grid.is_binary() {
                return Err(GridError::NotBinary {
                    alphabet: grid.alphabet(),
                });
            }
            let _ = writeln!(out, "P1\n{} {}", grid.cols(), grid.rows());
            for r in 0..grid.rows() {
                write_row(&mut out, grid.row(r));
            }
        }
    }
    Ok(out.into_bytes())
}

fn write_row(out: &mut String, row: &[Symbol]) {
    for (i, v) in row.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{v}");
    }
    out.push('\n');
}

pub fn load_grid(bytes: &[u8], format: GridFormat) -> Result<Grid2D, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let (line, column) = position_of(bytes, e.valid_up_to());
        ParseError {
            line,
            column,
            message: "input is not valid UTF-8".into(),
        }
    })?;
    match format {
        GridFormat::Text => load_text(text),
        GridFormat::Pbm => load_pbm(text),
    }
}

fn position_of(bytes: &[u8], offset: usize) -> (usize, usize) {
    let before = &bytes[..offset];
    let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
    let column = offset
        - before
            .iter()
            .rposition(|&b| b == b'\n')
            .map_or(0, |p| p + 1)
        + 1;
    (line, column)
}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn number(&self, what: &str) -> Result<usize, ParseError> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected {what}, found `{}`", self.text)))
    }
}

fn tokens(text: &str, comments: bool) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = if comments {
            line.split('#').next().unwrap_or("")
        } else {
            line
        };
        let mut start = None;
        for (pos, ch) in line
            .char_indices()
            .chain(std::iter::once((line.len(), ' ')))
        {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    out.push(Token {
                        text: &line[s..pos],
                        line: i + 1,
                        column: line[..s].chars().count() + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
    }
    out
}

fn end_of_input(text: &str) -> ParseError {
    ParseError {
        line: text.lines().count().max(1),
        column: text.lines().last().map_or(1, |l| l.chars().count() + 1),
        message: "unexpected end of input".into(),
    }
}

fn load_text(text: &str) -> Result<Grid2D, ParseError> {
    let toks = tokens(text, false);
    let mut it = toks.iter();
    let mut next = |what: &str| -> Result<Token<'_>, ParseError> {
        it.next().copied().ok_or_else(|| {
            let mut e = end_of_input(text);
            e.message = format!("unexpected end of input, expected {what}");
            e
        })
    };
    let rows_tok = next("row count")?;
    let rows = rows_tok.number("row count")?;
    let cols_tok = next("column count")?;
    let cols = cols_tok.number("column count")?;
    let alpha_tok = next("alphabet size")?;
    let alphabet = alpha_tok.number("alphabet size")?;
    if rows == 0 || cols == 0 {
        return Err(rows_tok.error("grid dimensions must be positive"));
    }
    if alphabet == 0 || alphabet > u32::MAX as usize {
        return Err(alpha_tok.error("alphabet size must be in 1..=u32::MAX"));
    }
    let mut cells = Vec::with_capacity(rows * cols);
    let mut expected_line = None;
    for k in 0..rows * cols {
        let tok = next("cell value")?;
        if k % cols == 0 {
            if expected_line == Some(tok.line) {
                return Err(tok.error(format!("row {} is longer than {cols} cells", k / cols)));
            }
            expected_line = Some(tok.line);
        } else if Some(tok.line) != expected_line {
            return Err(tok.error(format!("row {} is shorter than {cols} cells", k / cols + 1)));
        }
        let v = tok.number("cell value")?;
        if v >= alphabet {
            return Err(tok.error(format!(
                "cell value {v} outside alphabet of size {alphabet}"
            )));
        }
        cells.push(v as Symbol);
    }
    if let Some(extra) = it.next() {
        return Err(extra.error("unexpected trailing data"));
    }
    Grid2D::new(rows, cols, alphabet as u32, cells).map_err(|e| rows_tok.error(e.to_string()))
}

fn load_pbm(text: &str) -> Result<Grid2D, ParseError> {
    let toks = tokens(text, true);
    let mut it = toks.iter();
    let magic = it.next().ok_or_else(|| end_of_input(text))?;
    if magic.text != "P1" {
        return Err(magic.error(format!("expected magic `P1`, found `{}`", magic.text)));
    }
    let width_tok = it.next().ok_or_else(|| end_of_input(text))?;
    let cols = width_tok.number("width")?;
    let height_tok = it.next().ok_or_else(|| end_of_input(text))?;
    let rows = height_tok.number("height")?;
    if rows == 0 || cols == 0 {
        return Err(width_tok.error("image dimensions must be positive"));
    }
    let mut cells = Vec::with_capacity(rows * cols);
    for tok in it {
        for (offset, ch) in tok.text.chars().enumerate() {
            let bit = match ch {
                '0' => 0,
                '1' => 1,
                other => {
                    return Err(ParseError {
                        line: tok.line,
                        column: tok.column + offset,
                        message: format!("expected bit 0 or 1, found `{other}`"),
                    })
                }
            };
            if cells.len() == rows * cols {
                return Err(ParseError {
                    line: tok.line,
                    column: tok.column + offset,
                    message: "more bits than width x height".into(),
                });
            }
            cells.push(bit);
        }
    }
    if cells.len() < rows * cols {
        let mut e = end_of_input(text);
        e.message = format!("expected {} bits, found {}", rows * cols, cells.len());
        return Err(e);
    }
    Grid2D::new(rows, cols, 2, cells).map_err(|e| magic.error(e.to_string()))
}
