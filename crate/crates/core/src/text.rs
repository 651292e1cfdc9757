//! Plain-text matrix files.
//!
//! ```text
//! # semifield: max-plus
//! 3 . 0
//! 1 1 0
//! . 1 2
//!
//! 1 1
//! 3 2
//! 3 1
//! ```
//!
//! The optional header names the semifield. Each remaining non-blank line is
//! one matrix row of whitespace-separated scalar tokens; a blank line ends a
//! matrix. Other lines starting with `#` are comments.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::semifield::{Arithmetic, Scalar, Semifield, SemifieldKind};

const HEADER_KEY: &str = "semifield:";

/// Parses a multi-matrix file. The header, when present, overrides
/// `default_kind`.
pub fn parse_matrices(
    text: &str,
    default_kind: SemifieldKind,
    arithmetic: Arithmetic,
) -> Result<(Semifield, Vec<Matrix>)> {
    let mut semifield = Semifield::new(default_kind, arithmetic);
    let mut matrices = Vec::new();
    let mut current: Vec<Vec<Scalar>> = Vec::new();
    let mut current_start = 0;
    let mut seen_data = false;

    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(name) = comment.trim().strip_prefix(HEADER_KEY) {
                if seen_data {
                    return Err(Error::Parse {
                        line: line_no,
                        column: 1,
                        message: "semifield header must precede the matrices".into(),
                    });
                }
                let kind = name
                    .trim()
                    .parse::<SemifieldKind>()
                    .map_err(|e| Error::Parse {
                        line: line_no,
                        column: 1,
                        message: e.to_string(),
                    })?;
                semifield = Semifield::new(kind, arithmetic);
            }
            continue;
        }
        if line.is_empty() {
            if !current.is_empty() {
                matrices.push(finish(
                    semifield,
                    std::mem::take(&mut current),
                    current_start,
                )?);
            }
            continue;
        }
        seen_data = true;
        if current.is_empty() {
            current_start = line_no;
        }
        let mut row = Vec::new();
        for (column, token) in tokens(raw) {
            let value = semifield.parse_scalar(token).map_err(|e| Error::Parse {
                line: line_no,
                column,
                message: e.to_string(),
            })?;
            row.push(value);
        }
        if let Some(first) = current.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: line_no,
                    column: 1,
                    message: format!("row has {} entries, expected {}", row.len(), first.len()),
                });
            }
        }
        current.push(row);
    }
    if !current.is_empty() {
        matrices.push(finish(semifield, current, current_start)?);
    }
    Ok((semifield, matrices))
}

fn finish(semifield: Semifield, rows: Vec<Vec<Scalar>>, line: usize) -> Result<Matrix> {
    Matrix::from_rows(semifield, rows).map_err(|e| Error::Parse {
        line,
        column: 1,
        message: e.to_string(),
    })
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut column = 0;
    let mut offset = 0;
    let mut pieces = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for ch in line.chars() {
        column += 1;
        if ch.is_whitespace() {
            if let Some((col, byte)) = start.take() {
                pieces.push((col, &line[byte..offset]));
            }
        } else if start.is_none() {
            start = Some((column, offset));
        }
        offset += ch.len_utf8();
    }
    if let Some((col, byte)) = start {
        pieces.push((col, &line[byte..]));
    }
    pieces.into_iter()
}

/// Parses a single matrix in the given semifield; a header is not expected.
pub fn parse_matrix(semifield: Semifield, text: &str) -> Result<Matrix> {
    let (_, mut matrices) = parse_matrices(text, semifield.kind(), semifield.arithmetic())?;
    match matrices.len() {
        1 => Ok(matrices.remove(0)),
        n => Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected one matrix, found {n}"),
        }),
    }
}

/// Parses a vector written as comma- or whitespace-separated tokens.
pub fn parse_vector(semifield: Semifield, text: &str) -> Result<Matrix> {
    let entries = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| semifield.parse_scalar(t))
        .collect::<Result<Vec<_>>>()?;
    Matrix::column_vector(semifield, entries)
}

pub fn header(kind: SemifieldKind) -> String {
    format!("# {HEADER_KEY} {}", kind.name())
}

/// Writes matrices with a header, separated by blank lines.
pub fn format_matrices(matrices: &[&Matrix]) -> String {
    let mut out = String::new();
    if let Some(first) = matrices.first() {
        out.push_str(&header(first.semifield().kind()));
        out.push('\n');
    }
    for (i, m) in matrices.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&m.to_string());
    }
    out
}

/// Row-wise string tokens, used by structured reports.
pub fn matrix_tokens(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(Scalar::to_string).collect())
        .collect()
}

/// Entries of a vector as string tokens.
pub fn vector_tokens(v: &Matrix) -> Vec<String> {
    v.entries().iter().map(Scalar::to_string).collect()
}
