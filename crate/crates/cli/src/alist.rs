//! The alist sparse parity-check format.
//!
//! ```text
//! n r
//! max_col_weight max_row_weight
//! <n column weights>
//! <r row weights>
//! <n lines: 1-based row indices of each column, zero-padded>
//! <r lines: 1-based column indices of each row, zero-padded>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use ldpc_distance::BitMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlistError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn syntax(line: usize, message: impl Into<String>) -> AlistError {
    AlistError::Syntax {
        line,
        message: message.into(),
    }
}

/// Serializes `m`; indices ascending, single spaces, newline-terminated.
pub fn to_alist_string(m: &BitMatrix) -> String {
    let cols: Vec<Vec<usize>> = (0..m.cols()).map(|c| m.column(c).support()).collect();
    let rows: Vec<Vec<usize>> = m.row_vectors().iter().map(|r| r.support()).collect();
    let max_col = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = rows.iter().map(Vec::len).max().unwrap_or(0);
    let join = |xs: &mut dyn Iterator<Item = usize>| xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");

    let mut out = String::new();
    writeln!(out, "{} {}", m.cols(), m.rows()).unwrap();
    writeln!(out, "{max_col} {max_row}").unwrap();
    writeln!(out, "{}", join(&mut cols.iter().map(Vec::len))).unwrap();
    writeln!(out, "{}", join(&mut rows.iter().map(Vec::len))).unwrap();
    for (lists, width) in [(&cols, max_col), (&rows, max_row)] {
        for list in lists {
            let padded = list.iter().map(|&i| i + 1).chain(std::iter::repeat(0)).take(width);
            writeln!(out, "{}", join(&mut padded.into_iter())).unwrap();
        }
    }
    out
}

pub fn write_alist(m: &BitMatrix, path: &Path) -> Result<(), AlistError> {
    std::fs::write(path, to_alist_string(m)).map_err(|source| AlistError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_alist(path: &Path) -> Result<BitMatrix, AlistError> {
    let text = std::fs::read_to_string(path).map_err(|source| AlistError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_alist(&text)
}

fn numbers(line_no: usize, line: &str) -> Result<Vec<usize>, AlistError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| syntax(line_no, format!("expected a nonnegative integer, found {tok:?}")))
        })
        .collect()
}

fn exactly(line_no: usize, line: &str, count: usize, what: &str) -> Result<Vec<usize>, AlistError> {
    let xs = numbers(line_no, line)?;
    if xs.len() != count {
        return Err(syntax(line_no, format!("expected {count} {what}, found {}", xs.len())));
    }
    Ok(xs)
}

/// Reads one adjacency line: `weight` indices in `1..=bound`, then zero padding.
fn adjacency(
    line_no: usize,
    line: &str,
    weight: usize,
    max_weight: usize,
    bound: usize,
) -> Result<Vec<usize>, AlistError> {
    let xs = numbers(line_no, line)?;
    if xs.len() > max_weight.max(weight) {
        return Err(syntax(line_no, format!("{} entries exceed maximum weight {max_weight}", xs.len())));
    }
    let (idx, pad) = xs.split_at(weight.min(xs.len()));
    if idx.len() < weight || idx.contains(&0) {
        return Err(syntax(line_no, format!("expected {weight} nonzero indices")));
    }
    if pad.iter().any(|&p| p != 0) {
        return Err(syntax(line_no, format!("more than the declared {weight} indices")));
    }
    if let Some(&bad) = idx.iter().find(|&&i| i > bound) {
        return Err(syntax(line_no, format!("index {bad} out of range 1..={bound}")));
    }
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(syntax(line_no, "repeated index"));
    }
    Ok(idx.iter().map(|i| i - 1).collect())
}

pub fn parse_alist(text: &str) -> Result<BitMatrix, AlistError> {
    let lines: Vec<&str> = text.lines().collect();
    let line = |i: usize| -> Result<&str, AlistError> {
        lines
            .get(i)
            .copied()
            .ok_or_else(|| syntax(i + 1, "unexpected end of file"))
    };
    let dims = exactly(1, line(0)?, 2, "dimensions (n r)")?;
    let (n, r) = (dims[0], dims[1]);
    let maxes = exactly(2, line(1)?, 2, "maximum weights")?;
    let (max_col, max_row) = (maxes[0], maxes[1]);
    let col_w = exactly(3, line(2)?, n, "column weights")?;
    let row_w = exactly(4, line(3)?, r, "row weights")?;
    if let Some(&w) = col_w.iter().find(|&&w| w > max_col) {
        return Err(syntax(3, format!("column weight {w} exceeds maximum {max_col}")));
    }
    if let Some(&w) = row_w.iter().find(|&&w| w > max_row) {
        return Err(syntax(4, format!("row weight {w} exceeds maximum {max_row}")));
    }

    let mut m = BitMatrix::zeros(r, n);
    for c in 0..n {
        let no = 5 + c;
        for row in adjacency(no, line(no - 1)?, col_w[c], max_col, r)? {
            m.set(row, c, true);
        }
    }
    for row in 0..r {
        let no = 5 + n + row;
        let listed = adjacency(no, line(no - 1)?, row_w[row], max_row, n)?;
        let mut from_rows = listed.clone();
        from_rows.sort_unstable();
        let from_cols = m.row(row).support();
        if from_rows != from_cols {
            let detail = match (
                from_rows.iter().find(|c| !from_cols.contains(c)),
                from_cols.iter().find(|c| !from_rows.contains(c)),
            ) {
                (Some(c), _) => format!("row {} lists column {} but that column does not list the row", row + 1, c + 1),
                (None, Some(c)) => format!("column {} lists row {} but that row does not list the column", c + 1, row + 1),
                (None, None) => unreachable!(),
            };
            return Err(syntax(no, format!("inconsistent blocks: {detail}")));
        }
    }
    if let Some((i, _)) = lines
        .iter()
        .enumerate()
        .skip(4 + n + r)
        .find(|(_, l)| !l.trim().is_empty())
    {
        return Err(syntax(i + 1, "trailing content after row block"));
    }
    Ok(m)
}
