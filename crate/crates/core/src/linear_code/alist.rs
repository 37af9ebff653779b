//! Reading and writing parity-check matrices in MacKay's alist format.
//!
//! ```text
//! n m
//! max_col_degree max_row_degree
//! <n column degrees>
//! <m row degrees>
//! <n lines: 1-based row indices per column, optionally zero-padded>
//! <m lines: 1-based column indices per row, optionally zero-padded>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::{CodeError, ParityCheckMatrix, Result};

fn bad(msg: impl Into<String>) -> CodeError {
    CodeError::Alist(msg.into())
}

fn parse_line(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| bad(format!("{t:?}: {e}"))))
        .collect()
}

pub fn parse_alist(text: &str) -> Result<ParityCheckMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let mut next = |what: &str| -> Result<Vec<usize>> {
        parse_line(lines.next().ok_or_else(|| bad(format!("missing {what}")))?)
    };
    let dims = next("dimensions")?;
    let [n, m] = dims[..] else {
        return Err(bad("first line must hold n and m"));
    };
    let _max_degrees = next("maximum degrees")?;
    let col_deg = next("column degrees")?;
    let row_deg = next("row degrees")?;
    if col_deg.len() != n || row_deg.len() != m {
        return Err(bad("degree list lengths do not match dimensions"));
    }
    let mut from_cols = vec![Vec::new(); m];
    for (c, &d) in col_deg.iter().enumerate() {
        let entries = next("column adjacency")?;
        let entries: Vec<_> = entries.into_iter().filter(|&x| x != 0).collect();
        if entries.len() != d {
            return Err(bad(format!("column {c}: expected {d} entries")));
        }
        for r in entries {
            if r > m {
                return Err(bad(format!("column {c}: row {r} out of range")));
            }
            from_cols[r - 1].push(c);
        }
    }
    let mut rows = Vec::with_capacity(m);
    for (r, &d) in row_deg.iter().enumerate() {
        let entries = next("row adjacency")?;
        let mut entries: Vec<_> = entries
            .into_iter()
            .filter(|&x| x != 0)
            .map(|c| c - 1)
            .collect();
        if entries.len() != d {
            return Err(bad(format!("row {r}: expected {d} entries")));
        }
        entries.sort_unstable();
        let mut from_col = from_cols[r].clone();
        from_col.sort_unstable();
        if entries != from_col {
            return Err(bad(format!("row {r} disagrees with column lists")));
        }
        rows.push(entries);
    }
    ParityCheckMatrix::from_rows(n, rows)
}

pub fn to_alist(h: &ParityCheckMatrix) -> String {
    let mut out = String::new();
    let col_deg: Vec<usize> = h.cols().iter().map(Vec::len).collect();
    let row_deg: Vec<usize> = h.rows().iter().map(Vec::len).collect();
    let join = |v: &mut dyn Iterator<Item = usize>| {
        v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let _ = writeln!(out, "{} {}", h.n_cols(), h.n_rows());
    let _ = writeln!(
        out,
        "{} {}",
        col_deg.iter().max().unwrap_or(&0),
        row_deg.iter().max().unwrap_or(&0)
    );
    let _ = writeln!(out, "{}", join(&mut col_deg.iter().copied()));
    let _ = writeln!(out, "{}", join(&mut row_deg.iter().copied()));
    for col in h.cols() {
        let _ = writeln!(out, "{}", join(&mut col.iter().map(|r| r + 1)));
    }
    for row in h.rows() {
        let _ = writeln!(out, "{}", join(&mut row.iter().map(|c| c + 1)));
    }
    out
}

pub fn read_alist(path: impl AsRef<Path>) -> Result<ParityCheckMatrix> {
    parse_alist(&std::fs::read_to_string(path)?)
}

pub fn write_alist(h: &ParityCheckMatrix, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_alist(h))?;
    Ok(())
}
