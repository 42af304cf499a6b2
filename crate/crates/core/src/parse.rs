//! Text formats: Matrix Market coordinate files and plain edge lists.
//!
//! Both formats are 1-based on disk. Repeated mentions of the same unordered
//! pair are merged to the mean of the absolute values, which makes reading a
//! general matrix that stores both `(i,j)` and `(j,i)` equivalent to
//! symmetrizing it as `(|A| + |A^T|) / 2`.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("unsupported matrix market type: {0}")]
    Unsupported(String),
    #[error("non-positive dimensions {rows}x{cols}")]
    NonPositiveDimensions { rows: i64, cols: i64 },
    #[error("matrix is {rows}x{cols}, adjacency input must be square")]
    NotSquare { rows: usize, cols: usize },
    #[error("line {line}: index {index} out of range 1..={n}")]
    IndexOutOfRange { line: usize, index: i64, n: usize },
    #[error("line {line}: self-loop on vertex {0}", .vertex)]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: non-positive weight {weight}")]
    NonPositiveWeight { line: usize, weight: f64 },
    #[error("expected {expected} entries, found {found}")]
    EntryCountMismatch { expected: usize, found: usize },
    #[error("no edges remain after filtering diagonal and zero entries")]
    ZeroEdges,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum MmField {
    Real,
    Pattern,
}

/// Parses a Matrix Market coordinate file as an undirected weighted graph.
///
/// Accepts `real`, `integer`, and `pattern` fields in `general` or
/// `symmetric` form. Weights are absolute values, diagonal entries are
/// dropped, and the vertex count comes from the header dimensions.
pub fn parse_matrix_market(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text.lines().enumerate();

    let (header_no, header) = lines
        .next()
        .ok_or_else(|| malformed(1, "empty input"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() < 4 || !tokens[0].eq_ignore_ascii_case("%%MatrixMarket") {
        return Err(malformed(header_no + 1, "missing %%MatrixMarket header"));
    }
    if !tokens[1].eq_ignore_ascii_case("matrix") || !tokens[2].eq_ignore_ascii_case("coordinate") {
        return Err(ParseError::Unsupported(format!("{} {}", tokens[1], tokens[2])));
    }
    let field = match tokens[3].to_ascii_lowercase().as_str() {
        "real" | "integer" => MmField::Real,
        "pattern" => MmField::Pattern,
        other => return Err(ParseError::Unsupported(other.to_string())),
    };
    let symmetry = tokens.get(4).map(|s| s.to_ascii_lowercase()).unwrap_or_default();
    match symmetry.as_str() {
        "general" | "symmetric" => {}
        other => return Err(ParseError::Unsupported(other.to_string())),
    }

    // Dimensions line: first non-comment, non-blank line after the header.
    let mut dims: Option<(usize, usize)> = None;
    let mut nnz = 0usize;
    let mut merged: HashMap<(usize, usize), (f64, u32)> = HashMap::new();
    let mut found = 0usize;
    for (no, raw) in lines {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if dims.is_none() {
            let mut it = line.split_whitespace();
            let rows: i64 = next_int(&mut it, line_no)?;
            let cols: i64 = next_int(&mut it, line_no)?;
            let entries: i64 = next_int(&mut it, line_no)?;
            if rows <= 0 || cols <= 0 {
                return Err(ParseError::NonPositiveDimensions { rows, cols });
            }
            if rows != cols {
                return Err(ParseError::NotSquare { rows: rows as usize, cols: cols as usize });
            }
            if entries < 0 {
                return Err(malformed(line_no, "negative entry count"));
            }
            dims = Some((rows as usize, entries as usize));
            nnz = entries as usize;
            continue;
        }
        let (n, _) = dims.unwrap();
        let mut it = line.split_whitespace();
        let i = next_int(&mut it, line_no)?;
        let j = next_int(&mut it, line_no)?;
        let value = match field {
            MmField::Real => next_float(&mut it, line_no)?,
            MmField::Pattern => 1.0,
        };
        if it.next().is_some() {
            return Err(malformed(line_no, "trailing tokens on entry line"));
        }
        for idx in [i, j] {
            if idx < 1 || idx > n as i64 {
                return Err(ParseError::IndexOutOfRange { line: line_no, index: idx, n });
            }
        }
        found += 1;
        let (i, j) = ((i - 1) as usize, (j - 1) as usize);
        if i == j {
            continue; // diagonal dropped
        }
        let key = (i.min(j), i.max(j));
        let slot = merged.entry(key).or_insert((0.0, 0));
        slot.0 += value.abs();
        slot.1 += 1;
    }

    let (n, _) = dims.ok_or_else(|| malformed(0, "missing dimensions line"))?;
    if found != nnz {
        return Err(ParseError::EntryCountMismatch { expected: nnz, found });
    }
    build_merged(n, merged)
}

/// Parses a whitespace-separated edge list: one `i j [w]` per line with
/// 1-based indices and default weight 1. `#` starts a comment; a leading
/// comment whose body is exactly two integers (`# n m`) declares the vertex
/// count, which otherwise defaults to the largest index seen.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut declared_n: Option<usize> = None;
    let mut saw_content = false;
    let mut max_index = 0usize;
    let mut merged: HashMap<(usize, usize), (f64, u32)> = HashMap::new();

    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            if !saw_content && declared_n.is_none() {
                if let Some(rest) = raw.trim().strip_prefix('#') {
                    let toks: Vec<&str> = rest.split_whitespace().collect();
                    if toks.len() == 2 {
                        if let (Ok(n), Ok(_m)) = (toks[0].parse::<usize>(), toks[1].parse::<usize>()) {
                            if n > 0 {
                                declared_n = Some(n);
                            }
                        }
                    }
                }
            }
            continue;
        }
        saw_content = true;
        let mut it = line.split_whitespace();
        let i = next_int(&mut it, line_no)?;
        let j = next_int(&mut it, line_no)?;
        let w = match it.next() {
            Some(tok) => tok
                .parse::<f64>()
                .map_err(|_| malformed(line_no, format!("bad weight token '{tok}'")))?,
            None => 1.0,
        };
        if it.next().is_some() {
            return Err(malformed(line_no, "too many tokens"));
        }
        if i < 1 || j < 1 {
            return Err(malformed(line_no, "indices are 1-based"));
        }
        if w <= 0.0 || !w.is_finite() {
            return Err(ParseError::NonPositiveWeight { line: line_no, weight: w });
        }
        let (i, j) = ((i - 1) as usize, (j - 1) as usize);
        if i == j {
            return Err(ParseError::SelfLoop { line: line_no, vertex: i + 1 });
        }
        max_index = max_index.max(i + 1).max(j + 1);
        let slot = merged.entry((i.min(j), i.max(j))).or_insert((0.0, 0));
        slot.0 += w;
        slot.1 += 1;
    }

    let n = match declared_n {
        Some(n) => {
            if max_index > n {
                return Err(ParseError::IndexOutOfRange { line: 0, index: max_index as i64, n });
            }
            n
        }
        None => max_index,
    };
    if merged.is_empty() {
        return Err(ParseError::ZeroEdges);
    }
    build_merged(n, merged)
}

/// Serializes a graph as an edge list that [`parse_edge_list`] reads back
/// identically (1-based, `# n m` header, ascending edge order).
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} {}", g.n(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", e.i + 1, e.j + 1, e.weight);
    }
    out
}

fn build_merged(n: usize, merged: HashMap<(usize, usize), (f64, u32)>) -> Result<Graph, ParseError> {
    let mut edges: Vec<(usize, usize, f64)> = merged
        .into_iter()
        .filter_map(|((i, j), (sum, count))| {
            let w = sum / f64::from(count);
            (w > 0.0).then_some((i, j, w))
        })
        .collect();
    if edges.is_empty() {
        return Err(ParseError::ZeroEdges);
    }
    edges.sort_by_key(|e| (e.0, e.1));
    Ok(Graph::new(n, edges)?)
}

fn malformed(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Malformed { line, message: message.into() }
}

fn next_int<'a>(it: &mut impl Iterator<Item = &'a str>, line: usize) -> Result<i64, ParseError> {
    let tok = it.next().ok_or_else(|| malformed(line, "missing token"))?;
    tok.parse().map_err(|_| malformed(line, format!("bad integer token '{tok}'")))
}

fn next_float<'a>(it: &mut impl Iterator<Item = &'a str>, line: usize) -> Result<f64, ParseError> {
    let tok = it.next().ok_or_else(|| malformed(line, "missing value token"))?;
    tok.parse().map_err(|_| malformed(line, format!("bad value token '{tok}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mtx_general_real() {
        let text = "%%MatrixMarket matrix coordinate real general\n3 3 2\n1 2 1.0\n2 3 1.0\n";
        let g = parse_matrix_market(text).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 2);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2));
        assert_eq!(g.edges()[0].weight, 1.0);
    }

    #[test]
    fn mtx_both_directions_average() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 2.0\n2 1 -4.0\n";
        let g = parse_matrix_market(text).unwrap();
        assert_eq!(g.edges()[0].weight, 3.0);
    }

    #[test]
    fn mtx_pattern_symmetric() {
        let text = "%%MatrixMarket matrix coordinate pattern symmetric\n4 4 3\n2 1\n3 2\n4 1\n";
        let g = parse_matrix_market(text).unwrap();
        assert_eq!((g.n(), g.edge_count()), (4, 3));
        assert!(g.edges().iter().all(|e| e.weight == 1.0));
    }

    #[test]
    fn mtx_diagonal_only_is_zero_edges() {
        let text = "%%MatrixMarket matrix coordinate real general\n2 2 1\n2 2 5.0\n";
        assert!(matches!(parse_matrix_market(text), Err(ParseError::ZeroEdges)));
    }

    #[test]
    fn mtx_rejects_bad_headers_and_indices() {
        assert!(matches!(
            parse_matrix_market("%%MatrixMarket matrix coordinate complex general\n1 1 0\n"),
            Err(ParseError::Unsupported(_))
        ));
        assert!(matches!(
            parse_matrix_market("not a header\n"),
            Err(ParseError::Malformed { .. })
        ));
        assert!(matches!(
            parse_matrix_market("%%MatrixMarket matrix coordinate real general\n0 0 0\n"),
            Err(ParseError::NonPositiveDimensions { .. })
        ));
        assert!(matches!(
            parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 3 1.0\n"),
            Err(ParseError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            parse_matrix_market("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1.0\n"),
            Err(ParseError::EntryCountMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn edge_list_basics() {
        let g = parse_edge_list("1 2\n2 3\n").unwrap();
        assert_eq!((g.n(), g.edge_count()), (3, 2));
        assert!(g.edges().iter().all(|e| e.weight == 1.0));

        let g = parse_edge_list("1 2 0.1").unwrap();
        assert_eq!((g.n(), g.edge_count()), (2, 1));
        assert_eq!(g.edges()[0].weight, 0.1);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(parse_edge_list("1 1 1\n"), Err(ParseError::SelfLoop { .. })));
        assert!(matches!(parse_edge_list("1 x\n"), Err(ParseError::Malformed { .. })));
        assert!(matches!(parse_edge_list("1 2 -0.5\n"), Err(ParseError::NonPositiveWeight { .. })));
        assert!(matches!(parse_edge_list("# only comments\n"), Err(ParseError::ZeroEdges)));
    }

    #[test]
    fn edge_list_header_overrides_n() {
        let g = parse_edge_list("# 5 2\n1 2\n2 3\n").unwrap();
        assert_eq!(g.n(), 5);
        assert!(matches!(
            parse_edge_list("# 2 1\n1 3\n"),
            Err(ParseError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn edge_list_round_trip() {
        let g = parse_edge_list("1 2 0.25\n4 2 3.5\n# trailing comment\n3 4\n").unwrap();
        let text = write_edge_list(&g);
        let h = parse_edge_list(&text).unwrap();
        assert_eq!(g.n(), h.n());
        assert_eq!(g.edges(), h.edges());
    }
}
