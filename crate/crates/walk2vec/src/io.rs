//! Text file formats.
//!
//! * Edge list: first line `n m`, then `m` lines `i j` with 0-based ids.
//! * Dictionary: header `d K lambda1`, then `K` lines of `d` values, one
//!   atom per line.
//! * CSV tables with floats written with 17 significant digits, which
//!   round-trips every `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use walk2vec_core::{Dictionary, Graph};

use crate::error::FormatError;

/// 17 significant digits in scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, FormatError> {
    tok.parse().map_err(|_| FormatError::at(line, format!("cannot parse {what} from {tok:?}")))
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.edge_count()).unwrap();
    for (i, j) in g.edges() {
        writeln!(out, "{i} {j}").unwrap();
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or_else(|| FormatError::at(1, "missing header"))?;
    let mut toks = header.split_whitespace();
    let (Some(n), Some(m), None) = (toks.next(), toks.next(), toks.next()) else {
        return Err(FormatError::at(hline + 1, "header must be `n m`"));
    };
    let n: usize = parse_num(n, hline + 1, "node count")?;
    let m: usize = parse_num(m, hline + 1, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    for (idx, line) in lines {
        let mut toks = line.split_whitespace();
        let (Some(a), Some(b), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(FormatError::at(idx + 1, "edge line must be `i j`"));
        };
        edges.push((parse_num(a, idx + 1, "node id")?, parse_num(b, idx + 1, "node id")?));
    }
    if edges.len() != m {
        return Err(FormatError::at(0, format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::from_edge_list(n, &edges).map_err(|e| FormatError::at(0, e.to_string()))
}

pub fn read_edge_list(path: &Path) -> anyhow::Result<Graph> {
    let text = fs::read_to_string(path)?;
    parse_edge_list(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

pub fn write_dictionary(dict: &Dictionary) -> String {
    let mut out = String::new();
    writeln!(out, "{} {} {}", dict.dim(), dict.atoms(), fmt_f64(dict.lambda1())).unwrap();
    for j in 0..dict.atoms() {
        let row: Vec<String> = dict.atom(j).iter().map(|&v| fmt_f64(v)).collect();
        writeln!(out, "{}", row.join(" ")).unwrap();
    }
    out
}

pub fn parse_dictionary(text: &str) -> Result<Dictionary, FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or_else(|| FormatError::at(1, "missing header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(FormatError::at(hline + 1, "header must be `d K lambda1`"));
    }
    let dim: usize = parse_num(toks[0], hline + 1, "dimension")?;
    let atoms: usize = parse_num(toks[1], hline + 1, "atom count")?;
    let lambda1: f64 = parse_num(toks[2], hline + 1, "lambda1")?;
    let mut columns = Vec::with_capacity(dim * atoms);
    let mut rows = 0;
    for (idx, line) in lines {
        let before = columns.len();
        for tok in line.split_whitespace() {
            columns.push(parse_num::<f64>(tok, idx + 1, "atom entry")?);
        }
        if columns.len() - before != dim {
            return Err(FormatError::at(idx + 1, format!("expected {dim} values per atom")));
        }
        rows += 1;
    }
    if rows != atoms {
        return Err(FormatError::at(0, format!("header announces {atoms} atoms, found {rows}")));
    }
    Dictionary::from_columns(dim, atoms, lambda1, columns).map_err(|e| FormatError::at(0, e.to_string()))
}

pub fn read_dictionary(path: &Path) -> anyhow::Result<Dictionary> {
    let text = fs::read_to_string(path)?;
    parse_dictionary(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

/// Embedding table: `graph_id,f0,f1,...`.
pub fn write_embedding_csv(rows: &[(String, Vec<f64>)]) -> String {
    let dim = rows.first().map_or(0, |r| r.1.len());
    let mut out = String::from("graph_id");
    for k in 0..dim {
        write!(out, ",f{k}").unwrap();
    }
    out.push('\n');
    for (id, values) in rows {
        out.push_str(id);
        for &v in values {
            out.push(',');
            out.push_str(&fmt_f64(v));
        }
        out.push('\n');
    }
    out
}

pub fn parse_embedding_csv(text: &str) -> Result<Vec<(String, Vec<f64>)>, FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| FormatError::at(1, "missing header"))?;
    let dim = header.split(',').count().saturating_sub(1);
    if !header.starts_with("graph_id") {
        return Err(FormatError::at(1, "header must start with graph_id"));
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let mut toks = line.split(',');
        let id = toks.next().unwrap_or_default().to_string();
        let values = toks
            .map(|t| parse_num::<f64>(t.trim(), idx + 1, "coordinate"))
            .collect::<Result<Vec<f64>, _>>()?;
        if values.len() != dim {
            return Err(FormatError::at(idx + 1, format!("expected {dim} coordinates")));
        }
        rows.push((id, values));
    }
    Ok(rows)
}

pub fn read_embedding_csv(path: &Path) -> anyhow::Result<Vec<(String, Vec<f64>)>> {
    let text = fs::read_to_string(path)?;
    parse_embedding_csv(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edge_list(5, &[(0, 1), (3, 1), (4, 2)]).unwrap();
        let text = write_edge_list(&g);
        assert_eq!(text, "5 3\n0 1\n1 3\n2 4\n");
        assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn edge_list_errors_carry_lines() {
        let err = parse_edge_list("3 2\n0 1\n1 x\n").unwrap_err();
        assert_eq!(err.line, 3);
        assert!(parse_edge_list("3 2\n0 1\n").is_err());
        assert!(parse_edge_list("2 1\n0 5\n").is_err());
        assert!(parse_edge_list("").is_err());
    }

    #[test]
    fn dictionary_round_trip_is_exact() {
        let norm = (0.1f64 * 0.1 + 0.7 * 0.7).sqrt();
        let cols = vec![0.1 / norm, 0.7 / norm, 1.0 / 3.0, -2.0 / 3.0];
        let d = Dictionary::from_columns(2, 2, 0.15, cols).unwrap();
        let text = write_dictionary(&d);
        let back = parse_dictionary(&text).unwrap();
        assert_eq!(back.columns(), d.columns());
        assert_eq!(back.lambda1().to_bits(), d.lambda1().to_bits());
        assert!(parse_dictionary("2 2 0.1\n1 0\n").is_err());
        assert!(parse_dictionary("2 1 0.1\n1 0 0\n").is_err());
    }

    #[test]
    fn embedding_csv_round_trip() {
        let rows = vec![("a".to_string(), vec![0.1, -2.5e-300]), ("b".to_string(), vec![1.0 / 3.0, 7.0])];
        let text = write_embedding_csv(&rows);
        assert!(text.starts_with("graph_id,f0,f1\n"));
        assert_eq!(parse_embedding_csv(&text).unwrap(), rows);
    }
}
