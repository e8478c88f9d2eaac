//! Text formats.
//!
//! Instance files are line oriented:
//!
//! ```text
//! # name: k3
//! p mg 3 3
//! e 1 2 1
//! e 2 3 1
//! e 1 3 1
//! ```
//!
//! Endpoints are 1-based, weights are nonnegative integers and lines starting
//! with `#` are comments. A `# name: ...` comment before the header names the
//! instance. Imputation files are JSON objects with a `values` array of
//! reduced-fraction strings.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Edge, GameInstance, InstanceError};
use crate::money::Money;

fn malformed(line: usize, message: impl Into<String>) -> InstanceError {
    InstanceError::Malformed {
        line,
        message: message.into(),
    }
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize, InstanceError> {
    let tok = tok.ok_or_else(|| malformed(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| malformed(line, format!("invalid {what} `{tok}`")))
}

pub fn parse_instance(text: &str) -> Result<GameInstance, InstanceError> {
    let mut header: Option<(usize, usize)> = None;
    let mut name = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if header.is_none() && name.is_none() {
                if let Some(n) = comment.trim().strip_prefix("name:") {
                    name = Some(n.trim().to_string());
                }
            }
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        match toks.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(malformed(line, "second header line"));
                }
                if toks.next() != Some("mg") {
                    return Err(malformed(line, "header must read `p mg <n> <m>`"));
                }
                let n = parse_count(toks.next(), line, "vertex count")?;
                let m = parse_count(toks.next(), line, "edge count")?;
                if toks.next().is_some() {
                    return Err(malformed(line, "trailing tokens in header"));
                }
                header = Some((n, m));
            }
            Some("e") => {
                let (n, m) = header.ok_or_else(|| malformed(line, "edge before header"))?;
                if edges.len() == m {
                    return Err(malformed(line, format!("more than {m} edges")));
                }
                let u = parse_count(toks.next(), line, "endpoint")?;
                let v = parse_count(toks.next(), line, "endpoint")?;
                let wtok = toks
                    .next()
                    .ok_or_else(|| malformed(line, "missing weight"))?;
                if toks.next().is_some() {
                    return Err(malformed(line, "trailing tokens in edge line"));
                }
                if wtok.starts_with('-') && wtok[1..].chars().all(|c| c.is_ascii_digit()) {
                    return Err(InstanceError::NegativeWeight {
                        line,
                        weight: wtok.to_string(),
                    });
                }
                let weight: u64 = wtok
                    .parse()
                    .map_err(|_| malformed(line, format!("invalid weight `{wtok}`")))?;
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(InstanceError::VertexOutOfRange {
                            line,
                            vertex: x,
                            vertex_count: n,
                        });
                    }
                }
                if u == v {
                    return Err(InstanceError::SelfLoop { line, vertex: u });
                }
                let e = Edge::new(u - 1, v - 1, weight);
                if !seen.insert(e.key()) {
                    return Err(InstanceError::DuplicateEdge { line, u, v });
                }
                edges.push(e);
            }
            Some(tok) => return Err(malformed(line, format!("unknown line type `{tok}`"))),
            None => unreachable!(),
        }
    }

    let (n, m) = header.ok_or_else(|| malformed(last_line.max(1), "missing `p mg` header"))?;
    if edges.len() != m {
        return Err(malformed(
            last_line.max(1),
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    let g = GameInstance::new(n, edges)?;
    Ok(match name {
        Some(name) => g.with_name(name),
        None => g,
    })
}

pub fn serialize_instance(g: &GameInstance) -> String {
    let mut out = String::new();
    if let Some(name) = g.name() {
        writeln!(out, "# name: {name}").unwrap();
    }
    write!(out, "p mg {} {}", g.vertex_count(), g.edge_count()).unwrap();
    for e in g.edges() {
        write!(out, "\ne {} {} {}", e.u + 1, e.v + 1, e.weight).unwrap();
    }
    out.push('\n');
    out
}

#[derive(Serialize, Deserialize)]
struct ImputationFile {
    values: Vec<Money>,
}

/// Reads an imputation file. Values must be nonnegative.
pub fn parse_imputation(text: &str) -> Result<Vec<Money>, InstanceError> {
    let file: ImputationFile =
        serde_json::from_str(text).map_err(|e| InstanceError::Imputation(e.to_string()))?;
    if let Some((i, _)) = file
        .values
        .iter()
        .enumerate()
        .find(|(_, v)| v.is_negative())
    {
        return Err(InstanceError::Imputation(format!(
            "value for vertex {} is negative",
            i + 1
        )));
    }
    Ok(file.values)
}

pub fn serialize_imputation(values: &[Money]) -> String {
    serde_json::to_string_pretty(&ImputationFile {
        values: values.to_vec(),
    })
    .expect("imputation serializes")
}
