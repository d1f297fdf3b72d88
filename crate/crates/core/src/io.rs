//! Plain-text graph files.
//!
//! ```text
//! # comment
//! n 4
//! e 1 2
//! e 3 4
//! p 1 1 3
//! p 2 2 4
//! ```

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::decomp::{Partition, PartitionMode};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// A graph with an optional partition block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Graph,
    pub partition: Option<Partition>,
}

fn fail(line: usize, msg: impl Into<String>) -> Error {
    Error::Format {
        line,
        msg: msg.into(),
    }
}

fn number(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| fail(line, format!("`{tok}` is not a number")))
}

pub fn parse_graph(text: &str) -> Result<GraphFile> {
    let mut n = None;
    let mut edges = BTreeSet::new();
    let mut parts: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let Some(size) = n else {
            match toks.as_slice() {
                ["n", count] => n = Some(number(count, line)?),
                _ => return Err(fail(line, "expected `n <count>` first")),
            }
            continue;
        };
        let vertex = |tok: &str| -> Result<usize> {
            let v = number(tok, line)?;
            if v == 0 || v > size {
                return Err(fail(line, format!("vertex {v} outside 1..={size}")));
            }
            Ok(v)
        };
        match toks.as_slice() {
            ["e", u, v] => {
                let (u, v) = (vertex(u)?, vertex(v)?);
                if u >= v {
                    return Err(fail(line, format!("edge {u} {v} must have u < v")));
                }
                if !edges.insert((u, v)) {
                    return Err(fail(line, format!("duplicate edge {u} {v}")));
                }
            }
            ["p", index, members @ ..] => {
                let index = number(index, line)?;
                if index == 0 {
                    return Err(fail(line, "part indices start at 1"));
                }
                let members = members.iter().map(|t| vertex(t)).collect::<Result<Vec<_>>>()?;
                parts.push((index, members));
            }
            ["n", ..] => return Err(fail(line, "repeated `n` line")),
            _ => return Err(fail(line, format!("unrecognised line `{body}`"))),
        }
    }
    let n = n.ok_or_else(|| fail(text.lines().count().max(1), "missing `n <count>` line"))?;
    let graph = Graph::new(n, edges)?;
    let partition = if parts.is_empty() {
        None
    } else {
        let l = parts.iter().map(|(i, _)| *i).max().unwrap();
        let mut assign = vec![0usize; n];
        for (index, members) in &parts {
            for &v in members {
                if assign[v - 1] != 0 {
                    return Err(fail(0, format!("vertex {v} is listed in two parts")));
                }
                assign[v - 1] = *index;
            }
        }
        if let Some(v) = assign.iter().position(|&p| p == 0) {
            return Err(fail(0, format!("vertex {} is in no part", v + 1)));
        }
        Some(Partition::new(l, assign, PartitionMode::OrderedAny)?)
    };
    Ok(GraphFile { graph, partition })
}

/// Writes `n`, the edges in lexicographic order, then one `p` line per part.
pub fn write_graph(g: &Graph, partition: Option<&Partition>) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    if let Some(pi) = partition {
        for (i, part) in pi.parts().iter().enumerate() {
            write!(out, "p {}", i + 1).unwrap();
            for v in part.members() {
                write!(out, " {v}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}
