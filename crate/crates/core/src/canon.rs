//! Canonical forms of vertex-coloured graphs.
//!
//! Colour refinement down to an equitable partition, then backtracking over
//! individualisations of the first smallest non-singleton cell. Every leaf
//! yields a relabelled adjacency string; the canonical form is the least one.
//! Branches on twin vertices (same cell, same neighbourhood apart from each
//! other) are skipped since a transposition maps one subtree onto the other.
//! When a leaf reproduces the best certificate, the implied automorphism maps
//! the best leaf's branch onto the current one at their first divergence, so
//! the search jumps back to that level.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default bound on the number of search-tree leaves.
pub const DEFAULT_LEAF_CAP: usize = 200_000;

/// Isomorphism-invariant description of a coloured graph. Two coloured
/// graphs have equal certificates iff a colour-preserving isomorphism exists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Certificate {
    pub n: usize,
    /// Vertex colours listed in canonical vertex order.
    pub colours: Vec<u32>,
    /// Edges `(i, j)`, `i < j`, between canonical positions (0-based), sorted.
    pub edges: Vec<(u32, u32)>,
}

impl Certificate {
    /// Rebuilds the canonical representative as a graph.
    pub fn to_graph(&self) -> Graph {
        Graph::from_index_edges(
            self.n,
            self.edges.iter().map(|&(i, j)| (i as usize, j as usize)),
        )
    }
}

pub fn canonical_form(g: &Graph, colours: &[u32]) -> Result<Certificate> {
    canonical_form_capped(g, colours, DEFAULT_LEAF_CAP)
}

pub fn canonical_form_capped(g: &Graph, colours: &[u32], leaf_cap: usize) -> Result<Certificate> {
    assert_eq!(colours.len(), g.n());
    let mut search = Search {
        g,
        colours,
        best: None,
        path: Vec::new(),
        best_path: Vec::new(),
        leaves: 0,
        leaf_cap,
    };
    let init = rank(colours.iter().map(|&c| (c, 0usize)).collect::<Vec<_>>());
    let init = refine(g, init);
    search.descend(init)?;
    Ok(search.best.expect("search reaches at least one leaf"))
}

struct Search<'a> {
    g: &'a Graph,
    colours: &'a [u32],
    best: Option<Certificate>,
    path: Vec<usize>,
    best_path: Vec<usize>,
    leaves: usize,
    leaf_cap: usize,
}

impl Search<'_> {
    /// Returns `Some(level)` when the caller chain should unwind to `level`.
    fn descend(&mut self, cells: Vec<u32>) -> Result<Option<usize>> {
        let n = self.g.n();
        let ncells = cells.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        if ncells == n {
            self.leaves += 1;
            if self.leaves > self.leaf_cap {
                return Err(Error::CapExceeded {
                    what: "canonical-form search leaves",
                    value: self.leaves,
                    cap: self.leaf_cap,
                });
            }
            let cert = self.leaf_certificate(&cells);
            match self.best.as_ref().map(|b| cert.cmp(b)) {
                None | Some(std::cmp::Ordering::Less) => {
                    self.best = Some(cert);
                    self.best_path = self.path.clone();
                }
                Some(std::cmp::Ordering::Equal) => {
                    let diverge = self
                        .path
                        .iter()
                        .zip(&self.best_path)
                        .position(|(a, b)| a != b);
                    return Ok(diverge);
                }
                Some(std::cmp::Ordering::Greater) => {}
            }
            return Ok(None);
        }
        let mut sizes = vec![0usize; ncells];
        for &c in &cells {
            sizes[c as usize] += 1;
        }
        let target = (0..ncells)
            .filter(|&c| sizes[c] > 1)
            .min_by_key(|&c| (sizes[c], c))
            .unwrap() as u32;
        let members: Vec<usize> = (0..n).filter(|&v| cells[v] == target).collect();
        let level = self.path.len();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &members {
            if tried.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            tried.push(v);
            let ind = rank(
                (0..n)
                    .map(|w| (cells[w], usize::from(cells[w] == target && w != v)))
                    .collect(),
            );
            let refined = refine(self.g, ind);
            self.path.push(v);
            let jump = self.descend(refined)?;
            self.path.pop();
            match jump {
                Some(j) if j < level => return Ok(Some(j)),
                _ => {}
            }
        }
        Ok(None)
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        if self.colours[u] != self.colours[v] {
            return false;
        }
        (0..self.g.n())
            .filter(|&w| w != u && w != v)
            .all(|w| self.g.adj(u, w) == self.g.adj(v, w))
    }

    fn leaf_certificate(&self, cells: &[u32]) -> Certificate {
        let n = self.g.n();
        let mut at = vec![0usize; n];
        for (v, &c) in cells.iter().enumerate() {
            at[c as usize] = v;
        }
        let colours = at.iter().map(|&v| self.colours[v]).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.g.adj(at[i], at[j]) {
                    edges.push((i as u32, j as u32));
                }
            }
        }
        Certificate { n, colours, edges }
    }
}

/// Dense ranks of the keys, preserving their order.
fn rank<K: Ord + Clone>(keys: Vec<K>) -> Vec<u32> {
    let mut sorted = keys.clone();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect()
}

/// Refines `cells` to the coarsest equitable partition below it. Cell numbers
/// only depend on isomorphism-invariant data, so the result is equivariant.
fn refine(g: &Graph, mut cells: Vec<u32>) -> Vec<u32> {
    let n = g.n();
    loop {
        let before = cells.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let keys: Vec<(u32, Vec<(u32, u32)>)> = (0..n)
            .map(|v| {
                let mut nc: Vec<u32> = g.nbr(v).iter().map(|&w| cells[w as usize]).collect();
                nc.sort_unstable();
                let mut counts: Vec<(u32, u32)> = Vec::new();
                for c in nc {
                    match counts.last_mut() {
                        Some((lc, k)) if *lc == c => *k += 1,
                        _ => counts.push((c, 1)),
                    }
                }
                (cells[v], counts)
            })
            .collect();
        let next = rank(keys);
        let after = next.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        cells = next;
        if after == before {
            return cells;
        }
    }
}
