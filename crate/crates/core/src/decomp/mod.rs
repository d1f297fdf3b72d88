//! Partitions of the vertex set, the decomposition a partition induces, and
//! counting of the partitions that admit one.
//!
//! A partition `π = (V_1, …, V_l)` admits a decomposition with own-part bound
//! `d` when every vertex has at most `d` neighbours inside its own part. The
//! split is then forced: cross-part edges form `E1`, own-part edges form `E2`.

mod extension;

pub use extension::{
    check_extension_instance, check_k_extension, enumerate_patterns, extension_failure,
    k_extension_failure, ExtensionFailure, ExtensionPattern, KExtensionCaps,
};

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{invalid, Result};
use crate::graph::{Graph, VertexSet};

/// Which assignments count as distinct partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionMode {
    /// Any map `V -> 1..=l`; parts may be empty and are labelled.
    OrderedAny,
    /// Labelled parts, all nonempty.
    OrderedNonempty,
    /// Set partitions into exactly `l` nonempty blocks.
    UnorderedNonempty,
}

impl fmt::Display for PartitionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionMode::OrderedAny => "ordered-any",
            PartitionMode::OrderedNonempty => "ordered-nonempty",
            PartitionMode::UnorderedNonempty => "unordered-nonempty",
        })
    }
}

/// Assignment of the vertices `1..=n` to parts `1..=l`.
///
/// In [`PartitionMode::UnorderedNonempty`] the part labels are canonical:
/// parts are numbered by increasing minimum vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    l: usize,
    assign: Vec<u32>,
    mode: PartitionMode,
}

impl Partition {
    /// `parts[v - 1]` is the (1-based) part of vertex `v`.
    pub fn new(l: usize, parts: Vec<usize>, mode: PartitionMode) -> Result<Partition> {
        if let Some(&bad) = parts.iter().find(|&&p| p == 0 || p > l) {
            return Err(invalid(format!("part index {bad} outside 1..={l}")));
        }
        Partition::from_index(l, parts.iter().map(|&p| (p - 1) as u32).collect(), mode)
    }

    pub(crate) fn from_index(l: usize, assign: Vec<u32>, mode: PartitionMode) -> Result<Partition> {
        debug_assert!(assign.iter().all(|&p| (p as usize) < l));
        let mut p = Partition { l, assign, mode };
        if mode != PartitionMode::OrderedAny {
            let sizes = p.part_sizes();
            if let Some(empty) = sizes.iter().position(|&s| s == 0) {
                return Err(invalid(format!(
                    "part {} is empty but the mode is {mode}",
                    empty + 1
                )));
            }
        }
        if mode == PartitionMode::UnorderedNonempty {
            p.canonicalise();
        }
        Ok(p)
    }

    /// Builds a partition from explicit vertex sets, which must cover `1..=n`
    /// exactly once.
    pub fn from_parts(n: usize, parts: &[VertexSet], mode: PartitionMode) -> Result<Partition> {
        let mut assign = vec![u32::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            for &v in part.members() {
                if v == 0 || v > n {
                    return Err(invalid(format!("vertex {v} outside 1..={n}")));
                }
                if assign[v - 1] != u32::MAX {
                    return Err(invalid(format!("vertex {v} appears in two parts")));
                }
                assign[v - 1] = i as u32;
            }
        }
        if let Some(v) = assign.iter().position(|&p| p == u32::MAX) {
            return Err(invalid(format!("vertex {} is in no part", v + 1)));
        }
        Partition::from_index(parts.len(), assign, mode)
    }

    fn canonicalise(&mut self) {
        let mut relabel = vec![u32::MAX; self.l];
        let mut next = 0u32;
        for p in self.assign.iter_mut() {
            if relabel[*p as usize] == u32::MAX {
                relabel[*p as usize] = next;
                next += 1;
            }
            *p = relabel[*p as usize];
        }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn n(&self) -> usize {
        self.assign.len()
    }

    pub fn mode(&self) -> PartitionMode {
        self.mode
    }

    /// 1-based part of the 1-based vertex `v`.
    pub fn part_of(&self, v: usize) -> usize {
        self.assign[v - 1] as usize + 1
    }

    pub(crate) fn index_of(&self, v: usize) -> usize {
        self.assign[v] as usize
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.l];
        for &p in &self.assign {
            sizes[p as usize] += 1;
        }
        sizes
    }

    /// Parts as vertex sets, in part-index order.
    pub fn parts(&self) -> Vec<VertexSet> {
        let mut parts = vec![Vec::new(); self.l];
        for (v, &p) in self.assign.iter().enumerate() {
            parts[p as usize].push(v + 1);
        }
        parts.into_iter().map(VertexSet::new).collect()
    }

    /// The same blocks as an unordered partition (empty parts dropped).
    pub fn as_unordered_blocks(&self) -> Vec<VertexSet> {
        let mut blocks: Vec<VertexSet> = self.parts().into_iter().filter(|p| !p.is_empty()).collect();
        blocks.sort();
        blocks
    }

    /// Whether two partitions have the same blocks, ignoring part labels.
    pub fn same_blocks(&self, other: &Partition) -> bool {
        self.as_unordered_blocks() == other.as_unordered_blocks()
    }
}

/// The π-based decomposition of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub partition: Partition,
    /// Cross-part edges `E1`, 1-based, sorted.
    pub cross: Vec<(usize, usize)>,
    /// Own-part edges `E2`, 1-based, sorted.
    pub own: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionFailure {
    SizeMismatch { graph: usize, partition: usize },
    TooManyOwnNeighbours { vertex: usize, own: usize, bound: usize },
}

impl fmt::Display for DecompositionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionFailure::SizeMismatch { graph, partition } => write!(
                f,
                "partition covers {partition} vertices but the graph has {graph}"
            ),
            DecompositionFailure::TooManyOwnNeighbours { vertex, own, bound } => write!(
                f,
                "vertex {vertex} has {own} neighbours in its own part (bound {bound})"
            ),
        }
    }
}

pub fn decomposition_from_partition(
    g: &Graph,
    pi: &Partition,
    d: usize,
) -> std::result::Result<Decomposition, DecompositionFailure> {
    if g.n() != pi.n() {
        return Err(DecompositionFailure::SizeMismatch {
            graph: g.n(),
            partition: pi.n(),
        });
    }
    for u in 0..g.n() {
        let own = g
            .nbr(u)
            .iter()
            .filter(|&&w| pi.index_of(w as usize) == pi.index_of(u))
            .count();
        if own > d {
            return Err(DecompositionFailure::TooManyOwnNeighbours {
                vertex: u + 1,
                own,
                bound: d,
            });
        }
    }
    let (own, cross): (Vec<_>, Vec<_>) = g
        .edges()
        .partition(|&(u, v)| pi.part_of(u) == pi.part_of(v));
    Ok(Decomposition {
        partition: pi.clone(),
        cross,
        own,
    })
}

/// True iff every part has at least `alpha` vertices.
pub fn is_rich(pi: &Partition, alpha: f64) -> bool {
    pi.part_sizes().iter().all(|&s| s as f64 >= alpha)
}

/// Backtracking search over assignments in vertex-index order, pruning as
/// soon as some placed vertex has more than `d` own-part neighbours.
struct PartSearch<'a> {
    g: &'a Graph,
    l: usize,
    d: usize,
    mode: PartitionMode,
    assign: Vec<u32>,
    masks: Vec<Vec<u64>>,
    own: Vec<u32>,
    sizes: Vec<usize>,
    used: usize,
}

impl<'a> PartSearch<'a> {
    fn new(g: &'a Graph, l: usize, d: usize, mode: PartitionMode) -> Self {
        PartSearch {
            g,
            l,
            d,
            mode,
            assign: vec![u32::MAX; g.n()],
            masks: vec![vec![0u64; g.words()]; l],
            own: vec![0; g.n()],
            sizes: vec![0; l],
            used: 0,
        }
    }

    fn try_place(&mut self, v: usize, p: usize) -> bool {
        let row = self.g.row(v);
        let mask = &self.masks[p];
        let own = bits::and_count(row, mask);
        if own > self.d {
            return false;
        }
        let d = self.d as u32;
        let over = row
            .iter()
            .zip(mask)
            .enumerate()
            .any(|(wi, (r, m))| bits::ones(&[r & m]).any(|b| self.own[wi * 64 + b] + 1 > d));
        if over {
            return false;
        }
        for wi in 0..row.len() {
            let common = row[wi] & mask[wi];
            for b in bits::ones(&[common]) {
                self.own[wi * 64 + b] += 1;
            }
        }
        self.own[v] = own as u32;
        bits::set(&mut self.masks[p], v);
        self.assign[v] = p as u32;
        if self.sizes[p] == 0 {
            self.used += 1;
        }
        self.sizes[p] += 1;
        true
    }

    fn unplace(&mut self, v: usize, p: usize) {
        bits::clear(&mut self.masks[p], v);
        let row = self.g.row(v);
        for wi in 0..row.len() {
            let common = row[wi] & self.masks[p][wi];
            for b in bits::ones(&[common]) {
                self.own[wi * 64 + b] -= 1;
            }
        }
        self.own[v] = 0;
        self.assign[v] = u32::MAX;
        self.sizes[p] -= 1;
        if self.sizes[p] == 0 {
            self.used -= 1;
        }
    }

    /// Parts the next vertex may join; unordered mode only opens the next
    /// unused part, which enumerates each set partition once.
    fn choices(&self) -> usize {
        match self.mode {
            PartitionMode::UnorderedNonempty => (self.used + 1).min(self.l),
            _ => self.l,
        }
    }

    fn hopeless(&self, v: usize) -> bool {
        let remaining = self.g.n() - v;
        match self.mode {
            PartitionMode::OrderedAny => false,
            _ => self.l - self.used > remaining,
        }
    }

    fn count(&mut self, v: usize) -> u128 {
        if self.hopeless(v) {
            return 0;
        }
        if v == self.g.n() {
            return 1;
        }
        let mut total = 0u128;
        for p in 0..self.choices() {
            if self.try_place(v, p) {
                total += self.count(v + 1);
                self.unplace(v, p);
            }
        }
        total
    }

    fn find(&mut self, v: usize) -> bool {
        if self.hopeless(v) {
            return false;
        }
        if v == self.g.n() {
            return true;
        }
        for p in 0..self.choices() {
            if self.try_place(v, p) {
                if self.find(v + 1) {
                    return true;
                }
                self.unplace(v, p);
            }
        }
        false
    }
}

/// Number of partitions (in the given mode) that admit a decomposition with
/// own-part bound `d`. Exponential in the worst case.
pub fn count_decompositions(g: &Graph, l: usize, d: usize, mode: PartitionMode) -> BigUint {
    if l == 0 {
        return BigUint::from(u8::from(g.n() == 0));
    }
    BigUint::from(PartSearch::new(g, l, d, mode).count(0))
}

/// Some partition admitting a decomposition, if one exists.
pub fn find_partition(g: &Graph, l: usize, d: usize, mode: PartitionMode) -> Option<Partition> {
    if l == 0 {
        return None;
    }
    let mut search = PartSearch::new(g, l, d, mode);
    if search.find(0) {
        Some(Partition::from_index(l, search.assign, mode).expect("search respects the mode"))
    } else {
        None
    }
}

/// Membership in `P_n(l, d)`.
pub fn in_pld(g: &Graph, l: usize, d: usize) -> bool {
    find_partition(g, l, d, PartitionMode::OrderedAny).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn tri() -> Graph {
        Graph::complete(3)
    }

    fn bi(l: usize, parts: Vec<usize>, mode: PartitionMode) -> Partition {
        Partition::new(l, parts, mode).unwrap()
    }

    #[test]
    fn triangle_decompositions() {
        let pi = bi(2, vec![1, 2, 2], PartitionMode::OrderedNonempty);
        let dec = decomposition_from_partition(&tri(), &pi, 1).unwrap();
        assert_eq!(dec.cross, vec![(1, 2), (1, 3)]);
        assert_eq!(dec.own, vec![(2, 3)]);

        let one_part = bi(2, vec![1, 1, 1], PartitionMode::OrderedAny);
        assert!(matches!(
            decomposition_from_partition(&tri(), &one_part, 1),
            Err(DecompositionFailure::TooManyOwnNeighbours { vertex: 1, own: 2, bound: 1 })
        ));
    }

    #[test]
    fn loose_bound_always_decomposes() {
        let g = Graph::cycle(5);
        let pi = bi(3, vec![1, 1, 2, 3, 3], PartitionMode::OrderedAny);
        assert!(decomposition_from_partition(&g, &pi, g.max_degree()).is_ok());
    }

    #[test]
    fn triangle_counts() {
        let g = tri();
        assert_eq!(count_decompositions(&g, 2, 1, PartitionMode::UnorderedNonempty), 3u32.into());
        assert_eq!(count_decompositions(&g, 2, 1, PartitionMode::OrderedAny), 6u32.into());
        assert_eq!(count_decompositions(&g, 2, 1, PartitionMode::OrderedNonempty), 6u32.into());
    }

    #[test]
    fn empty_graph_counts() {
        for n in 0..8 {
            let g = Graph::empty(n);
            assert_eq!(
                count_decompositions(&g, 2, 0, PartitionMode::OrderedAny),
                BigUint::from(1u32) << n
            );
        }
    }

    #[test]
    fn richness() {
        let pi = bi(2, vec![1, 1, 1, 1, 1, 2, 2, 2, 2, 2], PartitionMode::OrderedNonempty);
        assert!(is_rich(&pi, 5.0));
        assert!(!is_rich(&pi, 5.5));
        assert!(is_rich(&pi, 0.0));
        let with_empty = bi(3, vec![1, 2], PartitionMode::OrderedAny);
        assert!(is_rich(&with_empty, 0.0));
        assert!(!is_rich(&with_empty, 0.5));
    }

    #[test]
    fn unordered_mode_is_canonical() {
        let a = bi(2, vec![2, 2, 1], PartitionMode::UnorderedNonempty);
        let b = bi(2, vec![1, 1, 2], PartitionMode::UnorderedNonempty);
        assert_eq!(a, b);
        assert_eq!(a.part_of(1), 1);
        assert!(Partition::new(2, vec![1, 1], PartitionMode::UnorderedNonempty).is_err());
        assert!(Partition::new(2, vec![1, 3], PartitionMode::OrderedAny).is_err());
    }

    #[test]
    fn from_parts_validates_cover() {
        let ok = Partition::from_parts(
            3,
            &[VertexSet::new([1, 3]), VertexSet::new([2])],
            PartitionMode::OrderedNonempty,
        )
        .unwrap();
        assert_eq!(ok.part_sizes(), vec![2, 1]);
        assert!(Partition::from_parts(3, &[VertexSet::new([1, 2])], PartitionMode::OrderedAny).is_err());
        assert!(Partition::from_parts(
            2,
            &[VertexSet::new([1, 2]), VertexSet::new([2])],
            PartitionMode::OrderedAny
        )
        .is_err());
    }

    #[test]
    fn find_partition_agrees_with_count() {
        for code in 0..(1u64 << 10) {
            let g = Graph::from_edge_code(5, code);
            let found = find_partition(&g, 2, 1, PartitionMode::OrderedAny);
            let count = count_decompositions(&g, 2, 1, PartitionMode::OrderedAny);
            assert_eq!(found.is_some(), count > BigUint::from(0u32));
            if let Some(pi) = found {
                assert!(decomposition_from_partition(&g, &pi, 1).is_ok());
            }
        }
    }
}
