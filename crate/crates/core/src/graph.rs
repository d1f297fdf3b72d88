//! Labelled simple undirected graphs on `1..=n`.
//!
//! Vertices are 1-based in every public signature. Internally a graph keeps
//! both a dense bitset adjacency matrix (constant-time membership) and a
//! compressed neighbour list; both are derived from the edge set, so the
//! derived `Eq`/`Hash` agree with edge-set equality.

use std::collections::VecDeque;
use std::fmt;

use crate::bits;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    offsets: Vec<u32>,
    nbrs: Vec<u32>,
}

/// Sorted, duplicate-free set of 1-based vertex labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

/// Graph distance; `Unreachable` is kept apart from every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }

    pub fn is_within(self, t: usize) -> bool {
        matches!(self, Distance::Finite(d) if d <= t)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Unreachable => f.write_str("unreachable"),
        }
    }
}

/// Index of the pair `{u, v}` (0-based, `u < v`) in lexicographic pair order.
#[inline]
pub(crate) fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

pub(crate) fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl Graph {
    /// Graph on `1..=n` with the given (1-based) edges. Repeated edges are
    /// merged; loops and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph> {
        let words = bits::words_for(n);
        let mut rows = vec![0u64; n * words];
        for (u, v) in edges {
            for x in [u, v] {
                if x == 0 || x > n {
                    return Err(Error::InvalidVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            bits::set(&mut rows[(u - 1) * words..u * words], v - 1);
            bits::set(&mut rows[(v - 1) * words..v * words], u - 1);
        }
        Ok(Graph::from_rows(n, rows))
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_rows(n, vec![0u64; n * bits::words_for(n)])
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_index_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        Graph::from_index_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_index_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::from_index_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
    }

    /// Disjoint union; the vertices of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        Graph::from_index_edges(
            self.n + other.n,
            self.index_edges()
                .chain(other.index_edges().map(|(u, v)| (u + shift, v + shift))),
        )
    }

    pub(crate) fn from_index_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Graph {
        let words = bits::words_for(n);
        let mut rows = vec![0u64; n * words];
        for (u, v) in edges {
            debug_assert!(u != v && u < n && v < n);
            bits::set(&mut rows[u * words..(u + 1) * words], v);
            bits::set(&mut rows[v * words..(v + 1) * words], u);
        }
        Graph::from_rows(n, rows)
    }

    pub(crate) fn from_rows(n: usize, rows: Vec<u64>) -> Graph {
        let words = bits::words_for(n);
        debug_assert_eq!(rows.len(), n * words);
        let mut offsets = Vec::with_capacity(n + 1);
        let mut nbrs = Vec::new();
        offsets.push(0u32);
        for u in 0..n {
            nbrs.extend(bits::ones(&rows[u * words..(u + 1) * words]).map(|v| v as u32));
            offsets.push(nbrs.len() as u32);
        }
        Graph {
            n,
            words,
            rows,
            offsets,
            nbrs,
        }
    }

    /// Graph whose edge set is encoded by `code`: bit `i` is the `i`-th pair
    /// in lexicographic order `(1,2), (1,3), …, (n-1,n)`.
    pub fn from_edge_code(n: usize, code: u64) -> Graph {
        assert!(pair_count(n) <= 64, "edge codes need n(n-1)/2 <= 64");
        let mut i = 0;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if (code >> i) & 1 == 1 {
                    edges.push((u, v));
                }
                i += 1;
            }
        }
        Graph::from_index_edges(n, edges)
    }

    /// Inverse of [`Graph::from_edge_code`]; `None` when the graph is too big.
    pub fn edge_code(&self) -> Option<u64> {
        if pair_count(self.n) > 64 {
            return None;
        }
        let mut code = 0u64;
        for (u, v) in self.index_edges() {
            code |= 1u64 << pair_index(self.n, u, v);
        }
        Some(code)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.nbrs.len() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u >= 1 && v >= 1 && u <= self.n && v <= self.n && self.adj(u - 1, v - 1)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.deg(v - 1)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.deg(u)).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.nbr(v - 1).iter().map(|&w| w as usize + 1)
    }

    /// Edges as 1-based pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.index_edges().map(|(u, v)| (u + 1, v + 1))
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet((1..=self.n).collect())
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.n {
            Err(Error::InvalidVertex {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    // 0-based internals

    #[inline]
    pub(crate) fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub(crate) fn adj(&self, u: usize, v: usize) -> bool {
        (self.rows[u * self.words + (v >> 6)] >> (v & 63)) & 1 == 1
    }

    #[inline]
    pub(crate) fn row(&self, u: usize) -> &[u64] {
        &self.rows[u * self.words..(u + 1) * self.words]
    }

    #[inline]
    pub(crate) fn nbr(&self, u: usize) -> &[u32] {
        &self.nbrs[self.offsets[u] as usize..self.offsets[u + 1] as usize]
    }

    #[inline]
    pub(crate) fn deg(&self, u: usize) -> usize {
        (self.offsets[u + 1] - self.offsets[u]) as usize
    }

    pub(crate) fn index_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.nbr(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Induced subgraph on 0-based vertices `keep` (in the given order).
    pub(crate) fn induced_by_index(&self, keep: &[usize]) -> Graph {
        let k = keep.len();
        let words = bits::words_for(k);
        let mut rows = vec![0u64; k * words];
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate() {
                if i != j && self.adj(u, v) {
                    bits::set(&mut rows[i * words..(i + 1) * words], j);
                }
            }
        }
        Graph::from_rows(k, rows)
    }

    /// Induced subgraph `G[S]`, relabelled `1..=|S|` by ascending original
    /// label. The returned map sends new label `i` to `map[i - 1]`.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
        for &v in s.members() {
            self.check_vertex(v)?;
        }
        let keep: Vec<usize> = s.members().iter().map(|v| v - 1).collect();
        Ok((self.induced_by_index(&keep), s.members().to_vec()))
    }

    /// Relabels vertex `v` as `perm[v - 1]`; `perm` must be a permutation of `1..=n`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        Graph::from_index_edges(
            self.n,
            self.index_edges().map(|(u, v)| (perm[u] - 1, perm[v] - 1)),
        )
    }

    /// Breadth-first distances from the 0-based `sources`, explored up to `limit`.
    pub(crate) fn bfs_from(&self, sources: &[usize], limit: Option<usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            if limit.is_some_and(|t| du >= t) {
                continue;
            }
            for &w in self.nbr(u) {
                let w = w as usize;
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: usize, v: usize) -> Result<Distance> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(match self.bfs_from(&[u - 1], None)[v - 1] {
            Some(d) => Distance::Finite(d),
            None => Distance::Unreachable,
        })
    }

    /// `dist(A, v)` for every vertex `v`, as a 1-based lookup (`result[v - 1]`).
    pub fn distances_from_set(&self, a: &VertexSet) -> Result<Vec<Distance>> {
        if a.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        for &v in a.members() {
            self.check_vertex(v)?;
        }
        let src: Vec<usize> = a.members().iter().map(|v| v - 1).collect();
        Ok(self
            .bfs_from(&src, None)
            .into_iter()
            .map(|d| d.map_or(Distance::Unreachable, Distance::Finite))
            .collect())
    }

    /// The closed ball `{ v : dist(A, v) <= t }`.
    pub fn ball(&self, a: &VertexSet, t: usize) -> Result<VertexSet> {
        if a.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        for &v in a.members() {
            self.check_vertex(v)?;
        }
        let src: Vec<usize> = a.members().iter().map(|v| v - 1).collect();
        Ok(self
            .bfs_from(&src, Some(t))
            .iter()
            .enumerate()
            .filter_map(|(i, d)| d.map(|_| i + 1))
            .collect())
    }

    /// Connected components as sorted 1-based vertex sets, ordered by minimum vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let dist = self.bfs_from(&[s], None);
            let comp: VertexSet = dist
                .iter()
                .enumerate()
                .filter_map(|(i, d)| d.map(|_| i + 1))
                .collect();
            for &v in comp.members() {
                seen[v - 1] = true;
            }
            out.push(comp);
        }
        out
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        f.write_str("])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c5() -> Graph {
        Graph::cycle(5)
    }

    #[test]
    fn induced_subgraph_examples() {
        let tri = Graph::complete(3);
        let (h, map) = tri.induced_subgraph(&VertexSet::new([1, 2])).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(1, 2)]);
        assert_eq!(map, vec![1, 2]);

        let (h, map) = c5().induced_subgraph(&VertexSet::new([1, 3])).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.edge_count(), 0);
        assert_eq!(map, vec![1, 3]);

        let g = c5();
        let (h, map) = g.induced_subgraph(&g.vertices()).unwrap();
        assert_eq!(h, g);
        assert_eq!(map, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn induced_subgraph_rejects_out_of_range() {
        assert_eq!(
            c5().induced_subgraph(&VertexSet::new([1, 6])).unwrap_err(),
            Error::InvalidVertex { vertex: 6, n: 5 }
        );
    }

    #[test]
    fn distance_examples() {
        let g = c5();
        assert_eq!(g.distance(1, 2).unwrap(), Distance::Finite(1));
        assert_eq!(g.distance(1, 3).unwrap(), Distance::Finite(2));
        assert_eq!(g.distance(4, 4).unwrap(), Distance::Finite(0));
        let two = Graph::path(2).disjoint_union(&Graph::path(2));
        assert_eq!(two.distance(1, 3).unwrap(), Distance::Unreachable);
        assert!(g.distance(0, 1).is_err());
        assert!(g.distance(1, 9).is_err());
    }

    #[test]
    fn ball_examples() {
        let g = c5();
        let a = VertexSet::new([1]);
        assert_eq!(g.ball(&a, 1).unwrap(), VertexSet::new([1, 2, 5]));
        assert_eq!(g.ball(&a, 0).unwrap(), a);
        assert_eq!(g.ball(&a, 3).unwrap(), g.vertices());
        assert_eq!(g.ball(&VertexSet::default(), 1), Err(Error::EmptyVertexSet));
    }

    #[test]
    fn edge_code_round_trip() {
        for code in [0u64, 1, 0b101101, 1023] {
            let g = Graph::from_edge_code(5, code);
            assert_eq!(g.edge_code(), Some(code));
        }
        // first pair is (1,2), last is (4,5)
        assert!(Graph::from_edge_code(5, 1).has_edge(1, 2));
        assert!(Graph::from_edge_code(5, 1 << 9).has_edge(4, 5));
    }

    #[test]
    fn constructor_rejects_loops_and_range() {
        assert!(Graph::new(3, [(1, 1)]).is_err());
        assert!(Graph::new(3, [(1, 4)]).is_err());
        let g = Graph::new(3, [(1, 2), (2, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn components_of_disjoint_union() {
        let g = Graph::cycle(3).disjoint_union(&Graph::path(2));
        let comps = g.components();
        assert_eq!(comps, vec![VertexSet::new([1, 2, 3]), VertexSet::new([4, 5])]);
    }
}
