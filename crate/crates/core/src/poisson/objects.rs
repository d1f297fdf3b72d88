use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Error, Result};
use crate::graph::{Graph, VertexSet};

/// Work limit for the bounded path and cycle search, in visited path prefixes.
pub const DEFAULT_SEARCH_BUDGET: usize = 50_000_000;

/// Counts of small Poisson objects with size bound `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjectCounts {
    /// Vertices of degree exactly `d - 2`.
    pub q: u64,
    /// `cycles[j - 3]`: cycles with `j` vertices, `3 <= j <= t`.
    pub cycles: Vec<u64>,
    /// `paths[j - 1]`: paths with `j` edges whose ends have degree `d - 1`, `1 <= j <= t`.
    pub paths: Vec<u64>,
}

impl ObjectCounts {
    pub fn t(&self) -> usize {
        self.paths.len()
    }

    /// `r_j`, zero outside `3..=t`.
    pub fn r(&self, j: usize) -> u64 {
        j.checked_sub(3)
            .and_then(|i| self.cycles.get(i))
            .copied()
            .unwrap_or(0)
    }

    /// `s_j`, zero outside `1..=t`.
    pub fn s(&self, j: usize) -> u64 {
        j.checked_sub(1)
            .and_then(|i| self.paths.get(i))
            .copied()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.q == 0 && self.cycles.iter().all(|&c| c == 0) && self.paths.iter().all(|&c| c == 0)
    }
}

/// Small Poisson objects as 0-based vertex lists.
pub(crate) struct Objects {
    pub low: Vec<usize>,
    /// Cyclic vertex order.
    pub cycles: Vec<Vec<usize>>,
    /// Vertex sequence from one end to the other.
    pub paths: Vec<Vec<usize>>,
}

pub(crate) fn check_degree(g: &Graph, d: usize) -> Result<()> {
    for v in 0..g.n() {
        if g.deg(v) > d {
            return Err(Error::DegreeBound {
                vertex: v + 1,
                degree: g.deg(v),
                bound: d,
            });
        }
    }
    Ok(())
}

struct Dfs<'a> {
    g: &'a Graph,
    on_path: Vec<bool>,
    path: Vec<usize>,
    work: usize,
    budget: usize,
}

impl Dfs<'_> {
    fn tick(&mut self) -> Result<()> {
        self.work += 1;
        check_cap("small-object search steps", self.work, self.budget)
    }

    /// Cycles through `start` using only larger vertices, each reported once.
    fn cycles(&mut self, start: usize, max_len: usize, out: &mut Vec<Vec<usize>>) -> Result<()> {
        self.tick()?;
        let x = *self.path.last().unwrap();
        for &y in self.g.nbr(x) {
            let y = y as usize;
            if y == start && self.path.len() >= 3 && self.path[1] < x {
                out.push(self.path.clone());
            } else if y > start && !self.on_path[y] && self.path.len() < max_len {
                self.push(y);
                self.cycles(start, max_len, out)?;
                self.pop();
            }
        }
        Ok(())
    }

    /// Paths from `start` to a larger vertex of degree `end_degree`, with at
    /// most `max_edges` edges.
    fn paths(
        &mut self,
        start: usize,
        end_degree: usize,
        max_edges: usize,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        self.tick()?;
        let x = *self.path.last().unwrap();
        if self.path.len() >= 2 && x > start && self.g.deg(x) == end_degree {
            out.push(self.path.clone());
        }
        if self.path.len() > max_edges {
            return Ok(());
        }
        for &y in self.g.nbr(x) {
            let y = y as usize;
            if !self.on_path[y] {
                self.push(y);
                self.paths(start, end_degree, max_edges, out)?;
                self.pop();
            }
        }
        Ok(())
    }

    fn push(&mut self, v: usize) {
        self.on_path[v] = true;
        self.path.push(v);
    }

    fn pop(&mut self) {
        let v = self.path.pop().unwrap();
        self.on_path[v] = false;
    }
}

/// Objects whose size (cycle length, path edge count) is at most `size`.
pub(crate) fn find_objects(g: &Graph, d: usize, size: usize, budget: usize) -> Result<Objects> {
    check_degree(g, d)?;
    let n = g.n();
    let low = match d.checked_sub(2) {
        Some(target) => (0..n).filter(|&v| g.deg(v) == target).collect(),
        None => Vec::new(),
    };
    let mut dfs = Dfs {
        g,
        on_path: vec![false; n],
        path: Vec::new(),
        work: 0,
        budget,
    };
    let mut cycles = Vec::new();
    let mut paths = Vec::new();
    for v in 0..n {
        dfs.push(v);
        if size >= 3 {
            dfs.cycles(v, size, &mut cycles)?;
        }
        if let Some(end) = d.checked_sub(1) {
            if size >= 1 && g.deg(v) == end {
                dfs.paths(v, end, size, &mut paths)?;
            }
        }
        dfs.pop();
    }
    Ok(Objects { low, cycles, paths })
}

/// Counts vertices of degree `d - 2`, cycles of length `3..=t` and paths with
/// `1..=t` edges whose ends have degree `d - 1`. Cycles are counted once per
/// edge set, paths once per vertex sequence up to reversal.
pub fn count_small_objects(g: &Graph, d: usize, t: usize) -> Result<ObjectCounts> {
    let objects = find_objects(g, d, t, DEFAULT_SEARCH_BUDGET)?;
    let mut counts = ObjectCounts {
        q: objects.low.len() as u64,
        cycles: vec![0; t.saturating_sub(2)],
        paths: vec![0; t],
    };
    for c in &objects.cycles {
        counts.cycles[c.len() - 3] += 1;
    }
    for p in &objects.paths {
        counts.paths[p.len() - 2] += 1;
    }
    Ok(counts)
}

/// Size bound `5^k` for small objects.
pub fn object_size(k: usize) -> Result<usize> {
    check_cap("k", k, 8)?;
    Ok(5usize.pow(k as u32))
}

/// `NP(G, t)`: vertices within distance `t` of a small Poisson object of size
/// at most `5^k`.
pub fn np_ball(g: &Graph, d: usize, k: usize, t: usize) -> Result<VertexSet> {
    let objects = find_objects(g, d, object_size(k)?, DEFAULT_SEARCH_BUDGET)?;
    Ok(np_from_objects(g, &objects, t))
}

pub(crate) fn np_from_objects(g: &Graph, objects: &Objects, t: usize) -> VertexSet {
    let mut support: Vec<usize> = objects.low.clone();
    support.extend(objects.cycles.iter().flatten());
    support.extend(objects.paths.iter().flatten());
    support.sort_unstable();
    support.dedup();
    if support.is_empty() {
        return VertexSet::new([]);
    }
    g.bfs_from(&support, Some(t))
        .iter()
        .enumerate()
        .filter_map(|(i, d)| d.map(|_| i + 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Every edge subset that forms a single cycle or a path between two
    /// degree-(d-1) vertices, found by brute force over edge subsets.
    fn brute(g: &Graph, d: usize, t: usize) -> ObjectCounts {
        let edges: Vec<(usize, usize)> = g.index_edges().collect();
        let mut counts = ObjectCounts {
            q: (0..g.n()).filter(|&v| d >= 2 && g.deg(v) == d - 2).count() as u64,
            cycles: vec![0; t.saturating_sub(2)],
            paths: vec![0; t],
        };
        for mask in 1u64..(1 << edges.len()) {
            let chosen: Vec<(usize, usize)> =
                (0..edges.len()).filter(|&i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
            let mut deg = vec![0usize; g.n()];
            for &(u, v) in &chosen {
                deg[u] += 1;
                deg[v] += 1;
            }
            let verts: Vec<usize> = (0..g.n()).filter(|&v| deg[v] > 0).collect();
            let sub = Graph::from_index_edges(g.n(), chosen.iter().copied());
            let keep = VertexSet::new(verts.iter().map(|v| v + 1));
            let connected = sub.induced_subgraph(&keep).unwrap().0.components().len() == 1;
            if !connected {
                continue;
            }
            let m = chosen.len();
            if verts.iter().all(|&v| deg[v] == 2) && m >= 3 && m <= t {
                counts.cycles[m - 3] += 1;
            }
            let ends: Vec<usize> = verts.iter().copied().filter(|&v| deg[v] == 1).collect();
            if ends.len() == 2
                && verts.iter().all(|&v| deg[v] <= 2)
                && m <= t
                && d >= 1
                && ends.iter().all(|&v| g.deg(v) == d - 1)
            {
                counts.paths[m - 1] += 1;
            }
        }
        counts
    }

    #[test]
    fn examples() {
        let c5 = count_small_objects(&Graph::cycle(5), 2, 5).unwrap();
        assert_eq!(c5.q, 0);
        assert_eq!((c5.r(3), c5.r(4), c5.r(5)), (0, 0, 1));
        assert!(c5.paths.iter().all(|&s| s == 0));

        let p3 = count_small_objects(&Graph::path(3), 2, 5).unwrap();
        assert_eq!((p3.q, p3.s(1), p3.s(2)), (0, 0, 1));
        assert!(p3.cycles.iter().all(|&r| r == 0));

        let e4 = count_small_objects(&Graph::empty(4), 2, 5).unwrap();
        assert_eq!(e4.q, 4);
        assert!(matches!(
            count_small_objects(&Graph::complete(4), 2, 5),
            Err(Error::DegreeBound { degree: 3, .. })
        ));
    }

    #[test]
    fn search_matches_edge_subset_enumeration() {
        let mut rng_state = 0x1234_5678u64;
        for n in 3..=8usize {
            for _ in 0..30 {
                rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let g = Graph::from_edge_code(n, rng_state >> (64 - n * (n - 1) / 2));
                if g.edge_count() > 16 {
                    continue;
                }
                let d = g.max_degree().max(1);
                for t in [3, 5] {
                    assert_eq!(count_small_objects(&g, d, t).unwrap(), brute(&g, d, t), "{g:?} d={d}");
                }
            }
        }
    }

    #[test]
    fn relabelling_preserves_counts() {
        let g = Graph::new(9, [(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (6, 7), (7, 8), (8, 9), (9, 6)]).unwrap();
        let h = g.relabel(&[5, 9, 1, 3, 7, 2, 8, 4, 6]);
        assert_eq!(count_small_objects(&g, 3, 5).unwrap(), count_small_objects(&h, 3, 5).unwrap());
    }

    #[test]
    fn np_balls() {
        assert_eq!(np_ball(&Graph::cycle(5), 2, 1, 0).unwrap().len(), 5);
        assert!(np_ball(&Graph::path(10), 2, 1, 2).unwrap().is_empty());
        // a 6-vertex path component (5 edges) is an object
        let g = Graph::path(6).disjoint_union(&Graph::cycle(8));
        assert_eq!(np_ball(&g, 2, 1, 0).unwrap(), VertexSet::new(1..=6));
        // one isolated vertex for d = 2, radius 0
        let h = Graph::empty(1).disjoint_union(&Graph::cycle(9));
        assert_eq!(np_ball(&h, 2, 1, 0).unwrap(), VertexSet::new([1]));
        let c = Graph::cycle(12).disjoint_union(&Graph::cycle(3));
        for t in 0..4 {
            let inner = np_ball(&c, 2, 1, t).unwrap();
            assert!(inner.is_subset(&np_ball(&c, 2, 1, t + 1).unwrap()));
        }
    }
}
