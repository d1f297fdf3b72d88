//! Complete multipartite patterns `K_{1,s_1,...,s_l}`: subgraph detection and
//! exhaustive checks of own-part degree partitions of the pattern itself.

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::census::enumerate_class;
use crate::error::{check_cap, Error, Result};
use crate::graph::Graph;

/// Default bound on the pattern order for exhaustive partition checks.
pub const MAX_PATTERN_VERTICES: usize = 14;

/// `K_{1,s_1,...,s_l}` with `1 <= s_1 <= ... <= s_l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultipartitePattern {
    sizes: Vec<usize>,
}

impl MultipartitePattern {
    pub fn new(sizes: Vec<usize>) -> Result<MultipartitePattern> {
        if sizes.is_empty() {
            return Err(Error::InvalidPattern("at least one class besides the apex".into()));
        }
        if sizes[0] == 0 {
            return Err(Error::InvalidPattern("class sizes must be positive".into()));
        }
        if sizes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidPattern(format!("class sizes {sizes:?} are not sorted")));
        }
        Ok(MultipartitePattern { sizes })
    }

    /// `s_1, ..., s_l` (the apex class is implicit).
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn l(&self) -> usize {
        self.sizes.len()
    }

    pub fn order(&self) -> usize {
        1 + self.sizes.iter().sum::<usize>()
    }

    /// Class of every vertex: the apex is vertex 1 in class 0, then the
    /// classes of sizes `s_1, ..., s_l` in order.
    pub fn classes(&self) -> Vec<usize> {
        let mut out = vec![0];
        for (i, &s) in self.sizes.iter().enumerate() {
            out.extend(std::iter::repeat_n(i + 1, s));
        }
        out
    }

    pub fn to_graph(&self) -> Graph {
        let class = self.classes();
        let n = class.len();
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_index_edges(n, edges.filter(|&(u, v)| class[u] != class[v]))
    }
}

impl std::fmt::Display for MultipartitePattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "K_{{1")?;
        for s in &self.sizes {
            write!(f, ",{s}")?;
        }
        write!(f, "}}")
    }
}

struct Embed<'a> {
    g: &'a Graph,
    sizes: &'a [usize],
}

impl Embed<'_> {
    /// Fills class `c`, which already holds `have` vertices (the first being
    /// `first`), from vertices `>= from` in `open`: the unused vertices
    /// adjacent to the apex and to everything in finished classes.
    fn fill(&self, c: usize, have: usize, from: usize, first: usize, open: &[u64], chosen: &mut Vec<usize>) -> bool {
        if c == self.sizes.len() {
            return true;
        }
        let need: usize = self.sizes[c] - have + self.sizes[c + 1..].iter().sum::<usize>();
        if bits::count(open) < need {
            return false;
        }
        if have == self.sizes[c] {
            let mut next = open.to_vec();
            for &w in &chosen[chosen.len() - have..] {
                bits::and_assign(&mut next, self.g.row(w));
            }
            // equal-size classes are interchangeable: order them by first vertex
            let floor = if c + 1 < self.sizes.len() && self.sizes[c + 1] == self.sizes[c] {
                first + 1
            } else {
                0
            };
            return self.fill(c + 1, 0, floor, usize::MAX, &next, chosen);
        }
        let cands: Vec<usize> = bits::ones(open).filter(|&w| w >= from).collect();
        for w in cands {
            let mut rest = open.to_vec();
            bits::clear(&mut rest, w);
            chosen.push(w);
            let first = if have == 0 { w } else { first };
            if self.fill(c, have + 1, w + 1, first, &rest, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

/// Does `g` contain `pat` as a (not necessarily induced) subgraph?
pub fn contains_multipartite(g: &Graph, pat: &MultipartitePattern) -> bool {
    if g.n() < pat.order() {
        return false;
    }
    let rest = pat.order() - 1;
    let embed = Embed { g, sizes: &pat.sizes };
    (0..g.n())
        .filter(|&v| g.deg(v) >= rest)
        .any(|v| embed.fill(0, 0, 0, usize::MAX, g.row(v), &mut Vec::new()))
}

/// Walks every assignment of the pattern's vertices to `l` parts with the
/// apex in part 0 and every vertex having at most `bound` own-part
/// neighbours. `visit` returns `false` to stop; the result reports whether
/// the walk was stopped.
fn walk_partitions(pat: &MultipartitePattern, bound: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> Result<bool> {
    check_cap("pattern vertices", pat.order(), MAX_PATTERN_VERTICES)?;
    struct Walk<'a> {
        class: Vec<usize>,
        l: usize,
        bound: usize,
        part: Vec<usize>,
        own: Vec<usize>,
        visit: &'a mut dyn FnMut(&[usize]) -> bool,
    }
    impl Walk<'_> {
        fn go(&mut self, v: usize) -> bool {
            if v == self.class.len() {
                return !(self.visit)(&self.part);
            }
            let parts = if v == 0 { 1 } else { self.l };
            for p in 0..parts {
                let mates: Vec<usize> = (0..v)
                    .filter(|&u| self.part[u] == p && self.class[u] != self.class[v])
                    .collect();
                if mates.len() > self.bound || mates.iter().any(|&u| self.own[u] == self.bound) {
                    continue;
                }
                for &u in &mates {
                    self.own[u] += 1;
                }
                self.own[v] = mates.len();
                self.part[v] = p;
                let stopped = self.go(v + 1);
                for &u in &mates {
                    self.own[u] -= 1;
                }
                if stopped {
                    return true;
                }
            }
            false
        }
    }
    let class = pat.classes();
    let n = class.len();
    let mut walk = Walk {
        class,
        l: pat.l(),
        bound,
        part: vec![0; n],
        own: vec![0; n],
        visit,
    };
    Ok(walk.go(0))
}

/// A partition of `K_{1,s_1,...,s_l}` into `l` parts with at most `s_1 - 1`
/// own-part neighbours per vertex and no part containing a triangle, as the
/// part index of every pattern vertex (in [`MultipartitePattern::classes`] order).
pub fn cycle_lemma_counterexample(pat: &MultipartitePattern) -> Result<Option<Vec<usize>>> {
    let class = pat.classes();
    let l = pat.l();
    let mut found = None;
    walk_partitions(pat, pat.sizes[0] - 1, &mut |part| {
        let mut seen = vec![vec![false; l + 1]; l];
        for (v, &p) in part.iter().enumerate() {
            seen[p][class[v]] = true;
        }
        // a part meeting three pattern classes holds a triangle
        let triangle = seen.iter().any(|s| s.iter().filter(|&&b| b).count() >= 3);
        if !triangle {
            found = Some(part.to_vec());
        }
        triangle
    })?;
    Ok(found)
}

/// Every partition of `K_{1,s_1,...,s_l}` into `l` parts with at most
/// `s_1 - 1` own-part neighbours per vertex has a part containing a triangle.
pub fn verify_cycle_lemma(l: usize, s: &[usize]) -> Result<bool> {
    let pat = pattern_for(l, s)?;
    Ok(cycle_lemma_counterexample(&pat)?.is_none())
}

/// `s_1 <= 2` or `s_2 >= 2 (s_1 - 1)`; true for `l = 1`.
pub fn inclusion_criterion(l: usize, s: &[usize]) -> Result<bool> {
    let pat = pattern_for(l, s)?;
    let s = pat.sizes();
    Ok(s[0] <= 2 || s.len() == 1 || s[1] >= 2 * (s[0] - 1))
}

/// A partition of `K_{1,s_1,...,s_l}` into `l` parts with at most `s_1 - 1`
/// own-part neighbours per vertex.
pub fn inclusion_witness(pat: &MultipartitePattern) -> Result<Option<Vec<usize>>> {
    let mut found = None;
    walk_partitions(pat, pat.sizes[0] - 1, &mut |part| {
        found = Some(part.to_vec());
        false
    })?;
    Ok(found)
}

/// True iff `K_{1,s_1,...,s_l}` has no partition into `l` parts with at most
/// `s_1 - 1` own-part neighbours per vertex, decided exhaustively.
pub fn brute_inclusion_check(l: usize, s: &[usize]) -> Result<bool> {
    let pat = pattern_for(l, s)?;
    Ok(inclusion_witness(&pat)?.is_none())
}

fn pattern_for(l: usize, s: &[usize]) -> Result<MultipartitePattern> {
    if s.len() != l {
        return Err(Error::InvalidPattern(format!("{} sizes given for l = {l}", s.len())));
    }
    MultipartitePattern::new(s.to_vec())
}

/// `Forb_n(pat)` in edge-code order.
pub fn enumerate_forb(n: usize, pat: &MultipartitePattern) -> Result<impl Iterator<Item = Graph> + '_> {
    enumerate_class(n, move |g| !contains_multipartite(g, pat))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &[usize]) -> MultipartitePattern {
        MultipartitePattern::new(s.to_vec()).unwrap()
    }

    fn has_clique(g: &Graph, k: usize) -> bool {
        let n = g.n();
        (0u32..1 << n).filter(|m| m.count_ones() as usize == k).any(|m| {
            let vs: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
            vs.iter().all(|&a| vs.iter().all(|&b| a == b || g.adj(a, b)))
        })
    }

    /// Subgraph containment by trying every injective map of the pattern.
    fn brute_contains(g: &Graph, h: &Graph) -> bool {
        fn extend(g: &Graph, h: &Graph, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            let v = map.len();
            if v == h.n() {
                return true;
            }
            for w in 0..g.n() {
                if !used[w] && (0..v).all(|u| !h.adj(u, v) || g.adj(map[u], w)) {
                    used[w] = true;
                    map.push(w);
                    if extend(g, h, map, used) {
                        return true;
                    }
                    map.pop();
                    used[w] = false;
                }
            }
            false
        }
        extend(g, h, &mut Vec::new(), &mut vec![false; g.n()])
    }

    #[test]
    fn pattern_validation_and_shape() {
        assert!(MultipartitePattern::new(vec![]).is_err());
        assert!(MultipartitePattern::new(vec![0, 1]).is_err());
        assert!(MultipartitePattern::new(vec![3, 2]).is_err());
        let p = pat(&[1, 2]);
        assert_eq!(p.order(), 4);
        assert_eq!(p.to_graph().edge_count(), 5);
        assert_eq!(p.to_string(), "K_{1,1,2}");
    }

    #[test]
    fn detection_examples() {
        assert!(contains_multipartite(&Graph::complete(3), &pat(&[1, 1])));
        assert!(!contains_multipartite(&Graph::cycle(5), &pat(&[1, 1])));
        assert!(contains_multipartite(&Graph::complete(5), &pat(&[2, 2])));
        assert!(!contains_multipartite(&Graph::complete(4), &pat(&[2, 2])));
        assert!(contains_multipartite(&Graph::complete_bipartite(1, 3), &pat(&[3])));
    }

    #[test]
    fn clique_cross_check() {
        for n in 1..=6usize {
            for code in 0..1u64 << (n * (n - 1) / 2) {
                let g = Graph::from_edge_code(n, code);
                for l in 1..=3 {
                    let ones = pat(&vec![1; l]);
                    assert_eq!(contains_multipartite(&g, &ones), has_clique(&g, l + 1));
                }
            }
        }
    }

    #[test]
    fn agrees_with_injective_maps() {
        let patterns = [pat(&[1, 2]), pat(&[2, 2]), pat(&[1, 1, 2]), pat(&[3]), pat(&[1, 3])];
        let mut state = 99u64;
        for _ in 0..300 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let n = 5 + (state >> 60) as usize % 3;
            let g = Graph::from_edge_code(n, state >> (64 - n * (n - 1) / 2));
            for p in &patterns {
                assert_eq!(contains_multipartite(&g, p), brute_contains(&g, &p.to_graph()), "{g:?} {p}");
            }
        }
    }

    #[test]
    fn monotone_under_edge_addition() {
        let p = pat(&[1, 2]);
        for code in 0..1u64 << 10 {
            let g = Graph::from_edge_code(5, code);
            if contains_multipartite(&g, &p) {
                for bit in 0..10 {
                    assert!(contains_multipartite(&Graph::from_edge_code(5, code | 1 << bit), &p));
                }
            }
        }
    }

    #[test]
    fn cycle_lemma_examples() {
        assert!(verify_cycle_lemma(1, &[4]).unwrap());
        assert!(verify_cycle_lemma(2, &[3, 3]).unwrap());
        assert!(verify_cycle_lemma(2, &[1, 1]).unwrap());
        assert!(matches!(verify_cycle_lemma(2, &[7, 7]), Err(Error::CapExceeded { .. })));
        assert!(verify_cycle_lemma(2, &[2, 1]).is_err());
    }

    #[test]
    fn inclusion_examples() {
        assert!(inclusion_criterion(3, &[1, 1, 1]).unwrap());
        assert!(inclusion_criterion(2, &[3, 4]).unwrap());
        assert!(!inclusion_criterion(2, &[3, 3]).unwrap());
        assert!(inclusion_criterion(1, &[5]).unwrap());
        assert!(!brute_inclusion_check(2, &[3, 3]).unwrap());
        assert!(brute_inclusion_check(2, &[2, 2]).unwrap());
        assert!(brute_inclusion_check(2, &[3, 4]).unwrap());
        let witness = inclusion_witness(&pat(&[3, 3])).unwrap().unwrap();
        assert_eq!(witness.len(), 7);
        assert_eq!(witness[0], 0);
    }

    #[test]
    fn forb_enumeration() {
        assert_eq!(enumerate_forb(3, &pat(&[1, 1])).unwrap().count(), 7);
        assert_eq!(enumerate_forb(2, &pat(&[1, 1])).unwrap().count(), 2);
        let triangle_free = (0..1u64 << 6)
            .filter(|&c| !has_clique(&Graph::from_edge_code(4, c), 3))
            .count();
        assert_eq!(enumerate_forb(4, &pat(&[1, 1])).unwrap().count(), triangle_free);
        assert!(enumerate_forb(9, &pat(&[1, 1])).is_err());
    }
}
