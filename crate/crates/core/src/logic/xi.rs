use std::cmp::Reverse;

use serde::{Deserialize, Serialize};

use super::Formula;
use crate::bits;
use crate::decomp::{Partition, PartitionMode};
use crate::error::{invalid, Result};
use crate::graph::Graph;

/// Parameters of the same-part formula: `l` parts, own-part degree bound `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct XiParams {
    l: usize,
    d: usize,
}

impl XiParams {
    pub fn new(l: usize, d: usize) -> Result<XiParams> {
        if l == 0 {
            return Err(invalid("l must be at least 1"));
        }
        Ok(XiParams { l, d })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Block size `(l + 1) d + 1`.
    pub fn m(&self) -> usize {
        (self.l + 1) * self.d + 1
    }

    /// Quantifier rank of the sentence that defines the decomposition, `2 + l m`.
    pub fn q(&self) -> usize {
        2 + self.l * self.m()
    }
}

/// The formula `xi(x, y)`: `(l-1) m` distinct common neighbours of `x` and
/// `y`, split into consecutive blocks of `m`, with every vertex adjacent to
/// every vertex of each later block.
pub fn build_xi(l: usize, d: usize) -> Result<Formula> {
    if l < 2 {
        return Err(invalid("xi needs l >= 2"));
    }
    let m = XiParams::new(l, d)?.m();
    let total = (l - 1) * m;
    let z: Vec<String> = (1..=total).map(|i| format!("z{i}")).collect();
    let mut parts = Vec::new();
    for i in 0..total {
        for j in i + 1..total {
            parts.push(Formula::not(Formula::eq(&z[i], &z[j])));
        }
    }
    for zi in &z {
        parts.push(Formula::edge("x", zi));
        parts.push(Formula::edge("y", zi));
    }
    for k in 2..l {
        for i in 0..(k - 1) * m {
            for j in (k - 1) * m..total {
                parts.push(Formula::edge(&z[i], &z[j]));
            }
        }
    }
    let body = Formula::and_all(parts).expect("at least one conjunct");
    Ok(Formula::exists_all(&z, body))
}

struct XiSearch<'a> {
    g: &'a Graph,
    m: usize,
    blocks: usize,
}

impl XiSearch<'_> {
    /// Can blocks `b..` be filled from `cand`?
    fn block(&self, b: usize, cand: &[u64]) -> bool {
        let mut list: Vec<usize> = bits::ones(cand).collect();
        if list.len() < self.m {
            return false;
        }
        if b + 1 == self.blocks {
            return true;
        }
        list.sort_by_key(|&w| (Reverse(bits::and_count(self.g.row(w), cand)), w));
        self.choose(b, &list, 0, self.m, cand)
    }

    fn choose(&self, b: usize, list: &[usize], start: usize, left: usize, future: &[u64]) -> bool {
        if left == 0 {
            return self.block(b + 1, future);
        }
        for i in start..=list.len() - left {
            let w = list[i];
            let next: Vec<u64> = future.iter().zip(self.g.row(w)).map(|(a, b)| a & b).collect();
            if bits::count(&next) < self.m {
                continue;
            }
            if self.choose(b, list, i + 1, left - 1, &next) {
                return true;
            }
        }
        false
    }
}

pub(crate) fn xi_index(g: &Graph, p: XiParams, u: usize, v: usize) -> bool {
    let blocks = p.l - 1;
    if blocks == 0 {
        return true;
    }
    let cand: Vec<u64> = g.row(u).iter().zip(g.row(v)).map(|(a, b)| a & b).collect();
    XiSearch {
        g,
        m: p.m(),
        blocks,
    }
    .block(0, &cand)
}

/// Decides `G |= xi(u, v)` by searching for the blocks directly.
pub fn eval_xi_fast(g: &Graph, p: XiParams, u: usize, v: usize) -> Result<bool> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    Ok(xi_index(g, p, u - 1, v - 1))
}

/// Why the xi relation does not yield a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum XiFailure {
    /// `a ~ b` and `b ~ c` but not `a ~ c` (1-based).
    NotTransitive { a: usize, b: usize, c: usize },
    /// The relation is an equivalence with the wrong number of classes.
    ClassCount { found: usize, expected: usize },
}

/// Recovers the unordered partition whose classes are the xi-related sets.
pub fn xi_partition(g: &Graph, p: XiParams) -> std::result::Result<Partition, XiFailure> {
    let n = g.n();
    let words = bits::words_for(n);
    let mut rel = vec![0u64; n * words];
    for u in 0..n {
        bits::set(&mut rel[u * words..(u + 1) * words], u);
        for v in u + 1..n {
            if xi_index(g, p, u, v) {
                bits::set(&mut rel[u * words..(u + 1) * words], v);
                bits::set(&mut rel[v * words..(v + 1) * words], u);
            }
        }
    }
    let row = |u: usize| &rel[u * words..(u + 1) * words];
    for u in 0..n {
        for v in bits::ones(row(u)) {
            if row(u) == row(v) {
                continue;
            }
            let w = (0..n)
                .find(|&w| bits::get(row(u), w) != bits::get(row(v), w))
                .unwrap();
            let (a, b) = if bits::get(row(u), w) { (v, u) } else { (u, v) };
            return Err(XiFailure::NotTransitive {
                a: a + 1,
                b: b + 1,
                c: w + 1,
            });
        }
    }
    let mut class = vec![u32::MAX; n];
    let mut found = 0u32;
    for u in 0..n {
        if class[u] == u32::MAX {
            for v in bits::ones(row(u)) {
                class[v] = found;
            }
            found += 1;
        }
    }
    if found as usize != p.l {
        return Err(XiFailure::ClassCount {
            found: found as usize,
            expected: p.l,
        });
    }
    Ok(Partition::from_index(p.l, class, PartitionMode::UnorderedNonempty)
        .expect("classes are nonempty and numbered by first appearance"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexSet;
    use crate::logic::eval::CompiledFormula;

    fn params(l: usize, d: usize) -> XiParams {
        XiParams::new(l, d).unwrap()
    }

    #[test]
    fn derived_constants() {
        let p = params(2, 1);
        assert_eq!((p.m(), p.q()), (4, 10));
        assert_eq!(params(3, 1).m(), 5);
        assert_eq!(params(2, 0).m(), 1);
        assert!(XiParams::new(0, 1).is_err());
    }

    #[test]
    fn formula_shapes() {
        let f = build_xi(2, 1).unwrap();
        assert_eq!(f.quantifier_rank(), 4);
        let names: Vec<String> = f.free_vars().into_iter().collect();
        assert_eq!(names, ["x", "y"]);
        assert_eq!(build_xi(2, 0).unwrap().quantifier_rank(), 1);

        let g = build_xi(3, 1).unwrap();
        assert_eq!(g.quantifier_rank(), 10);
        let text = g.to_string();
        assert_eq!(text.matches("E(z").count(), 25);
        assert!(build_xi(1, 0).is_err());
    }

    #[test]
    fn complete_bipartite_sides() {
        let g = Graph::complete_bipartite(4, 4);
        let p = params(2, 1);
        assert!(eval_xi_fast(&g, p, 1, 2).unwrap());
        assert!(!eval_xi_fast(&g, p, 1, 5).unwrap());
        let pi = xi_partition(&g, p).unwrap();
        assert_eq!(
            pi.as_unordered_blocks(),
            vec![VertexSet::new(1..=4), VertexSet::new(5..=8)]
        );
    }

    #[test]
    fn low_degree_vertices_relate_to_nothing() {
        let g = Graph::cycle(9);
        let p = params(2, 1);
        for u in 1..=9 {
            for v in 1..=9 {
                if u != v {
                    assert!(!eval_xi_fast(&g, p, u, v).unwrap());
                }
            }
        }
        assert_eq!(
            xi_partition(&Graph::empty(10), p),
            Err(XiFailure::ClassCount {
                found: 10,
                expected: 2
            })
        );
    }

    #[test]
    fn matchings_joined_completely() {
        // each part: 27 disjoint edges; all cross edges present
        let side = (0..27).fold(Graph::empty(0), |acc, _| acc.disjoint_union(&Graph::path(2)));
        let two = side.disjoint_union(&side);
        let mut edges: Vec<(usize, usize)> = two.edges().collect();
        for a in 1..=54 {
            for b in 55..=108 {
                edges.push((a, b));
            }
        }
        let g = Graph::new(108, edges).unwrap();
        let pi = xi_partition(&g, params(2, 1)).unwrap();
        assert_eq!(
            pi.as_unordered_blocks(),
            vec![VertexSet::new(1..=54), VertexSet::new(55..=108)]
        );
    }

    #[test]
    fn own_degree_two_breaks_recovery() {
        // paths give own degree 2 > d, and cross pairs reach m common neighbours
        let side = Graph::path(27).disjoint_union(&Graph::path(27));
        let two = side.disjoint_union(&side);
        let mut edges: Vec<(usize, usize)> = two.edges().collect();
        for a in 1..=54 {
            for b in 55..=108 {
                edges.push((a, b));
            }
        }
        let g = Graph::new(108, edges).unwrap();
        assert!(eval_xi_fast(&g, params(2, 1), 2, 56).unwrap());
        assert!(xi_partition(&g, params(2, 1)).is_err());
    }

    #[test]
    fn non_transitive_witness() {
        // 1 and 3 share neighbours {4,5}; 2 and 3 share {6,7}; 1 and 2 share nothing
        let g = Graph::new(7, [(1, 4), (1, 5), (3, 4), (3, 5), (3, 6), (3, 7), (2, 6), (2, 7)]).unwrap();
        let p = params(2, 0);
        let failure = xi_partition(&g, params(2, 0)).unwrap_err();
        match failure {
            XiFailure::NotTransitive { a, b, c } => {
                assert!(eval_xi_fast(&g, p, a, b).unwrap());
                assert!(eval_xi_fast(&g, p, b, c).unwrap());
                assert!(!eval_xi_fast(&g, p, a, c).unwrap());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn agrees_with_formula_on_small_graphs() {
        let cases: Vec<(XiParams, CompiledFormula)> = [(2, 0), (2, 1), (3, 0), (4, 0)]
            .iter()
            .map(|&(l, d)| (params(l, d), CompiledFormula::new(&build_xi(l, d).unwrap()).unwrap()))
            .collect();
        for n in 2..=6usize {
            for code in 0..(1u64 << (n * (n - 1) / 2)) {
                let g = Graph::from_edge_code(n, code);
                for (p, f) in &cases {
                    for u in 0..n {
                        for v in 0..n {
                            let fast = xi_index(&g, *p, u, v);
                            assert_eq!(fast, f.eval_index(&g, &[u, v]));
                            assert_eq!(fast, xi_index(&g, *p, v, u));
                        }
                    }
                }
            }
        }
    }
}
