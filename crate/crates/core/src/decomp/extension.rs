//! Extension properties with respect to a partition.
//!
//! A pattern is a graph `H` on `X1 ∪ X2 ∪ Y` with no `X1`–`Y` edges, plus a
//! target part `p`. The graph satisfies the pattern when either `G[V_p]` has
//! fewer than `⌊n^{1/4}⌋` distinct induced copies of `H[Y]`, or every strong
//! embedding of `H[X1 ∪ X2]` with `X1 ↦ V_p`, `X2 ↦ V ∖ V_p` extends to a
//! strong embedding of `H` with `Y ↦ V_p`.

use std::collections::HashSet;

use crate::bits;
use crate::canon::canonical_form;
use crate::decomp::Partition;
use crate::error::{check_cap, Error, Result};
use crate::graph::{Graph, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionPattern {
    pub h: Graph,
    pub x1: VertexSet,
    pub x2: VertexSet,
    pub y: VertexSet,
    /// 1-based target part.
    pub target: usize,
}

impl ExtensionPattern {
    pub fn new(h: Graph, x1: VertexSet, x2: VertexSet, y: VertexSet, target: usize) -> Result<Self> {
        let mut all: Vec<usize> = x1
            .members()
            .iter()
            .chain(x2.members())
            .chain(y.members())
            .copied()
            .collect();
        all.sort_unstable();
        if all != (1..=h.n()).collect::<Vec<_>>() {
            return Err(Error::InvalidPattern(
                "X1, X2 and Y must partition the pattern's vertices".into(),
            ));
        }
        for &a in x1.members() {
            for &b in y.members() {
                if h.has_edge(a, b) {
                    return Err(Error::InvalidPattern(format!(
                        "edge {a}-{b} joins X1 and Y"
                    )));
                }
            }
        }
        if target == 0 {
            return Err(Error::InvalidPattern("target part is 1-based".into()));
        }
        Ok(ExtensionPattern { h, x1, x2, y, target })
    }

    pub fn size(&self) -> usize {
        self.h.n()
    }
}

/// A strong embedding of `H[X1 ∪ X2]` that admits no extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionFailure {
    pub pattern: ExtensionPattern,
    /// `(pattern vertex, graph vertex)` pairs, both 1-based.
    pub partial: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KExtensionCaps {
    pub max_k: usize,
    pub max_n: usize,
}

impl Default for KExtensionCaps {
    fn default() -> Self {
        KExtensionCaps { max_k: 4, max_n: 64 }
    }
}

/// Largest `r` with `r^4 <= n`.
pub(crate) fn fourth_root_floor(n: usize) -> usize {
    let mut r = (n as f64).powf(0.25) as usize;
    while (r + 1).pow(4) <= n {
        r += 1;
    }
    while r > 0 && r.pow(4) > n {
        r -= 1;
    }
    r
}

/// Backtracking search for injective strong embeddings of pattern vertices
/// into `g`. `map[hv]` holds the image of pattern vertex `hv` (0-based) or
/// `usize::MAX`.
struct Embedder<'a> {
    h: &'a Graph,
    g: &'a Graph,
    map: Vec<usize>,
    used: Vec<u64>,
}

impl<'a> Embedder<'a> {
    fn new(h: &'a Graph, g: &'a Graph) -> Self {
        Embedder {
            h,
            g,
            map: vec![usize::MAX; h.n()],
            used: vec![0; g.words()],
        }
    }

    fn fits(&self, hv: usize, x: usize) -> bool {
        if bits::get(&self.used, x) {
            return false;
        }
        (0..self.h.n()).all(|hw| {
            let y = self.map[hw];
            y == usize::MAX || self.h.adj(hv, hw) == self.g.adj(x, y)
        })
    }

    /// Visits every completion over `order`; stops early once `visit` returns true.
    fn run(
        &mut self,
        order: &[usize],
        allowed: &[u64],
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        let Some((&hv, rest)) = order.split_first() else {
            return visit(&self.map);
        };
        let candidates: Vec<usize> = bits::ones(allowed).collect();
        for x in candidates {
            if x >= self.g.n() || !self.fits(hv, x) {
                continue;
            }
            self.map[hv] = x;
            bits::set(&mut self.used, x);
            let stop = self.run(rest, allowed, visit);
            bits::clear(&mut self.used, x);
            self.map[hv] = usize::MAX;
            if stop {
                return true;
            }
        }
        false
    }

    /// Like `run`, with a separate allowed set per pattern vertex.
    fn run_split(
        &mut self,
        order: &[(usize, &[u64])],
        visit: &mut dyn FnMut(&mut Self) -> bool,
    ) -> bool {
        let Some((&(hv, allowed), rest)) = order.split_first() else {
            return visit(self);
        };
        for x in bits::ones(allowed).collect::<Vec<_>>() {
            if x >= self.g.n() || !self.fits(hv, x) {
                continue;
            }
            self.map[hv] = x;
            bits::set(&mut self.used, x);
            let stop = self.run_split(rest, visit);
            bits::clear(&mut self.used, x);
            self.map[hv] = usize::MAX;
            if stop {
                return true;
            }
        }
        false
    }
}

fn part_mask(g: &Graph, pi: &Partition, target: usize) -> Vec<u64> {
    let mut mask = vec![0u64; g.words()];
    for v in 0..g.n() {
        if pi.index_of(v) == target - 1 {
            bits::set(&mut mask, v);
        }
    }
    mask
}

/// Number of distinct vertex sets `S ⊆ V_p` with `G[S] ≅ H[Y]`, counted up to `limit`.
fn count_copies(g: &Graph, pat: &ExtensionPattern, inside: &[u64], limit: usize) -> usize {
    let y: Vec<usize> = pat.y.members().iter().map(|v| v - 1).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut emb = Embedder::new(&pat.h, g);
    emb.run(&y, inside, &mut |map| {
        let mut image: Vec<usize> = y.iter().map(|&hv| map[hv]).collect();
        image.sort_unstable();
        seen.insert(image);
        seen.len() >= limit
    });
    seen.len()
}

/// The first unextendable partial embedding for this pattern, if any.
pub fn extension_failure(
    g: &Graph,
    pi: &Partition,
    pat: &ExtensionPattern,
) -> Result<Option<ExtensionFailure>> {
    if pi.n() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "partition covers {} vertices, graph has {}",
            pi.n(),
            g.n()
        )));
    }
    if pat.target > pi.l() {
        return Err(Error::InvalidPattern(format!(
            "target part {} exceeds l = {}",
            pat.target,
            pi.l()
        )));
    }
    let inside = part_mask(g, pi, pat.target);
    let mut outside = vec![0u64; g.words()];
    for v in 0..g.n() {
        if !bits::get(&inside, v) {
            bits::set(&mut outside, v);
        }
    }
    let guard = fourth_root_floor(g.n());
    if count_copies(g, pat, &inside, guard.max(1)) < guard {
        return Ok(None);
    }

    let mut order: Vec<(usize, &[u64])> = Vec::new();
    for &v in pat.x1.members() {
        order.push((v - 1, &inside));
    }
    for &v in pat.x2.members() {
        order.push((v - 1, &outside));
    }
    let y: Vec<usize> = pat.y.members().iter().map(|v| v - 1).collect();
    let mut failure = None;
    let mut emb = Embedder::new(&pat.h, g);
    emb.run_split(&order, &mut |e: &mut Embedder| {
        let extends = e.run(&y, &inside, &mut |_| true);
        if !extends {
            failure = Some(
                (0..pat.h.n())
                    .filter(|&hv| e.map[hv] != usize::MAX)
                    .map(|hv| (hv + 1, e.map[hv] + 1))
                    .collect::<Vec<_>>(),
            );
        }
        !extends
    });
    Ok(failure.map(|partial| ExtensionFailure {
        pattern: pat.clone(),
        partial,
    }))
}

/// Whether `G` satisfies the extension condition for one pattern.
pub fn check_extension_instance(g: &Graph, pi: &Partition, pat: &ExtensionPattern) -> Result<bool> {
    Ok(extension_failure(g, pi, pat)?.is_none())
}

/// All patterns with at most `k` vertices, one per isomorphism class of
/// role-coloured graphs (roles X1, X2, Y), with target part 1.
pub fn enumerate_patterns(k: usize) -> Result<Vec<ExtensionPattern>> {
    check_cap("pattern size k", k, KExtensionCaps::default().max_k)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for j in 0..=k {
        let pairs = j * j.saturating_sub(1) / 2;
        for code in 0..(1u64 << pairs) {
            let h = Graph::from_edge_code(j, code);
            for roles_code in 0..3usize.pow(j as u32) {
                let roles: Vec<u32> = (0..j)
                    .map(|i| ((roles_code / 3usize.pow(i as u32)) % 3) as u32)
                    .collect();
                let x1_y_edge = h
                    .index_edges()
                    .any(|(a, b)| roles[a] + roles[b] == 2 && roles[a] != roles[b]);
                if x1_y_edge {
                    continue;
                }
                if !seen.insert(canonical_form(&h, &roles)?) {
                    continue;
                }
                let pick = |r: u32| -> VertexSet {
                    (0..j).filter(|&i| roles[i] == r).map(|i| i + 1).collect()
                };
                out.push(ExtensionPattern::new(h.clone(), pick(0), pick(1), pick(2), 1)?);
            }
        }
    }
    Ok(out)
}

/// The first pattern (over all targets) that `G` violates, if any.
pub fn k_extension_failure(
    g: &Graph,
    pi: &Partition,
    k: usize,
    caps: KExtensionCaps,
) -> Result<Option<ExtensionFailure>> {
    check_cap("extension size k", k, caps.max_k)?;
    check_cap("graph size n", g.n(), caps.max_n)?;
    for pat in enumerate_patterns(k)? {
        for target in 1..=pi.l() {
            let p = ExtensionPattern { target, ..pat.clone() };
            if let Some(f) = extension_failure(g, pi, &p)? {
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}

/// Whether `G` has the `k`-extension property with respect to `π`.
pub fn check_k_extension(g: &Graph, pi: &Partition, k: usize) -> Result<bool> {
    Ok(k_extension_failure(g, pi, k, KExtensionCaps::default())?.is_none())
}
