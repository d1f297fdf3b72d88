use std::fmt;

use serde_json::{json, Value};

use super::objects::{count_small_objects, find_objects, np_from_objects, object_size, ObjectCounts, DEFAULT_SEARCH_BUDGET};
use crate::canon::{canonical_form, Certificate};
use crate::decomp::Partition;
use crate::error::Error;
use crate::graph::{Graph, VertexSet};
use crate::logic::{xi_partition, XiFailure, XiParams};

/// Per-part object counts of a graph, sorted so that relabelling vertices
/// or permuting parts leaves the signature unchanged.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PoissonSignature {
    pub d: usize,
    pub t: usize,
    pub parts: Vec<ObjectCounts>,
}

impl PoissonSignature {
    /// JSON with sorted keys and counts as decimal strings.
    pub fn to_canonical_json(&self) -> String {
        let parts: Vec<Value> = self
            .parts
            .iter()
            .map(|p| {
                let strs = |v: &[u64]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
                json!({ "q": p.q.to_string(), "r": strs(&p.cycles), "s": strs(&p.paths) })
            })
            .collect();
        json!({ "d": self.d.to_string(), "parts": parts, "t": self.t.to_string() }).to_string()
    }
}

/// Why no signature could be computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignatureFailure {
    /// The xi relation does not define `l` parts.
    Xi(XiFailure),
    /// A part's induced graph is outside the class or too large to search.
    Census(Error),
}

impl fmt::Display for SignatureFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureFailure::Xi(x) => write!(f, "xi partition failed: {x:?}"),
            SignatureFailure::Census(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SignatureFailure {}

fn xi_parts(g: &Graph, l: usize, d: usize) -> Result<Partition, SignatureFailure> {
    let p = XiParams::new(l, d).map_err(SignatureFailure::Census)?;
    xi_partition(g, p).map_err(SignatureFailure::Xi)
}

/// Object counts with size bound `5^k` inside each part of the xi partition.
pub fn signature(g: &Graph, l: usize, d: usize, k: usize) -> Result<PoissonSignature, SignatureFailure> {
    let t = object_size(k).map_err(SignatureFailure::Census)?;
    let pi = xi_parts(g, l, d)?;
    let mut parts = Vec::with_capacity(l);
    for part in pi.parts() {
        let (h, _) = g.induced_subgraph(&part).expect("parts hold valid vertices");
        parts.push(count_small_objects(&h, d, t).map_err(SignatureFailure::Census)?);
    }
    parts.sort();
    Ok(PoissonSignature { d, t, parts })
}

fn permutations(l: usize) -> Vec<Vec<u32>> {
    fn rec(cur: &mut Vec<u32>, used: &mut Vec<bool>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i as u32);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; l], &mut out);
    out
}

/// Canonical form of `G[U]` with vertices coloured by part, where `U` is the
/// union over parts of `NP(G[V_i], 5^k)`; minimised over renamings of parts.
pub fn signature_plus(g: &Graph, l: usize, d: usize, k: usize) -> Result<Certificate, SignatureFailure> {
    let size = object_size(k).map_err(SignatureFailure::Census)?;
    let pi = xi_parts(g, l, d)?;
    let mut union: Vec<(usize, u32)> = Vec::new();
    for (i, part) in pi.parts().iter().enumerate() {
        let (h, map) = g.induced_subgraph(part).expect("parts hold valid vertices");
        let objects = find_objects(&h, d, size, DEFAULT_SEARCH_BUDGET).map_err(SignatureFailure::Census)?;
        let ball = np_from_objects(&h, &objects, size);
        union.extend(ball.members().iter().map(|&v| (map[v - 1], i as u32)));
    }
    union.sort_unstable();
    let keep = VertexSet::new(union.iter().map(|&(v, _)| v));
    let (sub, _) = g.induced_subgraph(&keep).expect("valid vertices");
    let colours: Vec<u32> = union.iter().map(|&(_, c)| c).collect();
    let mut best: Option<Certificate> = None;
    for perm in permutations(l) {
        let recoloured: Vec<u32> = colours.iter().map(|&c| perm[c as usize]).collect();
        let cert = canonical_form(&sub, &recoloured).map_err(SignatureFailure::Census)?;
        if best.as_ref().is_none_or(|b| cert < *b) {
            best = Some(cert);
        }
    }
    Ok(best.expect("at least one permutation"))
}
