use serde::{Deserialize, Serialize};

use super::objects::{find_objects, object_size, DEFAULT_SEARCH_BUDGET};
use crate::decomp::{decomposition_from_partition, is_rich};
use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::logic::{xi_partition, XiFailure, XiParams};

/// Which vertex count enters the bound on degree-(d-1) vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeCountBase {
    #[default]
    PartSize,
    WholeGraph,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PkOptions {
    pub eps: f64,
    pub mu: f64,
    pub base: DegreeCountBase,
}

impl PkOptions {
    pub fn new(eps: f64, mu: f64) -> PkOptions {
        PkOptions {
            eps,
            mu,
            base: DegreeCountBase::PartSize,
        }
    }
}

/// Verdict on one numbered property, with offending vertices (original labels).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub property: u8,
    pub holds: bool,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartReport {
    pub vertices: Vec<usize>,
    /// Number of degree-(d-1) vertices and the interval it must lie in.
    pub near_full: usize,
    pub near_full_range: (f64, f64),
    pub checks: Vec<PropertyCheck>,
}

impl PartReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PkReport {
    pub l: usize,
    pub d: usize,
    pub k: usize,
    /// Object size bound `5^k`.
    pub s: usize,
    /// Distance bound `5^(k+1)`.
    pub t: usize,
    pub options: PkOptions,
    pub xi_failure: Option<XiFailure>,
    pub rich: bool,
    /// Some vertex has more than `d` neighbours in its xi class.
    pub own_degree_violation: Option<usize>,
    pub parts: Vec<PartReport>,
}

impl PkReport {
    pub fn member(&self) -> bool {
        self.xi_failure.is_none()
            && self.rich
            && self.own_degree_violation.is_none()
            && self.parts.iter().all(PartReport::holds)
    }
}

/// `P^k` membership with all per-part verdicts.
pub fn pk_membership(g: &Graph, l: usize, d: usize, k: usize, options: PkOptions) -> Result<PkReport> {
    if !(options.eps > 0.0 && options.eps < d as f64) {
        return Err(invalid(format!("eps = {} must lie in (0, d)", options.eps)));
    }
    if !(options.mu > 0.0) {
        return Err(invalid(format!("mu = {} must be positive", options.mu)));
    }
    let s = object_size(k)?;
    let t = object_size(k + 1)?;
    let mut report = PkReport {
        l,
        d,
        k,
        s,
        t,
        options,
        xi_failure: None,
        rich: false,
        own_degree_violation: None,
        parts: Vec::new(),
    };
    let pi = match xi_partition(g, XiParams::new(l, d)?) {
        Ok(pi) => pi,
        Err(f) => {
            report.xi_failure = Some(f);
            return Ok(report);
        }
    };
    report.rich = is_rich(&pi, options.mu * g.n() as f64);
    if let Err(crate::decomp::DecompositionFailure::TooManyOwnNeighbours { vertex, .. }) =
        decomposition_from_partition(g, &pi, d)
    {
        report.own_degree_violation = Some(vertex);
        return Ok(report);
    }
    for part in pi.parts() {
        let (h, map) = g.induced_subgraph(&part)?;
        let base = match options.base {
            DegreeCountBase::PartSize => h.n(),
            DegreeCountBase::WholeGraph => g.n(),
        };
        report.parts.push(check_part(&h, &map, d, s, t, options.eps, base)?);
    }
    Ok(report)
}

fn check_part(h: &Graph, map: &[usize], d: usize, s: usize, t: usize, eps: f64, base: usize) -> Result<PartReport> {
    let n = h.n();
    let label = |vs: &[usize]| vs.iter().map(|&v| map[v]).collect::<Vec<_>>();
    let check = |property: u8, witness: Option<Vec<usize>>| PropertyCheck {
        property,
        holds: witness.is_none(),
        witness: witness.map(|w| label(&w)).unwrap_or_default(),
    };
    let mut checks = Vec::with_capacity(7);

    checks.push(check(1, (0..n).find(|&v| h.deg(v) + 2 < d).map(|v| vec![v])));

    let near_full = (0..n).filter(|&v| h.deg(v) + 1 == d).count();
    let lo = ((d as f64 - eps) * base as f64).sqrt();
    let hi = ((d as f64 + eps) * base as f64).sqrt();
    let in_range = (near_full as f64) >= lo && (near_full as f64) <= hi;
    checks.push(PropertyCheck {
        property: 2,
        holds: in_range,
        witness: Vec::new(),
    });

    let cycles = find_objects(h, d, s, DEFAULT_SEARCH_BUDGET)?.cycles;
    let within = |src: &[usize]| h.bfs_from(src, Some(t));

    let mut close_cycles = None;
    'outer: for (i, c) in cycles.iter().enumerate() {
        let dist = within(c);
        for other in &cycles[i + 1..] {
            if let Some(&v) = other.iter().find(|&&v| dist[v].is_some()) {
                close_cycles = Some(vec![c[0], v]);
                break 'outer;
            }
        }
    }
    checks.push(check(3, close_cycles));

    let on_cycles: Vec<usize> = cycles.iter().flatten().copied().collect();
    let low_near_cycle = if on_cycles.is_empty() {
        None
    } else {
        let dist = within(&on_cycles);
        (0..n).find(|&v| h.deg(v) < d && dist[v].is_some()).map(|v| vec![v])
    };
    checks.push(check(4, low_near_cycle));

    let low: Vec<usize> = (0..n).filter(|&v| h.deg(v) < d).collect();
    let near: Vec<Vec<usize>> = low
        .iter()
        .map(|&v| {
            let dist = within(&[v]);
            low.iter().copied().filter(|&w| w != v && dist[w].is_some()).collect()
        })
        .collect();
    let mut triple = None;
    'tri: for (i, &a) in low.iter().enumerate() {
        for &b in near[i].iter().filter(|&&b| b > a) {
            let j = low.binary_search(&b).unwrap();
            if let Some(&c) = near[j].iter().find(|&&c| c > b && near[i].contains(&c)) {
                triple = Some(vec![a, b, c]);
                break 'tri;
            }
        }
    }
    checks.push(check(5, triple));

    let mut pair = None;
    'pair: for (i, &v) in low.iter().enumerate() {
        for &w in &near[i] {
            if h.deg(w) + 2 <= d {
                pair = Some(vec![v, w]);
                break 'pair;
            }
        }
    }
    checks.push(check(6, pair));

    if d >= 3 {
        let small = h.components().into_iter().find(|c| c.len() <= t);
        checks.push(check(7, small.map(|c| vec![c.members()[0] - 1])));
    }

    Ok(PartReport {
        vertices: map.to_vec(),
        near_full,
        near_full_range: (lo, hi),
        checks,
    })
}
