use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, Result};
use crate::graph::Graph;

/// Limits for the exhaustive Ehrenfeucht–Fraïssé search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EfCaps {
    pub max_k: usize,
    pub max_n: usize,
}

impl Default for EfCaps {
    fn default() -> Self {
        EfCaps { max_k: 3, max_n: 12 }
    }
}

/// Whether Duplicator wins the `k`-round game on `g` and `h`, i.e. the two
/// graphs satisfy the same sentences of quantifier rank at most `k`.
pub fn ef_equivalent(g: &Graph, h: &Graph, k: usize) -> Result<bool> {
    ef_equivalent_capped(g, h, k, EfCaps::default())
}

pub fn ef_equivalent_capped(g: &Graph, h: &Graph, k: usize, caps: EfCaps) -> Result<bool> {
    check_cap("EF rounds", k, caps.max_k)?;
    check_cap("EF graph order", g.n().max(h.n()), caps.max_n.min(255))?;
    let mut game = Game {
        g,
        h,
        memo: HashMap::new(),
    };
    Ok(game.wins(&mut Vec::new(), k))
}

type Position = Vec<(u8, u8)>;

struct Game<'a> {
    g: &'a Graph,
    h: &'a Graph,
    memo: HashMap<(Position, usize), bool>,
}

impl Game<'_> {
    /// Adding `a ↦ b` keeps the pebbled map a partial isomorphism.
    fn compatible(&self, pos: &[(u8, u8)], a: usize, b: usize) -> bool {
        pos.iter().all(|&(x, y)| {
            let (x, y) = (x as usize, y as usize);
            (x == a) == (y == b) && self.g.adj(a, x) == self.h.adj(b, y)
        })
    }

    fn extend(pos: &[(u8, u8)], a: usize, b: usize) -> Position {
        let mut next = pos.to_vec();
        let at = next.partition_point(|&p| p < (a as u8, b as u8));
        next.insert(at, (a as u8, b as u8));
        next
    }

    /// Spoiler's fresh moves in one structure all have a Duplicator reply.
    /// Replaying a pebbled vertex leaves the position unchanged, which only
    /// costs Spoiler a round, so those moves are skipped.
    fn side_ok(&mut self, pos: &Position, r: usize, in_g: bool) -> bool {
        let (na, nb) = if in_g {
            (self.g.n(), self.h.n())
        } else {
            (self.h.n(), self.g.n())
        };
        for a in 0..na {
            if pos.iter().any(|&(x, y)| (if in_g { x } else { y }) as usize == a) {
                continue;
            }
            let mut answered = false;
            for b in 0..nb {
                let (ga, hb) = if in_g { (a, b) } else { (b, a) };
                if self.compatible(pos, ga, hb) {
                    let mut next = Self::extend(pos, ga, hb);
                    if self.wins(&mut next, r - 1) {
                        answered = true;
                        break;
                    }
                }
            }
            if !answered {
                return false;
            }
        }
        true
    }

    fn wins(&mut self, pos: &mut Position, r: usize) -> bool {
        if r == 0 {
            return true;
        }
        let key = (pos.clone(), r);
        if let Some(&w) = self.memo.get(&key) {
            return w;
        }
        let w = self.side_ok(pos, r, true) && self.side_ok(pos, r, false);
        self.memo.insert(key, w);
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_versus_two_isolated_vertices() {
        let edge = Graph::path(2);
        let pair = Graph::empty(2);
        assert!(ef_equivalent(&edge, &pair, 1).unwrap());
        assert!(!ef_equivalent(&edge, &pair, 2).unwrap());
    }

    #[test]
    fn isomorphic_graphs_are_equivalent() {
        let g = Graph::cycle(6);
        let h = g.relabel(&[2, 4, 6, 1, 3, 5]);
        for k in 0..=3 {
            assert!(ef_equivalent(&g, &h, k).unwrap());
        }
    }

    #[test]
    fn cycle_lengths() {
        // C6 vs 2·C3: same for two rounds, a triangle appears at three
        let c6 = Graph::cycle(6);
        let two = Graph::cycle(3).disjoint_union(&Graph::cycle(3));
        assert!(ef_equivalent(&c6, &two, 2).unwrap());
        assert!(!ef_equivalent(&c6, &two, 3).unwrap());
        // large cycles cannot be told apart in three rounds
        assert!(ef_equivalent(&Graph::cycle(11), &Graph::cycle(12), 3).unwrap());
    }

    #[test]
    fn order_and_emptiness() {
        assert!(ef_equivalent(&Graph::empty(0), &Graph::empty(0), 3).unwrap());
        assert!(!ef_equivalent(&Graph::empty(0), &Graph::empty(1), 1).unwrap());
        assert!(ef_equivalent(&Graph::empty(3), &Graph::empty(5), 3).unwrap());
        assert!(!ef_equivalent(&Graph::empty(2), &Graph::empty(3), 3).unwrap());
    }

    #[test]
    fn caps_are_enforced() {
        assert!(ef_equivalent(&Graph::empty(2), &Graph::empty(2), 4).is_err());
        assert!(ef_equivalent(&Graph::empty(13), &Graph::empty(2), 1).is_err());
        let caps = EfCaps { max_k: 4, max_n: 12 };
        assert!(ef_equivalent_capped(&Graph::path(3), &Graph::path(3), 4, caps).unwrap());
    }
}
