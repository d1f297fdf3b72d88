use rand::Rng;

use super::Seed;
use crate::bits;
use crate::graph::Graph;

/// Metropolis chain on `P_n(1, d)`: propose a uniform vertex pair and toggle
/// it unless that would push a degree above `d`. Starts from the empty graph.
#[derive(Clone, Debug)]
pub struct ToggleChain {
    n: usize,
    d: usize,
    words: usize,
    rows: Vec<u64>,
    degree: Vec<usize>,
}

impl ToggleChain {
    pub fn new(n: usize, d: usize) -> ToggleChain {
        let words = bits::words_for(n);
        ToggleChain {
            n,
            d,
            words,
            rows: vec![0; n * words],
            degree: vec![0; n],
        }
    }

    fn flip(&mut self, u: usize, v: usize) {
        let w = self.words;
        self.rows[u * w + (v >> 6)] ^= 1 << (v & 63);
        self.rows[v * w + (u >> 6)] ^= 1 << (u & 63);
    }

    fn adj(&self, u: usize, v: usize) -> bool {
        bits::get(&self.rows[u * self.words..(u + 1) * self.words], v)
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        if self.n < 2 {
            return;
        }
        let u = rng.gen_range(0..self.n);
        let mut v = rng.gen_range(0..self.n - 1);
        if v >= u {
            v += 1;
        }
        if self.adj(u, v) {
            self.flip(u, v);
            self.degree[u] -= 1;
            self.degree[v] -= 1;
        } else if self.degree[u] < self.d && self.degree[v] < self.d {
            self.flip(u, v);
            self.degree[u] += 1;
            self.degree[v] += 1;
        }
    }

    pub fn run<R: Rng + ?Sized>(&mut self, steps: usize, rng: &mut R) {
        for _ in 0..steps {
            self.step(rng);
        }
    }

    pub fn graph(&self) -> Graph {
        let edges = (0..self.n).flat_map(|u| {
            (u + 1..self.n)
                .filter(move |&v| self.adj(u, v))
                .map(move |v| (u, v))
        });
        Graph::from_index_edges(self.n, edges.collect::<Vec<_>>())
    }

    /// Same encoding as [`Graph::edge_code`]; `None` above 64 pairs.
    pub fn edge_code(&self) -> Option<u64> {
        if self.n * self.n.saturating_sub(1) / 2 > 64 {
            return None;
        }
        let mut code = 0u64;
        let mut bit = 0;
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adj(u, v) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        Some(code)
    }
}

/// State of the toggle chain after `steps` proposals.
pub fn mcmc_toggle_chain(n: usize, d: usize, steps: usize, seed: &Seed) -> Graph {
    let mut chain = ToggleChain::new(n, d);
    chain.run(steps, &mut seed.rng());
    chain.graph()
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;

    #[test]
    fn zero_steps_gives_the_empty_graph() {
        assert_eq!(mcmc_toggle_chain(5, 2, 0, &Seed::new(1)), Graph::empty(5));
    }

    #[test]
    fn matchings_on_three_vertices_are_equally_likely() {
        let mut chain = ToggleChain::new(3, 1);
        let mut rng = Seed::new(3).rng();
        chain.run(100, &mut rng);
        let mut freq: HashMap<u64, usize> = HashMap::new();
        let samples = 100_000;
        for _ in 0..samples {
            chain.run(5, &mut rng);
            *freq.entry(chain.edge_code().unwrap()).or_default() += 1;
        }
        assert_eq!(freq.len(), 4);
        for &c in freq.values() {
            assert!((c as f64 / samples as f64 - 0.25).abs() < 0.02);
        }
    }

    #[test]
    fn unconstrained_chain_has_binomial_edge_mean() {
        let n = 8;
        let mut chain = ToggleChain::new(n, n - 1);
        let mut rng = Seed::new(5).rng();
        chain.run(1000, &mut rng);
        let mut total = 0usize;
        let samples = 20_000;
        for _ in 0..samples {
            chain.run(10, &mut rng);
            total += chain.graph().edge_count();
        }
        let mean = total as f64 / samples as f64;
        assert!((mean - 14.0).abs() < 0.3, "{mean}");
    }

    #[test]
    fn degrees_stay_bounded() {
        let g = mcmc_toggle_chain(70, 3, 20_000, &Seed::new(8));
        assert!(g.max_degree() <= 3);
        assert!(g.edge_count() > 0);
    }
}
