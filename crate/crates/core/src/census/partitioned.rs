//! Pairs `(π, G)` with `G ∈ P_{n,π}(l, d)` and the rejection step that turns
//! them into uniform members of `P_n(l, d)`.
//!
//! Given the part sizes, a pair is built from independent choices: the label
//! arrangement, a fair coin per cross pair, and a member of `P_{n_i}(1, d)`
//! inside each part. Part sizes are drawn one part at a time from
//! `T(j, r) = sum_a C(r, a) 2^{a(r-a)} |P_a(1, d)| T(j-1, r-a)`, the number of
//! pairs on `r` labelled vertices split over `j` labelled parts.

use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::count::{pick, CensusCaps, CountTable};
use super::Seed;
use crate::decomp::{count_decompositions, Partition, PartitionMode};
use crate::error::{check_cap, invalid, Result};
use crate::graph::Graph;

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn cross_pairs(sizes: &[usize]) -> usize {
    let n: usize = sizes.iter().sum();
    (n * n - sizes.iter().map(|s| s * s).sum::<usize>()) / 2
}

/// `|P_{n,π}(l, d)|` for any partition `π` with these part sizes:
/// every cross pair is free and each part holds a member of `P_{n_i}(1, d)`.
pub fn partition_class_count(sizes: &[usize], d: usize) -> Result<BigUint> {
    let table = CountTable::new(sizes.iter().copied().max().unwrap_or(0), d)?;
    let mut total = BigUint::one() << cross_pairs(sizes);
    for &s in sizes {
        total *= table.count(s)?;
    }
    Ok(total)
}

/// An ordered size vector and the number of pairs `(π, G)` whose partition
/// has these part sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeVectorWeight {
    pub sizes: Vec<usize>,
    #[serde(with = "crate::decimal")]
    pub weight: BigUint,
}

/// All ordered size vectors of length `l` summing to `n` with their weights
/// `multinomial(n; sizes) · |P_{n,π}(l, d)|`.
pub fn size_vector_weights(n: usize, l: usize, d: usize) -> Result<Vec<SizeVectorWeight>> {
    if l == 0 {
        return Err(invalid("l must be at least 1"));
    }
    let vectors = binomial(n + l - 1, l - 1);
    check_cap("size vectors", usize::try_from(&vectors).unwrap_or(usize::MAX), 1_000_000)?;
    let table = CountTable::new(n, d)?;
    let mut out = Vec::new();
    let mut sizes = vec![0usize; l];
    fn rec(
        at: usize,
        left: usize,
        sizes: &mut Vec<usize>,
        table: &CountTable,
        out: &mut Vec<SizeVectorWeight>,
    ) -> Result<()> {
        let l = sizes.len();
        if at + 1 == l {
            sizes[at] = left;
            let n: usize = sizes.iter().sum();
            let mut weight = BigUint::one() << cross_pairs(sizes);
            let mut rest = n;
            for &s in sizes.iter() {
                weight *= binomial(rest, s) * table.count(s)?;
                rest -= s;
            }
            out.push(SizeVectorWeight {
                sizes: sizes.clone(),
                weight,
            });
            return Ok(());
        }
        for s in 0..=left {
            sizes[at] = s;
            rec(at + 1, left - s, sizes, table, out)?;
        }
        Ok(())
    }
    rec(0, n, &mut sizes, &table, &mut out)?;
    Ok(out)
}

/// A uniform draw from `P_n(l, d)` with the partition it was built from.
#[derive(Clone, Debug)]
pub struct PldDraw {
    pub graph: Graph,
    pub partition: Partition,
    /// Pairs drawn before one was accepted, including the accepted one.
    pub attempts: usize,
}

/// Samplers for fixed `(n, l, d)` sharing their count tables.
pub struct PldSampler {
    n: usize,
    l: usize,
    d: usize,
    parts: CountTable,
    /// `prefix[j][r]`: prefix sums over the first part's size `a`.
    prefix: Vec<Vec<OnceLock<Vec<BigUint>>>>,
}

impl PldSampler {
    pub fn new(n: usize, l: usize, d: usize) -> Result<PldSampler> {
        PldSampler::with_caps(n, l, d, CensusCaps::default())
    }

    pub fn with_caps(n: usize, l: usize, d: usize, caps: CensusCaps) -> Result<PldSampler> {
        if l == 0 {
            return Err(invalid("l must be at least 1"));
        }
        check_cap("part count", l, caps.max_l)?;
        check_cap("partitioned order", n, caps.max_n_partitioned)?;
        Ok(PldSampler {
            n,
            l,
            d,
            parts: CountTable::with_caps(n, d, caps)?,
            prefix: (0..=l)
                .map(|_| (0..=n).map(|_| OnceLock::new()).collect())
                .collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn count_table(&self) -> &CountTable {
        &self.parts
    }

    fn pairs(&self, j: usize, r: usize) -> BigUint {
        if j == 0 {
            return BigUint::from(u8::from(r == 0));
        }
        self.prefix_for(j, r).last().unwrap().clone()
    }

    fn prefix_for(&self, j: usize, r: usize) -> &[BigUint] {
        self.prefix[j][r].get_or_init(|| {
            let mut acc = BigUint::zero();
            let mut binom = BigUint::one();
            let mut out = Vec::with_capacity(r + 1);
            for a in 0..=r {
                let rest = self.pairs(j - 1, r - a);
                if !rest.is_zero() {
                    let own = self.parts.count(a).expect("within table");
                    acc += (&binom * own * rest) << (a * (r - a));
                }
                out.push(acc.clone());
                binom = binom * (r - a) / (a + 1);
            }
            out
        })
    }

    /// Number of pairs `(π, G)` with `π` ordered (parts may be empty) and
    /// `G ∈ P_{n,π}(l, d)`; equals the sum of all size-vector weights.
    pub fn pair_count(&self) -> BigUint {
        self.pairs(self.l, self.n)
    }

    /// Ordered part sizes drawn with probability proportional to their weight.
    pub fn sample_sizes<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut r = self.n;
        let mut sizes = Vec::with_capacity(self.l);
        for j in (1..=self.l).rev() {
            let a = pick(self.prefix_for(j, r), rng);
            sizes.push(a);
            r -= a;
        }
        debug_assert_eq!(r, 0);
        sizes
    }

    /// A uniform pair `(G, π)`.
    pub fn sample_partitioned<R: Rng + ?Sized>(&self, rng: &mut R) -> (Graph, Partition) {
        let sizes = self.sample_sizes(rng);
        let mut labels: Vec<usize> = (0..self.n).collect();
        labels.shuffle(rng);
        let mut assign = vec![0u32; self.n];
        let mut edges = Vec::new();
        let mut start = 0;
        for (p, &s) in sizes.iter().enumerate() {
            let members = &labels[start..start + s];
            for &v in members {
                assign[v] = p as u32;
            }
            for (a, b) in self.parts.sample_edges(s, rng) {
                edges.push((members[a], members[b]));
            }
            start += s;
        }
        for u in 0..self.n {
            for v in u + 1..self.n {
                if assign[u] != assign[v] && rng.gen::<bool>() {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_index_edges(self.n, edges);
        let pi = Partition::from_index(self.l, assign, PartitionMode::OrderedAny)
            .expect("ordered-any accepts every assignment");
        (g, pi)
    }

    /// A uniform member of `P_n(l, d)`: a pair `(G, π)` is kept with
    /// probability `1/D`, where `D` counts the ordered partitions of `G`
    /// admitting a decomposition.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> PldDraw {
        let mut attempts = 0;
        loop {
            attempts += 1;
            let (graph, partition) = self.sample_partitioned(rng);
            let accept = if self.l == 1 {
                true
            } else {
                let ways = count_decompositions(&graph, self.l, self.d, PartitionMode::OrderedAny);
                rng.gen_biguint_below(&ways).is_zero()
            };
            if accept {
                return PldDraw {
                    graph,
                    partition,
                    attempts,
                };
            }
        }
    }
}

pub fn sample_partitioned(n: usize, l: usize, d: usize, seed: &Seed) -> Result<(Graph, Partition)> {
    Ok(PldSampler::new(n, l, d)?.sample_partitioned(&mut seed.rng()))
}

pub fn sample_uniform_pld(n: usize, l: usize, d: usize, seed: &Seed) -> Result<Graph> {
    Ok(PldSampler::new(n, l, d)?.sample_uniform(&mut seed.rng()).graph)
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::decomp::{decomposition_from_partition, in_pld};

    #[test]
    fn product_formula_examples() {
        assert_eq!(partition_class_count(&[2, 2], 0).unwrap(), BigUint::from(16u32));
        assert_eq!(partition_class_count(&[2, 1], 1).unwrap(), BigUint::from(8u32));
        assert_eq!(partition_class_count(&[3, 3], 1).unwrap(), BigUint::from(8192u32));
        assert_eq!(partition_class_count(&[], 1).unwrap(), BigUint::one());
    }

    #[test]
    fn product_formula_matches_fixed_partition_enumeration() {
        for sizes in [vec![1, 2], vec![2, 2], vec![3, 2], vec![1, 1, 2], vec![2, 1, 1]] {
            let n: usize = sizes.iter().sum();
            let parts: Vec<usize> = sizes
                .iter()
                .enumerate()
                .flat_map(|(p, &s)| std::iter::repeat_n(p + 1, s))
                .collect();
            let pi = Partition::new(sizes.len(), parts, PartitionMode::OrderedAny).unwrap();
            for d in 0..=2 {
                let brute = (0..1u64 << (n * (n - 1) / 2))
                    .filter(|&c| decomposition_from_partition(&Graph::from_edge_code(n, c), &pi, d).is_ok())
                    .count();
                assert_eq!(partition_class_count(&sizes, d).unwrap(), BigUint::from(brute));
            }
        }
    }

    #[test]
    fn weights_sum_to_pair_count() {
        for (n, l, d) in [(5, 2, 1), (6, 3, 0), (4, 4, 2), (7, 1, 2)] {
            let total: BigUint = size_vector_weights(n, l, d).unwrap().into_iter().map(|w| w.weight).sum();
            assert_eq!(total, PldSampler::new(n, l, d).unwrap().pair_count());
        }
        let w = size_vector_weights(2, 2, 0).unwrap();
        let listed: Vec<(Vec<usize>, u32)> = w
            .iter()
            .map(|s| (s.sizes.clone(), u32::try_from(&s.weight).unwrap()))
            .collect();
        assert_eq!(listed, vec![(vec![0, 2], 1), (vec![1, 1], 4), (vec![2, 0], 1)]);
    }

    #[test]
    fn pairs_are_uniform_for_two_vertices() {
        let s = PldSampler::new(2, 2, 0).unwrap();
        assert_eq!(s.pair_count(), BigUint::from(6u32));
        let mut rng = Seed::new(4).rng();
        let mut freq: HashMap<(Vec<usize>, usize), usize> = HashMap::new();
        let draws = 60_000;
        for _ in 0..draws {
            let (g, pi) = s.sample_partitioned(&mut rng);
            assert!(decomposition_from_partition(&g, &pi, 0).is_ok());
            let parts: Vec<usize> = (1..=2).map(|v| pi.part_of(v)).collect();
            *freq.entry((parts, g.edge_count())).or_default() += 1;
        }
        assert_eq!(freq.len(), 6);
        for &c in freq.values() {
            assert!((c as f64 - 10_000.0).abs() < 500.0);
        }
    }

    #[test]
    fn single_part_is_bounded_degree_sampling() {
        let s = PldSampler::new(30, 1, 2).unwrap();
        let mut rng = Seed::new(8).rng();
        let draw = s.sample_uniform(&mut rng);
        assert_eq!(draw.attempts, 1);
        assert!(draw.graph.max_degree() <= 2);
        assert_eq!(draw.partition.part_sizes(), vec![30]);
    }

    #[test]
    fn rejection_output_stays_in_class() {
        let s = PldSampler::new(6, 2, 1).unwrap();
        let mut rng = Seed::new(2).rng();
        for _ in 0..200 {
            let draw = s.sample_uniform(&mut rng);
            assert!(in_pld(&draw.graph, 2, 1));
            assert!(decomposition_from_partition(&draw.graph, &draw.partition, 1).is_ok());
        }
    }

    #[test]
    fn caps_are_enforced() {
        assert!(PldSampler::new(10, 5, 1).is_err());
        assert!(PldSampler::new(601, 2, 1).is_err());
        assert!(PldSampler::new(10, 0, 1).is_err());
    }
}
