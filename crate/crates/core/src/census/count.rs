//! Exact counts and exact-uniform samples of labelled graphs with maximum
//! degree at most `d`.
//!
//! Two backends share one interface. For `d <= 2` every component is a
//! vertex, an edge, a path or a cycle, so counts follow the exponential
//! formula `a_n = sum_k C(n-1, k-1) c_k a_{n-k}` over the size `k` of the
//! component containing the smallest label. For larger `d` vertices are added
//! one at a time and the state is the census of residual capacities of the
//! vertices placed so far.

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_cap, invalid, Error, Result};
use crate::graph::Graph;

/// Limits on table construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusCaps {
    /// Largest order for the component backend (`d <= 2`).
    pub max_m_components: usize,
    /// Upper bound on residual-census states summed over all steps (`d >= 3`).
    pub max_states: usize,
    /// Largest order for partitioned sampling.
    pub max_n_partitioned: usize,
    /// Largest part count for partitioned sampling.
    pub max_l: usize,
}

impl Default for CensusCaps {
    fn default() -> Self {
        CensusCaps {
            max_m_components: 600,
            max_states: 1_000_000,
            max_n_partitioned: 600,
            max_l: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountBackend {
    /// Component recursion; `d <= 2` only.
    Components,
    /// Vertex-by-vertex residual-capacity census; any `d`.
    Residual,
}

/// Counts `|P_m(1, d)|` for `m <= max_m` and samples uniformly from each class.
/// Tables are built lazily and are safe to share between threads.
pub struct CountTable {
    d: usize,
    max_m: usize,
    backend: Backend,
}

enum Backend {
    Components(Components),
    Residual(Residual),
}

impl CountTable {
    /// Picks the component backend for `d <= 2` and the residual one otherwise.
    pub fn new(max_m: usize, d: usize) -> Result<CountTable> {
        CountTable::with_caps(max_m, d, CensusCaps::default())
    }

    pub fn with_caps(max_m: usize, d: usize, caps: CensusCaps) -> Result<CountTable> {
        let backend = if d <= 2 {
            CountBackend::Components
        } else {
            CountBackend::Residual
        };
        CountTable::with_backend(max_m, d, backend, caps)
    }

    pub fn with_backend(
        max_m: usize,
        d: usize,
        backend: CountBackend,
        caps: CensusCaps,
    ) -> Result<CountTable> {
        let backend = match backend {
            CountBackend::Components => {
                if d > 2 {
                    return Err(invalid("the component backend needs d <= 2"));
                }
                check_cap("bounded-degree order", max_m, caps.max_m_components)?;
                Backend::Components(Components::new(max_m, d))
            }
            CountBackend::Residual => {
                let states = composition_bound(max_m, d);
                check_cap("residual-census states", states, caps.max_states)?;
                Backend::Residual(Residual {
                    d,
                    tables: (0..=max_m).map(|_| OnceLock::new()).collect(),
                })
            }
        };
        Ok(CountTable { d, max_m, backend })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn max_m(&self) -> usize {
        self.max_m
    }

    fn check_m(&self, m: usize) -> Result<()> {
        if m > self.max_m {
            return Err(Error::CapExceeded {
                what: "order beyond the count table",
                value: m,
                cap: self.max_m,
            });
        }
        Ok(())
    }

    /// `|P_m(1, d)|`.
    pub fn count(&self, m: usize) -> Result<BigUint> {
        self.check_m(m)?;
        Ok(match &self.backend {
            Backend::Components(c) => c.a[m].clone(),
            Backend::Residual(r) => r.table(m).root().clone(),
        })
    }

    /// A uniform member of `P_m(1, d)`.
    pub fn sample<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> Result<Graph> {
        self.check_m(m)?;
        Ok(Graph::from_index_edges(m, self.sample_edges(m, rng)))
    }

    /// Edges (0-based) of a uniform member of `P_m(1, d)`.
    pub(crate) fn sample_edges<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> Vec<(usize, usize)> {
        match &self.backend {
            Backend::Components(c) => c.sample(m, self.d, rng),
            Backend::Residual(r) => r.sample(m, rng),
        }
    }
}

/// Uniform draw below the last prefix sum; returns the selected index.
pub(crate) fn pick<R: Rng + ?Sized>(prefix: &[BigUint], rng: &mut R) -> usize {
    let total = prefix.last().expect("nonempty weights");
    let r = rng.gen_biguint_below(total);
    prefix.partition_point(|p| p <= &r)
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

struct Components {
    a: Vec<BigUint>,
    connected: Vec<BigUint>,
    /// Labelled `k`-cycles, `(k-1)!/2`, for `k >= 3`.
    cycles: Vec<BigUint>,
    prefix: Vec<OnceLock<Vec<BigUint>>>,
}

impl Components {
    fn new(max_m: usize, d: usize) -> Components {
        let mut connected = vec![BigUint::zero(); max_m + 1];
        let mut cycles = vec![BigUint::zero(); max_m + 1];
        for k in 1..=max_m {
            connected[k] = match (d, k) {
                (_, 1) => BigUint::one(),
                (1.., 2) => BigUint::one(),
                (2, _) => {
                    let cyc = factorial(k - 1) / 2u32;
                    let paths = factorial(k) / 2u32;
                    cycles[k] = cyc.clone();
                    cyc + paths
                }
                _ => BigUint::zero(),
            };
        }
        let mut a = vec![BigUint::one()];
        for n in 1..=max_m {
            let total = Components::terms(&a, &connected, n).pop().unwrap();
            a.push(total);
        }
        Components {
            a,
            connected,
            cycles,
            prefix: (0..=max_m).map(|_| OnceLock::new()).collect(),
        }
    }

    /// Prefix sums over `k = 1..=n` of `C(n-1, k-1) c_k a_{n-k}`.
    fn terms(a: &[BigUint], connected: &[BigUint], n: usize) -> Vec<BigUint> {
        let mut out = Vec::with_capacity(n);
        let mut binom = BigUint::one();
        let mut acc = BigUint::zero();
        for k in 1..=n {
            if !connected[k].is_zero() {
                acc += &binom * &connected[k] * &a[n - k];
            }
            out.push(acc.clone());
            binom = binom * (n - k) / k;
        }
        out
    }

    fn sample<R: Rng + ?Sized>(&self, m: usize, d: usize, rng: &mut R) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        let mut rest: Vec<usize> = (0..m).collect();
        while !rest.is_empty() {
            let n = rest.len();
            let prefix = self.prefix[n].get_or_init(|| Components::terms(&self.a, &self.connected, n));
            let k = pick(prefix, rng) + 1;
            let mut comp = vec![rest[0]];
            let others: Vec<usize> = rand::seq::index::sample(rng, n - 1, k - 1)
                .into_iter()
                .map(|i| i + 1)
                .collect();
            comp.extend(others.iter().map(|&i| rest[i]));
            let mut drop = others;
            drop.push(0);
            drop.sort_unstable_by(|x, y| y.cmp(x));
            for i in drop {
                rest.remove(i);
            }
            match k {
                1 => {}
                2 => edges.push((comp[0], comp[1])),
                _ => {
                    debug_assert_eq!(d, 2);
                    let is_cycle = rng.gen_biguint_below(&self.connected[k]) < self.cycles[k];
                    comp.shuffle(rng);
                    for w in comp.windows(2) {
                        edges.push((w[0], w[1]));
                    }
                    if is_cycle {
                        edges.push((comp[k - 1], comp[0]));
                    }
                }
            }
        }
        edges
    }
}

/// Number of vectors `(c_0, …, c_d)` with sum `i`, summed over `i <= m`,
/// saturating.
fn composition_bound(m: usize, d: usize) -> usize {
    // C(m + d + 1, d + 1)
    let mut acc: u128 = 1;
    for j in 1..=(d as u128 + 1) {
        acc = acc.saturating_mul(m as u128 + j) / j;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

fn small_binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// A state lists how many placed vertices have residual capacity `1..=d`.
type State = Vec<u16>;

/// Back-edge profiles from `c`: `k[r-1]` edges into class `r`, at most `d`
/// in total, with their multiplicity and the resulting state.
fn profiles(c: &[u16], d: usize) -> Vec<(Vec<u16>, u128, State)> {
    fn rec(c: &[u16], d: usize, r: usize, left: usize, k: &mut Vec<u16>, out: &mut Vec<(Vec<u16>, u128, State)>) {
        if r > d {
            let mut next = c.to_vec();
            let mut weight = 1u128;
            let mut used = 0usize;
            for r in 1..=d {
                let kr = k[r - 1];
                weight *= small_binom(c[r - 1] as usize, kr as usize);
                used += kr as usize;
                next[r - 1] -= kr;
                if r >= 2 {
                    next[r - 2] += kr;
                }
            }
            if d - used >= 1 {
                next[d - used - 1] += 1;
            }
            out.push((k.clone(), weight, next));
            return;
        }
        for kr in 0..=left.min(c[r - 1] as usize) {
            k.push(kr as u16);
            rec(c, d, r + 1, left - kr, k, out);
            k.pop();
        }
    }
    let mut out = Vec::new();
    rec(c, d, 1, d, &mut Vec::with_capacity(d), &mut out);
    out
}

struct Residual {
    d: usize,
    tables: Vec<OnceLock<Completions>>,
}

/// `levels[i][c]`: ways to add vertices `i..m` starting from census `c`.
struct Completions {
    levels: Vec<HashMap<State, BigUint>>,
}

impl Completions {
    fn root(&self) -> &BigUint {
        self.levels[0].values().next().expect("single initial state")
    }
}

impl Residual {
    fn table(&self, m: usize) -> &Completions {
        self.tables[m].get_or_init(|| Residual::build(m, self.d))
    }

    fn build(m: usize, d: usize) -> Completions {
        let mut reach: Vec<Vec<State>> = vec![vec![vec![0; d]]];
        for i in 0..m {
            let mut next = BTreeSet::new();
            for c in &reach[i] {
                for (_, _, s) in profiles(c, d) {
                    next.insert(s);
                }
            }
            reach.push(next.into_iter().collect());
        }
        let mut levels: Vec<HashMap<State, BigUint>> = vec![HashMap::new(); m + 1];
        levels[m] = reach[m].iter().map(|c| (c.clone(), BigUint::one())).collect();
        for i in (0..m).rev() {
            let (head, tail) = levels.split_at_mut(i + 1);
            let after = &tail[0];
            for c in &reach[i] {
                let mut total = BigUint::zero();
                for (_, w, s) in profiles(c, d) {
                    if w > 0 {
                        total += &after[&s] * w;
                    }
                }
                head[i].insert(c.clone(), total);
            }
        }
        Completions { levels }
    }

    fn sample<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> Vec<(usize, usize)> {
        let d = self.d;
        let table = self.table(m);
        let mut classes: Vec<Vec<usize>> = vec![Vec::new(); d + 1];
        let mut state: State = vec![0; d];
        let mut edges = Vec::new();
        for i in 0..m {
            let options = profiles(&state, d);
            let prefix: Vec<BigUint> = options
                .iter()
                .scan(BigUint::zero(), |acc, (_, w, s)| {
                    if *w > 0 {
                        *acc += &table.levels[i + 1][s] * *w;
                    }
                    Some(acc.clone())
                })
                .collect();
            let (k, _, next) = &options[pick(&prefix, rng)];
            let mut moved: Vec<(usize, usize)> = Vec::new();
            for r in 1..=d {
                let kr = k[r - 1] as usize;
                if kr == 0 {
                    continue;
                }
                let class = &mut classes[r];
                let mut at: Vec<usize> = rand::seq::index::sample(rng, class.len(), kr).into_vec();
                at.sort_unstable_by(|x, y| y.cmp(x));
                for p in at {
                    moved.push((class.swap_remove(p), r - 1));
                }
            }
            let used: usize = k.iter().map(|&x| x as usize).sum();
            for (v, r) in moved {
                edges.push((v, i));
                classes[r].push(v);
            }
            classes[d - used].push(i);
            state = next.clone();
        }
        edges
    }
}

/// `|P_m(1, d)|`, the number of labelled graphs on `m` vertices with maximum
/// degree at most `d`.
pub fn count_bounded_degree(m: usize, d: usize) -> Result<BigUint> {
    CountTable::new(m, d)?.count(m)
}

/// A uniform member of `P_m(1, d)` drawn with the stream of `seed`.
pub fn sample_bounded_degree(m: usize, d: usize, seed: &super::Seed) -> Result<Graph> {
    CountTable::new(m, d)?.sample(m, &mut seed.rng())
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;
    use crate::census::Seed;

    fn brute(m: usize, d: usize) -> u64 {
        (0..1u64 << (m * m.saturating_sub(1) / 2))
            .filter(|&c| Graph::from_edge_code(m, c).max_degree() <= d)
            .count() as u64
    }

    #[test]
    fn small_values() {
        for m in 0..8 {
            assert_eq!(count_bounded_degree(m, 0).unwrap(), BigUint::one());
        }
        assert_eq!(count_bounded_degree(3, 1).unwrap(), BigUint::from(4u32));
        assert_eq!(count_bounded_degree(4, 1).unwrap(), BigUint::from(10u32));
        assert_eq!(count_bounded_degree(3, 2).unwrap(), BigUint::from(8u32));
    }

    #[test]
    fn backends_agree_with_enumeration() {
        for d in 0..=4 {
            let res = CountTable::with_backend(6, d, CountBackend::Residual, CensusCaps::default()).unwrap();
            for m in 0..=6 {
                let want = BigUint::from(brute(m, d));
                assert_eq!(res.count(m).unwrap(), want, "residual m={m} d={d}");
                if d <= 2 {
                    let comp = CountTable::new(6, d).unwrap();
                    assert_eq!(comp.count(m).unwrap(), want, "components m={m} d={d}");
                }
            }
        }
        // larger orders where enumeration is out of reach
        for d in 0..=2 {
            let comp = CountTable::new(40, d).unwrap();
            let res = CountTable::with_backend(40, d, CountBackend::Residual, CensusCaps::default()).unwrap();
            assert_eq!(comp.count(40).unwrap(), res.count(40).unwrap());
        }
    }

    #[test]
    fn caps_are_enforced() {
        assert!(matches!(CountTable::new(601, 2), Err(Error::CapExceeded { .. })));
        assert!(matches!(CountTable::new(400, 3), Err(Error::CapExceeded { .. })));
        let t = CountTable::new(5, 1).unwrap();
        assert!(t.count(6).is_err());
        assert!(CountTable::with_backend(5, 3, CountBackend::Components, CensusCaps::default()).is_err());
    }

    fn frequencies(t: &CountTable, m: usize, draws: usize, seed: u64) -> HashMap<u64, usize> {
        let mut rng = Seed::new(seed).rng();
        let mut freq = HashMap::new();
        for _ in 0..draws {
            let g = t.sample(m, &mut rng).unwrap();
            assert!(g.max_degree() <= t.d());
            *freq.entry(g.edge_code().unwrap()).or_insert(0) += 1;
        }
        freq
    }

    #[test]
    fn samplers_cover_the_class_evenly() {
        for (backend, d) in [
            (CountBackend::Components, 1),
            (CountBackend::Components, 2),
            (CountBackend::Residual, 2),
            (CountBackend::Residual, 3),
        ] {
            let t = CountTable::with_backend(5, d, backend, CensusCaps::default()).unwrap();
            let classes = brute(4, d) as usize;
            let draws = 2000 * classes;
            let freq = frequencies(&t, 4, draws, 11);
            assert_eq!(freq.len(), classes);
            let expect = draws as f64 / classes as f64;
            for &c in freq.values() {
                // 5 standard deviations
                assert!((c as f64 - expect).abs() < 5.0 * expect.sqrt(), "{backend:?} d={d}");
            }
        }
    }

    #[test]
    fn sampler_edge_cases() {
        assert_eq!(sample_bounded_degree(7, 0, &Seed::new(1)).unwrap().edge_count(), 0);
        assert_eq!(sample_bounded_degree(0, 2, &Seed::new(1)).unwrap().n(), 0);
        let freq = frequencies(&CountTable::new(2, 1).unwrap(), 2, 4000, 3);
        assert_eq!(freq.len(), 2);
        let g = sample_bounded_degree(300, 2, &Seed::new(9)).unwrap();
        assert!(g.max_degree() <= 2);
        assert_eq!(
            sample_bounded_degree(30, 2, &Seed::new(5)).unwrap(),
            sample_bounded_degree(30, 2, &Seed::new(5)).unwrap()
        );
    }
}
