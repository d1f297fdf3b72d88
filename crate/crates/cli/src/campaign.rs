use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{CampaignConfig, ExperimentKind};
use crate::error::{CliError, CliResult};
use pld_core::canon::canonical_form;
use pld_core::census::{enumerate_class, PldDraw, PldSampler, Seed};
use pld_core::decomp::{count_decompositions, decomposition_from_partition, in_pld, PartitionMode};
use pld_core::forbidden::{contains_multipartite, MultipartitePattern};
use pld_core::logic::{ef_equivalent, parse_sentence, xi_partition, CompiledFormula, XiParams};
use pld_core::poisson::{empirical_fit, Fit};
use pld_core::stats::{binomial_stderr, clopper_pearson};
use pld_core::Graph;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Per-part counts behind a `poisson-fit` estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonDetail {
    pub fit: Fit,
    /// Parts whose degree-(d-1) count lies in `[sqrt((d-eps) n'), sqrt((d+eps) n')]`.
    pub near_full_in_range: u64,
    pub parts: u64,
}

/// One grid point of a campaign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub experiment: String,
    pub n: usize,
    /// Graphs drawn, or class members enumerated in exact mode.
    pub replicas: usize,
    pub estimate: f64,
    pub stderr: Option<f64>,
    /// 95% Clopper–Pearson interval for sampled proportions.
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub exact: bool,
    pub seed: u64,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poisson: Option<PoissonDetail>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

enum Outcome {
    Hit(bool),
    Parts { q: Vec<u64>, in_range: Vec<bool> },
}

struct Experiment<'a> {
    cfg: &'a CampaignConfig,
    sentence: Option<CompiledFormula>,
    pattern: Option<MultipartitePattern>,
}

impl<'a> Experiment<'a> {
    fn new(cfg: &'a CampaignConfig) -> CliResult<Experiment<'a>> {
        cfg.validate()?;
        let sentence = match &cfg.sentence {
            Some(text) if cfg.experiment == ExperimentKind::SentenceProbability => {
                Some(CompiledFormula::new(&parse_sentence(text)?)?)
            }
            _ => None,
        };
        Ok(Experiment {
            cfg,
            sentence,
            pattern: cfg.pattern()?,
        })
    }

    fn xi_params(&self) -> CliResult<XiParams> {
        Ok(XiParams::new(self.cfg.l, self.cfg.d)?)
    }

    /// Predicate experiments on a single graph.
    fn holds(&self, g: &Graph) -> CliResult<bool> {
        let cfg = self.cfg;
        Ok(match cfg.experiment {
            ExperimentKind::UniqueDecomposition => {
                count_decompositions(g, cfg.l, cfg.d, PartitionMode::UnorderedNonempty) == 1u32.into()
            }
            ExperimentKind::SentenceProbability => self.sentence.as_ref().unwrap().eval(g, &[])?,
            ExperimentKind::ForbCensus => !contains_multipartite(g, self.pattern.as_ref().unwrap()),
            _ => unreachable!("not a single-graph predicate"),
        })
    }

    fn sampled(&self, sampler: &PldSampler, seed: &Seed) -> CliResult<Outcome> {
        let cfg = self.cfg;
        let draw = || sampler.sample_uniform(&mut seed.rng());
        Ok(match cfg.experiment {
            ExperimentKind::XiRecovery => {
                let PldDraw { graph, partition, .. } = draw();
                let recovered = xi_partition(&graph, self.xi_params()?).is_ok_and(|pi| pi.same_blocks(&partition));
                Outcome::Hit(recovered)
            }
            ExperimentKind::EfClasses => {
                let g = sampler.sample_uniform(&mut seed.child(0).rng()).graph;
                let h = sampler.sample_uniform(&mut seed.child(1).rng()).graph;
                Outcome::Hit(ef_equivalent(&g, &h, cfg.k)?)
            }
            ExperimentKind::PoissonFit => {
                let PldDraw { graph, partition, .. } = draw();
                let mut q = Vec::new();
                let mut in_range = Vec::new();
                let d = cfg.d as f64;
                for part in partition.parts().iter().filter(|p| !p.is_empty()) {
                    let (h, _) = graph.induced_subgraph(part)?;
                    let degrees: Vec<usize> = (1..=h.n()).map(|v| h.degree(v)).collect();
                    q.push(degrees.iter().filter(|&&x| x + 2 == cfg.d).count() as u64);
                    let near = degrees.iter().filter(|&&x| x + 1 == cfg.d).count() as f64;
                    let size = h.n() as f64;
                    in_range.push(near >= ((d - cfg.eps) * size).sqrt() && near <= ((d + cfg.eps) * size).sqrt());
                }
                Outcome::Parts { q, in_range }
            }
            _ => Outcome::Hit(self.holds(&draw().graph)?),
        })
    }

    /// Probability that a uniform pair `(G, π)` conditioned on `G` has `π`
    /// equal to the xi classes.
    fn xi_weight(&self, g: &Graph) -> CliResult<f64> {
        let cfg = self.cfg;
        let Ok(pi) = xi_partition(g, self.xi_params()?) else {
            return Ok(0.0);
        };
        if decomposition_from_partition(g, &pi, cfg.d).is_err() {
            return Ok(0.0);
        }
        let ways = count_decompositions(g, cfg.l, cfg.d, PartitionMode::OrderedAny);
        let orderings: f64 = (1..=cfg.l).map(|i| i as f64).product();
        Ok(orderings / ways.to_f64().unwrap())
    }

    fn exact_point(&self, n: usize) -> CliResult<(usize, f64)> {
        let cfg = self.cfg;
        let members: Vec<Graph> = enumerate_class(n, |g| in_pld(g, cfg.l, cfg.d))?.collect();
        let total = members.len();
        if total == 0 {
            return Err(CliError::Config(format!("P_{n}({}, {}) is empty", cfg.l, cfg.d)));
        }
        let mass: f64 = match cfg.experiment {
            ExperimentKind::XiRecovery => members
                .par_iter()
                .map(|g| self.xi_weight(g))
                .collect::<CliResult<Vec<f64>>>()?
                .iter()
                .sum(),
            ExperimentKind::EfClasses => self.equivalent_pairs(&members)? / total as f64,
            _ => members
                .par_iter()
                .map(|g| self.holds(g))
                .collect::<CliResult<Vec<bool>>>()?
                .iter()
                .filter(|&&b| b)
                .count() as f64,
        };
        Ok((total, mass / total as f64))
    }

    /// Ordered pairs of members that are `k`-equivalent.
    fn equivalent_pairs(&self, members: &[Graph]) -> CliResult<f64> {
        let mut iso: BTreeMap<_, (usize, &Graph)> = BTreeMap::new();
        for g in members {
            let cert = canonical_form(g, &vec![0; g.n()])?;
            iso.entry(cert).or_insert((0, g)).0 += 1;
        }
        let reps: Vec<(usize, &Graph)> = iso.into_values().collect();
        let mut class_of: Vec<usize> = (0..reps.len()).collect();
        for i in 0..reps.len() {
            if class_of[i] != i {
                continue;
            }
            let joined: Vec<usize> = (i + 1..reps.len())
                .into_par_iter()
                .filter(|&j| class_of[j] == j)
                .map(|j| ef_equivalent(reps[i].1, reps[j].1, self.cfg.k).map(|eq| eq.then_some(j)))
                .collect::<pld_core::Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
            for j in joined {
                class_of[j] = i;
            }
        }
        let mut sizes = vec![0usize; reps.len()];
        for (i, &(count, _)) in reps.iter().enumerate() {
            sizes[class_of[i]] += count;
        }
        Ok(sizes.iter().map(|&s| (s * s) as f64).sum())
    }

    fn point(&self, n: usize) -> CliResult<ResultRecord> {
        let cfg = self.cfg;
        let start = Instant::now();
        let mut record = ResultRecord {
            experiment: cfg.experiment.id().to_string(),
            n,
            replicas: cfg.replicas,
            estimate: 0.0,
            stderr: None,
            ci_low: None,
            ci_high: None,
            exact: cfg.exact,
            seed: cfg.seed,
            version: VERSION.to_string(),
            poisson: None,
            wall_time_ms: None,
        };
        if cfg.exact {
            let (total, estimate) = self.exact_point(n)?;
            record.replicas = total;
            record.estimate = estimate;
            record.stderr = Some(0.0);
        } else {
            let sampler = PldSampler::new(n, cfg.l, cfg.d)?;
            let base = Seed::new(cfg.seed).child(n as u64);
            let outcomes = (0..cfg.replicas as u64)
                .into_par_iter()
                .map(|r| self.sampled(&sampler, &base.child(r)))
                .collect::<CliResult<Vec<Outcome>>>()?;
            self.summarise(&outcomes, &mut record)?;
        }
        if cfg.record_timing {
            record.wall_time_ms = Some(start.elapsed().as_millis() as u64);
        }
        Ok(record)
    }

    fn summarise(&self, outcomes: &[Outcome], record: &mut ResultRecord) -> CliResult<()> {
        if self.cfg.experiment.is_proportion() {
            let hits = outcomes.iter().filter(|o| matches!(o, Outcome::Hit(true))).count() as u64;
            let trials = outcomes.len() as u64;
            let (lo, hi) = clopper_pearson(hits, trials, 0.05);
            record.estimate = hits as f64 / trials as f64;
            record.stderr = Some(binomial_stderr(hits, trials));
            record.ci_low = Some(lo);
            record.ci_high = Some(hi);
            return Ok(());
        }
        let mut q = Vec::new();
        let mut in_range = 0u64;
        let mut parts = 0u64;
        for o in outcomes {
            if let Outcome::Parts { q: counts, in_range: ok } = o {
                q.extend(counts);
                in_range += ok.iter().filter(|&&b| b).count() as u64;
                parts += ok.len() as u64;
            }
        }
        let fit = empirical_fit(&q, self.cfg.d.saturating_sub(1) as f64)?;
        record.estimate = fit.tv;
        record.poisson = Some(PoissonDetail {
            fit,
            near_full_in_range: in_range,
            parts,
        });
        Ok(())
    }
}

/// Runs every grid point in order, handing each record to `sink` as soon as
/// it is complete; records already handed over survive a later error.
pub fn run_campaign_with<F>(cfg: &CampaignConfig, mut sink: F) -> CliResult<()>
where
    F: FnMut(&ResultRecord) -> CliResult<()>,
{
    let experiment = Experiment::new(cfg)?;
    let pool = match cfg.threads {
        Some(t) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Config(e.to_string()))?,
        ),
        None => None,
    };
    for &n in &cfg.n_grid {
        let record = match &pool {
            Some(pool) => pool.install(|| experiment.point(n))?,
            None => experiment.point(n)?,
        };
        sink(&record)?;
    }
    Ok(())
}

pub fn run_campaign(cfg: &CampaignConfig) -> CliResult<Vec<ResultRecord>> {
    let mut out = Vec::new();
    run_campaign_with(cfg, |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(kind: ExperimentKind, grid: Vec<usize>, replicas: usize) -> CampaignConfig {
        CampaignConfig::new(kind, grid, replicas, 17)
    }

    #[test]
    fn exact_sentence_probability_matches_enumeration() {
        let text = "exists x. forall y. (E(x,y) | x = y)";
        let mut c = cfg(ExperimentKind::SentenceProbability, vec![4], 1);
        c.sentence = Some(text.into());
        c.exact = true;
        let rec = &run_campaign(&c).unwrap()[0];
        let phi = parse_sentence(text).unwrap();
        let members: Vec<Graph> = enumerate_class(4, |g| in_pld(g, 2, 1)).unwrap().collect();
        let hits = members.iter().filter(|g| pld_core::logic::holds(g, &phi).unwrap()).count();
        assert_eq!(rec.replicas, members.len());
        assert_eq!(rec.estimate, hits as f64 / members.len() as f64);
    }

    #[test]
    fn sampling_is_deterministic_across_thread_counts() {
        let mut c = cfg(ExperimentKind::UniqueDecomposition, vec![6, 9], 40);
        c.threads = Some(1);
        let one = run_campaign(&c).unwrap();
        c.threads = Some(3);
        assert_eq!(one, run_campaign(&c).unwrap());
        assert!(one.iter().all(|r| r.wall_time_ms.is_none()));
    }

    #[test]
    fn exact_and_sampled_agree_at_small_n() {
        let kinds = [
            ExperimentKind::XiRecovery,
            ExperimentKind::UniqueDecomposition,
            ExperimentKind::EfClasses,
            ExperimentKind::ForbCensus,
        ];
        for kind in kinds {
            let mut c = cfg(kind, vec![4, 5], 400);
            c.k = 2;
            c.pattern = Some(vec![1, 1]);
            let sampled = run_campaign(&c).unwrap();
            c.exact = true;
            let exact = run_campaign(&c).unwrap();
            for (s, e) in sampled.iter().zip(&exact) {
                let se = s.stderr.unwrap().max(1e-3);
                assert!((s.estimate - e.estimate).abs() <= 3.0 * se, "{kind:?} {s:?} {e:?}");
            }
        }
    }

    #[test]
    fn poisson_fit_records_details() {
        let mut c = cfg(ExperimentKind::PoissonFit, vec![30], 50);
        c.l = 1;
        c.d = 2;
        let rec = &run_campaign(&c).unwrap()[0];
        let detail = rec.poisson.as_ref().unwrap();
        assert_eq!(detail.parts, 50);
        assert_eq!(detail.fit.samples, 50);
        assert_eq!(rec.estimate, detail.fit.tv);
        assert!(rec.stderr.is_none());
    }

    #[test]
    fn partial_results_are_flushed() {
        // the second grid point exceeds the order cap of the EF game
        let mut c = cfg(ExperimentKind::EfClasses, vec![3, 40], 2);
        c.k = 3;
        c.l = 1;
        c.d = 20;
        let mut seen = Vec::new();
        let err = run_campaign_with(&c, |r| {
            seen.push(r.n);
            Ok(())
        })
        .unwrap_err();
        assert_eq!(seen, vec![3]);
        assert_eq!(err.exit_code(), 3);
    }
}
