use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{config_error, CliResult};
use pld_core::census::MAX_ENUMERATION_ORDER;
use pld_core::forbidden::MultipartitePattern;
use pld_core::logic::parse_sentence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// The xi classes form the partition the sample was built from.
    XiRecovery,
    /// Exactly one unordered decomposition.
    UniqueDecomposition,
    /// Per-part counts of degree-(d-2) vertices against `Poisson(d - 1)`.
    PoissonFit,
    /// The sentence holds.
    SentenceProbability,
    /// Two independent samples are `k`-equivalent.
    EfClasses,
    /// The sample contains no `K_{1,s_1,...,s_l}` for the configured pattern.
    ForbCensus,
}

impl ExperimentKind {
    pub fn id(self) -> &'static str {
        match self {
            ExperimentKind::XiRecovery => "xi-recovery",
            ExperimentKind::UniqueDecomposition => "unique-decomposition",
            ExperimentKind::PoissonFit => "poisson-fit",
            ExperimentKind::SentenceProbability => "sentence-probability",
            ExperimentKind::EfClasses => "ef-classes",
            ExperimentKind::ForbCensus => "forb-census",
        }
    }

    /// Whether the estimate is a proportion.
    pub fn is_proportion(self) -> bool {
        self != ExperimentKind::PoissonFit
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

fn default_l() -> usize {
    2
}

fn default_d() -> usize {
    1
}

fn default_k() -> usize {
    1
}

fn default_eps() -> f64 {
    1.0
}

fn default_mu() -> f64 {
    0.1
}

/// One experiment over a grid of graph orders.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_l")]
    pub l: usize,
    #[serde(default = "default_d")]
    pub d: usize,
    /// Rounds for `ef-classes`.
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_mu")]
    pub mu: f64,
    pub n_grid: Vec<usize>,
    pub replicas: usize,
    pub seed: u64,
    #[serde(default)]
    pub sentence: Option<String>,
    /// Class sizes `s_1, ..., s_l` for `forb-census`.
    #[serde(default)]
    pub pattern: Option<Vec<usize>>,
    /// Enumerate every graph instead of sampling (orders up to 8).
    #[serde(default)]
    pub exact: bool,
    /// Worker threads; all cores when absent.
    #[serde(default)]
    pub threads: Option<usize>,
    /// Record wall time per grid point. Timed output is not reproducible.
    #[serde(default)]
    pub record_timing: bool,
    #[serde(default)]
    pub output: OutputPaths,
}

impl CampaignConfig {
    pub fn new(experiment: ExperimentKind, n_grid: Vec<usize>, replicas: usize, seed: u64) -> CampaignConfig {
        CampaignConfig {
            experiment,
            l: default_l(),
            d: default_d(),
            k: default_k(),
            eps: default_eps(),
            mu: default_mu(),
            n_grid,
            replicas,
            seed,
            sentence: None,
            pattern: None,
            exact: false,
            threads: None,
            record_timing: false,
            output: OutputPaths::default(),
        }
    }

    pub fn from_json(text: &str) -> CliResult<CampaignConfig> {
        let cfg: CampaignConfig = serde_json::from_str(text).map_err(|e| config_error(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<CampaignConfig> {
        CampaignConfig::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn pattern(&self) -> CliResult<Option<MultipartitePattern>> {
        self.pattern
            .clone()
            .map(|s| MultipartitePattern::new(s).map_err(|e| config_error(e.to_string())))
            .transpose()
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.n_grid.is_empty() {
            return Err(config_error("n_grid is empty"));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(config_error("n_grid must be strictly increasing"));
        }
        if self.n_grid[0] == 0 {
            return Err(config_error("graph orders must be positive"));
        }
        if self.replicas == 0 {
            return Err(config_error("replicas must be at least 1"));
        }
        if self.l == 0 {
            return Err(config_error("l must be at least 1"));
        }
        if self.threads == Some(0) {
            return Err(config_error("threads must be at least 1"));
        }
        if self.exact {
            let max = *self.n_grid.last().unwrap();
            if max > MAX_ENUMERATION_ORDER {
                return Err(config_error(format!(
                    "exact mode enumerates graphs and needs n <= {MAX_ENUMERATION_ORDER}, got {max}"
                )));
            }
        }
        match self.experiment {
            ExperimentKind::SentenceProbability => {
                let text = self
                    .sentence
                    .as_deref()
                    .ok_or_else(|| config_error("sentence-probability needs a sentence"))?;
                parse_sentence(text).map_err(|e| config_error(format!("sentence: {e}")))?;
            }
            ExperimentKind::ForbCensus => {
                if self.pattern()?.is_none() {
                    return Err(config_error("forb-census needs a pattern"));
                }
            }
            ExperimentKind::EfClasses => {
                if self.k > 3 {
                    return Err(config_error("ef-classes supports k <= 3"));
                }
                if self.exact && *self.n_grid.last().unwrap() > 6 {
                    return Err(config_error("exact ef-classes supports n <= 6"));
                }
            }
            ExperimentKind::PoissonFit => {
                if self.exact {
                    return Err(config_error("poisson-fit has no exact mode"));
                }
                if !(self.eps > 0.0 && self.eps < self.d as f64) {
                    return Err(config_error(format!("eps = {} must lie in (0, d)", self.eps)));
                }
            }
            ExperimentKind::XiRecovery | ExperimentKind::UniqueDecomposition => {}
        }
        if !(self.mu > 0.0) {
            return Err(config_error(format!("mu = {} must be positive", self.mu)));
        }
        Ok(())
    }
}
