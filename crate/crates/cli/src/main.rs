use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pld_experiments::report::RecordCsv;
use pld_experiments::{
    convergence_report, format_report, run_campaign_with, CampaignConfig, CliError, CliResult, ExperimentKind,
};
use pld_core::census::{count_bounded_degree, enumerate_class, partition_class_count, PldSampler, Seed};
use pld_core::decomp::{count_decompositions, in_pld, PartitionMode};
use pld_core::forbidden::{
    brute_inclusion_check, contains_multipartite, enumerate_forb, inclusion_criterion, verify_cycle_lemma,
    MultipartitePattern,
};
use pld_core::io::{parse_graph, write_graph, GraphFile};
use pld_core::logic::{ef_equivalent, holds, parse_sentence, xi_partition, XiParams};
use pld_core::poisson::{pk_membership, poisson_mass, signature, DegreeCountBase, PkOptions, PoissonParams};

#[derive(Parser)]
#[command(name = "pld", version, about = "Graphs with bounded own-part degree: counting, sampling, logic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Class {
    /// Number of parts
    #[arg(long, default_value_t = 1)]
    l: usize,
    /// Own-part degree bound
    #[arg(long, default_value_t = 2)]
    d: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Count P_n(1, d), a fixed-partition class, or P_n(l, d) by enumeration
    Count {
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        class: Class,
        /// Part sizes of a fixed partition, comma separated
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Count P_n(l, d) by enumerating all graphs (n <= 8)
        #[arg(long)]
        exact: bool,
    },
    /// Draw a uniform member of P_n(l, d) and print it in graph file format
    Sample {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        class: Class,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate P_n(l, d) (n <= 8), optionally filtered
    Enumerate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        class: Class,
        /// Keep graphs satisfying this sentence
        #[arg(long)]
        sentence: Option<String>,
        /// Keep graphs without K_{1,s_1,...,s_l} for these sizes (ignores --l and --d)
        #[arg(long, value_delimiter = ',')]
        forbid: Option<Vec<usize>>,
        /// Print edge codes instead of the count
        #[arg(long)]
        list: bool,
    },
    /// Recover the partition defined by xi from a graph file
    Xi {
        input: PathBuf,
        #[command(flatten)]
        class: Class,
    },
    /// Decide k-round Ehrenfeucht–Fraïssé equivalence of two graph files
    Ef {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Small-object signature and P^k membership of a graph file
    Poisson {
        input: PathBuf,
        #[command(flatten)]
        class: Class,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        eps: f64,
        #[arg(long, default_value_t = 0.1)]
        mu: f64,
        /// Use the whole graph's order in the degree-(d-1) count bound
        #[arg(long)]
        whole_graph_n: bool,
        /// JSON file with Poisson means, to report the signature's mass
        #[arg(long)]
        means: Option<PathBuf>,
    },
    /// Check a pattern K_{1,s_1,...,s_l}: lemma, inclusion criterion, containment
    Forbid {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Also test whether this graph file contains the pattern
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run an experiment campaign from a JSON config and/or flags
    Campaign(CampaignArgs),
}

#[derive(Args)]
struct CampaignArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    experiment: Option<ExperimentArg>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    /// Graph orders, comma separated
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    sentence: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pattern: Option<Vec<usize>>,
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// CSV of records; the full records go next to it as JSON
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ExperimentArg {
    XiRecovery,
    UniqueDecomposition,
    PoissonFit,
    SentenceProbability,
    EfClasses,
    ForbCensus,
}

impl From<ExperimentArg> for ExperimentKind {
    fn from(e: ExperimentArg) -> Self {
        match e {
            ExperimentArg::XiRecovery => ExperimentKind::XiRecovery,
            ExperimentArg::UniqueDecomposition => ExperimentKind::UniqueDecomposition,
            ExperimentArg::PoissonFit => ExperimentKind::PoissonFit,
            ExperimentArg::SentenceProbability => ExperimentKind::SentenceProbability,
            ExperimentArg::EfClasses => ExperimentKind::EfClasses,
            ExperimentArg::ForbCensus => ExperimentKind::ForbCensus,
        }
    }
}

fn read_graph(path: &Path) -> CliResult<GraphFile> {
    Ok(parse_graph(&fs::read_to_string(path)?)?)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn print_json(v: &Value) -> CliResult<()> {
    emit(None, &(serde_json::to_string_pretty(v)? + "\n"))
}

fn campaign_config(a: CampaignArgs) -> CliResult<(CampaignConfig, Option<PathBuf>)> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?
        }
        None => {
            let missing = |what: &str| CliError::Config(format!("--{what} is required without --config"));
            CampaignConfig::new(
                a.experiment.ok_or_else(|| missing("experiment"))?.into(),
                a.n.clone().ok_or_else(|| missing("n"))?,
                a.replicas.ok_or_else(|| missing("replicas"))?,
                a.seed.unwrap_or(0),
            )
        }
    };
    if let Some(e) = a.experiment {
        cfg.experiment = e.into();
    }
    macro_rules! take {
        ($($field:ident),*) => { $(if let Some(v) = a.$field { cfg.$field = v; })* };
    }
    take!(l, d, k, eps, mu, replicas, seed);
    if let Some(n) = a.n {
        cfg.n_grid = n;
    }
    if a.sentence.is_some() {
        cfg.sentence = a.sentence;
    }
    if a.pattern.is_some() {
        cfg.pattern = a.pattern;
    }
    if a.threads.is_some() {
        cfg.threads = a.threads;
    }
    cfg.exact |= a.exact;
    let out = a.out.or_else(|| cfg.output.csv.clone());
    cfg.validate()?;
    Ok((cfg, out))
}

fn run_campaign_command(a: CampaignArgs) -> CliResult<()> {
    let (cfg, csv_path) = campaign_config(a)?;
    let mut records = Vec::new();
    let mut csv = match &csv_path {
        Some(p) => Some(RecordCsv::new(fs::File::create(p)?)),
        None => None,
    };
    let result = run_campaign_with(&cfg, |r| {
        if let Some(w) = csv.as_mut() {
            w.push(r)?;
        }
        records.push(r.clone());
        Ok(())
    });
    let json_path = cfg
        .output
        .json
        .clone()
        .or_else(|| csv_path.as_ref().map(|p| p.with_extension("json")));
    if let Some(p) = json_path {
        fs::write(p, serde_json::to_string_pretty(&records)? + "\n")?;
    }
    let rows = convergence_report(&records)?;
    let table = format_report(&rows);
    if let Some(p) = &cfg.output.report {
        let mut buf = Vec::new();
        pld_experiments::report::write_csv(&rows, &mut buf)?;
        fs::write(p, buf)?;
    }
    print!("{table}");
    result
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Count { n, class, sizes, exact } => {
            let count = match (sizes, n) {
                (Some(sizes), _) => partition_class_count(&sizes, class.d)?.to_string(),
                (None, Some(n)) if exact => enumerate_class(n, |g| in_pld(g, class.l, class.d))?
                    .count()
                    .to_string(),
                (None, Some(n)) if class.l == 1 => count_bounded_degree(n, class.d)?.to_string(),
                (None, Some(_)) => {
                    return Err(CliError::Config("counting P_n(l, d) for l > 1 needs --exact".into()))
                }
                (None, None) => return Err(CliError::Config("give --n or --sizes".into())),
            };
            println!("{count}");
        }
        Command::Sample { n, class, seed, out } => {
            let draw = PldSampler::new(n, class.l, class.d)?.sample_uniform(&mut Seed::new(seed).rng());
            let text = format!(
                "# uniform member of P_{n}({}, {}), seed {seed}\n{}",
                class.l,
                class.d,
                write_graph(&draw.graph, Some(&draw.partition))
            );
            emit(out.as_deref(), &text)?;
        }
        Command::Enumerate { n, class, sentence, forbid, list } => {
            let phi = sentence.as_deref().map(parse_sentence).transpose()?;
            let pattern = forbid.map(MultipartitePattern::new).transpose()?;
            let graphs: Vec<_> = match &pattern {
                Some(p) => enumerate_forb(n, p)?.collect(),
                None => enumerate_class(n, |g| in_pld(g, class.l, class.d))?.collect(),
            };
            let mut kept = Vec::new();
            for g in graphs {
                if phi.as_ref().map_or(Ok(true), |f| holds(&g, f))? {
                    kept.push(g);
                }
            }
            if list {
                for g in &kept {
                    println!("{}", g.edge_code().expect("small graphs have edge codes"));
                }
            } else {
                println!("{}", kept.len());
            }
        }
        Command::Xi { input, class } => {
            let file = read_graph(&input)?;
            let value = match xi_partition(&file.graph, XiParams::new(class.l, class.d)?) {
                Ok(pi) => {
                    let parts: Vec<Vec<usize>> = pi.parts().iter().map(|p| p.members().to_vec()).collect();
                    let ways = count_decompositions(&file.graph, class.l, class.d, PartitionMode::UnorderedNonempty);
                    json!({ "ok": true, "parts": parts, "unordered_decompositions": ways.to_string() })
                }
                Err(failure) => json!({ "ok": false, "failure": failure }),
            };
            print_json(&value)?;
        }
        Command::Ef { left, right, k } => {
            let g = read_graph(&left)?.graph;
            let h = read_graph(&right)?.graph;
            print_json(&json!({ "k": k, "equivalent": ef_equivalent(&g, &h, k)? }))?;
        }
        Command::Poisson { input, class, k, eps, mu, whole_graph_n, means } => {
            let g = read_graph(&input)?.graph;
            let mut options = PkOptions::new(eps, mu);
            if whole_graph_n {
                options.base = DegreeCountBase::WholeGraph;
            }
            let report = pk_membership(&g, class.l, class.d, k, options)?;
            let mut value = json!({ "member": report.member(), "report": report });
            match signature(&g, class.l, class.d, k) {
                Ok(sig) => {
                    value["signature"] = serde_json::from_str(&sig.to_canonical_json())?;
                    if let Some(path) = means {
                        let params: PoissonParams = serde_json::from_str(&fs::read_to_string(path)?)?;
                        let params = PoissonParams::new(params.d(), params.lambda().to_vec(), params.mu().to_vec())?;
                        value["mass"] = json!(poisson_mass(&sig, &params)?);
                    }
                }
                Err(failure) => value["signature_failure"] = json!(failure.to_string()),
            }
            print_json(&value)?;
        }
        Command::Forbid { sizes, input } => {
            let pattern = MultipartitePattern::new(sizes.clone())?;
            let l = pattern.l();
            let mut value = json!({
                "pattern": pattern.to_string(),
                "cycle_lemma": verify_cycle_lemma(l, &sizes)?,
                "inclusion_criterion": inclusion_criterion(l, &sizes)?,
                "brute_inclusion": brute_inclusion_check(l, &sizes)?,
            });
            if let Some(path) = input {
                value["contains"] = json!(contains_multipartite(&read_graph(&path)?.graph, &pattern));
            }
            print_json(&value)?;
        }
        Command::Campaign(args) => run_campaign_command(args)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
