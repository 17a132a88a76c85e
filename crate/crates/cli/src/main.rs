use std::path::PathBuf;
use std::process::ExitCode;

use aiprod_cli::config::{parse_json, ConfigError, ExperimentConfig, GridDef, Grids};
use aiprod_cli::verbs::{self, BadKind, Figure, Outcome};
use aiprod_cli::WORKERS_ENV;
use clap::{Args, Parser, Subcommand};

/// Effort, skill dynamics, unreliability and literacy experiments.
///
/// Settings come from built-in defaults, then `--config`, then flags; later
/// sources replace whole sections (or single grids).
#[derive(Debug, Parser)]
#[command(name = "aiprod", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON experiment config.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory [default: out].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for stochastic verbs.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Production spec as JSON, e.g. '{"family":"fractional"}'.
    #[arg(long, global = true)]
    production: Option<String>,
    /// Cost as JSON, e.g. '{"kind":"linear","gamma":0.5}'.
    #[arg(long, global = true)]
    cost: Option<String>,
    /// Skill chain as JSON.
    #[arg(long, global = true)]
    chain: Option<String>,
    /// Reliability as JSON, e.g. '{"a_bar":0.5,"q":0.75}'.
    #[arg(long, global = true)]
    reliability: Option<String>,
    /// Literacy model as JSON.
    #[arg(long, global = true)]
    literacy: Option<String>,
    /// Assistance grid, `lo:hi:n` or a comma list.
    #[arg(long, global = true, value_parser = GridDef::parse)]
    a_grid: Option<GridDef>,
    /// Skill grid.
    #[arg(long, global = true, value_parser = GridDef::parse)]
    s_grid: Option<GridDef>,
    /// Reliability grid.
    #[arg(long, global = true, value_parser = GridDef::parse)]
    q_grid: Option<GridDef>,
    /// Decay-rate grid.
    #[arg(long, global = true, value_parser = GridDef::parse)]
    mu_grid: Option<GridDef>,
    /// Add brute-force reference columns.
    #[arg(long, global = true)]
    oracle: bool,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Steady-state sweep over assistance, or the static effort table
    /// when no chain is given.
    Sweep,
    /// Stationary distribution and per-state outcomes at each `a`.
    SteadyState,
    /// Absolute risk aversion class of the production function.
    ClassifyAra,
    /// Sensitivity gaps, decline regions and unreliability curve shape.
    CheckParadox,
    /// Adversarial instance with productivity ratio at most `eps`.
    ConstructBad {
        #[arg(long, value_enum)]
        kind: BadKind,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Bayesian effort profile over skill, with posteriors.
    LiteracyScan {
        #[arg(long)]
        a_bar: Option<f64>,
    },
    /// Simulated against product-form stationary distributions.
    McValidate {
        #[arg(long, default_value_t = 1_000_000)]
        horizon: u64,
        #[arg(long, default_value_t = 5)]
        replicas: u64,
    },
    /// Figure data for one of the fixed experiment matrices.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
    },
    /// Acceptance criteria as a JSON report; exit code 1 on any failure.
    Report {
        /// Criterion id; repeat to select several (default: all).
        #[arg(long = "check")]
        checks: Vec<String>,
    },
}

fn section<T: serde::de::DeserializeOwned>(
    text: &Option<String>,
    flag: &str,
) -> Result<Option<T>, ConfigError> {
    text.as_deref().map(|t| parse_json(t, flag)).transpose()
}

fn overrides(c: &Common) -> Result<ExperimentConfig, ConfigError> {
    Ok(ExperimentConfig {
        production: section(&c.production, "--production")?,
        cost: section(&c.cost, "--cost")?,
        chain: section(&c.chain, "--chain")?,
        reliability: section(&c.reliability, "--reliability")?,
        literacy: section(&c.literacy, "--literacy")?,
        grids: Grids {
            a: c.a_grid.clone(),
            s: c.s_grid.clone(),
            q: c.q_grid.clone(),
            mu: c.mu_grid.clone(),
        },
        oracle: c.oracle,
        output_dir: c.out.clone(),
        seed: c.seed,
    })
}

fn init_workers() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v.parse().ok().filter(|n| *n > 0).ok_or_else(|| {
            anyhow::anyhow!("{WORKERS_ENV} must be a positive integer, got `{v}`")
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    init_workers()?;
    let base = match &cli.common.config {
        Some(p) => ExperimentConfig::from_file(p)?,
        None => ExperimentConfig::default(),
    };
    let cfg = base.merge(overrides(&cli.common)?);
    cfg.validate()?;
    match cli.verb {
        Verb::Sweep => verbs::sweep_verb(&cfg),
        Verb::SteadyState => verbs::steady_state_verb(&cfg),
        Verb::ClassifyAra => verbs::classify_ara_verb(&cfg),
        Verb::CheckParadox => verbs::check_paradox_verb(&cfg),
        Verb::ConstructBad { kind, eps } => verbs::construct_bad_verb(&cfg, kind, eps),
        Verb::LiteracyScan { a_bar } => verbs::literacy_scan_verb(&cfg, a_bar),
        Verb::McValidate { horizon, replicas } => verbs::mc_validate_verb(&cfg, horizon, replicas),
        Verb::Reproduce { figure } => verbs::reproduce_verb(&cfg, figure),
        Verb::Report { checks } => verbs::report_verb(&cfg, &checks),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            for m in &out.messages {
                println!("{m}");
            }
            for f in &out.files {
                println!("{}", f.display());
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
