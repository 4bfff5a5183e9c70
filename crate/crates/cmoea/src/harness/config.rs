//! Run and batch configuration: algorithm variants, validation rules, and
//! the plain-text `key = value` config-file format.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::agent::{AgentConfig, DispersionMode};
use crate::error::{Error, Result};
use crate::operators::{PortfolioAction, OP_DE_BEST, OP_DE_RAND, OP_SBX};
use crate::problems::builtin;

/// Which policy drives the operator portfolio.
#[derive(Debug, Clone, PartialEq)]
pub enum Variant {
    /// The learned agent recommends the portfolio each generation.
    Aop,
    /// SBX pipeline only.
    GaOnly,
    /// DE/rand/1 only.
    DeRandOnly,
    /// DE/best/1 only.
    DeBestOnly,
    /// A constant portfolio, never adapted.
    FixedPortfolio([f64; 3]),
}

impl Variant {
    /// Parses `aop`, `ga-only`, `de-rand-only`, `de-best-only`, or
    /// `fixed-portfolio:p1,p2,p3`.
    pub fn parse(s: &str) -> Result<Variant> {
        match s {
            "aop" => Ok(Variant::Aop),
            "ga-only" => Ok(Variant::GaOnly),
            "de-rand-only" => Ok(Variant::DeRandOnly),
            "de-best-only" => Ok(Variant::DeBestOnly),
            other => {
                if let Some(suffix) = other.strip_prefix("fixed-portfolio:") {
                    let parts: Vec<&str> = suffix.split(',').collect();
                    if parts.len() != 3 {
                        return Err(Error::Config(format!(
                            "fixed-portfolio needs three comma-separated proportions, got `{suffix}`"
                        )));
                    }
                    let mut p = [0.0; 3];
                    for (slot, part) in p.iter_mut().zip(&parts) {
                        *slot = part.trim().parse().map_err(|_| {
                            Error::Config(format!("bad proportion `{part}` in `{other}`"))
                        })?;
                    }
                    PortfolioAction::new(p)
                        .map_err(|e| Error::Config(format!("invalid fixed portfolio: {e}")))?;
                    Ok(Variant::FixedPortfolio(p))
                } else {
                    Err(Error::Config(format!(
                        "unknown variant `{other}`; expected aop, ga-only, de-rand-only, \
                         de-best-only, or fixed-portfolio:p1,p2,p3"
                    )))
                }
            }
        }
    }

    /// Stable label used in file names, tables, and result keys.
    pub fn label(&self) -> String {
        match self {
            Variant::Aop => "aop".into(),
            Variant::GaOnly => "ga-only".into(),
            Variant::DeRandOnly => "de-rand-only".into(),
            Variant::DeBestOnly => "de-best-only".into(),
            Variant::FixedPortfolio(p) => {
                format!("fixed-{:.2}-{:.2}-{:.2}", p[0], p[1], p[2])
            }
        }
    }

    /// The pinned action for variants that bypass the agent.
    pub fn fixed_action(&self) -> Option<PortfolioAction> {
        match self {
            Variant::Aop => None,
            Variant::GaOnly => Some(PortfolioAction::vertex(OP_SBX)),
            Variant::DeRandOnly => Some(PortfolioAction::vertex(OP_DE_RAND)),
            Variant::DeBestOnly => Some(PortfolioAction::vertex(OP_DE_BEST)),
            Variant::FixedPortfolio(p) => {
                Some(PortfolioAction::new(*p).expect("validated at parse time"))
            }
        }
    }
}

/// Everything one run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: String,
    pub variant: Variant,
    /// Population size N per population; even, >= 4.
    pub pop_size: usize,
    /// Evaluation budget; >= 2N.
    pub fe_max: u64,
    /// Per-run seed index.
    pub seed: u64,
    /// Shared component of the RNG derivation, so one batch-wide choice
    /// shifts every stream together.
    pub global_seed: u64,
    pub agent: AgentConfig,
    pub dispersion: DispersionMode,
    /// Reference-front size for IGD and the HV box.
    pub front_size: usize,
    /// Directory holding front caches.
    pub fronts_dir: PathBuf,
    /// Where the driver writes trace/summary files; `None` keeps results
    /// in memory only.
    pub out_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(problem: impl Into<String>, variant: Variant) -> Self {
        Self {
            problem: problem.into(),
            variant,
            pop_size: 100,
            fe_max: 20_000,
            seed: 0,
            global_seed: 0,
            agent: AgentConfig::default(),
            dispersion: DispersionMode::Variance,
            front_size: 1000,
            fronts_dir: PathBuf::from("fronts"),
            out_dir: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if builtin(&self.problem).is_none() {
            return Err(Error::Config(format!(
                "unknown problem `{}`; known problems: {}",
                self.problem,
                crate::problems::builtin_names().join(", ")
            )));
        }
        if self.pop_size < 4 || !self.pop_size.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "population size must be even and >= 4, got {}",
                self.pop_size
            )));
        }
        if self.fe_max < 2 * self.pop_size as u64 {
            return Err(Error::Config(format!(
                "evaluation budget {} is below 2 x population size {}",
                self.fe_max, self.pop_size
            )));
        }
        if self.front_size == 0 {
            return Err(Error::Config("front size must be >= 1".into()));
        }
        self.agent
            .validate()
            .map_err(|e| Error::Config(format!("agent settings: {e}")))?;
        Ok(())
    }
}

/// A parsed batch configuration; unset keys hold documented defaults.
#[derive(Debug, Clone)]
pub struct FileConfig {
    pub problems: Vec<String>,
    pub variants: Vec<Variant>,
    pub pop: usize,
    pub fe: u64,
    pub seeds: u64,
    pub jobs: usize,
    pub global_seed: u64,
    pub out: Option<PathBuf>,
    pub fronts_dir: PathBuf,
    pub front_size: usize,
    pub agent: AgentConfig,
    pub dispersion: DispersionMode,
}

impl Default for FileConfig {
    fn default() -> Self {
        Self {
            problems: crate::problems::builtin_names()
                .iter()
                .map(|s| s.to_string())
                .collect(),
            variants: vec![
                Variant::Aop,
                Variant::GaOnly,
                Variant::DeRandOnly,
                Variant::DeBestOnly,
            ],
            pop: 100,
            fe: 20_000,
            seeds: 10,
            jobs: default_jobs(),
            global_seed: 0,
            out: None,
            fronts_dir: PathBuf::from("fronts"),
            front_size: 1000,
            agent: AgentConfig::default(),
            dispersion: DispersionMode::Variance,
        }
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

impl FileConfig {
    /// Expands into one run template per (problem, variant) cell.
    pub fn run_templates(&self) -> Vec<RunConfig> {
        let mut out = Vec::new();
        for problem in &self.problems {
            for variant in &self.variants {
                let mut rc = RunConfig::new(problem.clone(), variant.clone());
                rc.pop_size = self.pop;
                rc.fe_max = self.fe;
                rc.global_seed = self.global_seed;
                rc.agent = self.agent;
                rc.dispersion = self.dispersion;
                rc.front_size = self.front_size;
                rc.fronts_dir = self.fronts_dir.clone();
                rc.out_dir = self.out.clone();
                out.push(rc);
            }
        }
        out
    }
}

/// Parses a `key = value` config file. Lines starting with `#` and blank
/// lines are skipped; unknown keys are an error.
pub fn parse_config_file(path: &Path) -> Result<FileConfig> {
    let text = fs::read_to_string(path)?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<FileConfig> {
    let mut pairs: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        pairs.insert(key.trim().to_string(), value.trim().to_string());
    }

    let mut config = FileConfig::default();
    for (key, value) in &pairs {
        match key.as_str() {
            "problems" => {
                config.problems = value
                    .split([',', ' '])
                    .filter(|s| !s.is_empty())
                    .map(|s| s.to_string())
                    .collect();
            }
            // Variants are whitespace-separated because fixed portfolios
            // carry commas of their own.
            "variants" => {
                config.variants = value
                    .split_whitespace()
                    .map(Variant::parse)
                    .collect::<Result<_>>()?;
            }
            "pop" => config.pop = parse_num(key, value)?,
            "fe" => config.fe = parse_num(key, value)?,
            "seeds" => config.seeds = parse_num(key, value)?,
            "jobs" => config.jobs = parse_num(key, value)?,
            "seed" => config.global_seed = parse_num(key, value)?,
            "out" => config.out = Some(PathBuf::from(value)),
            "fronts_dir" => config.fronts_dir = PathBuf::from(value),
            "front_size" => config.front_size = parse_num(key, value)?,
            "gamma" => config.agent.gamma = parse_num(key, value)?,
            "tau" => config.agent.tau = parse_num(key, value)?,
            "batch_size" => config.agent.batch_size = parse_num(key, value)?,
            "replay_capacity" => config.agent.replay_capacity = parse_num(key, value)?,
            "actor_lr" => config.agent.actor_lr = parse_num(key, value)?,
            "critic_lr" => config.agent.critic_lr = parse_num(key, value)?,
            "hidden_width" => config.agent.hidden_width = parse_num(key, value)?,
            "sigma_start" => config.agent.sigma_start = parse_num(key, value)?,
            "sigma_end" => config.agent.sigma_end = parse_num(key, value)?,
            "dispersion" => {
                config.dispersion = match value.as_str() {
                    "variance" => DispersionMode::Variance,
                    "literal" => DispersionMode::LiteralSquaredSum,
                    other => {
                        return Err(Error::Config(format!(
                            "dispersion must be `variance` or `literal`, got `{other}`"
                        )))
                    }
                };
            }
            other => {
                return Err(Error::Config(format!("unknown config key `{other}`")));
            }
        }
    }
    if config.problems.is_empty() || config.variants.is_empty() {
        return Err(Error::Config(
            "config needs at least one problem and one variant".into(),
        ));
    }
    Ok(config)
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for key `{key}`")))
}
