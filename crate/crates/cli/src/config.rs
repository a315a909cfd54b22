//! Experiment configuration files. See `docs/config.md` for the schema.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use evohull_core::ea::EaConfig;
use evohull_core::problems::{Problem, ProblemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    HullRecover,
    Optimize,
    OperatorLaws,
    EntropyReport,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::HullRecover => "hull-recover",
            CommandKind::Optimize => "optimize",
            CommandKind::OperatorLaws => "operator-laws",
            CommandKind::EntropyReport => "entropy-report",
        }
    }
}

/// An EA configuration given inline or as a path to its own JSON file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum EaSource {
    Path(PathBuf),
    Inline(Box<EaConfig>),
}

fn default_scramble() -> usize {
    4
}

fn default_trials() -> usize {
    1000
}

/// The file as written; paths are relative to the file's directory.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    command: Option<CommandKind>,
    #[serde(default)]
    instance: Option<PathBuf>,
    #[serde(default)]
    ea: Option<EaSource>,
    #[serde(default)]
    seeds: Vec<u64>,
    #[serde(default)]
    out: Option<PathBuf>,
    #[serde(default = "default_scramble")]
    scramble_swaps_per_edge: usize,
    #[serde(default = "default_trials")]
    trials: usize,
    #[serde(default)]
    negative_control: bool,
    #[serde(default)]
    record: Option<PathBuf>,
}

/// A validated experiment: referenced files exist and parse, and there is
/// at least one seed for the commands that use seeds.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub problem: Option<Problem>,
    pub ea: Option<EaConfig>,
    pub seeds: Vec<u64>,
    pub out: PathBuf,
    pub scramble_swaps_per_edge: usize,
    pub trials: usize,
    pub negative_control: bool,
    pub record: Option<PathBuf>,
}

/// Smallest trial count accepted by `operator-laws`.
pub const MIN_TRIALS: usize = 100;

fn read(path: &Path, what: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {what} {}", path.display()))
}

impl ExperimentConfig {
    /// Loads `path` for `command`. `seeds` and `out` from the command line
    /// replace the file's values when given.
    pub fn load(path: &Path, command: CommandKind, seeds: &[u64], out: Option<&Path>) -> Result<Self> {
        let text = read(path, "config")?;
        let raw: RawConfig =
            serde_json::from_str(&text).with_context(|| format!("invalid config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));

        if let Some(declared) = raw.command {
            if declared != command {
                bail!(
                    "config {} is for `{}`, not `{}`",
                    path.display(),
                    declared.name(),
                    command.name()
                );
            }
        }

        let problem = match &raw.instance {
            Some(p) => {
                let p = base.join(p);
                let spec = ProblemSpec::from_json(&read(&p, "instance")?)
                    .with_context(|| format!("invalid instance {}", p.display()))?;
                let dir = p.parent().unwrap_or(Path::new("."));
                Some(spec.resolve(dir).with_context(|| format!("instance {} rejected", p.display()))?)
            }
            None => None,
        };

        let ea = match &raw.ea {
            Some(EaSource::Path(p)) => {
                let p = base.join(p);
                Some(EaConfig::from_json(&read(&p, "EA config")?).with_context(|| format!("invalid EA config {}", p.display()))?)
            }
            Some(EaSource::Inline(cfg)) => {
                cfg.validate().context("invalid inline EA config")?;
                Some((**cfg).clone())
            }
            None => None,
        };

        let mut seeds = if seeds.is_empty() { raw.seeds.clone() } else { seeds.to_vec() };
        if seeds.is_empty() {
            if let Some(s) = ea.as_ref().and_then(|e| e.seed) {
                seeds.push(s);
            }
        }
        let out = match (out, &raw.out) {
            (Some(o), _) => o.to_path_buf(),
            (None, Some(o)) => base.join(o),
            (None, None) => PathBuf::from("evohull-out"),
        };

        let cfg = ExperimentConfig {
            command,
            problem,
            ea,
            seeds,
            out,
            scramble_swaps_per_edge: raw.scramble_swaps_per_edge,
            trials: raw.trials,
            negative_control: raw.negative_control,
            record: raw.record.map(|r| base.join(r)),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let needs_seeds = self.command != CommandKind::EntropyReport;
        if needs_seeds && self.seeds.is_empty() {
            bail!("at least one seed is required (config `seeds` or --seed)");
        }
        match self.command {
            CommandKind::HullRecover => {
                if !matches!(self.problem, Some(Problem::Triangulation { .. })) {
                    bail!("hull-recover needs a triangulation instance");
                }
                if self.ea.is_none() {
                    bail!("hull-recover needs an `ea` configuration");
                }
            }
            CommandKind::Optimize => {
                if !matches!(self.problem, Some(Problem::Lp { .. } | Problem::Qp { .. })) {
                    bail!("optimize needs an LP or QP instance");
                }
                if self.ea.is_none() {
                    bail!("optimize needs an `ea` configuration");
                }
            }
            CommandKind::OperatorLaws => {
                if self.trials < MIN_TRIALS {
                    bail!("trial count {} is below the minimum of {MIN_TRIALS}", self.trials);
                }
            }
            CommandKind::EntropyReport => match &self.record {
                None => bail!("entropy-report needs a `record` path"),
                Some(r) if !r.is_file() => bail!("record file not found: {}", r.display()),
                Some(_) => {}
            },
        }
        Ok(())
    }
}
