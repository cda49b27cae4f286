//! Line-oriented experiment configuration.
//!
//! ```text
//! # comment
//! algorithms = sa, ga, pso
//!
//! [array]
//! elements_x = 40
//! subarray_x = 5
//!
//! [budget]
//! evaluations = 20000
//! ```
//!
//! Keys before the first section header are global (only `algorithms`).
//! Omitted keys take their defaults; unknown sections or keys are errors.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::array::ArrayConfig;
use crate::cost::{DEFAULT_BEAMWIDTH_DEG, DEFAULT_SIDELOBE_DB};
use crate::error::{Error, Result};
use crate::objective::BeamSetup;
use crate::optim::{GaParams, PsoParams, SaParams};
use crate::pattern::{DEFAULT_DB_FLOOR, DEFAULT_GRID_SIZE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Sa,
    Ga,
    Pso,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Sa, Algorithm::Ga, Algorithm::Pso];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sa => "sa",
            Algorithm::Ga => "ga",
            Algorithm::Pso => "pso",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sa" => Ok(Algorithm::Sa),
            "ga" => Ok(Algorithm::Ga),
            "pso" => Ok(Algorithm::Pso),
            other => Err(Error::config(
                "algorithms",
                format!("unknown algorithm `{other}` (expected sa, ga or pso)"),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatternConfig {
    pub grid_size: usize,
    pub beamwidth_deg: f64,
    pub sidelobe_db: f64,
    pub transition_deg: f64,
    pub db_floor: f64,
}

impl Default for PatternConfig {
    fn default() -> Self {
        Self {
            grid_size: DEFAULT_GRID_SIZE,
            beamwidth_deg: DEFAULT_BEAMWIDTH_DEG,
            sidelobe_db: DEFAULT_SIDELOBE_DB,
            transition_deg: 0.0,
            db_floor: DEFAULT_DB_FLOOR,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BudgetConfig {
    /// Cost evaluations per run.
    pub evaluations: usize,
    pub executions: usize,
    pub base_seed: u64,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        Self {
            evaluations: 20_000,
            executions: 100,
            base_seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub array: ArrayConfig,
    pub pattern: PatternConfig,
    pub budget: BudgetConfig,
    pub sa: SaParams,
    pub ga: GaParams,
    pub pso: PsoParams,
    pub algorithms: Vec<Algorithm>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let array = ArrayConfig::default();
        let population = default_population(&array);
        Self {
            pattern: PatternConfig::default(),
            budget: BudgetConfig::default(),
            sa: SaParams::default(),
            ga: GaParams {
                population,
                ..GaParams::default()
            },
            pso: PsoParams {
                population,
                ..PsoParams::default()
            },
            algorithms: Algorithm::ALL.to_vec(),
            array,
        }
    }
}

/// GA/PSO population when the config leaves it out: 25 up to an 8×8
/// subarray grid, 50 beyond.
pub fn default_population(array: &ArrayConfig) -> usize {
    if array.subarray_count() <= 64 {
        25
    } else {
        50
    }
}

impl ExperimentConfig {
    pub fn setup(&self) -> Result<BeamSetup> {
        BeamSetup::new(
            self.array.clone(),
            self.pattern.grid_size,
            self.pattern.beamwidth_deg,
            self.pattern.sidelobe_db,
            self.pattern.transition_deg,
            self.pattern.db_floor,
        )
    }

    pub fn validate(&self) -> Result<()> {
        self.array.validate()?;
        self.setup()?;
        self.sa.validate()?;
        self.ga.validate()?;
        self.pso.validate()?;
        if self.budget.executions == 0 {
            return Err(Error::config("budget.executions", "executions must be at least 1"));
        }
        let largest = self.ga.population.max(self.pso.population);
        if self.budget.evaluations < largest {
            return Err(Error::config(
                "budget.evaluations",
                format!("evaluations must be at least the largest population ({largest})"),
            ));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("algorithms", "no algorithms selected"));
        }
        Ok(())
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text, path)
}

/// Parses config text; `origin` only labels error messages.
pub fn parse_config(text: &str, origin: &Path) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut ga_population = None;
    let mut pso_population = None;
    let mut section = String::new();
    let mut seen = HashSet::new();

    for (lineno, raw) in text.lines().enumerate() {
        let parse_err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: lineno + 1,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| parse_err(format!("malformed section header `{line}`")))?
                .trim();
            if !["array", "pattern", "budget", "sa", "ga", "pso"].contains(&name) {
                return Err(Error::config(name, "unknown section"));
            }
            section = name.to_string();
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected `key = value`, found `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let full = if section.is_empty() {
            key.to_string()
        } else {
            format!("{section}.{key}")
        };
        if !seen.insert(full.clone()) {
            return Err(Error::config(full, "duplicate key"));
        }

        match full.as_str() {
            "algorithms" => {
                let mut algos = Vec::new();
                for name in value.split(',').filter(|s| !s.trim().is_empty()) {
                    let a: Algorithm = name.parse()?;
                    if !algos.contains(&a) {
                        algos.push(a);
                    }
                }
                cfg.algorithms = algos;
            }
            "array.elements_x" => cfg.array.elements_x = num(&full, value)?,
            "array.elements_y" => cfg.array.elements_y = num(&full, value)?,
            "array.subarray_x" => cfg.array.subarray_x = num(&full, value)?,
            "array.subarray_y" => cfg.array.subarray_y = num(&full, value)?,
            "array.spacing" => cfg.array.spacing = num(&full, value)?,
            "array.phase_bits" => cfg.array.phase_bits = num(&full, value)?,
            "pattern.grid_size" => cfg.pattern.grid_size = num(&full, value)?,
            "pattern.beamwidth_deg" => cfg.pattern.beamwidth_deg = num(&full, value)?,
            "pattern.sidelobe_db" => cfg.pattern.sidelobe_db = num(&full, value)?,
            "pattern.transition_deg" => cfg.pattern.transition_deg = num(&full, value)?,
            "pattern.db_floor" => cfg.pattern.db_floor = num(&full, value)?,
            "budget.evaluations" => cfg.budget.evaluations = num(&full, value)?,
            "budget.executions" => cfg.budget.executions = num(&full, value)?,
            "budget.base_seed" => cfg.budget.base_seed = num(&full, value)?,
            "sa.t0" => cfg.sa.t0 = num(&full, value)?,
            "sa.alpha" => cfg.sa.alpha = num(&full, value)?,
            "sa.k" => cfg.sa.k = num(&full, value)?,
            "sa.iters_per_temp" => cfg.sa.iters_per_temp = num(&full, value)?,
            "sa.t_stops" => cfg.sa.t_stops = num(&full, value)?,
            "ga.population" => ga_population = Some(num(&full, value)?),
            "ga.crossover_fraction" => cfg.ga.crossover_fraction = num(&full, value)?,
            "ga.mutation_rate" => cfg.ga.mutation_rate = num(&full, value)?,
            "ga.elite_fraction" => cfg.ga.elite_fraction = num(&full, value)?,
            "pso.population" => pso_population = Some(num(&full, value)?),
            "pso.omega" => cfg.pso.omega = num(&full, value)?,
            "pso.c1" => cfg.pso.c1 = num(&full, value)?,
            "pso.c2" => cfg.pso.c2 = num(&full, value)?,
            _ => return Err(Error::config(full, "unknown key")),
        }
    }

    if cfg.array.subarray_x != 0 && cfg.array.subarray_y != 0 {
        let fallback = default_population(&cfg.array);
        cfg.ga.population = ga_population.unwrap_or(fallback);
        cfg.pso.population = pso_population.unwrap_or(fallback);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(key, format!("invalid value `{value}`")))
}
