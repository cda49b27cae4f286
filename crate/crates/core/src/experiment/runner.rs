use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::config::{Algorithm, ExperimentConfig};
use crate::array::PhaseSolution;
use crate::cost::CostBreakdown;
use crate::error::{Error, Result};
use crate::objective::BeamSetup;
use crate::optim::{run_ga, run_pso, run_sa, ConvergenceCurve, SearchProblem};

/// One seeded execution of one algorithm.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub execution: usize,
    pub seed: u64,
    pub curve: ConvergenceCurve,
    pub breakdown: CostBreakdown,
    pub wall_time: Duration,
}

impl RunRecord {
    pub fn solution(&self) -> &PhaseSolution {
        &self.curve.solution
    }

    pub fn final_cost(&self) -> f64 {
        self.curve.cost
    }
}

/// Seed of execution `e`, shared by every algorithm.
pub fn execution_seed(base_seed: u64, execution: usize) -> u64 {
    base_seed.wrapping_add(execution as u64)
}

pub fn run_single(
    cfg: &ExperimentConfig,
    setup: &BeamSetup,
    algorithm: Algorithm,
    execution: usize,
) -> Result<RunRecord> {
    let seed = execution_seed(cfg.budget.base_seed, execution);
    let start = Instant::now();
    let problem = SearchProblem::new(setup.objective(), cfg.budget.evaluations)?;
    let curve = match algorithm {
        Algorithm::Sa => run_sa(problem, &cfg.sa, seed)?,
        Algorithm::Ga => run_ga(problem, &cfg.ga, seed)?,
        Algorithm::Pso => run_pso(problem, &cfg.pso, seed)?,
    };
    let breakdown = setup.objective().breakdown(&curve.solution)?;
    Ok(RunRecord {
        algorithm,
        execution,
        seed,
        curve,
        breakdown,
        wall_time: start.elapsed(),
    })
}

/// Runs every selected algorithm `executions` times. Records come back
/// grouped by algorithm (config order), then by execution index, regardless
/// of how many workers ran them.
pub fn run_experiment(cfg: &ExperimentConfig, jobs: Option<usize>) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let setup = cfg.setup()?;
    let tasks: Vec<(Algorithm, usize)> = cfg
        .algorithms
        .iter()
        .flat_map(|&a| (0..cfg.budget.executions).map(move |e| (a, e)))
        .collect();

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| Error::config("jobs", e.to_string()))?;
    pool.install(|| {
        tasks
            .par_iter()
            .map(|&(a, e)| run_single(cfg, &setup, a, e))
            .collect()
    })
}
