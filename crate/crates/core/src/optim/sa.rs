use rand::Rng;

use super::{search_rng, solve_trivial, ConvergenceCurve, Objective, SearchProblem};
use crate::error::{Error, Result};

/// Simulated-annealing schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct SaParams {
    /// Initial temperature.
    pub t0: f64,
    /// Geometric cooling factor.
    pub alpha: f64,
    /// Cost normalizer in the acceptance exponent.
    pub k: f64,
    pub iters_per_temp: usize,
    /// Number of temperature reductions.
    pub t_stops: usize,
}

impl Default for SaParams {
    fn default() -> Self {
        Self {
            t0: 1.0,
            alpha: 0.97,
            k: 0.01,
            iters_per_temp: 200,
            t_stops: 100,
        }
    }
}

impl SaParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.t0 > 0.0) {
            return Err(Error::config("t0", "initial temperature must be positive"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::config("alpha", "alpha must lie in (0, 1)"));
        }
        if !(self.k > 0.0) {
            return Err(Error::config("k", "k must be positive"));
        }
        if self.iters_per_temp == 0 {
            return Err(Error::config("iters_per_temp", "must be at least 1"));
        }
        Ok(())
    }

    /// Temperature after the full schedule.
    pub fn final_temperature(&self) -> f64 {
        self.t0 * self.alpha.powi(self.t_stops as i32)
    }

    /// Evaluations of an unbounded run: the initial solution plus every neighbor.
    pub fn evaluations(&self) -> usize {
        1 + self.iters_per_temp * self.t_stops
    }
}

/// Probability of moving from a solution of cost `old` to one of cost `new`.
pub(crate) fn acceptance_probability(old: f64, new: f64, k: f64, temperature: f64) -> f64 {
    if new <= old {
        1.0
    } else {
        ((old - new) / (k * temperature)).exp()
    }
}

/// Runs the annealing schedule until it completes or the budget is spent.
///
/// A neighbor resamples the phase of one uniformly chosen group from all
/// quantization levels.
pub fn run_sa<O: Objective>(
    problem: SearchProblem<O>,
    params: &SaParams,
    seed: u64,
) -> Result<ConvergenceCurve> {
    params.validate()?;
    let mut problem = match solve_trivial(problem, seed) {
        Ok(curve) => return Ok(curve),
        Err(problem) => problem,
    };
    let mut rng = search_rng(seed);
    let levels = problem.levels();
    let dim = problem.dimension();

    let mut current: Vec<u16> = (0..dim).map(|_| rng.gen_range(0..levels) as u16).collect();
    let Some(mut current_cost) = problem.evaluate(&current) else {
        unreachable!("budget is at least one evaluation");
    };

    let mut temperature = params.t0;
    let mut candidate = current.clone();
    'schedule: for _ in 0..params.t_stops {
        for _ in 0..params.iters_per_temp {
            candidate.copy_from_slice(&current);
            let g = rng.gen_range(0..dim);
            candidate[g] = rng.gen_range(0..levels) as u16;
            let Some(cost) = problem.evaluate(&candidate) else {
                break 'schedule;
            };
            let p = acceptance_probability(current_cost, cost, params.k, temperature);
            if p >= 1.0 || rng.gen::<f64>() < p {
                std::mem::swap(&mut current, &mut candidate);
                current_cost = cost;
            }
        }
        temperature *= params.alpha;
    }
    Ok(problem.finish(seed))
}
