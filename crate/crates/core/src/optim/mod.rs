//! Budgeted search over quantized group phases.
//!
//! Every optimizer drives a [`SearchProblem`], which owns the objective, counts
//! evaluations, refuses to evaluate past the budget and records the
//! best-so-far cost after every evaluation.

mod exhaustive;
mod ga;
mod pso;
mod sa;

pub use exhaustive::{brute_force_search, BRUTE_FORCE_LIMIT};
pub use ga::{run_ga, GaParams};
pub use pso::{circular_distance, run_pso, PsoParams};
pub use sa::{run_sa, SaParams};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::array::PhaseSolution;
use crate::error::{Error, Result};

/// Generator used by every optimizer.
pub type SearchRng = ChaCha8Rng;

pub fn search_rng(seed: u64) -> SearchRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A cost over `dimension` phase indices in `0..2^phase_bits`.
pub trait Objective {
    fn dimension(&self) -> usize;
    fn phase_bits(&self) -> u32;
    fn cost(&mut self, phases: &[u16]) -> f64;
}

/// Wraps a closure as an [`Objective`].
pub struct FnObjective<F> {
    dimension: usize,
    phase_bits: u32,
    f: F,
}

impl<F: FnMut(&[u16]) -> f64> FnObjective<F> {
    pub fn new(dimension: usize, phase_bits: u32, f: F) -> Self {
        Self {
            dimension,
            phase_bits,
            f,
        }
    }
}

impl<F: FnMut(&[u16]) -> f64> Objective for FnObjective<F> {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn phase_bits(&self) -> u32 {
        self.phase_bits
    }

    fn cost(&mut self, phases: &[u16]) -> f64 {
        (self.f)(phases)
    }
}

impl<O: Objective + ?Sized> Objective for &mut O {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn phase_bits(&self) -> u32 {
        (**self).phase_bits()
    }

    fn cost(&mut self, phases: &[u16]) -> f64 {
        (**self).cost(phases)
    }
}

/// Objective plus evaluation accounting.
pub struct SearchProblem<O> {
    objective: O,
    budget: usize,
    curve: Vec<f64>,
    best: Option<(PhaseSolution, f64)>,
}

impl<O: Objective> SearchProblem<O> {
    pub fn new(objective: O, budget: usize) -> Result<Self> {
        if budget == 0 {
            return Err(Error::config("evaluations", "budget must be at least 1"));
        }
        Ok(Self {
            objective,
            budget,
            curve: Vec::with_capacity(budget),
            best: None,
        })
    }

    pub fn dimension(&self) -> usize {
        self.objective.dimension()
    }

    pub fn phase_bits(&self) -> u32 {
        self.objective.phase_bits()
    }

    pub fn levels(&self) -> u32 {
        1 << self.phase_bits()
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn evaluations(&self) -> usize {
        self.curve.len()
    }

    pub fn remaining(&self) -> usize {
        self.budget - self.curve.len()
    }

    pub fn exhausted(&self) -> bool {
        self.curve.len() >= self.budget
    }

    pub fn best(&self) -> Option<&(PhaseSolution, f64)> {
        self.best.as_ref()
    }

    pub fn objective_mut(&mut self) -> &mut O {
        &mut self.objective
    }

    /// Scores `phases`, or returns `None` once the budget is spent.
    pub fn evaluate(&mut self, phases: &[u16]) -> Option<f64> {
        if self.exhausted() {
            return None;
        }
        let cost = self.objective.cost(phases);
        let improved = match &self.best {
            Some((_, best)) => cost < *best,
            None => true,
        };
        if improved {
            self.best = Some((PhaseSolution(phases.to_vec()), cost));
        }
        let best = self.best.as_ref().map_or(cost, |b| b.1);
        self.curve.push(best);
        Some(cost)
    }

    pub fn finish(self, seed: u64) -> ConvergenceCurve {
        let (solution, cost) = self
            .best
            .expect("search finished without evaluating any solution");
        ConvergenceCurve {
            best_costs: self.curve,
            solution,
            cost,
            seed,
        }
    }
}

/// Best-so-far cost after each evaluation, plus the final best solution.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceCurve {
    /// Entry `k` is the best cost after `k + 1` evaluations.
    pub best_costs: Vec<f64>,
    pub solution: PhaseSolution,
    pub cost: f64,
    pub seed: u64,
}

impl ConvergenceCurve {
    pub fn evaluations(&self) -> usize {
        self.best_costs.len()
    }

    pub fn is_non_increasing(&self) -> bool {
        self.best_costs.windows(2).all(|w| w[1] <= w[0])
    }
}

/// A zero-dimensional space has one candidate, the empty solution; score it
/// once and stop. Otherwise hand the problem back.
fn solve_trivial<O: Objective>(
    mut problem: SearchProblem<O>,
    seed: u64,
) -> std::result::Result<ConvergenceCurve, SearchProblem<O>> {
    if problem.dimension() > 0 {
        return Err(problem);
    }
    problem.evaluate(&[]);
    Ok(problem.finish(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_is_enforced() {
        let obj = FnObjective::new(1, 2, |p: &[u16]| f64::from(p[0]));
        let mut prob = SearchProblem::new(obj, 3).unwrap();
        assert_eq!(prob.evaluate(&[3]), Some(3.0));
        assert_eq!(prob.evaluate(&[1]), Some(1.0));
        assert_eq!(prob.evaluate(&[2]), Some(2.0));
        assert_eq!(prob.evaluate(&[0]), None);
        let curve = prob.finish(5);
        assert_eq!(curve.best_costs, vec![3.0, 1.0, 1.0]);
        assert_eq!(curve.solution, PhaseSolution(vec![1]));
        assert_eq!((curve.cost, curve.seed), (1.0, 5));
    }

    #[test]
    fn zero_budget_rejected() {
        let obj = FnObjective::new(1, 2, |_: &[u16]| 0.0);
        assert!(SearchProblem::new(obj, 0).is_err());
    }
}
