use rand::Rng;

use super::{search_rng, solve_trivial, ConvergenceCurve, Objective, SearchProblem};
use crate::error::{Error, Result};

/// Genetic algorithm with fitness-proportional selection and elitism.
#[derive(Clone, Debug, PartialEq)]
pub struct GaParams {
    pub population: usize,
    /// Fraction of the population drawn as parents each generation.
    pub crossover_fraction: f64,
    /// Per-gene mutation probability.
    pub mutation_rate: f64,
    /// Fraction of the population carried over unchanged.
    pub elite_fraction: f64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population: 25,
            crossover_fraction: 1.0,
            mutation_rate: 0.07,
            elite_fraction: 0.25,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::config("population", "population must be at least 2"));
        }
        if !(self.crossover_fraction > 0.0 && self.crossover_fraction <= 1.0) {
            return Err(Error::config("crossover_fraction", "must lie in (0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::config("mutation_rate", "must lie in [0, 1]"));
        }
        if !(0.0..1.0).contains(&self.elite_fraction) {
            return Err(Error::config("elite_fraction", "must lie in [0, 1)"));
        }
        Ok(())
    }

    /// Members carried over unchanged: `floor(e N)`.
    pub fn elites(&self) -> usize {
        (self.elite_fraction * self.population as f64).floor() as usize
    }

    /// Offspring per generation: `N - floor(e N)`, i.e. `ceil((1 - e) N)`.
    pub fn offspring(&self) -> usize {
        self.population - self.elites()
    }

    /// Parents drawn per generation: `ceil(r N)`, at least two.
    pub fn parents(&self) -> usize {
        ((self.crossover_fraction * self.population as f64).ceil() as usize).max(2)
    }
}

/// Selection probabilities proportional to `max(C) - C(n_i)`; uniform when
/// every cost is equal.
pub(crate) fn selection_weights(costs: &[f64]) -> Vec<f64> {
    let worst = costs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = costs.iter().map(|c| worst - c).collect();
    let total: f64 = raw.iter().sum();
    if !(total > 0.0) {
        return vec![1.0 / costs.len() as f64; costs.len()];
    }
    raw.into_iter().map(|w| w / total).collect()
}

fn roulette<R: Rng>(rng: &mut R, probabilities: &[f64]) -> usize {
    let target: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in probabilities.iter().enumerate() {
        acc += p;
        if target < acc {
            return i;
        }
    }
    // rounding left the cumulative sum just under 1; fall back to the last
    // member with nonzero probability
    probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

fn crossover<R: Rng>(rng: &mut R, a: &[u16], b: &[u16]) -> (Vec<u16>, Vec<u16>) {
    let d = a.len();
    if d < 2 {
        return (a.to_vec(), b.to_vec());
    }
    let cut = rng.gen_range(1..d);
    let mut c1 = a[..cut].to_vec();
    c1.extend_from_slice(&b[cut..]);
    let mut c2 = b[..cut].to_vec();
    c2.extend_from_slice(&a[cut..]);
    (c1, c2)
}

/// Runs generations until the budget is spent.
///
/// Each generation draws parents by roulette, pairs them consecutively, and
/// applies single-point crossover and per-gene resampling mutation to fill
/// the offspring slots; the lowest-cost members of the previous generation
/// fill the elite slots. Every member of the new population is evaluated.
pub fn run_ga<O: Objective>(
    problem: SearchProblem<O>,
    params: &GaParams,
    seed: u64,
) -> Result<ConvergenceCurve> {
    params.validate()?;
    if params.population > problem.budget() {
        return Err(Error::config(
            "population",
            format!(
                "population {} exceeds budget {}",
                params.population,
                problem.budget()
            ),
        ));
    }
    let mut problem = match solve_trivial(problem, seed) {
        Ok(curve) => return Ok(curve),
        Err(problem) => problem,
    };
    let mut rng = search_rng(seed);
    let levels = problem.levels();
    let dim = problem.dimension();
    let n = params.population;

    let mut population: Vec<Vec<u16>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(0..levels) as u16).collect())
        .collect();
    let mut costs = Vec::with_capacity(n);
    for member in &population {
        match problem.evaluate(member) {
            Some(c) => costs.push(c),
            None => return Ok(problem.finish(seed)),
        }
    }

    let (n_parents, n_offspring, n_elites) = (params.parents(), params.offspring(), params.elites());
    while !problem.exhausted() {
        debug_assert_eq!(population.len(), n);

        let probabilities = selection_weights(&costs);
        let parents: Vec<usize> = (0..n_parents)
            .map(|_| roulette(&mut rng, &probabilities))
            .collect();

        let mut next: Vec<Vec<u16>> = Vec::with_capacity(n);
        let mut pair = 0;
        while next.len() < n_offspring {
            let a = parents[(2 * pair) % n_parents];
            let b = parents[(2 * pair + 1) % n_parents];
            let (c1, c2) = crossover(&mut rng, &population[a], &population[b]);
            next.push(c1);
            if next.len() < n_offspring {
                next.push(c2);
            }
            pair += 1;
        }
        for child in &mut next {
            for gene in child.iter_mut() {
                if rng.gen::<f64>() < params.mutation_rate {
                    *gene = rng.gen_range(0..levels) as u16;
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| costs[i].total_cmp(&costs[j]));
        next.extend(order[..n_elites].iter().map(|&i| population[i].clone()));

        population = next;
        costs.clear();
        for member in &population {
            match problem.evaluate(member) {
                Some(c) => costs.push(c),
                None => return Ok(problem.finish(seed)),
            }
        }
    }
    Ok(problem.finish(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::FnObjective;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn equal_costs_select_uniformly() {
        assert_eq!(selection_weights(&[2.0; 4]), vec![0.25; 4]);
    }

    #[test]
    fn selection_follows_cost_gap() {
        let w = selection_weights(&[1.0, 2.0, 4.0]);
        assert_eq!(w, vec![0.6, 0.4, 0.0]);
    }

    #[test]
    fn roulette_never_picks_zero_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = selection_weights(&[1.0, 2.0, 4.0]);
        let mut counts = [0; 3];
        for _ in 0..10_000 {
            counts[roulette(&mut rng, &p)] += 1;
        }
        assert_eq!(counts[2], 0);
        assert!((counts[0] as f64 / 10_000.0 - 0.6).abs() < 0.03);
    }

    #[test]
    fn crossover_swaps_tails() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = [1, 1, 1, 1, 1];
        let b = [2, 2, 2, 2, 2];
        for _ in 0..50 {
            let (c1, c2) = crossover(&mut rng, &a, &b);
            let cut = c1.iter().position(|&g| g == 2).unwrap();
            assert!((1..5).contains(&cut));
            assert!(c1[..cut].iter().all(|&g| g == 1) && c1[cut..].iter().all(|&g| g == 2));
            assert!(c2[..cut].iter().all(|&g| g == 2) && c2[cut..].iter().all(|&g| g == 1));
        }
    }

    #[test]
    fn slot_counts() {
        let p = GaParams::default();
        assert_eq!((p.parents(), p.offspring(), p.elites()), (25, 19, 6));
        let p = GaParams { population: 50, ..p };
        assert_eq!((p.parents(), p.offspring(), p.elites()), (50, 38, 12));
    }

    #[test]
    fn rejects_small_population() {
        let obj = FnObjective::new(2, 3, |_: &[u16]| 0.0);
        let prob = SearchProblem::new(obj, 100).unwrap();
        let params = GaParams { population: 1, ..GaParams::default() };
        assert!(run_ga(prob, &params, 0).is_err());
    }

    #[test]
    fn elitism_keeps_best_in_population() {
        // with elites the population's best cost never regresses between generations
        let mut gen_best = Vec::new();
        let mut seen = 0usize;
        let mut current = f64::INFINITY;
        let obj = FnObjective::new(6, 4, |p: &[u16]| {
            let c: f64 = p.iter().map(|&g| (f64::from(g) - 5.0).powi(2)).sum();
            current = current.min(c);
            seen += 1;
            if seen % 10 == 0 {
                gen_best.push(current);
                current = f64::INFINITY;
            }
            c
        });
        let prob = SearchProblem::new(obj, 400).unwrap();
        let params = GaParams { population: 10, ..GaParams::default() };
        let curve = run_ga(prob, &params, 11).unwrap();
        assert_eq!(curve.evaluations(), 400);
        assert!(gen_best.windows(2).all(|w| w[1] <= w[0]), "{gen_best:?}");
    }
}
