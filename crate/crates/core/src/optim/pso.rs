use rand::Rng;

use super::{search_rng, solve_trivial, ConvergenceCurve, Objective, SearchProblem};
use crate::array::quantize_phase;
use crate::error::{Error, Result};

/// Inertia-weight particle swarm.
#[derive(Clone, Debug, PartialEq)]
pub struct PsoParams {
    pub population: usize,
    pub omega: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            population: 25,
            omega: 0.729,
            c1: 1.49445,
            c2: 1.49445,
        }
    }
}

impl PsoParams {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::config("population", "population must be at least 2"));
        }
        for (key, v) in [("omega", self.omega), ("c1", self.c1), ("c2", self.c2)] {
            if !v.is_finite() {
                return Err(Error::config(key, "must be finite"));
            }
        }
        Ok(())
    }
}

/// Signed shortest angular displacement from `from` to `to` in degrees, in
/// `(-180, 180]`.
pub fn circular_distance(from: f64, to: f64) -> f64 {
    let mut d = to.rem_euclid(360.0) - from.rem_euclid(360.0);
    if d > 180.0 {
        d -= 360.0;
    } else if d <= -180.0 {
        d += 360.0;
    }
    d
}

fn wrap_degrees(x: f64) -> f64 {
    let w = x.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs
    if w >= 360.0 {
        0.0
    } else {
        w
    }
}

struct Swarm {
    positions: Vec<Vec<f64>>,
    velocities: Vec<Vec<f64>>,
    personal: Vec<Vec<f64>>,
    personal_cost: Vec<f64>,
    global: usize,
}

/// Runs swarm iterations until the budget is spent.
///
/// Positions are continuous phases in `[0, 360)`; a particle is scored at its
/// quantized position. Both attraction terms use the wrap-around displacement
/// of [`circular_distance`], and positions wrap after every move.
pub fn run_pso<O: Objective>(
    problem: SearchProblem<O>,
    params: &PsoParams,
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
    let dim = problem.dimension();
    let bits = problem.phase_bits();
    let n = params.population;

    let positions: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(0.0..360.0)).collect())
        .collect();
    let velocities = (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(-360.0..=360.0)).collect())
        .collect();
    let mut swarm = Swarm {
        personal: positions.clone(),
        personal_cost: vec![f64::INFINITY; n],
        positions,
        velocities,
        global: 0,
    };

    let mut quantized = vec![0u16; dim];
    loop {
        for i in 0..n {
            for (q, &x) in quantized.iter_mut().zip(&swarm.positions[i]) {
                *q = quantize_phase(x, bits);
            }
            let Some(cost) = problem.evaluate(&quantized) else {
                return Ok(problem.finish(seed));
            };
            if cost < swarm.personal_cost[i] {
                swarm.personal_cost[i] = cost;
                swarm.personal[i].copy_from_slice(&swarm.positions[i]);
                if cost < swarm.personal_cost[swarm.global] {
                    swarm.global = i;
                }
            }
        }
        if problem.exhausted() {
            return Ok(problem.finish(seed));
        }

        let g = swarm.global;
        for i in 0..n {
            for d in 0..dim {
                let x = swarm.positions[i][d];
                let to_personal = circular_distance(x, swarm.personal[i][d]);
                let to_global = circular_distance(x, swarm.personal[g][d]);
                let v = params.omega * swarm.velocities[i][d]
                    + params.c1 * rng.gen::<f64>() * to_personal
                    + params.c2 * rng.gen::<f64>() * to_global;
                swarm.velocities[i][d] = v;
                swarm.positions[i][d] = wrap_degrees(x + v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::FnObjective;

    #[test]
    fn circular_examples() {
        assert_eq!(circular_distance(10.0, 290.0), -80.0);
        assert_eq!(circular_distance(0.0, 0.0), 0.0);
        assert_eq!(circular_distance(350.0, 10.0), 20.0);
        assert_eq!(circular_distance(0.0, 180.0), 180.0);
        assert_eq!(circular_distance(180.0, 0.0), 180.0);
        assert_eq!(circular_distance(-10.0, 370.0), 20.0);
    }

    #[test]
    fn wrap_stays_in_range() {
        assert_eq!(wrap_degrees(-1e-20), 0.0);
        assert_eq!(wrap_degrees(725.0), 5.0);
        assert_eq!(wrap_degrees(-90.0), 270.0);
    }

    #[test]
    fn stationary_particle() {
        // x = p = g and v = 0 gives a zero update
        let x = 123.0;
        let v = 0.729 * 0.0 + 1.49445 * 0.5 * circular_distance(x, x) + 1.49445 * 0.5 * circular_distance(x, x);
        assert_eq!(v, 0.0);
        assert_eq!(wrap_degrees(x + v), x);
    }

    #[test]
    fn rejects_small_population() {
        let obj = FnObjective::new(2, 3, |_: &[u16]| 0.0);
        let prob = SearchProblem::new(obj, 100).unwrap();
        let params = PsoParams { population: 1, ..PsoParams::default() };
        assert!(run_pso(prob, &params, 0).is_err());
    }

    #[test]
    fn evaluates_quantized_positions() {
        let obj = FnObjective::new(3, 6, |p: &[u16]| {
            assert!(p.iter().all(|&q| q < 64));
            p.iter().map(|&q| f64::from(q)).sum()
        });
        let prob = SearchProblem::new(obj, 1000).unwrap();
        let curve = run_pso(prob, &PsoParams::default(), 3).unwrap();
        assert_eq!(curve.evaluations(), 1000);
        assert!(curve.is_non_increasing());
    }
}
