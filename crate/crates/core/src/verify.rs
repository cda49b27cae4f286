//! Self-checks run by `beambroad verify`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::Rng;

use crate::array::{build_symmetry_map, ArrayConfig, ElementExcitations};
use crate::error::Result;
use crate::objective::BeamSetup;
use crate::optim::{
    brute_force_search, circular_distance, run_ga, run_pso, run_sa, search_rng, FnObjective,
    GaParams, PsoParams, SaParams, SearchProblem,
};
use crate::pattern::{synthesize_direct, synthesize_fft};

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

/// 4×4 subarrays of 2×2 elements with 3-bit phases: two free groups, 64
/// candidates.
pub fn tiny_setup() -> Result<BeamSetup> {
    let array = ArrayConfig::new((8, 8), (2, 2), 0.5, 3)?;
    BeamSetup::new(array, 64, 12.0, -13.0, 0.0, -100.0)
}

pub const TINY_BUDGET: usize = 500;
pub const TINY_RUNS: u64 = 100;

/// A final cost counts as the optimum when it is within this of the
/// exhaustive minimum.
pub fn optimum_tolerance(optimum: f64) -> f64 {
    1e-9 * optimum.abs().max(1.0)
}

/// Number of distinct `i² + j²` over odd half-offsets of an `n × n` grid,
/// counted independently of the symmetry map.
pub fn distinct_center_distances(n: usize) -> usize {
    let odd: Vec<i64> = (0..n as i64).map(|i| 2 * i - (n as i64 - 1)).collect();
    let mut set = BTreeSet::new();
    for &a in &odd {
        for &b in &odd {
            set.insert(a * a + b * b);
        }
    }
    set.len()
}

pub fn symmetry_suite() -> Result<SuiteReport> {
    let mut details = Vec::new();
    let mut passed = true;
    for (n, groups, free) in [(8, 9, 8), (16, 32, 31)] {
        let map = build_symmetry_map(&ArrayConfig::new((5 * n, 5 * n), (5, 5), 0.5, 6)?)?;
        let ok = map.group_count() == groups && map.free_count() == free;
        passed &= ok;
        details.push(format!(
            "{n}x{n} subarrays -> {} groups, {} free (expected {groups}/{free})",
            map.group_count(),
            map.free_count()
        ));
    }
    for n in 2..=16 {
        let map = build_symmetry_map(&ArrayConfig::new((2 * n, 2 * n), (2, 2), 0.5, 6)?)?;
        if map.group_count() != distinct_center_distances(n) {
            passed = false;
            details.push(format!("{n}x{n}: {} groups, enumeration says {}", map.group_count(), distinct_center_distances(n)));
        }
    }
    details.push("group counts match enumeration for 2x2..16x16".into());
    Ok(SuiteReport {
        name: "symmetry",
        passed,
        details,
    })
}

/// Largest relative FFT/direct deviation over `sets` random excitations.
pub fn synthesis_max_deviation(sets: usize, seed: u64) -> Result<f64> {
    let mut rng = search_rng(seed);
    let mut worst = 0.0f64;
    for k in 0..sets {
        let n = if k % 2 == 0 { 8 } else { 16 };
        let mut exc = ElementExcitations::uniform(n, n, 0.5);
        for w in &mut exc.weights {
            *w = Complex64::cis(rng.gen_range(0.0..std::f64::consts::TAU));
        }
        let p = synthesize_fft(&exc, 64)?;
        let points: Vec<_> = p.grid().visible().iter().map(|&i| p.grid().uv(i)).collect();
        let direct = synthesize_direct(&exc, &points)?;
        for (&idx, &d) in p.grid().visible().iter().zip(&direct) {
            worst = worst.max((p.linear()[idx] - d).abs() / d);
        }
    }
    Ok(worst)
}

pub fn synthesis_suite() -> Result<SuiteReport> {
    let worst = synthesis_max_deviation(100, 1)?;
    Ok(SuiteReport {
        name: "synthesis",
        passed: worst <= 1e-9,
        details: vec![format!("100 random 8x8/16x16 sets: max relative FFT/direct deviation {worst:.3e} (limit 1e-9)")],
    })
}

#[derive(Clone, Debug)]
pub struct OracleHits {
    pub optimum: f64,
    pub sa: usize,
    pub ga: usize,
    pub pso: usize,
}

/// Seeded runs of every optimizer on the tiny instance, counted against the
/// exhaustive optimum.
pub fn tiny_oracle_hits(runs: u64, budget: usize) -> Result<OracleHits> {
    let setup = tiny_setup()?;
    let (_, optimum) = brute_force_search(&mut setup.objective())?;
    let tol = optimum_tolerance(optimum);
    let hit = |cost: f64| usize::from(cost <= optimum + tol);
    let (mut sa, mut ga, mut pso) = (0, 0, 0);
    for seed in 0..runs {
        let p = SearchProblem::new(setup.objective(), budget)?;
        sa += hit(run_sa(p, &SaParams::default(), seed)?.cost);
        let p = SearchProblem::new(setup.objective(), budget)?;
        ga += hit(run_ga(p, &GaParams::default(), seed)?.cost);
        let p = SearchProblem::new(setup.objective(), budget)?;
        pso += hit(run_pso(p, &PsoParams::default(), seed)?.cost);
    }
    Ok(OracleHits { optimum, sa, ga, pso })
}

pub fn oracle_suite() -> Result<SuiteReport> {
    let hits = tiny_oracle_hits(TINY_RUNS, TINY_BUDGET)?;
    Ok(SuiteReport {
        name: "oracle",
        passed: hits.sa >= 80 && hits.ga >= 70 && hits.pso >= 80,
        details: vec![
            format!("exhaustive optimum over 64 candidates: {:.6}", hits.optimum),
            format!("hits in {TINY_RUNS} runs at budget {TINY_BUDGET}: sa {} (>= 80), ga {} (>= 70), pso {} (>= 80)", hits.sa, hits.ga, hits.pso),
        ],
    })
}

/// Evaluations performed by each optimizer at `budget` on a cheap objective.
pub fn evaluation_counts(dimension: usize, budget: usize) -> Result<[usize; 3]> {
    let cheap = || FnObjective::new(dimension, 6, |p: &[u16]| p.iter().map(|&q| f64::from(q)).sum());
    let sa = run_sa(SearchProblem::new(cheap(), budget)?, &SaParams::default(), 0)?;
    let ga = run_ga(SearchProblem::new(cheap(), budget)?, &GaParams::default(), 0)?;
    let pso = run_pso(SearchProblem::new(cheap(), budget)?, &PsoParams::default(), 0)?;
    Ok([sa.evaluations(), ga.evaluations(), pso.evaluations()])
}

pub fn budget_suite() -> Result<SuiteReport> {
    let full = SaParams::default().evaluations();
    let [sa_open, _, _] = evaluation_counts(8, 30_000)?;
    let [sa, ga, pso] = evaluation_counts(8, 20_000)?;
    let passed = sa_open == full && sa == 20_000 && ga == 20_000 && pso == 20_000;
    Ok(SuiteReport {
        name: "budget",
        passed,
        details: vec![
            format!("sa unbounded: {sa_open} evaluations (expected {full})"),
            format!("budget 20000: sa {sa}, ga {ga}, pso {pso}"),
        ],
    })
}

pub fn circular_suite() -> Result<SuiteReport> {
    let mut rng = search_rng(3);
    let mut passed = circular_distance(10.0, 290.0) == -80.0;
    for _ in 0..10_000 {
        let (a, b): (f64, f64) = (rng.gen_range(-720.0..720.0), rng.gen_range(-720.0..720.0));
        let d = circular_distance(a, b);
        let raw = (b - a).rem_euclid(360.0);
        let expected = if raw > 180.0 { raw - 360.0 } else { raw };
        passed &= d > -180.0 && d <= 180.0 && (d - expected).abs() < 1e-9;
    }
    Ok(SuiteReport {
        name: "circular",
        passed,
        details: vec!["(10, 290) -> -80; 10000 random pairs in (-180, 180]".into()],
    })
}

pub fn run_all() -> Result<Vec<SuiteReport>> {
    Ok(vec![
        symmetry_suite()?,
        synthesis_suite()?,
        circular_suite()?,
        budget_suite()?,
        oracle_suite()?,
    ])
}
