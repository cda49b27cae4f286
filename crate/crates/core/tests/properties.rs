use beambroad::array::{build_symmetry_map, dequantize_phase, quantize_phase, ArrayConfig, PhaseSolution};
use beambroad::optim::{
    circular_distance, run_ga, run_pso, run_sa, FnObjective, GaParams, PsoParams, SaParams,
    SearchProblem,
};
use proptest::prelude::*;

fn rastrigin_like(p: &[u16]) -> f64 {
    p.iter()
        .enumerate()
        .map(|(i, &q)| {
            let x = f64::from(q) - 7.0 * (i as f64 + 1.0);
            x * x + 10.0 * (1.0 - (x * 0.7).cos())
        })
        .sum()
}

proptest! {
    #[test]
    fn circular_distance_is_minimal(a in -1000.0f64..1000.0, b in -1000.0f64..1000.0) {
        let d = circular_distance(a, b);
        prop_assert!(d > -180.0 && d <= 180.0);
        // a + d lands on b modulo one turn
        let residue = (a + d - b).rem_euclid(360.0);
        prop_assert!(residue < 1e-9 || 360.0 - residue < 1e-9);
    }

    #[test]
    fn quantize_is_idempotent(deg in -720.0f64..720.0, bits in 1u32..=8) {
        let q = quantize_phase(deg, bits);
        prop_assert!(u32::from(q) < 1 << bits);
        prop_assert_eq!(quantize_phase(dequantize_phase(q, bits), bits), q);
    }

    #[test]
    fn groups_are_mirror_symmetric(nx in 1usize..12, ny in 1usize..12) {
        let map = build_symmetry_map(&ArrayConfig::new((2 * nx, 2 * ny), (2, 2), 0.5, 6).unwrap()).unwrap();
        for sy in 0..ny {
            for sx in 0..nx {
                let g = map.group_of(sx, sy);
                prop_assert_eq!(g, map.group_of(nx - 1 - sx, sy));
                prop_assert_eq!(g, map.group_of(sx, ny - 1 - sy));
            }
        }
    }

    #[test]
    fn curves_never_increase(seed in 0u64..1000, budget in 30usize..400) {
        let obj = || FnObjective::new(4, 5, rastrigin_like);
        let sa = run_sa(SearchProblem::new(obj(), budget).unwrap(), &SaParams::default(), seed).unwrap();
        let ga = run_ga(SearchProblem::new(obj(), budget).unwrap(), &GaParams::default(), seed).unwrap();
        let pso = run_pso(SearchProblem::new(obj(), budget).unwrap(), &PsoParams::default(), seed).unwrap();
        for c in [&sa, &ga, &pso] {
            prop_assert!(c.is_non_increasing());
            prop_assert_eq!(c.evaluations(), budget);
            prop_assert_eq!(*c.best_costs.last().unwrap(), c.cost);
            prop_assert_eq!(rastrigin_like(c.solution.as_slice()), c.cost);
        }
    }
}

#[test]
fn solution_degrees_follow_indices() {
    let sol = PhaseSolution(vec![0, 32, 63]);
    assert_eq!(sol.degrees(6), vec![0.0, 180.0, 354.375]);
}
