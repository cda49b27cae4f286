use super::Objective;
use crate::array::PhaseSolution;
use crate::error::{Error, Result};

/// Largest space [`brute_force_search`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

/// Global optimum by full enumeration in lexicographic order; the first
/// minimum wins ties.
pub fn brute_force_search<O: Objective + ?Sized>(objective: &mut O) -> Result<(PhaseSolution, f64)> {
    let dim = objective.dimension();
    let levels = 1u64 << objective.phase_bits();
    let size = (levels as f64).powi(dim as i32);
    if size > BRUTE_FORCE_LIMIT as f64 {
        return Err(Error::SpaceTooLarge {
            size,
            limit: BRUTE_FORCE_LIMIT,
        });
    }

    let mut candidate = vec![0u16; dim];
    let mut best = (candidate.clone(), objective.cost(&candidate));
    // odometer increment, last digit fastest
    'outer: loop {
        let mut d = dim;
        loop {
            if d == 0 {
                break 'outer;
            }
            d -= 1;
            candidate[d] += 1;
            if u64::from(candidate[d]) < levels {
                break;
            }
            candidate[d] = 0;
        }
        let cost = objective.cost(&candidate);
        if cost < best.1 {
            best = (candidate.clone(), cost);
        }
    }
    Ok((PhaseSolution(best.0), best.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optim::FnObjective;

    #[test]
    fn empty_space() {
        let mut obj = FnObjective::new(0, 6, |_: &[u16]| 3.5);
        assert_eq!(brute_force_search(&mut obj).unwrap(), (PhaseSolution(vec![]), 3.5));
    }

    #[test]
    fn enumerates_every_candidate_once() {
        let mut seen = std::collections::HashSet::new();
        let mut obj = FnObjective::new(2, 3, |p: &[u16]| {
            assert!(seen.insert(p.to_vec()));
            f64::from(p[0]) * 10.0 + f64::from(p[1])
        });
        let (sol, cost) = brute_force_search(&mut obj).unwrap();
        assert_eq!((sol.0, cost), (vec![0, 0], 0.0));
        drop(obj);
        assert_eq!(seen.len(), 64);
    }

    #[test]
    fn finds_interior_minimum() {
        let mut obj = FnObjective::new(3, 3, |p: &[u16]| {
            p.iter().zip([5, 2, 7]).map(|(&a, b)| (f64::from(a) - b as f64).abs()).sum()
        });
        assert_eq!(brute_force_search(&mut obj).unwrap(), (PhaseSolution(vec![5, 2, 7]), 0.0));
    }

    #[test]
    fn refuses_large_space() {
        let mut obj = FnObjective::new(4, 6, |_: &[u16]| 0.0);
        let err = brute_force_search(&mut obj).unwrap_err();
        assert!(matches!(err, Error::SpaceTooLarge { .. }));
        assert!(err.to_string().contains("16777216"), "{err}");
    }
}
