use super::config::Algorithm;
use super::runner::RunRecord;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct AlgorithmStats {
    pub algorithm: Algorithm,
    pub executions: usize,
    /// Pointwise mean of the best-so-far curves.
    pub mean_curve: Vec<f64>,
    /// Index into the aggregated records of the lowest final cost.
    pub best_record: usize,
    pub best_cost: f64,
    pub mean_final_cost: f64,
    pub min_final_cost: f64,
    pub max_final_cost: f64,
    /// Population standard deviation of the final costs.
    pub std_final_cost: f64,
    pub best_p_eff: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AggregateStats {
    /// In order of first appearance among the records.
    pub algorithms: Vec<AlgorithmStats>,
}

impl AggregateStats {
    pub fn get(&self, algorithm: Algorithm) -> Option<&AlgorithmStats> {
        self.algorithms.iter().find(|s| s.algorithm == algorithm)
    }

    /// Record index of the lowest final cost over all algorithms.
    pub fn overall_best(&self) -> Option<usize> {
        self.algorithms
            .iter()
            .min_by(|a, b| a.best_cost.total_cmp(&b.best_cost))
            .map(|s| s.best_record)
    }
}

pub fn aggregate(records: &[RunRecord]) -> Result<AggregateStats> {
    let Some(first) = records.first() else {
        return Err(Error::Aggregate("no records".into()));
    };
    let len = first.curve.evaluations();
    if let Some(r) = records.iter().find(|r| r.curve.evaluations() != len) {
        return Err(Error::Aggregate(format!(
            "mixed budgets: {} {} has {} evaluations, expected {len}",
            r.algorithm,
            r.execution,
            r.curve.evaluations()
        )));
    }

    let mut order: Vec<Algorithm> = Vec::new();
    for r in records {
        if !order.contains(&r.algorithm) {
            order.push(r.algorithm);
        }
    }

    let algorithms = order
        .into_iter()
        .map(|algorithm| {
            let idx: Vec<usize> = (0..records.len())
                .filter(|&i| records[i].algorithm == algorithm)
                .collect();
            let n = idx.len() as f64;

            let mut mean_curve = vec![0.0; len];
            for &i in &idx {
                for (m, c) in mean_curve.iter_mut().zip(&records[i].curve.best_costs) {
                    *m += c;
                }
            }
            mean_curve.iter_mut().for_each(|m| *m /= n);

            let finals: Vec<f64> = idx.iter().map(|&i| records[i].final_cost()).collect();
            let mean = finals.iter().sum::<f64>() / n;
            let var = finals.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / n;
            let best_record = *idx
                .iter()
                .min_by(|&&a, &&b| records[a].final_cost().total_cmp(&records[b].final_cost()))
                .expect("algorithm has at least one record");

            AlgorithmStats {
                algorithm,
                executions: idx.len(),
                mean_curve,
                best_record,
                best_cost: records[best_record].final_cost(),
                mean_final_cost: mean,
                min_final_cost: finals.iter().copied().fold(f64::INFINITY, f64::min),
                max_final_cost: finals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                std_final_cost: var.sqrt(),
                best_p_eff: records[best_record].breakdown.p_eff,
            }
        })
        .collect();
    Ok(AggregateStats { algorithms })
}

/// Plain-text table of per-algorithm results.
pub fn summary_table(stats: &AggregateStats) -> String {
    let mut out = format!(
        "{:<6} {:>10} {:>12} {:>12} {:>12} {:>10}\n",
        "algo", "executions", "best_cost", "mean_cost", "std_cost", "best_peff"
    );
    for s in &stats.algorithms {
        out.push_str(&format!(
            "{:<6} {:>10} {:>12.6} {:>12.6} {:>12.6} {:>9.4}%\n",
            s.algorithm.name(),
            s.executions,
            s.best_cost,
            s.mean_final_cost,
            s.std_final_cost,
            s.best_p_eff
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::PhaseSolution;
    use crate::cost::CostBreakdown;
    use crate::optim::ConvergenceCurve;
    use std::time::Duration;

    fn record(algorithm: Algorithm, execution: usize, curve: Vec<f64>) -> RunRecord {
        let cost = *curve.last().unwrap();
        RunRecord {
            algorithm,
            execution,
            seed: execution as u64,
            breakdown: CostBreakdown { e_mb: 0.0, e_sl: 0.0, cost, beta: 10, p_eff: 100.0 - cost },
            curve: ConvergenceCurve { best_costs: curve, solution: PhaseSolution(vec![1]), cost, seed: 0 },
            wall_time: Duration::ZERO,
        }
    }

    #[test]
    fn single_record_mean_is_curve() {
        let recs = vec![record(Algorithm::Sa, 0, vec![3.0, 2.0, 1.0])];
        let s = aggregate(&recs).unwrap();
        assert_eq!(s.algorithms[0].mean_curve, vec![3.0, 2.0, 1.0]);
        assert_eq!(s.algorithms[0].std_final_cost, 0.0);
    }

    #[test]
    fn pointwise_mean_and_best() {
        let recs = vec![
            record(Algorithm::Ga, 0, vec![4.0, 3.0, 3.0]),
            record(Algorithm::Ga, 1, vec![2.0, 2.0, 1.0]),
            record(Algorithm::Pso, 0, vec![9.0, 8.0, 7.0]),
        ];
        let s = aggregate(&recs).unwrap();
        let ga = s.get(Algorithm::Ga).unwrap();
        assert_eq!(ga.mean_curve, vec![3.0, 2.5, 2.0]);
        assert_eq!((ga.best_record, ga.best_cost), (1, 1.0));
        assert!(ga.best_cost <= ga.mean_final_cost);
        assert_eq!(ga.std_final_cost, 1.0);
        assert_eq!(s.overall_best(), Some(1));
        assert_eq!(s.algorithms.len(), 2);
        assert!(summary_table(&s).lines().count() == 3);
    }

    #[test]
    fn mixed_budgets_rejected() {
        let recs = vec![
            record(Algorithm::Sa, 0, vec![3.0, 2.0]),
            record(Algorithm::Sa, 1, vec![3.0, 2.0, 1.0]),
        ];
        assert!(matches!(aggregate(&recs), Err(Error::Aggregate(_))));
        assert!(aggregate(&[]).is_err());
    }
}
