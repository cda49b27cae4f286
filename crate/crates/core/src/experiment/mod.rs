//! Repeated seeded runs, aggregation and artifact export.

mod config;
mod export;
mod runner;
mod stats;

pub use config::{
    default_population, load_config, parse_config, Algorithm, BudgetConfig, ExperimentConfig,
    PatternConfig,
};
pub use export::{
    az_el_deg, cuts_csv, curves_csv, decimated_indices, element_phases_csv, export_artifacts,
    export_solution, fmt_f64, load_solution, mean_curves_csv, parse_solution_csv, pattern_csv,
    solution_csv, summary_csv, BEST_SOLUTION_CSV, CURVES_CSV, CUTS_CSV, ELEMENT_PHASES_CSV,
    MEAN_CURVES_CSV, PATTERN_CSV, SUMMARY_CSV,
};
pub use runner::{execution_seed, run_experiment, run_single, RunRecord};
pub use stats::{aggregate, summary_table, AggregateStats, AlgorithmStats};
