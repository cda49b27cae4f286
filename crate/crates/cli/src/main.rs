use std::path::{Path, PathBuf};
use std::process::ExitCode;

use beambroad::experiment::{
    aggregate, export_artifacts, export_solution, load_config, load_solution, run_experiment,
    summary_table, Algorithm, ExperimentConfig,
};
use beambroad::verify;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "beambroad", version, about = "Phase-only beam broadening of subarrayed planar arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured algorithms and write CSV artifacts.
    Run {
        /// Experiment config; built-in 40x40 defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        algo: Option<AlgoChoice>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Overrides the configured number of executions.
        #[arg(long)]
        executions: Option<usize>,
        /// Keep every k-th point of the convergence curves.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        decimate: u64,
        /// Worker threads; defaults to the available processors.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: Option<u64>,
    },
    /// Run the built-in self-check suites.
    Verify,
    /// Print the solution-space size and mask statistics of a config.
    Info {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Re-synthesize pattern artifacts from a saved solution.
    Export {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        solution: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoChoice {
    Sa,
    Ga,
    Pso,
    All,
}

impl AlgoChoice {
    fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgoChoice::Sa => vec![Algorithm::Sa],
            AlgoChoice::Ga => vec![Algorithm::Ga],
            AlgoChoice::Pso => vec![Algorithm::Pso],
            AlgoChoice::All => Algorithm::ALL.to_vec(),
        }
    }
}

type CliResult<T> = Result<T, String>;

fn config(path: Option<&Path>) -> CliResult<ExperimentConfig> {
    let mut cfg = match path {
        Some(p) => load_config(p).map_err(|e| e.to_string())?,
        None => ExperimentConfig::default(),
    };
    if let Ok(seed) = std::env::var("BEAM_SEED") {
        cfg.budget.base_seed = seed
            .trim()
            .parse()
            .map_err(|_| format!("BEAM_SEED: invalid seed `{seed}`"))?;
    }
    Ok(cfg)
}

fn cmd_run(
    cfg_path: Option<&Path>,
    algo: Option<AlgoChoice>,
    out: &Path,
    executions: Option<usize>,
    decimate: usize,
    jobs: Option<usize>,
) -> CliResult<()> {
    let mut cfg = config(cfg_path)?;
    if let Some(a) = algo {
        cfg.algorithms = a.algorithms();
    }
    if let Some(n) = executions {
        cfg.budget.executions = n;
    }
    let records = run_experiment(&cfg, jobs).map_err(|e| e.to_string())?;
    let stats = aggregate(&records).map_err(|e| e.to_string())?;
    let written = export_artifacts(&stats, &records, &cfg, out, decimate).map_err(|e| e.to_string())?;
    print!("{}", summary_table(&stats));
    println!("records: {}", records.len());
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_verify() -> CliResult<bool> {
    let reports = verify::run_all().map_err(|e| e.to_string())?;
    let mut all = true;
    for r in &reports {
        all &= r.passed;
        println!("{} {}", if r.passed { "PASS" } else { "FAIL" }, r.name);
        for d in &r.details {
            println!("    {d}");
        }
    }
    Ok(all)
}

fn cmd_info(cfg_path: Option<&Path>) -> CliResult<()> {
    let cfg = config(cfg_path)?;
    let setup = cfg.setup().map_err(|e| e.to_string())?;
    let a = &cfg.array;
    println!(
        "array: {}x{} elements, {}x{} subarrays of {}x{}",
        a.elements_x,
        a.elements_y,
        a.subarrays_x(),
        a.subarrays_y(),
        a.subarray_x,
        a.subarray_y
    );
    println!("groups: {}", setup.map.group_count());
    let free = setup.map.free_count();
    if free == 0 {
        println!("free dimensions: 0");
    } else {
        println!("free dimensions: {free}, space: {}^{free}", a.levels());
    }
    println!("grid size: {}", setup.grid().size());
    println!(
        "mainbeam bins: {}, sidelobe bins: {}",
        setup.mask.mainbeam_bins().len(),
        setup.mask.sidelobe_bins().len()
    );
    println!("beta: {}", setup.mask.beta());
    Ok(())
}

fn cmd_export(cfg_path: Option<&Path>, solution: &Path, out: &Path) -> CliResult<()> {
    let cfg = config(cfg_path)?;
    let setup = cfg.setup().map_err(|e| e.to_string())?;
    let sol = load_solution(solution, &setup.map, cfg.array.phase_bits).map_err(|e| e.to_string())?;
    std::fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;
    let mut written = Vec::new();
    export_solution(&sol, &cfg, out, &mut written).map_err(|e| e.to_string())?;
    let b = setup.objective().breakdown(&sol).map_err(|e| e.to_string())?;
    println!("cost: {:.6}, p_eff: {:.4}%", b.cost, b.p_eff);
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config, algo, out, executions, decimate, jobs } => cmd_run(
            config.as_deref(),
            algo,
            &out,
            executions,
            decimate as usize,
            jobs.map(|j| j as usize),
        )
        .map(|()| true),
        Command::Verify => cmd_verify(),
        Command::Info { config } => cmd_info(config.as_deref()).map(|()| true),
        Command::Export { config, solution, out } => {
            cmd_export(config.as_deref(), &solution, &out).map(|()| true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
