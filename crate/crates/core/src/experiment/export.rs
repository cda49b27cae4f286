//! CSV artifacts of an experiment.
//!
//! Floating-point fields are written with 17 significant digits so every
//! value parses back to the identical `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use super::runner::RunRecord;
use super::stats::AggregateStats;
use crate::array::{dequantize_phase, element_groups, PhaseSolution, SymmetryMap};
use crate::error::{Error, Result};
use crate::pattern::{extract_cut, CutAxis, MagnitudePattern};

pub const CURVES_CSV: &str = "curves.csv";
pub const MEAN_CURVES_CSV: &str = "mean_curves.csv";
pub const BEST_SOLUTION_CSV: &str = "best_solution.csv";
pub const PATTERN_CSV: &str = "pattern.csv";
pub const CUTS_CSV: &str = "cuts.csv";
pub const ELEMENT_PHASES_CSV: &str = "element_phases.csv";
pub const SUMMARY_CSV: &str = "summary.csv";

/// Round-trip exact float formatting.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Evaluation indices (1-based) kept when decimating a curve of `len` points:
/// every `step`-th index plus the last one.
pub fn decimated_indices(len: usize, step: usize) -> impl Iterator<Item = usize> {
    let step = step.max(1);
    (1..=len).filter(move |&i| i % step == 0 || i == len)
}

fn write_file(dir: &Path, name: &str, body: &str, manifest: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    manifest.push(path);
    Ok(())
}

pub fn curves_csv(records: &[RunRecord], decimate: usize) -> String {
    let mut out = String::from("algorithm,execution,seed,eval_index,best_cost\n");
    for r in records {
        let curve = &r.curve.best_costs;
        for i in decimated_indices(curve.len(), decimate) {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.algorithm,
                r.execution,
                r.seed,
                i,
                fmt_f64(curve[i - 1])
            );
        }
    }
    out
}

pub fn mean_curves_csv(stats: &AggregateStats, decimate: usize) -> String {
    let mut out = String::from("algorithm,eval_index,mean_best_cost\n");
    for s in &stats.algorithms {
        for i in decimated_indices(s.mean_curve.len(), decimate) {
            let _ = writeln!(out, "{},{},{}", s.algorithm, i, fmt_f64(s.mean_curve[i - 1]));
        }
    }
    out
}

/// Free group phases; `group_id` counts from 1 since group 0 is pinned.
pub fn solution_csv(sol: &PhaseSolution, bits: u32) -> String {
    let mut out = String::from("group_id,phase_index,phase_deg\n");
    for (k, &q) in sol.0.iter().enumerate() {
        let _ = writeln!(out, "{},{},{}", k + 1, q, fmt_f64(dequantize_phase(q, bits)));
    }
    out
}

pub fn parse_solution_csv(text: &str, map: &SymmetryMap, bits: u32) -> Result<PhaseSolution> {
    let origin = Path::new(BEST_SOLUTION_CSV);
    let mut phases = vec![None; map.free_count()];
    for (lineno, line) in text.lines().enumerate().skip(1) {
        let err = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line: lineno + 1,
            message,
        };
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [group, index, _deg] = fields[..] else {
            return Err(err(format!("expected 3 fields, found {}", fields.len())));
        };
        let group: usize = group.parse().map_err(|_| err(format!("bad group_id `{group}`")))?;
        let index: u16 = index.parse().map_err(|_| err(format!("bad phase_index `{index}`")))?;
        if group == 0 || group > map.free_count() {
            return Err(err(format!("group_id {group} outside 1..={}", map.free_count())));
        }
        if u32::from(index) >= 1 << bits {
            return Err(err(format!("phase_index {index} outside 0..{}", 1u32 << bits)));
        }
        phases[group - 1] = Some(index);
    }
    let phases: Option<Vec<u16>> = phases.into_iter().collect();
    phases
        .map(PhaseSolution)
        .ok_or_else(|| Error::Dimension("solution file does not cover every free group".into()))
}

pub fn load_solution(path: impl AsRef<Path>, map: &SymmetryMap, bits: u32) -> Result<PhaseSolution> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_solution_csv(&text, map, bits)
}

/// Per-element phases from the quantized group phases, so elements of one
/// group carry bit-identical values.
pub fn element_phases_csv(sol: &PhaseSolution, cfg: &ExperimentConfig, map: &SymmetryMap) -> String {
    let bits = cfg.array.phase_bits;
    let group_deg: Vec<f64> = sol
        .group_phases()
        .iter()
        .map(|&q| dequantize_phase(q, bits))
        .collect();
    let groups = element_groups(map, &cfg.array);
    let mut out = String::from("row,col,phase_deg\n");
    for (idx, g) in groups.iter().enumerate() {
        let (row, col) = (idx / cfg.array.elements_x, idx % cfg.array.elements_x);
        let _ = writeln!(out, "{row},{col},{}", fmt_f64(group_deg[*g]));
    }
    out
}

/// Azimuth/elevation of a direction-cosine pair, with `v = sin(el)` and
/// `u = cos(el) sin(az)`.
pub fn az_el_deg(u: f64, v: f64) -> (f64, f64) {
    let w = (1.0 - u * u - v * v).max(0.0).sqrt();
    (u.atan2(w).to_degrees(), v.clamp(-1.0, 1.0).asin().to_degrees())
}

pub fn pattern_csv(p: &MagnitudePattern) -> String {
    let grid = p.grid();
    let mut out = String::from("u,v,az_deg,el_deg,mag_db\n");
    for &idx in grid.visible() {
        let (u, v) = grid.uv(idx);
        let (az, el) = az_el_deg(u, v);
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(u),
            fmt_f64(v),
            fmt_f64(az),
            fmt_f64(el),
            fmt_f64(p.db_at(idx))
        );
    }
    out
}

pub fn cuts_csv(p: &MagnitudePattern) -> String {
    let mut out = String::from("axis,angle_deg,mag_db\n");
    for axis in [CutAxis::U, CutAxis::V] {
        for (angle, db) in extract_cut(p, axis) {
            let _ = writeln!(out, "{},{},{}", axis.name(), fmt_f64(angle), fmt_f64(db));
        }
    }
    out
}

pub fn summary_csv(stats: &AggregateStats) -> String {
    let mut out =
        String::from("algorithm,executions,best_cost,mean_final_cost,std_final_cost,best_p_eff\n");
    for s in &stats.algorithms {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            s.algorithm,
            s.executions,
            fmt_f64(s.best_cost),
            fmt_f64(s.mean_final_cost),
            fmt_f64(s.std_final_cost),
            fmt_f64(s.best_p_eff)
        );
    }
    out
}

/// Writes the solution-dependent artifacts (solution, pattern, cuts, element
/// phases) for `sol`.
pub fn export_solution(
    sol: &PhaseSolution,
    cfg: &ExperimentConfig,
    out_dir: &Path,
    manifest: &mut Vec<PathBuf>,
) -> Result<()> {
    let setup = cfg.setup()?;
    let pattern = setup.objective().pattern(sol)?;
    write_file(out_dir, BEST_SOLUTION_CSV, &solution_csv(sol, cfg.array.phase_bits), manifest)?;
    write_file(out_dir, PATTERN_CSV, &pattern_csv(&pattern), manifest)?;
    write_file(out_dir, CUTS_CSV, &cuts_csv(&pattern), manifest)?;
    write_file(
        out_dir,
        ELEMENT_PHASES_CSV,
        &element_phases_csv(sol, cfg, &setup.map),
        manifest,
    )?;
    Ok(())
}

/// Writes every artifact into `out_dir` and returns the written paths. The
/// pattern, cuts and element phases describe the lowest-cost run overall.
pub fn export_artifacts(
    stats: &AggregateStats,
    records: &[RunRecord],
    cfg: &ExperimentConfig,
    out_dir: impl AsRef<Path>,
    decimate: usize,
) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut manifest = Vec::new();
    write_file(out_dir, CURVES_CSV, &curves_csv(records, decimate), &mut manifest)?;
    write_file(out_dir, MEAN_CURVES_CSV, &mean_curves_csv(stats, decimate), &mut manifest)?;
    let best = stats
        .overall_best()
        .and_then(|i| records.get(i))
        .ok_or_else(|| Error::Aggregate("no best record to export".into()))?;
    export_solution(best.solution(), cfg, out_dir, &mut manifest)?;
    write_file(out_dir, SUMMARY_CSV, &summary_csv(stats), &mut manifest)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::build_symmetry_map;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, -27.631021115928547, 1.0 / 3.0, 95.625, 1e-300, 12345.678901234567] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn decimation_keeps_last() {
        let v: Vec<usize> = decimated_indices(25, 10).collect();
        assert_eq!(v, vec![10, 20, 25]);
        let v: Vec<usize> = decimated_indices(3, 1).collect();
        assert_eq!(v, vec![1, 2, 3]);
    }

    #[test]
    fn solution_csv_round_trip() {
        let cfg = ExperimentConfig::default();
        let map = build_symmetry_map(&cfg.array).unwrap();
        let sol = PhaseSolution(vec![0, 63, 17, 5, 9, 32, 1, 2]);
        let text = solution_csv(&sol, 6);
        assert!(text.starts_with("group_id,phase_index,phase_deg\n"));
        assert_eq!(parse_solution_csv(&text, &map, 6).unwrap(), sol);
        let partial: String = text.lines().take(4).map(|l| format!("{l}\n")).collect();
        assert!(parse_solution_csv(&partial, &map, 6).is_err());
        assert!(parse_solution_csv("h\n9,1,0\n", &map, 6).is_err());
        assert!(parse_solution_csv("h\n1,64,0\n", &map, 6).is_err());
    }

    #[test]
    fn az_el_on_axes() {
        assert_eq!(az_el_deg(0.0, 0.0), (0.0, 0.0));
        let (az, el) = az_el_deg(0.5, 0.0);
        assert!((az - 30.0).abs() < 1e-12 && el == 0.0);
        let (az, el) = az_el_deg(0.0, -0.5);
        assert!(az == 0.0 && (el + 30.0).abs() < 1e-12);
    }

    #[test]
    fn element_phase_rows() {
        let cfg = ExperimentConfig::default();
        let map = build_symmetry_map(&cfg.array).unwrap();
        let text = element_phases_csv(&PhaseSolution(vec![1; 8]), &cfg, &map);
        assert_eq!(text.lines().count(), 1601);
    }
}
