//! Flat-top desired mask and the log-error cost.
//!
//! Errors are one-sided squared dB differences: mainbeam bins are penalized
//! only below 0 dB, sidelobe bins only above the sidelobe level. The cost is
//! the natural log of the total error plus [`COST_EPSILON`].

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pattern::{to_db, MagnitudePattern, UVGrid};

/// Added to the total error inside the logarithm.
pub const COST_EPSILON: f64 = 1e-12;

pub const DEFAULT_BEAMWIDTH_DEG: f64 = 12.0;
pub const DEFAULT_SIDELOBE_DB: f64 = -13.0;

/// Region classification of the visible grid.
#[derive(Clone, Debug)]
pub struct DesiredMask {
    pub beamwidth_deg: f64,
    pub sidelobe_db: f64,
    pub transition_deg: f64,
    grid: Arc<UVGrid>,
    mainbeam: Vec<usize>,
    sidelobe: Vec<usize>,
}

impl DesiredMask {
    pub fn grid(&self) -> &Arc<UVGrid> {
        &self.grid
    }

    pub fn mainbeam_bins(&self) -> &[usize] {
        &self.mainbeam
    }

    pub fn sidelobe_bins(&self) -> &[usize] {
        &self.sidelobe
    }

    /// Number of bins that enter the error sums.
    pub fn beta(&self) -> usize {
        self.mainbeam.len() + self.sidelobe.len()
    }
}

/// Angle off boresight of a grid bin in degrees.
pub fn off_boresight_deg(grid: &UVGrid, idx: usize) -> f64 {
    let (u, v) = grid.uv(idx);
    (u * u + v * v).sqrt().min(1.0).asin().to_degrees()
}

pub fn build_mask(
    beamwidth_deg: f64,
    sidelobe_db: f64,
    transition_deg: f64,
    grid: Arc<UVGrid>,
) -> Result<DesiredMask> {
    if !(beamwidth_deg > 0.0 && beamwidth_deg < 180.0) {
        return Err(Error::config("beamwidth_deg", "beamwidth must lie in (0, 180)"));
    }
    if !(sidelobe_db < 0.0) {
        return Err(Error::config("sidelobe_db", "sidelobe level must be negative"));
    }
    if !(transition_deg >= 0.0 && transition_deg.is_finite()) {
        return Err(Error::config("transition_deg", "transition must be >= 0"));
    }

    let half = beamwidth_deg / 2.0;
    let mut mainbeam = Vec::new();
    let mut sidelobe = Vec::new();
    for &idx in grid.visible() {
        let angle = off_boresight_deg(&grid, idx);
        if angle <= half {
            mainbeam.push(idx);
        } else if angle > half + transition_deg {
            sidelobe.push(idx);
        }
    }
    if sidelobe.is_empty() {
        return Err(Error::config(
            "grid_size",
            "mask has no sidelobe bins on this grid",
        ));
    }
    Ok(DesiredMask {
        beamwidth_deg,
        sidelobe_db,
        transition_deg,
        grid,
        mainbeam,
        sidelobe,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostBreakdown {
    pub e_mb: f64,
    pub e_sl: f64,
    pub cost: f64,
    pub beta: usize,
    pub p_eff: f64,
}

/// Percentage pattern effectiveness of a cost over `beta` bins.
pub fn pattern_effectiveness(cost: f64, beta: usize) -> f64 {
    10f64.powf(-(cost.exp() / (beta as f64 * 100.0)).sqrt()) * 100.0
}

pub fn evaluate_cost(p: &MagnitudePattern, mask: &DesiredMask) -> Result<CostBreakdown> {
    if p.grid() != mask.grid().as_ref() {
        return Err(Error::Dimension(format!(
            "pattern grid {}@{} does not match mask grid {}@{}",
            p.grid().size(),
            p.grid().spacing(),
            mask.grid().size(),
            mask.grid().spacing()
        )));
    }
    Ok(breakdown(p.linear(), p.db_floor(), mask))
}

pub(crate) fn breakdown(linear: &[f64], db_floor: f64, mask: &DesiredMask) -> CostBreakdown {
    let (e_mb, e_sl) = errors(linear, db_floor, mask);
    let cost = (e_mb + e_sl + COST_EPSILON).ln();
    CostBreakdown {
        e_mb,
        e_sl,
        cost,
        beta: mask.beta(),
        p_eff: pattern_effectiveness(cost, mask.beta()),
    }
}

fn errors(linear: &[f64], db_floor: f64, mask: &DesiredMask) -> (f64, f64) {
    let mut e_mb = 0.0;
    for &idx in &mask.mainbeam {
        let m = linear[idx];
        if m < 1.0 {
            let db = to_db(m, db_floor);
            if db < 0.0 {
                e_mb += db * db;
            }
        }
    }

    // skip the logarithm for bins clearly under the ceiling
    let sll = mask.sidelobe_db;
    let screen = 10f64.powf(sll / 20.0) * (1.0 - 1e-9);
    let mut e_sl = 0.0;
    for &idx in &mask.sidelobe {
        let m = linear[idx];
        if m > screen {
            let db = to_db(m, db_floor);
            if db > sll {
                e_sl += (db - sll) * (db - sll);
            }
        }
    }
    (e_mb, e_sl)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Arc<UVGrid> {
        Arc::new(UVGrid::new(n, 0.5).unwrap())
    }

    /// Pattern that meets the mask exactly: 0 dB mainbeam, sidelobes at the ceiling.
    fn ideal(mask: &DesiredMask, sll_offset: f64) -> Vec<f64> {
        let n = mask.grid().size();
        let mut lin = vec![0.0; n * n];
        for &i in mask.mainbeam_bins() {
            lin[i] = 1.0;
        }
        for &i in mask.sidelobe_bins() {
            lin[i] = 10f64.powf((mask.sidelobe_db + sll_offset) / 20.0);
        }
        lin
    }

    #[test]
    fn mask_default_disc() {
        let g = grid(256);
        let m = build_mask(12.0, -13.0, 0.0, Arc::clone(&g)).unwrap();
        let r = 6f64.to_radians().sin();
        assert!((r - 0.10453).abs() < 1e-5);
        for &i in m.mainbeam_bins() {
            let (u, v) = g.uv(i);
            assert!((u * u + v * v).sqrt() <= r + 1e-12);
        }
        for &i in m.sidelobe_bins() {
            let (u, v) = g.uv(i);
            assert!((u * u + v * v).sqrt() > r - 1e-12);
        }
        assert!(m.mainbeam_bins().contains(&g.boresight()));
        assert_eq!(m.beta(), g.visible().len());
        // at least 26 bins across the flat top
        let across = m
            .mainbeam_bins()
            .iter()
            .filter(|&&i| g.uv(i).1 == 0.0)
            .count();
        assert!(across >= 26, "{across}");
    }

    #[test]
    fn mask_transition_band() {
        let g = grid(128);
        let m = build_mask(12.0, -13.0, 4.0, Arc::clone(&g)).unwrap();
        assert!(m.beta() < g.visible().len());
        let mut all: Vec<usize> = m.mainbeam_bins().iter().chain(m.sidelobe_bins()).copied().collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), m.beta());
    }

    #[test]
    fn mask_rejects_bad_parameters() {
        let g = grid(64);
        assert!(build_mask(0.0, -13.0, 0.0, Arc::clone(&g)).is_err());
        assert!(build_mask(180.0, -13.0, 0.0, Arc::clone(&g)).is_err());
        assert!(build_mask(12.0, 0.0, 0.0, Arc::clone(&g)).is_err());
        assert!(build_mask(12.0, -13.0, -1.0, g).is_err());
    }

    #[test]
    fn perfect_match_costs_epsilon() {
        let m = build_mask(12.0, -13.0, 0.0, grid(64)).unwrap();
        let b = breakdown(&ideal(&m, -0.5), -100.0, &m);
        assert_eq!((b.e_mb, b.e_sl), (0.0, 0.0));
        assert!((b.cost - (-27.631021115928547)).abs() < 1e-12);
        assert!(b.p_eff <= 100.0 && b.p_eff > 99.99);
    }

    #[test]
    fn single_mainbeam_bin_low() {
        let m = build_mask(12.0, -13.0, 0.0, grid(64)).unwrap();
        let mut lin = ideal(&m, -3.0);
        lin[m.mainbeam_bins()[0]] = 10f64.powf(-2.0 / 20.0);
        let b = breakdown(&lin, -100.0, &m);
        assert!((b.e_mb - 4.0).abs() < 1e-12);
        assert_eq!(b.e_sl, 0.0);
        assert!((b.cost - 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn single_sidelobe_bin_high() {
        let m = build_mask(12.0, -13.0, 0.0, grid(64)).unwrap();
        let mut lin = ideal(&m, -3.0);
        lin[m.sidelobe_bins()[10]] = 10f64.powf(-10.0 / 20.0);
        let b = breakdown(&lin, -100.0, &m);
        assert_eq!(b.e_mb, 0.0);
        assert!((b.e_sl - 9.0).abs() < 1e-12);
        assert!((b.cost - 9f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn floor_applies_to_nulls() {
        let m = build_mask(12.0, -13.0, 0.0, grid(64)).unwrap();
        let mut lin = ideal(&m, -3.0);
        lin[m.mainbeam_bins()[0]] = 0.0;
        let b = breakdown(&lin, -100.0, &m);
        assert_eq!(b.e_mb, 10_000.0);
    }

    #[test]
    fn effectiveness_formula() {
        assert!((pattern_effectiveness(-700.0, 1000) - 100.0).abs() < 1e-12);
        let beta = 51_468;
        let c = (beta as f64 * 100.0).ln();
        assert!((pattern_effectiveness(c, beta) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn grid_mismatch_is_error() {
        let m = build_mask(12.0, -13.0, 0.0, grid(64)).unwrap();
        let exc = crate::array::ElementExcitations::uniform(8, 8, 0.5);
        let p = crate::pattern::synthesize_fft(&exc, 32).unwrap();
        assert!(matches!(evaluate_cost(&p, &m), Err(Error::Dimension(_))));
        let p = crate::pattern::synthesize_fft(&exc, 64).unwrap();
        assert!(evaluate_cost(&p, &m).is_ok());
    }
}
