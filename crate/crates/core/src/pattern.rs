//! Far-field array factor over a direction-cosine grid.
//!
//! The FFT path zero-pads the excitation lattice to `size × size`, applies an
//! inverse 2D DFT and rotates the quadrants so boresight lands on bin
//! `(size/2, size/2)`. Bin `i` along either axis maps to the direction cosine
//! `(i - size/2) / (size * spacing)`. Only the visible region `u² + v² ≤ 1` is
//! kept; invisible bins are zeroed and the pattern is normalized to a unit
//! peak over the visible bins.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::array::ElementExcitations;
use crate::error::{Error, Result};

pub const DEFAULT_DB_FLOOR: f64 = -100.0;

/// Default FFT size per axis.
pub const DEFAULT_GRID_SIZE: usize = 256;

/// Square u-v sampling grid. Flat bin index is `v_index * size + u_index`.
#[derive(Clone, Debug)]
pub struct UVGrid {
    size: usize,
    spacing: f64,
    visible: Vec<usize>,
}

impl PartialEq for UVGrid {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.spacing == other.spacing
    }
}

impl UVGrid {
    pub fn new(size: usize, spacing: f64) -> Result<Self> {
        if size < 2 || !size.is_power_of_two() {
            return Err(Error::config(
                "grid_size",
                format!("grid size {size} must be a power of two >= 2"),
            ));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::config("spacing", "spacing must be positive"));
        }
        let mut grid = Self {
            size,
            spacing,
            visible: Vec::new(),
        };
        grid.visible = (0..size * size)
            .filter(|&idx| {
                let (u, v) = grid.uv(idx);
                u * u + v * v <= 1.0
            })
            .collect();
        Ok(grid)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Direction cosine of bin `i` along either axis.
    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 - (self.size / 2) as f64) / (self.size as f64 * self.spacing)
    }

    pub fn uv(&self, idx: usize) -> (f64, f64) {
        (self.coord(idx % self.size), self.coord(idx / self.size))
    }

    pub fn index(&self, u_index: usize, v_index: usize) -> usize {
        v_index * self.size + u_index
    }

    pub fn boresight(&self) -> usize {
        self.index(self.size / 2, self.size / 2)
    }

    pub fn is_visible(&self, idx: usize) -> bool {
        let (u, v) = self.uv(idx);
        u * u + v * v <= 1.0
    }

    /// Flat indices of visible bins in ascending order.
    pub fn visible(&self) -> &[usize] {
        &self.visible
    }
}

/// Normalized magnitude of the array factor; zero outside the visible region.
#[derive(Clone, Debug)]
pub struct MagnitudePattern {
    grid: Arc<UVGrid>,
    linear: Vec<f64>,
    db_floor: f64,
}

impl MagnitudePattern {
    pub fn grid(&self) -> &UVGrid {
        &self.grid
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn db_floor(&self) -> f64 {
        self.db_floor
    }

    pub fn db_at(&self, idx: usize) -> f64 {
        to_db(self.linear[idx], self.db_floor)
    }

    pub fn db(&self) -> Vec<f64> {
        self.linear.iter().map(|&m| to_db(m, self.db_floor)).collect()
    }

    pub fn with_db_floor(mut self, floor: f64) -> Self {
        self.db_floor = floor;
        self
    }

    /// Flat index of the strongest visible bin (first on ties).
    pub fn peak_index(&self) -> usize {
        let mut best = self.grid.boresight();
        for &idx in self.grid.visible() {
            if self.linear[idx] > self.linear[best] {
                best = idx;
            }
        }
        best
    }
}

/// `20 log10(linear)` clamped below at `floor`.
pub fn to_db(linear: f64, floor: f64) -> f64 {
    if linear <= 0.0 {
        return floor;
    }
    (20.0 * linear.log10()).max(floor)
}

/// Reusable FFT plan and scratch buffers for one worker.
pub struct Synthesizer {
    grid: Arc<UVGrid>,
    fft: Arc<dyn Fft<f64>>,
    rows: Vec<Complex64>,
    /// Column-major copy of the row transforms, zero-padded along y.
    columns: Vec<Complex64>,
    scratch: Vec<Complex64>,
    /// Visible `v_index` range `[lo, hi)` for every `u_index`.
    visible_rows: Vec<(usize, usize)>,
    pattern: MagnitudePattern,
}

impl Synthesizer {
    pub fn new(grid: Arc<UVGrid>, db_floor: f64) -> Self {
        let n = grid.size();
        let fft = FftPlanner::new().plan_fft_inverse(n);
        let scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        let mut visible_rows = vec![(0, 0); n];
        for &idx in grid.visible() {
            let (ui, vi) = (idx % n, idx / n);
            let r = &mut visible_rows[ui];
            if r.1 == 0 {
                *r = (vi, vi + 1);
            } else {
                r.1 = vi + 1;
            }
        }
        Self {
            fft,
            rows: Vec::new(),
            columns: vec![Complex64::default(); n * n],
            scratch,
            visible_rows,
            pattern: MagnitudePattern {
                linear: vec![0.0; n * n],
                grid: Arc::clone(&grid),
                db_floor,
            },
            grid,
        }
    }

    pub fn grid(&self) -> &Arc<UVGrid> {
        &self.grid
    }

    pub fn synthesize(&mut self, exc: &ElementExcitations) -> Result<&MagnitudePattern> {
        if exc.spacing != self.grid.spacing() {
            return Err(Error::Dimension(format!(
                "excitation spacing {} differs from grid spacing {}",
                exc.spacing,
                self.grid.spacing()
            )));
        }
        self.synthesize_weights(&exc.weights, exc.elements_x, exc.elements_y)
    }

    /// Row-major weights on an `elements_x × elements_y` lattice.
    pub(crate) fn synthesize_weights(
        &mut self,
        weights: &[Complex64],
        elements_x: usize,
        elements_y: usize,
    ) -> Result<&MagnitudePattern> {
        let n = self.grid.size();
        if elements_x > n || elements_y > n {
            return Err(Error::Dimension(format!(
                "grid size {n} smaller than {elements_x}x{elements_y} array"
            )));
        }
        debug_assert_eq!(weights.len(), elements_x * elements_y);

        // transform the populated rows along x
        self.rows.clear();
        self.rows.resize(elements_y * n, Complex64::default());
        for (row, src) in self.rows.chunks_exact_mut(n).zip(weights.chunks_exact(elements_x)) {
            row[..elements_x].copy_from_slice(src);
        }
        self.fft.process_with_scratch(&mut self.rows, &mut self.scratch);

        // transpose into columns; rows past elements_y stay zero
        for (col, column) in self.columns.chunks_exact_mut(n).enumerate() {
            for (dst, row) in column.iter_mut().zip(self.rows.chunks_exact(n)) {
                *dst = row[col];
            }
            column[elements_y..].fill(Complex64::default());
        }
        self.fft.process_with_scratch(&mut self.columns, &mut self.scratch);

        // quadrant-swapped magnitudes over the visible region only
        let half = n / 2;
        let linear = &mut self.pattern.linear;
        let mut peak = 0.0f64;
        for (col, column) in self.columns.chunks_exact(n).enumerate() {
            let u_index = (col + half) % n;
            let (lo, hi) = self.visible_rows[u_index];
            for v_index in lo..hi {
                let m = column[(v_index + half) % n].norm_sqr().sqrt();
                linear[v_index * n + u_index] = m;
                peak = peak.max(m);
            }
        }
        if !(peak > 0.0) {
            return Err(Error::Degenerate("array factor vanishes over the visible region".into()));
        }
        for &idx in self.grid.visible() {
            linear[idx] /= peak;
        }
        Ok(&self.pattern)
    }
}

/// FFT synthesis on a fresh `size × size` grid.
pub fn synthesize_fft(exc: &ElementExcitations, size: usize) -> Result<MagnitudePattern> {
    if size < exc.elements_x.max(exc.elements_y) {
        return Err(Error::Dimension(format!(
            "grid size {size} smaller than {}x{} array",
            exc.elements_x, exc.elements_y
        )));
    }
    let grid = Arc::new(UVGrid::new(size, exc.spacing)?);
    let mut synth = Synthesizer::new(grid, DEFAULT_DB_FLOOR);
    synth.synthesize(exc).cloned()
}

/// Array factor by direct summation at arbitrary `(u, v)` points, normalized
/// to the largest magnitude among those points.
pub fn synthesize_direct(exc: &ElementExcitations, points: &[(f64, f64)]) -> Result<Vec<f64>> {
    if exc.weights.iter().all(|w| *w == Complex64::default()) {
        return Err(Error::Degenerate("all excitations are zero".into()));
    }
    let (ex, ey) = (exc.elements_x, exc.elements_y);
    let cx = (ex as f64 - 1.0) / 2.0;
    let cy = (ey as f64 - 1.0) / 2.0;
    let k = 2.0 * PI * exc.spacing;

    let mut eu = vec![Complex64::default(); ex];
    let mut mags = Vec::with_capacity(points.len());
    for &(u, v) in points {
        for (m, e) in eu.iter_mut().enumerate() {
            *e = Complex64::cis(k * (m as f64 - cx) * u);
        }
        let mut sum = Complex64::default();
        for (n, row) in exc.weights.chunks_exact(ex).enumerate() {
            let inner: Complex64 = row.iter().zip(&eu).map(|(w, e)| w * e).sum();
            sum += inner * Complex64::cis(k * (n as f64 - cy) * v);
        }
        mags.push(sum.norm());
    }

    let peak = mags.iter().copied().fold(0.0f64, f64::max);
    if !(peak > 0.0) {
        return Err(Error::Degenerate("array factor vanishes at every point".into()));
    }
    mags.iter_mut().for_each(|m| *m /= peak);
    Ok(mags)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutAxis {
    U,
    V,
}

impl CutAxis {
    pub fn name(self) -> &'static str {
        match self {
            CutAxis::U => "u",
            CutAxis::V => "v",
        }
    }
}

/// Principal-plane cut through boresight as `(angle_deg, db)` pairs, visible
/// bins only, in ascending angle.
pub fn extract_cut(p: &MagnitudePattern, axis: CutAxis) -> Vec<(f64, f64)> {
    let grid = p.grid();
    let n = grid.size();
    let center = n / 2;
    (0..n)
        .map(|i| match axis {
            CutAxis::U => grid.index(i, center),
            CutAxis::V => grid.index(center, i),
        })
        .filter(|&idx| grid.is_visible(idx))
        .map(|idx| {
            let (u, v) = grid.uv(idx);
            let c = if axis == CutAxis::U { u } else { v };
            (c.asin().to_degrees(), p.db_at(idx))
        })
        .collect()
}
