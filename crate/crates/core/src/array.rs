//! Array geometry, subarray grouping and phase quantization.
//!
//! A planar array of `elements_x × elements_y` isotropic elements is tiled by
//! contiguous, equal-sized subarrays. Every element of a subarray shares the
//! subarray's phase, and subarrays whose centers sit at the same distance from
//! the array center share one phase setting (a *group*). The innermost group is
//! pinned to zero phase, so only `group_count - 1` phases are free.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported phase-shifter width; indices are stored as `u16`.
pub const MAX_PHASE_BITS: u32 = 16;

/// Geometry and control resolution of a subarrayed planar array.
#[derive(Clone, Debug, PartialEq)]
pub struct ArrayConfig {
    pub elements_x: usize,
    pub elements_y: usize,
    pub subarray_x: usize,
    pub subarray_y: usize,
    /// Element pitch in wavelengths.
    pub spacing: f64,
    pub phase_bits: u32,
}

impl Default for ArrayConfig {
    /// 40×40 elements in 5×5 subarrays, half-wavelength pitch, 6-bit shifters.
    fn default() -> Self {
        Self {
            elements_x: 40,
            elements_y: 40,
            subarray_x: 5,
            subarray_y: 5,
            spacing: 0.5,
            phase_bits: 6,
        }
    }
}

impl ArrayConfig {
    pub fn new(
        elements: (usize, usize),
        subarray: (usize, usize),
        spacing: f64,
        phase_bits: u32,
    ) -> Result<Self> {
        let cfg = Self {
            elements_x: elements.0,
            elements_y: elements.1,
            subarray_x: subarray.0,
            subarray_y: subarray.1,
            spacing,
            phase_bits,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.elements_x == 0 || self.elements_y == 0 {
            return Err(Error::config("elements_x", "array must contain elements"));
        }
        if self.subarray_x == 0 || self.subarray_y == 0 {
            return Err(Error::config("subarray_x", "subarrays must contain elements"));
        }
        if self.elements_x % self.subarray_x != 0 {
            return Err(Error::config("elements_x", "subarrays do not tile"));
        }
        if self.elements_y % self.subarray_y != 0 {
            return Err(Error::config("elements_y", "subarrays do not tile"));
        }
        if !(self.spacing > 0.0 && self.spacing.is_finite()) {
            return Err(Error::config("spacing", "spacing must be positive"));
        }
        if self.phase_bits == 0 || self.phase_bits > MAX_PHASE_BITS {
            return Err(Error::config(
                "phase_bits",
                format!("phase_bits must be in 1..={MAX_PHASE_BITS}"),
            ));
        }
        Ok(())
    }

    pub fn subarrays_x(&self) -> usize {
        self.elements_x / self.subarray_x
    }

    pub fn subarrays_y(&self) -> usize {
        self.elements_y / self.subarray_y
    }

    pub fn subarray_count(&self) -> usize {
        self.subarrays_x() * self.subarrays_y()
    }

    pub fn element_count(&self) -> usize {
        self.elements_x * self.elements_y
    }

    /// Number of quantized phase levels, `2^phase_bits`.
    pub fn levels(&self) -> u32 {
        1 << self.phase_bits
    }
}

/// Phase step of a `bits`-wide shifter in degrees.
pub fn phase_step_deg(bits: u32) -> f64 {
    360.0 / f64::from(1u32 << bits)
}

/// Nearest quantization level of `phase_deg`, wrapped into `[0, 2^bits)`.
/// Exact half-steps round up.
pub fn quantize_phase(phase_deg: f64, bits: u32) -> u16 {
    let levels = 1i64 << bits;
    let nearest = (phase_deg / phase_step_deg(bits) + 0.5).floor() as i64;
    nearest.rem_euclid(levels) as u16
}

pub fn dequantize_phase(index: u16, bits: u32) -> f64 {
    f64::from(index) * phase_step_deg(bits)
}

/// Assignment of subarrays to distance-equivalence groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryMap {
    subarrays_x: usize,
    subarrays_y: usize,
    /// Group id per subarray, row-major over the subarray grid (`sy * subarrays_x + sx`).
    group_of: Vec<usize>,
    /// Distance key (`4 × squared center offset` in element pitches) per group.
    group_keys: Vec<u64>,
}

impl SymmetryMap {
    /// Id of the group pinned to zero phase (minimum center distance).
    pub const FIXED_GROUP: usize = 0;

    pub fn group_of(&self, subarray_x: usize, subarray_y: usize) -> usize {
        self.group_of[subarray_y * self.subarrays_x + subarray_x]
    }

    /// Group ids in row-major subarray order.
    pub fn groups(&self) -> &[usize] {
        &self.group_of
    }

    pub fn group_count(&self) -> usize {
        self.group_keys.len()
    }

    /// Dimension of the search space.
    pub fn free_count(&self) -> usize {
        self.group_keys.len().saturating_sub(1)
    }

    pub fn fixed_group(&self) -> usize {
        Self::FIXED_GROUP
    }

    pub fn group_keys(&self) -> &[u64] {
        &self.group_keys
    }

    pub fn subarrays_x(&self) -> usize {
        self.subarrays_x
    }

    pub fn subarrays_y(&self) -> usize {
        self.subarrays_y
    }

    /// Number of subarrays in each group.
    pub fn group_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.group_count()];
        for &g in &self.group_of {
            sizes[g] += 1;
        }
        sizes
    }
}

/// Groups subarrays by the squared distance of their centers from the array
/// center.
///
/// Offsets are measured in half element pitches, so every squared distance is
/// an integer and equal distances compare exactly.
pub fn build_symmetry_map(config: &ArrayConfig) -> Result<SymmetryMap> {
    config.validate()?;
    let (nx, ny) = (config.subarrays_x(), config.subarrays_y());

    let key = |sx: usize, sy: usize| -> u64 {
        let dx = (2 * sx as i64 - (nx as i64 - 1)) * config.subarray_x as i64;
        let dy = (2 * sy as i64 - (ny as i64 - 1)) * config.subarray_y as i64;
        (dx * dx + dy * dy) as u64
    };

    let mut ids = BTreeMap::new();
    for sy in 0..ny {
        for sx in 0..nx {
            ids.insert(key(sx, sy), 0usize);
        }
    }
    for (id, slot) in ids.values_mut().enumerate() {
        *slot = id;
    }

    let mut group_of = Vec::with_capacity(nx * ny);
    for sy in 0..ny {
        for sx in 0..nx {
            group_of.push(ids[&key(sx, sy)]);
        }
    }

    Ok(SymmetryMap {
        subarrays_x: nx,
        subarrays_y: ny,
        group_of,
        group_keys: ids.into_keys().collect(),
    })
}

/// Free group phases as quantization indices. Entry `k` drives group `k + 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PhaseSolution(pub Vec<u16>);

impl PhaseSolution {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.0
    }

    pub fn degrees(&self, bits: u32) -> Vec<f64> {
        self.0.iter().map(|&q| dequantize_phase(q, bits)).collect()
    }

    /// Phase index of every group, including the pinned one.
    pub fn group_phases(&self) -> Vec<u16> {
        std::iter::once(0).chain(self.0.iter().copied()).collect()
    }
}

impl From<Vec<u16>> for PhaseSolution {
    fn from(v: Vec<u16>) -> Self {
        Self(v)
    }
}

/// Uniformly random solution.
pub fn random_solution<R: Rng + ?Sized>(rng: &mut R, map: &SymmetryMap, bits: u32) -> PhaseSolution {
    let levels = 1u32 << bits;
    PhaseSolution(
        (0..map.free_count())
            .map(|_| rng.gen_range(0..levels) as u16)
            .collect(),
    )
}

/// Unit-amplitude complex weights on the element lattice, row-major
/// (`row * elements_x + col`, rows along y).
#[derive(Clone, Debug, PartialEq)]
pub struct ElementExcitations {
    pub elements_x: usize,
    pub elements_y: usize,
    pub spacing: f64,
    pub weights: Vec<Complex64>,
}

impl ElementExcitations {
    pub fn uniform(elements_x: usize, elements_y: usize, spacing: f64) -> Self {
        Self {
            elements_x,
            elements_y,
            spacing,
            weights: vec![Complex64::new(1.0, 0.0); elements_x * elements_y],
        }
    }

    pub fn weight(&self, row: usize, col: usize) -> Complex64 {
        self.weights[row * self.elements_x + col]
    }

    /// Element phases in degrees, wrapped into `[0, 360)`.
    pub fn phases_deg(&self) -> Vec<f64> {
        self.weights
            .iter()
            .map(|w| w.arg().to_degrees().rem_euclid(360.0))
            .collect()
    }
}

/// Group id of every element, row-major over the element lattice.
pub fn element_groups(map: &SymmetryMap, config: &ArrayConfig) -> Vec<usize> {
    let mut out = Vec::with_capacity(config.element_count());
    for row in 0..config.elements_y {
        for col in 0..config.elements_x {
            out.push(map.group_of(col / config.subarray_x, row / config.subarray_y));
        }
    }
    out
}

/// Unit phasor for every quantization level.
pub(crate) fn level_phasors(bits: u32) -> Vec<Complex64> {
    let levels = 1u32 << bits;
    (0..levels)
        .map(|q| {
            // exact on the axes so 0/90/180/270 degrees carry no rounding noise
            match (4 * q) % levels {
                0 => match 4 * q / levels {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                },
                _ => Complex64::from_polar(1.0, 2.0 * PI * f64::from(q) / f64::from(levels)),
            }
        })
        .collect()
}

pub fn expand_solution(
    sol: &PhaseSolution,
    map: &SymmetryMap,
    config: &ArrayConfig,
) -> Result<ElementExcitations> {
    if sol.len() != map.free_count() {
        return Err(Error::Dimension(format!(
            "solution has {} phases, symmetry map has {} free groups",
            sol.len(),
            map.free_count()
        )));
    }
    let levels = config.levels();
    if let Some(&bad) = sol.0.iter().find(|&&q| u32::from(q) >= levels) {
        return Err(Error::Dimension(format!(
            "phase index {bad} outside 0..{levels}"
        )));
    }
    let phasors = level_phasors(config.phase_bits);
    let group_weights: Vec<Complex64> = sol
        .group_phases()
        .iter()
        .map(|&q| phasors[q as usize])
        .collect();
    let weights = element_groups(map, config)
        .into_iter()
        .map(|g| group_weights[g])
        .collect();
    Ok(ElementExcitations {
        elements_x: config.elements_x,
        elements_y: config.elements_y,
        spacing: config.spacing,
        weights,
    })
}
