//! The beam-broadening cost: expand group phases, synthesize, score.

use std::sync::Arc;

use num_complex::Complex64;

use crate::array::{
    build_symmetry_map, element_groups, level_phasors, ArrayConfig, ElementExcitations,
    PhaseSolution, SymmetryMap,
};
use crate::cost::{breakdown, build_mask, CostBreakdown, DesiredMask};
use crate::error::{Error, Result};
use crate::optim::Objective;
use crate::pattern::{MagnitudePattern, Synthesizer, UVGrid};

/// Everything needed to score a phase solution, shareable across workers.
#[derive(Clone, Debug)]
pub struct BeamSetup {
    pub array: ArrayConfig,
    pub map: SymmetryMap,
    pub mask: DesiredMask,
    pub db_floor: f64,
    element_groups: Arc<Vec<usize>>,
}

impl BeamSetup {
    pub fn new(
        array: ArrayConfig,
        grid_size: usize,
        beamwidth_deg: f64,
        sidelobe_db: f64,
        transition_deg: f64,
        db_floor: f64,
    ) -> Result<Self> {
        let map = build_symmetry_map(&array)?;
        if grid_size < array.elements_x.max(array.elements_y) {
            return Err(Error::config(
                "grid_size",
                format!(
                    "grid size {grid_size} smaller than {}x{} array",
                    array.elements_x, array.elements_y
                ),
            ));
        }
        if !(db_floor < 0.0) {
            return Err(Error::config("db_floor", "floor must be negative"));
        }
        let grid = Arc::new(UVGrid::new(grid_size, array.spacing)?);
        let mask = build_mask(beamwidth_deg, sidelobe_db, transition_deg, grid)?;
        let element_groups = Arc::new(element_groups(&map, &array));
        Ok(Self {
            array,
            map,
            mask,
            db_floor,
            element_groups,
        })
    }

    pub fn grid(&self) -> &Arc<UVGrid> {
        self.mask.grid()
    }

    pub fn objective(&self) -> BeamObjective {
        BeamObjective::new(self.clone())
    }
}

/// Per-worker cost evaluator.
pub struct BeamObjective {
    setup: BeamSetup,
    synth: Synthesizer,
    phasors: Vec<Complex64>,
    group_weights: Vec<Complex64>,
    weights: Vec<Complex64>,
}

impl BeamObjective {
    pub fn new(setup: BeamSetup) -> Self {
        let synth = Synthesizer::new(Arc::clone(setup.grid()), setup.db_floor);
        let phasors = level_phasors(setup.array.phase_bits);
        let weights = vec![Complex64::default(); setup.array.element_count()];
        Self {
            group_weights: vec![Complex64::default(); setup.map.group_count()],
            synth,
            phasors,
            weights,
            setup,
        }
    }

    pub fn setup(&self) -> &BeamSetup {
        &self.setup
    }

    fn load_weights(&mut self, phases: &[u16]) -> Result<()> {
        if phases.len() != self.setup.map.free_count() {
            return Err(Error::Dimension(format!(
                "solution has {} phases, expected {}",
                phases.len(),
                self.setup.map.free_count()
            )));
        }
        self.group_weights[0] = self.phasors[0];
        for (slot, &q) in self.group_weights[1..].iter_mut().zip(phases) {
            *slot = *self.phasors.get(q as usize).ok_or_else(|| {
                Error::Dimension(format!("phase index {q} outside 0..{}", self.phasors.len()))
            })?;
        }
        for (w, &g) in self.weights.iter_mut().zip(self.setup.element_groups.iter()) {
            *w = self.group_weights[g];
        }
        Ok(())
    }

    fn synthesize(&mut self, phases: &[u16]) -> Result<&MagnitudePattern> {
        self.load_weights(phases)?;
        let a = &self.setup.array;
        self.synth
            .synthesize_weights(&self.weights, a.elements_x, a.elements_y)
    }

    fn score(&mut self, phases: &[u16]) -> Result<CostBreakdown> {
        self.load_weights(phases)?;
        let a = &self.setup.array;
        let p = self
            .synth
            .synthesize_weights(&self.weights, a.elements_x, a.elements_y)?;
        Ok(breakdown(p.linear(), self.setup.db_floor, &self.setup.mask))
    }

    pub fn pattern(&mut self, sol: &PhaseSolution) -> Result<MagnitudePattern> {
        self.synthesize(sol.as_slice()).cloned()
    }

    pub fn breakdown(&mut self, sol: &PhaseSolution) -> Result<CostBreakdown> {
        self.score(sol.as_slice())
    }

    pub fn excitations(&self, sol: &PhaseSolution) -> Result<ElementExcitations> {
        crate::array::expand_solution(sol, &self.setup.map, &self.setup.array)
    }
}

impl Objective for BeamObjective {
    fn dimension(&self) -> usize {
        self.setup.map.free_count()
    }

    fn phase_bits(&self) -> u32 {
        self.setup.array.phase_bits
    }

    fn cost(&mut self, phases: &[u16]) -> f64 {
        match self.score(phases) {
            Ok(b) => b.cost,
            // every unit-amplitude array radiates somewhere in the visible region
            Err(e) => panic!("cost evaluation failed: {e}"),
        }
    }
}
