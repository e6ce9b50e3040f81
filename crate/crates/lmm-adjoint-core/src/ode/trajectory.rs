use alloc::vec;
use alloc::vec::Vec;

use super::OdeError;
use crate::lmm::TimeGrid;

/// States `y_{1−s}, …, y_0, …, y_N` and the controls at the same indices.
///
/// Grid index `n ∈ [1−s, N]` is stored at slot `n + s − 1` and sits at time
/// `grid.time(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: TimeGrid,
    stages: usize,
    dim: usize,
    control_dim: usize,
    states: Vec<f64>,
    controls: Vec<f64>,
}

impl Trajectory {
    /// Number of grid slots for `s` stages: `N + s`.
    pub fn slots(grid: &TimeGrid, stages: usize) -> usize {
        grid.steps() + stages
    }

    pub(crate) fn with_controls(
        grid: TimeGrid,
        stages: usize,
        dim: usize,
        control_dim: usize,
        controls: &[f64],
    ) -> Result<Self, OdeError> {
        let slots = Self::slots(&grid, stages);
        if controls.len() != slots * control_dim {
            return Err(OdeError::ControlLength {
                expected: slots * control_dim,
                got: controls.len(),
            });
        }
        Ok(Trajectory {
            grid,
            stages,
            dim,
            control_dim,
            states: vec![0.0; slots * dim],
            controls: controls.to_vec(),
        })
    }

    /// Builds a trajectory from a prescribed state `y(t)`, e.g. to study an
    /// adjoint recurrence in isolation from forward errors.
    pub fn prescribed(
        grid: TimeGrid,
        stages: usize,
        dim: usize,
        control_dim: usize,
        controls: &[f64],
        state: impl Fn(f64, &mut [f64]),
    ) -> Result<Self, OdeError> {
        let mut tr = Self::with_controls(grid, stages, dim, control_dim, controls)?;
        for n in tr.first_index()..=tr.last_index() {
            let t = grid.time(n);
            state(t, tr.state_mut(n));
        }
        Ok(tr)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn control_dim(&self) -> usize {
        self.control_dim
    }

    pub fn first_index(&self) -> i64 {
        1 - self.stages as i64
    }

    pub fn last_index(&self) -> i64 {
        self.grid.steps() as i64
    }

    fn slot(&self, n: i64) -> usize {
        let k = n + self.stages as i64 - 1;
        assert!(
            k >= 0 && (k as usize) < Self::slots(&self.grid, self.stages),
            "index {n} out of range"
        );
        k as usize
    }

    pub fn state(&self, n: i64) -> &[f64] {
        let k = self.slot(n);
        &self.states[k * self.dim..(k + 1) * self.dim]
    }

    pub(crate) fn state_mut(&mut self, n: i64) -> &mut [f64] {
        let k = self.slot(n);
        &mut self.states[k * self.dim..(k + 1) * self.dim]
    }

    pub fn control(&self, n: i64) -> &[f64] {
        let k = self.slot(n);
        &self.controls[k * self.control_dim..(k + 1) * self.control_dim]
    }

    /// All states, slot-ordered.
    pub fn states(&self) -> &[f64] {
        &self.states
    }

    pub fn controls(&self) -> &[f64] {
        &self.controls
    }

    /// `max_{0 ≤ n ≤ N} |y_n − y(t_n)|` against a reference solution.
    pub fn max_error(&self, exact: impl Fn(f64, &mut [f64])) -> f64 {
        let mut buf = vec![0.0; self.dim];
        let mut err: f64 = 0.0;
        for n in 0..=self.last_index() {
            exact(self.grid.time(n), &mut buf);
            for (y, e) in self.state(n).iter().zip(&buf) {
                err = err.max((y - e).abs());
            }
        }
        err
    }
}
