use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::model::{lift_equilibrium, moments_of};
use super::{LagrangianGrid, RelaxError, RelaxationModel};

/// Kinetic arrays `f^j` (velocity-major, Eulerian nodes) for the `s` most recent
/// time levels, newest first.
#[derive(Debug, Clone, PartialEq)]
pub struct KineticField {
    n_vel: usize,
    n_x: usize,
    depth: usize,
    levels: VecDeque<Vec<f64>>,
    step: usize,
}

impl KineticField {
    /// Equilibrium lifting `f^j_0 = E_j(u_0)` with pre-initial levels continued
    /// backwards along characteristics: `f^j(−kΔt, x) = f^j_0(x + v_j kΔt)`.
    pub fn from_equilibrium<M: RelaxationModel + ?Sized>(
        model: &M,
        grid: &LagrangianGrid,
        u0: &[f64],
        depth: usize,
    ) -> Result<Self, RelaxError> {
        let n = model.conserved_dim();
        if u0.len() != n * grid.len() {
            return Err(RelaxError::Dimension {
                expected: n * grid.len(),
                got: u0.len(),
            });
        }
        let f0 = lift_equilibrium(model, u0)?;
        Self::from_kinetic(model, grid, &f0, depth)
    }

    /// Same continuation for arbitrary kinetic initial data.
    pub fn from_kinetic<M: RelaxationModel + ?Sized>(
        model: &M,
        grid: &LagrangianGrid,
        f0: &[f64],
        depth: usize,
    ) -> Result<Self, RelaxError> {
        let nv = model.velocities().len();
        let nx = grid.len();
        if f0.len() != nv * nx {
            return Err(RelaxError::Dimension {
                expected: nv * nx,
                got: f0.len(),
            });
        }
        let offsets = grid.cell_offsets(model)?;
        let mut levels = VecDeque::with_capacity(depth);
        for k in 0..depth {
            let mut lvl = vec![0.0; nv * nx];
            for j in 0..nv {
                grid.gather(
                    &f0[j * nx..(j + 1) * nx],
                    -(k as f64) * offsets[j],
                    &mut lvl[j * nx..(j + 1) * nx],
                );
            }
            levels.push_back(lvl);
        }
        Ok(KineticField {
            n_vel: nv,
            n_x: nx,
            depth,
            levels,
            step: 0,
        })
    }

    pub fn velocities(&self) -> usize {
        self.n_vel
    }

    pub fn nodes(&self) -> usize {
        self.n_x
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Index `n` of the newest level.
    pub fn step(&self) -> usize {
        self.step
    }

    /// Level `t_{n − age}`.
    pub fn level(&self, age: usize) -> Option<&[f64]> {
        self.levels.get(age).map(|v| v.as_slice())
    }

    pub(crate) fn push(&mut self, level: Vec<f64>) {
        self.levels.pop_back();
        self.levels.push_front(level);
        self.step += 1;
    }
}

/// Conserved variables `u = Q f` at level `t_{n − age}`.
pub fn reconstruct_macroscopic<M: RelaxationModel + ?Sized>(
    field: &KineticField,
    model: &M,
    age: usize,
) -> Result<Vec<f64>, RelaxError> {
    let lvl = field.level(age).ok_or(RelaxError::HistoryDepth {
        age,
        depth: field.depth(),
    })?;
    Ok(moments_of(model, lvl))
}
