use alloc::vec;
use alloc::vec::Vec;

use super::model::moments_of;
use super::{KineticField, LagrangianGrid, RelaxError, RelaxationModel};
use crate::lmm::MultistepTableau;

/// Conserved states at every time level `0..=N` plus the final kinetic history.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardRun {
    grid: LagrangianGrid,
    states: Vec<Vec<f64>>,
    field: KineticField,
}

impl ForwardRun {
    pub fn grid(&self) -> &LagrangianGrid {
        &self.grid
    }

    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    /// Component-major conserved field at `t_n`.
    pub fn state(&self, n: usize) -> &[f64] {
        &self.states[n]
    }

    pub fn terminal(&self) -> &[f64] {
        self.states.last().expect("at least the initial state")
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn field(&self) -> &KineticField {
        &self.field
    }
}

pub(crate) fn relaxation_weights(tab: &MultistepTableau, dt: f64, eps: f64) -> (f64, f64) {
    let db = dt * tab.b_implicit();
    (db / (db + eps), eps / (db + eps))
}

/// One step of the semi-Lagrangian BDF scheme; returns `u^{n+1}`.
pub fn forward_step<M: RelaxationModel + ?Sized>(
    model: &M,
    grid: &LagrangianGrid,
    field: &mut KineticField,
    tab: &MultistepTableau,
) -> Result<Vec<f64>, RelaxError> {
    if !tab.is_bdf() {
        return Err(RelaxError::NotBdf(tab.name()));
    }
    let s = tab.stages();
    if field.depth() < s {
        return Err(RelaxError::HistoryDepth {
            age: s - 1,
            depth: field.depth(),
        });
    }
    let offsets = grid.cell_offsets(model)?;
    let nv = offsets.len();
    let nx = grid.len();
    let n = model.conserved_dim();
    let a = tab.a();

    // history gathered along characteristics
    let mut h = vec![0.0; nv * nx];
    let mut tmp = vec![0.0; nx];
    for (l, al) in a.iter().enumerate() {
        let lvl = field.level(l).expect("depth checked");
        for j in 0..nv {
            grid.gather(
                &lvl[j * nx..(j + 1) * nx],
                (l + 1) as f64 * offsets[j],
                &mut tmp,
            );
            for (hv, tv) in h[j * nx..(j + 1) * nx].iter_mut().zip(&tmp) {
                *hv += -al * tv;
            }
        }
    }

    // macroscopic closure
    let u = moments_of(model, &h);

    // relaxation
    let (c, d) = relaxation_weights(tab, grid.dt(), model.relaxation());
    let mut next = vec![0.0; nv * nx];
    let mut point = vec![0.0; n];
    let mut e = vec![0.0; nv];
    for i in 0..nx {
        for r in 0..n {
            point[r] = u[r * nx + i];
        }
        model.equilibrium(&point, &mut e)?;
        for j in 0..nv {
            next[j * nx + i] = c * e[j] + d * h[j * nx + i];
        }
    }
    if next.iter().any(|v| !v.is_finite()) {
        return Err(RelaxError::NonFinite { step: field.step() });
    }
    let u_next = moments_of(model, &next);
    field.push(next);
    Ok(u_next)
}

/// Runs `steps` forward steps from equilibrium data `u0` (component-major).
pub fn solve_forward<M: RelaxationModel + ?Sized>(
    model: &M,
    grid: &LagrangianGrid,
    tab: &MultistepTableau,
    u0: &[f64],
    steps: usize,
) -> Result<ForwardRun, RelaxError> {
    if !tab.is_bdf() {
        return Err(RelaxError::NotBdf(tab.name()));
    }
    let mut field = KineticField::from_equilibrium(model, grid, u0, tab.stages())?;
    let mut states = Vec::with_capacity(steps + 1);
    states.push(u0.to_vec());
    for _ in 0..steps {
        let u = forward_step(model, grid, &mut field, tab)?;
        states.push(u);
    }
    Ok(ForwardRun {
        grid: *grid,
        states,
        field,
    })
}
