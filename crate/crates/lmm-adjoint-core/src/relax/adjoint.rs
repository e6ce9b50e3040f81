use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::forward::relaxation_weights;
use super::{ForwardRun, LagrangianGrid, RelaxError, RelaxationModel};
use crate::lmm::MultistepTableau;

/// Adjoint arrays `λ^j` (velocity-major, Eulerian) for the `s` earliest known
/// time levels, earliest first.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointField {
    n_vel: usize,
    n_x: usize,
    depth: usize,
    levels: VecDeque<Vec<f64>>,
    time_index: usize,
}

impl AdjointField {
    /// Terminal data `λ(T)` at step index `final_step`, continued beyond `T`
    /// along characteristics: `λ^j(T + kΔt, x) = λ^j(T, x − v_j kΔt)`.
    pub fn from_terminal<M: RelaxationModel + ?Sized>(
        model: &M,
        grid: &LagrangianGrid,
        terminal: &[f64],
        depth: usize,
        final_step: usize,
    ) -> Result<Self, RelaxError> {
        let nv = model.velocities().len();
        let nx = grid.len();
        if terminal.len() != nv * nx {
            return Err(RelaxError::Dimension {
                expected: nv * nx,
                got: terminal.len(),
            });
        }
        let offsets = grid.cell_offsets(model)?;
        let mut levels = VecDeque::with_capacity(depth);
        for k in 0..depth {
            let mut lvl = vec![0.0; nv * nx];
            for j in 0..nv {
                grid.gather(
                    &terminal[j * nx..(j + 1) * nx],
                    k as f64 * offsets[j],
                    &mut lvl[j * nx..(j + 1) * nx],
                );
            }
            levels.push_back(lvl);
        }
        Ok(AdjointField {
            n_vel: nv,
            n_x: nx,
            depth,
            levels,
            time_index: final_step,
        })
    }

    pub fn velocities(&self) -> usize {
        self.n_vel
    }

    pub fn nodes(&self) -> usize {
        self.n_x
    }

    /// Step index of the earliest known level.
    pub fn time_index(&self) -> usize {
        self.time_index
    }

    /// Level `t_{n + ahead}` where `n` is [`Self::time_index`].
    pub fn level(&self, ahead: usize) -> Option<&[f64]> {
        self.levels.get(ahead).map(|v| v.as_slice())
    }

    /// `Σ_j λ^j` at the earliest known level.
    pub fn velocity_sum(&self) -> Vec<f64> {
        velocity_sum(&self.levels[0], self.n_vel, self.n_x)
    }
}

fn velocity_sum(lvl: &[f64], nv: usize, nx: usize) -> Vec<f64> {
    let mut p = vec![0.0; nx];
    for j in 0..nv {
        for (pi, l) in p.iter_mut().zip(&lvl[j * nx..(j + 1) * nx]) {
            *pi += l;
        }
    }
    p
}

/// One backward step `t_n → t_{n−1}` given the forward state `u(t_{n−1})`.
///
/// With `G_j = −Σ_i a_i λ^j(t_{n+i}, x + v_j(i+1)Δt)` (transpose of the forward
/// gather) and `W_r = Σ_k ∂_{u_r}E_k(u) G_k`, the update is
/// `λ^j(t_{n−1}) = ε/(ε+Δt b) G_j + Δt b/(ε+Δt b) Σ_r Q_{rj} W_r`.
pub fn adjoint_step<M: RelaxationModel + ?Sized>(
    model: &M,
    grid: &LagrangianGrid,
    adj: &mut AdjointField,
    u_prev: &[f64],
    tab: &MultistepTableau,
) -> Result<(), RelaxError> {
    if !tab.is_bdf() {
        return Err(RelaxError::NotBdf(tab.name()));
    }
    if adj.time_index == 0 {
        return Err(RelaxError::InvalidGrid("adjoint already at t = 0"));
    }
    let s = tab.stages();
    if adj.depth < s {
        return Err(RelaxError::HistoryDepth {
            age: s - 1,
            depth: adj.depth,
        });
    }
    let n = model.conserved_dim();
    let nx = grid.len();
    if u_prev.len() != n * nx || adj.n_x != nx {
        return Err(RelaxError::MissingForward);
    }
    let offsets = grid.cell_offsets(model)?;
    let nv = offsets.len();
    let a = tab.a();

    let mut g = vec![0.0; nv * nx];
    let mut tmp = vec![0.0; nx];
    for (i, ai) in a.iter().enumerate() {
        let lvl = &adj.levels[i];
        for j in 0..nv {
            tmp.fill(0.0);
            grid.scatter_add(
                &lvl[j * nx..(j + 1) * nx],
                (i + 1) as f64 * offsets[j],
                &mut tmp,
            );
            for (gv, tv) in g[j * nx..(j + 1) * nx].iter_mut().zip(&tmp) {
                *gv += -ai * tv;
            }
        }
    }

    let (c, d) = relaxation_weights(tab, grid.dt(), model.relaxation());
    let q = model.moments();
    let mut next = vec![0.0; nv * nx];
    let mut point = vec![0.0; n];
    let mut de = vec![0.0; nv * n];
    let mut w = vec![0.0; n];
    for x in 0..nx {
        for r in 0..n {
            point[r] = u_prev[r * nx + x];
        }
        model.equilibrium_jacobian(&point, &mut de)?;
        for r in 0..n {
            let mut acc = 0.0;
            for k in 0..nv {
                acc += de[k * n + r] * g[k * nx + x];
            }
            w[r] = acc;
        }
        for j in 0..nv {
            let mut z = 0.0;
            for r in 0..n {
                z += q[r * nv + j] * w[r];
            }
            next[j * nx + x] = d * g[j * nx + x] + c * z;
        }
    }
    if next.iter().any(|v| !v.is_finite()) {
        return Err(RelaxError::NonFinite {
            step: adj.time_index - 1,
        });
    }
    adj.levels.pop_back();
    adj.levels.push_front(next);
    adj.time_index -= 1;
    Ok(())
}

/// All adjoint levels `λ(t_0), …, λ(t_N)` and the field positioned at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointRun {
    n_vel: usize,
    levels: Vec<Vec<f64>>,
    field: AdjointField,
}

impl AdjointRun {
    /// `λ` at `t_n` (velocity-major).
    pub fn lambda(&self, n: usize) -> &[f64] {
        &self.levels[n]
    }

    /// `p = Σ_j λ^j` at `t_n`.
    pub fn velocity_sum(&self, n: usize) -> Vec<f64> {
        let lvl = &self.levels[n];
        velocity_sum(lvl, self.n_vel, lvl.len() / self.n_vel)
    }

    pub fn field(&self) -> &AdjointField {
        &self.field
    }

    pub fn steps(&self) -> usize {
        self.levels.len() - 1
    }
}

/// Backward sweep from terminal data `λ(T)` (velocity-major) using the stored forward states.
pub fn solve_adjoint<M: RelaxationModel + ?Sized>(
    model: &M,
    grid: &LagrangianGrid,
    tab: &MultistepTableau,
    forward: &ForwardRun,
    terminal: &[f64],
) -> Result<AdjointRun, RelaxError> {
    if forward.grid() != grid {
        return Err(RelaxError::MissingForward);
    }
    let big_n = forward.steps();
    let mut field = AdjointField::from_terminal(model, grid, terminal, tab.stages(), big_n)?;
    let mut levels = vec![Vec::new(); big_n + 1];
    levels[big_n] = terminal.to_vec();
    for n in (1..=big_n).rev() {
        adjoint_step(model, grid, &mut field, forward.state(n - 1), tab)?;
        levels[n - 1] = field.levels[0].clone();
    }
    Ok(AdjointRun {
        n_vel: model.velocities().len(),
        levels,
        field,
    })
}
