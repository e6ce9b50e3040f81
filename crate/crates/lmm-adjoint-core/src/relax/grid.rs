use alloc::vec::Vec;

use super::{RelaxError, RelaxationModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Modular indexing; nodes at `x_L + i Δx`.
    Periodic,
    /// Zero-flux: feet outside the domain are clamped to the boundary cell;
    /// nodes at cell centres `x_L + (i + ½) Δx`.
    Clamp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FootMode {
    /// Every foot `x − v_j Δt` must be a grid node.
    Aligned,
    /// Linear interpolation between the two neighbouring nodes (first order in space).
    Interpolated,
}

const ALIGN_TOL: f64 = 1e-9;

/// Uniform 1-D grid with the time step of the semi-Lagrangian scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangianGrid {
    x_left: f64,
    x_right: f64,
    n_x: usize,
    boundary: Boundary,
    dt: f64,
    mode: FootMode,
}

impl LagrangianGrid {
    pub fn new(
        x_left: f64,
        x_right: f64,
        n_x: usize,
        boundary: Boundary,
        dt: f64,
        mode: FootMode,
    ) -> Result<Self, RelaxError> {
        if !(x_left.is_finite() && x_right.is_finite() && x_right > x_left) {
            return Err(RelaxError::InvalidGrid("domain must satisfy x_L < x_R"));
        }
        if n_x < 2 {
            return Err(RelaxError::InvalidGrid("need at least two nodes"));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(RelaxError::InvalidGrid("time step must be positive"));
        }
        Ok(LagrangianGrid {
            x_left,
            x_right,
            n_x,
            boundary,
            dt,
            mode,
        })
    }

    /// Grid-aligned time step `Δt = Δx / speed`.
    pub fn aligned(
        x_left: f64,
        x_right: f64,
        n_x: usize,
        boundary: Boundary,
        speed: f64,
    ) -> Result<Self, RelaxError> {
        if !(speed > 0.0) {
            return Err(RelaxError::InvalidGrid("alignment speed must be positive"));
        }
        let dx = (x_right - x_left) / n_x as f64;
        Self::new(
            x_left,
            x_right,
            n_x,
            boundary,
            dx / speed,
            FootMode::Aligned,
        )
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.x_right
    }

    pub fn len(&self) -> usize {
        self.n_x
    }

    pub fn is_empty(&self) -> bool {
        self.n_x == 0
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn mode(&self) -> FootMode {
        self.mode
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn dx(&self) -> f64 {
        (self.x_right - self.x_left) / self.n_x as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        let l = self.x_right - self.x_left;
        match self.boundary {
            Boundary::Periodic => self.x_left + l * i as f64 / self.n_x as f64,
            Boundary::Clamp => self.x_left + l * (i as f64 + 0.5) / self.n_x as f64,
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_x).map(|i| self.node(i)).collect()
    }

    /// Per-velocity foot offsets `v_j Δt / Δx` in cells.
    ///
    /// Enforces `|v_j| Δt ≤ Δx` and, in aligned mode, integer offsets.
    pub fn cell_offsets<M: RelaxationModel + ?Sized>(
        &self,
        model: &M,
    ) -> Result<Vec<f64>, RelaxError> {
        let dx = self.dx();
        let mut out = Vec::with_capacity(model.velocities().len());
        for &v in model.velocities() {
            let sigma = v * self.dt / dx;
            if sigma.abs() > 1.0 + ALIGN_TOL {
                return Err(RelaxError::Cfl {
                    courant: sigma.abs(),
                });
            }
            match self.mode {
                FootMode::Aligned => {
                    let r = libm::round(sigma);
                    if (sigma - r).abs() > ALIGN_TOL {
                        return Err(RelaxError::Misaligned {
                            velocity: v,
                            offset: sigma,
                        });
                    }
                    out.push(r);
                }
                FootMode::Interpolated => out.push(sigma),
            }
        }
        Ok(out)
    }

    /// Number of steps to reach `t_end`; it must be a multiple of `Δt`.
    pub fn steps_to(&self, t_end: f64) -> Result<usize, RelaxError> {
        let k = libm::round(t_end / self.dt);
        if !(k >= 1.0) || (k * self.dt - t_end).abs() > ALIGN_TOL * t_end.abs().max(1.0) {
            return Err(RelaxError::InvalidGrid(
                "final time is not a multiple of the time step",
            ));
        }
        Ok(k as usize)
    }

    fn wrap(&self, i: i64) -> usize {
        let n = self.n_x as i64;
        match self.boundary {
            Boundary::Periodic => i.rem_euclid(n) as usize,
            Boundary::Clamp => i.clamp(0, n - 1) as usize,
        }
    }

    /// `out[i] = src(x_i − offset·Δx)` under the boundary rule.
    pub fn gather(&self, src: &[f64], offset: f64, out: &mut [f64]) {
        let k0 = libm::floor(offset);
        let theta = offset - k0;
        let k0 = k0 as i64;
        if theta == 0.0 {
            for (i, o) in out.iter_mut().enumerate() {
                *o = src[self.wrap(i as i64 - k0)];
            }
        } else {
            for (i, o) in out.iter_mut().enumerate() {
                let i = i as i64;
                *o = (1.0 - theta) * src[self.wrap(i - k0)] + theta * src[self.wrap(i - k0 - 1)];
            }
        }
    }

    /// Adds `Gᵀ src` to `out`, where `G` is [`Self::gather`] with the same offset.
    pub fn scatter_add(&self, src: &[f64], offset: f64, out: &mut [f64]) {
        let k0 = libm::floor(offset);
        let theta = offset - k0;
        let k0 = k0 as i64;
        if theta == 0.0 {
            for (i, s) in src.iter().enumerate() {
                out[self.wrap(i as i64 - k0)] += s;
            }
        } else {
            for (i, s) in src.iter().enumerate() {
                let i = i as i64;
                out[self.wrap(i - k0)] += (1.0 - theta) * s;
                out[self.wrap(i - k0 - 1)] += theta * s;
            }
        }
    }
}
