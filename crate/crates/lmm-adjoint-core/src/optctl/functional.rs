use alloc::vec;
use alloc::vec::Vec;

use super::ControlError;
use crate::relax::RelaxationModel;

/// `J = ½ Σ_r Σ_i (u_{r,i} − u_{d,r,i})² Δx` on a component-major field.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackingFunctional {
    target: Vec<f64>,
    components: usize,
    dx: f64,
}

impl TrackingFunctional {
    pub fn new(target: Vec<f64>, components: usize, dx: f64) -> Result<Self, ControlError> {
        if components == 0 || !target.len().is_multiple_of(components) {
            return Err(ControlError::InvalidConfig(
                "target length is not a multiple of the component count",
            ));
        }
        if !(dx > 0.0) {
            return Err(ControlError::InvalidConfig("dx must be positive"));
        }
        Ok(TrackingFunctional {
            target,
            components,
            dx,
        })
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    fn check(&self, state: &[f64]) -> Result<(), ControlError> {
        if state.len() != self.target.len() {
            return Err(ControlError::GridMismatch {
                expected: self.target.len(),
                got: state.len(),
            });
        }
        Ok(())
    }

    pub fn evaluate(&self, state: &[f64]) -> Result<f64, ControlError> {
        self.check(state)?;
        let sum: f64 = state
            .iter()
            .zip(&self.target)
            .map(|(u, d)| (u - d) * (u - d))
            .sum();
        Ok(0.5 * sum * self.dx)
    }

    /// Pointwise derivative `u − u_d` (the L² gradient of `J`).
    pub fn residual(&self, state: &[f64]) -> Result<Vec<f64>, ControlError> {
        self.check(state)?;
        Ok(state.iter().zip(&self.target).map(|(u, d)| u - d).collect())
    }

    /// Kinetic terminal data `λ^j(T) = Σ_r Q_{rj} (u_r − u_{d,r})` (velocity-major).
    pub fn terminal_adjoint<M: RelaxationModel + ?Sized>(
        &self,
        model: &M,
        state: &[f64],
    ) -> Result<Vec<f64>, ControlError> {
        let r = self.residual(state)?;
        let n = model.conserved_dim();
        if n != self.components {
            return Err(ControlError::InvalidConfig(
                "model and functional disagree on the component count",
            ));
        }
        let nv = model.velocities().len();
        let nx = r.len() / n;
        let q = model.moments();
        let mut out = vec![0.0; nv * nx];
        for j in 0..nv {
            for c in 0..n {
                let w = q[c * nv + j];
                if w == 0.0 {
                    continue;
                }
                for i in 0..nx {
                    out[j * nx + i] += w * r[c * nx + i];
                }
            }
        }
        Ok(out)
    }
}
