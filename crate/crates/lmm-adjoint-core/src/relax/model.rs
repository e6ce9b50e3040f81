use alloc::vec;
use alloc::vec::Vec;

use super::RelaxError;

/// Discrete-velocity BGK model `∂_t f^j + v_j ∂_x f^j = (E_j(u) − f^j)/ε`, `u = Q f`.
///
/// Kinetic arrays are velocity-major (`N × n_x`), conserved arrays are
/// component-major (`n × n_x`). Matrices are row-major.
pub trait RelaxationModel {
    /// `v_1, …, v_N`.
    fn velocities(&self) -> &[f64];

    /// Number `n` of conserved components.
    fn conserved_dim(&self) -> usize;

    /// Moment map `Q` (`n × N`).
    fn moments(&self) -> &[f64];

    /// Relaxation time `ε > 0`.
    fn relaxation(&self) -> f64;

    /// `E(u)` at one point (`N` entries).
    fn equilibrium(&self, u: &[f64], out: &mut [f64]) -> Result<(), RelaxError>;

    /// `∂E_j/∂u_r` at one point (`N × n`).
    fn equilibrium_jacobian(&self, u: &[f64], out: &mut [f64]) -> Result<(), RelaxError>;

    /// Macroscopic flux `F(u) = Q V E(u)` at one point.
    fn flux(&self, u: &[f64], out: &mut [f64]) -> Result<(), RelaxError> {
        let v = self.velocities();
        let mut e = vec![0.0; v.len()];
        self.equilibrium(u, &mut e)?;
        let q = self.moments();
        for (r, o) in out.iter_mut().enumerate().take(self.conserved_dim()) {
            *o = (0..v.len()).map(|j| q[r * v.len() + j] * v[j] * e[j]).sum();
        }
        Ok(())
    }

    /// Setup-time check of the initial data (component-major, `n × n_x`).
    fn check_initial_data(&self, _u0: &[f64]) -> Result<(), RelaxError> {
        Ok(())
    }

    /// `max_i ‖Q E(u_i) − u_i‖_∞` over a component-major field.
    fn moment_defect(&self, field: &[f64]) -> Result<f64, RelaxError> {
        let n = self.conserved_dim();
        let nv = self.velocities().len();
        let nx = field.len() / n;
        let q = self.moments();
        let mut u = vec![0.0; n];
        let mut e = vec![0.0; nv];
        let mut worst: f64 = 0.0;
        for i in 0..nx {
            for r in 0..n {
                u[r] = field[r * nx + i];
            }
            self.equilibrium(&u, &mut e)?;
            for r in 0..n {
                let qe: f64 = (0..nv).map(|j| q[r * nv + j] * e[j]).sum();
                worst = worst.max((qe - u[r]).abs());
            }
        }
        Ok(worst)
    }
}

/// Scalar flux `F(u)` for the Jin-Xin model.
pub trait ScalarFlux {
    fn value(&self, u: f64) -> f64;
    fn derivative(&self, u: f64) -> f64;
}

/// `F(u) = c u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFlux {
    pub speed: f64,
}

impl ScalarFlux for LinearFlux {
    fn value(&self, u: f64) -> f64 {
        self.speed * u
    }
    fn derivative(&self, _u: f64) -> f64 {
        self.speed
    }
}

/// `F(u) = u²/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BurgersFlux;

impl ScalarFlux for BurgersFlux {
    fn value(&self, u: f64) -> f64 {
        0.5 * u * u
    }
    fn derivative(&self, u: f64) -> f64 {
        u
    }
}

/// Two-velocity relaxation `v = (a, −a)`, `E_{1,2}(u) = (a u ± F(u))/(2a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JinXin<F> {
    flux: F,
    speed: f64,
    eps: f64,
    velocities: [f64; 2],
}

pub fn make_jin_xin<F: ScalarFlux>(flux: F, speed: f64, eps: f64) -> Result<JinXin<F>, RelaxError> {
    if !(speed > 0.0 && speed.is_finite()) {
        return Err(RelaxError::InvalidModel(
            "characteristic speed a must be positive",
        ));
    }
    check_eps(eps)?;
    Ok(JinXin {
        flux,
        speed,
        eps,
        velocities: [speed, -speed],
    })
}

fn check_eps(eps: f64) -> Result<(), RelaxError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(RelaxError::InvalidModel(
            "relaxation parameter must be positive",
        ));
    }
    Ok(())
}

impl<F: ScalarFlux> JinXin<F> {
    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn scalar_flux(&self) -> &F {
        &self.flux
    }
}

impl<F: ScalarFlux> RelaxationModel for JinXin<F> {
    fn velocities(&self) -> &[f64] {
        &self.velocities
    }

    fn conserved_dim(&self) -> usize {
        1
    }

    fn moments(&self) -> &[f64] {
        &[1.0, 1.0]
    }

    fn relaxation(&self) -> f64 {
        self.eps
    }

    fn equilibrium(&self, u: &[f64], out: &mut [f64]) -> Result<(), RelaxError> {
        let a = self.speed;
        let f = self.flux.value(u[0]);
        out[0] = (a * u[0] + f) / (2.0 * a);
        out[1] = (a * u[0] - f) / (2.0 * a);
        Ok(())
    }

    fn equilibrium_jacobian(&self, u: &[f64], out: &mut [f64]) -> Result<(), RelaxError> {
        let a = self.speed;
        let df = self.flux.derivative(u[0]);
        out[0] = (a + df) / (2.0 * a);
        out[1] = (a - df) / (2.0 * a);
        Ok(())
    }

    /// Subcharacteristic condition `a ≥ max |F'(u_0)|`.
    fn check_initial_data(&self, u0: &[f64]) -> Result<(), RelaxError> {
        let worst = u0
            .iter()
            .fold(0.0f64, |m, &u| m.max(self.flux.derivative(u).abs()));
        if worst > self.speed * (1.0 + 1e-12) {
            return Err(RelaxError::Subcharacteristic {
                speed: self.speed,
                max_slope: worst,
            });
        }
        Ok(())
    }
}

/// Broadwell model, `v = (c, −c, 0)`, `ρ = f¹ + f² + 2f³`, `m = c(f¹ − f²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Broadwell {
    c: f64,
    eps: f64,
    velocities: [f64; 3],
    moments: [f64; 6],
}

pub fn make_broadwell(c: f64, eps: f64) -> Result<Broadwell, RelaxError> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(RelaxError::InvalidModel(
            "Broadwell speed c must be positive",
        ));
    }
    check_eps(eps)?;
    Ok(Broadwell {
        c,
        eps,
        velocities: [c, -c, 0.0],
        moments: [1.0, 1.0, 2.0, c, -c, 0.0],
    })
}

impl Broadwell {
    pub fn speed(&self) -> f64 {
        self.c
    }

    /// `F(ρ, m) = m²/(c²ρ) + ρ`.
    pub fn closure(&self, rho: f64, m: f64) -> f64 {
        m * m / (self.c * self.c * rho) + rho
    }
}

impl RelaxationModel for Broadwell {
    fn velocities(&self) -> &[f64] {
        &self.velocities
    }

    fn conserved_dim(&self) -> usize {
        2
    }

    fn moments(&self) -> &[f64] {
        &self.moments
    }

    fn relaxation(&self) -> f64 {
        self.eps
    }

    fn equilibrium(&self, u: &[f64], out: &mut [f64]) -> Result<(), RelaxError> {
        let (rho, m) = (u[0], u[1]);
        if !(rho > 0.0) {
            return Err(RelaxError::NonPositiveDensity(rho));
        }
        let f = self.closure(rho, m);
        let c = self.c;
        out[0] = 0.5 * f + m / (2.0 * c);
        out[1] = 0.5 * f - m / (2.0 * c);
        out[2] = 0.5 * (rho - f);
        Ok(())
    }

    fn equilibrium_jacobian(&self, u: &[f64], out: &mut [f64]) -> Result<(), RelaxError> {
        let (rho, m) = (u[0], u[1]);
        if !(rho > 0.0) {
            return Err(RelaxError::NonPositiveDensity(rho));
        }
        let c = self.c;
        let f_rho = 1.0 - m * m / (c * c * rho * rho);
        let f_m = 2.0 * m / (c * c * rho);
        out[0] = 0.5 * f_rho;
        out[1] = 0.5 * f_m + 1.0 / (2.0 * c);
        out[2] = 0.5 * f_rho;
        out[3] = 0.5 * f_m - 1.0 / (2.0 * c);
        out[4] = 0.5 * (1.0 - f_rho);
        out[5] = -0.5 * f_m;
        Ok(())
    }

    fn check_initial_data(&self, u0: &[f64]) -> Result<(), RelaxError> {
        let nx = u0.len() / 2;
        match u0[..nx].iter().find(|r| !(**r > 0.0)) {
            Some(&r) => Err(RelaxError::NonPositiveDensity(r)),
            None => Ok(()),
        }
    }
}

/// Lifts a macroscopic field to local equilibrium `f^j = E_j(u)` (velocity-major).
pub fn lift_equilibrium<M: RelaxationModel + ?Sized>(
    model: &M,
    u: &[f64],
) -> Result<Vec<f64>, RelaxError> {
    let n = model.conserved_dim();
    let nv = model.velocities().len();
    let nx = u.len() / n;
    let mut out = vec![0.0; nv * nx];
    let mut point = vec![0.0; n];
    let mut e = vec![0.0; nv];
    for i in 0..nx {
        for r in 0..n {
            point[r] = u[r * nx + i];
        }
        model.equilibrium(&point, &mut e)?;
        for j in 0..nv {
            out[j * nx + i] = e[j];
        }
    }
    Ok(out)
}

/// `u = Q f` for a velocity-major kinetic array.
pub fn moments_of<M: RelaxationModel + ?Sized>(model: &M, f: &[f64]) -> Vec<f64> {
    let n = model.conserved_dim();
    let nv = model.velocities().len();
    let nx = f.len() / nv;
    let q = model.moments();
    let mut u = vec![0.0; n * nx];
    for r in 0..n {
        for j in 0..nv {
            let w = q[r * nv + j];
            if w == 0.0 {
                continue;
            }
            for i in 0..nx {
                u[r * nx + i] += w * f[j * nx + i];
            }
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jin_xin_linear_unit_speed() {
        let m = make_jin_xin(LinearFlux { speed: 1.0 }, 1.0, 0.1).unwrap();
        let mut e = [0.0; 2];
        m.equilibrium(&[0.7], &mut e).unwrap();
        assert_eq!(e, [0.7, 0.0]);
    }

    #[test]
    fn jin_xin_burgers_values() {
        let m = make_jin_xin(BurgersFlux, 2.1, 0.1).unwrap();
        let mut e = [0.0; 2];
        m.equilibrium(&[1.0], &mut e).unwrap();
        assert!((e[0] - 2.6 / 4.2).abs() < 1e-15);
        assert!((e[1] - 1.6 / 4.2).abs() < 1e-15);
    }

    #[test]
    fn broadwell_values() {
        let m = make_broadwell(1.0, 0.1).unwrap();
        let mut e = [0.0; 3];
        m.equilibrium(&[1.0, 0.5], &mut e).unwrap();
        assert_eq!(e, [0.875, 0.375, -0.125]);
        m.equilibrium(&[1.0, 0.0], &mut e).unwrap();
        assert_eq!(e, [0.5, 0.5, 0.0]);
    }

    #[test]
    fn invalid_parameters() {
        assert!(make_jin_xin(BurgersFlux, 0.0, 0.1).is_err());
        assert!(make_broadwell(-1.0, 0.1).is_err());
        assert!(make_broadwell(1.0, 0.0).is_err());
        let m = make_broadwell(1.0, 0.1).unwrap();
        let mut e = [0.0; 3];
        assert_eq!(
            m.equilibrium(&[0.0, 0.1], &mut e),
            Err(RelaxError::NonPositiveDensity(0.0))
        );
    }

    #[test]
    fn subcharacteristic_violation() {
        let m = make_jin_xin(BurgersFlux, 1.0, 0.1).unwrap();
        assert!(m.check_initial_data(&[0.5, 1.0]).is_ok());
        assert!(matches!(
            m.check_initial_data(&[0.5, 1.5]),
            Err(RelaxError::Subcharacteristic { .. })
        ));
    }
}
