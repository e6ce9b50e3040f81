//! Built-in scalar control problems with closed-form solutions.

use std::str::FromStr;

use lmm_adjoint_core::ode::OdeControlProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// `y' = y + u`: constant sensitivity `f_y ≡ 1`, `p(t) = e^{T−t}`.
    ConstFy,
    /// State prescribed as `y = t²` in `f = y²/2 + u`, so `f_y = t²` and
    /// `p(t) = exp((T³ − t³)/3)`.
    QuadraticFy,
    /// `y' = y² + u`, `y(0) = 1`, `j = ½(y(T) − 1/(1−T))²`, running weight α.
    /// At `u ≡ 0`: `y = 1/(1−t)` and `p ≡ 0`.
    Riccati,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::ConstFy => "const-fy",
            ProblemKind::QuadraticFy => "quadratic-fy",
            ProblemKind::Riccati => "riccati",
        }
    }

    /// Whether the state is prescribed from the closed form rather than integrated.
    pub fn prescribed_state(self) -> bool {
        !matches!(self, ProblemKind::Riccati)
    }
}

impl FromStr for ProblemKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "const-fy" => Ok(ProblemKind::ConstFy),
            "quadratic-fy" => Ok(ProblemKind::QuadraticFy),
            "riccati" => Ok(ProblemKind::Riccati),
            _ => Err("expected const-fy, quadratic-fy or riccati".into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuiltinProblem {
    pub kind: ProblemKind,
    pub t_end: f64,
    pub alpha: f64,
}

impl OdeControlProblem for BuiltinProblem {
    fn state_dim(&self) -> usize {
        1
    }

    fn control_dim(&self) -> usize {
        1
    }

    fn initial_state(&self, y0: &mut [f64]) {
        y0[0] = match self.kind {
            ProblemKind::ConstFy | ProblemKind::Riccati => 1.0,
            ProblemKind::QuadraticFy => 0.0,
        };
    }

    fn f(&self, _t: f64, y: &[f64], u: &[f64], out: &mut [f64]) {
        out[0] = match self.kind {
            ProblemKind::ConstFy => y[0] + u[0],
            ProblemKind::QuadraticFy => 0.5 * y[0] * y[0] + u[0],
            ProblemKind::Riccati => y[0] * y[0] + u[0],
        };
    }

    fn f_y(&self, _t: f64, y: &[f64], _u: &[f64], out: &mut [f64]) {
        out[0] = match self.kind {
            ProblemKind::ConstFy => 1.0,
            ProblemKind::QuadraticFy => y[0],
            ProblemKind::Riccati => 2.0 * y[0],
        };
    }

    fn f_u(&self, _t: f64, _y: &[f64], _u: &[f64], out: &mut [f64]) {
        out[0] = 1.0;
    }

    fn terminal_cost(&self, y: &[f64]) -> f64 {
        match self.kind {
            ProblemKind::Riccati => {
                let d = y[0] - 1.0 / (1.0 - self.t_end);
                0.5 * d * d
            }
            _ => y[0],
        }
    }

    fn terminal_gradient(&self, y: &[f64], out: &mut [f64]) {
        out[0] = match self.kind {
            ProblemKind::Riccati => y[0] - 1.0 / (1.0 - self.t_end),
            _ => 1.0,
        };
    }

    fn running_weight(&self) -> f64 {
        self.alpha
    }

    fn exact_state(&self, t: f64, out: &mut [f64]) -> bool {
        out[0] = match self.kind {
            ProblemKind::ConstFy => t.exp(),
            ProblemKind::QuadraticFy => t * t,
            ProblemKind::Riccati => 1.0 / (1.0 - t),
        };
        true
    }

    fn exact_adjoint(&self, t: f64, out: &mut [f64]) -> bool {
        let tt = self.t_end;
        out[0] = match self.kind {
            ProblemKind::ConstFy => (tt - t).exp(),
            ProblemKind::QuadraticFy => ((tt * tt * tt - t * t * t) / 3.0).exp(),
            ProblemKind::Riccati => 0.0,
        };
        true
    }
}
