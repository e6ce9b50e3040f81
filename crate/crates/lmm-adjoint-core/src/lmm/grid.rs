use super::LmmError;

/// Uniform grid `t_n = t0 + n·dt`, `dt = (T − t0)/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    t_end: f64,
    steps: usize,
    dt: f64,
}

impl TimeGrid {
    pub fn new(t0: f64, t_end: f64, steps: usize) -> Result<Self, LmmError> {
        if !(t0.is_finite() && t_end.is_finite()) {
            return Err(LmmError::InvalidGrid("non-finite end points"));
        }
        if t_end <= t0 {
            return Err(LmmError::InvalidGrid("T must exceed t0"));
        }
        if steps == 0 {
            return Err(LmmError::InvalidGrid("N must be positive"));
        }
        Ok(TimeGrid {
            t0,
            t_end,
            steps,
            dt: (t_end - t0) / steps as f64,
        })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// `t_n`; negative `n` addresses pre-initial stages.
    pub fn time(&self, n: i64) -> f64 {
        self.t0 + n as f64 * self.dt
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_exact() {
        let g = TimeGrid::new(0.0, 0.875, 1280).unwrap();
        assert_eq!(g.time(0), 0.0);
        assert!((g.time(1280) - 0.875).abs() <= 1e-15);
        assert_eq!(g.time(-2), -2.0 * g.dt());
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(TimeGrid::new(1.0, 1.0, 4).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0).is_err());
    }
}
