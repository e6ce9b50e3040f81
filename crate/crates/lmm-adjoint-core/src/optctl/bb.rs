/// Safeguard bounds for the step length.
pub const SIGMA_MIN: f64 = 1e-6;
pub const SIGMA_MAX: f64 = 1e2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BbVariant {
    /// `⟨Δu,Δu⟩/⟨Δu,Δg⟩`
    Bb1,
    /// `⟨Δu,Δg⟩/⟨Δg,Δg⟩`
    #[default]
    Bb2,
}

/// Barzilai–Borwein step from the secant pair `(Δu, Δg)`, clamped to
/// `[SIGMA_MIN, SIGMA_MAX]`. A vanishing denominator keeps `previous`.
pub fn bb_step(du: &[f64], dg: &[f64], variant: BbVariant, previous: f64) -> f64 {
    let dot = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).map(|(a, b)| a * b).sum() };
    let (num, den) = match variant {
        BbVariant::Bb1 => (dot(du, du), dot(du, dg)),
        BbVariant::Bb2 => (dot(du, dg), dot(dg, dg)),
    };
    if den == 0.0 || !(num / den).is_finite() {
        return previous;
    }
    (num / den).clamp(SIGMA_MIN, SIGMA_MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_hessian_gives_unit_step() {
        let du = [0.3, -1.0, 2.0];
        assert_eq!(bb_step(&du, &du, BbVariant::Bb2, 0.1), 1.0);
        assert_eq!(bb_step(&du, &du, BbVariant::Bb1, 0.1), 1.0);
    }

    #[test]
    fn doubled_curvature_halves_step() {
        let du = [1.0, 2.0];
        let dg = [2.0, 4.0];
        assert_eq!(bb_step(&du, &dg, BbVariant::Bb2, 0.1), 0.5);
    }

    #[test]
    fn degenerate_pair_keeps_previous_and_clamps() {
        assert_eq!(bb_step(&[1.0], &[0.0], BbVariant::Bb2, 0.25), 0.25);
        assert_eq!(bb_step(&[1.0], &[-1.0], BbVariant::Bb2, 0.25), SIGMA_MIN);
        assert_eq!(bb_step(&[1e3], &[1.0], BbVariant::Bb2, 0.25), SIGMA_MAX);
    }
}
