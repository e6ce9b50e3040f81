use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::LmmError;

/// Exact rational coefficient `num/den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: i64,
    den: i64,
}

impl Ratio {
    pub const fn new(num: i64, den: i64) -> Self {
        assert!(den > 0);
        Ratio { num, den }
    }

    pub const fn int(n: i64) -> Self {
        Ratio { num: n, den: 1 }
    }

    pub const fn numer(self) -> i64 {
        self.num
    }

    pub const fn denom(self) -> i64 {
        self.den
    }

    /// Correctly rounded for the small integers used here (both exactly representable).
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeClass {
    Bdf,
    AdamsBashforth,
    AdamsMoulton,
}

/// Denominator used for the 4-step Adams–Moulton weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AmDenominator {
    /// 720, the consistent classical scheme.
    #[default]
    Standard,
    /// 270, as printed in some references (inconsistent: Σb ≠ 1).
    Printed,
}

impl AmDenominator {
    pub fn value(self) -> i64 {
        match self {
            AmDenominator::Standard => 720,
            AmDenominator::Printed => 270,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            720 => Some(AmDenominator::Standard),
            270 => Some(AmDenominator::Printed),
            _ => None,
        }
    }
}

/// Canonical names accepted by [`tableau`]. `BDF1` is an alias of `ImplicitEuler`.
pub const SCHEME_NAMES: &[&str] = &[
    "ImplicitEuler",
    "ExplicitEuler",
    "BDF2",
    "BDF3",
    "BDF4",
    "BDF5",
    "BDF6",
    "AB2",
    "AB3",
    "AM4",
];

/// Coefficients `a = (a_0..a_{s-1})`, `b = (b_{-1}, b_0..b_{s-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultistepTableau {
    name: &'static str,
    class: SchemeClass,
    nominal_order: usize,
    a_exact: Vec<Ratio>,
    b_exact: Vec<Ratio>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl MultistepTableau {
    fn build(
        name: &'static str,
        class: SchemeClass,
        nominal_order: usize,
        a_exact: Vec<Ratio>,
        b_exact: Vec<Ratio>,
    ) -> Self {
        debug_assert_eq!(a_exact.len() + 1, b_exact.len());
        let a = a_exact.iter().map(|r| r.to_f64()).collect();
        let b = b_exact.iter().map(|r| r.to_f64()).collect();
        MultistepTableau {
            name,
            class,
            nominal_order,
            a_exact,
            b_exact,
            a,
            b,
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn class(&self) -> SchemeClass {
        self.class
    }

    /// Number of steps `s`.
    pub fn stages(&self) -> usize {
        self.a.len()
    }

    pub fn nominal_order(&self) -> usize {
        self.nominal_order
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// `b[0]` is `b_{-1}`, `b[l + 1]` is `b_l`.
    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn b_implicit(&self) -> f64 {
        self.b[0]
    }

    /// `b_l` for `l = 0..s-1`.
    pub fn b_explicit(&self) -> &[f64] {
        &self.b[1..]
    }

    pub fn a_exact(&self) -> &[Ratio] {
        &self.a_exact
    }

    pub fn b_exact(&self) -> &[Ratio] {
        &self.b_exact
    }

    pub fn is_implicit(&self) -> bool {
        self.b[0] != 0.0
    }

    /// `b_l = 0` for all `l ≥ 0` and `b_{-1} ≠ 0`.
    pub fn is_bdf(&self) -> bool {
        self.b[0] != 0.0 && self.b[1..].iter().all(|&x| x == 0.0)
    }

    pub fn is_adams_bashforth(&self) -> bool {
        self.b[0] == 0.0 && self.is_adams_shape()
    }

    /// Implicit Adams shape with at least one explicit weight.
    pub fn is_adams_moulton(&self) -> bool {
        self.b[0] != 0.0 && self.is_adams_shape() && self.b[1..].iter().any(|&x| x != 0.0)
    }

    fn is_adams_shape(&self) -> bool {
        self.a[0] == -1.0 && self.a[1..].iter().all(|&x| x == 0.0)
    }

    /// `1 + Σ a_i` in floating point.
    pub fn consistency_defect(&self) -> f64 {
        1.0 + self.a.iter().sum::<f64>()
    }
}

/// Looks up a tableau with the standard Adams–Moulton denominator.
pub fn tableau(name: &str) -> Result<MultistepTableau, LmmError> {
    tableau_with(name, AmDenominator::Standard)
}

pub fn tableau_with(name: &str, am: AmDenominator) -> Result<MultistepTableau, LmmError> {
    let r = Ratio::new;
    let i = Ratio::int;
    let key = name.trim();
    let eq = |s: &str| key.eq_ignore_ascii_case(s);
    let t = if eq("ImplicitEuler") || eq("BDF1") {
        MultistepTableau::build(
            "ImplicitEuler",
            SchemeClass::Bdf,
            1,
            vec![i(-1)],
            vec![i(1), i(0)],
        )
    } else if eq("ExplicitEuler") {
        MultistepTableau::build(
            "ExplicitEuler",
            SchemeClass::AdamsBashforth,
            1,
            vec![i(-1)],
            vec![i(0), i(1)],
        )
    } else if eq("BDF2") {
        MultistepTableau::build(
            "BDF2",
            SchemeClass::Bdf,
            2,
            vec![r(-4, 3), r(1, 3)],
            vec![r(2, 3), i(0), i(0)],
        )
    } else if eq("BDF3") {
        MultistepTableau::build(
            "BDF3",
            SchemeClass::Bdf,
            3,
            vec![r(-18, 11), r(9, 11), r(-2, 11)],
            vec![r(6, 11), i(0), i(0), i(0)],
        )
    } else if eq("BDF4") {
        MultistepTableau::build(
            "BDF4",
            SchemeClass::Bdf,
            4,
            vec![r(-48, 25), r(36, 25), r(-16, 25), r(3, 25)],
            vec![r(12, 25), i(0), i(0), i(0), i(0)],
        )
    } else if eq("BDF5") {
        MultistepTableau::build(
            "BDF5",
            SchemeClass::Bdf,
            5,
            vec![
                r(-300, 137),
                r(300, 137),
                r(-200, 137),
                r(75, 137),
                r(-12, 137),
            ],
            vec![r(60, 137), i(0), i(0), i(0), i(0), i(0)],
        )
    } else if eq("BDF6") {
        MultistepTableau::build(
            "BDF6",
            SchemeClass::Bdf,
            6,
            vec![
                r(-360, 147),
                r(450, 147),
                r(-400, 147),
                r(225, 147),
                r(-72, 147),
                r(10, 147),
            ],
            vec![r(60, 147), i(0), i(0), i(0), i(0), i(0), i(0)],
        )
    } else if eq("AB2") {
        MultistepTableau::build(
            "AB2",
            SchemeClass::AdamsBashforth,
            2,
            vec![i(-1), i(0)],
            vec![i(0), r(3, 2), r(-1, 2)],
        )
    } else if eq("AB3") {
        MultistepTableau::build(
            "AB3",
            SchemeClass::AdamsBashforth,
            3,
            vec![i(-1), i(0), i(0)],
            vec![i(0), r(23, 12), r(-4, 3), r(5, 12)],
        )
    } else if eq("AM4") {
        let d = am.value();
        MultistepTableau::build(
            "AM4",
            SchemeClass::AdamsMoulton,
            5,
            vec![i(-1), i(0), i(0), i(0)],
            vec![r(251, d), r(646, d), r(-264, d), r(106, d), r(-19, d)],
        )
    } else {
        return Err(LmmError::UnknownScheme(name.to_string()));
    };
    Ok(t)
}
