//! Angles as exact rational multiples of pi, plus a real-valued escape hatch.

use std::f64::consts::PI;
use std::fmt;

use num_integer::Integer;

use crate::ZxError;

/// A rational multiple of pi, kept normalized to `[0, 2*pi)`.
///
/// Invariants: `den > 0`, `0 <= num < 2*den`, `gcd(num, den) == 1` (with the
/// convention that 0 is stored as `0/1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalAngle {
    num: i64,
    den: i64,
}

impl RationalAngle {
    pub const ZERO: RationalAngle = RationalAngle { num: 0, den: 1 };
    pub const PI: RationalAngle = RationalAngle { num: 1, den: 1 };

    /// Builds `num/den * pi` normalized into `[0, 2*pi)`.
    pub fn new(num: i64, den: i64) -> Result<RationalAngle, ZxError> {
        if den == 0 {
            return Err(ZxError::ZeroDenominator);
        }
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        num = num.rem_euclid(2 * den);
        if num == 0 {
            den = 1;
        }
        Ok(RationalAngle { num, den })
    }

    /// `num/den * pi` with both parts known to be in range; panics on zero denominators.
    pub fn of(num: i64, den: i64) -> RationalAngle {
        RationalAngle::new(num, den).expect("nonzero denominator")
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_pi(&self) -> bool {
        self.num == 1 && self.den == 1
    }

    /// True for angles in `{0, pi}`.
    pub fn is_multiple_of_pi(&self) -> bool {
        self.den == 1
    }

    pub fn add(&self, other: &RationalAngle) -> RationalAngle {
        RationalAngle::of(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
        )
    }

    pub fn sub(&self, other: &RationalAngle) -> RationalAngle {
        RationalAngle::of(
            self.num * other.den - other.num * self.den,
            self.den * other.den,
        )
    }

    pub fn neg(&self) -> RationalAngle {
        RationalAngle::of(-self.num, self.den)
    }

    /// Multiplies the angle by an integer, reducing modulo `2*pi`.
    pub fn scale(&self, k: i64) -> RationalAngle {
        RationalAngle::of(self.num.checked_mul(k).expect("angle scale overflow"), self.den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 * PI / self.den as f64
    }

    /// Writes the angle as `e^{i*angle} = zeta_N^k` with `N` minimal:
    /// `angle = 2*pi*k/N` in lowest terms. Returns `(N, k)`.
    pub fn as_root_of_unity(&self) -> (u64, u64) {
        // num/den * pi = 2*pi * num/(2*den)
        let n = 2 * self.den as u64;
        let k = self.num as u64;
        let g = k.gcd(&n);
        (n / g, k / g)
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "0"),
            (1, 1) => write!(f, "pi"),
            (n, 1) => write!(f, "{n}*pi"),
            (1, d) => write!(f, "pi/{d}"),
            (n, d) => write!(f, "{n}*pi/{d}"),
        }
    }
}

/// A concrete angle: exact rational multiple of pi, or a real number of radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Rational(RationalAngle),
    Real(f64),
}

impl Angle {
    pub const ZERO: Angle = Angle::Rational(RationalAngle::ZERO);

    pub fn rational(num: i64, den: i64) -> Result<Angle, ZxError> {
        Ok(Angle::Rational(RationalAngle::new(num, den)?))
    }

    pub fn real(radians: f64) -> Angle {
        Angle::Real(radians.rem_euclid(2.0 * PI))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Angle::Rational(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Angle::Rational(r) => r.to_f64(),
            Angle::Real(x) => *x,
        }
    }

    pub fn add(&self, other: &Angle) -> Angle {
        match (self, other) {
            (Angle::Rational(a), Angle::Rational(b)) => Angle::Rational(a.add(b)),
            _ => Angle::real(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Angle) -> Angle {
        match (self, other) {
            (Angle::Rational(a), Angle::Rational(b)) => Angle::Rational(a.sub(b)),
            _ => Angle::real(self.to_f64() - other.to_f64()),
        }
    }

    pub fn neg(&self) -> Angle {
        match self {
            Angle::Rational(a) => Angle::Rational(a.neg()),
            Angle::Real(x) => Angle::real(-x),
        }
    }

    /// Multiplies by an integer, reducing modulo `2*pi`.
    pub fn scale(&self, k: i64) -> Angle {
        match self {
            Angle::Rational(a) => Angle::Rational(a.scale(k)),
            Angle::Real(x) => Angle::real(k as f64 * x),
        }
    }

    /// Equality modulo `2*pi`: exact on two rationals, within `tol` radians otherwise.
    pub fn approx_eq(&self, other: &Angle, tol: f64) -> bool {
        match (self, other) {
            (Angle::Rational(a), Angle::Rational(b)) => a == b,
            _ => {
                let d = (self.to_f64() - other.to_f64()).rem_euclid(2.0 * PI);
                d <= tol || (2.0 * PI - d) <= tol
            }
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Rational(r) => write!(f, "{r}"),
            Angle::Real(x) => write!(f, "{x}r"),
        }
    }
}

// Angles serialize as their display form, which the angle grammar parses back.
impl serde::Serialize for RationalAngle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl serde::Serialize for Angle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
