//! Exact rational phases, expressed as multiples of π and reduced into `[0, 2)`.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};

/// A phase `p/q · π`, always normalized into `[0, 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Rational64);

impl Phase {
    pub fn new(numer: i64, denom: i64) -> Self {
        Self::from_rational(Rational64::new(numer, denom))
    }

    pub fn from_rational(r: Rational64) -> Self {
        let two = Rational64::from_integer(2);
        let mut r = r % two;
        if r < Rational64::zero() {
            r += two;
        }
        Phase(r)
    }

    pub fn zero() -> Self {
        Phase(Rational64::zero())
    }

    pub fn pi() -> Self {
        Phase(Rational64::one())
    }

    pub fn half_pi() -> Self {
        Phase::new(1, 2)
    }

    pub fn quarter_pi() -> Self {
        Phase::new(1, 4)
    }

    /// The rational multiple of π in `[0, 2)`.
    pub fn to_rational(self) -> Rational64 {
        self.0
    }

    pub fn to_radians(self) -> f64 {
        std::f64::consts::PI * (*self.0.numer() as f64) / (*self.0.denom() as f64)
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    /// 0 or π.
    pub fn is_pauli(self) -> bool {
        *self.0.denom() == 1
    }

    /// ±π/2.
    pub fn is_proper_clifford(self) -> bool {
        *self.0.denom() == 2
    }

    /// Integer multiple of π/2.
    pub fn is_clifford(self) -> bool {
        *self.0.denom() <= 2
    }

    /// Odd multiple of π/4, i.e. exactly one T (or T†) away from a Clifford phase.
    pub fn is_odd_quarter(self) -> bool {
        *self.0.denom() == 4
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::zero()
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase::from_rational(self.0 + rhs.0)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase::from_rational(self.0 - rhs.0)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::from_rational(-self.0)
    }
}

/// Renders as `p/q` (units of π), e.g. `1/4`, `0/1`.
impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid phase literal `{0}`")]
pub struct ParsePhaseError(pub String);

/// Accepts `p/q` or `p` (units of π), and the angle spellings `pi`, `-pi/4`, `3pi/8`, `0`.
impl FromStr for Phase {
    type Err = ParsePhaseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParsePhaseError(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        let (num_part, den_part) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (t, None),
        };
        let numer: i64 = if let Some(coeff) = num_part.strip_suffix("pi") {
            match coeff.trim() {
                "" | "+" => 1,
                "-" => -1,
                c => c.parse().map_err(|_| err())?,
            }
        } else {
            num_part.parse().map_err(|_| err())?
        };
        let denom: i64 = match den_part {
            Some(d) => d.parse().map_err(|_| err())?,
            None => 1,
        };
        if denom == 0 {
            return Err(err());
        }
        Ok(Phase::new(numer, denom))
    }
}
