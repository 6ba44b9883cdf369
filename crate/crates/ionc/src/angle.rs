//! Rotation angles stored in units of pi, normalized into `[0, 2)`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Comparison tolerance for angle classification, in units of pi.
pub const ANGLE_EPS: f64 = 1e-9;

/// A rotation angle in units of pi, kept normalized into `[0, 2)`.
///
/// Every constructor and arithmetic operation re-normalizes, so `Angle(1.5)`
/// and `Angle(-0.5)` compare equal and a chain of merges cannot drift out of
/// range.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);
    pub const HALF_PI: Angle = Angle(0.5);
    pub const PI: Angle = Angle(1.0);
    pub const THREE_HALF_PI: Angle = Angle(1.5);

    /// Builds an angle from a value in units of pi.
    pub fn from_pi(units: f64) -> Angle {
        Angle(normalize(units))
    }

    /// Builds an angle from a value in radians.
    pub fn from_radians(rad: f64) -> Angle {
        Angle::from_pi(rad / std::f64::consts::PI)
    }

    /// The angle in units of pi, in `[0, 2)`.
    pub fn units(self) -> f64 {
        self.0
    }

    /// The angle in radians, in `[0, 2*pi)`.
    pub fn radians(self) -> f64 {
        self.0 * std::f64::consts::PI
    }

    /// Half of this angle. The result lives in `[0, 1)` of pi units.
    pub fn half(self) -> Angle {
        Angle::from_pi(self.0 / 2.0)
    }

    pub fn is_zero(self) -> bool {
        !(ANGLE_EPS..=2.0 - ANGLE_EPS).contains(&self.0)
    }

    /// True when the angle is an integer multiple of pi/2 (within tolerance).
    pub fn is_half_pi_multiple(self) -> bool {
        let m = self.0 * 2.0;
        (m - m.round()).abs() < 2.0 * ANGLE_EPS
    }

    /// True when the angle is an integer multiple of pi (within tolerance).
    pub fn is_pi_multiple(self) -> bool {
        let m = self.0;
        (m - m.round()).abs() < ANGLE_EPS
    }

    /// True when the angle is pi/2 or pi, the pre-calibrated pulse areas.
    pub fn is_native_pulse_area(self) -> bool {
        self.approx_eq(Angle::HALF_PI) || self.approx_eq(Angle::PI)
    }

    /// Tolerance-based equality, wrapping around at 2*pi.
    pub fn approx_eq(self, other: Angle) -> bool {
        let d = (self.0 - other.0).abs();
        !(ANGLE_EPS..=2.0 - ANGLE_EPS).contains(&d)
    }
}

fn normalize(units: f64) -> f64 {
    let r = units.rem_euclid(2.0);
    // rem_euclid can return exactly 2.0 for tiny negative inputs
    if r >= 2.0 {
        0.0
    } else {
        r
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::from_pi(self.0 + rhs.0)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle::from_pi(self.0 - rhs.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::from_pi(-self.0)
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}pi", self.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}pi", self.0)
    }
}
