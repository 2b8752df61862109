//! Physical constants (CODATA 2018 exact or recommended values).

use core::f64::consts::PI;

pub const REDUCED_PLANCK: f64 = 1.054_571_817e-34;
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

pub const TWO_PI: f64 = 2.0 * PI;

/// Upper end of the stable interval of the Mathieu parameter `q`.
pub const STABILITY_LIMIT_Q: f64 = 0.908;

/// Working point used as the adiabatic threshold for `q`.
pub const ADIABATIC_LIMIT_Q: f64 = 0.4;

/// Linewidth assumed when a species has no better datum, 2π × 20 MHz.
pub const DEFAULT_LINEWIDTH: f64 = TWO_PI * 20.0e6;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PhysicalConstants {
    /// J·s
    pub reduced_planck: f64,
    /// C
    pub elementary_charge: f64,
    /// kg
    pub atomic_mass_unit: f64,
}

pub const CODATA: PhysicalConstants = PhysicalConstants {
    reduced_planck: REDUCED_PLANCK,
    elementary_charge: ELEMENTARY_CHARGE,
    atomic_mass_unit: ATOMIC_MASS_UNIT,
};

/// Converts an ordinary frequency in Hz to rad/s.
#[inline]
pub fn angular(hz: f64) -> f64 {
    TWO_PI * hz
}

/// Converts rad/s to an ordinary frequency in Hz.
#[inline]
pub fn ordinary(rad_s: f64) -> f64 {
    rad_s / TWO_PI
}
