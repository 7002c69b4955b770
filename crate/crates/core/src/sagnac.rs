//! Rotation kinematics of a ring interferometer and the classical two-port fringe.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s (exact by SI definition).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Geometry and rotation state of a ring (or fiber-coil) interferometer.
///
/// `fiber_length == 0` selects single-loop area mode, where the enclosed area
/// is `area` if set and `π R²` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotationParameters {
    pub radius: f64,
    pub angular_velocity: f64,
    pub wavelength: f64,
    pub fiber_length: f64,
    pub area: Option<f64>,
    pub light_speed: f64,
}

impl RotationParameters {
    pub fn new(radius: f64, angular_velocity: f64, wavelength: f64) -> Self {
        Self {
            radius,
            angular_velocity,
            wavelength,
            fiber_length: 0.0,
            area: None,
            light_speed: SPEED_OF_LIGHT,
        }
    }

    pub fn with_fiber_length(mut self, length: f64) -> Self {
        self.fiber_length = length;
        self
    }

    pub fn with_area(mut self, area: f64) -> Self {
        self.area = Some(area);
        self
    }

    pub fn with_light_speed(mut self, c: f64) -> Self {
        self.light_speed = c;
        self
    }

    /// Enclosed area used in area mode.
    pub fn enclosed_area(&self) -> f64 {
        self.area
            .unwrap_or(std::f64::consts::PI * self.radius * self.radius)
    }

    /// Perimeter speed `R Ω` as a fraction of the light speed.
    pub fn beta(&self) -> f64 {
        self.radius * self.angular_velocity / self.light_speed
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.radius,
            self.angular_velocity,
            self.wavelength,
            self.fiber_length,
            self.light_speed,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Domain("rotation parameters must be finite".into()));
        }
        if !(self.radius > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {}", self.radius)));
        }
        if !(self.wavelength > 0.0) {
            return Err(Error::Domain(format!(
                "wavelength must be positive, got {}",
                self.wavelength
            )));
        }
        if !(self.light_speed > 0.0) {
            return Err(Error::Domain(format!(
                "light speed must be positive, got {}",
                self.light_speed
            )));
        }
        if self.fiber_length < 0.0 {
            return Err(Error::Domain(format!(
                "fiber length must be non-negative, got {}",
                self.fiber_length
            )));
        }
        if let Some(a) = self.area {
            if !(a > 0.0 && a.is_finite()) {
                return Err(Error::Domain(format!("area must be positive, got {a}")));
            }
        }
        if self.beta().abs() >= 1.0 {
            return Err(Error::Domain(format!(
                "perimeter speed |R Ω| = {} m/s is not below the light speed",
                (self.radius * self.angular_velocity).abs()
            )));
        }
        Ok(())
    }
}

/// Arrival-time difference between the counter-propagating beams after one
/// round trip. `exact` keeps the `R²Ω²` term in the denominator.
pub fn round_trip_delay(params: &RotationParameters, exact: bool) -> Result<f64> {
    params.validate()?;
    let RotationParameters {
        radius: r,
        angular_velocity: omega,
        light_speed: c,
        ..
    } = *params;
    let numerator = 4.0 * std::f64::consts::PI * r * r * omega;
    let denominator = if exact {
        c * c - r * r * omega * omega
    } else {
        c * c
    };
    Ok(numerator / denominator)
}

/// Rotation-induced phase between the counter-propagating beams, in radians.
///
/// Coil mode (`fiber_length > 0`): `4π L R Ω / (λ c)`.
/// Area mode: `8π A Ω / (λ c)`.
pub fn rotation_phase(params: &RotationParameters) -> Result<f64> {
    params.validate()?;
    let lambda_c = params.wavelength * params.light_speed;
    let four_pi = 4.0 * std::f64::consts::PI;
    let phi = if params.fiber_length > 0.0 {
        four_pi * params.fiber_length * params.radius * params.angular_velocity / lambda_c
    } else {
        2.0 * four_pi * params.enclosed_area() * params.angular_velocity / lambda_c
    };
    Ok(phi)
}

/// A monochromatic classical input field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalField {
    pub amplitude: Complex64,
    pub frequency: f64,
}

impl ClassicalField {
    pub fn new(amplitude: Complex64, frequency: f64) -> Self {
        Self {
            amplitude,
            frequency,
        }
    }

    pub fn intensity(&self) -> f64 {
        self.amplitude.norm_sqr()
    }
}

/// Detector intensities `(I1, I2)` at the two output ports for a classical
/// field entering port 1.
pub fn classical_fringe(field: &ClassicalField, phi: f64) -> (f64, f64) {
    let i0 = field.intensity();
    let half = 0.5 * phi;
    let (s, c) = half.sin_cos();
    (i0 * s * s, i0 * c * c)
}
