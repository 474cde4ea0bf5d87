//! Positions, distances, and unit propagation vectors between the array
//! elements and the user terminal.
//!
//! The array lies on the y-axis with elements at `(0, m·Δ_T, 0)` for
//! `m = -M..=M`; the terminal sits on the positive z-axis at `(0, 0, D)`.
//! Rays point from the terminal toward the elements.

use nalgebra::Vector3;

use crate::error::{Error, Result};

/// Medium constant and carrier wavelength; fixes the global field
/// amplitude scale `η/2λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    eta: f64,
    wavelength: f64,
}

impl PhysicalConstants {
    pub fn new(eta: f64, wavelength: f64) -> Result<Self> {
        if !eta.is_finite() || eta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "eta must be > 0, got {eta}"
            )));
        }
        if !wavelength.is_finite() || wavelength <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "wavelength must be > 0, got {wavelength}"
            )));
        }
        Ok(Self { eta, wavelength })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Field amplitude scale `η/2λ`.
    pub fn amplitude(&self) -> f64 {
        self.eta / (2.0 * self.wavelength)
    }

    /// Power scale `(η/2λ)²`; every Gramian eigenvalue carries this factor.
    pub fn amplitude_sq(&self) -> f64 {
        self.amplitude() * self.amplitude()
    }
}

impl Default for PhysicalConstants {
    /// 3 GHz carrier in a unit medium: `η = 1`, `λ = 0.1` m.
    fn default() -> Self {
        Self {
            eta: 1.0,
            wavelength: 0.1,
        }
    }
}

/// Uniform linear array with `2M+1` elements spaced `Δ_T` apart.
///
/// `Δ_T = 0` is allowed: all elements collapse onto the origin (the
/// dipole-pair optimum sits at that boundary).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UlaGeometry {
    half_count: usize,
    spacing: f64,
}

impl UlaGeometry {
    pub fn new(half_count: usize, spacing: f64) -> Result<Self> {
        if !spacing.is_finite() || spacing < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "spacing must be finite and >= 0, got {spacing}"
            )));
        }
        Ok(Self {
            half_count,
            spacing,
        })
    }

    /// Build from the total array length `L = 2M·Δ_T`.
    pub fn from_length(half_count: usize, length: f64) -> Result<Self> {
        if !length.is_finite() || length < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "array length must be finite and >= 0, got {length}"
            )));
        }
        if half_count == 0 {
            if length > 0.0 {
                return Err(Error::InvalidParameter(
                    "a single-element array has zero length".into(),
                ));
            }
            return Ok(Self {
                half_count: 0,
                spacing: 0.0,
            });
        }
        Ok(Self {
            half_count,
            spacing: length / (2.0 * half_count as f64),
        })
    }

    /// Half-count `M`.
    pub fn half_count(&self) -> usize {
        self.half_count
    }

    /// Element separation `Δ_T` in meters.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Number of elements `M_t = 2M+1` (always odd).
    pub fn element_count(&self) -> usize {
        2 * self.half_count + 1
    }

    /// Total array length `L = 2M·Δ_T` in meters.
    pub fn length(&self) -> f64 {
        2.0 * self.half_count as f64 * self.spacing
    }
}

/// Terminal position on the z-axis at distance `D > 0` from the array center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UePosition {
    distance: f64,
}

impl UePosition {
    pub fn new(distance: f64) -> Result<Self> {
        if !distance.is_finite() || distance <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "terminal distance must be > 0, got {distance}"
            )));
        }
        Ok(Self { distance })
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }
}

/// Ray from the terminal to one array element: index, length, direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationRay {
    /// Element index `m` in `[-M, M]`.
    pub index: i64,
    /// Distance `r_m = sqrt(D² + m²Δ_T²)`.
    pub distance: f64,
    /// Unit vector toward the element; x-component is always zero.
    pub unit_vector: Vector3<f64>,
}

/// Ray from the terminal at `(0,0,D)` to element `m` at `(0, m·Δ_T, 0)`.
pub fn ray(geometry: &UlaGeometry, ue: &UePosition, index: i64) -> Result<PropagationRay> {
    let half = geometry.half_count() as i64;
    if index < -half || index > half {
        return Err(Error::IndexOutOfRange {
            index,
            half_count: half,
        });
    }
    let offset = index as f64 * geometry.spacing();
    let depth = ue.distance();
    let distance = offset.hypot(depth);
    Ok(PropagationRay {
        index,
        distance,
        unit_vector: Vector3::new(0.0, offset, -depth) / distance,
    })
}

/// All `2M+1` rays in index order `m = -M..=M`.
pub fn all_rays(geometry: &UlaGeometry, ue: &UePosition) -> Vec<PropagationRay> {
    let half = geometry.half_count() as i64;
    (-half..=half)
        .map(|m| ray(geometry, ue, m).expect("index is in range by construction"))
        .collect()
}
