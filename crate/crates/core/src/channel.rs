//! Per-element polarized channel matrices from the infinitesimal-dipole
//! field model, and assembly of the equivalent wideband-free channel.
//!
//! Each array element carries up to three orthogonal dipoles ordered x, y, z
//! (dipole 1 = x, 2 = y, 3 = z, so the two-dipole case keeps the x and y
//! feeds). The full 3×3 element channel is
//!
//! ```text
//! H_m = j (η/2λ) exp(-j 2π r_m / λ) / r_m · (I - r̂ r̂ᵀ [+ Ψ_m])
//! ```
//!
//! where `I - r̂ r̂ᵀ` is the transverse projector of the radiated field and
//! `Ψ_m` is the reactive near-field term, disabled by default since it decays
//! like `λ/r` and is negligible a few wavelengths out.

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{all_rays, PhysicalConstants, PropagationRay, UePosition, UlaGeometry};

/// Number of dipoles fed at each end: `(r_pol, t_pol) ∈ {2,3}²`.
///
/// The `(2,3)` combination is accepted but flagged non-canonical: nothing in
/// the closed-form analysis covers it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolarizationConfig {
    r_pol: usize,
    t_pol: usize,
}

impl PolarizationConfig {
    /// Tripole array, tripole terminal.
    pub const THREE_THREE: Self = Self { r_pol: 3, t_pol: 3 };
    /// Two-dipole array, tripole terminal.
    pub const THREE_TWO: Self = Self { r_pol: 3, t_pol: 2 };
    /// Two-dipole array and terminal.
    pub const TWO_TWO: Self = Self { r_pol: 2, t_pol: 2 };

    /// The three configurations covered by the closed-form analysis.
    pub const CANONICAL: [Self; 3] = [Self::THREE_THREE, Self::THREE_TWO, Self::TWO_TWO];

    pub fn new(r_pol: usize, t_pol: usize) -> Result<Self> {
        for (name, v) in [("r_pol", r_pol), ("t_pol", t_pol)] {
            if !(2..=3).contains(&v) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be 2 or 3, got {v}"
                )));
            }
        }
        Ok(Self { r_pol, t_pol })
    }

    /// Receive-side dipole count.
    pub fn r_pol(&self) -> usize {
        self.r_pol
    }

    /// Transmit-side dipole count.
    pub fn t_pol(&self) -> usize {
        self.t_pol
    }

    /// False only for `(2,3)`, which the analysis never uses.
    pub fn is_canonical(&self) -> bool {
        !(self.r_pol == 2 && self.t_pol == 3)
    }

    pub fn label(&self) -> String {
        format!("{}x{}", self.r_pol, self.t_pol)
    }
}

/// Transverse projector `I - r̂ r̂ᵀ` of the radiated field.
///
/// Symmetric, idempotent, rank 2 for any unit `r̂`.
pub fn radiative_projector(ray: &PropagationRay) -> Matrix3<f64> {
    Matrix3::identity() - ray.unit_vector * ray.unit_vector.transpose()
}

/// Reactive near-field term `Ψ_m = λ(j2πr - λ)/(2πr)² · (I - 3 r̂ r̂ᵀ)`.
pub fn reactive_term(constants: &PhysicalConstants, ray: &PropagationRay) -> Matrix3<Complex64> {
    let lambda = constants.wavelength();
    let r = ray.distance;
    let scale = Complex64::new(-lambda, TAU * r) * lambda / (TAU * r).powi(2);
    let pattern = Matrix3::identity() - 3.0 * ray.unit_vector * ray.unit_vector.transpose();
    pattern.map(|x| scale * x)
}

/// Channel matrix of a single array element.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementChannel {
    /// Element index `m`.
    pub index: i64,
    /// Full 3×3 matrix, or `r_pol × t_pol` after truncation.
    pub matrix: DMatrix<Complex64>,
    /// Whether the reactive term was included.
    pub reactive_included: bool,
}

impl ElementChannel {
    /// Keep the leading `r_pol` rows and `t_pol` columns (x, y, z order).
    pub fn truncate(&self, config: PolarizationConfig) -> ElementChannel {
        ElementChannel {
            index: self.index,
            matrix: self
                .matrix
                .view((0, 0), (config.r_pol(), config.t_pol()))
                .into_owned(),
            reactive_included: self.reactive_included,
        }
    }
}

/// Full 3×3 channel of one element from the dipole field model.
pub fn element_channel(
    constants: &PhysicalConstants,
    ray: &PropagationRay,
    include_reactive: bool,
) -> Result<ElementChannel> {
    let r = ray.distance;
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::Singularity);
    }
    let phase = TAU * r / constants.wavelength();
    let scalar = Complex64::i() * constants.amplitude() / r * Complex64::cis(-phase);

    let mut pattern: Matrix3<Complex64> = radiative_projector(ray).map(|x| Complex64::new(x, 0.0));
    if include_reactive {
        pattern += reactive_term(constants, ray);
    }
    let matrix = DMatrix::from_fn(3, 3, |i, j| scalar * pattern[(i, j)]);
    Ok(ElementChannel {
        index: ray.index,
        matrix,
        reactive_included: include_reactive,
    })
}

/// Complete description of one link: constants, array, terminal, feeds.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub constants: PhysicalConstants,
    pub geometry: UlaGeometry,
    pub ue: UePosition,
    pub config: PolarizationConfig,
    pub include_reactive: bool,
}

impl Scenario {
    pub fn new(
        constants: PhysicalConstants,
        geometry: UlaGeometry,
        ue: UePosition,
        config: PolarizationConfig,
    ) -> Self {
        Self {
            constants,
            geometry,
            ue,
            config,
            include_reactive: false,
        }
    }

    pub fn with_reactive(mut self, include: bool) -> Self {
        self.include_reactive = include;
        self
    }

    /// Same link with the terminal moved to distance `d`.
    pub fn with_distance(&self, d: f64) -> Result<Self> {
        Ok(Self {
            ue: UePosition::new(d)?,
            ..self.clone()
        })
    }
}

/// Equivalent channel `H_eq = [H̄_{-M}, …, H̄_M]` of shape
/// `r_pol × t_pol·(2M+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentChannel {
    pub matrix: DMatrix<Complex64>,
    pub scenario: Scenario,
}

/// Assemble the equivalent channel by concatenating truncated element
/// channels in index order.
pub fn equivalent_channel(scenario: &Scenario) -> EquivalentChannel {
    let (r_pol, t_pol) = (scenario.config.r_pol(), scenario.config.t_pol());
    let count = scenario.geometry.element_count();
    let mut matrix = DMatrix::zeros(r_pol, t_pol * count);
    for (slot, ray) in all_rays(&scenario.geometry, &scenario.ue)
        .iter()
        .enumerate()
    {
        let element = element_channel(&scenario.constants, ray, scenario.include_reactive)
            .expect("ray distances are positive by construction")
            .truncate(scenario.config);
        matrix
            .view_mut((0, slot * t_pol), (r_pol, t_pol))
            .copy_from(&element.matrix);
    }
    EquivalentChannel {
        matrix,
        scenario: scenario.clone(),
    }
}
