//! Near-field line-of-sight MIMO between a polarized uniform linear array
//! and a single polarized terminal.
//!
//! The crate models each array element as up to three orthogonal
//! infinitesimal dipoles, builds the equivalent channel from the dipole
//! field, and analyzes the channel Gramian three ways: exact summation,
//! inverse-distance power sums, and closed-form large-array approximations.
//! On top of the spectra sit water-filling capacity, the high-SNR rate
//! decomposition with its optimal element spacing, and near-field
//! beamfocusing evaluation along the array axis.

pub mod beamfocus;
pub mod capacity;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod optim;
pub mod spectrum;

pub use channel::{PolarizationConfig, Scenario};
pub use error::{Error, Result};
pub use geometry::{PhysicalConstants, UePosition, UlaGeometry};
