//! Water-filling achievable rate, degrees-of-freedom slope, the high-SNR
//! rate decomposition `C ≈ C₀(ρ, M, D) + α(ε)`, and the optimal normalized
//! aperture per polarization configuration.
//!
//! The offset functions (with `ζ = arctan(ε)/ε` and `c = 1/(ε²+1)`):
//!
//! ```text
//! α(3,3) = log₂( 2ζ (ζ + c)(ζ - c) )
//! α(3,2) = log₂( 8ζ (3ζ + (3ε²+5)c²)(ζ + (ε²-1)c²) )
//! α(2,2) = log₂( 8ζ (3ζ + (3ε²+5)c²) )
//! ```
//!
//! α(3,3) and α(3,2) peak at ε* ≈ 0.9058 and 0.7144; α(2,2) is strictly
//! decreasing, so the dipole-pair optimum sits at the ε = 0 boundary where
//! α(2,2) = log₂(64) = 6.

use std::f64::consts::LOG2_10;

use crate::channel::{PolarizationConfig, Scenario};
use crate::geometry::{PhysicalConstants, UlaGeometry};
use crate::optim::scan_and_refine_max;
use crate::spectrum::{exact_gramian, zeta};

/// Convert an SNR in dB to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10.0_f64.powf(db / 10.0)
}

/// Power fractions over the spectral modes plus the common water level.
///
/// Active modes satisfy `p_n = μ - 1/(ρλ_n)`; inactive ones fail the
/// activation threshold `μ > 1/(ρλ_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    pub fractions: Vec<f64>,
    pub water_level: f64,
}

/// Achievable rate with its allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RateResult {
    /// bits/s/Hz
    pub rate: f64,
    pub allocation: PowerAllocation,
    pub active_modes: usize,
}

/// Water-filling over `eigenvalues` at linear SNR `rho` under the unit
/// total-power constraint: `p_n = [μ - 1/(ρλ_n)]⁺` with `Σ p_n = 1`.
///
/// Exact mode-dropping: the candidate active set shrinks from all positive
/// modes until every allocated fraction is positive. Fractions are returned
/// in the order of the input eigenvalues. An all-zero spectrum yields a
/// zero-rate result with an empty allocation.
pub fn waterfill(eigenvalues: &[f64], rho: f64) -> RateResult {
    assert!(rho > 0.0, "SNR must be positive");
    let mut order: Vec<usize> = (0..eigenvalues.len())
        .filter(|&i| eigenvalues[i] > 0.0)
        .collect();
    if order.is_empty() {
        return RateResult {
            rate: 0.0,
            allocation: PowerAllocation {
                fractions: Vec::new(),
                water_level: 0.0,
            },
            active_modes: 0,
        };
    }
    order.sort_by(|&a, &b| eigenvalues[b].partial_cmp(&eigenvalues[a]).expect("finite"));

    let inv_gain: Vec<f64> = order
        .iter()
        .map(|&i| 1.0 / (rho * eigenvalues[i]))
        .collect();
    let mut active = order.len();
    let mut level = 0.0;
    while active > 0 {
        level = (1.0 + inv_gain[..active].iter().sum::<f64>()) / active as f64;
        // sorted descending, so the last candidate is the binding one
        if level > inv_gain[active - 1] {
            break;
        }
        active -= 1;
    }

    let mut fractions = vec![0.0; eigenvalues.len()];
    for (rank, &i) in order.iter().enumerate().take(active) {
        fractions[i] = level - inv_gain[rank];
    }
    let rate = fractions
        .iter()
        .zip(eigenvalues)
        .map(|(&p, &l)| (1.0 + rho * p * l).log2())
        .sum();
    RateResult {
        rate,
        allocation: PowerAllocation {
            fractions,
            water_level: level,
        },
        active_modes: active,
    }
}

/// Water-filling rate over the exact Gramian spectrum of a scenario.
pub fn achievable_rate(scenario: &Scenario, rho: f64) -> RateResult {
    waterfill(&exact_gramian(scenario).eigenvalues, rho)
}

/// Finite-difference slope of the rate versus `log₂ρ` between two SNRs in
/// dB; estimates the number of spatial transmission modes when both SNRs
/// are high enough for every positive mode to run in its log-linear regime.
pub fn dof_slope(scenario: &Scenario, rho_low_db: f64, rho_high_db: f64) -> f64 {
    assert!(rho_high_db > rho_low_db);
    let c_low = achievable_rate(scenario, db_to_linear(rho_low_db)).rate;
    let c_high = achievable_rate(scenario, db_to_linear(rho_high_db)).rate;
    (c_high - c_low) / ((rho_high_db - rho_low_db) / 10.0 * LOG2_10)
}

fn assert_canonical(config: PolarizationConfig) {
    assert!(
        config.is_canonical(),
        "rate analysis covers the (3,3), (3,2) and (2,2) configurations only"
    );
}

/// High-SNR rate offset α(ε) in bits for the three canonical configurations.
///
/// Returns `-inf` where the underlying eigenvalue product is non-positive
/// (ε = 0 for the three-dipole configurations).
pub fn alpha_function(config: PolarizationConfig, epsilon: f64) -> f64 {
    assert_canonical(config);
    assert!(epsilon >= 0.0, "epsilon must be >= 0");
    let z = zeta(epsilon);
    let c = 1.0 / (epsilon * epsilon + 1.0);
    let arg = match (config.r_pol(), config.t_pol()) {
        (3, 3) => 2.0 * z * (z + c) * (z - c),
        (3, 2) => {
            8.0 * z
                * (3.0 * z + (3.0 * epsilon * epsilon + 5.0) * c * c)
                * (z + (epsilon * epsilon - 1.0) * c * c)
        }
        _ => 8.0 * z * (3.0 * z + (3.0 * epsilon * epsilon + 5.0) * c * c),
    };
    if arg > 0.0 {
        arg.log2()
    } else {
        f64::NEG_INFINITY
    }
}

/// Maximizer of α over ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalAperture {
    pub epsilon: f64,
    /// α(ε*) in bits.
    pub alpha: f64,
}

/// Maximize α over `ε ∈ [0, 50]` by a 10⁴-point scan plus golden-section
/// refinement to 1e-6 in ε.
///
/// For `(2,2)` the maximum sits at the ε = 0 boundary.
pub fn optimal_epsilon(config: PolarizationConfig) -> OptimalAperture {
    assert_canonical(config);
    let (epsilon, alpha) =
        scan_and_refine_max(|e| alpha_function(config, e), 0.0, 50.0, 10_000, 1e-6);
    OptimalAperture { epsilon, alpha }
}

/// High-SNR rate approximation `C ≈ C₀ + α(ε*)` evaluated at the optimal
/// aperture, with the implied spacing and array size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighSnrApprox {
    /// Configuration-dependent base rate `C₀(ρ, M, D)` in bits/s/Hz.
    pub c0: f64,
    /// Offset α(ε*) in bits.
    pub alpha: f64,
    pub epsilon_star: f64,
    /// Optimal spacing `Δ_T* = ε*·D/M`.
    pub delta_t_star: f64,
    /// Predicted array size `L = 2MΔ_T* = 2ε*D`.
    pub ula_size: f64,
}

impl HighSnrApprox {
    /// Approximate achievable rate `C₀ + α`.
    pub fn rate(&self) -> f64 {
        self.c0 + self.alpha
    }
}

/// High-SNR achievable-rate approximation at the optimal spacing.
///
/// `C₀` splits the power evenly over the active modes (three for the
/// tripole-receive configurations, two for the dipole pair):
///
/// ```text
/// C₀(3,3) = 3 log₂( (η/2λ)²  M/D²    ρ/3 )
/// C₀(3,2) = 3 log₂( (η/2λ)²  M/(4D²) ρ/3 )
/// C₀(2,2) = 2 log₂( (η/2λ)²  M/(4D²) ρ/2 )
/// ```
pub fn high_snr_rate(
    config: PolarizationConfig,
    constants: &PhysicalConstants,
    half_count: usize,
    distance: f64,
    rho: f64,
) -> HighSnrApprox {
    assert_canonical(config);
    let m = half_count as f64;
    let q = constants.amplitude_sq();
    let d2 = distance * distance;
    let c0 = match (config.r_pol(), config.t_pol()) {
        (3, 3) => 3.0 * (q * m / d2 * rho / 3.0).log2(),
        (3, 2) => 3.0 * (q * m / (4.0 * d2) * rho / 3.0).log2(),
        _ => 2.0 * (q * m / (4.0 * d2) * rho / 2.0).log2(),
    };
    let opt = optimal_epsilon(config);
    let delta_t_star = opt.epsilon * distance / m;
    HighSnrApprox {
        c0,
        alpha: opt.alpha,
        epsilon_star: opt.epsilon,
        delta_t_star,
        ula_size: 2.0 * opt.epsilon * distance,
    }
}

/// Numerically optimal element spacing for the exact water-filled rate:
/// coarse scan plus golden-section over `Δ_T ∈ [0, 4D/M]`.
///
/// Everything but the spacing is taken from `scenario`, including the
/// reactive flag; returns the optimal spacing and the rate there.
pub fn optimal_spacing(scenario: &Scenario, rho: f64) -> (f64, RateResult) {
    let half_count = scenario.geometry.half_count();
    let at = |dt: f64| {
        let mut probe = scenario.clone();
        probe.geometry = UlaGeometry::new(half_count, dt).expect("non-negative spacing");
        achievable_rate(&probe, rho)
    };
    if half_count == 0 {
        return (0.0, at(0.0));
    }
    let hi = 4.0 * scenario.ue.distance() / half_count as f64;
    let (dt, _) = scan_and_refine_max(|dt| at(dt).rate, 0.0, hi, 256, 1e-6 * hi);
    (dt, at(dt))
}
