//! Gramian of the equivalent channel: exact spectra by direct summation,
//! inverse-distance power sums, closed-form eigenvalue approximations in the
//! large-array limit, and the far-field rank probe.
//!
//! With the reactive term off, the Gramian `W = H_eq H_eqᴴ` is diagonal in
//! the dipole basis and its entries are weighted sums of inverse powers of
//! the element distances:
//!
//! ```text
//! W(3,3) = (η/2λ)² diag(β₂,      D²β₀,   Δ_T²β₁)      with β₂ = D²β₀ + Δ_T²β₁
//! W(3,2) = (η/2λ)² diag(β₂,      D⁴β₃,   D²Δ_T²β₄)
//! W(2,2) = (η/2λ)² diag(β₂,      D⁴β₃)
//! ```
//!
//! The closed forms replace each sum by its definite-integral limit, which
//! turns every eigenvalue into `(η/2λ)² M/D²` times a function of the single
//! shape parameter `ε = MΔ_T/D`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::{equivalent_channel, PolarizationConfig, Scenario};
use crate::geometry::{all_rays, PhysicalConstants, UePosition, UlaGeometry};

/// Exact partial sums over `m = -M..=M` with `r_m² = D² + m²Δ_T²`:
/// `β₀ = Σ 1/r⁴`, `β₁ = Σ m²/r⁴`, `β₂ = Σ 1/r²`, `β₃ = Σ 1/r⁶`,
/// `β₄ = Σ m²/r⁶`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaSums {
    pub beta0: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub beta3: f64,
    pub beta4: f64,
}

/// Direct summation of the five β sums.
pub fn beta_sums(geometry: &UlaGeometry, ue: &UePosition) -> BetaSums {
    let mut b = BetaSums {
        beta0: 0.0,
        beta1: 0.0,
        beta2: 0.0,
        beta3: 0.0,
        beta4: 0.0,
    };
    for ray in all_rays(geometry, ue) {
        let m_sq = (ray.index * ray.index) as f64;
        let r2 = ray.distance * ray.distance;
        let r4 = r2 * r2;
        let r6 = r4 * r2;
        b.beta0 += 1.0 / r4;
        b.beta1 += m_sq / r4;
        b.beta2 += 1.0 / r2;
        b.beta3 += 1.0 / r6;
        b.beta4 += m_sq / r6;
    }
    b
}

/// Definite-integral approximations of the β sums, exact in the limit
/// `M → ∞`, `Δ_T → 0` with `MΔ_T` fixed. Parameterized by `ω = D/Δ_T`.
///
/// Substituting `m = ω·tan(u)` reduces each sum to a trigonometric
/// antiderivative evaluated at `u* = arctan(M/ω)`.
pub fn integral_beta_approx(omega: f64, half_count: usize, distance: f64) -> BetaSums {
    let m = half_count as f64;
    let d = distance;
    let e = m / omega;
    let u = e.atan();
    let one_e2 = 1.0 + e * e;
    let sin_2u = 2.0 * e / one_e2;
    let sin_4u = 4.0 * e * (1.0 - e * e) / (one_e2 * one_e2);
    let d2 = d * d;
    let d4 = d2 * d2;
    let d6 = d4 * d2;
    BetaSums {
        beta0: omega / d4 * (u + sin_2u / 2.0),
        beta1: omega.powi(3) / d4 * (u - sin_2u / 2.0),
        beta2: omega / d2 * 2.0 * u,
        beta3: omega / d6 * (0.75 * u + sin_2u / 2.0 + sin_4u / 16.0),
        beta4: omega.powi(3) / d6 * (0.25 * u - sin_4u / 16.0),
    }
}

/// Normalized half-aperture `ε = MΔ_T/D` and its reciprocal scale
/// `ω = D/Δ_T` (infinite at zero spacing).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedAperture {
    epsilon: f64,
    omega: f64,
}

impl NormalizedAperture {
    pub fn new(geometry: &UlaGeometry, ue: &UePosition) -> Self {
        let omega = if geometry.spacing() > 0.0 {
            ue.distance() / geometry.spacing()
        } else {
            f64::INFINITY
        };
        Self {
            epsilon: geometry.half_count() as f64 * geometry.spacing() / ue.distance(),
            omega,
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn zeta(&self) -> f64 {
        zeta(self.epsilon)
    }
}

/// `ζ(ε) = arctan(ε)/ε`, continued to `ζ(0) = 1`.
pub fn zeta(epsilon: f64) -> f64 {
    if epsilon == 0.0 {
        1.0
    } else {
        epsilon.atan() / epsilon
    }
}

/// Where a spectrum came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSource {
    /// Eigendecomposition of the directly summed Gramian.
    ExactSum,
    /// Closed-form large-array approximation.
    ClosedForm,
}

/// Ordered Gramian eigenvalues plus their unsorted diagonal slots.
///
/// `eigenvalues` is descending; `slots` keeps the diagonal order of the
/// polarization basis (x, y, z feeds) so cross-configuration identities can
/// be checked slot by slot.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    pub slots: Vec<f64>,
    pub source: SpectrumSource,
}

impl SpectrumResult {
    fn from_slots(slots: Vec<f64>, source: SpectrumSource) -> Self {
        let mut eigenvalues = slots.clone();
        eigenvalues.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
        Self {
            eigenvalues,
            slots,
            source,
        }
    }
}

/// The Gramian `W = H_eq H_eqᴴ` of the assembled channel (`r_pol × r_pol`).
pub fn exact_gramian_matrix(scenario: &Scenario) -> DMatrix<Complex64> {
    let h = equivalent_channel(scenario).matrix;
    &h * h.adjoint()
}

/// Eigenvalues of the exact Gramian, descending, with diagonal slots.
pub fn exact_gramian(scenario: &Scenario) -> SpectrumResult {
    let w = exact_gramian_matrix(scenario);
    let slots: Vec<f64> = (0..w.nrows()).map(|i| w[(i, i)].re).collect();
    let mut eigenvalues: Vec<f64> = w
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&v| v.max(0.0))
        .collect();
    eigenvalues.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
    SpectrumResult {
        eigenvalues,
        slots,
        source: SpectrumSource::ExactSum,
    }
}

/// Closed-form eigenvalue approximations for the three canonical
/// configurations, as functions of `ε = MΔ_T/D`.
///
/// Slot order matches the Gramian diagonal. `ε = 0` uses the analytic
/// limits `ζ → 1`, `1/(ε²+1) → 1`.
///
/// # Panics
/// For the non-canonical `(2,3)` configuration, which the closed forms do
/// not cover.
pub fn closed_form_eigenvalues(
    config: PolarizationConfig,
    half_count: usize,
    epsilon: f64,
    constants: &PhysicalConstants,
    distance: f64,
) -> SpectrumResult {
    assert!(
        config.is_canonical(),
        "closed forms cover the (3,3), (3,2) and (2,2) configurations only"
    );
    let scale = constants.amplitude_sq() * half_count as f64 / (distance * distance);
    let z = zeta(epsilon);
    let c = 1.0 / (epsilon * epsilon + 1.0);
    let first = scale * 2.0 * z;
    // the two-dipole transmit slots are shared by (3,2) and (2,2)
    let second = scale / 4.0 * (3.0 * z + (3.0 * epsilon * epsilon + 5.0) * c * c);
    let slots = match (config.r_pol(), config.t_pol()) {
        (3, 3) => vec![first, scale * (z + c), scale * (z - c)],
        (3, 2) => vec![
            first,
            second,
            scale / 4.0 * (z + (epsilon * epsilon - 1.0) * c * c),
        ],
        _ => vec![first, second],
    };
    SpectrumResult::from_slots(slots, SpectrumSource::ClosedForm)
}

/// Exact `λ₃/λ₂` versus distance for a fixed array: evidence of the
/// far-field collapse to rank 2.
///
/// Returns `None` per distance when the configuration has fewer than three
/// receive dipoles (rank is at most 2 everywhere).
pub fn far_field_probe(
    config: PolarizationConfig,
    geometry: &UlaGeometry,
    constants: &PhysicalConstants,
    distances: &[f64],
) -> Vec<(f64, Option<f64>)> {
    distances
        .iter()
        .map(|&d| {
            let ue = UePosition::new(d).expect("probe distances must be positive");
            let scenario = Scenario::new(*constants, *geometry, ue, config);
            let spectrum = exact_gramian(&scenario);
            let ratio = (spectrum.eigenvalues.len() >= 3 && spectrum.eigenvalues[1] > 0.0)
                .then(|| spectrum.eigenvalues[2] / spectrum.eigenvalues[1]);
            (d, ratio)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn geom(m: usize, dt: f64) -> UlaGeometry {
        UlaGeometry::new(m, dt).unwrap()
    }

    fn ue(d: f64) -> UePosition {
        UePosition::new(d).unwrap()
    }

    fn scenario(m: usize, dt: f64, d: f64, config: PolarizationConfig) -> Scenario {
        Scenario::new(PhysicalConstants::default(), geom(m, dt), ue(d), config)
    }

    #[test]
    fn beta_sums_single_element() {
        let b = beta_sums(&geom(0, 1.0), &ue(2.0));
        assert_relative_eq!(b.beta0, 1.0 / 16.0);
        assert_relative_eq!(b.beta1, 0.0);
        assert_relative_eq!(b.beta2, 0.25);
        assert_relative_eq!(b.beta3, 1.0 / 64.0);
        assert_relative_eq!(b.beta4, 0.0);
    }

    #[test]
    fn beta_sums_three_elements() {
        // oracle: 1/1 + 2·(1/4) = 1.5 for β₀ at M=1, D=1, Δ=1
        let b = beta_sums(&geom(1, 1.0), &ue(1.0));
        assert_relative_eq!(b.beta0, 1.5, max_relative = 1e-15);
        assert_relative_eq!(b.beta1, 0.5, max_relative = 1e-15);
        assert_relative_eq!(b.beta2, 2.0, max_relative = 1e-15);
        assert_relative_eq!(b.beta3, 1.25, max_relative = 1e-15);
        assert_relative_eq!(b.beta4, 0.25, max_relative = 1e-15);
    }

    #[test]
    fn beta_identities() {
        for (m, dt, d) in [(5, 0.3, 2.0), (31, 0.05, 7.0), (200, 0.017, 1.3)] {
            let g = geom(m, dt);
            let u = ue(d);
            let b = beta_sums(&g, &u);
            let d2 = d * d;
            let dt2 = dt * dt;
            assert_relative_eq!(b.beta2, d2 * b.beta0 + dt2 * b.beta1, max_relative = 1e-12);
            assert_relative_eq!(b.beta0, d2 * b.beta3 + dt2 * b.beta4, max_relative = 1e-12);
        }
    }

    #[test]
    fn integral_approx_satisfies_the_same_identities() {
        let (m, dt, d) = (40, 0.11, 3.0);
        let b = integral_beta_approx(d / dt, m, d);
        assert_relative_eq!(
            b.beta2,
            d * d * b.beta0 + dt * dt * b.beta1,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            b.beta0,
            d * d * b.beta3 + dt * dt * b.beta4,
            max_relative = 1e-12
        );
    }

    #[test]
    fn integral_beta0_limit_for_huge_arrays() {
        // M → ∞ at fixed ω: β₀ → (ω/D⁴)·π/2
        let d = 5.0;
        let omega = 100.0;
        let b = integral_beta_approx(omega, 100_000_000, d);
        assert_relative_eq!(b.beta0, omega / d.powi(4) * FRAC_PI_2, max_relative = 1e-6);
    }

    #[test]
    fn integral_approx_tracks_direct_sums_below_one_percent() {
        let (m, dt, d) = (500, 0.01, 5.0);
        let sums = beta_sums(&geom(m, dt), &ue(d));
        let approx = integral_beta_approx(d / dt, m, d);
        for (a, b) in [
            (approx.beta0, sums.beta0),
            (approx.beta1, sums.beta1),
            (approx.beta2, sums.beta2),
            (approx.beta3, sums.beta3),
            (approx.beta4, sums.beta4),
        ] {
            assert!(((a - b) / b).abs() < 0.01, "approx {a} vs sum {b}");
        }
    }

    #[test]
    fn integral_approx_error_halves_when_doubling_m() {
        // fixed ε = 1, D = 5
        let d = 5.0;
        let err = |m: usize| {
            let dt = d / m as f64;
            let sums = beta_sums(&geom(m, dt), &ue(d));
            let approx = integral_beta_approx(d / dt, m, d);
            [
                (approx.beta0 - sums.beta0) / sums.beta0,
                (approx.beta1 - sums.beta1) / sums.beta1,
                (approx.beta2 - sums.beta2) / sums.beta2,
                (approx.beta3 - sums.beta3) / sums.beta3,
                (approx.beta4 - sums.beta4) / sums.beta4,
            ]
            .iter()
            .fold(0.0_f64, |acc, e| acc.max(e.abs()))
        };
        let mut last = err(25);
        for m in [50, 100, 200, 400] {
            let e = err(m);
            assert!(e < 0.6 * last, "error {e} at M={m} vs previous {last}");
            last = e;
        }
    }

    #[test]
    fn zeta_limits() {
        assert_eq!(zeta(0.0), 1.0);
        assert_relative_eq!(zeta(1e-12), 1.0, epsilon = 1e-15);
        assert_relative_eq!(zeta(1.0), PI / 4.0, max_relative = 1e-15);
    }

    #[test]
    fn aperture_fields() {
        let a = NormalizedAperture::new(&geom(15, 0.3), &ue(5.0));
        assert_relative_eq!(a.epsilon(), 0.9);
        assert_relative_eq!(a.omega(), 5.0 / 0.3);
        assert_relative_eq!(a.epsilon(), 15.0 / a.omega(), max_relative = 1e-15);
        let collapsed = NormalizedAperture::new(&geom(15, 0.0), &ue(5.0));
        assert_eq!(collapsed.epsilon(), 0.0);
        assert!(collapsed.omega().is_infinite());
    }

    #[test]
    fn exact_gramian_matches_beta_diagonals_for_all_configs() {
        // two independent routes: assembled channel vs direct summation
        let (m, dt, d) = (15, 0.3, 5.0);
        let b = beta_sums(&geom(m, dt), &ue(d));
        let q = PhysicalConstants::default().amplitude_sq();
        let cases = [
            (
                PolarizationConfig::THREE_THREE,
                vec![q * b.beta2, q * d * d * b.beta0, q * dt * dt * b.beta1],
            ),
            (
                PolarizationConfig::THREE_TWO,
                vec![
                    q * b.beta2,
                    q * d.powi(4) * b.beta3,
                    q * d * d * dt * dt * b.beta4,
                ],
            ),
            (
                PolarizationConfig::TWO_TWO,
                vec![q * b.beta2, q * d.powi(4) * b.beta3],
            ),
        ];
        for (config, expect) in cases {
            let w = exact_gramian_matrix(&scenario(m, dt, d, config));
            for i in 0..expect.len() {
                assert_relative_eq!(w[(i, i)].re, expect[i], max_relative = 1e-12);
                for j in 0..expect.len() {
                    if i != j {
                        assert!(w[(i, j)].norm() < 1e-12 * expect[0]);
                    }
                }
            }
            let spectrum = exact_gramian(&scenario(m, dt, d, config));
            let mut sorted = expect.clone();
            sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (got, want) in spectrum.eigenvalues.iter().zip(&sorted) {
                assert_relative_eq!(got, want, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn collapsed_spacing_gramian() {
        let s = scenario(7, 0.0, 5.0, PolarizationConfig::THREE_THREE);
        let spectrum = exact_gramian(&s);
        let q = PhysicalConstants::default().amplitude_sq();
        let expect = q * 15.0 / 25.0;
        assert_relative_eq!(spectrum.eigenvalues[0], expect, max_relative = 1e-13);
        assert_relative_eq!(spectrum.eigenvalues[1], expect, max_relative = 1e-13);
        assert!(spectrum.eigenvalues[2].abs() < 1e-13 * expect);
    }

    #[test]
    fn phase_stripped_assembly_gives_the_same_gramian() {
        // the per-element scalar phase cancels in H Hᴴ
        use crate::channel::radiative_projector;
        let s = scenario(9, 0.22, 3.0, PolarizationConfig::THREE_THREE);
        let q = s.constants.amplitude_sq();
        let mut unphased = nalgebra::Matrix3::<f64>::zeros();
        for ray in all_rays(&s.geometry, &s.ue) {
            let p = radiative_projector(&ray);
            unphased += q / (ray.distance * ray.distance) * p * p.transpose();
        }
        let w = exact_gramian_matrix(&s);
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(
                    w[(i, j)].re,
                    unphased[(i, j)],
                    epsilon = 1e-12 * unphased.trace()
                );
                assert!(w[(i, j)].im.abs() < 1e-12 * unphased.trace());
            }
        }
    }

    #[test]
    fn truncation_consistency_with_full_gramian_blocks() {
        // truncate-then-gram equals the corresponding sub-block of the
        // full gramian for receive-side truncation with all transmit feeds
        let full = exact_gramian_matrix(&scenario(6, 0.4, 2.0, PolarizationConfig::THREE_THREE));
        let w23 = exact_gramian_matrix(&scenario(
            6,
            0.4,
            2.0,
            PolarizationConfig::new(2, 3).unwrap(),
        ));
        for i in 0..2 {
            for j in 0..2 {
                assert_relative_eq!(w23[(i, j)].re, full[(i, j)].re, max_relative = 1e-12);
                assert_relative_eq!(
                    w23[(i, j)].im,
                    full[(i, j)].im,
                    epsilon = 1e-12 * full[(0, 0)].re
                );
            }
        }
    }

    #[test]
    fn closed_form_small_aperture_limit() {
        let q = PhysicalConstants::default().amplitude_sq();
        let s = closed_form_eigenvalues(
            PolarizationConfig::THREE_THREE,
            20,
            0.0,
            &PhysicalConstants::default(),
            5.0,
        );
        let expect = q * 2.0 * 20.0 / 25.0;
        assert_relative_eq!(s.eigenvalues[0], expect, max_relative = 1e-14);
        assert_relative_eq!(s.eigenvalues[1], expect, max_relative = 1e-14);
        assert_relative_eq!(s.eigenvalues[2], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn closed_form_ratio_at_unit_aperture() {
        // at ε = 1: λ₂/λ₁ = (π/4 + 1/2)/(π/2) = (π+2)/(2π)
        let s = closed_form_eigenvalues(
            PolarizationConfig::THREE_THREE,
            10,
            1.0,
            &PhysicalConstants::default(),
            5.0,
        );
        assert_relative_eq!(
            s.eigenvalues[1] / s.eigenvalues[0],
            (PI + 2.0) / (2.0 * PI),
            max_relative = 1e-14
        );
    }

    #[test]
    fn closed_form_product_reproduces_rate_offset_at_optimum() {
        // log2 of the normalized eigenvalue product at ε = 0.9058
        let constants = PhysicalConstants::default();
        let (m, d) = (20, 5.0);
        let s = closed_form_eigenvalues(PolarizationConfig::THREE_THREE, m, 0.9058, &constants, d);
        let unit = constants.amplitude_sq() * m as f64 / (d * d);
        let product: f64 = s.eigenvalues.iter().map(|l| l / unit).product();
        assert_relative_eq!(product.log2(), -0.7794, epsilon = 1e-3);
    }

    #[test]
    fn trace_identity_exact_and_closed_form() {
        let constants = PhysicalConstants::default();
        for m in [3usize, 9, 27, 81] {
            for k in 1..=5 {
                let eps = 0.4 * k as f64;
                let d = 5.0;
                let dt = eps * d / m as f64;
                let exact = exact_gramian(&scenario(m, dt, d, PolarizationConfig::THREE_THREE));
                assert_relative_eq!(
                    exact.eigenvalues[0],
                    exact.eigenvalues[1] + exact.eigenvalues[2],
                    max_relative = 1e-12
                );
                let closed =
                    closed_form_eigenvalues(PolarizationConfig::THREE_THREE, m, eps, &constants, d);
                assert_relative_eq!(
                    closed.eigenvalues[0],
                    closed.eigenvalues[1] + closed.eigenvalues[2],
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn cross_config_slot_identities() {
        let constants = PhysicalConstants::default();
        for eps in [0.1, 0.5, 0.9058, 1.5, 4.0] {
            let s33 =
                closed_form_eigenvalues(PolarizationConfig::THREE_THREE, 15, eps, &constants, 5.0);
            let s32 =
                closed_form_eigenvalues(PolarizationConfig::THREE_TWO, 15, eps, &constants, 5.0);
            let s22 =
                closed_form_eigenvalues(PolarizationConfig::TWO_TWO, 15, eps, &constants, 5.0);
            assert_relative_eq!(s33.slots[0], s32.slots[0], max_relative = 1e-14);
            assert_relative_eq!(s33.slots[0], s22.slots[0], max_relative = 1e-14);
            assert_relative_eq!(s32.slots[1], s22.slots[1], max_relative = 1e-14);
            assert!(s33.slots[1] >= s32.slots[1]);
        }
    }

    #[test]
    fn closed_form_monotonicity_and_interior_maximum() {
        let constants = PhysicalConstants::default();
        let grid: Vec<f64> = (0..=400).map(|i| i as f64 * 0.02).collect();
        let mut l1_prev = f64::INFINITY;
        let mut l2_prev = f64::INFINITY;
        let mut l3 = Vec::new();
        for &eps in &grid {
            let s =
                closed_form_eigenvalues(PolarizationConfig::THREE_THREE, 15, eps, &constants, 5.0);
            assert!(s.slots[0] <= l1_prev * (1.0 + 1e-13));
            assert!(s.slots[1] <= l2_prev * (1.0 + 1e-13));
            l1_prev = s.slots[0];
            l2_prev = s.slots[1];
            l3.push(s.slots[2]);
        }
        let peak = l3.iter().cloned().fold(f64::MIN, f64::max);
        let peak_idx = l3.iter().position(|&v| v == peak).unwrap();
        assert!(
            peak_idx > 0 && peak_idx < l3.len() - 1,
            "third eigenvalue peaks inside"
        );
        assert!(l3[0] < peak && *l3.last().unwrap() < peak);
    }

    #[test]
    fn closed_form_converges_to_exact_sums() {
        // max relative eigenvalue error decreasing in M, below 1% at M = 500
        let constants = PhysicalConstants::default();
        let d = 5.0;
        for eps in [0.25, 0.5, 1.0, 2.0] {
            let mut last = f64::INFINITY;
            for m in [15usize, 50, 150, 500] {
                let dt = eps * d / m as f64;
                let mut worst = 0.0_f64;
                for config in PolarizationConfig::CANONICAL {
                    let exact = exact_gramian(&scenario(m, dt, d, config));
                    let closed = closed_form_eigenvalues(config, m, eps, &constants, d);
                    for (e, c) in exact.eigenvalues.iter().zip(&closed.eigenvalues) {
                        worst = worst.max(((e - c) / c).abs());
                    }
                }
                assert!(worst < last, "error must shrink with M");
                last = worst;
            }
            assert!(last < 0.01, "error {last} at M=500, eps={eps}");
        }
    }

    #[test]
    fn far_field_probe_decays_toward_zero() {
        let g = geom(15, 0.5);
        let constants = PhysicalConstants::default();
        let probe = far_field_probe(
            PolarizationConfig::THREE_THREE,
            &g,
            &constants,
            &[5.0, 20.0, 100.0, 500.0],
        );
        let ratios: Vec<f64> = probe.iter().map(|(_, r)| r.unwrap()).collect();
        for pair in ratios.windows(2) {
            assert!(pair[1] < pair[0]);
        }
        // oracle-frozen values: ratio(5) = 0.373149, ratio(500) = 7.99898e-5,
        // reduction factor 2.1436e-4
        assert_relative_eq!(ratios[0], 0.3731487172243943, max_relative = 1e-10);
        assert_relative_eq!(ratios[3], 7.998979350544025e-5, max_relative = 1e-8);
        assert_relative_eq!(ratios[3] / ratios[0], 2.1436e-4, max_relative = 1e-3);
    }

    #[test]
    fn far_field_probe_rank_two_config_has_no_ratio() {
        let probe = far_field_probe(
            PolarizationConfig::TWO_TWO,
            &geom(15, 0.5),
            &PhysicalConstants::default(),
            &[5.0, 50.0],
        );
        assert!(probe.iter().all(|(_, r)| r.is_none()));
    }

    #[test]
    fn closed_form_third_eigenvalue_vanishes_with_epsilon() {
        let constants = PhysicalConstants::default();
        let tiny =
            closed_form_eigenvalues(PolarizationConfig::THREE_THREE, 15, 1e-6, &constants, 5.0);
        assert!(tiny.eigenvalues[2] / tiny.eigenvalues[0] < 1e-11);
    }

    #[test]
    #[should_panic(expected = "closed forms cover")]
    fn closed_form_rejects_noncanonical_config() {
        closed_form_eigenvalues(
            PolarizationConfig::new(2, 3).unwrap(),
            5,
            1.0,
            &PhysicalConstants::default(),
            5.0,
        );
    }
}
