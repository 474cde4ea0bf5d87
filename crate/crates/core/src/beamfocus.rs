//! Near-field beamfocusing: design a precoder for one terminal position and
//! evaluate the achievable rate of terminals placed elsewhere on the z-axis.
//!
//! The precoder is the capacity-achieving matched design: its columns are the
//! right singular vectors of the equivalent channel at the design point, its
//! stream powers come from water-filling over the squared singular values,
//! and total transmit power is one. A mismatched receiver at distance `d`
//! keeps the transmitter fixed and decodes optimally:
//! `rate = log₂ det(I + ρ H(d) F diag(p) Fᴴ H(d)ᴴ)`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::capacity::waterfill;
use crate::channel::{equivalent_channel, Scenario};
use crate::error::{Error, Result};

/// Transmit filter designed for one position: orthonormal columns, one
/// column per active stream, unit total power after weighting.
#[derive(Debug, Clone, PartialEq)]
pub struct Precoder {
    /// `t_pol·M_t × n_s`, orthonormal columns.
    pub matrix: DMatrix<Complex64>,
    /// Per-stream power fractions, summing to one.
    pub stream_powers: Vec<f64>,
    pub design_distance: f64,
    pub design_snr: f64,
}

impl Precoder {
    /// Number of spatially multiplexed streams.
    pub fn stream_count(&self) -> usize {
        self.matrix.ncols()
    }

    /// Total transmit power `trace(F diag(p) Fᴴ)`.
    pub fn total_power(&self) -> f64 {
        self.matrix
            .column_iter()
            .zip(&self.stream_powers)
            .map(|(col, &p)| p * col.norm_squared())
            .sum()
    }
}

/// Eigenbeamforming precoder at the scenario's terminal position.
///
/// Right singular vectors are recovered from the receive-side Gramian
/// (`v = Hᴴu/σ`), keeping only the modes that receive positive water-filling
/// power at `rho`.
pub fn design_precoder(scenario: &Scenario, rho: f64) -> Result<Precoder> {
    let h = equivalent_channel(scenario).matrix;
    let gram = &h * h.adjoint();
    let eig = gram.symmetric_eigen();

    let mut modes: Vec<(f64, usize)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &l)| (l.max(0.0), i))
        .collect();
    modes.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite"));
    let gains: Vec<f64> = modes.iter().map(|&(l, _)| l).collect();
    if gains[0] <= 0.0 {
        return Err(Error::RankDeficient);
    }

    let wf = waterfill(&gains, rho);
    let active = wf.active_modes;
    let mut matrix = DMatrix::zeros(h.ncols(), active);
    for (stream, &(gain, col)) in modes.iter().enumerate().take(active) {
        let v = h.adjoint() * eig.eigenvectors.column(col) / Complex64::from(gain.sqrt());
        matrix.set_column(stream, &v);
    }
    Ok(Precoder {
        matrix,
        stream_powers: wf.allocation.fractions[..active].to_vec(),
        design_distance: scenario.ue.distance(),
        design_snr: rho,
    })
}

/// Achievable rate of an optimal receiver at the scenario's position under
/// a fixed, possibly mismatched, transmit filter.
pub fn mismatched_rate(precoder: &Precoder, scenario: &Scenario, rho: f64) -> f64 {
    let h = equivalent_channel(scenario).matrix;
    let mut weighted = &h * &precoder.matrix;
    for (mut col, &p) in weighted.column_iter_mut().zip(&precoder.stream_powers) {
        col *= Complex64::from(p.sqrt());
    }
    let gram = &weighted * weighted.adjoint();
    gram.symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&g| (1.0 + rho * g.max(0.0)).log2())
        .sum()
}

/// Achievable-rate samples along the z-axis for a fixed precoder.
#[derive(Debug, Clone, PartialEq)]
pub struct RateProfile {
    /// `(distance, rate)` pairs on a strictly increasing grid.
    pub samples: Vec<(f64, f64)>,
    pub design_distance: f64,
}

/// Evaluate the mismatched rate on each grid distance.
pub fn focus_sweep(
    precoder: &Precoder,
    scenario: &Scenario,
    grid: &[f64],
    rho: f64,
) -> Result<RateProfile> {
    let mut samples = Vec::with_capacity(grid.len());
    for &d in grid {
        let probe = scenario.with_distance(d)?;
        samples.push((d, mismatched_rate(precoder, &probe, rho)));
    }
    Ok(RateProfile {
        samples,
        design_distance: precoder.design_distance,
    })
}

/// Uniformly spaced grid with both endpoints included.
pub fn uniform_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2 && max > min);
    let step = (max - min) / (count - 1) as f64;
    (0..count).map(|i| min + i as f64 * step).collect()
}

/// Default focusing sweep: `d ∈ [0.5, 15]` m at 0.01 m steps.
pub fn default_focus_grid() -> Vec<f64> {
    uniform_grid(0.5, 15.0, 1451)
}

/// Contiguous interval around the profile peak where the rate stays within
/// `drop` of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocalRegion {
    pub lower: f64,
    pub upper: f64,
    /// Threshold below the peak, bits/s/Hz.
    pub drop: f64,
    pub peak_rate: f64,
    pub peak_position: f64,
    /// The whole profile stays above the threshold.
    pub full_extent: bool,
}

impl FocalRegion {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Walk outward from the peak until the rate falls `drop` below it; the
/// endpoints are linearly interpolated between grid samples.
pub fn focal_region(profile: &RateProfile, drop: f64) -> FocalRegion {
    assert!(!profile.samples.is_empty(), "profile must be non-empty");
    assert!(drop > 0.0);
    let samples = &profile.samples;
    let peak_idx = samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).expect("finite rates"))
        .map(|(i, _)| i)
        .unwrap();
    let (peak_position, peak_rate) = samples[peak_idx];
    let threshold = peak_rate - drop;

    let crossing = |inside: usize, outside: usize| -> f64 {
        let (d_in, r_in) = samples[inside];
        let (d_out, r_out) = samples[outside];
        d_in + (threshold - r_in) * (d_out - d_in) / (r_out - r_in)
    };

    let mut lo = peak_idx;
    while lo > 0 && samples[lo - 1].1 >= threshold {
        lo -= 1;
    }
    let lower = if lo == 0 {
        samples[0].0
    } else {
        crossing(lo, lo - 1)
    };

    let mut hi = peak_idx;
    while hi + 1 < samples.len() && samples[hi + 1].1 >= threshold {
        hi += 1;
    }
    let upper = if hi + 1 == samples.len() {
        samples[hi].0
    } else {
        crossing(hi, hi + 1)
    };

    FocalRegion {
        lower,
        upper,
        drop,
        peak_rate,
        peak_position,
        full_extent: lo == 0 && hi + 1 == samples.len(),
    }
}
