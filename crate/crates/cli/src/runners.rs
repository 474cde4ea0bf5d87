//! The sweep runners behind each subcommand. Every runner resolves its
//! defaults from the merged settings, dispatches grid points onto the rayon
//! pool, and assembles a deterministic CSV table (rows in grid order).

use rayon::prelude::*;

use nfmimo::beamfocus::{design_precoder, focal_region, uniform_grid};
use nfmimo::capacity::{
    alpha_function, db_to_linear, high_snr_rate, optimal_epsilon, optimal_spacing,
};
use nfmimo::channel::{PolarizationConfig, Scenario};
use nfmimo::geometry::{UePosition, UlaGeometry};
use nfmimo::spectrum::{closed_form_eigenvalues, exact_gramian};

use crate::config::{usage, CliError, Settings};
use crate::table::{cell, CsvTable};

fn preamble(table: &mut CsvTable, runner: &str, settings: &Settings) {
    table.comment(format!("nfmimo {} {runner}", env!("CARGO_PKG_VERSION")));
    if settings.timestamp {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        table.comment(format!("unix_time = {now}"));
    }
}

fn echo(table: &mut CsvTable, entries: &[(&str, String)]) {
    for (key, value) in entries {
        table.comment(format!("{key} = {value}"));
    }
}

fn reject_fixed_spacing(settings: &Settings, why: &str) -> Result<(), CliError> {
    if settings.spacing.is_some() || settings.length.is_some() {
        return Err(usage(format!("--delta-t/--L do not apply here: {why}")));
    }
    Ok(())
}

fn reject_polarization_override(settings: &Settings) -> Result<(), CliError> {
    if settings.rpol.is_some() || settings.tpol.is_some() {
        return Err(usage(
            "this table always compares the three analyzed polarization pairs; \
             --rpol/--tpol select the array for focus-sweep only",
        ));
    }
    Ok(())
}

/// Exact and closed-form Gramian eigenvalues versus element spacing.
pub fn eigenvalue_sweep(settings: &Settings) -> Result<CsvTable, CliError> {
    reject_fixed_spacing(settings, "the element spacing is the swept variable")?;
    reject_polarization_override(settings)?;
    let constants = settings.constants()?;
    let distance = settings.distance.unwrap_or(5.0);
    let ue = UePosition::new(distance)?;
    let half_counts: Vec<usize> = match settings.half_count {
        Some(m) => vec![m],
        None => vec![3, 15],
    };
    let (min, max, count) = settings.sweep("delta_t", 0.01, 2.0, 200)?;
    if min < 0.0 {
        return Err(usage("element spacing cannot be negative"));
    }

    let mut header = vec!["delta_t".to_string()];
    for &m in &half_counts {
        for config in PolarizationConfig::CANONICAL {
            for source in ["exact", "closed"] {
                for k in 1..=3 {
                    header.push(format!(
                        "mt{}_{}_{}_l{}",
                        2 * m + 1,
                        config.label(),
                        source,
                        k
                    ));
                }
            }
        }
    }
    let mut table = CsvTable::new(header);
    preamble(&mut table, "eigenvalues", settings);
    echo(
        &mut table,
        &[
            ("D", format!("{distance}")),
            (
                "M",
                half_counts
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("lambda", format!("{}", constants.wavelength())),
            ("eta", format!("{}", constants.eta())),
            ("reactive", format!("{}", settings.reactive)),
            ("sweep", format!("delta_t [{min}, {max}] x{count}")),
        ],
    );

    let grid = uniform_grid(min, max, count);
    let rows: Vec<Vec<Option<f64>>> = grid
        .par_iter()
        .map(|&dt| {
            let mut row = vec![Some(dt)];
            for &m in &half_counts {
                let geometry = UlaGeometry::new(m, dt).expect("validated spacing");
                let epsilon = m as f64 * dt / distance;
                for config in PolarizationConfig::CANONICAL {
                    let scenario = Scenario::new(constants, geometry, ue, config)
                        .with_reactive(settings.reactive);
                    let exact = exact_gramian(&scenario);
                    let closed = closed_form_eigenvalues(config, m, epsilon, &constants, distance);
                    for source in [&exact, &closed] {
                        for k in 0..3 {
                            row.push(source.eigenvalues.get(k).copied().and_then(cell));
                        }
                    }
                }
            }
            row
        })
        .collect();
    for row in rows {
        table.push_row(row);
    }
    Ok(table)
}

/// Optimized achievable rate versus SNR: exact water-filled optimum and the
/// high-SNR approximation, per canonical configuration.
pub fn rate_vs_snr(settings: &Settings) -> Result<CsvTable, CliError> {
    reject_fixed_spacing(settings, "the spacing is optimized at every SNR point")?;
    reject_polarization_override(settings)?;
    let constants = settings.constants()?;
    let distance = settings.distance.unwrap_or(5.0);
    UePosition::new(distance)?;
    let half_count = settings.half_count.unwrap_or(20);
    let (min, max, count) = settings.sweep("snr_db", -20.0, 60.0, 17)?;

    let mut header = vec!["snr_db".to_string()];
    for config in PolarizationConfig::CANONICAL {
        header.push(format!("rate_opt_{}", config.label()));
        header.push(format!("rate_approx_{}", config.label()));
    }
    let mut table = CsvTable::new(header);
    preamble(&mut table, "rate-vs-snr", settings);
    echo(
        &mut table,
        &[
            ("D", format!("{distance}")),
            ("M", format!("{half_count}")),
            ("lambda", format!("{}", constants.wavelength())),
            ("eta", format!("{}", constants.eta())),
            ("reactive", format!("{}", settings.reactive)),
            ("sweep", format!("snr_db [{min}, {max}] x{count}")),
        ],
    );

    let grid = uniform_grid(min, max, count);
    let rows: Vec<Vec<Option<f64>>> = grid
        .par_iter()
        .map(|&snr_db| {
            let rho = db_to_linear(snr_db);
            let mut row = vec![Some(snr_db)];
            for config in PolarizationConfig::CANONICAL {
                let template = Scenario::new(
                    constants,
                    UlaGeometry::new(half_count, 0.0).expect("zero spacing is valid"),
                    UePosition::new(distance).expect("validated distance"),
                    config,
                )
                .with_reactive(settings.reactive);
                let (_, best) = optimal_spacing(&template, rho);
                let approx = high_snr_rate(config, &constants, half_count, distance, rho);
                row.push(cell(best.rate));
                row.push(cell(approx.rate()));
            }
            row
        })
        .collect();
    for row in rows {
        table.push_row(row);
    }
    Ok(table)
}

/// Numerically optimal array size versus terminal distance, next to the
/// size predicted from the optimal normalized aperture.
pub fn optimal_size(settings: &Settings) -> Result<CsvTable, CliError> {
    reject_fixed_spacing(settings, "the spacing is optimized at every distance")?;
    reject_polarization_override(settings)?;
    let constants = settings.constants()?;
    let half_count = settings.half_count.unwrap_or(20);
    let rho = db_to_linear(settings.snr_db.unwrap_or(20.0));
    let (min, max, count) = settings.sweep("D", 1.0, 10.0, 10)?;
    if min <= 0.0 {
        return Err(usage("terminal distances must be positive"));
    }

    let mut header = vec!["D".to_string()];
    for config in PolarizationConfig::CANONICAL {
        header.push(format!("l_opt_{}", config.label()));
        header.push(format!("l_pred_{}", config.label()));
    }
    let mut table = CsvTable::new(header);
    preamble(&mut table, "optimal-size", settings);
    echo(
        &mut table,
        &[
            ("M", format!("{half_count}")),
            ("snr_db", format!("{}", settings.snr_db.unwrap_or(20.0))),
            ("lambda", format!("{}", constants.wavelength())),
            ("eta", format!("{}", constants.eta())),
            ("reactive", format!("{}", settings.reactive)),
            ("sweep", format!("D [{min}, {max}] x{count}")),
        ],
    );

    let apertures: Vec<f64> = PolarizationConfig::CANONICAL
        .iter()
        .map(|&c| optimal_epsilon(c).epsilon)
        .collect();
    let grid = uniform_grid(min, max, count);
    let rows: Vec<Vec<Option<f64>>> = grid
        .par_iter()
        .map(|&d| {
            let mut row = vec![Some(d)];
            for (config, &eps_star) in PolarizationConfig::CANONICAL.iter().zip(&apertures) {
                let template = Scenario::new(
                    constants,
                    UlaGeometry::new(half_count, 0.0).expect("zero spacing is valid"),
                    UePosition::new(d).expect("positive sweep distances"),
                    *config,
                )
                .with_reactive(settings.reactive);
                let (dt, _) = optimal_spacing(&template, rho);
                row.push(cell(2.0 * half_count as f64 * dt));
                row.push(cell(2.0 * eps_star * d));
            }
            row
        })
        .collect();
    for row in rows {
        table.push_row(row);
    }
    Ok(table)
}

/// One array to sweep: polarization pair, size, element half-count.
struct FocusCase {
    config: PolarizationConfig,
    length: f64,
    half_count: usize,
}

impl FocusCase {
    fn label(&self) -> String {
        format!("rate_{}_L{:.3}", self.config.label(), self.length)
    }
}

/// Achievable rate along the axis for precoders designed at one position.
pub fn focus_sweep_run(settings: &Settings) -> Result<CsvTable, CliError> {
    let constants = settings.constants()?;
    let design_distance = settings.distance.unwrap_or(5.0);
    let rho = db_to_linear(settings.snr_db.unwrap_or(20.0));
    let drop = settings.drop.unwrap_or(10.0);
    if !drop.is_finite() || drop <= 0.0 {
        return Err(usage("--drop must be positive"));
    }
    let (min, max, count) = settings.sweep("d", 0.5, 15.0, 1451)?;
    if min <= 0.0 {
        return Err(usage("probe distances must be positive"));
    }

    let half_count = settings.half_count.unwrap_or(100);
    let custom = settings.rpol.is_some()
        || settings.tpol.is_some()
        || settings.spacing.is_some()
        || settings.length.is_some()
        || settings.half_count.is_some();
    let cases: Vec<FocusCase> = if custom {
        let config = settings.polarization(PolarizationConfig::THREE_THREE)?;
        let spacing = settings.spacing_for(half_count)?;
        let length = match spacing {
            Some(dt) => 2.0 * half_count as f64 * dt,
            None => {
                // default to the rate-optimal size of the chosen pair
                if config.is_canonical() {
                    2.0 * optimal_epsilon(config).epsilon * design_distance
                } else {
                    return Err(usage(
                        "give --L or --delta-t for the non-canonical polarization pair",
                    ));
                }
            }
        };
        vec![FocusCase {
            config,
            length,
            half_count,
        }]
    } else {
        // the standard comparison set: rate-optimal sizes for the
        // three-dipole pairs, a short and a large two-dipole array
        let l33 = 2.0 * optimal_epsilon(PolarizationConfig::THREE_THREE).epsilon * design_distance;
        let l32 = 2.0 * optimal_epsilon(PolarizationConfig::THREE_TWO).epsilon * design_distance;
        vec![
            FocusCase {
                config: PolarizationConfig::THREE_THREE,
                length: l33,
                half_count,
            },
            FocusCase {
                config: PolarizationConfig::THREE_TWO,
                length: l32,
                half_count,
            },
            FocusCase {
                config: PolarizationConfig::TWO_TWO,
                length: 0.1 * design_distance,
                half_count,
            },
            FocusCase {
                config: PolarizationConfig::TWO_TWO,
                length: l33,
                half_count,
            },
        ]
    };

    let mut header = vec!["d".to_string()];
    header.extend(cases.iter().map(FocusCase::label));
    let mut table = CsvTable::new(header);
    preamble(&mut table, "focus-sweep", settings);
    echo(
        &mut table,
        &[
            ("D_design", format!("{design_distance}")),
            ("snr_db", format!("{}", settings.snr_db.unwrap_or(20.0))),
            ("drop", format!("{drop}")),
            ("lambda", format!("{}", constants.wavelength())),
            ("eta", format!("{}", constants.eta())),
            ("reactive", format!("{}", settings.reactive)),
            ("sweep", format!("d [{min}, {max}] x{count}")),
        ],
    );

    let grid = uniform_grid(min, max, count);
    let mut columns = Vec::with_capacity(cases.len());
    for case in &cases {
        let geometry = UlaGeometry::from_length(case.half_count, case.length)?;
        let scenario = Scenario::new(
            constants,
            geometry,
            UePosition::new(design_distance)?,
            case.config,
        )
        .with_reactive(settings.reactive);
        let precoder = design_precoder(&scenario, rho)
            .map_err(|e| usage(format!("cannot design precoder for {}: {e}", case.label())))?;
        let rates: Vec<f64> = grid
            .par_iter()
            .map(|&d| {
                let probe = scenario.with_distance(d).expect("positive grid distances");
                nfmimo::beamfocus::mismatched_rate(&precoder, &probe, rho)
            })
            .collect();
        let profile = nfmimo::beamfocus::RateProfile {
            samples: grid.iter().copied().zip(rates.iter().copied()).collect(),
            design_distance,
        };
        let region = focal_region(&profile, drop);
        table.comment(format!(
            "{}: M_t = {}, peak {:.4} bits/s/Hz at d = {:.4} m, region within {} bits: \
             [{:.4}, {:.4}] m{}",
            case.label(),
            2 * case.half_count + 1,
            region.peak_rate,
            region.peak_position,
            drop,
            region.lower,
            region.upper,
            if region.full_extent {
                " (full grid extent)"
            } else {
                ""
            },
        ));
        columns.push(rates);
    }

    for (i, &d) in grid.iter().enumerate() {
        let mut row = vec![Some(d)];
        row.extend(columns.iter().map(|c| cell(c[i])));
        table.push_row(row);
    }
    Ok(table)
}

/// The high-SNR rate offset alpha versus the normalized aperture.
pub fn alpha_curve(settings: &Settings) -> Result<CsvTable, CliError> {
    reject_polarization_override(settings)?;
    let (min, max, count) = settings.sweep("epsilon", 0.0, 5.0, 501)?;
    if min < 0.0 {
        return Err(usage("the normalized aperture is non-negative"));
    }
    let mut table = CsvTable::new(vec![
        "epsilon".into(),
        "alpha_3x3".into(),
        "alpha_3x2".into(),
        "alpha_2x2".into(),
    ]);
    preamble(&mut table, "alpha-curve", settings);
    echo(
        &mut table,
        &[("sweep", format!("epsilon [{min}, {max}] x{count}"))],
    );

    for &epsilon in &uniform_grid(min, max, count) {
        table.push_row(vec![
            Some(epsilon),
            cell(alpha_function(PolarizationConfig::THREE_THREE, epsilon)),
            cell(alpha_function(PolarizationConfig::THREE_TWO, epsilon)),
            cell(alpha_function(PolarizationConfig::TWO_TWO, epsilon)),
        ]);
    }
    Ok(table)
}
