//! Experiment configuration: a flat `key = value` file overridden by
//! same-named command-line flags.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

use clap::Args;
use nfmimo::PolarizationConfig;

/// Failure modes mapped to process exit codes (2 for usage, 3 for
/// invariant failures reported by `validate`).
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invariant(String),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Invariant(msg) => write!(f, "{msg}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<nfmimo::Error> for CliError {
    fn from(e: nfmimo::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Command-line overrides; every flag mirrors a config-file key.
#[derive(Debug, Clone, Default, Args)]
pub struct CliOverrides {
    /// Key-value config file (`key = value`, '#' comments)
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write the CSV table here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads for sweep evaluation (default: available parallelism)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Include the reactive near-field term in exact channel evaluations
    #[arg(long, global = true)]
    pub reactive: bool,

    /// Focal-region threshold below the peak, bits/s/Hz
    #[arg(long, global = true)]
    pub drop: Option<f64>,

    /// Terminal distance D in meters
    #[arg(long = "D", global = true)]
    pub distance: Option<f64>,

    /// Array half-count M (the array has 2M+1 elements)
    #[arg(long = "M", global = true)]
    pub half_count: Option<usize>,

    /// Element spacing in meters (give either this or --L)
    #[arg(long = "delta-t", global = true)]
    pub spacing: Option<f64>,

    /// Total array length 2M·Δ_T in meters (give either this or --delta-t)
    #[arg(long = "L", global = true)]
    pub length: Option<f64>,

    /// SNR in dB
    #[arg(long = "snr-db", global = true)]
    pub snr_db: Option<f64>,

    /// Receive-side dipole count (2 or 3)
    #[arg(long, global = true)]
    pub rpol: Option<usize>,

    /// Transmit-side dipole count (2 or 3)
    #[arg(long, global = true)]
    pub tpol: Option<usize>,

    /// Carrier wavelength in meters
    #[arg(long, global = true)]
    pub lambda: Option<f64>,

    /// Medium constant scaling the field amplitude
    #[arg(long, global = true)]
    pub eta: Option<f64>,

    /// Swept variable (each subcommand fixes its own)
    #[arg(long, global = true)]
    pub sweep_var: Option<String>,

    /// Sweep lower bound
    #[arg(long, global = true)]
    pub sweep_min: Option<f64>,

    /// Sweep upper bound
    #[arg(long, global = true)]
    pub sweep_max: Option<f64>,

    /// Number of sweep points (>= 2)
    #[arg(long, global = true)]
    pub sweep_count: Option<usize>,

    /// Accept the non-canonical (2,3) polarization pair with a warning
    #[arg(long, global = true)]
    pub allow_noncanonical: bool,

    /// Stamp the metadata with the wall-clock time (off for repeatable output)
    #[arg(long, global = true)]
    pub timestamp: bool,
}

/// Merged settings: config-file entries overridden by flags.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub reactive: bool,
    pub drop: Option<f64>,
    pub distance: Option<f64>,
    pub half_count: Option<usize>,
    pub spacing: Option<f64>,
    pub length: Option<f64>,
    pub snr_db: Option<f64>,
    pub rpol: Option<usize>,
    pub tpol: Option<usize>,
    pub lambda: Option<f64>,
    pub eta: Option<f64>,
    pub sweep_var: Option<String>,
    pub sweep_min: Option<f64>,
    pub sweep_max: Option<f64>,
    pub sweep_count: Option<usize>,
    pub allow_noncanonical: bool,
    pub timestamp: bool,
}

const KNOWN_KEYS: &[&str] = &[
    "out",
    "jobs",
    "reactive",
    "drop",
    "D",
    "M",
    "delta_t",
    "L",
    "snr_db",
    "rpol",
    "tpol",
    "lambda",
    "eta",
    "sweep_var",
    "sweep_min",
    "sweep_max",
    "sweep_count",
    "allow_noncanonical",
    "timestamp",
];

fn parse_kv(text: &str) -> Result<HashMap<String, String>, CliError> {
    let mut map = HashMap::new();
    for (number, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            usage(format!(
                "config line {}: expected `key = value`",
                number + 1
            ))
        })?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(usage(format!(
                "config line {}: unknown key `{key}`",
                number + 1
            )));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn take<T: std::str::FromStr>(
    map: &HashMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError> {
    match map.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| usage(format!("config key `{key}`: cannot parse `{raw}`"))),
    }
}

fn take_bool(map: &HashMap<String, String>, key: &str) -> Result<bool, CliError> {
    match map.get(key).map(String::as_str) {
        None | Some("false") | Some("0") => Ok(false),
        Some("true") | Some("1") => Ok(true),
        Some(other) => Err(usage(format!(
            "config key `{key}`: expected true/false, got `{other}`"
        ))),
    }
}

impl Settings {
    /// Read the config file (when given) and overlay the flags.
    pub fn load(cli: &CliOverrides) -> Result<Self, CliError> {
        let map = match &cli.config {
            Some(path) => parse_kv(
                &std::fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?,
            )?,
            None => HashMap::new(),
        };
        Ok(Settings {
            out: cli
                .out
                .clone()
                .or_else(|| map.get("out").map(PathBuf::from)),
            jobs: cli.jobs.or(take(&map, "jobs")?),
            reactive: cli.reactive || take_bool(&map, "reactive")?,
            drop: cli.drop.or(take(&map, "drop")?),
            distance: cli.distance.or(take(&map, "D")?),
            half_count: cli.half_count.or(take(&map, "M")?),
            spacing: cli.spacing.or(take(&map, "delta_t")?),
            length: cli.length.or(take(&map, "L")?),
            snr_db: cli.snr_db.or(take(&map, "snr_db")?),
            rpol: cli.rpol.or(take(&map, "rpol")?),
            tpol: cli.tpol.or(take(&map, "tpol")?),
            lambda: cli.lambda.or(take(&map, "lambda")?),
            eta: cli.eta.or(take(&map, "eta")?),
            sweep_var: cli
                .sweep_var
                .clone()
                .or_else(|| map.get("sweep_var").cloned()),
            sweep_min: cli.sweep_min.or(take(&map, "sweep_min")?),
            sweep_max: cli.sweep_max.or(take(&map, "sweep_max")?),
            sweep_count: cli.sweep_count.or(take(&map, "sweep_count")?),
            allow_noncanonical: cli.allow_noncanonical || take_bool(&map, "allow_noncanonical")?,
            timestamp: cli.timestamp || take_bool(&map, "timestamp")?,
        })
    }

    /// Physical constants with the standard defaults `η = 1`, `λ = 0.1` m.
    pub fn constants(&self) -> Result<nfmimo::PhysicalConstants, CliError> {
        Ok(nfmimo::PhysicalConstants::new(
            self.eta.unwrap_or(1.0),
            self.lambda.unwrap_or(0.1),
        )?)
    }

    /// Polarization pair, rejecting `(2,3)` unless explicitly allowed.
    pub fn polarization(
        &self,
        default: PolarizationConfig,
    ) -> Result<PolarizationConfig, CliError> {
        let config = PolarizationConfig::new(
            self.rpol.unwrap_or(default.r_pol()),
            self.tpol.unwrap_or(default.t_pol()),
        )?;
        if !config.is_canonical() {
            if self.allow_noncanonical {
                eprintln!(
                    "warning: polarization pair (rpol=2, tpol=3) is outside the analyzed \
                     configurations; exact results only"
                );
            } else {
                return Err(usage(
                    "polarization pair (rpol=2, tpol=3) is not analyzed; pass \
                     --allow-noncanonical to run it anyway",
                ));
            }
        }
        Ok(config)
    }

    /// Exactly-one-of check for spacing versus total length.
    pub fn spacing_for(&self, half_count: usize) -> Result<Option<f64>, CliError> {
        match (self.spacing, self.length) {
            (Some(_), Some(_)) => Err(usage(
                "give exactly one of --delta-t / --L (or delta_t / L in the config)",
            )),
            (Some(dt), None) => Ok(Some(dt)),
            (None, Some(l)) => Ok(Some(
                nfmimo::UlaGeometry::from_length(half_count, l)?.spacing(),
            )),
            (None, None) => Ok(None),
        }
    }

    /// Sweep bounds with per-subcommand defaults; enforces the shared
    /// invariants (count >= 2, max > min, expected variable name).
    pub fn sweep(
        &self,
        variable: &str,
        default_min: f64,
        default_max: f64,
        default_count: usize,
    ) -> Result<(f64, f64, usize), CliError> {
        if let Some(v) = &self.sweep_var {
            if v != variable {
                return Err(usage(format!(
                    "this subcommand sweeps `{variable}`, not `{v}`"
                )));
            }
        }
        let min = self.sweep_min.unwrap_or(default_min);
        let max = self.sweep_max.unwrap_or(default_max);
        let count = self.sweep_count.unwrap_or(default_count);
        if count < 2 {
            return Err(usage(format!("sweep_count must be >= 2, got {count}")));
        }
        if !min.is_finite() || !max.is_finite() || max <= min {
            return Err(usage(format!(
                "sweep bounds must satisfy min < max, got [{min}, {max}]"
            )));
        }
        Ok((min, max, count))
    }
}
