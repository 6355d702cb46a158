//! Antenna radiation patterns and orientation-dependent gain lookup.
//!
//! Every antenna in scope has a doughnut-shaped pattern: uniform in azimuth,
//! with a single elevation cut that peaks at 0° and falls to a null at 90°.
//! The cut is either the closed-form circle (linear gain cos θ) or a table of
//! `(angle, dB)` samples loaded from a datasheet digitization. Gains are
//! peak-normalized, so they lie in [0, 1] linear.
//!
//! Lookups take the elevation angle of the air-to-ground ray. A vertically
//! mounted antenna is sampled at that angle directly; mounting it
//! horizontally rotates the cut a quarter turn, so it is sampled at 90° − α.
//! Azimuth never enters any gain query.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::units::{amp_ratio_to_db, cos_deg, db_to_amp_ratio, sample_grid, sin_deg};

/// Header expected on the first significant line of a pattern CSV file.
pub const PATTERN_CSV_HEADER: &str = "angle_deg,gain_db";

/// Errors from gain lookups and pattern-file loading.
#[derive(Debug, Error)]
pub enum AntennaError {
    #[error("elevation angle {0} deg is outside [0, 90]")]
    AngleOutOfRange(f64),
    #[error("angle {angle} deg is outside the sampled range [{min}, {max}] deg")]
    OutsideSampledRange { angle: f64, min: f64, max: f64 },
    #[error("a tabulated pattern needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("sample angles must be strictly increasing and within [-180, 180]")]
    InvalidSampleAngles,
    #[error("pattern gains must be finite or the -inf null marker")]
    InvalidGain,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("pattern file has no data rows")]
    EmptyFile,
    #[error("sampling step {0} deg must be in (0, 90]")]
    InvalidStep(f64),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Mounting orientation of an antenna relative to the ground plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Vertical,
    Horizontal,
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Vertical => "V",
            Orientation::Horizontal => "H",
        })
    }
}

pub(crate) fn check_elevation(alpha_deg: f64) -> Result<(), AntennaError> {
    if (0.0..=90.0).contains(&alpha_deg) {
        Ok(())
    } else {
        Err(AntennaError::AngleOutOfRange(alpha_deg))
    }
}

/// Closed-form doughnut gain at elevation `alpha_deg`.
///
/// A vertical antenna sees cos α, a horizontal one sin α; both are linear
/// gains in [0, 1].
pub fn analytic_gain(orientation: Orientation, alpha_deg: f64) -> Result<f64, AntennaError> {
    check_elevation(alpha_deg)?;
    Ok(match orientation {
        Orientation::Vertical => cos_deg(alpha_deg),
        Orientation::Horizontal => sin_deg(alpha_deg),
    })
}

/// One `(angle, gain)` sample of a tabulated pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternSample {
    pub angle_deg: f64,
    /// Gain in dB relative to the pattern peak; `-inf` marks a null.
    pub gain_db: f64,
}

/// An elevation cut sampled from a datasheet or measurement, peak-normalized
/// so the strongest sample sits at exactly 0 dB.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPattern {
    samples: Vec<PatternSample>,
    frequency_label: String,
    normalization_offset_db: f64,
}

impl TabulatedPattern {
    /// Build a pattern from raw samples, normalizing the peak to 0 dB.
    ///
    /// Angles must be strictly increasing within [-180, 180]; gains must be
    /// finite except for `-inf` nulls, and at least one must be finite.
    pub fn new(
        mut samples: Vec<PatternSample>,
        frequency_label: impl Into<String>,
    ) -> Result<Self, AntennaError> {
        if samples.len() < 2 {
            return Err(AntennaError::TooFewSamples(samples.len()));
        }
        for s in &samples {
            if !s.angle_deg.is_finite() || !(-180.0..=180.0).contains(&s.angle_deg) {
                return Err(AntennaError::InvalidSampleAngles);
            }
            if s.gain_db.is_nan() || s.gain_db == f64::INFINITY {
                return Err(AntennaError::InvalidGain);
            }
        }
        if samples.windows(2).any(|w| w[0].angle_deg >= w[1].angle_deg) {
            return Err(AntennaError::InvalidSampleAngles);
        }
        let peak = samples
            .iter()
            .map(|s| s.gain_db)
            .fold(f64::NEG_INFINITY, f64::max);
        if !peak.is_finite() {
            return Err(AntennaError::InvalidGain);
        }
        for s in &mut samples {
            s.gain_db -= peak;
        }
        Ok(Self {
            samples,
            frequency_label: frequency_label.into(),
            normalization_offset_db: peak,
        })
    }

    /// Parse pattern CSV text (see [`PATTERN_CSV_HEADER`]).
    ///
    /// `#` comments and blank lines are ignored; the `gain_db` field accepts
    /// the literal `-inf` for nulls. Errors carry 1-based line numbers.
    pub fn from_csv_str(
        text: &str,
        frequency_label: impl Into<String>,
    ) -> Result<Self, AntennaError> {
        let mut samples: Vec<PatternSample> = Vec::new();
        let mut saw_header = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let row = raw.trim();
            if row.is_empty() || row.starts_with('#') {
                continue;
            }
            if !saw_header {
                if normalize_header(row) != PATTERN_CSV_HEADER {
                    return Err(AntennaError::Parse {
                        line,
                        msg: format!("expected header '{PATTERN_CSV_HEADER}', got '{row}'"),
                    });
                }
                saw_header = true;
                continue;
            }
            let mut fields = row.split(',');
            let (angle_field, gain_field) = match (fields.next(), fields.next(), fields.next()) {
                (Some(a), Some(g), None) => (a.trim(), g.trim()),
                _ => {
                    return Err(AntennaError::Parse {
                        line,
                        msg: "expected exactly 2 comma-separated fields".into(),
                    })
                }
            };
            let angle_deg = parse_finite(angle_field).map_err(|msg| AntennaError::Parse {
                line,
                msg: format!("angle_deg: {msg}"),
            })?;
            if !(-180.0..=180.0).contains(&angle_deg) {
                return Err(AntennaError::Parse {
                    line,
                    msg: format!("angle_deg {angle_deg} is outside [-180, 180]"),
                });
            }
            let gain_db = if gain_field == "-inf" {
                f64::NEG_INFINITY
            } else {
                parse_finite(gain_field).map_err(|msg| AntennaError::Parse {
                    line,
                    msg: format!("gain_db: {msg}"),
                })?
            };
            if let Some(prev) = samples.last() {
                if angle_deg <= prev.angle_deg {
                    return Err(AntennaError::Parse {
                        line,
                        msg: format!(
                            "angles must be strictly increasing ({} after {})",
                            angle_deg, prev.angle_deg
                        ),
                    });
                }
            }
            samples.push(PatternSample { angle_deg, gain_db });
        }
        if samples.is_empty() {
            return Err(AntennaError::EmptyFile);
        }
        Self::new(samples, frequency_label)
    }

    /// Load a pattern from a CSV file, labelling it with the file stem.
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self, AntennaError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "pattern".to_owned());
        Self::from_csv_str(&text, label)
    }

    pub fn samples(&self) -> &[PatternSample] {
        &self.samples
    }

    pub fn frequency_label(&self) -> &str {
        &self.frequency_label
    }

    /// dB offset subtracted during construction to bring the peak to 0 dB.
    pub fn normalization_offset_db(&self) -> f64 {
        self.normalization_offset_db
    }

    /// First and last sampled angle, degrees.
    pub fn angle_range_deg(&self) -> (f64, f64) {
        (
            self.samples.first().expect("at least 2 samples").angle_deg,
            self.samples.last().expect("at least 2 samples").angle_deg,
        )
    }

    /// Linear gain at `angle_deg`.
    ///
    /// Interpolates linearly in dB between the bracketing samples and is
    /// exact at sample angles. A bracket with a `-inf` endpoint is a null
    /// over its whole interior: the dB chord sits at -inf there. Angles
    /// outside the sampled range are an error; there is no extrapolation.
    pub fn gain(&self, angle_deg: f64) -> Result<f64, AntennaError> {
        let (min, max) = self.angle_range_deg();
        if !(min..=max).contains(&angle_deg) {
            return Err(AntennaError::OutsideSampledRange {
                angle: angle_deg,
                min,
                max,
            });
        }
        let db = match self
            .samples
            .binary_search_by(|s| s.angle_deg.partial_cmp(&angle_deg).expect("finite angles"))
        {
            Ok(i) => self.samples[i].gain_db,
            Err(i) => {
                let lo = self.samples[i - 1];
                let hi = self.samples[i];
                if lo.gain_db == f64::NEG_INFINITY || hi.gain_db == f64::NEG_INFINITY {
                    f64::NEG_INFINITY
                } else {
                    let t = (angle_deg - lo.angle_deg) / (hi.angle_deg - lo.angle_deg);
                    lo.gain_db + t * (hi.gain_db - lo.gain_db)
                }
            }
        };
        Ok(db_to_amp_ratio(db))
    }
}

fn normalize_header(row: &str) -> String {
    row.split(',')
        .map(|f| f.trim().to_ascii_lowercase())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_finite(field: &str) -> Result<f64, String> {
    let v: f64 = field
        .parse()
        .map_err(|_| format!("'{field}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{field}' is not finite"))
    }
}

/// Sample the analytic doughnut at `step_deg` spacing over [0, 90].
///
/// The 90° sample is always included and carries the `-inf` null marker.
pub fn digitized_doughnut(step_deg: f64) -> Result<TabulatedPattern, AntennaError> {
    if !step_deg.is_finite() || !(0.0..=90.0).contains(&step_deg) || step_deg == 0.0 {
        return Err(AntennaError::InvalidStep(step_deg));
    }
    let mut samples: Vec<PatternSample> = sample_grid(0.0, 90.0, step_deg)
        .into_iter()
        .map(|angle_deg| PatternSample {
            angle_deg,
            gain_db: amp_ratio_to_db(cos_deg(angle_deg)),
        })
        .collect();
    if samples.last().map(|s| s.angle_deg) != Some(90.0) {
        samples.push(PatternSample {
            angle_deg: 90.0,
            gain_db: f64::NEG_INFINITY,
        });
    }
    TabulatedPattern::new(samples, "doughnut")
}

/// Write a pattern as `angle_deg,gain_db` CSV, re-loadable by the pattern
/// loader (nulls come out as `-inf`).
pub fn write_pattern_csv<W: io::Write>(w: &mut W, pattern: &TabulatedPattern) -> io::Result<()> {
    writeln!(w, "{PATTERN_CSV_HEADER}")?;
    for s in pattern.samples() {
        writeln!(w, "{},{}", s.angle_deg, s.gain_db)?;
    }
    Ok(())
}

/// Elevation-cut radiation pattern of a single antenna, peak at 0°.
#[derive(Debug, Clone, PartialEq)]
pub enum RadiationPattern {
    /// Circular cut: linear gain cos θ at angle θ off the peak plane.
    AnalyticDoughnut,
    /// Samples from a datasheet or measurement file.
    Tabulated(TabulatedPattern),
}

impl RadiationPattern {
    /// Linear gain at `theta_deg` away from the peak elevation.
    pub fn gain(&self, theta_deg: f64) -> Result<f64, AntennaError> {
        match self {
            RadiationPattern::AnalyticDoughnut => {
                if (-90.0..=90.0).contains(&theta_deg) {
                    Ok(cos_deg(theta_deg))
                } else {
                    Err(AntennaError::OutsideSampledRange {
                        angle: theta_deg,
                        min: -90.0,
                        max: 90.0,
                    })
                }
            }
            RadiationPattern::Tabulated(p) => p.gain(theta_deg),
        }
    }
}

/// An antenna: a mounting orientation bound to a radiation pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct AntennaConfig {
    pub orientation: Orientation,
    pub pattern: RadiationPattern,
}

impl AntennaConfig {
    /// Antenna with the closed-form doughnut pattern.
    pub fn analytic(orientation: Orientation) -> Self {
        Self {
            orientation,
            pattern: RadiationPattern::AnalyticDoughnut,
        }
    }

    /// Antenna with a tabulated pattern.
    pub fn tabulated(orientation: Orientation, pattern: TabulatedPattern) -> Self {
        Self {
            orientation,
            pattern: RadiationPattern::Tabulated(pattern),
        }
    }

    /// Linear gain toward the air-to-ground ray at elevation `alpha_deg`.
    ///
    /// Horizontal mounting samples the cut at 90° − α.
    pub fn gain(&self, alpha_deg: f64) -> Result<f64, AntennaError> {
        check_elevation(alpha_deg)?;
        let theta_deg = match self.orientation {
            Orientation::Vertical => alpha_deg,
            Orientation::Horizontal => 90.0 - alpha_deg,
        };
        self.pattern.gain(theta_deg)
    }
}

/// Product of the transmit and receive antenna gains at elevation `alpha_deg`.
pub fn gain_product(
    tx: &AntennaConfig,
    rx: &AntennaConfig,
    alpha_deg: f64,
) -> Result<f64, AntennaError> {
    Ok(tx.gain(alpha_deg)? * rx.gain(alpha_deg)?)
}
