//! RSS traces: ordered distance/level series, their CSV form, peak
//! normalization, and sensitivity-floor masking.

use std::fs;
use std::io;
use std::path::Path;

use crate::link::{Rss, RssSample};
use crate::units::milliwatts_to_dbm;

use super::sweep_csv::{parse_sweep_csv, SWEEP_CSV_HEADER};
use super::ScenarioError;

/// Header expected on the first significant line of a trace CSV file.
pub const TRACE_CSV_HEADER: &str = "distance_m,rss_dbm";

/// An ordered RSS-versus-distance series, measured or simulated.
#[derive(Debug, Clone, PartialEq)]
pub struct RssTrace {
    pub label: String,
    pub(crate) samples: Vec<RssSample>,
    pub(crate) normalized: bool,
    pub(crate) sensitivity_floor_dbm: Option<f64>,
}

impl RssTrace {
    /// Build a raw trace; distances must be finite and strictly increasing,
    /// levels finite or below-floor.
    pub fn new(label: impl Into<String>, samples: Vec<RssSample>) -> Result<Self, ScenarioError> {
        let label = label.into();
        for s in &samples {
            if !s.horizontal_distance_m.is_finite() {
                return Err(ScenarioError::InvalidTrace(format!(
                    "trace '{label}': non-finite distance {}",
                    s.horizontal_distance_m
                )));
            }
            if let Rss::Dbm(v) = s.rss {
                if !v.is_finite() {
                    return Err(ScenarioError::InvalidTrace(format!(
                        "trace '{label}': non-finite level {v}"
                    )));
                }
            }
        }
        if samples
            .windows(2)
            .any(|w| w[0].horizontal_distance_m >= w[1].horizontal_distance_m)
        {
            return Err(ScenarioError::InvalidTrace(format!(
                "trace '{label}': distances must be strictly increasing"
            )));
        }
        Ok(Self {
            label,
            samples,
            normalized: false,
            sensitivity_floor_dbm: None,
        })
    }

    pub fn samples(&self) -> &[RssSample] {
        &self.samples
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn sensitivity_floor_dbm(&self) -> Option<f64> {
        self.sensitivity_floor_dbm
    }

    /// Distance and level of the strongest finite sample (first on ties).
    pub fn peak(&self) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for s in &self.samples {
            if let Rss::Dbm(v) = s.rss {
                if best.is_none_or(|(_, bv)| v > bv) {
                    best = Some((s.horizontal_distance_m, v));
                }
            }
        }
        best
    }

    /// Strongest finite level in the trace.
    pub fn max_finite_dbm(&self) -> Option<f64> {
        self.peak().map(|(_, v)| v)
    }

    /// Copy with samples at or below `floor_dbm` masked as below-floor.
    pub fn apply_sensitivity_floor(&self, floor_dbm: f64) -> RssTrace {
        let samples = self
            .samples
            .iter()
            .map(|s| RssSample {
                horizontal_distance_m: s.horizontal_distance_m,
                rss: match s.rss {
                    Rss::Dbm(v) if v <= floor_dbm => Rss::BelowFloor,
                    other => other,
                },
            })
            .collect();
        RssTrace {
            label: self.label.clone(),
            samples,
            normalized: self.normalized,
            sensitivity_floor_dbm: Some(floor_dbm),
        }
    }

    /// Longest contiguous run of samples strictly above `floor` (all finite
    /// samples when `None`), as its first and last distance.
    pub fn coverage_interval(&self, floor: Option<f64>) -> Option<(f64, f64)> {
        let above = |s: &RssSample| match s.rss {
            Rss::Dbm(v) => floor.is_none_or(|f| v > f),
            Rss::BelowFloor => false,
        };
        let mut best: Option<(usize, usize)> = None;
        let mut run_start: Option<usize> = None;
        for (i, s) in self.samples.iter().enumerate() {
            if above(s) {
                let start = *run_start.get_or_insert(i);
                if best.is_none_or(|(bs, be)| i - start > be - bs) {
                    best = Some((start, i));
                }
            } else {
                run_start = None;
            }
        }
        best.map(|(s, e)| {
            (
                self.samples[s].horizontal_distance_m,
                self.samples[e].horizontal_distance_m,
            )
        })
    }
}

/// Shift a trace so its strongest finite sample sits at exactly 0 dB.
///
/// Below-floor markers are untouched and the recorded sensitivity floor is
/// shifted along with the samples. Idempotent: a normalized trace comes back
/// bit-identical.
pub fn normalize_trace(trace: &RssTrace) -> Result<RssTrace, ScenarioError> {
    let peak = trace
        .max_finite_dbm()
        .ok_or_else(|| ScenarioError::EmptyTrace(trace.label.clone()))?;
    let samples = trace
        .samples
        .iter()
        .map(|s| RssSample {
            horizontal_distance_m: s.horizontal_distance_m,
            rss: match s.rss {
                Rss::Dbm(v) => Rss::Dbm(v - peak),
                Rss::BelowFloor => Rss::BelowFloor,
            },
        })
        .collect();
    Ok(RssTrace {
        label: trace.label.clone(),
        samples,
        normalized: true,
        sensitivity_floor_dbm: trace.sensitivity_floor_dbm.map(|f| f - peak),
    })
}

/// Write a trace in the two-column CSV format accepted by [`load_trace`].
///
/// Levels are printed with however many digits it takes to round-trip the
/// exact f64 value; below-floor points come out as `-inf`.
pub fn write_trace_csv<W: io::Write>(w: &mut W, trace: &RssTrace) -> io::Result<()> {
    writeln!(w, "{TRACE_CSV_HEADER}")?;
    for s in trace.samples() {
        writeln!(w, "{},{}", s.horizontal_distance_m, s.rss)?;
    }
    Ok(())
}

/// Read a trace from a CSV file.
///
/// Accepts the two-column `distance_m,rss_dbm` format (with `#` comments,
/// blank lines, and the `-inf` below-floor literal) as well as a sweep CSV
/// holding exactly one trace. Duplicate distances collapse to the
/// power-domain mean of their samples, with a warning; decreasing distances
/// are rejected with the offending line number.
pub fn load_trace(path: impl AsRef<Path>) -> Result<RssTrace, ScenarioError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|cause| ScenarioError::Io {
        path: path.display().to_string(),
        cause,
    })?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "trace".to_owned());
    parse_trace_csv(&text, &path.display().to_string(), label)
}

/// Parse trace CSV text; `origin` names the source in errors.
pub fn parse_trace_csv(
    text: &str,
    origin: &str,
    label: impl Into<String>,
) -> Result<RssTrace, ScenarioError> {
    let label = label.into();
    let header = first_significant_line(text).unwrap_or_default();
    if normalize_header(header) == SWEEP_CSV_HEADER {
        let mut entries = parse_sweep_csv(text, origin)?;
        if entries.len() != 1 {
            return Err(ScenarioError::TraceFormat {
                path: origin.to_owned(),
                line: 1,
                msg: format!(
                    "sweep file holds {} traces; a single-height sweep is required here",
                    entries.len()
                ),
            });
        }
        let mut trace = entries.remove(0).trace;
        trace.label = label;
        return Ok(trace);
    }

    let err = |line: usize, msg: String| ScenarioError::TraceFormat {
        path: origin.to_owned(),
        line,
        msg,
    };

    // (line, distance, every sample seen at that distance)
    let mut rows: Vec<(usize, f64, Vec<Rss>)> = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        if !saw_header {
            if normalize_header(row) != TRACE_CSV_HEADER {
                return Err(err(
                    line,
                    format!("expected header '{TRACE_CSV_HEADER}', got '{row}'"),
                ));
            }
            saw_header = true;
            continue;
        }
        let mut fields = row.split(',');
        let (d_field, r_field) = match (fields.next(), fields.next(), fields.next()) {
            (Some(d), Some(r), None) => (d.trim(), r.trim()),
            _ => {
                return Err(err(
                    line,
                    "expected exactly 2 comma-separated fields".into(),
                ))
            }
        };
        let distance: f64 = d_field
            .parse()
            .map_err(|_| err(line, format!("distance_m: '{d_field}' is not a number")))?;
        if !distance.is_finite() {
            return Err(err(line, format!("distance_m: '{d_field}' is not finite")));
        }
        let rss = if r_field == "-inf" {
            Rss::BelowFloor
        } else {
            let v: f64 = r_field
                .parse()
                .map_err(|_| err(line, format!("rss_dbm: '{r_field}' is not a number")))?;
            if !v.is_finite() {
                return Err(err(
                    line,
                    format!(
                        "rss_dbm: '{r_field}' is not finite (only the literal -inf is allowed)"
                    ),
                ));
            }
            Rss::Dbm(v)
        };
        match rows.last_mut() {
            Some((_, d, group)) if *d == distance => group.push(rss),
            Some((_, d, _)) if *d > distance => {
                return Err(err(
                    line,
                    format!("distance {distance} is not increasing (previous was {d})"),
                ));
            }
            _ => rows.push((line, distance, vec![rss])),
        }
    }
    if rows.is_empty() {
        return Err(err(text.lines().count().max(1), "no data rows".into()));
    }

    let samples = rows
        .into_iter()
        .map(|(line, distance, group)| {
            let rss = if group.len() == 1 {
                group[0]
            } else {
                log::warn!(
                    "{origin}:{line}: {} samples at distance {distance} m collapsed to their power-domain mean",
                    group.len()
                );
                let mean_mw = group.iter().map(|r| r.linear_mw()).sum::<f64>() / group.len() as f64;
                if mean_mw > 0.0 {
                    Rss::Dbm(milliwatts_to_dbm(mean_mw))
                } else {
                    Rss::BelowFloor
                }
            };
            RssSample {
                horizontal_distance_m: distance,
                rss,
            }
        })
        .collect();
    RssTrace::new(label, samples)
}

pub(crate) fn first_significant_line(text: &str) -> Option<&str> {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn normalize_header(row: &str) -> String {
    row.split(',')
        .map(|f| f.trim().to_ascii_lowercase())
        .collect::<Vec<_>>()
        .join(",")
}
