//! The flat sweep table: one row per (height, distance) sample, with raw and
//! peak-normalized levels plus the geometry columns.

use std::io;

use crate::link::{LinkGeometry, Rss, RssSample};

use super::trace::{normalize_header, normalize_trace, RssTrace};
use super::{Configuration, ScenarioError, SweepSpec};

/// Header of the sweep table.
pub const SWEEP_CSV_HEADER: &str = "distance_m,rss_dbm,rss_norm_db,height_m,config,alpha_deg";

/// One trace recovered from a sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub height_m: f64,
    pub configuration: Configuration,
    pub trace: RssTrace,
}

/// Write sweep traces as a delimited table (`,` for CSV, `\t` for TSV).
///
/// Traces pair up with `spec.drone_heights_m` in order. The normalized
/// column is the per-trace peak normalization of whatever levels the trace
/// holds, so feeding already-normalized traces just repeats them.
pub fn write_sweep_table<W: io::Write>(
    w: &mut W,
    sep: char,
    spec: &SweepSpec,
    traces: &[RssTrace],
) -> Result<(), ScenarioError> {
    let header = SWEEP_CSV_HEADER.replace(',', &sep.to_string());
    writeln!(w, "{header}").map_err(io_err)?;
    for (&height, trace) in spec.drone_heights_m.iter().zip(traces) {
        let normalized = normalize_trace(trace)?;
        for (s, n) in trace.samples().iter().zip(normalized.samples()) {
            let geom = LinkGeometry::new(height, spec.receiver_height_m, s.horizontal_distance_m)?;
            writeln!(
                w,
                "{d}{sep}{raw}{sep}{norm}{sep}{height}{sep}{config}{sep}{alpha}",
                d = s.horizontal_distance_m,
                raw = s.rss,
                norm = n.rss,
                config = spec.configuration,
                alpha = geom.elevation_angle_deg(),
            )
            .map_err(io_err)?;
        }
    }
    Ok(())
}

fn io_err(cause: io::Error) -> ScenarioError {
    ScenarioError::Io {
        path: "<writer>".to_owned(),
        cause,
    }
}

/// Parse a comma-separated sweep table back into per-height traces.
///
/// Rows group into one trace per run of identical (height, config); the raw
/// `rss_dbm` column becomes the trace levels.
pub fn parse_sweep_csv(text: &str, origin: &str) -> Result<Vec<SweepEntry>, ScenarioError> {
    let err = |line: usize, msg: String| ScenarioError::TraceFormat {
        path: origin.to_owned(),
        line,
        msg,
    };

    let mut entries: Vec<SweepEntry> = Vec::new();
    let mut current: Option<(f64, Configuration, Vec<RssSample>)> = None;
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        if !saw_header {
            if normalize_header(row) != SWEEP_CSV_HEADER {
                return Err(err(
                    line,
                    format!("expected header '{SWEEP_CSV_HEADER}', got '{row}'"),
                ));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = row.split(',').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(err(
                line,
                format!("expected 6 fields, got {}", fields.len()),
            ));
        }
        let distance: f64 = fields[0]
            .parse()
            .map_err(|_| err(line, format!("distance_m: '{}' is not a number", fields[0])))?;
        let rss = if fields[1] == "-inf" {
            Rss::BelowFloor
        } else {
            let v: f64 = fields[1]
                .parse()
                .map_err(|_| err(line, format!("rss_dbm: '{}' is not a number", fields[1])))?;
            if !v.is_finite() {
                return Err(err(line, format!("rss_dbm: '{}' is not finite", fields[1])));
            }
            Rss::Dbm(v)
        };
        let height: f64 = fields[3]
            .parse()
            .map_err(|_| err(line, format!("height_m: '{}' is not a number", fields[3])))?;
        let configuration: Configuration = fields[4]
            .parse()
            .map_err(|msg: String| err(line, format!("config: {msg}")))?;

        let sample = RssSample {
            horizontal_distance_m: distance,
            rss,
        };
        match &mut current {
            Some((h, c, samples)) if *h == height && *c == configuration => samples.push(sample),
            _ => {
                if let Some((h, c, samples)) = current.take() {
                    entries.push(make_entry(h, c, samples)?);
                }
                current = Some((height, configuration, vec![sample]));
            }
        }
    }
    if let Some((h, c, samples)) = current.take() {
        entries.push(make_entry(h, c, samples)?);
    }
    if entries.is_empty() {
        return Err(err(text.lines().count().max(1), "no data rows".into()));
    }
    Ok(entries)
}

fn make_entry(
    height_m: f64,
    configuration: Configuration,
    samples: Vec<RssSample>,
) -> Result<SweepEntry, ScenarioError> {
    let trace = RssTrace::new(format!("{configuration} h={height_m}"), samples)?;
    Ok(SweepEntry {
        height_m,
        configuration,
        trace,
    })
}
