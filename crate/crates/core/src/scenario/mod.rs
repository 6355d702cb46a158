//! Flyby sweep scenarios: spec-driven RSS traces per drone height, trace
//! ingestion, peak normalization, and model-versus-measurement comparison.

mod compare;
mod sweep_csv;
mod trace;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::antenna::{AntennaConfig, AntennaError, Orientation, TabulatedPattern};
use crate::link::{rss, LinkBudget, LinkError, LinkGeometry, RssSample};
use crate::multiantenna::rss_vhvh;
use crate::units::sample_grid;

pub use compare::{compare, ComparisonReport};
pub use sweep_csv::{parse_sweep_csv, write_sweep_table, SweepEntry, SWEEP_CSV_HEADER};
pub use trace::{
    load_trace, normalize_trace, parse_trace_csv, write_trace_csv, RssTrace, TRACE_CSV_HEADER,
};

/// Errors from sweep generation, trace files, and comparisons.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
    #[error("multi-antenna selection is only defined for the analytic pattern")]
    UnsupportedCombination,
    #[error("trace '{0}' has no finite samples")]
    EmptyTrace(String),
    #[error("{0}")]
    InvalidTrace(String),
    #[error("{path}:{line}: {msg}")]
    TraceFormat {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("traces '{0}' and '{1}' share no comparable points")]
    NoOverlap(String, String),
    #[error("traces must be in the same normalization state to compare")]
    NormalizationMismatch,
    #[error("pattern file {path}: {cause}")]
    Pattern { path: String, cause: AntennaError },
    #[error("{path}: {cause}")]
    Io { path: String, cause: std::io::Error },
    #[error(transparent)]
    Antenna(#[from] AntennaError),
    #[error(transparent)]
    Link(#[from] LinkError),
}

/// Antenna orientation pairing for a link: ground antenna first, then the
/// drone antenna. `VhVh` puts one of each on both terminals with
/// receive-branch selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Configuration {
    Vv,
    Vh,
    Hh,
    VhVh,
}

impl Configuration {
    pub const ALL: [Configuration; 4] = [
        Configuration::Vv,
        Configuration::Vh,
        Configuration::Hh,
        Configuration::VhVh,
    ];

    /// Ground (receive) and drone (transmit) orientations; `None` for the
    /// dual-antenna selection mode.
    pub fn orientations(self) -> Option<(Orientation, Orientation)> {
        match self {
            Configuration::Vv => Some((Orientation::Vertical, Orientation::Vertical)),
            Configuration::Vh => Some((Orientation::Vertical, Orientation::Horizontal)),
            Configuration::Hh => Some((Orientation::Horizontal, Orientation::Horizontal)),
            Configuration::VhVh => None,
        }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Configuration::Vv => "VV",
            Configuration::Vh => "VH",
            Configuration::Hh => "HH",
            Configuration::VhVh => "VHVH",
        })
    }
}

impl FromStr for Configuration {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "vv" => Ok(Configuration::Vv),
            "vh" => Ok(Configuration::Vh),
            "hh" => Ok(Configuration::Hh),
            "vhvh" | "vh-vh" => Ok(Configuration::VhVh),
            other => Err(format!(
                "unknown configuration '{other}' (expected VV, VH, HH, or VHVH)"
            )),
        }
    }
}

/// Where per-antenna gains come from during a sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum PatternMode {
    /// Closed-form doughnut pattern.
    Analytic,
    /// Both antennas use the pattern loaded from this CSV file.
    Tabulated(PathBuf),
}

/// A flyby sweep description: which heights, which distances, which
/// antennas.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub drone_heights_m: Vec<f64>,
    pub receiver_height_m: f64,
    /// Horizontal distance range `[start, stop]`, m.
    pub l_range_m: (f64, f64),
    pub step_m: f64,
    pub configuration: Configuration,
    pub pattern_mode: PatternMode,
}

impl SweepSpec {
    /// Tripod height of the ground unit.
    pub const DEFAULT_RECEIVER_HEIGHT_M: f64 = 1.27;
    pub const DEFAULT_L_RANGE_M: (f64, f64) = (0.0, 200.0);
    pub const DEFAULT_STEP_M: f64 = 0.5;

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |msg: String| Err(ScenarioError::InvalidSpec(msg));
        if self.drone_heights_m.is_empty() {
            return bad("at least one drone height is required".into());
        }
        if !(self.receiver_height_m.is_finite() && self.receiver_height_m >= 0.0) {
            return bad(format!(
                "receiver height {} must be non-negative",
                self.receiver_height_m
            ));
        }
        for &h in &self.drone_heights_m {
            if !(h.is_finite() && h > self.receiver_height_m) {
                return bad(format!(
                    "drone height {h} must exceed the receiver height {}",
                    self.receiver_height_m
                ));
            }
        }
        let (start, stop) = self.l_range_m;
        if !(start.is_finite() && stop.is_finite() && start >= 0.0 && stop > start) {
            return bad(format!("distance range [{start}, {stop}] is not valid"));
        }
        if !(self.step_m.is_finite() && self.step_m > 0.0) {
            return bad(format!("step {} must be positive", self.step_m));
        }
        Ok(())
    }

    /// The horizontal-distance grid the sweep evaluates.
    pub fn distances_m(&self) -> Vec<f64> {
        sample_grid(self.l_range_m.0, self.l_range_m.1, self.step_m)
    }
}

impl Default for SweepSpec {
    /// The standard flyby: heights 10/20/30/50 m over a tripod-height
    /// receiver, distances 0–200 m at 0.5 m steps, vertical antennas.
    fn default() -> Self {
        Self {
            drone_heights_m: vec![10.0, 20.0, 30.0, 50.0],
            receiver_height_m: Self::DEFAULT_RECEIVER_HEIGHT_M,
            l_range_m: Self::DEFAULT_L_RANGE_M,
            step_m: Self::DEFAULT_STEP_M,
            configuration: Configuration::Vv,
            pattern_mode: PatternMode::Analytic,
        }
    }
}

/// Evaluate one raw-dBm trace per drone height.
///
/// Overhead points come out below-floor whenever the configuration has a
/// null there (VV and VH); HH and VHVH stay finite at l = 0. The
/// multi-antenna configuration only exists on the analytic pattern, so
/// `VhVh` with a tabulated pattern is an error.
pub fn run_sweep(spec: &SweepSpec, budget: &LinkBudget) -> Result<Vec<RssTrace>, ScenarioError> {
    spec.validate()?;
    let pattern = match &spec.pattern_mode {
        PatternMode::Analytic => None,
        PatternMode::Tabulated(path) => Some(TabulatedPattern::from_csv_path(path).map_err(
            |cause| ScenarioError::Pattern {
                path: path.display().to_string(),
                cause,
            },
        )?),
    };
    if pattern.is_some() && spec.configuration == Configuration::VhVh {
        return Err(ScenarioError::UnsupportedCombination);
    }

    let pair = spec.configuration.orientations().map(|(ground, drone)| {
        let make = |orientation| match &pattern {
            None => AntennaConfig::analytic(orientation),
            Some(p) => AntennaConfig::tabulated(orientation, p.clone()),
        };
        // tx is the drone side, rx the ground side; Eq-symmetric either way
        (make(drone), make(ground))
    });

    let distances = spec.distances_m();
    let mut traces = Vec::with_capacity(spec.drone_heights_m.len());
    for &height in &spec.drone_heights_m {
        let mut samples = Vec::with_capacity(distances.len());
        for &l in &distances {
            let geom = LinkGeometry::new(height, spec.receiver_height_m, l)?;
            let level = match &pair {
                Some((tx, rx)) => rss(budget, &geom, tx, rx)?,
                None => rss_vhvh(budget, &geom)?,
            };
            samples.push(RssSample {
                horizontal_distance_m: l,
                rss: level,
            });
        }
        traces.push(RssTrace::new(
            format!("{} h={height}", spec.configuration),
            samples,
        )?);
    }
    Ok(traces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antenna::{digitized_doughnut, write_pattern_csv};
    use crate::link::Rss;

    fn spec(configuration: Configuration, heights: &[f64], receiver: f64) -> SweepSpec {
        SweepSpec {
            drone_heights_m: heights.to_vec(),
            receiver_height_m: receiver,
            l_range_m: (0.0, 200.0),
            step_m: 0.5,
            configuration,
            pattern_mode: PatternMode::Analytic,
        }
    }

    #[test]
    fn configuration_strings_round_trip() {
        for c in Configuration::ALL {
            assert_eq!(c.to_string().parse::<Configuration>().unwrap(), c);
        }
        assert_eq!(
            "vh-vh".parse::<Configuration>().unwrap(),
            Configuration::VhVh
        );
        assert!("xx".parse::<Configuration>().is_err());
    }

    #[test]
    fn vv_peak_sits_at_the_height_difference() {
        let budget = LinkBudget::default();
        // receiver on the ground: peak at l = h
        let traces = run_sweep(&spec(Configuration::Vv, &[10.0], 0.0), &budget).unwrap();
        let (peak_d, _) = traces[0].peak().unwrap();
        assert!((peak_d - 10.0).abs() <= 0.5, "peak at {peak_d}");

        // tripod receiver: peak at l = h - 1.27
        let traces = run_sweep(&spec(Configuration::Vv, &[10.0], 1.27), &budget).unwrap();
        let (peak_d, _) = traces[0].peak().unwrap();
        assert!((peak_d - 8.73).abs() <= 0.5, "peak at {peak_d}");
    }

    #[test]
    fn overhead_point_masks_only_the_nulled_configurations() {
        let budget = LinkBudget::default();
        for c in Configuration::ALL {
            let traces = run_sweep(&spec(c, &[20.0], 1.27), &budget).unwrap();
            let first = traces[0].samples()[0];
            assert_eq!(first.horizontal_distance_m, 0.0);
            match c {
                Configuration::Vv | Configuration::Vh => {
                    assert_eq!(first.rss, Rss::BelowFloor, "{c}")
                }
                Configuration::Hh | Configuration::VhVh => {
                    assert!(first.rss.is_finite(), "{c}")
                }
            }
        }
    }

    #[test]
    fn hh_trace_is_strictly_decreasing() {
        let budget = LinkBudget::default();
        let traces = run_sweep(&spec(Configuration::Hh, &[10.0], 1.27), &budget).unwrap();
        let samples = traces[0].samples();
        for w in samples.windows(2) {
            assert!(
                w[1].rss.dbm().unwrap() < w[0].rss.dbm().unwrap(),
                "not decreasing at {} m",
                w[1].horizontal_distance_m
            );
        }
    }

    #[test]
    fn vhvh_dominates_and_requires_the_analytic_pattern() {
        let budget = LinkBudget::default();
        let dual = run_sweep(&spec(Configuration::VhVh, &[20.0], 1.27), &budget).unwrap();
        for c in [Configuration::Vv, Configuration::Vh, Configuration::Hh] {
            let single = run_sweep(&spec(c, &[20.0], 1.27), &budget).unwrap();
            for (d, s) in dual[0].samples().iter().zip(single[0].samples()) {
                assert!(d.rss.linear_mw() >= s.rss.linear_mw(), "{c}");
            }
        }

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("doughnut.csv");
        let mut f = std::fs::File::create(&path).unwrap();
        write_pattern_csv(&mut f, &digitized_doughnut(1.0).unwrap()).unwrap();
        let mut s = spec(Configuration::VhVh, &[20.0], 1.27);
        s.pattern_mode = PatternMode::Tabulated(path);
        assert!(matches!(
            run_sweep(&s, &budget),
            Err(ScenarioError::UnsupportedCombination)
        ));
    }

    #[test]
    fn tabulated_sweep_runs_and_pattern_errors_carry_the_path() {
        let budget = LinkBudget::default();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("doughnut.csv");
        let mut f = std::fs::File::create(&path).unwrap();
        write_pattern_csv(&mut f, &digitized_doughnut(1.0).unwrap()).unwrap();

        let mut s = spec(Configuration::Vv, &[10.0], 1.27);
        s.pattern_mode = PatternMode::Tabulated(path);
        let traces = run_sweep(&s, &budget).unwrap();
        assert_eq!(traces[0].samples().len(), 401);

        let mut s = spec(Configuration::Vv, &[10.0], 1.27);
        s.pattern_mode = PatternMode::Tabulated(dir.path().join("missing.csv"));
        let err = run_sweep(&s, &budget).unwrap_err();
        assert!(err.to_string().contains("missing.csv"), "{err}");
    }

    #[test]
    fn spec_validation_catches_bad_fields() {
        let budget = LinkBudget::default();
        let mut s = spec(Configuration::Vv, &[], 1.27);
        assert!(run_sweep(&s, &budget).is_err());
        s = spec(Configuration::Vv, &[1.0], 1.27);
        assert!(run_sweep(&s, &budget).is_err());
        s = spec(Configuration::Vv, &[10.0], 1.27);
        s.step_m = 0.0;
        assert!(run_sweep(&s, &budget).is_err());
        s = spec(Configuration::Vv, &[10.0], 1.27);
        s.l_range_m = (5.0, 5.0);
        assert!(run_sweep(&s, &budget).is_err());
    }

    #[test]
    fn vv_peak_distance_grows_with_height() {
        let budget = LinkBudget::default();
        let traces = run_sweep(
            &spec(Configuration::Vv, &[10.0, 20.0, 30.0, 50.0], 1.27),
            &budget,
        )
        .unwrap();
        let peaks: Vec<f64> = traces.iter().map(|t| t.peak().unwrap().0).collect();
        assert!(peaks.windows(2).all(|w| w[0] < w[1]), "peaks {peaks:?}");
    }
}
