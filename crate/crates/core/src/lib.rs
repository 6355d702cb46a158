//! Air-to-ground drone link simulation under 3D antenna radiation patterns.
//!
//! Models the received signal strength of a UWB link between a drone and a
//! ground unit when both carry doughnut-pattern antennas. The gain each
//! antenna contributes depends on the elevation angle of the ray and on how
//! the antenna is mounted, which makes the RSS of a flyby non-monotonic:
//! with vertical antennas on both ends the signal peaks at a critical
//! horizontal distance and degrades toward the overhead null.
//!
//! The crate covers:
//!
//! - analytic (cos/sin) and tabulated radiation patterns ([`antenna`]);
//! - link geometry and the RSS budget, plus closed-form and numeric
//!   critical-distance search ([`link`]);
//! - two-antennas-per-terminal composite gains with receive-branch
//!   selection ([`multiantenna`]);
//! - flyby sweeps, trace CSV ingestion, peak normalization, and
//!   model-versus-measurement comparison ([`scenario`]).
//!
//! ```
//! use a2glink::{rss, AntennaConfig, LinkBudget, LinkGeometry, Orientation};
//!
//! let budget = LinkBudget::default(); // 0 dBm at 4 GHz, free-space exponent
//! let geom = LinkGeometry::new(10.0, 1.27, 25.0)?;
//! let vertical = AntennaConfig::analytic(Orientation::Vertical);
//! let level = rss(&budget, &geom, &vertical, &vertical)?;
//! assert!(level.dbm().unwrap() < -70.0);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod antenna;
pub mod link;
pub mod multiantenna;
pub mod scenario;
pub mod units;

pub use antenna::{
    analytic_gain, digitized_doughnut, gain_product, write_pattern_csv, AntennaConfig,
    AntennaError, Orientation, PatternSample, RadiationPattern, TabulatedPattern,
};
pub use link::{
    critical_distance_analytic, critical_distance_numeric, rss, rss_derivative_sign,
    rss_milliwatts, LinkBudget, LinkError, LinkGeometry, Rss, RssSample,
};
pub use multiantenna::{
    composite_gain_horizontal, composite_gain_vertical, rss_vhvh, selection_gain, DualAntennaGains,
};
pub use scenario::{
    compare, load_trace, normalize_trace, parse_sweep_csv, parse_trace_csv, run_sweep,
    write_sweep_table, write_trace_csv, ComparisonReport, Configuration, PatternMode, RssTrace,
    ScenarioError, SweepEntry, SweepSpec,
};
