//! Flag definitions for the `a2glink` binary.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use a2glink::scenario::PatternMode;
use a2glink::Configuration;

#[derive(Parser, Debug)]
#[command(
    name = "a2glink",
    version,
    about = "Air-to-ground drone link RSS simulator",
    long_about = "Simulates received signal strength for drone-to-ground links under \
                  doughnut-shaped antenna radiation patterns: flyby sweeps, critical \
                  distances, dual-antenna selection, and model-vs-trace comparison."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sweep RSS over horizontal distance for one or more drone heights
    Sweep(SweepArgs),
    /// Locate the RSS-maximizing horizontal distance per height
    Critical(CriticalArgs),
    /// Tabulate dual-antenna composite gains and branch selection vs elevation
    Select(SelectArgs),
    /// Compare a model sweep against a measured trace CSV
    Compare(CompareArgs),
    /// Emit radiation-pattern samples as a re-loadable CSV
    Patterns(PatternsArgs),
}

#[derive(Args, Debug)]
pub struct LinkOpts {
    /// Carrier frequency in Hz
    #[arg(long, default_value_t = 4.0e9)]
    pub frequency: f64,
    /// Path loss exponent
    #[arg(long, default_value_t = 2.0)]
    pub gamma: f64,
    /// Transmit power in dBm
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub tx_power: f64,
}

#[derive(Args, Debug)]
pub struct OutputOpts {
    /// Output file (stdout when omitted)
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    /// Output format (compare prints key-value text when omitted)
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Tsv,
}

impl Format {
    pub fn sep(self) -> char {
        match self {
            Format::Csv => ',',
            Format::Tsv => '\t',
        }
    }
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Antenna configuration: VV, VH, HH, or VHVH
    #[arg(long, value_parser = Configuration::from_str)]
    pub config: Configuration,
    /// Drone heights in meters, comma separated
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,50")]
    pub heights: Vec<f64>,
    /// Ground receiver height in meters
    #[arg(long, default_value_t = 1.27)]
    pub rx_height: f64,
    /// Horizontal distance range as start,stop in meters
    #[arg(long, value_delimiter = ',', default_value = "0,200")]
    pub range: Vec<f64>,
    /// Distance step in meters
    #[arg(long, default_value_t = 0.5)]
    pub step: f64,
    /// Gain source: 'analytic' or 'tabulated:FILE'
    #[arg(long, default_value = "analytic", value_parser = parse_pattern_mode)]
    pub pattern: PatternMode,
    /// Peak-normalize each trace before writing
    #[arg(long)]
    pub normalized: bool,
    #[command(flatten)]
    pub link: LinkOpts,
    #[command(flatten)]
    pub out: OutputOpts,
}

#[derive(Args, Debug)]
pub struct CriticalArgs {
    /// Antenna configuration: VV, VH, or HH
    #[arg(long, default_value = "VV", value_parser = Configuration::from_str)]
    pub config: Configuration,
    /// Drone heights in meters, comma separated
    #[arg(
        long,
        visible_alias = "height",
        value_delimiter = ',',
        default_value = "10,20,30,50"
    )]
    pub heights: Vec<f64>,
    /// Ground receiver height in meters
    #[arg(long, default_value_t = 1.27)]
    pub rx_height: f64,
    /// Search range as start,stop in meters
    #[arg(long, value_delimiter = ',', default_value = "0,200")]
    pub range: Vec<f64>,
    /// Search grid resolution in meters
    #[arg(long, default_value_t = 0.1)]
    pub resolution: f64,
    /// Gain source: 'analytic' or 'tabulated:FILE'
    #[arg(long, default_value = "analytic", value_parser = parse_pattern_mode)]
    pub pattern: PatternMode,
    #[command(flatten)]
    pub link: LinkOpts,
    #[command(flatten)]
    pub out: OutputOpts,
}

#[derive(Args, Debug)]
pub struct SelectArgs {
    /// Elevation-angle step in degrees over [0, 90]
    #[arg(long, default_value_t = 1.0)]
    pub alpha_step: f64,
    #[command(flatten)]
    pub out: OutputOpts,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Measured trace CSV (or a single-height sweep CSV)
    #[arg(long)]
    pub trace: PathBuf,
    /// Antenna configuration of the model sweep
    #[arg(long, value_parser = Configuration::from_str)]
    pub config: Configuration,
    /// Drone height of the model sweep in meters
    #[arg(long)]
    pub height: f64,
    /// Ground receiver height in meters
    #[arg(long, default_value_t = 1.27)]
    pub rx_height: f64,
    /// Model distance range as start,stop in meters
    #[arg(long, value_delimiter = ',', default_value = "0,200")]
    pub range: Vec<f64>,
    /// Model distance step in meters
    #[arg(long, default_value_t = 0.5)]
    pub step: f64,
    /// Gain source: 'analytic' or 'tabulated:FILE'
    #[arg(long, default_value = "analytic", value_parser = parse_pattern_mode)]
    pub pattern: PatternMode,
    /// Peak-normalize both sides before comparing
    #[arg(long)]
    pub normalized: bool,
    /// Sensitivity floor for coverage intervals, in the traces' dB units
    #[arg(long, allow_negative_numbers = true)]
    pub floor: Option<f64>,
    #[command(flatten)]
    pub link: LinkOpts,
    #[command(flatten)]
    pub out: OutputOpts,
}

#[derive(Args, Debug)]
pub struct PatternsArgs {
    /// 'analytic' to digitize the doughnut, or 'tabulated:FILE' to
    /// renormalize and re-emit an existing file
    #[arg(long, default_value = "analytic", value_parser = parse_pattern_mode)]
    pub pattern: PatternMode,
    /// Sampling step in degrees for the analytic pattern
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    #[command(flatten)]
    pub out: OutputOpts,
}

fn parse_pattern_mode(s: &str) -> Result<PatternMode, String> {
    if s.eq_ignore_ascii_case("analytic") {
        return Ok(PatternMode::Analytic);
    }
    if let Some(path) = s.strip_prefix("tabulated:") {
        if path.is_empty() {
            return Err("'tabulated:' needs a file path".into());
        }
        return Ok(PatternMode::Tabulated(PathBuf::from(path)));
    }
    Err(format!(
        "unknown pattern '{s}' (expected 'analytic' or 'tabulated:FILE')"
    ))
}
