//! `a2glink`: air-to-ground drone link RSS simulator.
//!
//! Exit codes: 0 on success, 1 for runtime failures (missing files, parse
//! errors, unsupported combinations), 2 for invalid flags or option values.

mod options;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;

use a2glink::scenario::PatternMode;
use a2glink::units::sample_grid;
use a2glink::{
    compare, critical_distance_analytic, critical_distance_numeric, load_trace, normalize_trace,
    run_sweep, selection_gain, write_sweep_table, AntennaConfig, ComparisonReport, Configuration,
    LinkBudget, SweepSpec, TabulatedPattern,
};

use options::{
    Cli, Command, CompareArgs, CriticalArgs, Format, LinkOpts, OutputOpts, PatternsArgs,
    SelectArgs, SweepArgs,
};

enum Failure {
    /// Bad option values: exit 2, like a flag-parse error.
    Usage(String),
    /// Everything that goes wrong after validation: exit 1.
    Run(anyhow::Error),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sweep(args) => {
            validate_sweep(&args).map_err(Failure::Usage)?;
            cmd_sweep(args).map_err(Failure::Run)
        }
        Command::Critical(args) => {
            validate_critical(&args).map_err(Failure::Usage)?;
            cmd_critical(args).map_err(Failure::Run)
        }
        Command::Select(args) => {
            validate_select(&args).map_err(Failure::Usage)?;
            cmd_select(args).map_err(Failure::Run)
        }
        Command::Compare(args) => {
            validate_compare(&args).map_err(Failure::Usage)?;
            cmd_compare(args).map_err(Failure::Run)
        }
        Command::Patterns(args) => {
            validate_patterns(&args).map_err(Failure::Usage)?;
            cmd_patterns(args).map_err(Failure::Run)
        }
    }
}

// ---------------------------------------------------------------------------
// validation (before any computation)

fn check_link(link: &LinkOpts) -> Result<(), String> {
    if !(link.frequency.is_finite() && link.frequency > 0.0) {
        return Err(format!(
            "--frequency must be positive, got {}",
            link.frequency
        ));
    }
    if !(link.gamma.is_finite() && link.gamma > 0.0) {
        return Err(format!("--gamma must be positive, got {}", link.gamma));
    }
    if !link.tx_power.is_finite() {
        return Err(format!("--tx-power must be finite, got {}", link.tx_power));
    }
    Ok(())
}

fn check_heights(heights: &[f64], rx_height: f64) -> Result<(), String> {
    if !(rx_height.is_finite() && rx_height >= 0.0) {
        return Err(format!("--rx-height must be non-negative, got {rx_height}"));
    }
    if heights.is_empty() {
        return Err("--heights needs at least one value".into());
    }
    for &h in heights {
        if !(h.is_finite() && h > rx_height) {
            return Err(format!(
                "--heights values must exceed --rx-height {rx_height}, got {h}"
            ));
        }
    }
    Ok(())
}

fn check_range(range: &[f64]) -> Result<(f64, f64), String> {
    match range {
        [start, stop] if start.is_finite() && stop.is_finite() && *start >= 0.0 && stop > start => {
            Ok((*start, *stop))
        }
        _ => Err(format!(
            "--range must be start,stop with 0 <= start < stop, got {range:?}"
        )),
    }
}

fn validate_sweep(args: &SweepArgs) -> Result<(), String> {
    check_link(&args.link)?;
    check_heights(&args.heights, args.rx_height)?;
    check_range(&args.range)?;
    if !(args.step.is_finite() && args.step > 0.0) {
        return Err(format!("--step must be positive, got {}", args.step));
    }
    Ok(())
}

fn validate_critical(args: &CriticalArgs) -> Result<(), String> {
    check_link(&args.link)?;
    check_heights(&args.heights, args.rx_height)?;
    check_range(&args.range)?;
    if !(args.resolution.is_finite() && args.resolution > 0.0) {
        return Err(format!(
            "--resolution must be positive, got {}",
            args.resolution
        ));
    }
    if args.config == Configuration::VhVh {
        return Err("critical supports --config VV, VH, or HH".into());
    }
    Ok(())
}

fn validate_select(args: &SelectArgs) -> Result<(), String> {
    if !(args.alpha_step.is_finite() && args.alpha_step > 0.0 && args.alpha_step <= 90.0) {
        return Err(format!(
            "--alpha-step must be in (0, 90], got {}",
            args.alpha_step
        ));
    }
    Ok(())
}

fn validate_compare(args: &CompareArgs) -> Result<(), String> {
    check_link(&args.link)?;
    check_heights(&[args.height], args.rx_height)?;
    check_range(&args.range)?;
    if !(args.step.is_finite() && args.step > 0.0) {
        return Err(format!("--step must be positive, got {}", args.step));
    }
    if let Some(f) = args.floor {
        if !f.is_finite() {
            return Err(format!("--floor must be finite, got {f}"));
        }
    }
    Ok(())
}

fn validate_patterns(args: &PatternsArgs) -> Result<(), String> {
    if !(args.step.is_finite() && args.step > 0.0 && args.step <= 90.0) {
        return Err(format!("--step must be in (0, 90], got {}", args.step));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// commands

fn budget(link: &LinkOpts) -> anyhow::Result<LinkBudget> {
    Ok(LinkBudget::new(link.tx_power, link.frequency, link.gamma)?)
}

fn open_output(out: &OutputOpts) -> anyhow::Result<Box<dyn Write>> {
    Ok(match &out.output {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).with_context(|| {
                format!("cannot create output file {}", path.display())
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<()> {
    let (start, stop) = check_range(&args.range).expect("validated");
    let spec = SweepSpec {
        drone_heights_m: args.heights.clone(),
        receiver_height_m: args.rx_height,
        l_range_m: (start, stop),
        step_m: args.step,
        configuration: args.config,
        pattern_mode: args.pattern.clone(),
    };
    let budget = budget(&args.link)?;
    let mut traces = run_sweep(&spec, &budget)?;
    if args.normalized {
        traces = traces
            .iter()
            .map(normalize_trace)
            .collect::<Result<_, _>>()?;
    }
    let sep = args.out.format.unwrap_or(Format::Csv).sep();
    let mut out = open_output(&args.out)?;
    write_sweep_table(&mut out, sep, &spec, &traces)?;
    out.flush().context("writing output")?;
    Ok(())
}

fn cmd_critical(args: CriticalArgs) -> anyhow::Result<()> {
    let (start, stop) = check_range(&args.range).expect("validated");
    let budget = budget(&args.link)?;
    let (ground, drone) = args
        .config
        .orientations()
        .expect("VHVH rejected during validation");
    let pattern = match &args.pattern {
        PatternMode::Analytic => None,
        PatternMode::Tabulated(path) => Some(
            TabulatedPattern::from_csv_path(path)
                .with_context(|| format!("pattern file {}", path.display()))?,
        ),
    };
    let make = |orientation| match &pattern {
        None => AntennaConfig::analytic(orientation),
        Some(p) => AntennaConfig::tabulated(orientation, p.clone()),
    };
    let (tx, rx) = (make(drone), make(ground));

    let sep = args.out.format.unwrap_or(Format::Csv).sep();
    let mut out = open_output(&args.out)?;
    writeln!(out, "height_m{sep}l_analytic_m{sep}l_numeric_m")?;
    for &height in &args.heights {
        let delta_h = height - args.rx_height;
        let analytic = if args.config == Configuration::Vv && pattern.is_none() {
            Some(critical_distance_analytic(delta_h, args.link.gamma)?)
        } else {
            None
        };
        let numeric =
            critical_distance_numeric(&budget, delta_h, &tx, &rx, (start, stop), args.resolution)?;
        match analytic {
            Some(a) => writeln!(out, "{height}{sep}{a}{sep}{numeric}")?,
            None => writeln!(out, "{height}{sep}{sep}{numeric}")?,
        }
    }
    out.flush().context("writing output")?;
    Ok(())
}

fn cmd_select(args: SelectArgs) -> anyhow::Result<()> {
    let sep = args.out.format.unwrap_or(Format::Csv).sep();
    let mut out = open_output(&args.out)?;
    writeln!(
        out,
        "alpha_deg{sep}gain_rx_vertical{sep}gain_rx_horizontal{sep}selected{sep}selected_gain"
    )?;
    for alpha in sample_grid(0.0, 90.0, args.alpha_step) {
        let g = selection_gain(alpha)?;
        writeln!(
            out,
            "{alpha}{sep}{}{sep}{}{sep}{}{sep}{}",
            g.gain_rx_vertical, g.gain_rx_horizontal, g.selected, g.selected_gain
        )?;
    }
    out.flush().context("writing output")?;
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> anyhow::Result<()> {
    let measured = load_trace(&args.trace)?;
    let (start, stop) = check_range(&args.range).expect("validated");
    let spec = SweepSpec {
        drone_heights_m: vec![args.height],
        receiver_height_m: args.rx_height,
        l_range_m: (start, stop),
        step_m: args.step,
        configuration: args.config,
        pattern_mode: args.pattern.clone(),
    };
    let budget = budget(&args.link)?;
    let mut model = run_sweep(&spec, &budget)?.remove(0);
    let measured = if args.normalized {
        model = normalize_trace(&model)?;
        normalize_trace(&measured)?
    } else {
        measured
    };
    let report = compare(&model, &measured, args.floor)?;

    let mut out = open_output(&args.out)?;
    match args.out.format {
        None => write_report_text(&mut out, &report)?,
        Some(format) => write_report_row(&mut out, format.sep(), &report)?,
    }
    out.flush().context("writing output")?;
    Ok(())
}

fn write_report_text<W: Write>(out: &mut W, report: &ComparisonReport) -> io::Result<()> {
    writeln!(out, "rmse_db = {}", report.rmse_db)?;
    writeln!(out, "compared_points = {}", report.compared_points)?;
    writeln!(
        out,
        "peak_distance_model_m = {}",
        report.peak_distance_model_m
    )?;
    writeln!(
        out,
        "peak_distance_trace_m = {}",
        report.peak_distance_trace_m
    )?;
    writeln!(
        out,
        "peak_distance_error_m = {}",
        report.peak_distance_error_m
    )?;
    let interval = |i: Option<(f64, f64)>| match i {
        Some((a, b)) => format!("[{a}, {b}]"),
        None => "none".to_owned(),
    };
    writeln!(
        out,
        "coverage_model_m = {}",
        interval(report.coverage_interval_model_m)
    )?;
    writeln!(
        out,
        "coverage_trace_m = {}",
        interval(report.coverage_interval_trace_m)
    )
}

fn write_report_row<W: Write>(out: &mut W, sep: char, report: &ComparisonReport) -> io::Result<()> {
    let header = [
        "rmse_db",
        "compared_points",
        "peak_distance_model_m",
        "peak_distance_trace_m",
        "peak_distance_error_m",
        "coverage_model_start_m",
        "coverage_model_stop_m",
        "coverage_trace_start_m",
        "coverage_trace_stop_m",
    ];
    writeln!(out, "{}", header.join(&sep.to_string()))?;
    let interval = |i: Option<(f64, f64)>| match i {
        Some((a, b)) => (a.to_string(), b.to_string()),
        None => (String::new(), String::new()),
    };
    let (m0, m1) = interval(report.coverage_interval_model_m);
    let (t0, t1) = interval(report.coverage_interval_trace_m);
    let row = [
        report.rmse_db.to_string(),
        report.compared_points.to_string(),
        report.peak_distance_model_m.to_string(),
        report.peak_distance_trace_m.to_string(),
        report.peak_distance_error_m.to_string(),
        m0,
        m1,
        t0,
        t1,
    ];
    writeln!(out, "{}", row.join(&sep.to_string()))
}

fn cmd_patterns(args: PatternsArgs) -> anyhow::Result<()> {
    let (pattern, offset_comment) = match &args.pattern {
        PatternMode::Analytic => (a2glink::digitized_doughnut(args.step)?, None),
        PatternMode::Tabulated(path) => {
            let p = TabulatedPattern::from_csv_path(path)
                .with_context(|| format!("pattern file {}", path.display()))?;
            let offset = p.normalization_offset_db();
            (p, (offset != 0.0).then_some(offset))
        }
    };
    let mut out = open_output(&args.out)?;
    if let Some(offset) = offset_comment {
        writeln!(out, "# normalization_offset_db = {offset}")?;
    }
    a2glink::write_pattern_csv(&mut out, &pattern)?;
    out.flush().context("writing output")?;
    Ok(())
}
