//! Model-versus-measurement comparison: resampling, RMSE, peak locations,
//! and coverage intervals.

use crate::link::Rss;

use super::trace::RssTrace;
use super::ScenarioError;

/// Outcome of comparing a model trace against a measured trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// Root-mean-square level difference over mutually finite points, dB.
    pub rmse_db: f64,
    /// Number of points the RMSE was taken over.
    pub compared_points: usize,
    pub peak_distance_model_m: f64,
    pub peak_distance_trace_m: f64,
    /// Signed model-minus-trace peak location difference, m.
    pub peak_distance_error_m: f64,
    pub coverage_interval_model_m: Option<(f64, f64)>,
    pub coverage_interval_trace_m: Option<(f64, f64)>,
}

/// Resample the model onto the measured distances and quantify the mismatch.
///
/// The model is interpolated linearly in dB onto each measured distance
/// inside its support (measurements are never resampled); the RMSE runs over
/// the points where both sides are finite. Peak distances come from each
/// trace's own argmax, and coverage intervals are the longest contiguous
/// spans above `sensitivity_floor`. Both traces must be in the same
/// normalization state.
pub fn compare(
    model: &RssTrace,
    measured: &RssTrace,
    sensitivity_floor: Option<f64>,
) -> Result<ComparisonReport, ScenarioError> {
    if model.is_normalized() != measured.is_normalized() {
        return Err(ScenarioError::NormalizationMismatch);
    }
    let overlap = measured.samples().iter().any(|s| {
        let d = s.horizontal_distance_m;
        model
            .samples()
            .first()
            .is_some_and(|f| d >= f.horizontal_distance_m)
            && model
                .samples()
                .last()
                .is_some_and(|l| d <= l.horizontal_distance_m)
    });
    if !overlap {
        return Err(ScenarioError::NoOverlap(
            model.label.clone(),
            measured.label.clone(),
        ));
    }

    let mut sum_sq = 0.0;
    let mut n = 0usize;
    for s in measured.samples() {
        let (Rss::Dbm(measured_db), Some(model_db)) =
            (s.rss, interpolate_db(model, s.horizontal_distance_m))
        else {
            continue;
        };
        let diff = model_db - measured_db;
        sum_sq += diff * diff;
        n += 1;
    }
    if n == 0 {
        return Err(ScenarioError::NoOverlap(
            model.label.clone(),
            measured.label.clone(),
        ));
    }

    let (peak_model, _) = model
        .peak()
        .ok_or_else(|| ScenarioError::EmptyTrace(model.label.clone()))?;
    let (peak_trace, _) = measured
        .peak()
        .ok_or_else(|| ScenarioError::EmptyTrace(measured.label.clone()))?;

    Ok(ComparisonReport {
        rmse_db: (sum_sq / n as f64).sqrt(),
        compared_points: n,
        peak_distance_model_m: peak_model,
        peak_distance_trace_m: peak_trace,
        peak_distance_error_m: peak_model - peak_trace,
        coverage_interval_model_m: model.coverage_interval(sensitivity_floor),
        coverage_interval_trace_m: measured.coverage_interval(sensitivity_floor),
    })
}

/// Model level at `distance`, linearly interpolated in dB.
///
/// Exact at sample distances. `None` outside the model's support or when a
/// bracketing sample is below floor.
fn interpolate_db(model: &RssTrace, distance: f64) -> Option<f64> {
    let samples = model.samples();
    let first = samples.first()?.horizontal_distance_m;
    let last = samples.last()?.horizontal_distance_m;
    if !(first..=last).contains(&distance) {
        return None;
    }
    match samples.binary_search_by(|s| {
        s.horizontal_distance_m
            .partial_cmp(&distance)
            .expect("finite distances")
    }) {
        Ok(i) => samples[i].rss.dbm(),
        Err(i) => {
            let lo = &samples[i - 1];
            let hi = &samples[i];
            let a = lo.rss.dbm()?;
            let b = hi.rss.dbm()?;
            let t = (distance - lo.horizontal_distance_m)
                / (hi.horizontal_distance_m - lo.horizontal_distance_m);
            Some(a + t * (b - a))
        }
    }
}
