//! dB/linear power conversions and degree-domain trigonometry.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

/// Convert a linear power ratio to dB (10·log10).
pub fn power_ratio_to_db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}

/// Convert dB to a linear power ratio.
pub fn db_to_power_ratio(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Convert an amplitude ratio to dB (20·log10).
pub fn amp_ratio_to_db(ratio: f64) -> f64 {
    20.0 * ratio.log10()
}

/// Convert dB to an amplitude ratio.
pub fn db_to_amp_ratio(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

/// Convert a power in milliwatts to dBm.
pub fn milliwatts_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

/// Convert dBm to milliwatts.
pub fn dbm_to_milliwatts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Sine of an angle in degrees.
pub fn sin_deg(deg: f64) -> f64 {
    deg.to_radians().sin()
}

/// Cosine of an angle in degrees.
///
/// Evaluated as sin(90° − deg) so that the null at 90° is exactly zero;
/// `(90.0_f64).to_radians().cos()` is only zero to within rounding.
pub fn cos_deg(deg: f64) -> f64 {
    (90.0 - deg).to_radians().sin()
}

/// Inclusive sample grid from `start` to `stop` at `step` spacing.
///
/// The last point snaps to `stop` when it lands within rounding slop of it.
pub fn sample_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let slop = step * 1e-9;
    let mut out = Vec::new();
    for k in 0.. {
        let v = start + k as f64 * step;
        if v > stop + slop {
            break;
        }
        out.push(if (v - stop).abs() <= slop { stop } else { v });
    }
    out
}
