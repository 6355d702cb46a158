//! Composite gains and receive-branch selection when both terminals carry
//! two antennas, one vertical and one horizontal.
//!
//! The transmitter drives both of its antennas with the same signal, so each
//! receive branch hears the sum of two power-domain contributions: the
//! vertical branch collects cos²α + cosα·sinα, the horizontal one
//! sin²α + cosα·sinα. The receiver then selects the stronger branch. The
//! composite gains may exceed 1 because two transmit streams add; their sum
//! is identically 1 + sin 2α. Defined on the analytic doughnut only.

use crate::antenna::{check_elevation, AntennaError, Orientation};
use crate::link::{rss_from_gain, LinkBudget, LinkError, LinkGeometry, Rss};
use crate::units::{cos_deg, sin_deg};

/// Gains seen by the two receive branches at one elevation angle, plus the
/// selection outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualAntennaGains {
    pub gain_rx_vertical: f64,
    pub gain_rx_horizontal: f64,
    /// Branch the receiver picks; ties go to vertical.
    pub selected: Orientation,
    pub selected_gain: f64,
}

/// Composite gain at the vertical receive branch: cos²α + cosα·sinα.
pub fn composite_gain_vertical(alpha_deg: f64) -> Result<f64, AntennaError> {
    check_elevation(alpha_deg)?;
    let c = cos_deg(alpha_deg);
    let s = sin_deg(alpha_deg);
    Ok(c * c + c * s)
}

/// Composite gain at the horizontal receive branch: sin²α + cosα·sinα.
pub fn composite_gain_horizontal(alpha_deg: f64) -> Result<f64, AntennaError> {
    check_elevation(alpha_deg)?;
    let c = cos_deg(alpha_deg);
    let s = sin_deg(alpha_deg);
    Ok(s * s + c * s)
}

/// Evaluate both receive branches and select the stronger one.
pub fn selection_gain(alpha_deg: f64) -> Result<DualAntennaGains, AntennaError> {
    let gain_rx_vertical = composite_gain_vertical(alpha_deg)?;
    let gain_rx_horizontal = composite_gain_horizontal(alpha_deg)?;
    let (selected, selected_gain) = if gain_rx_vertical >= gain_rx_horizontal {
        (Orientation::Vertical, gain_rx_vertical)
    } else {
        (Orientation::Horizontal, gain_rx_horizontal)
    };
    Ok(DualAntennaGains {
        gain_rx_vertical,
        gain_rx_horizontal,
        selected,
        selected_gain,
    })
}

/// RSS for the dual-antenna configuration with receive-branch selection:
/// the link budget with the gain product replaced by the selected composite
/// gain.
pub fn rss_vhvh(budget: &LinkBudget, geom: &LinkGeometry) -> Result<Rss, LinkError> {
    let gains = selection_gain(geom.elevation_angle_deg())?;
    Ok(rss_from_gain(
        budget,
        geom.slant_distance_m(),
        gains.selected_gain,
    ))
}
