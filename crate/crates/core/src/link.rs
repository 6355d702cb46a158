//! Link geometry, the received-signal-strength budget, and critical-distance
//! search for a single antenna pair.
//!
//! The RSS model is P_RX = P_TX · G_TX(α) · G_RX(α) · (λ / 4πd)^γ with the
//! whole wavelength-over-distance factor raised to the path loss exponent.
//! For vertical antennas on both ends the RSS peaks at the critical distance
//! l = √(2Δh²/γ); other configurations are searched numerically.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::antenna::{AntennaConfig, AntennaError};
use crate::units::{dbm_to_milliwatts, milliwatts_to_dbm, sample_grid, SPEED_OF_LIGHT_M_S};

/// Errors from geometry or budget construction and RSS evaluation.
#[derive(Debug, Error)]
pub enum LinkError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{name} must be non-negative and finite, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("drone height {drone} m must exceed receiver height {receiver} m")]
    DroneNotAboveReceiver { drone: f64, receiver: f64 },
    #[error("the RSS derivative is singular at horizontal distance 0")]
    DerivativeAtPole,
    #[error("search range [{min}, {max}] m is not a non-degenerate interval")]
    BadSearchRange { min: f64, max: f64 },
    #[error("RSS has no finite maximum over the search range")]
    NoMaximum,
    #[error(transparent)]
    Antenna(#[from] AntennaError),
}

/// Relative geometry of an air-to-ground link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    drone_height_m: f64,
    receiver_height_m: f64,
    horizontal_distance_m: f64,
}

impl LinkGeometry {
    /// Drone at `drone_height_m`, ground unit at `receiver_height_m`,
    /// separated horizontally by `horizontal_distance_m`.
    pub fn new(
        drone_height_m: f64,
        receiver_height_m: f64,
        horizontal_distance_m: f64,
    ) -> Result<Self, LinkError> {
        if !(drone_height_m.is_finite() && drone_height_m > 0.0) {
            return Err(LinkError::NonPositive {
                name: "drone height",
                value: drone_height_m,
            });
        }
        if !(receiver_height_m.is_finite() && receiver_height_m >= 0.0) {
            return Err(LinkError::Negative {
                name: "receiver height",
                value: receiver_height_m,
            });
        }
        if drone_height_m <= receiver_height_m {
            return Err(LinkError::DroneNotAboveReceiver {
                drone: drone_height_m,
                receiver: receiver_height_m,
            });
        }
        if !(horizontal_distance_m.is_finite() && horizontal_distance_m >= 0.0) {
            return Err(LinkError::Negative {
                name: "horizontal distance",
                value: horizontal_distance_m,
            });
        }
        Ok(Self {
            drone_height_m,
            receiver_height_m,
            horizontal_distance_m,
        })
    }

    pub fn drone_height_m(&self) -> f64 {
        self.drone_height_m
    }

    pub fn receiver_height_m(&self) -> f64 {
        self.receiver_height_m
    }

    pub fn horizontal_distance_m(&self) -> f64 {
        self.horizontal_distance_m
    }

    /// Height of the drone above the ground unit, Δh > 0.
    pub fn height_difference_m(&self) -> f64 {
        self.drone_height_m - self.receiver_height_m
    }

    /// Elevation angle from the ground unit to the drone, degrees in (0, 90].
    ///
    /// Exactly 90° when the drone is overhead.
    pub fn elevation_angle_deg(&self) -> f64 {
        if self.horizontal_distance_m == 0.0 {
            90.0
        } else {
            self.height_difference_m()
                .atan2(self.horizontal_distance_m)
                .to_degrees()
        }
    }

    /// Straight-line transmitter-receiver separation, d = √(Δh² + l²).
    pub fn slant_distance_m(&self) -> f64 {
        self.height_difference_m().hypot(self.horizontal_distance_m)
    }
}

/// Transmit power and propagation constants of the RSS budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    tx_power_dbm: f64,
    carrier_frequency_hz: f64,
    path_loss_exponent: f64,
}

impl LinkBudget {
    /// Analysis center of the UWB band used throughout.
    pub const DEFAULT_FREQUENCY_HZ: f64 = 4.0e9;
    /// Free-space path loss exponent.
    pub const DEFAULT_PATH_LOSS_EXPONENT: f64 = 2.0;

    pub fn new(
        tx_power_dbm: f64,
        carrier_frequency_hz: f64,
        path_loss_exponent: f64,
    ) -> Result<Self, LinkError> {
        if !tx_power_dbm.is_finite() {
            return Err(LinkError::Negative {
                name: "transmit power (dBm)",
                value: tx_power_dbm,
            });
        }
        if !(carrier_frequency_hz.is_finite() && carrier_frequency_hz > 0.0) {
            return Err(LinkError::NonPositive {
                name: "carrier frequency",
                value: carrier_frequency_hz,
            });
        }
        if !(path_loss_exponent.is_finite() && path_loss_exponent > 0.0) {
            return Err(LinkError::NonPositive {
                name: "path loss exponent",
                value: path_loss_exponent,
            });
        }
        Ok(Self {
            tx_power_dbm,
            carrier_frequency_hz,
            path_loss_exponent,
        })
    }

    pub fn tx_power_dbm(&self) -> f64 {
        self.tx_power_dbm
    }

    pub fn carrier_frequency_hz(&self) -> f64 {
        self.carrier_frequency_hz
    }

    pub fn path_loss_exponent(&self) -> f64 {
        self.path_loss_exponent
    }

    /// Carrier wavelength λ = c/f.
    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT_M_S / self.carrier_frequency_hz
    }

    /// Received power in milliwatts with unit antenna gains at slant
    /// distance `d`: P_TX · (λ / 4πd)^γ.
    pub fn isotropic_rss_mw(&self, slant_distance_m: f64) -> f64 {
        debug_assert!(slant_distance_m > 0.0);
        dbm_to_milliwatts(self.tx_power_dbm)
            * (self.wavelength_m() / (4.0 * PI * slant_distance_m)).powf(self.path_loss_exponent)
    }

    /// dBm form of [`Self::isotropic_rss_mw`].
    pub fn isotropic_rss_dbm(&self, slant_distance_m: f64) -> f64 {
        milliwatts_to_dbm(self.isotropic_rss_mw(slant_distance_m))
    }
}

impl Default for LinkBudget {
    /// 0 dBm transmit power at 4 GHz with free-space path loss.
    fn default() -> Self {
        Self {
            tx_power_dbm: 0.0,
            carrier_frequency_hz: Self::DEFAULT_FREQUENCY_HZ,
            path_loss_exponent: Self::DEFAULT_PATH_LOSS_EXPONENT,
        }
    }
}

/// A received-signal-strength value with an explicit marker for zero-gain or
/// below-sensitivity points, so serialized traces never carry non-finite
/// floats other than the `-inf` literal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rss {
    /// Finite level in dBm (dB once a trace has been peak-normalized).
    Dbm(f64),
    /// Nothing receivable at this point.
    BelowFloor,
}

impl Rss {
    pub fn dbm(self) -> Option<f64> {
        match self {
            Rss::Dbm(v) => Some(v),
            Rss::BelowFloor => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Rss::Dbm(_))
    }

    /// Linear power in milliwatts; a below-floor point is 0 mW.
    pub fn linear_mw(self) -> f64 {
        match self {
            Rss::Dbm(v) => dbm_to_milliwatts(v),
            Rss::BelowFloor => 0.0,
        }
    }
}

impl fmt::Display for Rss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rss::Dbm(v) => write!(f, "{v}"),
            Rss::BelowFloor => f.write_str("-inf"),
        }
    }
}

/// One point of an RSS trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RssSample {
    pub horizontal_distance_m: f64,
    pub rss: Rss,
}

/// Received signal strength for the given geometry and antenna pair.
///
/// Returns [`Rss::BelowFloor`] when the gain product is exactly zero.
pub fn rss(
    budget: &LinkBudget,
    geom: &LinkGeometry,
    tx: &AntennaConfig,
    rx: &AntennaConfig,
) -> Result<Rss, LinkError> {
    let alpha = geom.elevation_angle_deg();
    let gain = tx.gain(alpha)? * rx.gain(alpha)?;
    Ok(rss_from_gain(budget, geom.slant_distance_m(), gain))
}

/// Linear-domain RSS in milliwatts.
pub fn rss_milliwatts(
    budget: &LinkBudget,
    geom: &LinkGeometry,
    tx: &AntennaConfig,
    rx: &AntennaConfig,
) -> Result<f64, LinkError> {
    Ok(rss(budget, geom, tx, rx)?.linear_mw())
}

pub(crate) fn rss_from_gain(budget: &LinkBudget, slant_distance_m: f64, gain_product: f64) -> Rss {
    if gain_product == 0.0 {
        Rss::BelowFloor
    } else {
        Rss::Dbm(milliwatts_to_dbm(
            gain_product * budget.isotropic_rss_mw(slant_distance_m),
        ))
    }
}

/// Sign of ∂P_RX/∂l for the vertical-vertical analytic configuration.
///
/// The derivative numerator is 2Δh² − γl²: RSS rises with horizontal
/// distance while it is positive and falls once it is negative, crossing
/// zero exactly at the critical distance. Singular at l = 0.
pub fn rss_derivative_sign(budget: &LinkBudget, geom: &LinkGeometry) -> Result<i8, LinkError> {
    let l = geom.horizontal_distance_m();
    if l == 0.0 {
        return Err(LinkError::DerivativeAtPole);
    }
    let dh = geom.height_difference_m();
    let numerator = 2.0 * dh * dh - budget.path_loss_exponent() * l * l;
    Ok(if numerator > 0.0 {
        1
    } else if numerator < 0.0 {
        -1
    } else {
        0
    })
}

/// Closed-form RSS-maximizing horizontal distance for the vertical-vertical
/// analytic configuration: l = √(2Δh²/γ).
pub fn critical_distance_analytic(delta_h_m: f64, gamma: f64) -> Result<f64, LinkError> {
    if !(delta_h_m.is_finite() && delta_h_m > 0.0) {
        return Err(LinkError::NonPositive {
            name: "height difference",
            value: delta_h_m,
        });
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(LinkError::NonPositive {
            name: "path loss exponent",
            value: gamma,
        });
    }
    Ok((2.0 * delta_h_m * delta_h_m / gamma).sqrt())
}

/// Numerically locate the horizontal distance maximizing RSS for an
/// arbitrary antenna pair.
///
/// Scans `[l_min, l_max]` at `resolution_m` spacing, then refines an
/// interior grid maximum with golden-section search (1e-6 m tolerance) over
/// the bracketing interval. A maximum on the range boundary is returned
/// as-is, which is what a monotone RSS produces. Errors when the RSS is
/// zero across the whole range.
pub fn critical_distance_numeric(
    budget: &LinkBudget,
    delta_h_m: f64,
    tx: &AntennaConfig,
    rx: &AntennaConfig,
    search_range: (f64, f64),
    resolution_m: f64,
) -> Result<f64, LinkError> {
    let (l_min, l_max) = search_range;
    if !(delta_h_m.is_finite() && delta_h_m > 0.0) {
        return Err(LinkError::NonPositive {
            name: "height difference",
            value: delta_h_m,
        });
    }
    if !(resolution_m.is_finite() && resolution_m > 0.0) {
        return Err(LinkError::NonPositive {
            name: "resolution",
            value: resolution_m,
        });
    }
    if !(l_min.is_finite() && l_max.is_finite() && l_min >= 0.0 && l_min < l_max) {
        return Err(LinkError::BadSearchRange {
            min: l_min,
            max: l_max,
        });
    }

    let eval = |l: f64| -> Result<f64, LinkError> {
        let geom = LinkGeometry::new(delta_h_m, 0.0, l)?;
        let alpha = geom.elevation_angle_deg();
        let gain = tx.gain(alpha)? * rx.gain(alpha)?;
        Ok(gain * budget.isotropic_rss_mw(geom.slant_distance_m()))
    };

    let grid = sample_grid(l_min, l_max, resolution_m);
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for (i, &l) in grid.iter().enumerate() {
        let v = eval(l)?;
        if v > best {
            best = v;
            best_i = i;
        }
    }
    if best <= 0.0 {
        return Err(LinkError::NoMaximum);
    }
    if best_i == 0 || best_i == grid.len() - 1 {
        return Ok(grid[best_i]);
    }
    // The elevation angle is monotone in l, so every point between two valid
    // grid neighbours is valid too and the fallback never fires.
    let refined = golden_section_max(
        |l| eval(l).unwrap_or(0.0),
        grid[best_i - 1],
        grid[best_i + 1],
        1e-6,
    );
    Ok(refined)
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}
