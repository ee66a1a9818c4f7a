//! Conversions between decibels, squeezing parameters and variances.

use std::f64::consts::LN_10;

use crate::error::{Error, Result};
use crate::state::VACUUM_VARIANCE;

/// Noise power of `variance` relative to shot noise, `10 log10(B / B0)`.
pub fn noise_power_db(variance: f64) -> Result<f64> {
    if !variance.is_finite() || variance <= 0.0 {
        return Err(Error::NonPositiveVariance(variance));
    }
    Ok(10.0 * (variance / VACUUM_VARIANCE).log10())
}

/// Inverse of [`noise_power_db`].
pub fn variance_from_db(db: f64) -> f64 {
    VACUUM_VARIANCE * 10f64.powf(db / 10.0)
}

/// Classical variance to add on top of vacuum noise so that the quadrature
/// sits `db` above shot noise. Zero for `db <= 0`.
pub fn modulation_variance(db: f64) -> f64 {
    (variance_from_db(db) - VACUUM_VARIANCE).max(0.0)
}

/// Squeezing parameter of a resource whose squeezed variance is `db`
/// relative to shot noise: `e^{-2r} = 10^{db/10}`.
pub fn r_from_squeezing_db(db: f64) -> f64 {
    -db * LN_10 / 20.0
}

/// Inverse of [`r_from_squeezing_db`].
pub fn squeezing_db_from_r(r: f64) -> f64 {
    -20.0 * r / LN_10
}
