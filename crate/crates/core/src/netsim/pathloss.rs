//! Urban macro line-of-sight path loss below the breakpoint distance:
//! `PL = 28.0 + 22 log10(d) + 20 log10(f_GHz)` dB.

use crate::error::{domain, Result};

/// Shortest distance the model accepts, meters.
pub const MIN_DISTANCE_M: f64 = 1.0;

pub fn path_loss_db(distance_m: f64, carrier_ghz: f64) -> Result<f64> {
    if !(distance_m >= MIN_DISTANCE_M && distance_m.is_finite()) {
        return Err(domain("path-loss distance", distance_m));
    }
    if !(carrier_ghz > 0.0 && carrier_ghz.is_finite()) {
        return Err(domain("carrier frequency", carrier_ghz));
    }
    Ok(28.0 + 22.0 * distance_m.log10() + 20.0 * carrier_ghz.log10())
}

/// Path loss as an amplitude gain, `10^(-PL/20)`.
pub fn path_loss(distance_m: f64, carrier_ghz: f64) -> Result<f64> {
    Ok(10f64.powf(-path_loss_db(distance_m, carrier_ghz)? / 20.0))
}

/// Amplitude gain with the distance floored at [`MIN_DISTANCE_M`].
pub(crate) fn path_loss_clamped(distance_m: f64, carrier_ghz: f64) -> f64 {
    path_loss(distance_m.max(MIN_DISTANCE_M), carrier_ghz)
        .expect("distance clamped and carrier validated")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_point() {
        let db = path_loss_db(100.0, 3.5).unwrap();
        let expected = 28.0 + 44.0 + 20.0 * 3.5f64.log10();
        assert!((db - expected).abs() < 1e-12);
        assert!((db - 82.881_360_887_005_5).abs() < 1e-9);
        let amp = path_loss(100.0, 3.5).unwrap();
        assert!((amp / 10f64.powf(-expected / 20.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_slopes() {
        let a = path_loss_db(37.0, 3.5).unwrap();
        assert!((path_loss_db(370.0, 3.5).unwrap() - a - 22.0).abs() < 1e-12);
        assert!((path_loss_db(37.0, 35.0).unwrap() - a - 20.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_in_distance() {
        let mut prev = f64::INFINITY;
        for d in [1.0, 2.0, 10.0, 55.5, 300.0, 2000.0] {
            let g = path_loss(d, 3.5).unwrap();
            assert!(g < prev);
            prev = g;
        }
    }

    #[test]
    fn domain() {
        assert!(path_loss(0.5, 3.5).is_err());
        assert!(path_loss(10.0, 0.0).is_err());
        assert_eq!(path_loss_clamped(0.2, 3.5), path_loss(1.0, 3.5).unwrap());
    }
}
