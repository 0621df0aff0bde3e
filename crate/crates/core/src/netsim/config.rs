use std::f64::consts::PI;

use crate::error::{Error, Result};

/// How the interference term `I` of each user's SINR is formed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InterferenceModel {
    /// Every non-serving BS reaches the user through its own IRS, whose
    /// reflections are aligned for other users and so add up incoherently
    /// (`N` rather than `N^2`) on top of that BS's array gain `M`.
    Reflected,
    /// Every non-serving BS reaches the user over the unobstructed direct path.
    DirectPath,
    /// A constant interference power in watts; zero gives a noise-limited network.
    Fixed(f64),
}

/// Parameters of a network campaign.
///
/// The densities, array sizes and phase error default to the evaluated
/// scenario (25 BS/km^2, 2000 users/km^2, M = 8, N = 32, 11 degrees). Carrier,
/// powers, IRS offset, drop count and interference model are simulator
/// defaults with no counterpart in the scenario description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    pub area_km2: f64,
    pub bs_density: f64,
    pub user_density: f64,
    pub m_bs: usize,
    pub n_irs: usize,
    /// Maximum residual phase error, radians.
    pub delta: f64,
    pub carrier_ghz: f64,
    pub tx_power_dbm: f64,
    pub noise_dbm: f64,
    /// Distance between each BS and its IRS, meters.
    pub irs_offset_m: f64,
    pub interference: InterferenceModel,
    pub drops: usize,
    pub seed: u64,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            area_km2: 1.0,
            bs_density: 25.0,
            user_density: 2000.0,
            m_bs: 8,
            n_irs: 32,
            delta: 11f64.to_radians(),
            carrier_ghz: 3.5,
            tx_power_dbm: 30.0,
            noise_dbm: -94.0,
            irs_offset_m: 50.0,
            interference: InterferenceModel::Reflected,
            drops: 100,
            seed: 1,
        }
    }
}

pub(crate) fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.area_km2 > 0.0 && self.area_km2.is_finite()) {
            return bad(format!("area must be positive, got {}", self.area_km2));
        }
        for (name, d) in [("BS", self.bs_density), ("user", self.user_density)] {
            if !(d > 0.0 && d.is_finite()) {
                return bad(format!("{name} density must be positive, got {d}"));
            }
            if d * self.area_km2 < 1.0 {
                return bad(format!(
                    "expected {name} count {} is below one",
                    d * self.area_km2
                ));
            }
        }
        if self.m_bs == 0 || self.n_irs == 0 {
            return bad("antenna counts must be at least one".into());
        }
        if !(0.0..PI).contains(&self.delta) {
            return bad(format!("phase error bound {} not in [0, pi)", self.delta));
        }
        if !(self.carrier_ghz > 0.0 && self.carrier_ghz.is_finite()) {
            return bad(format!(
                "carrier must be positive, got {}",
                self.carrier_ghz
            ));
        }
        if !(self.tx_power_dbm.is_finite() && self.noise_dbm.is_finite()) {
            return bad("powers must be finite".into());
        }
        if !(self.irs_offset_m >= 1.0 && self.irs_offset_m.is_finite()) {
            return bad(format!(
                "IRS offset must be at least 1 m, got {}",
                self.irs_offset_m
            ));
        }
        if let InterferenceModel::Fixed(w) = self.interference {
            if !(w >= 0.0 && w.is_finite()) {
                return bad(format!("fixed interference must be non-negative, got {w}"));
            }
        }
        if self.drops == 0 {
            return bad("at least one drop is required".into());
        }
        Ok(())
    }

    pub fn tx_power_w(&self) -> f64 {
        dbm_to_watts(self.tx_power_dbm)
    }

    pub fn noise_w(&self) -> f64 {
        dbm_to_watts(self.noise_dbm)
    }

    /// Side of the square region in meters.
    pub fn side_m(&self) -> f64 {
        self.area_km2.sqrt() * 1000.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        NetworkConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        let base = NetworkConfig::default();
        let cases = [
            NetworkConfig {
                area_km2: 0.0,
                ..base
            },
            NetworkConfig {
                bs_density: -1.0,
                ..base
            },
            NetworkConfig {
                area_km2: 0.01,
                bs_density: 25.0,
                ..base
            },
            NetworkConfig { n_irs: 0, ..base },
            NetworkConfig { delta: PI, ..base },
            NetworkConfig { drops: 0, ..base },
            NetworkConfig {
                interference: InterferenceModel::Fixed(-1.0),
                ..base
            },
        ];
        for c in cases {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn power_conversions() {
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-15);
        assert!((dbm_to_watts(0.0) - 1e-3).abs() < 1e-18);
    }
}
