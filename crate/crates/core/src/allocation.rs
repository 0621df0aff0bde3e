//! Power allocation for a feasible NOMA pair.
//!
//! MPA puts `alpha1` on the weak user's bound, which maximizes the sum rate
//! because the sum rate never decreases in `alpha1` for an ordered pair. FPA
//! uses the closed-form split aimed at balancing the SINR thresholds below
//! which either user is in outage.

use std::fmt;
use std::str::FromStr;

use crate::bounds::{alpha1_upper, AlphaBounds};
use crate::channel::{CsiSinr, PhaseNoiseModel};
use crate::error::{Error, Result};
use crate::rates::{MinRates, PowerSplit};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AllocationPolicy {
    /// Maximum sum rate.
    Mpa,
    /// Equal outage thresholds.
    Fpa,
    /// A caller-chosen strong-user fraction, used for sweeps.
    Fixed(f64),
}

impl AllocationPolicy {
    pub fn fixed(alpha1: f64) -> Result<Self> {
        PowerSplit::new(alpha1)?;
        Ok(Self::Fixed(alpha1))
    }

    /// The split this policy proposes before it is checked against the bounds.
    pub fn propose(
        &self,
        gamma2: CsiSinr,
        noise: &PhaseNoiseModel,
        mins: MinRates,
    ) -> Result<PowerSplit> {
        match *self {
            Self::Mpa => mpa_split(gamma2, noise, mins.r2_min()),
            Self::Fpa => fpa_split(mins),
            Self::Fixed(a) => PowerSplit::new(a),
        }
    }
}

impl fmt::Display for AllocationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mpa => f.write_str("mpa"),
            Self::Fpa => f.write_str("fpa"),
            Self::Fixed(a) => write!(f, "fixed:{a}"),
        }
    }
}

impl FromStr for AllocationPolicy {
    type Err = Error;

    /// Accepts `mpa`, `fpa` or `fixed:<alpha1>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mpa" => Ok(Self::Mpa),
            "fpa" => Ok(Self::Fpa),
            other => match other.strip_prefix("fixed:") {
                Some(v) => {
                    let a: f64 = v
                        .parse()
                        .map_err(|_| Error::Config(format!("bad fixed alpha1 '{v}'")))?;
                    Self::fixed(a)
                }
                None => Err(Error::Config(format!("unknown allocation policy '{s}'"))),
            },
        }
    }
}

/// SINR thresholds below which the strong and weak user fall into outage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageThresholds {
    pub strong: f64,
    pub weak: f64,
}

/// Sum-rate maximizing split: `alpha1` on the weak user's upper bound.
pub fn mpa_split(gamma2: CsiSinr, noise: &PhaseNoiseModel, r2_min: f64) -> Result<PowerSplit> {
    let alpha1 = alpha1_upper(gamma2, noise, r2_min);
    if !(alpha1 > 0.0 && alpha1 < 1.0) {
        return Err(Error::Infeasible { alpha1 });
    }
    PowerSplit::new(alpha1)
}

/// Outage-balancing split:
/// `alpha1 = (2^R1 - 1) / ((2^R2 - 1) + 2^R1 (2^R1 - 1))`.
///
/// It depends only on the minimum rates.
pub fn fpa_split(mins: MinRates) -> Result<PowerSplit> {
    if mins.r1_min() == 0.0 && mins.r2_min() == 0.0 {
        return Err(Error::Degenerate("both minimum rates are zero"));
    }
    let x1 = mins.r1_min().exp2() - 1.0;
    let x2 = mins.r2_min().exp2() - 1.0;
    PowerSplit::new(x1 / (x2 + (x1 + 1.0) * x1))
}

pub fn outage_thresholds(
    split: PowerSplit,
    mins: MinRates,
    noise: &PhaseNoiseModel,
) -> Result<OutageThresholds> {
    let x1 = mins.r1_min().exp2() - 1.0;
    let x2 = mins.r2_min().exp2() - 1.0;
    let weak_share = split.alpha2() - split.alpha1() * x2;
    if weak_share.is_nan() || weak_share <= 0.0 {
        return Err(Error::WeakThreshold(weak_share));
    }
    let s = noise.sinc_sq();
    Ok(OutageThresholds {
        strong: x1 / (split.alpha1() * s),
        weak: x2 / (weak_share * s),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitWarning {
    /// `alpha1` was below the strong user's bound and was raised to it.
    RaisedToLower { requested: f64 },
    /// `alpha1` was above the weak user's bound and was lowered to it.
    LoweredToUpper { requested: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckedSplit {
    pub split: PowerSplit,
    pub warning: Option<SplitWarning>,
}

/// Clamps `alpha1` into `[lower, upper]`, recording whether it had to move.
pub fn validate_split(split: PowerSplit, bounds: AlphaBounds) -> Result<CheckedSplit> {
    let a = split.alpha1();
    let (alpha1, warning) = if a < bounds.lower {
        (
            bounds.lower,
            Some(SplitWarning::RaisedToLower { requested: a }),
        )
    } else if a > bounds.upper {
        (
            bounds.upper,
            Some(SplitWarning::LoweredToUpper { requested: a }),
        )
    } else {
        return Ok(CheckedSplit {
            split,
            warning: None,
        });
    };
    Ok(CheckedSplit {
        split: PowerSplit::new(alpha1)?,
        warning,
    })
}
