//! Achievable rates for OMA and two-user NOMA under imperfect phase
//! compensation.
//!
//! Everything is expressed through the *effective* SINR a user sees, which is
//! its CSI SINR scaled by a coherence factor. The approximated rates use the
//! asymptotic factor `sinc^2(delta)`; the simulator substitutes the exact
//! coherence of a phase-error realization through the `*_effective` variants.
//! OMA users get half the band, NOMA users the full band.

use crate::channel::{CsiSinr, PhaseNoiseModel};
use crate::error::{Error, Result};

const SPLIT_SUM_TOLERANCE: f64 = 1e-12;

/// Power fractions for the strong (`alpha1`) and weak (`alpha2`) user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    alpha1: f64,
    alpha2: f64,
}

impl PowerSplit {
    /// Strong-user fraction in the open interval `(0, 1)`; the weak user gets the rest.
    pub fn new(alpha1: f64) -> Result<Self> {
        Self::from_parts(alpha1, 1.0 - alpha1)
    }

    pub fn from_parts(alpha1: f64, alpha2: f64) -> Result<Self> {
        let interior = |a: f64| a > 0.0 && a < 1.0;
        if !(interior(alpha1)
            && interior(alpha2)
            && (alpha1 + alpha2 - 1.0).abs() <= SPLIT_SUM_TOLERANCE)
        {
            return Err(Error::InvalidSplit { alpha1, alpha2 });
        }
        Ok(Self { alpha1, alpha2 })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }
}

/// Minimum rates demanded by the strong (`r1_min`) and weak (`r2_min`) user, in bit/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinRates {
    r1_min: f64,
    r2_min: f64,
}

impl MinRates {
    pub fn new(r1_min: f64, r2_min: f64) -> Result<Self> {
        for (what, r) in [
            ("strong minimum rate", r1_min),
            ("weak minimum rate", r2_min),
        ] {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(Error::Domain { what, value: r });
            }
        }
        Ok(Self { r1_min, r2_min })
    }

    /// Each user's own OMA rate under `noise`.
    pub fn oma(gamma1: CsiSinr, gamma2: CsiSinr, noise: &PhaseNoiseModel) -> Self {
        Self {
            r1_min: oma_rate(gamma1, noise),
            r2_min: oma_rate(gamma2, noise),
        }
    }

    pub fn r1_min(&self) -> f64 {
        self.r1_min
    }

    pub fn r2_min(&self) -> f64 {
        self.r2_min
    }

    pub fn total(&self) -> f64 {
        self.r1_min + self.r2_min
    }
}

/// Per-user NOMA rates of one pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NomaRates {
    pub strong: f64,
    pub weak: f64,
}

impl NomaRates {
    pub fn sum(&self) -> f64 {
        sum_rate(*self)
    }
}

/// SINRs entering the NOMA rate expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NomaSinrs {
    pub strong: f64,
    pub weak: f64,
}

/// Half-band OMA rate for an effective SINR.
pub fn oma_rate_effective(effective_sinr: f64) -> f64 {
    0.5 * effective_sinr.ln_1p() / std::f64::consts::LN_2
}

/// `0.5 log2(1 + gamma sinc^2(delta))`.
pub fn oma_rate(gamma: CsiSinr, noise: &PhaseNoiseModel) -> f64 {
    oma_rate_effective(gamma.value() * noise.sinc_sq())
}

/// Approximated OMA SINR, `gamma sinc^2(delta)`.
pub fn oma_sinr(gamma: CsiSinr, noise: &PhaseNoiseModel) -> f64 {
    gamma.value() * noise.sinc_sq()
}

/// NOMA SINRs from effective SINRs: the strong user cancels the weak user's
/// signal, the weak user treats the strong user's share as interference.
pub fn noma_sinrs_effective(strong: f64, weak: f64, split: PowerSplit) -> NomaSinrs {
    NomaSinrs {
        strong: split.alpha1 * strong,
        weak: split.alpha2 * weak / (split.alpha1 * weak + 1.0),
    }
}

pub fn noma_rates_effective(strong: f64, weak: f64, split: PowerSplit) -> NomaRates {
    let s = noma_sinrs_effective(strong, weak, split);
    NomaRates {
        strong: s.strong.ln_1p() / std::f64::consts::LN_2,
        weak: s.weak.ln_1p() / std::f64::consts::LN_2,
    }
}

fn check_order(gamma1: CsiSinr, gamma2: CsiSinr) -> Result<()> {
    if gamma1.value() < gamma2.value() {
        return Err(Error::InvalidOrdering {
            strong: gamma1.value(),
            weak: gamma2.value(),
        });
    }
    Ok(())
}

/// Approximated NOMA SINRs of an ordered pair (`gamma1 >= gamma2`).
pub fn approx_sinrs(
    gamma1: CsiSinr,
    gamma2: CsiSinr,
    split: PowerSplit,
    noise: &PhaseNoiseModel,
) -> Result<NomaSinrs> {
    check_order(gamma1, gamma2)?;
    let s = noise.sinc_sq();
    Ok(noma_sinrs_effective(
        gamma1.value() * s,
        gamma2.value() * s,
        split,
    ))
}

/// Approximated NOMA rates of an ordered pair (`gamma1 >= gamma2`).
pub fn noma_rates(
    gamma1: CsiSinr,
    gamma2: CsiSinr,
    split: PowerSplit,
    noise: &PhaseNoiseModel,
) -> Result<NomaRates> {
    check_order(gamma1, gamma2)?;
    let s = noise.sinc_sq();
    Ok(noma_rates_effective(
        gamma1.value() * s,
        gamma2.value() * s,
        split,
    ))
}

/// Achievable sum rate of a pair.
pub fn sum_rate(rates: NomaRates) -> f64 {
    rates.strong + rates.weak
}

#[cfg(test)]
mod tests {
    use super::*;

    fn db(x: f64) -> CsiSinr {
        CsiSinr::from_db(x).unwrap()
    }

    fn delta11() -> PhaseNoiseModel {
        PhaseNoiseModel::from_degrees(11.0).unwrap()
    }

    #[test]
    fn split_validation() {
        assert!(PowerSplit::new(0.0).is_err());
        assert!(PowerSplit::new(1.0).is_err());
        assert!(PowerSplit::new(f64::NAN).is_err());
        assert!(PowerSplit::from_parts(0.3, 0.6).is_err());
        let s = PowerSplit::new(0.3).unwrap();
        assert!((s.alpha2() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn min_rates_validation() {
        assert!(MinRates::new(-0.1, 0.0).is_err());
        assert!(MinRates::new(0.0, f64::INFINITY).is_err());
        assert!(MinRates::new(0.0, 0.0).is_ok());
    }

    #[test]
    fn oma_rate_values() {
        let ideal = PhaseNoiseModel::ideal();
        assert_eq!(oma_rate(CsiSinr::new(0.0).unwrap(), &delta11()), 0.0);
        // mpmath, gamma = 10^0.8
        assert!((oma_rate(db(8.0), &ideal) - 1.434_893_609_585_143).abs() < 1e-12);
        assert!((oma_rate(db(8.0), &delta11()) - 1.427_240_477_950_549).abs() < 1e-12);
    }

    #[test]
    fn noma_rates_at_bound_values() {
        let ideal = PhaseNoiseModel::ideal();
        let zero = CsiSinr::new(0.0).unwrap();
        let r = noma_rates(db(8.0), zero, PowerSplit::new(0.4).unwrap(), &ideal).unwrap();
        assert_eq!(r.weak, 0.0);

        // alpha1 at the upper bound pins the weak user to its OMA rate.
        let ub = PowerSplit::new(0.328_929_397_794_305).unwrap();
        let r = noma_rates(db(8.0), db(5.0), ub, &ideal).unwrap();
        assert!((r.weak - 1.028_686_604_303_397).abs() < 1e-12);
        // alpha1 at the lower bound pins the strong user to its OMA rate.
        let lb = PowerSplit::new(0.270_005_935_758_197).unwrap();
        let r = noma_rates(db(8.0), db(5.0), lb, &ideal).unwrap();
        assert!((r.strong - 1.434_893_609_585_143).abs() < 1e-12);
    }

    #[test]
    fn ordering_is_enforced() {
        let e = noma_rates(db(2.0), db(8.0), PowerSplit::new(0.3).unwrap(), &delta11());
        assert!(matches!(e, Err(Error::InvalidOrdering { .. })));
        assert!(approx_sinrs(db(2.0), db(8.0), PowerSplit::new(0.3).unwrap(), &delta11()).is_err());
    }

    #[test]
    fn sum_rate_values() {
        assert_eq!(
            sum_rate(NomaRates {
                strong: 0.0,
                weak: 0.0
            }),
            0.0
        );
        assert_eq!(
            sum_rate(NomaRates {
                strong: 1.5,
                weak: 1.0
            }),
            2.5
        );
        // Sum rate with alpha1 at the weak user's bound, 8/5 dB, delta = 0 (mpmath).
        let ub = PowerSplit::new(0.328_929_397_794_305).unwrap();
        let r = noma_rates(db(8.0), db(5.0), ub, &PhaseNoiseModel::ideal()).unwrap();
        assert!((r.sum() - 2.649_462_637_419_022).abs() < 1e-12);
    }

    #[test]
    fn approx_sinr_values() {
        let one = CsiSinr::new(1.0).unwrap();
        let s = approx_sinrs(
            one,
            one,
            PowerSplit::new(0.5).unwrap(),
            &PhaseNoiseModel::ideal(),
        )
        .unwrap();
        assert!((s.strong - 0.5).abs() < 1e-15);
        assert!((s.weak - 1.0 / 3.0).abs() < 1e-15);

        let gamma = CsiSinr::new(8192.0).unwrap();
        assert!((oma_sinr(gamma, &delta11()) - 8_091.844_493_296_055).abs() < 1e-8);
    }

    #[test]
    fn weak_sinr_identity_at_zero_delta() {
        let split = PowerSplit::new(0.27).unwrap();
        for g2 in [0.1, 1.0, 3.0, 40.0] {
            let s = approx_sinrs(
                CsiSinr::new(50.0).unwrap(),
                CsiSinr::new(g2).unwrap(),
                split,
                &PhaseNoiseModel::ideal(),
            )
            .unwrap();
            let lhs = (1.0 + s.weak) * (1.0 + split.alpha1() * g2);
            assert!((lhs - (1.0 + g2)).abs() < 1e-12 * (1.0 + g2));
        }
    }

    #[test]
    fn full_strong_share_doubles_oma_rate() {
        let noise = delta11();
        let g = db(12.0);
        let split = PowerSplit::new(1.0 - 1e-12).unwrap();
        let r = noma_rates(g, db(3.0), split, &noise).unwrap();
        assert!((r.strong - 2.0 * oma_rate(g, &noise)).abs() < 1e-9);
    }
}
