//! Feasibility machinery for a NOMA pair.
//!
//! The strong user meets its minimum rate iff `alpha1 >= lower`, the weak
//! user iff `alpha1 <= upper`. Both can be met iff `lower <= upper`, which is
//! equivalent to `sinc^2(delta) >= sinc_sq_ub`. Bounds are returned raw and
//! may leave `(0, 1)`; interpreting that is the allocation layer's job.

use std::f64::consts::PI;

use crate::channel::{sinc_unchecked, CsiSinr, PhaseNoiseModel};
use crate::error::{domain, Error, Result};
use crate::rates::MinRates;

const BISECTION_MAX_ITER: usize = 200;
const BISECTION_TOLERANCE: f64 = 1e-12;

/// Slack on both feasibility comparisons. Equal-SINR pairs sit exactly on the
/// boundary, where rounding alone would otherwise decide the outcome.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-12;

/// Interval of strong-user power fractions satisfying both minimum rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaBounds {
    pub lower: f64,
    pub upper: f64,
}

impl AlphaBounds {
    pub fn is_feasible(&self) -> bool {
        self.lower <= self.upper + FEASIBILITY_TOLERANCE
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    /// The smallest coherence penalty at which both minimum rates remain reachable.
    pub sinc_sq_ub: f64,
    /// The largest tolerable phase error, absent when `sinc_sq_ub > 1`.
    pub delta_ub: Option<f64>,
    pub feasible_at_delta: bool,
}

/// `(2^R1 - 1) / (gamma1 sinc^2(delta))`; zero when `r1_min` is zero.
pub fn alpha1_lower(gamma1: CsiSinr, noise: &PhaseNoiseModel, r1_min: f64) -> f64 {
    let need = r1_min.exp2() - 1.0;
    if need == 0.0 {
        return 0.0;
    }
    need / (gamma1.value() * noise.sinc_sq())
}

/// `(gamma2 s - (2^R2 - 1)) / (2^R2 gamma2 s)` with `s = sinc^2(delta)`.
pub fn alpha1_upper(gamma2: CsiSinr, noise: &PhaseNoiseModel, r2_min: f64) -> f64 {
    let two_r = r2_min.exp2();
    let g = gamma2.value() * noise.sinc_sq();
    (g - (two_r - 1.0)) / (two_r * g)
}

pub fn alpha_bounds(
    gamma1: CsiSinr,
    gamma2: CsiSinr,
    noise: &PhaseNoiseModel,
    mins: MinRates,
) -> AlphaBounds {
    AlphaBounds {
        lower: alpha1_lower(gamma1, noise, mins.r1_min()),
        upper: alpha1_upper(gamma2, noise, mins.r2_min()),
    }
}

/// `(2^R1 - 1) 2^R2 / gamma1 + (2^R2 - 1) / gamma2`.
pub fn sinc_sq_delta_ub(gamma1: CsiSinr, gamma2: CsiSinr, mins: MinRates) -> Result<f64> {
    if gamma1.value() < gamma2.value() {
        return Err(Error::InvalidOrdering {
            strong: gamma1.value(),
            weak: gamma2.value(),
        });
    }
    if gamma2.value() <= 0.0 {
        return Err(domain("weak CSI SINR", gamma2.value()));
    }
    let two_r2 = mins.r2_min().exp2();
    Ok((mins.r1_min().exp2() - 1.0) * two_r2 / gamma1.value() + (two_r2 - 1.0) / gamma2.value())
}

/// Inverts `sinc^2` on `[0, pi)` by bisection.
///
/// Returns `None` for targets above one, which no phase error can reach.
pub fn delta_ub(sinc_sq_target: f64) -> Result<Option<f64>> {
    if sinc_sq_target.is_nan() || sinc_sq_target <= 0.0 {
        return Err(domain("sinc^2 target", sinc_sq_target));
    }
    if sinc_sq_target > 1.0 {
        return Ok(None);
    }
    if sinc_sq_target == 1.0 {
        return Ok(Some(0.0));
    }
    let f = |x: f64| {
        let s = sinc_unchecked(x);
        s * s - sinc_sq_target
    };
    // f(0) > 0 and f decreases strictly towards -target at pi.
    let (mut lo, mut hi) = (0.0_f64, PI);
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= BISECTION_TOLERANCE || mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Ties count as feasible.
pub fn pair_feasible(noise: &PhaseNoiseModel, sinc_sq_ub: f64) -> bool {
    noise.sinc_sq() >= sinc_sq_ub - FEASIBILITY_TOLERANCE
}

pub fn feasibility(
    gamma1: CsiSinr,
    gamma2: CsiSinr,
    mins: MinRates,
    noise: &PhaseNoiseModel,
) -> Result<FeasibilityReport> {
    let sinc_sq_ub = sinc_sq_delta_ub(gamma1, gamma2, mins)?;
    let delta_ub = if sinc_sq_ub > 0.0 {
        delta_ub(sinc_sq_ub)?
    } else {
        // Zero minimum rates leave every phase error admissible.
        Some(PI)
    };
    Ok(FeasibilityReport {
        sinc_sq_ub,
        delta_ub,
        feasible_at_delta: pair_feasible(noise, sinc_sq_ub),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::oma_rate;

    fn db(x: f64) -> CsiSinr {
        CsiSinr::from_db(x).unwrap()
    }

    // Reference values below come from 30-digit mpmath evaluation.
    const LB_8DB: f64 = 0.270_005_935_758_196_9;
    const UB_5DB: f64 = 0.328_929_397_794_305;
    const SINC_SQ_UB_8_5: f64 = 0.879_786_351_059_619_1;
    const DELTA_UB_8_5: f64 = 0.615_884_482_577_876_4;

    #[test]
    fn lower_bound_values() {
        let ideal = PhaseNoiseModel::ideal();
        assert_eq!(alpha1_lower(db(8.0), &ideal, 0.0), 0.0);
        let r1 = oma_rate(db(8.0), &ideal);
        assert!((alpha1_lower(db(8.0), &ideal, r1) - LB_8DB).abs() < 1e-12);
        // Closed form when R1 is the delta = 0 OMA rate.
        let g = db(8.0).value();
        assert!((((1.0 + g).sqrt() - 1.0) / g - LB_8DB).abs() < 1e-12);
    }

    #[test]
    fn lower_bound_inverse_in_sinc_sq() {
        let a = PhaseNoiseModel::ideal();
        // sinc^2 = 1/2 at this delta
        let half = PhaseNoiseModel::new(delta_ub(0.5).unwrap().unwrap()).unwrap();
        assert!((half.sinc_sq() - 0.5).abs() < 1e-10);
        let ratio = alpha1_lower(db(8.0), &half, 1.2) / alpha1_lower(db(8.0), &a, 1.2);
        assert!((ratio * half.sinc_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn upper_bound_values() {
        let ideal = PhaseNoiseModel::ideal();
        assert!((alpha1_upper(db(5.0), &ideal, 0.0) - 1.0).abs() < 1e-15);
        let r2 = oma_rate(db(5.0), &ideal);
        assert!((alpha1_upper(db(5.0), &ideal, r2) - UB_5DB).abs() < 1e-12);
        // Numerator vanishes when the weak user's full-power SINR just meets its target.
        let g = db(5.0).value();
        let r_exact = (1.0 + g).log2();
        assert!(alpha1_upper(db(5.0), &ideal, r_exact).abs() < 1e-15);
    }

    #[test]
    fn sinc_sq_ub_values() {
        let ideal = PhaseNoiseModel::ideal();
        let zero = MinRates::new(0.0, 0.0).unwrap();
        assert_eq!(sinc_sq_delta_ub(db(8.0), db(5.0), zero).unwrap(), 0.0);
        let mins = MinRates::oma(db(8.0), db(5.0), &ideal);
        let v = sinc_sq_delta_ub(db(8.0), db(5.0), mins).unwrap();
        assert!((v - SINC_SQ_UB_8_5).abs() < 1e-12);
    }

    #[test]
    fn equal_sinrs_sit_on_the_boundary() {
        for delta_deg in [0.0, 11.0, 40.0] {
            let noise = PhaseNoiseModel::from_degrees(delta_deg).unwrap();
            for g in [0.5, 1.0, 10.0] {
                let g = CsiSinr::new(g).unwrap();
                let mins = MinRates::oma(g, g, &noise);
                let v = sinc_sq_delta_ub(g, g, mins).unwrap();
                assert!((v - noise.sinc_sq()).abs() < 1e-14, "{v}");
            }
        }
    }

    #[test]
    fn sinc_sq_ub_rejects_bad_pairs() {
        let mins = MinRates::new(1.0, 1.0).unwrap();
        assert!(sinc_sq_delta_ub(db(2.0), db(5.0), mins).is_err());
        let zero = CsiSinr::new(0.0).unwrap();
        assert!(sinc_sq_delta_ub(zero, zero, mins).is_err());
    }

    #[test]
    fn delta_ub_values() {
        assert_eq!(delta_ub(1.0).unwrap(), Some(0.0));
        assert_eq!(delta_ub(1.2).unwrap(), None);
        let d = delta_ub(SINC_SQ_UB_8_5).unwrap().unwrap();
        assert!((d - DELTA_UB_8_5).abs() < 1e-10);
        assert!(delta_ub(0.0).is_err());
        assert!(delta_ub(-0.5).is_err());
        assert!(delta_ub(f64::NAN).is_err());
    }

    #[test]
    fn feasibility_predicate() {
        assert!(pair_feasible(&PhaseNoiseModel::ideal(), 1.0));
        let d11 = PhaseNoiseModel::from_degrees(11.0).unwrap();
        assert!(pair_feasible(&d11, SINC_SQ_UB_8_5));
        assert!(!pair_feasible(&d11, 0.99));
    }

    #[test]
    fn report_for_worked_pair() {
        let ideal = PhaseNoiseModel::ideal();
        let mins = MinRates::oma(db(8.0), db(5.0), &ideal);
        let r = feasibility(db(8.0), db(5.0), mins, &ideal).unwrap();
        assert!(r.feasible_at_delta);
        assert!((r.delta_ub.unwrap() - DELTA_UB_8_5).abs() < 1e-10);

        let b = alpha_bounds(db(8.0), db(5.0), &ideal, mins);
        assert!(b.is_feasible());
        assert!((b.width() - (UB_5DB - LB_8DB)).abs() < 1e-12);
    }

    #[test]
    fn zero_minimum_rates_admit_any_delta() {
        let mins = MinRates::new(0.0, 0.0).unwrap();
        let r = feasibility(db(8.0), db(5.0), mins, &PhaseNoiseModel::ideal()).unwrap();
        assert_eq!(r.sinc_sq_ub, 0.0);
        assert!(r.feasible_at_delta);
    }
}
