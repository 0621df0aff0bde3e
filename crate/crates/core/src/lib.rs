//! IRS-assisted downlink NOMA with imperfect phase compensation.
//!
//! The crate covers the scalar channel model of an IRS cascade with uniform
//! residual phase errors, the resulting OMA and two-user NOMA rates, the
//! power-allocation and phase-error bounds that decide whether a pair is
//! worth forming, adaptive user pairing with maximum-sum-rate (MPA) and
//! outage-balancing (FPA) allocation, and a Poisson network simulator that
//! measures rate distributions, sum rates and outage.
//!
//! ```
//! use irs_noma::{aup, AllocationPolicy, CsiSinr, PhaseNoiseModel, User, UserPopulation};
//!
//! let users = [8.0, 5.0, 2.0, -1.0]
//!     .iter()
//!     .enumerate()
//!     .map(|(i, &db)| User::new(i as u64, CsiSinr::from_db(db).unwrap()))
//!     .collect();
//! let population = UserPopulation::new(users).unwrap();
//! let noise = PhaseNoiseModel::from_degrees(11.0).unwrap();
//! let decisions = aup(&population, &noise, AllocationPolicy::Mpa).unwrap();
//! assert_eq!(decisions.len(), 2);
//! assert!(decisions.iter().all(|d| d.is_noma()));
//! ```

pub mod allocation;
pub mod bounds;
pub mod channel;
pub mod error;
pub mod netsim;
pub mod pairing;
pub mod rates;
mod rng;

pub use allocation::{
    fpa_split, mpa_split, outage_thresholds, validate_split, AllocationPolicy, CheckedSplit,
    OutageThresholds, SplitWarning,
};
pub use bounds::{
    alpha1_lower, alpha1_upper, alpha_bounds, delta_ub, feasibility, pair_feasible,
    sinc_sq_delta_ub, AlphaBounds, FeasibilityReport, FEASIBILITY_TOLERANCE,
};
pub use channel::{
    array_factor, coherent_power, csi_sinr, effective_gain_exact, normalized_coherence,
    sample_phase_errors, sinc, ArrayGeometry, CsiSinr, LinkBudget, PhaseNoiseModel, SteeringAngles,
};
pub use error::{Error, Result};
pub use pairing::{
    aup, near_far_baseline, sort_users, MemberRates, PairDecision, PairMode, User, UserId,
    UserPopulation,
};
pub use rates::{
    approx_sinrs, noma_rates, noma_rates_effective, oma_rate, oma_rate_effective, oma_sinr,
    sum_rate, MinRates, NomaRates, NomaSinrs, PowerSplit,
};
pub use rng::substream;
