//! Adaptive user pairing (AUP) and the Near-Far baseline.
//!
//! Users are sorted by CSI SINR and the i-th strongest is grouped with the
//! i-th weakest. Each user's minimum rate is its own OMA rate at the
//! operating phase error. AUP admits a group as a NOMA pair only when the
//! phase error passes the feasibility test; Near-Far pairs every group and
//! gives the strong user exactly its lower bound.

use std::fmt;

use crate::allocation::{validate_split, AllocationPolicy, SplitWarning};
use crate::bounds::{alpha1_lower, alpha_bounds, pair_feasible, sinc_sq_delta_ub};
use crate::channel::{CsiSinr, PhaseNoiseModel};
use crate::error::{Error, Result};
use crate::rates::{noma_rates_effective, oma_rate, oma_rate_effective, MinRates, PowerSplit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UserId(pub u64);

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct User {
    pub id: UserId,
    pub gamma: CsiSinr,
}

impl User {
    pub fn new(id: u64, gamma: CsiSinr) -> Self {
        Self {
            id: UserId(id),
            gamma,
        }
    }
}

/// Users served by one BS, with unique ids.
#[derive(Debug, Clone, PartialEq)]
pub struct UserPopulation {
    users: Vec<User>,
}

impl UserPopulation {
    pub fn new(users: Vec<User>) -> Result<Self> {
        let mut ids: Vec<u64> = users.iter().map(|u| u.id.0).collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateUser(w[0]));
        }
        Ok(Self { users })
    }

    pub fn users(&self) -> &[User] {
        &self.users
    }

    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }
}

/// Descending CSI SINR, ties by ascending id.
pub fn sort_users(mut population: UserPopulation) -> UserPopulation {
    population.users.sort_by(|a, b| {
        b.gamma
            .value()
            .total_cmp(&a.gamma.value())
            .then(a.id.cmp(&b.id))
    });
    population
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMode {
    Noma,
    Oma,
}

impl fmt::Display for PairMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Noma => "NOMA",
            Self::Oma => "OMA",
        })
    }
}

/// One pairing outcome.
///
/// A NOMA decision carries both users and a split. An OMA decision carries a
/// single user in the `strong` slot, with its own OMA rate as `r1_min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDecision {
    pub strong: User,
    pub weak: Option<User>,
    pub mode: PairMode,
    pub split: Option<PowerSplit>,
    pub warning: Option<SplitWarning>,
    pub mins: MinRates,
    /// Feasibility threshold of the group; absent for singletons.
    pub sinc_sq_ub: Option<f64>,
}

/// Rates delivered to the members of a decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemberRates {
    pub strong: f64,
    pub weak: Option<f64>,
}

impl PairDecision {
    fn oma(user: User, noise: &PhaseNoiseModel, sinc_sq_ub: Option<f64>) -> Self {
        Self {
            strong: user,
            weak: None,
            mode: PairMode::Oma,
            split: None,
            warning: None,
            mins: MinRates::new(oma_rate(user.gamma, noise), 0.0)
                .expect("OMA rate is finite and non-negative"),
            sinc_sq_ub,
        }
    }

    pub fn is_noma(&self) -> bool {
        self.mode == PairMode::Noma
    }

    pub fn user_ids(&self) -> impl Iterator<Item = UserId> {
        std::iter::once(self.strong.id).chain(self.weak.map(|u| u.id))
    }

    /// Rates given each member's effective SINR (CSI SINR times coherence).
    pub fn rates_effective(&self, strong_sinr: f64, weak_sinr: f64) -> MemberRates {
        match (self.mode, self.split) {
            (PairMode::Noma, Some(split)) => {
                let r = noma_rates_effective(strong_sinr, weak_sinr, split);
                MemberRates {
                    strong: r.strong,
                    weak: Some(r.weak),
                }
            }
            _ => MemberRates {
                strong: oma_rate_effective(strong_sinr),
                weak: None,
            },
        }
    }

    /// Rates under the `sinc^2` approximation.
    pub fn approx_rates(&self, noise: &PhaseNoiseModel) -> MemberRates {
        let s = noise.sinc_sq();
        let weak = self.weak.map_or(0.0, |u| u.gamma.value() * s);
        self.rates_effective(self.strong.gamma.value() * s, weak)
    }
}

/// Groups `(i, G - 1 - i)` of a sorted population, plus the median for odd `G`.
fn groups(sorted: &[User]) -> (Vec<(User, User)>, Option<User>) {
    let g = sorted.len();
    let pairs = (0..g / 2).map(|i| (sorted[i], sorted[g - 1 - i])).collect();
    let median = (g % 2 == 1).then(|| sorted[g / 2]);
    (pairs, median)
}

fn aup_group(
    strong: User,
    weak: User,
    noise: &PhaseNoiseModel,
    policy: AllocationPolicy,
) -> Result<Vec<PairDecision>> {
    if weak.gamma.value() <= 0.0 {
        // A user with no signal has a zero OMA rate and nothing to gain from pairing.
        return Ok(vec![
            PairDecision::oma(strong, noise, None),
            PairDecision::oma(weak, noise, None),
        ]);
    }
    let mins = MinRates::oma(strong.gamma, weak.gamma, noise);
    let ub = sinc_sq_delta_ub(strong.gamma, weak.gamma, mins)?;
    if !pair_feasible(noise, ub) {
        return Ok(vec![
            PairDecision::oma(strong, noise, Some(ub)),
            PairDecision::oma(weak, noise, Some(ub)),
        ]);
    }
    let bounds = alpha_bounds(strong.gamma, weak.gamma, noise, mins);
    let proposed = match policy.propose(weak.gamma, noise, mins) {
        Ok(split) => split,
        // The upper bound can touch 1 only when the weak user asks for nothing.
        Err(Error::Infeasible { .. }) | Err(Error::Degenerate(_)) => {
            return Ok(vec![
                PairDecision::oma(strong, noise, Some(ub)),
                PairDecision::oma(weak, noise, Some(ub)),
            ])
        }
        Err(e) => return Err(e),
    };
    let checked = validate_split(proposed, bounds)?;
    Ok(vec![PairDecision {
        strong,
        weak: Some(weak),
        mode: PairMode::Noma,
        split: Some(checked.split),
        warning: checked.warning,
        mins,
        sinc_sq_ub: Some(ub),
    }])
}

/// Adaptive user pairing.
///
/// Decisions come out in group order; an odd population ends with the
/// median user as a singleton OMA decision.
pub fn aup(
    population: &UserPopulation,
    noise: &PhaseNoiseModel,
    policy: AllocationPolicy,
) -> Result<Vec<PairDecision>> {
    let sorted = sort_users(population.clone());
    let (pairs, median) = groups(sorted.users());
    let mut out = Vec::with_capacity(population.len());
    for (strong, weak) in pairs {
        out.extend(aup_group(strong, weak, noise, policy)?);
    }
    if let Some(m) = median {
        out.push(PairDecision::oma(m, noise, None));
    }
    Ok(out)
}

/// Near-Far pairing: every group is NOMA with `alpha1` at the strong user's bound.
pub fn near_far_baseline(
    population: &UserPopulation,
    noise: &PhaseNoiseModel,
) -> Vec<PairDecision> {
    let sorted = sort_users(population.clone());
    let (pairs, median) = groups(sorted.users());
    let mut out = Vec::with_capacity(population.len());
    for (strong, weak) in pairs {
        let mins = MinRates::oma(strong.gamma, weak.gamma, noise);
        let ub = sinc_sq_delta_ub(strong.gamma, weak.gamma, mins).ok();
        let lb = alpha1_lower(strong.gamma, noise, mins.r1_min());
        match PowerSplit::new(lb) {
            Ok(split) => out.push(PairDecision {
                strong,
                weak: Some(weak),
                mode: PairMode::Noma,
                split: Some(split),
                warning: None,
                mins,
                sinc_sq_ub: ub,
            }),
            Err(_) => {
                out.push(PairDecision::oma(strong, noise, ub));
                out.push(PairDecision::oma(weak, noise, ub));
            }
        }
    }
    if let Some(m) = median {
        out.push(PairDecision::oma(m, noise, None));
    }
    out
}
