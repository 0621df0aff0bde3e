//! Per-drop evaluation: CSI SINRs from geometry, pairing, and rates.
//!
//! Minimum rates and power splits are computed from the `sinc^2`
//! approximation, which is all the BS can know. What the channel delivers
//! is evaluated against one exact phase-error realization per decision: a
//! NOMA pair shares the realization of the IRS serving it, an OMA user gets
//! its own. Realizations are keyed by the owning user, so every algorithm
//! sees the same phase errors for the same group.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;

use super::config::{InterferenceModel, NetworkConfig};
use super::deploy::Drop;
use super::pathloss::path_loss_clamped;
use crate::allocation::AllocationPolicy;
use crate::channel::{
    csi_sinr, effective_gain_exact, normalized_coherence, CsiSinr, LinkBudget, PhaseNoiseModel,
};
use crate::error::{Error, Result};
use crate::pairing::{aup, near_far_baseline, PairDecision, User, UserId, UserPopulation};
use crate::rng::{substream, TAG_PHASE};

/// Slack below a minimum rate before a user counts as short of it.
pub const RATE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    AupMpa,
    AupFpa,
    NearFar,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::AupMpa, Algorithm::AupFpa, Algorithm::NearFar];

    pub fn name(self) -> &'static str {
        match self {
            Self::AupMpa => "aup-mpa",
            Self::AupFpa => "aup-fpa",
            Self::NearFar => "near-far",
        }
    }

    pub fn decide(
        self,
        population: &UserPopulation,
        noise: &PhaseNoiseModel,
    ) -> Result<Vec<PairDecision>> {
        match self {
            Self::AupMpa => aup(population, noise, AllocationPolicy::Mpa),
            Self::AupFpa => aup(population, noise, AllocationPolicy::Fpa),
            Self::NearFar => Ok(near_far_baseline(population, noise)),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown algorithm '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Strong,
    Weak,
    Oma,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Self::Strong => "strong",
            Self::Weak => "weak",
            Self::Oma => "oma",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserRecord {
    pub id: UserId,
    pub bs: usize,
    pub role: Role,
    /// Member of a two-user group, whether it ended up NOMA or OMA.
    pub grouped: bool,
    pub gamma: CsiSinr,
    pub min_rate: f64,
    pub rate_approx: f64,
    pub rate_exact: f64,
    pub outage: bool,
}

impl UserRecord {
    pub fn short_of_minimum_approx(&self) -> bool {
        self.rate_approx < self.min_rate - RATE_TOLERANCE
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionRecord {
    pub bs: usize,
    pub decision: PairDecision,
}

/// Outcome of one algorithm on one drop.
#[derive(Debug, Clone, PartialEq)]
pub struct DropMetrics {
    pub drop_id: u64,
    pub algorithm: Algorithm,
    pub users: Vec<UserRecord>,
    pub decisions: Vec<DecisionRecord>,
}

/// Link budget of every user towards its serving BS through that BS's IRS.
pub fn user_links(drop: &Drop, config: &NetworkConfig) -> Result<Vec<LinkBudget>> {
    let f = config.carrier_ghz;
    let pt = config.tx_power_w();
    let noise = config.noise_w();
    let bs_irs: Vec<f64> = drop
        .bs_positions
        .iter()
        .zip(&drop.irs_positions)
        .map(|(&b, &i)| path_loss_clamped(drop.distance(b, i), f))
        .collect();
    let incoherent_gain = (config.n_irs * config.m_bs) as f64;

    drop.user_positions
        .iter()
        .zip(&drop.serving)
        .map(|(&u, &s)| {
            let interference = match config.interference {
                InterferenceModel::Fixed(w) => w,
                InterferenceModel::DirectPath => (0..drop.bs_positions.len())
                    .filter(|&j| j != s)
                    .map(|j| {
                        pt * path_loss_clamped(drop.distance(drop.bs_positions[j], u), f).powi(2)
                    })
                    .sum(),
                InterferenceModel::Reflected => (0..drop.bs_positions.len())
                    .filter(|&j| j != s)
                    .map(|j| {
                        let a = bs_irs[j]
                            * path_loss_clamped(drop.distance(drop.irs_positions[j], u), f);
                        pt * a * a * incoherent_gain
                    })
                    .sum(),
            };
            let irs_user = path_loss_clamped(drop.distance(drop.irs_positions[s], u), f);
            LinkBudget::new(pt, bs_irs[s], irs_user, interference + noise)
        })
        .collect()
}

/// Runs `algorithm` on one BS's users and evaluates the resulting rates.
///
/// `exact_sinr(user, phase_errors)` gives the SINR that user receives under
/// the given realization.
#[allow(clippy::too_many_arguments)]
fn evaluate_population<F>(
    population: &UserPopulation,
    bs: usize,
    algorithm: Algorithm,
    noise: &PhaseNoiseModel,
    n_irs: usize,
    phase_stream: impl Fn(UserId) -> ChaCha8Rng,
    exact_sinr: F,
    users: &mut Vec<UserRecord>,
    decisions: &mut Vec<DecisionRecord>,
) -> Result<()>
where
    F: Fn(UserId, &[f64]) -> f64,
{
    let decided = algorithm.decide(population, noise)?;
    for d in decided {
        let errors = noise.sample(n_irs, &mut phase_stream(d.strong.id));
        let strong_exact = exact_sinr(d.strong.id, &errors);
        let weak_exact = d.weak.map_or(0.0, |w| exact_sinr(w.id, &errors));
        let approx = d.approx_rates(noise);
        let exact = d.rates_effective(strong_exact, weak_exact);
        let grouped = d.sinc_sq_ub.is_some() || d.weak.is_some();

        let mut push = |user: User, role: Role, min_rate: f64, a: f64, e: f64| {
            users.push(UserRecord {
                id: user.id,
                bs,
                role,
                grouped,
                gamma: user.gamma,
                min_rate,
                rate_approx: a,
                rate_exact: e,
                outage: e < min_rate - RATE_TOLERANCE,
            });
        };
        match (d.weak, approx.weak, exact.weak) {
            (Some(w), Some(wa), Some(we)) => {
                push(
                    d.strong,
                    Role::Strong,
                    d.mins.r1_min(),
                    approx.strong,
                    exact.strong,
                );
                push(w, Role::Weak, d.mins.r2_min(), wa, we);
            }
            _ => push(
                d.strong,
                Role::Oma,
                d.mins.r1_min(),
                approx.strong,
                exact.strong,
            ),
        }
        decisions.push(DecisionRecord { bs, decision: d });
    }
    Ok(())
}

fn phase_stream(seed: u64, drop_id: u64) -> impl Fn(UserId) -> ChaCha8Rng {
    move |id: UserId| substream(seed, &[drop_id, id.0, TAG_PHASE])
}

/// Evaluates one algorithm on a deployed drop.
pub fn evaluate_drop(
    drop: &Drop,
    config: &NetworkConfig,
    algorithm: Algorithm,
    drop_id: u64,
) -> Result<DropMetrics> {
    let links = user_links(drop, config)?;
    evaluate_drop_with_links(drop, &links, config, algorithm, drop_id)
}

pub(crate) fn evaluate_drop_with_links(
    drop: &Drop,
    links: &[LinkBudget],
    config: &NetworkConfig,
    algorithm: Algorithm,
    drop_id: u64,
) -> Result<DropMetrics> {
    let noise = PhaseNoiseModel::new(config.delta)?;
    let m = config.m_bs;
    let mut users = Vec::with_capacity(links.len());
    let mut decisions = Vec::new();
    for (bs, members) in drop.users_by_bs().into_iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        let population = UserPopulation::new(
            members
                .iter()
                .map(|&u| User::new(u as u64, csi_sinr(&links[u], m, config.n_irs)))
                .collect(),
        )?;
        evaluate_population(
            &population,
            bs,
            algorithm,
            &noise,
            config.n_irs,
            phase_stream(config.seed, drop_id),
            |id, errors| {
                let link = &links[id.0 as usize];
                link.sinr_of_gain(effective_gain_exact(link, m, errors))
            },
            &mut users,
            &mut decisions,
        )?;
    }
    Ok(DropMetrics {
        drop_id,
        algorithm,
        users,
        decisions,
    })
}

/// Evaluates one algorithm on users with given CSI SINRs, all served by one BS.
///
/// The exact SINR of a user is its CSI SINR times the normalized coherence of
/// the realization, so only `delta`, `n_irs` and `seed` of `config` matter.
pub fn evaluate_population_direct(
    population: &UserPopulation,
    config: &NetworkConfig,
    algorithm: Algorithm,
    drop_id: u64,
) -> Result<DropMetrics> {
    let noise = PhaseNoiseModel::new(config.delta)?;
    let gammas: std::collections::HashMap<UserId, f64> = population
        .users()
        .iter()
        .map(|u| (u.id, u.gamma.value()))
        .collect();
    let mut users = Vec::with_capacity(population.len());
    let mut decisions = Vec::new();
    evaluate_population(
        population,
        0,
        algorithm,
        &noise,
        config.n_irs,
        phase_stream(config.seed, drop_id),
        |id, errors| gammas[&id] * normalized_coherence(errors),
        &mut users,
        &mut decisions,
    )?;
    Ok(DropMetrics {
        drop_id,
        algorithm,
        users,
        decisions,
    })
}
