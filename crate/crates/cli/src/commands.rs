//! The four subcommands, split into a computing half and a CSV-writing half.

use std::path::{Path, PathBuf};

use irs_noma::netsim::{run_campaign, run_direct_campaign, Algorithm, Campaign, Role};
use irs_noma::{
    alpha1_lower, alpha1_upper, alpha_bounds, fpa_split, noma_rates, pair_feasible,
    sinc_sq_delta_ub, validate_split, AllocationPolicy, CsiSinr, MinRates, NomaRates, PairDecision,
    PhaseNoiseModel, PowerSplit, SplitWarning, User, UserPopulation,
};

use crate::config::{Range, RminBasis, RunConfig};
use crate::error::CliError;
use crate::format::{num, opt_num, Sink};

fn ordered_pair(gamma1_db: f64, gamma2_db: f64) -> Result<(CsiSinr, CsiSinr), CliError> {
    if gamma1_db < gamma2_db {
        return Err(CliError::Usage(format!(
            "strong SINR {gamma1_db} dB is below weak SINR {gamma2_db} dB"
        )));
    }
    Ok((CsiSinr::from_db(gamma1_db)?, CsiSinr::from_db(gamma2_db)?))
}

fn noise_deg(delta_deg: f64) -> Result<PhaseNoiseModel, CliError> {
    PhaseNoiseModel::from_degrees(delta_deg)
        .map_err(|_| CliError::Usage(format!("phase error {delta_deg} deg is not in [0, 180)")))
}

fn min_rates(
    g1: CsiSinr,
    g2: CsiSinr,
    noise: &PhaseNoiseModel,
    basis: RminBasis,
) -> Result<MinRates, CliError> {
    Ok(match basis {
        RminBasis::Tracking => MinRates::oma(g1, g2, noise),
        RminBasis::Reference(d) => MinRates::oma(g1, g2, &PhaseNoiseModel::new(d)?),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaRow {
    pub delta_rad: f64,
    pub delta_deg: f64,
    pub mins: MinRates,
    /// Split used for the rates; absent when the policy has none in `(0, 1)`.
    pub split: Option<PowerSplit>,
    pub rates: Option<NomaRates>,
    pub feasible: bool,
    pub sinc_sq_ub: f64,
}

/// Rates of one pair across phase errors.
///
/// Feasible rows use the policy's split clamped into the bounds; infeasible
/// rows report the unclamped proposal.
pub fn sweep_delta(
    gamma1_db: f64,
    gamma2_db: f64,
    range_deg: Range,
    policy: AllocationPolicy,
    basis: RminBasis,
) -> Result<Vec<DeltaRow>, CliError> {
    let (g1, g2) = ordered_pair(gamma1_db, gamma2_db)?;
    range_deg
        .points()
        .into_iter()
        .map(|deg| {
            let noise = noise_deg(deg)?;
            let mins = min_rates(g1, g2, &noise, basis)?;
            let sinc_sq_ub = sinc_sq_delta_ub(g1, g2, mins)?;
            let feasible = pair_feasible(&noise, sinc_sq_ub);
            let split = policy.propose(g2, &noise, mins).ok().map(|s| {
                if feasible {
                    validate_split(s, alpha_bounds(g1, g2, &noise, mins))
                        .map(|c| c.split)
                        .unwrap_or(s)
                } else {
                    s
                }
            });
            let rates = split.map(|s| noma_rates(g1, g2, s, &noise)).transpose()?;
            Ok(DeltaRow {
                delta_rad: noise.delta(),
                delta_deg: deg,
                mins,
                split,
                rates,
                feasible,
                sinc_sq_ub,
            })
        })
        .collect()
}

pub fn write_sweep_delta(rows: &[DeltaRow], mut sink: Sink) -> Result<(), CliError> {
    sink.row([
        "delta_rad",
        "delta_deg",
        "r1_min",
        "r2_min",
        "r1_noma",
        "r2_noma",
        "asr",
        "feasible",
        "sinc_sq_ub",
    ])?;
    for r in rows {
        sink.row([
            num(r.delta_rad),
            num(r.delta_deg),
            num(r.mins.r1_min()),
            num(r.mins.r2_min()),
            opt_num(r.rates.map(|x| x.strong)),
            opt_num(r.rates.map(|x| x.weak)),
            opt_num(r.rates.map(|x| x.sum())),
            r.feasible.to_string(),
            num(r.sinc_sq_ub),
        ])?;
    }
    sink.finish()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaRow {
    pub alpha1: f64,
    pub rates: NomaRates,
    pub mins: MinRates,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaMarkers {
    pub lower: f64,
    pub upper: f64,
    pub fpa: f64,
}

/// Rates of one pair across `alpha1`, with the bound and FPA splits merged
/// into the grid.
pub fn sweep_alpha(
    gamma1_db: f64,
    gamma2_db: f64,
    delta_deg: f64,
    range: Range,
    basis: RminBasis,
) -> Result<(Vec<AlphaRow>, AlphaMarkers), CliError> {
    if !(range.start > 0.0 && range.stop < 1.0) {
        return Err(CliError::Usage(format!(
            "alpha1 range {}:{} leaves (0, 1)",
            range.start, range.stop
        )));
    }
    let (g1, g2) = ordered_pair(gamma1_db, gamma2_db)?;
    let noise = noise_deg(delta_deg)?;
    let mins = min_rates(g1, g2, &noise, basis)?;
    let markers = AlphaMarkers {
        lower: alpha1_lower(g1, &noise, mins.r1_min()),
        upper: alpha1_upper(g2, &noise, mins.r2_min()),
        fpa: fpa_split(mins)?.alpha1(),
    };
    let mut alphas = range.points();
    alphas.extend(
        [markers.lower, markers.upper, markers.fpa]
            .into_iter()
            .filter(|a| *a > 0.0 && *a < 1.0),
    );
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    let rows = alphas
        .into_iter()
        .map(|a| {
            let rates = noma_rates(g1, g2, PowerSplit::new(a)?, &noise)?;
            Ok(AlphaRow {
                alpha1: a,
                rates,
                mins,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok((rows, markers))
}

pub fn write_sweep_alpha(rows: &[AlphaRow], mut sink: Sink) -> Result<(), CliError> {
    sink.row(["alpha1", "r1_noma", "r2_noma", "asr", "r1_min", "r2_min"])?;
    for r in rows {
        sink.row([
            num(r.alpha1),
            num(r.rates.strong),
            num(r.rates.weak),
            num(r.rates.sum()),
            num(r.mins.r1_min()),
            num(r.mins.r2_min()),
        ])?;
    }
    sink.finish()
}

/// Reads one SINR in dB per line. Users are numbered from 1 in file order;
/// blank lines and `#` comments are skipped.
pub fn read_sinr_file(path: &Path) -> Result<UserPopulation, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_sinrs(&text, path)
}

pub fn parse_sinrs(text: &str, path: &Path) -> Result<UserPopulation, CliError> {
    let mut users = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| CliError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let db: f64 = line
            .parse()
            .map_err(|_| err(format!("'{line}' is not a number")))?;
        let gamma = CsiSinr::from_db(db).map_err(|e| err(e.to_string()))?;
        users.push(User::new(users.len() as u64 + 1, gamma));
    }
    if users.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: no SINR values",
            path.display()
        )));
    }
    Ok(UserPopulation::new(users)?)
}

fn warning_name(w: Option<SplitWarning>) -> &'static str {
    match w {
        None => "",
        Some(SplitWarning::RaisedToLower { .. }) => "raised-to-lower",
        Some(SplitWarning::LoweredToUpper { .. }) => "lowered-to-upper",
    }
}

pub fn pair(
    population: &UserPopulation,
    delta_deg: f64,
    algorithm: Algorithm,
) -> Result<Vec<PairDecision>, CliError> {
    let noise = noise_deg(delta_deg)?;
    Ok(algorithm.decide(population, &noise)?)
}

pub fn write_pair(decisions: &[PairDecision], mut sink: Sink) -> Result<(), CliError> {
    sink.row([
        "strong_id",
        "weak_id",
        "mode",
        "alpha1",
        "alpha2",
        "r1_min",
        "r2_min",
        "sinc_sq_ub",
        "warning",
        "gamma1_db",
        "gamma2_db",
    ])?;
    for d in decisions {
        sink.row([
            d.strong.id.0.to_string(),
            d.weak.map(|u| u.id.0.to_string()).unwrap_or_default(),
            d.mode.to_string(),
            opt_num(d.split.map(|s| s.alpha1())),
            opt_num(d.split.map(|s| s.alpha2())),
            num(d.mins.r1_min()),
            num(d.mins.r2_min()),
            opt_num(d.sinc_sq_ub),
            warning_name(d.warning).to_string(),
            num(d.strong.gamma.db()),
            opt_num(d.weak.map(|u| u.gamma.db())),
        ])?;
    }
    sink.finish()
}

/// Runs the configured campaign: over Poisson drops, or over the users of
/// `sinr_file` when one is given.
pub fn simulate(cfg: &RunConfig) -> Result<Campaign, CliError> {
    let algorithms = cfg.algorithms();
    Ok(match &cfg.sinr_file {
        Some(path) => run_direct_campaign(&read_sinr_file(path)?, &cfg.network, &algorithms)?,
        None => run_campaign(&cfg.network, &algorithms)?,
    })
}

/// Writes cdf.csv, cdf_approx.csv, outage.csv, summary.csv and the pair
/// listings into `dir`, returning the paths written.
pub fn write_simulation(
    campaign: &Campaign,
    cdf_points: usize,
    dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    let mut open = |name: &str| -> Result<Sink, CliError> {
        let p = dir.join(name);
        let sink = Sink::create(&p)?;
        written.push(p);
        Ok(sink)
    };

    for (name, exact) in [("cdf.csv", true), ("cdf_approx.csv", false)] {
        let mut sink = open(name)?;
        sink.row(["algorithm", "rate_bps_hz", "cdf"])?;
        for s in &campaign.summaries {
            let cdf = if exact {
                &s.rates_exact
            } else {
                &s.rates_approx
            };
            for (x, f) in cdf.steps(cdf_points) {
                sink.row([s.algorithm.name().to_string(), num(x), num(f)])?;
            }
        }
        // Every algorithm sees the same users, so one minimum-rate curve suffices.
        if let Some(s) = campaign.summaries.first() {
            for (x, f) in s.min_rates.steps(cdf_points) {
                sink.row(["min-required".to_string(), num(x), num(f)])?;
            }
        }
        sink.finish()?;
    }

    let mut sink = open("outage.csv")?;
    sink.row(["algorithm", "role", "outage_prob", "n_samples"])?;
    for s in &campaign.summaries {
        let roles = [Role::Strong, Role::Weak, Role::Oma].map(|r| (r.name(), s.outage(r)));
        for (role, stat) in roles.into_iter().chain([("all", s.overall)]) {
            sink.row([
                s.algorithm.name().to_string(),
                role.to_string(),
                num(stat.probability()),
                stat.samples.to_string(),
            ])?;
        }
    }
    sink.finish()?;

    let mut sink = open("summary.csv")?;
    sink.row(["algorithm", "mean_asr", "min_required_asr"])?;
    for s in &campaign.summaries {
        sink.row([
            s.algorithm.name().to_string(),
            num(s.mean_asr),
            num(s.min_required_asr),
        ])?;
    }
    sink.finish()?;

    let single = campaign.algorithms.len() == 1;
    for &alg in &campaign.algorithms {
        let name = if single {
            "pairs.csv".to_string()
        } else {
            format!("pairs_{}.csv", alg.name())
        };
        let mut sink = open(&name)?;
        sink.row([
            "drop_id",
            "bs_id",
            "strong_id",
            "weak_id",
            "mode",
            "alpha1",
            "gamma1_db",
            "gamma2_db",
            "sinc_sq_ub",
        ])?;
        for m in campaign.metrics_for(alg) {
            for rec in &m.decisions {
                let d = &rec.decision;
                sink.row([
                    m.drop_id.to_string(),
                    rec.bs.to_string(),
                    d.strong.id.0.to_string(),
                    d.weak.map(|u| u.id.0.to_string()).unwrap_or_default(),
                    d.mode.to_string(),
                    opt_num(d.split.map(|s| s.alpha1())),
                    num(d.strong.gamma.db()),
                    opt_num(d.weak.map(|u| u.gamma.db())),
                    opt_num(d.sinc_sq_ub),
                ])?;
            }
        }
        sink.finish()?;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinr_parsing() {
        let p = parse_sinrs("8\n\n5 # second\n2\n-1\n", Path::new("s")).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.users()[3].id.0, 4);
        let e = parse_sinrs("8\nfive\n", Path::new("s")).unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 2, .. }));
        assert!(parse_sinrs("\n# nothing\n", Path::new("s"))
            .unwrap_err()
            .is_usage());
    }

    #[test]
    fn sweeps_reject_bad_input() {
        let r = Range::new(0.0, 1.0, 0.1).unwrap();
        assert!(sweep_alpha(8.0, 5.0, 0.0, r, RminBasis::Tracking).is_err());
        let r = Range::new(0.1, 0.9, 0.1).unwrap();
        assert!(sweep_alpha(2.0, 5.0, 0.0, r, RminBasis::Tracking).is_err());
        let r = Range::new(0.0, 200.0, 10.0).unwrap();
        assert!(sweep_delta(8.0, 5.0, r, AllocationPolicy::Mpa, RminBasis::Tracking).is_err());
    }
}
