use irs_noma::netsim::*;
use irs_noma::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small() -> NetworkConfig {
    NetworkConfig {
        area_km2: 0.25,
        drops: 8,
        seed: 41,
        ..NetworkConfig::default()
    }
}

#[test]
fn poisson_counts_have_the_right_mean() {
    let cfg = NetworkConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(123);
    let drops = 1000;
    let (mut bs, mut users) = (0usize, 0usize);
    for _ in 0..drops {
        let d = deploy(&cfg, &mut rng).unwrap();
        bs += d.bs_positions.len();
        users += d.user_positions.len();
    }
    let bs = bs as f64 / drops as f64;
    let users = users as f64 / drops as f64;
    assert!((bs - 25.0).abs() < 3.0 * 25f64.sqrt(), "{bs}");
    assert!((users - 2000.0).abs() < 3.0 * 2000f64.sqrt(), "{users}");
}

#[test]
fn no_phase_error_means_no_outage() {
    let cfg = NetworkConfig {
        delta: 0.0,
        ..small()
    };
    let c = run_campaign(&cfg, &Algorithm::ALL).unwrap();
    for m in &c.metrics {
        for u in &m.users {
            assert!((u.rate_exact - u.rate_approx).abs() < 1e-9 * u.rate_approx.max(1.0));
        }
    }
    for alg in [Algorithm::AupMpa, Algorithm::AupFpa] {
        assert_eq!(c.summary(alg).unwrap().overall.outages, 0);
    }
}

#[test]
fn drop_decisions_are_plain_aup_per_bs() {
    let cfg = small();
    let drop = deploy(&cfg, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
    let links = user_links(&drop, &cfg).unwrap();
    let noise = PhaseNoiseModel::new(cfg.delta).unwrap();
    let m = evaluate_drop(&drop, &cfg, Algorithm::AupMpa, 0).unwrap();
    for (bs, members) in drop.users_by_bs().into_iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        let pop = UserPopulation::new(
            members
                .iter()
                .map(|&u| User::new(u as u64, csi_sinr(&links[u], cfg.m_bs, cfg.n_irs)))
                .collect(),
        )
        .unwrap();
        let direct = aup(&pop, &noise, AllocationPolicy::Mpa).unwrap();
        let from_drop: Vec<PairDecision> = m
            .decisions
            .iter()
            .filter(|d| d.bs == bs)
            .map(|d| d.decision)
            .collect();
        assert_eq!(direct, from_drop);
    }
}

#[test]
fn two_users_direct_mode_match_aup() {
    let pop = UserPopulation::new(vec![
        User::new(7, CsiSinr::from_db(2.0).unwrap()),
        User::new(9, CsiSinr::from_db(8.0).unwrap()),
    ])
    .unwrap();
    let cfg = NetworkConfig::default();
    let noise = PhaseNoiseModel::new(cfg.delta).unwrap();
    let m = evaluate_population_direct(&pop, &cfg, Algorithm::AupFpa, 0).unwrap();
    let expected = aup(&pop, &noise, AllocationPolicy::Fpa).unwrap();
    assert_eq!(
        m.decisions.iter().map(|d| d.decision).collect::<Vec<_>>(),
        expected
    );
}

/// Share of uniform phase-error vectors whose normalized coherence is below `sinc^2`.
fn coherence_tail(n: usize, delta: f64, samples: usize, seed: u64) -> f64 {
    let s = (delta.sin() / delta).powi(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut below = 0usize;
    for _ in 0..samples {
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for _ in 0..n {
            let t: f64 = rng.random_range(-delta..=delta);
            re += t.cos();
            im += t.sin();
        }
        if (re * re + im * im) / ((n * n) as f64) < s {
            below += 1;
        }
    }
    below as f64 / samples as f64
}

#[test]
fn mpa_weak_outage_is_the_coherence_tail() {
    let cfg = NetworkConfig {
        drops: 10,
        seed: 5,
        ..NetworkConfig::default()
    };
    let c = run_campaign(&cfg, &[Algorithm::AupMpa]).unwrap();
    let weak = c.summary(Algorithm::AupMpa).unwrap().weak;
    assert!(weak.samples > 5000);
    let oracle = coherence_tail(cfg.n_irs, cfg.delta, 200_000, 99);
    assert!(
        (weak.probability() - oracle).abs() < 0.02,
        "{} vs {oracle}",
        weak.probability()
    );
}

#[test]
fn mpa_sum_rate_dominates_fpa_in_every_drop() {
    let c = run_campaign(&small(), &[Algorithm::AupMpa, Algorithm::AupFpa]).unwrap();
    for pair in c.metrics.chunks(2) {
        let asr = |m: &DropMetrics| -> f64 {
            m.users
                .iter()
                .filter(|u| u.grouped)
                .map(|u| u.rate_approx)
                .sum()
        };
        assert!(asr(&pair[0]) >= asr(&pair[1]) - 1e-9);
    }
}

#[test]
fn aup_never_short_of_minimum_in_any_drop() {
    let c = run_campaign(&small(), &Algorithm::ALL).unwrap();
    for m in c
        .metrics
        .iter()
        .filter(|m| m.algorithm != Algorithm::NearFar)
    {
        assert!(m.users.iter().all(|u| !u.short_of_minimum_approx()));
    }
}

#[test]
fn fixed_interference_zero_is_noise_limited() {
    let cfg = NetworkConfig {
        interference: InterferenceModel::Fixed(0.0),
        ..small()
    };
    let drop = deploy(&cfg, &mut ChaCha8Rng::seed_from_u64(8)).unwrap();
    let links = user_links(&drop, &cfg).unwrap();
    for l in &links {
        assert!((l.interference_plus_noise() - cfg.noise_w()).abs() < 1e-30);
    }
}

#[test]
fn same_seed_same_campaign() {
    let a = run_campaign(&small(), &Algorithm::ALL).unwrap();
    let b = run_campaign(&small(), &Algorithm::ALL).unwrap();
    assert_eq!(a.metrics, b.metrics);
    let c = run_campaign(
        &NetworkConfig {
            seed: 42,
            ..small()
        },
        &Algorithm::ALL,
    )
    .unwrap();
    assert_ne!(a.metrics, c.metrics);
}
