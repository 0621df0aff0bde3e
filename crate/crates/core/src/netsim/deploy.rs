//! Poisson deployment of BSs, IRSs and users on a square torus.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::config::NetworkConfig;
use crate::error::{Error, Result};

/// Redraws allowed before an empty deployment is reported as an error.
const MAX_RESAMPLES: u32 = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Distance on a square torus of side `side`.
pub fn torus_distance(a: Point, b: Point, side: f64) -> f64 {
    let wrap = |d: f64| {
        let d = d.abs() % side;
        d.min(side - d)
    };
    wrap(a.x - b.x).hypot(wrap(a.y - b.y))
}

/// One realization of the network layout.
///
/// BS `k` owns IRS `k`; `serving[u]` is the index of the IRS (and BS)
/// nearest to user `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Drop {
    pub side_m: f64,
    pub bs_positions: Vec<Point>,
    pub irs_positions: Vec<Point>,
    pub user_positions: Vec<Point>,
    pub serving: Vec<usize>,
    /// Empty layouts discarded before this one was accepted.
    pub resamples: u32,
}

impl Drop {
    pub fn distance(&self, a: Point, b: Point) -> f64 {
        torus_distance(a, b, self.side_m)
    }

    /// User indices grouped by serving BS.
    pub fn users_by_bs(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.bs_positions.len()];
        for (u, &b) in self.serving.iter().enumerate() {
            out[b].push(u);
        }
        out
    }
}

fn uniform_points<R: Rng + ?Sized>(n: usize, side: f64, rng: &mut R) -> Vec<Point> {
    (0..n)
        .map(|_| Point::new(rng.random_range(0.0..side), rng.random_range(0.0..side)))
        .collect()
}

fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<usize> {
    let dist =
        Poisson::new(mean).map_err(|e| Error::Config(format!("poisson mean {mean}: {e}")))?;
    Ok(dist.sample(rng) as usize)
}

pub fn nearest(p: Point, candidates: &[Point], side: f64) -> usize {
    candidates
        .iter()
        .enumerate()
        .map(|(i, &c)| (i, torus_distance(p, c, side)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .expect("at least one candidate")
}

/// Draws BS and user counts, positions and the user-to-IRS association.
///
/// Layouts with no BS or no user are redrawn, and the number of redraws is
/// kept in [`Drop::resamples`].
pub fn deploy<R: Rng + ?Sized>(config: &NetworkConfig, rng: &mut R) -> Result<Drop> {
    config.validate()?;
    let side = config.side_m();
    let mut resamples = 0;
    let (n_bs, n_users) = loop {
        let n_bs = poisson_count(config.bs_density * config.area_km2, rng)?;
        let n_users = poisson_count(config.user_density * config.area_km2, rng)?;
        if n_bs > 0 && n_users > 0 {
            break (n_bs, n_users);
        }
        resamples += 1;
        if resamples > MAX_RESAMPLES {
            return Err(Error::Config(format!(
                "no non-empty layout after {MAX_RESAMPLES} redraws"
            )));
        }
    };

    let bs_positions = uniform_points(n_bs, side, rng);
    let irs_positions = bs_positions
        .iter()
        .map(|b| {
            let bearing = rng.random_range(0.0..2.0 * PI);
            Point::new(
                (b.x + config.irs_offset_m * bearing.cos()).rem_euclid(side),
                (b.y + config.irs_offset_m * bearing.sin()).rem_euclid(side),
            )
        })
        .collect::<Vec<_>>();
    let user_positions = uniform_points(n_users, side, rng);
    let serving = user_positions
        .iter()
        .map(|&u| nearest(u, &irs_positions, side))
        .collect();

    Ok(Drop {
        side_m: side,
        bs_positions,
        irs_positions,
        user_positions,
        serving,
        resamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn torus_wraps() {
        let side = 1000.0;
        let d = torus_distance(Point::new(10.0, 500.0), Point::new(990.0, 500.0), side);
        assert!((d - 20.0).abs() < 1e-9);
        let d = torus_distance(Point::new(0.0, 0.0), Point::new(999.0, 999.0), side);
        assert!((d - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn irs_sits_at_the_offset() {
        let cfg = NetworkConfig::default();
        let drop = deploy(&cfg, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        for (b, i) in drop.bs_positions.iter().zip(&drop.irs_positions) {
            assert!((drop.distance(*b, *i) - cfg.irs_offset_m).abs() < 1e-6);
        }
    }

    #[test]
    fn association_is_nearest_irs() {
        let cfg = NetworkConfig {
            user_density: 300.0,
            ..NetworkConfig::default()
        };
        let drop = deploy(&cfg, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        for (u, &s) in drop.user_positions.iter().zip(&drop.serving) {
            let ds = drop.distance(*u, drop.irs_positions[s]);
            for irs in &drop.irs_positions {
                assert!(ds <= drop.distance(*u, *irs));
            }
        }
        let total: usize = drop.users_by_bs().iter().map(Vec::len).sum();
        assert_eq!(total, drop.user_positions.len());
    }

    #[test]
    fn sparse_layouts_are_resampled() {
        // Expected BS count of one: zero-BS layouts are common.
        let cfg = NetworkConfig {
            area_km2: 0.04,
            bs_density: 25.0,
            user_density: 100.0,
            ..NetworkConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut resampled = 0;
        for _ in 0..200 {
            let d = deploy(&cfg, &mut rng).unwrap();
            assert!(!d.bs_positions.is_empty() && !d.user_positions.is_empty());
            resampled += d.resamples;
        }
        assert!(resampled > 0);
    }
}
