//! Reduction of per-drop metrics into CDFs, sum rates and outage estimates.

use super::evaluate::{Algorithm, DropMetrics, Role, UserRecord};

/// Empirical distribution of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self { sorted: values }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Fraction of the sample at or below `x`.
    pub fn eval(&self, x: f64) -> f64 {
        if self.sorted.is_empty() {
            return 0.0;
        }
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// The jump points `(value, F(value))`, one per distinct value.
    ///
    /// With more than `max_points` distinct values an evenly spaced subset is
    /// kept; the last jump (where the CDF reaches 1) is always included.
    pub fn steps(&self, max_points: usize) -> Vec<(f64, f64)> {
        let n = self.sorted.len();
        let mut steps: Vec<(f64, f64)> = Vec::new();
        for (i, &v) in self.sorted.iter().enumerate() {
            if i + 1 == n || self.sorted[i + 1] != v {
                steps.push((v, (i + 1) as f64 / n as f64));
            }
        }
        if max_points == 0 || steps.len() <= max_points {
            return steps;
        }
        let last = steps.len() - 1;
        (0..max_points)
            .map(|k| {
                let idx = if max_points == 1 {
                    last
                } else {
                    (k * last + (max_points - 1) / 2) / (max_points - 1)
                };
                steps[idx.min(last)]
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OutageStat {
    pub outages: usize,
    pub samples: usize,
}

impl OutageStat {
    pub fn probability(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            self.outages as f64 / self.samples as f64
        }
    }

    fn add(&mut self, outage: bool) {
        self.samples += 1;
        self.outages += usize::from(outage);
    }
}

/// Everything reported for one algorithm over a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub rates_exact: EmpiricalCdf,
    pub rates_approx: EmpiricalCdf,
    pub min_rates: EmpiricalCdf,
    /// Mean over two-user groups of the approximated group sum rate.
    pub mean_asr: f64,
    /// Same groups, exact realization.
    pub mean_asr_exact: f64,
    /// Same groups, sum of the members' OMA rates.
    pub min_required_asr: f64,
    pub groups: usize,
    pub strong: OutageStat,
    pub weak: OutageStat,
    pub oma: OutageStat,
    pub overall: OutageStat,
    /// Users whose approximated rate is short of their minimum.
    pub short_of_minimum_approx: usize,
}

impl AlgorithmSummary {
    pub fn outage(&self, role: Role) -> OutageStat {
        match role {
            Role::Strong => self.strong,
            Role::Weak => self.weak,
            Role::Oma => self.oma,
        }
    }

    pub fn outage_gap(&self) -> f64 {
        (self.strong.probability() - self.weak.probability()).abs()
    }
}

fn summarize(algorithm: Algorithm, users: &[&UserRecord]) -> AlgorithmSummary {
    let mut strong = OutageStat::default();
    let mut weak = OutageStat::default();
    let mut oma = OutageStat::default();
    let mut overall = OutageStat::default();
    let (mut asr, mut asr_exact, mut asr_min) = (0.0, 0.0, 0.0);
    let mut grouped_users = 0usize;
    let mut short = 0usize;
    for u in users {
        match u.role {
            Role::Strong => strong.add(u.outage),
            Role::Weak => weak.add(u.outage),
            Role::Oma => oma.add(u.outage),
        }
        overall.add(u.outage);
        if u.grouped {
            grouped_users += 1;
            asr += u.rate_approx;
            asr_exact += u.rate_exact;
            asr_min += u.min_rate;
        }
        short += usize::from(u.short_of_minimum_approx());
    }
    let groups = grouped_users / 2;
    let mean = |s: f64| if groups == 0 { 0.0 } else { s / groups as f64 };
    AlgorithmSummary {
        algorithm,
        rates_exact: EmpiricalCdf::new(users.iter().map(|u| u.rate_exact).collect()),
        rates_approx: EmpiricalCdf::new(users.iter().map(|u| u.rate_approx).collect()),
        min_rates: EmpiricalCdf::new(users.iter().map(|u| u.min_rate).collect()),
        mean_asr: mean(asr),
        mean_asr_exact: mean(asr_exact),
        min_required_asr: mean(asr_min),
        groups,
        strong,
        weak,
        oma,
        overall,
        short_of_minimum_approx: short,
    }
}

/// Summaries per algorithm, in order of first appearance.
///
/// Sums run over drops in the order given, so the result does not depend on
/// how the drops were produced.
pub fn aggregate(metrics: &[DropMetrics]) -> Vec<AlgorithmSummary> {
    let mut order: Vec<Algorithm> = Vec::new();
    for m in metrics {
        if !order.contains(&m.algorithm) {
            order.push(m.algorithm);
        }
    }
    order
        .into_iter()
        .map(|a| {
            let users: Vec<&UserRecord> = metrics
                .iter()
                .filter(|m| m.algorithm == a)
                .flat_map(|m| &m.users)
                .collect();
            summarize(a, &users)
        })
        .collect()
}
