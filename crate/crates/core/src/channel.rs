//! Geometry-level channel model.
//!
//! The BS-IRS-user cascade collapses to a scalar power gain once the IRS has
//! aligned its reflections: `|L_i L_I|^2 |sum_k exp(j theta_k)|^2 M`, where the
//! `theta_k` are the residual per-element phase errors left after
//! compensation. Only those residuals are modelled; the ideal compensation
//! phases are never materialized.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{domain, Error, Result};

/// Below this magnitude `sinc` switches to its Taylor series.
const SINC_SERIES_CUTOFF: f64 = 1e-4;

/// `sin(x)/x` with the removable singularity at zero filled in.
///
/// Defined on `[0, pi)`, where it decreases strictly from 1 towards 0.
pub fn sinc(delta: f64) -> Result<f64> {
    if !(0.0..PI).contains(&delta) {
        return Err(domain("phase error bound", delta));
    }
    Ok(sinc_unchecked(delta))
}

pub(crate) fn sinc_unchecked(x: f64) -> f64 {
    if x.abs() < SINC_SERIES_CUTOFF {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Square planar array with `sqrt(elements)` elements per side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    elements: usize,
    side: usize,
    spacing_ratio: f64,
}

impl ArrayGeometry {
    /// `spacing_ratio` is the element spacing over the wavelength, `d / lambda`.
    pub fn new(elements: usize, spacing_ratio: f64) -> Result<Self> {
        if elements == 0 {
            return Err(Error::Geometry("array needs at least one element".into()));
        }
        let side = (elements as f64).sqrt().round() as usize;
        if side * side != elements {
            return Err(Error::Geometry(format!(
                "{elements} elements do not form a square array"
            )));
        }
        if !(spacing_ratio > 0.0 && spacing_ratio.is_finite()) {
            return Err(Error::Geometry(format!(
                "spacing ratio must be positive, got {spacing_ratio}"
            )));
        }
        Ok(Self {
            elements,
            side,
            spacing_ratio,
        })
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn spacing_ratio(&self) -> f64 {
        self.spacing_ratio
    }
}

/// Azimuth/elevation pair in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringAngles {
    pub azimuth: f64,
    pub elevation: f64,
}

impl SteeringAngles {
    pub fn new(azimuth: f64, elevation: f64) -> Self {
        Self { azimuth, elevation }
    }
}

/// Planar-array steering vector.
///
/// Element `(x, y)` sits at index `y * side + x` and carries
/// `exp(j 2 pi (d/lambda) (x sin(az) sin(el) + y cos(el)))`.
pub fn array_factor(geom: &ArrayGeometry, angles: SteeringAngles) -> Vec<Complex64> {
    let k = 2.0 * PI * geom.spacing_ratio;
    let u = angles.azimuth.sin() * angles.elevation.sin();
    let v = angles.elevation.cos();
    let side = geom.side;
    let mut out = Vec::with_capacity(geom.elements);
    for y in 0..side {
        for x in 0..side {
            let phase = k * (x as f64 * u + y as f64 * v);
            out.push(Complex64::from_polar(1.0, phase));
        }
    }
    out
}

/// Residual phase error model: i.i.d. uniform on `[-delta, delta]`.
///
/// Carries `sinc^2(delta)` alongside `delta` since every rate formula uses it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseNoiseModel {
    delta: f64,
    sinc_sq: f64,
}

impl PhaseNoiseModel {
    pub fn new(delta: f64) -> Result<Self> {
        let s = sinc(delta)?;
        Ok(Self {
            delta,
            sinc_sq: s * s,
        })
    }

    pub fn from_degrees(delta_deg: f64) -> Result<Self> {
        Self::new(delta_deg.to_radians())
    }

    /// Perfect compensation.
    pub fn ideal() -> Self {
        Self {
            delta: 0.0,
            sinc_sq: 1.0,
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Asymptotic coherence penalty `sinc^2(delta)`.
    pub fn sinc_sq(&self) -> f64 {
        self.sinc_sq
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        sample_phase_errors(self, n, rng)
    }
}

/// Draws `n` i.i.d. residual phase errors.
pub fn sample_phase_errors<R: Rng + ?Sized>(
    model: &PhaseNoiseModel,
    n: usize,
    rng: &mut R,
) -> Vec<f64> {
    let d = model.delta;
    if d == 0.0 {
        return vec![0.0; n];
    }
    (0..n).map(|_| rng.random_range(-d..=d)).collect()
}

/// Transmit power, cascaded path-loss amplitudes and interference-plus-noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    tx_power: f64,
    bs_irs_loss: f64,
    irs_user_loss: f64,
    interference_plus_noise: f64,
}

impl LinkBudget {
    /// Powers in watts, losses as amplitude gains.
    pub fn new(
        tx_power: f64,
        bs_irs_loss: f64,
        irs_user_loss: f64,
        interference_plus_noise: f64,
    ) -> Result<Self> {
        for (what, v) in [
            ("transmit power", tx_power),
            ("BS-IRS loss", bs_irs_loss),
            ("IRS-user loss", irs_user_loss),
            ("interference plus noise", interference_plus_noise),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(what, v));
            }
        }
        Ok(Self {
            tx_power,
            bs_irs_loss,
            irs_user_loss,
            interference_plus_noise,
        })
    }

    pub fn tx_power(&self) -> f64 {
        self.tx_power
    }

    pub fn bs_irs_loss(&self) -> f64 {
        self.bs_irs_loss
    }

    pub fn irs_user_loss(&self) -> f64 {
        self.irs_user_loss
    }

    pub fn interference_plus_noise(&self) -> f64 {
        self.interference_plus_noise
    }

    /// `|L_i L_I|^2`.
    pub fn cascade_power(&self) -> f64 {
        let a = self.bs_irs_loss * self.irs_user_loss;
        a * a
    }

    /// Converts a channel power gain into a received SINR.
    pub fn sinr_of_gain(&self, gain: f64) -> f64 {
        self.tx_power * gain / self.interference_plus_noise
    }
}

/// Linear SINR under perfect phase compensation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CsiSinr(f64);

impl CsiSinr {
    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(domain("CSI SINR", value));
        }
        Ok(Self(value))
    }

    pub fn from_db(db: f64) -> Result<Self> {
        Self::new(10f64.powf(db / 10.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn db(self) -> f64 {
        10.0 * self.0.log10()
    }
}

/// Squared coherent sum `|sum_k exp(j theta_k)|^2`.
pub fn coherent_power(phase_errors: &[f64]) -> f64 {
    let (re, im) = phase_errors
        .iter()
        .fold((0.0, 0.0), |(re, im), &t| (re + t.cos(), im + t.sin()));
    re * re + im * im
}

/// Normalized coherence `|(1/N) sum_k exp(j theta_k)|^2`, in `[0, 1]`.
pub fn normalized_coherence(phase_errors: &[f64]) -> f64 {
    let n = phase_errors.len() as f64;
    coherent_power(phase_errors) / (n * n)
}

/// Exact cascaded channel power gain for one phase-error realization.
pub fn effective_gain_exact(link: &LinkBudget, m_bs: usize, phase_errors: &[f64]) -> f64 {
    link.cascade_power() * coherent_power(phase_errors) * m_bs as f64
}

/// SINR with every reflection perfectly aligned: `P_t |L_i L_I|^2 N^2 M / (I + sigma^2)`.
pub fn csi_sinr(link: &LinkBudget, m_bs: usize, n_irs: usize) -> CsiSinr {
    let n = n_irs as f64;
    // Same operation order as `effective_gain_exact` with zero errors.
    CsiSinr(link.sinr_of_gain(link.cascade_power() * (n * n) * m_bs as f64))
}
