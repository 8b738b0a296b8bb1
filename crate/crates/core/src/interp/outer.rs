use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{C64, ZERO};

/// Relative floor applied to boundary moduli before taking logarithms.
pub const LOG_FLOOR: f64 = 1e-6;

/// Midpoint grid `t_m = 2π(m + ½)/M`.
pub fn grid_angles(m: usize) -> Vec<f64> {
    (0..m)
        .map(|k| 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / m as f64)
        .collect()
}

/// The Poisson measure `μ^ξ` sampled on `M` boundary points.
#[derive(Clone, Debug, Serialize)]
pub struct HarmonicMeasure {
    pub base_point: C64,
    pub angles: Vec<f64>,
    pub weights: Vec<f64>,
}

impl HarmonicMeasure {
    /// Mass of the arc `[a, b)`.
    pub fn mass(&self, a: f64, b: f64) -> f64 {
        self.angles
            .iter()
            .zip(&self.weights)
            .filter(|(&t, _)| t >= a && t < b)
            .map(|(_, w)| w)
            .sum()
    }
}

pub(crate) fn poisson_weights(xi: C64, angles: &[f64]) -> Vec<f64> {
    let r2 = xi.norm_sqr();
    let raw: Vec<f64> = angles
        .iter()
        .map(|&t| (1.0 - r2) / (C64::from_polar(1.0, t) - xi).norm_sqr())
        .collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

/// Poisson weights `(1 − |ξ|²)/|z − ξ|²` at the midpoint grid, normalized to sum one.
pub fn harmonic_measure(xi: C64, m: usize) -> Result<HarmonicMeasure> {
    if !(xi.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("base point {xi} is not in the open disc")));
    }
    if m < 8 || !m.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("grid size {m} must be a power of two ≥ 8")));
    }
    let angles = grid_angles(m);
    let weights = poisson_weights(xi, &angles);
    Ok(HarmonicMeasure {
        base_point: xi,
        angles,
        weights,
    })
}

/// Boundary values of the outer function with modulus `k`.
#[derive(Clone, Debug, Serialize)]
pub struct OuterFactor {
    /// The moduli after flooring.
    pub modulus: Vec<f64>,
    pub boundary: Vec<C64>,
    /// `W(0) = exp(mean log k)`.
    pub center: f64,
    /// Number of samples raised to the floor.
    pub floored: usize,
}

/// `W = exp(u + iũ)` with `u = log k` and `ũ` its conjugate function, from
/// samples of `k` on the midpoint grid.
pub fn outer_function(k: &[f64]) -> Result<OuterFactor> {
    if k.is_empty() {
        return Err(Error::EmptyOperator);
    }
    if let Some(i) = k.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::InvalidParameter(format!("boundary modulus at sample {i} is {} (must be positive)", k[i])));
    }
    let m = k.len();
    let max = k.iter().copied().fold(0.0, f64::max);
    let floor = LOG_FLOOR * max;
    let floored = k.iter().filter(|&&v| v < floor).count();
    let modulus: Vec<f64> = k.iter().map(|&v| v.max(floor)).collect();
    let u: Vec<f64> = modulus.iter().map(|v| v.ln()).collect();
    let mean = u.iter().sum::<f64>() / m as f64;

    let mut planner = FftPlanner::<f64>::new();
    let mut buf: Vec<C64> = u.iter().map(|&v| C64::new(v, 0.0)).collect();
    planner.plan_fft_forward(m).process(&mut buf);
    for (j, b) in buf.iter_mut().enumerate() {
        let freq = if 2 * j < m { j as i64 } else { j as i64 - m as i64 };
        *b = if freq == 0 || 2 * j == m {
            ZERO
        } else {
            *b * C64::new(0.0, -(freq.signum() as f64))
        };
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let boundary = u
        .iter()
        .zip(&buf)
        .map(|(&a, b)| C64::new(a, b.re / m as f64).exp())
        .collect();
    Ok(OuterFactor {
        modulus,
        boundary,
        center: mean.exp(),
        floored,
    })
}
