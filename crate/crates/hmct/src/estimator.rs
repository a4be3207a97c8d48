//! Cross-sublattice correlation of the demodulated preamble, the two CFO
//! estimators built on its phase progression, and the estimation-variance
//! lower bound.
//!
//! Both estimators model the unwrapped correlation phase as
//! `theta0 + (m+1)*theta1` and map `arg gamma_0 - theta1_hat` to a
//! normalized CFO; they differ only in how the slope is fitted. The sign of
//! the mapping is calibrated against the CFO rotation direction applied by
//! the channel stage so that positive offsets yield positive estimates.

use crate::error::{HmctError, Result};
use crate::lattice::LatticeConfig;
use crate::preamble::PreambleFrame;
use crate::{unwrap_phases, wrap_pi, C64};
use std::f64::consts::PI;
use std::fmt;

/// Lagged correlations between data-stripped demodulated training values on
/// the two sublattices.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaStatistics {
    /// `gamma[m]`: correlation at sublattice-B lag `m`.
    pub gamma: Vec<C64>,
    /// Number of index-valid terms summed into each `gamma[m]`; always >= 1.
    pub valid_counts: Vec<usize>,
}

/// Estimator family identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Phase-differential slope (mean of successive phase differences).
    Pd,
    /// Least-squares affine fit of the phase progression.
    Ls,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Pd => write!(f, "pd"),
            Method::Ls => write!(f, "ls"),
        }
    }
}

/// Affine model of the unwrapped correlation phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFit {
    /// Constant rotation, wrapped to (-pi, pi].
    pub theta0: f64,
    /// Per-lag phase slope.
    pub theta1: f64,
    /// Residuals of the unwrapped phases about the fitted line.
    pub residuals: Vec<f64>,
}

/// One CFO estimate with its phase-model diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    /// Normalized CFO estimate.
    pub eps_hat: f64,
    /// Estimator that produced it.
    pub method: Method,
    /// Fitted phase model.
    pub fit: PhaseFit,
    /// True iff `|eps_hat| <= n_sub/(2*m_samples)`.
    pub in_range: bool,
}

/// Correlates data-stripped demodulated training values across the two
/// sublattices: `gamma[m] = sum_l u_b[l+m] * conj(u_a[l])` with
/// `u_a[l] = dhat_even[l] * sign(d[2l])` and
/// `u_b[j] = dhat_odd[j] * sign(d[2j+1])` (the training values are bipolar,
/// so the sign is their unit-modulus conjugate phase). Sums run over
/// index-valid `l` only; lags with an empty range are dropped, so the
/// number of returned lags is `min(m_max, n_p)`.
pub fn compute_gamma(
    dhat_even: &[C64],
    dhat_odd: &[C64],
    frame: &PreambleFrame,
    m_max: usize,
) -> Result<GammaStatistics> {
    let n_p = frame.p1.len();
    if frame.d.len() != 2 * n_p {
        return Err(HmctError::InvalidArgument(format!(
            "frame carries {} frequency-domain values for {} training values",
            frame.d.len(),
            n_p
        )));
    }
    if dhat_even.len() < n_p || dhat_odd.len() < n_p {
        return Err(HmctError::InvalidArgument(format!(
            "demodulated sequences of {} and {} values cannot cover {} training positions",
            dhat_even.len(),
            dhat_odd.len(),
            n_p
        )));
    }
    if m_max == 0 {
        return Err(HmctError::InvalidArgument(
            "need at least one correlation lag".into(),
        ));
    }
    let u_a: Vec<C64> = (0..n_p)
        .map(|l| dhat_even[l] * frame.d[2 * l].signum())
        .collect();
    let u_b: Vec<C64> = (0..n_p)
        .map(|j| dhat_odd[j] * frame.d[2 * j + 1].signum())
        .collect();
    let m_eff = m_max.min(n_p);
    let mut gamma = Vec::with_capacity(m_eff);
    let mut valid_counts = Vec::with_capacity(m_eff);
    for m in 0..m_eff {
        let mut acc = C64::new(0.0, 0.0);
        for l in 0..n_p - m {
            acc += u_b[l + m] * u_a[l].conj();
        }
        gamma.push(acc);
        valid_counts.push(n_p - m);
    }
    Ok(GammaStatistics {
        gamma,
        valid_counts,
    })
}

/// Unwrapped correlation phases, anchored at the principal value of
/// `arg gamma_0`. At least two lags are required to fit a slope.
fn unwrapped_angles(stats: &GammaStatistics) -> Result<Vec<f64>> {
    if stats.gamma.len() < 2 {
        return Err(HmctError::InsufficientStatistic(format!(
            "need at least 2 correlation lags to fit a phase slope, have {}",
            stats.gamma.len()
        )));
    }
    let mut y: Vec<f64> = stats.gamma.iter().map(|g| g.arg()).collect();
    unwrap_phases(&mut y);
    Ok(y)
}

/// Maps a fitted phase model to the normalized-CFO report.
fn report(
    cfg: &LatticeConfig,
    method: Method,
    y0: f64,
    theta1: f64,
    theta0_unwrapped: f64,
    residuals: Vec<f64>,
) -> EstimateReport {
    let scale = cfg.n_sub as f64 / (2.0 * PI * cfg.m_samples as f64);
    let eps_hat = -scale * (y0 - theta1);
    EstimateReport {
        eps_hat,
        method,
        fit: PhaseFit {
            theta0: wrap_pi(theta0_unwrapped),
            theta1,
            residuals,
        },
        in_range: eps_hat.abs() <= cfg.eps_range() + 1e-12,
    }
}

/// Phase-differential CFO estimate: the slope is the mean of successive
/// unwrapped phase differences, which telescopes to
/// `(y[K-1] - y[0]) / (K-1)`.
pub fn estimate_pd(stats: &GammaStatistics, cfg: &LatticeConfig) -> Result<EstimateReport> {
    let y = unwrapped_angles(stats)?;
    let k = y.len();
    let slope = (y[k - 1] - y[0]) / (k as f64 - 1.0);
    let residuals = y
        .iter()
        .enumerate()
        .map(|(m, &v)| v - (y[0] + slope * m as f64))
        .collect();
    Ok(report(cfg, Method::Pd, y[0], slope, y[0] - slope, residuals))
}

/// Least-squares CFO estimate: fits `y[m] ~ a + b*m` by the normal
/// equations, reads the slope as `theta1` and `a - b` as `theta0`.
pub fn estimate_ls(stats: &GammaStatistics, cfg: &LatticeConfig) -> Result<EstimateReport> {
    let y = unwrapped_angles(stats)?;
    let k = y.len() as f64;
    let mean_m = (y.len() - 1) as f64 / 2.0;
    let mean_y = y.iter().sum::<f64>() / k;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (m, &v) in y.iter().enumerate() {
        let dm = m as f64 - mean_m;
        sxx += dm * dm;
        sxy += dm * (v - mean_y);
    }
    let b = sxy / sxx;
    let a = mean_y - b * mean_m;
    let residuals = y
        .iter()
        .enumerate()
        .map(|(m, &v)| v - (a + b * m as f64))
        .collect();
    Ok(report(cfg, Method::Ls, y[0], b, a - b, residuals))
}

/// Lower bound on the normalized-CFO estimation MSE at a linear SNR:
/// `n_sub / (2 * pi^2 * m_samples^2 * snr)`.
pub fn crlb(n_sub: usize, m_samples: usize, snr_linear: f64) -> Result<f64> {
    if !(snr_linear > 0.0) {
        return Err(HmctError::InvalidArgument(format!(
            "SNR must be positive, got {snr_linear}"
        )));
    }
    let n = n_sub as f64;
    let m = m_samples as f64;
    Ok(n / (2.0 * PI * PI * m * m * snr_linear))
}
