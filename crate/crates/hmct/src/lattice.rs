//! Hexagonal time-frequency lattice geometry and the prototype pulse.
//!
//! The lattice is described in samples: a symbol period of `m_samples`, an
//! FFT grid of `nfft` bins (so the subcarrier spacing is `1/(nfft*ts)` Hz),
//! and `n_sub` total subcarriers split evenly between the two sublattices.
//! The prototype pulse is a truncated, unit-energy discrete waveform whose
//! ambiguity function governs every inter-symbol coupling in the system.

use crate::error::{HmctError, Result};
use crate::C64;

/// Discrete hexagonal lattice geometry.
///
/// Invariants: `n_sub` and `m_samples` are even (the half-symbol shift must
/// land on a sample), and `n_sub/2 <= nfft` so each sublattice's subcarriers
/// fit the FFT grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConfig {
    /// Total subcarrier count over both sublattices.
    pub n_sub: usize,
    /// Symbol period in samples.
    pub m_samples: usize,
    /// FFT length; the subcarrier spacing is `1/(nfft*ts)`.
    pub nfft: usize,
    /// Sample period in seconds.
    pub ts: f64,
}

impl LatticeConfig {
    /// Builds a validated configuration.
    pub fn new(n_sub: usize, m_samples: usize, nfft: usize, ts: f64) -> Result<Self> {
        if n_sub == 0 || n_sub % 2 != 0 {
            return Err(HmctError::InvalidArgument(format!(
                "n_sub must be even and positive, got {n_sub}"
            )));
        }
        if m_samples == 0 || m_samples % 2 != 0 {
            return Err(HmctError::InvalidArgument(format!(
                "m_samples must be even and positive, got {m_samples}"
            )));
        }
        if nfft == 0 || n_sub / 2 > nfft {
            return Err(HmctError::InvalidArgument(format!(
                "need n_sub/2 <= nfft, got n_sub={n_sub}, nfft={nfft}"
            )));
        }
        if !(ts > 0.0) {
            return Err(HmctError::InvalidArgument(format!(
                "ts must be positive, got {ts}"
            )));
        }
        Ok(Self {
            n_sub,
            m_samples,
            nfft,
            ts,
        })
    }

    /// Default geometry: 40 subcarriers, 100-sample symbol period, 40-point
    /// FFT, 1 microsecond sampling.
    pub fn default_config() -> Self {
        Self {
            n_sub: 40,
            m_samples: 100,
            nfft: 40,
            ts: 1e-6,
        }
    }

    /// Subcarrier spacing in Hz.
    pub fn f_sub(&self) -> f64 {
        1.0 / (self.nfft as f64 * self.ts)
    }

    /// Symbol period in seconds.
    pub fn t_sym(&self) -> f64 {
        self.m_samples as f64 * self.ts
    }

    /// Spectral efficiency of the hexagonal lattice, 2/(T*F).
    pub fn rho(&self) -> f64 {
        2.0 * self.nfft as f64 / self.m_samples as f64
    }

    /// Normalized CFO corresponding to a frequency offset in Hz,
    /// eps = df*ts*n_sub/2.
    pub fn eps_from_df(&self, df: f64) -> f64 {
        df * self.ts * self.n_sub as f64 / 2.0
    }

    /// Frequency offset in Hz corresponding to a normalized CFO.
    pub fn df_from_eps(&self, eps: f64) -> f64 {
        2.0 * eps / (self.ts * self.n_sub as f64)
    }

    /// Half-width of the estimators' unambiguous range, n_sub/(2*m_samples).
    pub fn eps_range(&self) -> f64 {
        self.n_sub as f64 / (2.0 * self.m_samples as f64)
    }
}

/// Truncated, energy-normalized discrete prototype pulse.
#[derive(Debug, Clone, PartialEq)]
pub struct PrototypePulse {
    /// Pulse samples, `l_psi` of them, normalized to unit energy.
    pub samples: Vec<C64>,
    /// Gaussian width parameter in 1/seconds^2.
    pub alpha: f64,
    /// Pulse length in samples.
    pub l_psi: usize,
}

impl PrototypePulse {
    /// Total energy of the stored samples.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s.norm_sqr()).sum()
    }

    /// Scales the samples to unit energy. Skips the rescale when the energy
    /// is already within 1e-15 of one, making normalization idempotent at
    /// the bit level.
    pub fn normalize(&mut self) {
        let e = self.energy();
        if (e - 1.0).abs() > 1e-15 {
            let s = 1.0 / e.sqrt();
            for v in &mut self.samples {
                *v *= s;
            }
        }
    }
}

/// Builds the truncated Gaussian prototype pulse
/// `psi[k] = (2*alpha)^(1/4) * exp(-pi*alpha*((k - (l_psi-1)/2)*ts)^2)`,
/// renormalized to unit energy over the truncation window.
pub fn make_gaussian_pulse(cfg: &LatticeConfig, alpha: f64, l_psi: usize) -> Result<PrototypePulse> {
    if !(alpha > 0.0) {
        return Err(HmctError::InvalidArgument(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if l_psi == 0 {
        return Err(HmctError::InvalidArgument(
            "pulse length must be at least 1".into(),
        ));
    }
    let center = (l_psi as f64 - 1.0) / 2.0;
    let scale = (2.0 * alpha).powf(0.25);
    let samples: Vec<C64> = (0..l_psi)
        .map(|k| {
            let t = (k as f64 - center) * cfg.ts;
            C64::new(scale * (-std::f64::consts::PI * alpha * t * t).exp(), 0.0)
        })
        .collect();
    let mut pulse = PrototypePulse {
        samples,
        alpha,
        l_psi,
    };
    pulse.normalize();
    Ok(pulse)
}

/// Discrete ambiguity function
/// `A(tau, nu) = sum_k psi[k] * conj(psi[k - tau]) * exp(-j*2*pi*nu*k)`
/// with integer `tau` in samples and `nu` in cycles per sample. Returns
/// exactly zero when `|tau| >= l_psi` (no overlap).
pub fn ambiguity(pulse: &PrototypePulse, tau: i64, nu: f64) -> C64 {
    let l = pulse.l_psi as i64;
    if tau >= l || tau <= -l {
        return C64::new(0.0, 0.0);
    }
    let lo = tau.max(0);
    let hi = (l + tau).min(l);
    let mut acc = C64::new(0.0, 0.0);
    for k in lo..hi {
        let phase = -2.0 * std::f64::consts::PI * nu * k as f64;
        acc += pulse.samples[k as usize]
            * pulse.samples[(k - tau) as usize].conj()
            * C64::from_polar(1.0, phase);
    }
    acc
}
