//! WSSUS doubly-dispersive channel, CFO injection, and AWGN.
//!
//! The channel is a tapped delay line at integer-sample delays with an
//! exponential power delay profile. Each tap is a stationary process with
//! U-shape (Jakes) Doppler spectrum, synthesized as a sum of oscillators
//! with random arrival angles and phases; the oscillator list doubles as
//! the realization's delay-Doppler content for analytic coupling
//! predictions.

use crate::error::{HmctError, Result};
use crate::lattice::{LatticeConfig, PrototypePulse};
use crate::modem::interference_coefficient;
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;

/// Oscillators per tap in the sum-of-sinusoids Doppler synthesis.
const N_OSC: usize = 32;

/// Second-order statistics of the scattering function: exponential power
/// delay profile times U-shape Doppler.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringProfile {
    /// Tap delays in samples.
    pub tap_delays: Vec<usize>,
    /// Per-tap average powers; sums to exactly 1.
    pub pdp: Vec<f64>,
    /// Exponential decay constant of the profile, in samples.
    pub tau_rms: f64,
    /// Maximum Doppler frequency in Hz.
    pub f_d: f64,
}

impl ScatteringProfile {
    /// Exponential profile over integer delays `0..num_taps` with decay
    /// `exp(-delay/tau_rms)`. The normalized powers sum to exactly 1.0:
    /// the last tap absorbs the rounding remainder.
    pub fn exponential(num_taps: usize, tau_rms: f64, f_d: f64) -> Result<Self> {
        if num_taps == 0 {
            return Err(HmctError::InvalidArgument(
                "profile needs at least one tap".into(),
            ));
        }
        if !(tau_rms > 0.0) {
            return Err(HmctError::InvalidArgument(format!(
                "tau_rms must be positive, got {tau_rms}"
            )));
        }
        if f_d < 0.0 {
            return Err(HmctError::InvalidArgument(format!(
                "f_d must be nonnegative, got {f_d}"
            )));
        }
        let raw: Vec<f64> = (0..num_taps)
            .map(|i| (-(i as f64) / tau_rms).exp())
            .collect();
        let total: f64 = raw.iter().sum();
        let mut pdp: Vec<f64> = raw.iter().map(|p| p / total).collect();
        let partial: f64 = pdp[..num_taps - 1].iter().sum();
        pdp[num_taps - 1] = 1.0 - partial;
        Ok(Self {
            tap_delays: (0..num_taps).collect(),
            pdp,
            tau_rms,
            f_d,
        })
    }

    /// Default doubly-dispersive profile: 8 taps, tau_rms of 2 samples, and
    /// a maximum Doppler of 0.01 cycles per sample at the given ts.
    pub fn default_dd(ts: f64) -> Self {
        Self::exponential(8, 2.0, 0.01 / ts).expect("default profile parameters are valid")
    }
}

/// One Doppler oscillator: a complex amplitude rotating at a fixed
/// normalized frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerAtom {
    /// Complex amplitude (magnitude and initial phase).
    pub amp: C64,
    /// Rotation frequency in cycles per sample, within [-f_d*ts, f_d*ts].
    pub freq: f64,
}

/// One tap of the delay line: its oscillator set and the sampled gain
/// trajectory they generate.
#[derive(Debug, Clone, PartialEq)]
pub struct TapProcess {
    /// Tap delay in samples.
    pub delay: usize,
    /// Average power of this tap.
    pub power: f64,
    /// Doppler oscillators; their superposition is `gains`.
    pub atoms: Vec<DopplerAtom>,
    /// Sampled complex gain per time index.
    pub gains: Vec<C64>,
}

/// One sampled channel realization: every tap's gain trajectory plus the
/// generating oscillators, immutable after creation.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Taps in delay order.
    pub taps: Vec<TapProcess>,
    /// Number of time samples each tap covers.
    pub len: usize,
    /// Seed that generated this realization.
    pub seed: u64,
}

impl ChannelRealization {
    /// The identity channel: a single unit-gain tap at delay zero.
    pub fn identity(len: usize) -> Self {
        Self {
            taps: vec![TapProcess {
                delay: 0,
                power: 1.0,
                atoms: vec![DopplerAtom {
                    amp: C64::new(1.0, 0.0),
                    freq: 0.0,
                }],
                gains: vec![C64::new(1.0, 0.0); len],
            }],
            len,
            seed: 0,
        }
    }
}

/// Samples one channel realization of the given length. Each tap sums
/// `N_OSC` oscillators with independent uniform arrival angles (mapped
/// through `cos` to a U-shape Doppler density) and uniform phases, scaled
/// so the tap's average power equals its profile entry. Deterministic per
/// seed.
pub fn realize(
    profile: &ScatteringProfile,
    length: usize,
    ts: f64,
    seed: u64,
) -> Result<ChannelRealization> {
    if profile.tap_delays.is_empty() || profile.tap_delays.len() != profile.pdp.len() {
        return Err(HmctError::InvalidArgument(
            "profile must carry matching nonempty delay and power lists".into(),
        ));
    }
    if length == 0 {
        return Err(HmctError::InvalidArgument(
            "realization length must be at least 1".into(),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let nu_max = profile.f_d * ts;
    let mut taps = Vec::with_capacity(profile.tap_delays.len());
    for (&delay, &power) in profile.tap_delays.iter().zip(&profile.pdp) {
        let scale = (power / N_OSC as f64).sqrt();
        let atoms: Vec<DopplerAtom> = (0..N_OSC)
            .map(|_| {
                let theta = rng.gen_range(0.0..2.0 * PI);
                let phi = rng.gen_range(0.0..2.0 * PI);
                DopplerAtom {
                    amp: C64::from_polar(scale, phi),
                    freq: nu_max * theta.cos(),
                }
            })
            .collect();
        let mut gains = vec![C64::new(0.0, 0.0); length];
        for atom in &atoms {
            let step = C64::from_polar(1.0, 2.0 * PI * atom.freq);
            let mut phasor = atom.amp;
            for g in &mut gains {
                *g += phasor;
                phasor *= step;
            }
        }
        taps.push(TapProcess {
            delay,
            power,
            atoms,
            gains,
        });
    }
    Ok(ChannelRealization {
        taps,
        len: length,
        seed,
    })
}

/// Applies the tapped delay line: `y[k] = sum_i h_i[k] * x[k - d_i]`, with
/// out-of-range input treated as zero. Output length equals input length.
pub fn apply_channel(x: &[C64], chan: &ChannelRealization) -> Result<Vec<C64>> {
    if chan.len < x.len() {
        return Err(HmctError::InvalidArgument(format!(
            "realization covers {} samples but signal has {}",
            chan.len,
            x.len()
        )));
    }
    let mut y = vec![C64::new(0.0, 0.0); x.len()];
    for tap in &chan.taps {
        for k in tap.delay..x.len() {
            y[k] += tap.gains[k] * x[k - tap.delay];
        }
    }
    Ok(y)
}

/// Injects a carrier frequency offset: `y[k] = x[k] * exp(-j*2*pi*df*k*ts)`.
/// A zero offset returns the input bit-exactly.
pub fn apply_cfo(x: &[C64], df: f64, ts: f64) -> Vec<C64> {
    if df == 0.0 {
        return x.to_vec();
    }
    x.iter()
        .enumerate()
        .map(|(k, &v)| v * C64::from_polar(1.0, -2.0 * PI * df * ts * k as f64))
        .collect()
}

/// Additive white Gaussian noise specification. The noise variance is
/// either given directly or derived from the measured signal power and the
/// target SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwgnSpec {
    /// Target signal-to-noise ratio in dB; may be infinite.
    pub snr_db: f64,
    /// Per-sample noise power. When `None`, it is derived as
    /// `mean(|x|^2) * 10^(-snr_db/10)`.
    pub sigma_w2: Option<f64>,
}

impl AwgnSpec {
    /// Resolves the per-sample noise variance for a given signal.
    pub fn noise_variance(&self, x: &[C64]) -> f64 {
        match self.sigma_w2 {
            Some(v) => v,
            None => {
                if self.snr_db.is_infinite() || x.is_empty() {
                    0.0
                } else {
                    let power: f64 =
                        x.iter().map(|v| v.norm_sqr()).sum::<f64>() / x.len() as f64;
                    power * f64::powf(10.0, -self.snr_db / 10.0)
                }
            }
        }
    }
}

/// Adds circular complex Gaussian noise of the spec's variance,
/// deterministically per seed. Infinite SNR (zero variance) returns the
/// input unchanged.
pub fn add_awgn(x: &[C64], spec: &AwgnSpec, seed: u64) -> Vec<C64> {
    let var = spec.noise_variance(x);
    if var == 0.0 {
        return x.to_vec();
    }
    let sigma = (var / 2.0).sqrt();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    x.iter()
        .map(|&v| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            v + C64::new(sigma * re, sigma * im)
        })
        .collect()
}

/// Desired-symbol gain at one lattice position: the diagonal coupling
/// coefficient of the channel-plus-CFO operator, carrying the
/// `exp(-j*2*pi*m*T'*df)` slot rotation and the ambiguity attenuation.
pub fn desired_gain(
    chan: &ChannelRealization,
    pulse: &PrototypePulse,
    cfg: &LatticeConfig,
    df: f64,
    slot: usize,
    subcarrier: usize,
) -> Result<C64> {
    interference_coefficient(chan, pulse, cfg, df, (slot, subcarrier), (slot, subcarrier))
}
