//! Modulation onto the hexagonal lattice, matched-filter demodulation, and
//! the equivalent fast fold+FFT demodulator.
//!
//! Sublattice A places symbol (m, 2q) at time offset `m*m_samples` and
//! frequency `q/nfft` cycles per sample; sublattice B places (m, 2q+1) at
//! `m*m_samples + m_samples/2` and `(q+1/2)/nfft`. The fast demodulator
//! multiplies the received window by the conjugate pulse, folds it with
//! period `nfft`, and takes one FFT; a pre-rotation moves sublattice B's
//! half-bin offset onto the FFT grid and a per-bin post-rotation restores
//! the window's absolute-time phase.

use crate::channel::ChannelRealization;
use crate::error::{HmctError, Result};
use crate::lattice::{ambiguity, LatticeConfig, PrototypePulse};
use crate::C64;
use std::f64::consts::PI;

/// The two rectangular sublattices of the hexagonal grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sublattice {
    /// Even raw subcarrier indices: integer time/frequency grid.
    A,
    /// Odd raw subcarrier indices: half-symbol, half-bin shifted grid.
    B,
}

/// Complex symbols on the lattice, indexed by (symbol slot, raw subcarrier).
///
/// Unoccupied positions are exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolGrid {
    /// Number of symbol slots.
    pub n_frames: usize,
    /// Total raw subcarrier count (both sublattices interleaved).
    pub n_sub: usize,
    /// Nominal per-symbol power sigma_c^2 of the generating constellation.
    pub avg_power: f64,
    symbols: Vec<C64>,
}

impl SymbolGrid {
    /// All-zero grid.
    pub fn zeros(n_frames: usize, n_sub: usize, avg_power: f64) -> Self {
        Self {
            n_frames,
            n_sub,
            avg_power,
            symbols: vec![C64::new(0.0, 0.0); n_frames * n_sub],
        }
    }

    /// Writes one symbol; indices must lie on the grid.
    pub fn set(&mut self, m: usize, n: usize, value: C64) -> Result<()> {
        if m >= self.n_frames || n >= self.n_sub {
            return Err(HmctError::InvalidArgument(format!(
                "grid index ({m}, {n}) outside {}x{}",
                self.n_frames, self.n_sub
            )));
        }
        self.symbols[m * self.n_sub + n] = value;
        Ok(())
    }

    /// Reads one symbol (zero when unoccupied).
    pub fn get(&self, m: usize, n: usize) -> C64 {
        self.symbols[m * self.n_sub + n]
    }

    /// Iterates over nonzero symbols as (slot, raw subcarrier, value).
    pub fn occupied(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.symbols.iter().enumerate().filter_map(|(i, &c)| {
            if c == C64::new(0.0, 0.0) {
                None
            } else {
                Some((i / self.n_sub, i % self.n_sub, c))
            }
        })
    }
}

/// Time offset in samples of a slot on one sublattice.
fn slot_start(cfg: &LatticeConfig, slot: usize, sub: Sublattice) -> usize {
    match sub {
        Sublattice::A => slot * cfg.m_samples,
        Sublattice::B => slot * cfg.m_samples + cfg.m_samples / 2,
    }
}

/// Subcarrier frequency in cycles per sample for active index q on one
/// sublattice.
fn subcarrier_freq(cfg: &LatticeConfig, q: usize, sub: Sublattice) -> f64 {
    match sub {
        Sublattice::A => q as f64 / cfg.nfft as f64,
        Sublattice::B => (q as f64 + 0.5) / cfg.nfft as f64,
    }
}

/// Raw subcarrier index decomposed into (sublattice, active index).
fn split_raw(n: usize) -> (Sublattice, usize) {
    if n % 2 == 0 {
        (Sublattice::A, n / 2)
    } else {
        (Sublattice::B, n / 2)
    }
}

/// Synthesizes the baseband signal
/// `x[k] = sum c_{m,n} * psi[k - t0(m,n)] * exp(j*2*pi*f(n)*k)` over all
/// occupied grid positions. Output length is
/// `m_samples * n_frames + l_psi`.
pub fn modulate(
    grid: &SymbolGrid,
    pulse: &PrototypePulse,
    cfg: &LatticeConfig,
) -> Result<Vec<C64>> {
    if grid.n_sub != cfg.n_sub {
        return Err(HmctError::InvalidArgument(format!(
            "grid carries {} subcarriers but config expects {}",
            grid.n_sub, cfg.n_sub
        )));
    }
    if grid.n_frames == 0 {
        return Err(HmctError::InvalidArgument("grid has no symbol slots".into()));
    }
    let len = cfg.m_samples * grid.n_frames + pulse.l_psi;
    let mut x = vec![C64::new(0.0, 0.0); len];
    for (m, n, c) in grid.occupied() {
        let (sub, q) = split_raw(n);
        let t0 = slot_start(cfg, m, sub);
        let f = subcarrier_freq(cfg, q, sub);
        for (kp, &p) in pulse.samples.iter().enumerate() {
            let k = t0 + kp;
            x[k] += c * p * C64::from_polar(1.0, 2.0 * PI * f * k as f64);
        }
    }
    Ok(x)
}

/// Matched-filter demodulation of one slot on one sublattice by direct
/// inner products: `c_hat[q] = sum_k r[k] * conj(psi[k - t0]) *
/// exp(-j*2*pi*f(q)*k)` over the pulse window. Returns `n_sub/2` values.
pub fn demodulate_naive(
    r: &[C64],
    pulse: &PrototypePulse,
    cfg: &LatticeConfig,
    slot: usize,
    sub: Sublattice,
) -> Result<Vec<C64>> {
    let t0 = slot_start(cfg, slot, sub);
    if r.len() < t0 + pulse.l_psi {
        return Err(HmctError::InvalidArgument(format!(
            "signal of {} samples cannot cover slot window [{t0}, {})",
            r.len(),
            t0 + pulse.l_psi
        )));
    }
    let half = cfg.n_sub / 2;
    let mut out = Vec::with_capacity(half);
    for q in 0..half {
        let f = subcarrier_freq(cfg, q, sub);
        let mut acc = C64::new(0.0, 0.0);
        for (kp, &p) in pulse.samples.iter().enumerate() {
            let k = t0 + kp;
            acc += r[k] * p.conj() * C64::from_polar(1.0, -2.0 * PI * f * k as f64);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Number of pulse segments superimposed by the fold, `ceil(l_psi / nfft)`.
pub fn fold_count(pulse: &PrototypePulse, cfg: &LatticeConfig) -> usize {
    pulse.l_psi.div_ceil(cfg.nfft)
}

/// Fast demodulation of one slot: Hadamard product with the conjugate
/// pulse, fold with period `nfft`, one `nfft`-point FFT, then a per-bin
/// rotation accounting for the window's absolute start time. Sublattice B
/// is pre-rotated by `exp(-j*pi*k/nfft)` to land its half-bin offset on the
/// FFT grid. Equals [`demodulate_naive`] to floating-point precision.
pub fn demodulate_fast(
    r: &[C64],
    pulse: &PrototypePulse,
    cfg: &LatticeConfig,
    slot: usize,
    sub: Sublattice,
) -> Result<Vec<C64>> {
    let t0 = slot_start(cfg, slot, sub);
    if r.len() < t0 + pulse.l_psi {
        return Err(HmctError::InvalidArgument(format!(
            "signal of {} samples cannot cover slot window [{t0}, {})",
            r.len(),
            t0 + pulse.l_psi
        )));
    }
    let nfft = cfg.nfft;
    let mut folded = vec![C64::new(0.0, 0.0); nfft];
    for kp in 0..pulse.l_psi {
        let mut v = r[t0 + kp] * pulse.samples[kp].conj();
        if sub == Sublattice::B {
            v *= C64::from_polar(1.0, -PI * kp as f64 / nfft as f64);
        }
        folded[kp % nfft] += v;
    }
    let fft = rustfft::FftPlanner::new().plan_fft_forward(nfft);
    fft.process(&mut folded);
    let half = cfg.n_sub / 2;
    let mut out = Vec::with_capacity(half);
    for (q, &bin) in folded.iter().take(half).enumerate() {
        let f = subcarrier_freq(cfg, q, sub);
        out.push(bin * C64::from_polar(1.0, -2.0 * PI * f * t0 as f64));
    }
    Ok(out)
}

/// Coupling coefficient of the channel-plus-CFO operator between two lattice
/// positions: the demodulated response at `to = (m, n)` to a unit symbol
/// transmitted at `from = (m', n')`, evaluated by summing the pulse
/// ambiguity function over the realization's delay-Doppler atoms. The
/// diagonal `from == to` case is the desired-symbol gain.
pub fn interference_coefficient(
    chan: &ChannelRealization,
    pulse: &PrototypePulse,
    cfg: &LatticeConfig,
    df: f64,
    from: (usize, usize),
    to: (usize, usize),
) -> Result<C64> {
    if from.1 >= cfg.n_sub || to.1 >= cfg.n_sub {
        return Err(HmctError::InvalidArgument(format!(
            "subcarrier index outside [0, {}): from {} to {}",
            cfg.n_sub, from.1, to.1
        )));
    }
    let (sub_from, q_from) = split_raw(from.1);
    let (sub_to, q_to) = split_raw(to.1);
    let t_from = slot_start(cfg, from.0, sub_from) as f64;
    let t_to = slot_start(cfg, to.0, sub_to) as f64;
    let f_from = subcarrier_freq(cfg, q_from, sub_from);
    let f_to = subcarrier_freq(cfg, q_to, sub_to);
    let delta = df * cfg.ts;
    let mut acc = C64::new(0.0, 0.0);
    for tap in &chan.taps {
        let tau = tap.delay as f64 + t_from - t_to;
        let tau_i = tau as i64;
        for atom in &tap.atoms {
            let nu = f_to - f_from + delta - atom.freq;
            let phase = -2.0 * PI * (f_from * tap.delay as f64 + nu * t_to);
            acc += atom.amp
                * C64::from_polar(1.0, phase)
                * ambiguity(pulse, tau_i, -nu).conj();
        }
    }
    Ok(acc)
}
