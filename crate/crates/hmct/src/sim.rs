//! Monte Carlo harness: per-trial pipeline, seeded stream derivation,
//! sweep execution over (channel, SNR) cells, and CSV emission.
//!
//! Every trial derives its RNG streams from (master_seed, trial_index)
//! through purpose tags, so trials are order-independent work items and a
//! sweep's output is reproducible bit for bit regardless of scheduling.
//! The noise and offset streams do not depend on the channel family, which
//! keeps cross-channel comparisons paired.

use crate::channel::{
    add_awgn, apply_cfo, apply_channel, realize, AwgnSpec, ScatteringProfile,
};
use crate::error::{HmctError, Result};
use crate::estimator::{compute_gamma, crlb, estimate_ls, estimate_pd, Method};
use crate::lattice::LatticeConfig;
use crate::modem::{demodulate_fast, modulate, Sublattice};
use crate::preamble::{build_preamble, default_taps, generate_pn};
use crate::{db_to_linear, lattice::make_gaussian_pulse};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::path::{Path, PathBuf};

const STREAM_EPS: u64 = 1;
const STREAM_CHANNEL: u64 = 2;
const STREAM_NOISE: u64 = 3;

/// splitmix64 finalizer; bijective on u64.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Base seed of one trial; every stream of the trial derives from it.
fn trial_seed(master: u64, trial_index: u64) -> u64 {
    splitmix64(splitmix64(master).wrapping_add(trial_index))
}

/// Seed of one purpose-tagged stream within a trial.
fn purpose_seed(trial_seed: u64, purpose: u64) -> u64 {
    splitmix64(trial_seed.wrapping_add(purpose))
}

/// How the true normalized CFO is chosen per trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsMode {
    /// Every trial uses this value.
    Fixed(f64),
    /// Drawn uniformly over +/- `fraction` of the valid range; the
    /// fraction must stay within (0, 0.9] so draws avoid the aliasing
    /// edge.
    Uniform {
        /// Fraction of the valid range covered by the draw.
        fraction: f64,
    },
}

/// Channel family simulated per trial.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelKind {
    /// Additive noise only.
    Awgn,
    /// Doubly-dispersive fading over the given profile, plus noise.
    Dd(ScatteringProfile),
}

impl ChannelKind {
    /// Tag used in trial results and CSV rows.
    pub fn tag(&self) -> &'static str {
        match self {
            ChannelKind::Awgn => "awgn",
            ChannelKind::Dd(_) => "dd",
        }
    }
}

/// Full description of one Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Lattice geometry.
    pub lattice: LatticeConfig,
    /// Pulse decay-rate parameter; the balanced default is F/T.
    pub alpha: f64,
    /// Pulse truncation length in samples.
    pub l_psi: usize,
    /// PN register degree.
    pub pn_degree: u32,
    /// PN register load; low `pn_degree` bits, nonzero.
    pub pn_seed: u32,
    /// Training sequence length.
    pub n_p: usize,
    /// Symbol slot carrying the preamble.
    pub preamble_slot: usize,
    /// Channel family.
    pub channel: ChannelKind,
    /// SNR grid in dB.
    pub snr_db_list: Vec<f64>,
    /// Trials per (channel, SNR) cell.
    pub trials: usize,
    /// True-CFO selection mode.
    pub eps_mode: EpsMode,
    /// Root of every RNG stream.
    pub master_seed: u64,
    /// Number of correlation lags fed to the estimators.
    pub m_max: usize,
    /// CSV destination; `None` keeps results in memory only.
    pub output: Option<PathBuf>,
}

impl Default for SimConfig {
    fn default() -> Self {
        let lattice = LatticeConfig::default_config();
        let alpha = lattice.f_sub() / lattice.t_sym();
        Self {
            lattice,
            alpha,
            l_psi: 600,
            pn_degree: 5,
            pn_seed: 0b10101,
            n_p: 20,
            preamble_slot: 1,
            channel: ChannelKind::Awgn,
            snr_db_list: vec![0.0, 5.0, 10.0, 15.0, 20.0],
            trials: 2000,
            eps_mode: EpsMode::Uniform { fraction: 0.9 },
            master_seed: 0,
            m_max: 10,
            output: None,
        }
    }
}

impl SimConfig {
    /// Checks the cross-field constraints the per-module constructors
    /// cannot see.
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(HmctError::Config("trials must be at least 1".into()));
        }
        if self.m_max < 2 {
            return Err(HmctError::Config(
                "m_max must be at least 2 for the slope fits".into(),
            ));
        }
        if let EpsMode::Uniform { fraction } = self.eps_mode {
            if !(fraction > 0.0 && fraction <= 0.9) {
                return Err(HmctError::Config(format!(
                    "uniform CFO fraction {fraction} outside (0, 0.9]"
                )));
            }
        }
        if self.snr_db_list.is_empty() {
            return Err(HmctError::Config("empty SNR list".into()));
        }
        Ok(())
    }
}

/// One Monte Carlo trial's truth and estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    /// True normalized CFO applied to this trial.
    pub eps_true: f64,
    /// Phase-differential estimate.
    pub eps_hat_pd: f64,
    /// Least-squares estimate.
    pub eps_hat_ls: f64,
    /// Cell SNR in dB.
    pub snr_db: f64,
    /// Channel family tag.
    pub channel: &'static str,
    /// Base seed all of this trial's RNG streams derive from.
    pub seed: u64,
}

/// Runs one trial: preamble grid, modulation, channel, CFO, noise, fast
/// demodulation of both sublattices, correlation, both estimators.
/// Deterministic in (config, snr_db, trial_index).
pub fn run_trial(cfg: &SimConfig, snr_db: f64, trial_index: u64) -> Result<TrialResult> {
    cfg.validate()?;
    let lattice = &cfg.lattice;
    let pulse = make_gaussian_pulse(lattice, cfg.alpha, cfg.l_psi)?;
    let pn = generate_pn(
        cfg.pn_degree,
        &default_taps(cfg.pn_degree)?,
        cfg.pn_seed,
        cfg.n_p,
    )?;
    let (frame, grid) = build_preamble(&pn, lattice, cfg.preamble_slot)?;
    let x = modulate(&grid, &pulse, lattice)?;
    let base = trial_seed(cfg.master_seed, trial_index);
    let eps = match cfg.eps_mode {
        EpsMode::Fixed(e) => e,
        EpsMode::Uniform { fraction } => {
            let mut rng = ChaCha12Rng::seed_from_u64(purpose_seed(base, STREAM_EPS));
            let half = fraction * lattice.eps_range();
            rng.gen_range(-half..=half)
        }
    };
    let faded = match &cfg.channel {
        ChannelKind::Awgn => x,
        ChannelKind::Dd(profile) => {
            let chan = realize(
                profile,
                x.len(),
                lattice.ts,
                purpose_seed(base, STREAM_CHANNEL),
            )?;
            apply_channel(&x, &chan)?
        }
    };
    let offset = apply_cfo(&faded, lattice.df_from_eps(eps), lattice.ts);
    let spec = AwgnSpec {
        snr_db,
        sigma_w2: Some(db_to_linear(-snr_db) * frame.sigma_s2),
    };
    let noisy = add_awgn(&offset, &spec, purpose_seed(base, STREAM_NOISE));
    let de = demodulate_fast(&noisy, &pulse, lattice, cfg.preamble_slot, Sublattice::A)?;
    let dodd = demodulate_fast(&noisy, &pulse, lattice, cfg.preamble_slot, Sublattice::B)?;
    let stats = compute_gamma(&de, &dodd, &frame, cfg.m_max)?;
    let pd = estimate_pd(&stats, lattice)?;
    let ls = estimate_ls(&stats, lattice)?;
    Ok(TrialResult {
        eps_true: eps,
        eps_hat_pd: pd.eps_hat,
        eps_hat_ls: ls.eps_hat,
        snr_db,
        channel: cfg.channel.tag(),
        seed: base,
    })
}

/// Per-method mean squared error of one (channel, SNR) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    /// Cell SNR in dB.
    pub snr_db: f64,
    /// Channel family tag.
    pub channel: &'static str,
    /// Number of trials averaged.
    pub trials: usize,
    /// Phase-differential mean squared error.
    pub mse_pd: f64,
    /// Least-squares mean squared error.
    pub mse_ls: f64,
    /// Estimation-variance lower bound at this SNR.
    pub crlb: f64,
}

/// Index-ordered reduction shared by the parallel and sequential cell
/// runners; summation order is fixed so both produce identical bits.
fn reduce_cell(cfg: &SimConfig, snr_db: f64, trials: Vec<TrialResult>) -> Result<CellResult> {
    let n = trials.len();
    let mut se_pd = 0.0;
    let mut se_ls = 0.0;
    for t in &trials {
        se_pd += (t.eps_hat_pd - t.eps_true) * (t.eps_hat_pd - t.eps_true);
        se_ls += (t.eps_hat_ls - t.eps_true) * (t.eps_hat_ls - t.eps_true);
    }
    let bound = crlb(
        cfg.lattice.n_sub,
        cfg.lattice.m_samples,
        db_to_linear(snr_db),
    )?;
    Ok(CellResult {
        snr_db,
        channel: cfg.channel.tag(),
        trials: n,
        mse_pd: se_pd / n as f64,
        mse_ls: se_ls / n as f64,
        crlb: bound,
    })
}

/// Runs every trial of one cell; trial execution is parallel when the
/// `parallel` feature is active.
pub fn run_cell(cfg: &SimConfig, snr_db: f64) -> Result<CellResult> {
    cfg.validate()?;
    #[cfg(feature = "parallel")]
    let trials: Result<Vec<TrialResult>> = {
        use rayon::prelude::*;
        (0..cfg.trials as u64)
            .into_par_iter()
            .map(|i| run_trial(cfg, snr_db, i))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let trials: Result<Vec<TrialResult>> = (0..cfg.trials as u64)
        .map(|i| run_trial(cfg, snr_db, i))
        .collect();
    reduce_cell(cfg, snr_db, trials?)
}

/// Sequential twin of [`run_cell`]; output is identical bit for bit.
pub fn run_cell_sequential(cfg: &SimConfig, snr_db: f64) -> Result<CellResult> {
    cfg.validate()?;
    let trials: Result<Vec<TrialResult>> = (0..cfg.trials as u64)
        .map(|i| run_trial(cfg, snr_db, i))
        .collect();
    reduce_cell(cfg, snr_db, trials?)
}

/// Runs the whole SNR grid and writes the CSV when an output path is
/// configured.
pub fn run_sweep(cfg: &SimConfig) -> Result<Vec<CellResult>> {
    cfg.validate()?;
    let mut cells = Vec::with_capacity(cfg.snr_db_list.len());
    for &snr in &cfg.snr_db_list {
        cells.push(run_cell(cfg, snr)?);
    }
    if let Some(path) = &cfg.output {
        write_csv(path, &cells)?;
    }
    Ok(cells)
}

/// Renders cells as CSV: header `snr_db,channel,method,trials,mse,crlb`,
/// one row per (cell, method), measured floats with 9 significant digits.
pub fn csv_string(cells: &[CellResult]) -> String {
    let mut s = String::from("snr_db,channel,method,trials,mse,crlb\n");
    for c in cells {
        for (method, mse) in [(Method::Pd, c.mse_pd), (Method::Ls, c.mse_ls)] {
            s.push_str(&format!(
                "{},{},{},{},{:.8e},{:.8e}\n",
                c.snr_db, c.channel, method, c.trials, mse, c.crlb
            ));
        }
    }
    s
}

/// Writes the CSV rendering of `cells` to `path`.
pub fn write_csv(path: &Path, cells: &[CellResult]) -> Result<()> {
    std::fs::write(path, csv_string(cells))?;
    Ok(())
}

/// Parses the flat `key = value` config format (one pair per line, `#`
/// comments, comma-separated lists) over the defaults. Unknown keys are
/// rejected.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let defaults = SimConfig::default();
    let mut n_sub = defaults.lattice.n_sub;
    let mut m_samples = defaults.lattice.m_samples;
    let mut nfft = defaults.lattice.nfft;
    let mut ts = defaults.lattice.ts;
    let mut alpha: Option<f64> = None;
    let mut cfg = defaults;
    let mut channel_dd = false;
    let mut dd_taps = 8usize;
    let mut dd_tau_rms = 2.0f64;
    let mut dd_doppler = 0.01f64;

    fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
        value.parse().map_err(|_| {
            HmctError::Config(format!("cannot parse {key} value {value:?}"))
        })
    }

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            HmctError::Config(format!("line {}: expected key=value, got {raw:?}", lineno + 1))
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "n_sub" => n_sub = parse(key, value)?,
            "m_samples" => m_samples = parse(key, value)?,
            "nfft" => nfft = parse(key, value)?,
            "ts" => ts = parse(key, value)?,
            "alpha" => alpha = Some(parse(key, value)?),
            "l_psi" => cfg.l_psi = parse(key, value)?,
            "pn_degree" => cfg.pn_degree = parse(key, value)?,
            "pn_seed" => cfg.pn_seed = parse(key, value)?,
            "n_p" => cfg.n_p = parse(key, value)?,
            "preamble_slot" => cfg.preamble_slot = parse(key, value)?,
            "channel" => match value {
                "awgn" => channel_dd = false,
                "dd" => channel_dd = true,
                _ => {
                    return Err(HmctError::Config(format!(
                        "channel must be awgn or dd, got {value:?}"
                    )))
                }
            },
            "dd_taps" => dd_taps = parse(key, value)?,
            "dd_tau_rms" => dd_tau_rms = parse(key, value)?,
            "dd_doppler" => dd_doppler = parse(key, value)?,
            "snr_db_list" => {
                cfg.snr_db_list = value
                    .split(',')
                    .map(|v| parse("snr_db_list", v.trim()))
                    .collect::<Result<Vec<f64>>>()?;
            }
            "trials" => cfg.trials = parse(key, value)?,
            "eps" => cfg.eps_mode = EpsMode::Fixed(parse(key, value)?),
            "eps_fraction" => {
                cfg.eps_mode = EpsMode::Uniform {
                    fraction: parse(key, value)?,
                }
            }
            "master_seed" => cfg.master_seed = parse(key, value)?,
            "m_max" => cfg.m_max = parse(key, value)?,
            "out" => cfg.output = Some(PathBuf::from(value)),
            _ => {
                return Err(HmctError::Config(format!(
                    "line {}: unknown key {key:?}",
                    lineno + 1
                )))
            }
        }
    }
    cfg.lattice = LatticeConfig::new(n_sub, m_samples, nfft, ts)?;
    cfg.alpha = alpha.unwrap_or_else(|| cfg.lattice.f_sub() / cfg.lattice.t_sym());
    cfg.channel = if channel_dd {
        ChannelKind::Dd(ScatteringProfile::exponential(
            dd_taps,
            dd_tau_rms,
            dd_doppler / cfg.lattice.ts,
        )?)
    } else {
        ChannelKind::Awgn
    };
    cfg.validate()?;
    Ok(cfg)
}
