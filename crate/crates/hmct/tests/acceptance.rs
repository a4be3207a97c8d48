//! Acceptance gate: one end-to-end check per delivered guarantee, each
//! printing a single PASS/FAIL line with its measured value. The target
//! fails if any check fails, so the table doubles as the release gate.
//!
//! Several checks assert idealized noiseless exactness that the shipped
//! estimator does not reach: the hexagonal lattice is nonorthogonal on
//! purpose, and the paired preamble turns part of the inter-carrier
//! leakage into a coherent phase shift of the correlation statistic. The
//! resulting offset bias (about 2e-2 at the defaults) is structural, not a
//! numerical defect; those checks stay red by design and the module unit
//! tests pin the honest floor instead.

use std::f64::consts::PI;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use hmct::{
    ambiguity, apply_cfo, apply_channel, build_preamble, compute_gamma, csv_string,
    default_taps, demodulate_fast, demodulate_naive, estimate_ls, estimate_pd, generate_pn,
    make_gaussian_pulse, modulate, realize, run_cell, run_trial, run_sweep, unwrap_phases,
    wrap_pi, C64, ChannelKind, ChannelRealization, EpsMode, GammaStatistics, LatticeConfig,
    ScatteringProfile, SimConfig, Sublattice, SymbolGrid,
};
use hmct::channel::{DopplerAtom, TapProcess};

/// Collects check outcomes and renders the PASS/FAIL table.
struct Gate {
    lines: Vec<String>,
    failures: Vec<String>,
}

impl Gate {
    fn new() -> Self {
        Self {
            lines: Vec::new(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, pass: bool, detail: String) {
        let line = format!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        println!("{line}");
        self.lines.push(line.clone());
        if !pass {
            self.failures.push(line);
        }
    }
}

fn default_lattice() -> LatticeConfig {
    LatticeConfig::default_config()
}

fn balanced_alpha(cfg: &LatticeConfig) -> f64 {
    cfg.f_sub() / cfg.t_sym()
}

/// Noiseless preamble chain over an optional channel realization: modulate,
/// channel, CFO, fast-demodulate both sublattices, correlate.
fn noiseless_gamma(eps: f64, chan: Option<&ChannelRealization>) -> GammaStatistics {
    let cfg = default_lattice();
    let pulse = make_gaussian_pulse(&cfg, balanced_alpha(&cfg), 600).unwrap();
    let taps = default_taps(5).unwrap();
    let pn = generate_pn(5, &taps, 0b10101, 20).unwrap();
    let (frame, grid) = build_preamble(&pn, &cfg, 1).unwrap();
    let x = modulate(&grid, &pulse, &cfg).unwrap();
    let through = match chan {
        Some(c) => apply_channel(&x, c).unwrap(),
        None => x,
    };
    let y = apply_cfo(&through, cfg.df_from_eps(eps), cfg.ts);
    let da = demodulate_fast(&y, &pulse, &cfg, frame.slot, Sublattice::A).unwrap();
    let db = demodulate_fast(&y, &pulse, &cfg, frame.slot, Sublattice::B).unwrap();
    compute_gamma(&da, &db, &frame, 10).unwrap()
}

/// Static two-tap delay line: unit main tap plus one attenuated echo.
fn two_tap_channel(len: usize, delay: usize, amp: f64) -> ChannelRealization {
    let tap = |d: usize, a: f64| TapProcess {
        delay: d,
        power: a * a,
        atoms: vec![DopplerAtom {
            amp: C64::new(a, 0.0),
            freq: 0.0,
        }],
        gains: vec![C64::new(a, 0.0); len],
    };
    ChannelRealization {
        taps: vec![tap(0, 1.0), tap(delay, amp)],
        len,
        seed: 0,
    }
}

/// Noiseless single trial at a fixed offset through the production path.
fn noiseless_trial(eps: f64) -> hmct::TrialResult {
    let cfg = SimConfig {
        trials: 1,
        snr_db_list: vec![f64::INFINITY],
        eps_mode: EpsMode::Fixed(eps),
        master_seed: 7,
        ..SimConfig::default()
    };
    run_trial(&cfg, f64::INFINITY, 0).unwrap()
}

/// Bessel J0 by its power series; the arguments stay below 7 where the
/// series is numerically clean.
fn bessel_j0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut acc = 1.0;
    for m in 1..60 {
        term *= -q / ((m * m) as f64);
        acc += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    acc
}

/// Equivalence of the folded-FFT demodulator with direct inner products
/// over randomized geometries and payloads.
fn check_fast_demod_equivalence(g: &mut Gate) {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for it in 0..100 {
        let n_sub = [8usize, 16, 40][it % 3];
        let l_psi = [64usize, 600][(it / 3) % 2];
        let m_samples = 5 * n_sub / 2;
        let cfg = LatticeConfig::new(n_sub, m_samples, n_sub, 1e-6).unwrap();
        let pulse = make_gaussian_pulse(&cfg, balanced_alpha(&cfg), l_psi).unwrap();
        let mut grid = SymbolGrid::zeros(2, n_sub, 1.0);
        let mut occupied = false;
        for n in 0..n_sub {
            if rng.gen_bool(0.5) {
                let slot = rng.gen_range(0..2);
                let v = C64::from_polar(1.0, rng.gen_range(-PI..PI));
                grid.set(slot, n, v).unwrap();
                occupied = true;
            }
        }
        if !occupied {
            grid.set(0, 0, C64::new(1.0, 0.0)).unwrap();
        }
        let x = modulate(&grid, &pulse, &cfg).unwrap();
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for slot in 0..2 {
            for sub in [Sublattice::A, Sublattice::B] {
                let naive = demodulate_naive(&x, &pulse, &cfg, slot, sub).unwrap();
                let fast = demodulate_fast(&x, &pulse, &cfg, slot, sub).unwrap();
                for (a, b) in naive.iter().zip(&fast) {
                    num = num.max((a - b).norm());
                    den = den.max(a.norm());
                }
            }
        }
        worst = worst.max(num / den);
    }
    let secs = start.elapsed().as_secs_f64();
    g.check(
        "fast-demod-equivalence",
        worst < 1e-9 && secs < 10.0,
        format!("max relative deviation {worst:.3e} over 100 random configs (need < 1e-9) in {secs:.2} s (need < 10 s)"),
    );
}

/// Demodulated desired-symbol response to a pure frequency offset: slot-
/// proportional phase plus the pulse's self-ambiguity attenuation.
fn check_cfo_rotation_law(g: &mut Gate) {
    let cfg = default_lattice();
    let pulse = make_gaussian_pulse(&cfg, balanced_alpha(&cfg), 600).unwrap();
    let t_slot = cfg.m_samples as f64 * cfg.ts;
    let mut worst_arg = 0.0f64;
    let mut worst_mag = 0.0f64;
    for (slot, n_raw) in [(0usize, 0usize), (0, 6), (1, 6), (1, 18), (2, 0), (2, 18)] {
        let q = n_raw / 2;
        let mut grid = SymbolGrid::zeros(3, cfg.n_sub, 1.0);
        grid.set(slot, n_raw, C64::new(1.0, 0.0)).unwrap();
        let x = modulate(&grid, &pulse, &cfg).unwrap();
        let reference = demodulate_fast(&x, &pulse, &cfg, slot, Sublattice::A).unwrap()[q];
        for df in [-3000.0, -1200.0, 700.0, 2500.0] {
            let y = apply_cfo(&x, df, cfg.ts);
            let shifted = demodulate_fast(&y, &pulse, &cfg, slot, Sublattice::A).unwrap()[q];
            let ratio = shifted / reference;
            let amb = ambiguity(&pulse, 0, df * cfg.ts);
            let expected_arg = wrap_pi(-2.0 * PI * slot as f64 * t_slot * df + amb.arg());
            worst_arg = worst_arg.max(wrap_pi(ratio.arg() - expected_arg).abs());
            worst_mag = worst_mag.max((ratio.norm() - amb.norm()).abs());
        }
    }
    g.check(
        "cfo-rotation-law",
        worst_arg < 1e-6 && worst_mag < 1e-6,
        format!("worst phase error {worst_arg:.3e} rad, worst magnitude error {worst_mag:.3e} (need < 1e-6)"),
    );
}

/// Noiseless estimate accuracy across the offset range via the production
/// trial path.
fn check_noiseless_grid_consistency(g: &mut Gate) {
    let start = Instant::now();
    let mut worst_pd = 0.0f64;
    let mut worst_ls = 0.0f64;
    for i in 0..21 {
        let eps = -0.18 + 0.018 * i as f64;
        let t = noiseless_trial(eps);
        worst_pd = worst_pd.max((t.eps_hat_pd - eps).abs());
        worst_ls = worst_ls.max((t.eps_hat_ls - eps).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    g.check(
        "noiseless-grid-consistency",
        worst_pd < 1e-3 && worst_ls < 1e-3 && secs < 5.0,
        format!("max error pd {worst_pd:.3e}, ls {worst_ls:.3e} over 21 offsets (need < 1e-3) in {secs:.2} s (need < 5 s)"),
    );
}

/// MSE within [1x, 4x] of the variance bound over additive noise at a
/// fixed offset; also reports whether the bound is respected from below.
fn check_awgn_crlb(g: &mut Gate) {
    let start = Instant::now();
    let cfg = SimConfig {
        trials: 2000,
        eps_mode: EpsMode::Fixed(0.05),
        master_seed: 7,
        snr_db_list: vec![10.0, 15.0, 20.0],
        ..SimConfig::default()
    };
    let mut ratios = Vec::new();
    for &snr in &cfg.snr_db_list {
        let cell = run_cell(&cfg, snr).unwrap();
        ratios.push((snr, cell.mse_pd / cell.crlb, cell.mse_ls / cell.crlb));
    }
    let secs = start.elapsed().as_secs_f64();
    let within = ratios
        .iter()
        .all(|&(_, rp, rl)| (1.0..=4.0).contains(&rp) && (1.0..=4.0).contains(&rl));
    let above = ratios.iter().all(|&(_, rp, rl)| rp >= 1.0 && rl >= 1.0);
    let shown: Vec<String> = ratios
        .iter()
        .map(|(snr, rp, rl)| format!("{snr} dB pd {rp:.1}x ls {rl:.1}x"))
        .collect();
    g.check(
        "awgn-crlb-proximity",
        within && secs < 120.0,
        format!("MSE/bound {} (need within [1x, 4x]) in {secs:.1} s (need < 120 s)", shown.join(", ")),
    );
    g.check(
        "mse-respects-crlb",
        above,
        format!("every measured MSE sits above the bound: {}", shown.join(", ")),
    );
}

/// Least-squares fit no worse than phase differencing at low SNR.
fn check_low_snr_ordering(g: &mut Gate) {
    let cfg = SimConfig {
        trials: 5000,
        eps_mode: EpsMode::Fixed(0.05),
        master_seed: 7,
        snr_db_list: vec![0.0],
        ..SimConfig::default()
    };
    let cell = run_cell(&cfg, 0.0).unwrap();
    g.check(
        "low-snr-ls-advantage",
        cell.mse_ls <= cell.mse_pd,
        format!(
            "0 dB, 5000 trials: MSE ls {:.4e} vs pd {:.4e} (need ls <= pd)",
            cell.mse_ls, cell.mse_pd
        ),
    );
}

/// Fading lifts the error floor well above the additive-noise bound, and
/// never below the additive-noise error at matched seeds.
fn check_dd_gap(g: &mut Gate) {
    let snrs = vec![0.0, 10.0, 20.0, 30.0];
    let base = SimConfig {
        trials: 2000,
        eps_mode: EpsMode::Fixed(0.05),
        master_seed: 7,
        snr_db_list: snrs.clone(),
        output: None,
        ..SimConfig::default()
    };
    let awgn_cfg = SimConfig {
        channel: ChannelKind::Awgn,
        ..base.clone()
    };
    let ts = base.lattice.ts;
    let dd_cfg = SimConfig {
        channel: ChannelKind::Dd(ScatteringProfile::default_dd(ts)),
        ..base
    };
    let awgn = run_sweep(&awgn_cfg).unwrap();
    let dd = run_sweep(&dd_cfg).unwrap();
    let top = dd.last().unwrap();
    let gap = top.mse_pd > 2.0 * top.crlb && top.mse_ls > 2.0 * top.crlb;
    let dominated = awgn
        .iter()
        .zip(&dd)
        .all(|(a, d)| d.mse_pd >= a.mse_pd && d.mse_ls >= a.mse_ls);
    g.check(
        "dd-channel-gap",
        gap && dominated,
        format!(
            "30 dB fading MSE pd {:.3e} ls {:.3e} vs bound {:.3e} (need > 2x), fading >= additive-only at {} shared SNRs: {}",
            top.mse_pd, top.mse_ls, top.crlb, snrs.len(), dominated
        ),
    );
}

/// Scattering-profile normalization, Doppler autocorrelation shape, and
/// ensemble power conservation.
fn check_channel_statistics(g: &mut Gate) {
    let profile = ScatteringProfile::default_dd(1e-6);
    let pdp_sum: f64 = profile.pdp.iter().sum();
    let pdp_exact = pdp_sum == 1.0;

    // Ensemble tap autocorrelation against the U-shape spectrum's transform.
    // Numerator and normalizer run over the same fixed window so the
    // zero-lag point is exactly 1; the largest lag reaches into the tail.
    let lags: Vec<usize> = (0..=10).map(|i| i * 10).collect();
    let window = 512usize;
    let len = window + lags.last().unwrap();
    let fd_ts = profile.f_d * 1e-6;
    let mut worst_jakes = 0.0f64;
    let mut acc = vec![C64::new(0.0, 0.0); lags.len()];
    let mut norm = 0.0f64;
    for seed in 0..200u64 {
        let chan = realize(&profile, len, 1e-6, seed).unwrap();
        for tap in &chan.taps {
            for (i, &lag) in lags.iter().enumerate() {
                for k in 0..window {
                    acc[i] += tap.gains[k + lag] * tap.gains[k].conj();
                }
            }
            for k in 0..window {
                norm += tap.gains[k].norm_sqr();
            }
        }
    }
    for (i, &lag) in lags.iter().enumerate() {
        let measured = acc[i] / norm;
        let ideal = bessel_j0(2.0 * PI * fd_ts * lag as f64);
        worst_jakes = worst_jakes.max((measured - ideal).norm());
    }

    // Constant-modulus probe; oscillator phases decorrelate the taps, so the
    // ensemble output power equals the profile sum.
    let probe_len = 4096;
    let probe: Vec<C64> = (0..probe_len)
        .map(|k| C64::from_polar(1.0, 2.0 * PI * 0.3 * k as f64))
        .collect();
    let mut ratio = 0.0f64;
    let realizations = 100u64;
    for seed in 0..realizations {
        let chan = realize(&profile, probe_len, 1e-6, 1000 + seed).unwrap();
        let y = apply_channel(&probe, &chan).unwrap();
        let pow: f64 = y.iter().map(|v| v.norm_sqr()).sum::<f64>() / probe_len as f64;
        ratio += pow;
    }
    ratio /= realizations as f64;

    g.check(
        "channel-statistics",
        pdp_exact && worst_jakes <= 0.05 && (ratio - 1.0).abs() <= 0.02,
        format!(
            "profile sum {pdp_sum} (need exactly 1), autocorrelation error {worst_jakes:.3} (need <= 0.05), power ratio {ratio:.4} (need within 2%)"
        ),
    );
}

/// Numeric pulse self-ambiguity against the Gaussian closed form.
fn check_ambiguity_closed_form(g: &mut Gate) {
    let cfg = default_lattice();
    let alpha = balanced_alpha(&cfg);
    let pulse = make_gaussian_pulse(&cfg, alpha, 600).unwrap();
    let alpha_s = alpha * cfg.ts * cfg.ts;
    let center = (pulse.l_psi as f64 - 1.0) / 2.0;
    let mut worst = 0.0f64;
    for i in 0..20 {
        let tau = -95 + 10 * i as i64;
        for j in 0..20 {
            let nu = -0.0125 + 0.025 * j as f64 / 19.0;
            let numeric = ambiguity(&pulse, tau, nu);
            let mag = (-(PI / 2.0) * (alpha_s * (tau * tau) as f64 + nu * nu / alpha_s)).exp();
            let analytic = C64::from_polar(mag, -2.0 * PI * nu * (center + tau as f64 / 2.0));
            worst = worst.max((numeric - analytic).norm());
        }
    }
    g.check(
        "ambiguity-closed-form",
        worst < 1e-3,
        format!("max deviation {worst:.3e} over a 20x20 delay-Doppler grid (need < 1e-3)"),
    );
}

/// Identical seeds render byte-identical sweep output.
fn check_sweep_determinism(g: &mut Gate) {
    let dir = std::env::temp_dir();
    let p1 = dir.join(format!("hmct-acc-a-{}.csv", std::process::id()));
    let p2 = dir.join(format!("hmct-acc-b-{}.csv", std::process::id()));
    let mut cfg = SimConfig {
        trials: 40,
        snr_db_list: vec![0.0, 10.0],
        master_seed: 7,
        output: Some(p1.clone()),
        ..SimConfig::default()
    };
    let cells1 = run_sweep(&cfg).unwrap();
    cfg.output = Some(p2.clone());
    run_sweep(&cfg).unwrap();
    let b1 = std::fs::read(&p1).unwrap();
    let b2 = std::fs::read(&p2).unwrap();
    let _ = std::fs::remove_file(&p1);
    let _ = std::fs::remove_file(&p2);
    let identical = !b1.is_empty() && b1 == b2 && b1 == csv_string(&cells1).into_bytes();
    g.check(
        "sweep-determinism",
        identical,
        format!("repeated seeded sweeps wrote {} identical bytes: {identical}", b1.len()),
    );
}

/// Error shrinks as noise recedes.
fn check_snr_monotonicity(g: &mut Gate) {
    let cfg = SimConfig {
        trials: 2000,
        master_seed: 7,
        snr_db_list: vec![5.0, 20.0],
        ..SimConfig::default()
    };
    let low = run_cell(&cfg, 5.0).unwrap();
    let high = run_cell(&cfg, 20.0).unwrap();
    g.check(
        "snr-monotonicity",
        high.mse_pd < low.mse_pd && high.mse_ls < low.mse_ls,
        format!(
            "MSE falls from 5 dB (pd {:.3e}, ls {:.3e}) to 20 dB (pd {:.3e}, ls {:.3e})",
            low.mse_pd, low.mse_ls, high.mse_pd, high.mse_ls
        ),
    );
}

/// Correlation phases at zero offset.
fn check_gamma_zero_offset(g: &mut Gate) {
    let stats = noiseless_gamma(0.0, None);
    let worst = stats
        .gamma
        .iter()
        .map(|v| v.arg().abs())
        .fold(0.0f64, f64::max);
    g.check(
        "gamma-zero-offset-phase",
        worst < 1e-9,
        format!("max |arg gamma_m| {worst:.3e} rad at zero offset (need < 1e-9); the paired preamble's coherent leakage phase"),
    );
}

/// First correlation phase against the pure-offset intercept law.
fn check_gamma_intercept_law(g: &mut Gate) {
    let cfg = default_lattice();
    let eps = 0.05;
    let stats = noiseless_gamma(eps, None);
    let ideal = -2.0 * PI * cfg.m_samples as f64 * eps / cfg.n_sub as f64;
    let dev = wrap_pi(stats.gamma[0].arg() - ideal).abs();
    g.check(
        "gamma-intercept-law",
        dev < 1e-6,
        format!(
            "arg gamma_0 {:.6} vs pure-offset value {ideal:.6} rad, deviation {dev:.3e} (need < 1e-6)",
            stats.gamma[0].arg()
        ),
    );
}

/// Affinity of the correlation phase across lags under a two-tap echo.
fn check_gamma_two_tap_affinity(g: &mut Gate) {
    let cfg = default_lattice();
    let len = cfg.m_samples * 2 + 600;
    let chan = two_tap_channel(len, 3, 0.5);
    let stats = noiseless_gamma(0.0, Some(&chan));
    let mut y: Vec<f64> = stats.gamma.iter().map(|v| v.arg()).collect();
    unwrap_phases(&mut y);
    let k = y.len() as f64;
    let mean_m = (k - 1.0) / 2.0;
    let mean_y: f64 = y.iter().sum::<f64>() / k;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (m, &v) in y.iter().enumerate() {
        sxx += (m as f64 - mean_m) * (m as f64 - mean_m);
        sxy += (m as f64 - mean_m) * (v - mean_y);
    }
    let slope = sxy / sxx;
    let worst = y
        .iter()
        .enumerate()
        .map(|(m, &v)| (v - (mean_y + slope * (m as f64 - mean_m))).abs())
        .fold(0.0f64, f64::max);
    g.check(
        "gamma-two-tap-affinity",
        worst < 1e-3,
        format!("echo channel phase fit residual {worst:.3} rad (need < 1e-3); the per-subcarrier echo response is sinusoidal in the lag"),
    );
}

/// Noiseless point accuracy of each estimator at stated tolerances.
fn check_estimator_point_accuracy(g: &mut Gate) {
    let cfg = default_lattice();

    let zero = noiseless_gamma(0.0, None);
    let pd0 = estimate_pd(&zero, &cfg).unwrap().eps_hat;
    let ls0 = estimate_ls(&zero, &cfg).unwrap().eps_hat;
    g.check(
        "pd-zero-offset-exactness",
        pd0.abs() < 1e-9,
        format!("estimate {pd0:.4e} at zero offset (need |.| < 1e-9)"),
    );
    g.check(
        "ls-zero-offset-exactness",
        ls0.abs() < 1e-9,
        format!("estimate {ls0:.4e} at zero offset (need |.| < 1e-9)"),
    );

    let tenth = noiseless_gamma(0.1, None);
    let pd1 = estimate_pd(&tenth, &cfg).unwrap().eps_hat;
    g.check(
        "pd-noiseless-accuracy",
        (pd1 - 0.1).abs() < 1e-3,
        format!("estimate {pd1:.5} at offset 0.1, error {:.3e} (need < 1e-3)", (pd1 - 0.1).abs()),
    );

    let fifteen = noiseless_gamma(0.15, None);
    let ls1 = estimate_ls(&fifteen, &cfg).unwrap().eps_hat;
    g.check(
        "ls-noiseless-accuracy",
        (ls1 - 0.15).abs() < 1e-3,
        format!("estimate {ls1:.5} at offset 0.15, error {:.3e} (need < 1e-3)", (ls1 - 0.15).abs()),
    );
}

/// Noiseless accuracy of the full production trial at stated tolerances.
fn check_trial_noiseless_accuracy(g: &mut Gate) {
    let t1 = noiseless_trial(0.1);
    let t0 = noiseless_trial(0.0);
    let worst_tenth = (t1.eps_hat_pd - 0.1).abs().max((t1.eps_hat_ls - 0.1).abs());
    let worst_zero = t0.eps_hat_pd.abs().max(t0.eps_hat_ls.abs());
    g.check(
        "single-trial-noiseless-accuracy",
        worst_tenth < 1e-3 && worst_zero < 1e-6,
        format!("error {worst_tenth:.3e} at offset 0.1 (need < 1e-3), {worst_zero:.3e} at zero (need < 1e-6)"),
    );
}

/// Noiseless sweep floor across rows.
fn check_noiseless_sweep_floor(g: &mut Gate) {
    let cfg = SimConfig {
        trials: 10,
        snr_db_list: vec![f64::INFINITY],
        eps_mode: EpsMode::Fixed(0.1),
        master_seed: 7,
        ..SimConfig::default()
    };
    let cells = run_sweep(&cfg).unwrap();
    let worst = cells
        .iter()
        .map(|c| c.mse_pd.max(c.mse_ls))
        .fold(0.0f64, f64::max);
    g.check(
        "noiseless-sweep-mse-floor",
        worst < 1e-6,
        format!("max row MSE {worst:.3e} with noise off (need < 1e-6); squared offset bias"),
    );
}

/// Vanishing-noise limit across the usable offset range.
fn check_high_snr_consistency(g: &mut Gate) {
    let mut worst = 0.0f64;
    for eps in [-0.18, -0.09, 0.0, 0.09, 0.18] {
        let t = noiseless_trial(eps);
        worst = worst
            .max((t.eps_hat_pd - eps).abs())
            .max((t.eps_hat_ls - eps).abs());
    }
    g.check(
        "high-snr-consistency",
        worst < 1e-3,
        format!("limit error {worst:.3e} across the offset range (need < 1e-3); estimates converge to offset plus bias"),
    );
}

#[test]
fn acceptance_gate() {
    let mut g = Gate::new();
    check_fast_demod_equivalence(&mut g);
    check_cfo_rotation_law(&mut g);
    check_noiseless_grid_consistency(&mut g);
    check_awgn_crlb(&mut g);
    check_low_snr_ordering(&mut g);
    check_dd_gap(&mut g);
    check_channel_statistics(&mut g);
    check_ambiguity_closed_form(&mut g);
    check_sweep_determinism(&mut g);
    check_snr_monotonicity(&mut g);
    check_gamma_zero_offset(&mut g);
    check_gamma_intercept_law(&mut g);
    check_gamma_two_tap_affinity(&mut g);
    check_estimator_point_accuracy(&mut g);
    check_trial_noiseless_accuracy(&mut g);
    check_noiseless_sweep_floor(&mut g);
    check_high_snr_consistency(&mut g);
    assert!(
        g.failures.is_empty(),
        "{} of {} acceptance checks failed:\n{}",
        g.failures.len(),
        g.lines.len(),
        g.failures.join("\n")
    );
}
