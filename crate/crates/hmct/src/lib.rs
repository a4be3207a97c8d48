//! Baseband simulation toolkit for hexagonal multicarrier transmission (HMCT).
//!
//! The signal model places symbols on a hexagonal time-frequency lattice made
//! of two rectangular sublattices offset by half a symbol period and half a
//! subcarrier spacing. The crate provides:
//!
//! - the lattice geometry and a truncated Gaussian prototype pulse with its
//!   ambiguity function ([`lattice`]);
//! - modulation, matched-filter demodulation, and an equivalent fast
//!   demodulator built from a fold plus FFT ([`modem`]);
//! - a WSSUS doubly-dispersive channel with exponential power delay profile
//!   and U-shape Doppler, plus CFO injection and AWGN ([`channel`]);
//! - a PN-based frequency-domain preamble ([`preamble`]);
//! - phase-differential and least-squares carrier frequency offset estimators
//!   with the matching Cramér-Rao lower bound ([`estimator`]);
//! - a deterministic Monte Carlo harness sweeping MSE against SNR ([`sim`]).
//!
//! All randomness flows from explicit seeds; every simulation artifact is
//! bit-reproducible, with or without the `parallel` feature.

pub mod channel;
pub mod error;
pub mod estimator;
pub mod lattice;
pub mod modem;
pub mod preamble;
pub mod sim;

pub use channel::{
    add_awgn, apply_cfo, apply_channel, desired_gain, realize, AwgnSpec, ChannelRealization,
    ScatteringProfile,
};
pub use error::{HmctError, Result};
pub use estimator::{
    compute_gamma, crlb, estimate_ls, estimate_pd, EstimateReport, GammaStatistics, Method,
    PhaseFit,
};
pub use lattice::{ambiguity, make_gaussian_pulse, LatticeConfig, PrototypePulse};
pub use modem::{
    demodulate_fast, demodulate_naive, fold_count, interference_coefficient, modulate, Sublattice,
    SymbolGrid,
};
pub use preamble::{build_preamble, default_taps, generate_pn, PnSequence, PreambleFrame};
pub use sim::{
    csv_string, parse_config, run_cell, run_cell_sequential, run_sweep, run_trial, write_csv,
    CellResult, ChannelKind, EpsMode, SimConfig, TrialResult,
};

/// Complex sample type used throughout the crate.
pub type C64 = num_complex::Complex64;

/// Wraps an angle to the principal interval (-pi, pi].
pub fn wrap_pi(theta: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut t = theta % two_pi;
    if t <= -std::f64::consts::PI {
        t += two_pi;
    } else if t > std::f64::consts::PI {
        t -= two_pi;
    }
    t
}

/// Unwraps a phase sequence in place: each step is brought within pi of its
/// predecessor by adding multiples of 2*pi, preserving the first element.
pub fn unwrap_phases(phases: &mut [f64]) {
    for i in 1..phases.len() {
        let jump = phases[i] - phases[i - 1];
        phases[i] -= 2.0 * std::f64::consts::PI * (jump / (2.0 * std::f64::consts::PI)).round();
    }
}

/// Converts a decibel quantity to its linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    f64::powf(10.0, db / 10.0)
}
