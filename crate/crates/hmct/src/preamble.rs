//! PN training-sequence generation and the frequency-domain preamble map.
//!
//! The preamble occupies one symbol slot: raw subcarrier `l` carries the
//! bipolar training value `pn[l/2]` for `l` in `[0, 2*n_p)`, so each
//! training value appears once on sublattice A and once on sublattice B at
//! the same active subcarrier index. Slots before the preamble slot are
//! empty.

use crate::error::{HmctError, Result};
use crate::lattice::LatticeConfig;
use crate::modem::SymbolGrid;
use crate::C64;

/// A bipolar pseudo-noise sequence produced by a Fibonacci LFSR.
#[derive(Debug, Clone, PartialEq)]
pub struct PnSequence {
    /// Shift-register length.
    pub degree: u32,
    /// Feedback tap positions, 1-based, counted from the output bit.
    pub taps: Vec<u32>,
    /// Output values mapped to +1.0 / -1.0.
    pub values: Vec<f64>,
}

/// Maximal-length feedback taps for register degrees 3 through 10.
pub fn default_taps(degree: u32) -> Result<Vec<u32>> {
    let taps: &[u32] = match degree {
        3 => &[3, 2],
        4 => &[4, 3],
        5 => &[5, 3],
        6 => &[6, 5],
        7 => &[7, 6],
        8 => &[8, 6, 5, 4],
        9 => &[9, 5],
        10 => &[10, 7],
        _ => {
            return Err(HmctError::InvalidArgument(format!(
                "no default taps for register degree {degree}; supported range is [3, 10]"
            )))
        }
    };
    Ok(taps.to_vec())
}

/// Runs a Fibonacci LFSR for `length` steps. The output bit is the low
/// register bit, mapped 0 -> +1.0 and 1 -> -1.0; feedback XORs register
/// bit `degree - t` for each tap `t`, so the tap at `degree` itself is the
/// outgoing bit and the register map stays invertible. Only the low
/// `degree` bits of `seed` load the register, and the loaded register must
/// be nonzero.
pub fn generate_pn(degree: u32, taps: &[u32], seed: u32, length: usize) -> Result<PnSequence> {
    if degree < 1 || degree > 32 {
        return Err(HmctError::InvalidArgument(format!(
            "register degree {degree} outside [1, 32]"
        )));
    }
    if taps.is_empty() {
        return Err(HmctError::InvalidArgument("empty feedback tap set".into()));
    }
    if let Some(&t) = taps.iter().find(|&&t| t < 1 || t > degree) {
        return Err(HmctError::InvalidArgument(format!(
            "feedback tap {t} outside [1, {degree}]"
        )));
    }
    if length == 0 {
        return Err(HmctError::InvalidArgument(
            "training sequence length must be at least 1".into(),
        ));
    }
    let mask = ((1u64 << degree) - 1) as u32;
    let mut state = seed & mask;
    if state == 0 {
        return Err(HmctError::InvalidArgument(
            "LFSR seed loads a zero register".into(),
        ));
    }
    let mut values = Vec::with_capacity(length);
    for _ in 0..length {
        values.push(if state & 1 == 0 { 1.0 } else { -1.0 });
        let mut feedback = 0u32;
        for &t in taps {
            feedback ^= (state >> (degree - t)) & 1;
        }
        state = (state >> 1) | (feedback << (degree - 1));
    }
    Ok(PnSequence {
        degree,
        taps: taps.to_vec(),
        values,
    })
}

/// The preamble symbol's frequency-domain content and placement.
#[derive(Debug, Clone, PartialEq)]
pub struct PreambleFrame {
    /// Training values carried by sublattice A.
    pub p1: Vec<f64>,
    /// Training values carried by sublattice B; equal to `p1`.
    pub p2: Vec<f64>,
    /// Frequency-domain values over raw subcarriers `[0, 2*n_p)`.
    pub d: Vec<f64>,
    /// Symbol slot carrying the preamble.
    pub slot: usize,
    /// Per-value power of the training symbols.
    pub sigma_s2: f64,
}

/// Maps a training sequence of length `n_p` onto one symbol slot:
/// `d[l] = pn[l/2]` for raw subcarrier `l` in `[0, 2*n_p)`, zero elsewhere.
/// Returns the frame metadata and a grid of `slot + 1` symbol slots ready
/// for modulation. Requires `n_p <= n_sub/2`.
pub fn build_preamble(
    pn: &PnSequence,
    cfg: &LatticeConfig,
    slot: usize,
) -> Result<(PreambleFrame, SymbolGrid)> {
    let n_p = pn.values.len();
    if 2 * n_p > cfg.n_sub {
        return Err(HmctError::InvalidArgument(format!(
            "training length {n_p} exceeds n_sub/2 = {}",
            cfg.n_sub / 2
        )));
    }
    let mut d = Vec::with_capacity(2 * n_p);
    let mut grid = SymbolGrid::zeros(slot + 1, cfg.n_sub, 1.0);
    for l in 0..2 * n_p {
        let v = pn.values[l / 2];
        d.push(v);
        grid.set(slot, l, C64::new(v, 0.0))?;
    }
    let frame = PreambleFrame {
        p1: pn.values.clone(),
        p2: pn.values.clone(),
        d,
        slot,
        sigma_s2: 1.0,
    };
    Ok((frame, grid))
}
