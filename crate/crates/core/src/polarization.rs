//! Evolution of the polarization process.
//!
//! The single-step maps on the Bhattacharyya parameter are
//!
//! * plus branch: `z -> z^2` (always exact),
//! * minus branch: `z -> 2z - z^2` (exact for erasure channels, an upper
//!   bound otherwise) or `z -> z sqrt(2 - z^2)` (lower bound, met by
//!   crossover channels).
//!
//! [`evolve_spectrum`] applies the chosen pair level-wise to produce all
//! `2^n` sub-channel values, [`explicit_spectrum`] instead carries the full
//! transition matrices through the transforms for exact values on general
//! symmetric channels, and [`sample_trajectory`] draws a single random path
//! of the process.
//!
//! Spectra are stored in branch-lexicographic order, minus before plus: the
//! value at index `i` belongs to the branch sequence spelled by the bits of
//! `i`, most significant first, with 0 meaning minus. This matches the
//! natural decoding order of the codec, so `values[i]` is the estimate for
//! the sub-channel of bit `u_i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::BmsChannel;
use crate::error::SubchannelCtx;
use crate::{Error, Result};

/// Largest level accepted by the dense-spectrum routines (2^26 values,
/// about half a GiB).
pub const MAX_SPECTRUM_LEVEL: u32 = 26;

/// How a spectrum's values relate to the true Bhattacharyya parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumMode {
    /// Equality in the minus bound; entry `i` is exactly the erasure
    /// probability of sub-channel `i` of an erasure channel.
    ExactErasure,
    /// Minus branch uses `2z - z^2`; entries dominate the true values.
    UpperBound,
    /// Minus branch uses `z sqrt(2 - z^2)`; entries are dominated.
    LowerBound,
    /// Computed from explicit transition matrices; exact for any symmetric
    /// channel within the alphabet cap.
    Exact,
}

/// The multiset of Bhattacharyya values at one polarization level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarSpectrum {
    level: u32,
    mode: SpectrumMode,
    values: Vec<f64>,
}

impl PolarSpectrum {
    /// Polarization level `n`; the spectrum holds `2^n` values.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn mode(&self) -> SpectrumMode {
        self.mode
    }

    /// Values in branch-lexicographic order (see module docs).
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Fraction of sub-channels still mediocre at this level: those with
    /// `delta < Z < 1 - delta`, i.e. `min(Z, 1-Z) > delta`.
    pub fn fraction_unpolarized(&self, delta: f64) -> Result<f64> {
        if !(0.0 < delta && delta < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "delta = {delta} must lie in (0, 0.5)"
            )));
        }
        let inside = self
            .values
            .iter()
            .filter(|&&z| z > delta && z < 1.0 - delta)
            .count();
        Ok(inside as f64 / self.values.len() as f64)
    }
}

#[inline]
fn z_plus(z: f64) -> f64 {
    z * z
}

#[inline]
fn z_minus_upper(z: f64) -> f64 {
    2.0 * z - z * z
}

#[inline]
fn z_minus_lower(z: f64) -> f64 {
    z * (2.0 - z * z).sqrt()
}

fn minus_map(mode: SpectrumMode) -> Result<fn(f64) -> f64> {
    match mode {
        SpectrumMode::ExactErasure | SpectrumMode::UpperBound => Ok(z_minus_upper),
        SpectrumMode::LowerBound => Ok(z_minus_lower),
        SpectrumMode::Exact => Err(Error::InvalidParameter(
            "mode `exact` needs a channel; use explicit_spectrum".into(),
        )),
    }
}

fn check_z0(z0: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&z0) || !z0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "z0 = {z0} is not in [0, 1]"
        )));
    }
    Ok(())
}

fn check_level(n: u32) -> Result<()> {
    if n > MAX_SPECTRUM_LEVEL {
        return Err(Error::ResourceLimit(format!(
            "level {n} exceeds the dense-spectrum cap of {MAX_SPECTRUM_LEVEL} \
             (2^{n} values); sample trajectories instead"
        )));
    }
    Ok(())
}

/// All `2^n` values obtained by applying the squaring map on plus branches
/// and the selected minus map on minus branches, starting from `z0`.
pub fn evolve_spectrum(z0: f64, n: u32, mode: SpectrumMode) -> Result<PolarSpectrum> {
    check_z0(z0)?;
    check_level(n)?;
    let minus = minus_map(mode)?;
    let mut values = vec![z0];
    for _ in 0..n {
        let mut next = Vec::with_capacity(values.len() * 2);
        for &z in &values {
            next.push(minus(z));
            next.push(z_plus(z));
        }
        values = next;
    }
    Ok(PolarSpectrum {
        level: n,
        mode,
        values,
    })
}

/// One sampled path of the polarization process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Fair-coin branch choices; 1 selects the plus branch.
    pub branches: Vec<u8>,
    /// `z_path[k]` is the value after `k` steps; `z_path[0] = z0`.
    pub z_path: Vec<f64>,
}

/// Draws `n` fair-coin branches from a stream seeded by `seed` and follows
/// the selected mode's recursion. The same seed always reproduces the same
/// trajectory.
pub fn sample_trajectory(z0: f64, n: u32, mode: SpectrumMode, seed: u64) -> Result<Trajectory> {
    check_z0(z0)?;
    let minus = minus_map(mode)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut branches = Vec::with_capacity(n as usize);
    let mut z_path = Vec::with_capacity(n as usize + 1);
    let mut z = z0;
    z_path.push(z);
    for _ in 0..n {
        let b: u8 = rng.gen_range(0..=1);
        z = if b == 1 { z_plus(z) } else { minus(z) };
        branches.push(b);
        z_path.push(z);
    }
    Ok(Trajectory { branches, z_path })
}

/// Exact Bhattacharyya values of all `2^n` sub-channels of `w`, computed by
/// carrying explicit transition matrices through the transforms.
///
/// Fails with an alphabet-cap error naming the first affected sub-channel
/// index when any intermediate merged alphabet outgrows the cap.
pub fn explicit_spectrum(w: &BmsChannel, n: u32) -> Result<PolarSpectrum> {
    check_level(n)?;
    let mode = match w {
        BmsChannel::Erasure { .. } => SpectrumMode::ExactErasure,
        _ => SpectrumMode::Exact,
    };
    let mut values = Vec::with_capacity(1usize << n);
    descend(w, n, 0, &mut values)?;
    Ok(PolarSpectrum {
        level: n,
        mode,
        values,
    })
}

fn descend(w: &BmsChannel, remaining: u32, base: usize, out: &mut Vec<f64>) -> Result<()> {
    if remaining == 0 {
        out.push(w.bhattacharyya());
        return Ok(());
    }
    let tag = |e| match e {
        Error::AlphabetCap { size, cap, .. } => Error::AlphabetCap {
            size,
            cap,
            at: SubchannelCtx(Some(base << remaining)),
        },
        other => other,
    };
    let minus = w.minus_transform().map_err(tag)?;
    descend(&minus, remaining - 1, base << 1, out)?;
    let plus = w.plus_transform().map_err(|e| match e {
        Error::AlphabetCap { size, cap, .. } => Error::AlphabetCap {
            size,
            cap,
            at: SubchannelCtx(Some((base << 1 | 1) << (remaining - 1))),
        },
        other => other,
    })?;
    descend(&plus, remaining - 1, (base << 1) | 1, out)
}

/// Fraction of the `2^n` branch paths whose value stays at or below `delta`
/// at every level from `m0` through `n`. Sub-trees that leave the band are
/// pruned, so typical calls touch far fewer than `2^n` nodes.
pub fn fraction_staying_low(
    z0: f64,
    n: u32,
    m0: u32,
    delta: f64,
    mode: SpectrumMode,
) -> Result<f64> {
    check_z0(z0)?;
    check_level(n)?;
    if m0 > n {
        return Err(Error::InvalidParameter(format!("m0 = {m0} exceeds n = {n}")));
    }
    let minus = minus_map(mode)?;
    fn walk(z: f64, level: u32, n: u32, m0: u32, delta: f64, minus: fn(f64) -> f64) -> u64 {
        if level >= m0 && z > delta {
            return 0;
        }
        if level == n {
            return 1;
        }
        walk(minus(z), level + 1, n, m0, delta, minus)
            + walk(z * z, level + 1, n, m0, delta, minus)
    }
    let count = walk(z0, 0, n, m0, delta, minus);
    Ok(count as f64 / (1u64 << n) as f64)
}
