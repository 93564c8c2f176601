//! Binary-input symmetric channels and their single-step polar transforms.
//!
//! A [`BmsChannel`] is either a binary erasure channel, a binary symmetric
//! (crossover) channel, or an explicit finite transition matrix. The scalar
//! parameters `I(W)` (symmetric capacity) and `Z(W)` (Bhattacharyya) have
//! closed forms for the first two kinds and are computed by direct summation
//! for explicit channels.
//!
//! The minus transform combines two uses of `W` through a parity constraint;
//! the plus transform additionally reveals the parity bit. Both produce
//! explicit channels on a product alphabet whose symbols are merged by
//! likelihood-ratio equivalence to keep the alphabet tractable.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};
use crate::error::SubchannelCtx;
use crate::math::h2;

/// Default cap on the merged output alphabet of explicit transforms.
pub const ALPHABET_CAP: usize = 1 << 16;

/// Saturation magnitude for log-likelihood ratios, in nats.
pub const LLR_SAT: f64 = 700.0;

/// Tolerance for probability validation and symmetry matching.
const PROB_TOL: f64 = 1e-12;

/// Scalar parameters of a channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelStats {
    /// Symmetric capacity `I(W)` in bits.
    pub capacity: f64,
    /// Bhattacharyya parameter `Z(W)`.
    pub bhattacharyya: f64,
}

/// Explicit transition matrix `W(y|x)` over a finite output alphabet.
///
/// Rows are indexed by the input bit; `w0[y]` and `w1[y]` are `W(y|0)` and
/// `W(y|1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitChannel {
    w0: Vec<f64>,
    w1: Vec<f64>,
}

impl ExplicitChannel {
    /// Output alphabet size.
    pub fn alphabet_size(&self) -> usize {
        self.w0.len()
    }

    /// Transition probabilities `(W(y|0), W(y|1))` for symbol `y`.
    pub fn probs(&self, y: usize) -> (f64, f64) {
        (self.w0[y], self.w1[y])
    }
}

/// A binary-input symmetric channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelSpec", into = "ChannelSpec")]
pub enum BmsChannel {
    /// Binary erasure channel with erasure probability `epsilon`.
    Erasure { epsilon: f64 },
    /// Binary symmetric channel with crossover probability `p`.
    Crossover { p: f64 },
    /// Explicit finite transition matrix.
    Explicit(ExplicitChannel),
}

/// Wire form of a channel spec, e.g. `{"kind":"erasure","epsilon":0.5}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ChannelSpec {
    Erasure { epsilon: f64 },
    Crossover { p: f64 },
    Explicit { matrix: Vec<Vec<f64>> },
}

impl TryFrom<ChannelSpec> for BmsChannel {
    type Error = Error;
    fn try_from(spec: ChannelSpec) -> Result<Self> {
        match spec {
            ChannelSpec::Erasure { epsilon } => BmsChannel::erasure(epsilon),
            ChannelSpec::Crossover { p } => BmsChannel::crossover(p),
            ChannelSpec::Explicit { matrix } => BmsChannel::explicit(matrix),
        }
    }
}

impl From<BmsChannel> for ChannelSpec {
    fn from(w: BmsChannel) -> Self {
        match w {
            BmsChannel::Erasure { epsilon } => ChannelSpec::Erasure { epsilon },
            BmsChannel::Crossover { p } => ChannelSpec::Crossover { p },
            BmsChannel::Explicit(e) => ChannelSpec::Explicit {
                matrix: vec![e.w0, e.w1],
            },
        }
    }
}

impl BmsChannel {
    /// Binary erasure channel.
    pub fn erasure(epsilon: f64) -> Result<Self> {
        check_prob("epsilon", epsilon)?;
        Ok(BmsChannel::Erasure { epsilon })
    }

    /// Binary symmetric channel.
    pub fn crossover(p: f64) -> Result<Self> {
        check_prob("p", p)?;
        Ok(BmsChannel::Crossover { p })
    }

    /// Explicit channel from a 2-row transition matrix.
    ///
    /// Validates that entries are probabilities, that each row sums to 1
    /// within 1e-12, and that the channel is output-symmetric: an involution
    /// on the output alphabet must map `W(.|0)` onto `W(.|1)`.
    pub fn explicit(matrix: Vec<Vec<f64>>) -> Result<Self> {
        if matrix.len() != 2 {
            return Err(Error::InvalidParameter(format!(
                "explicit channel needs exactly 2 rows, got {}",
                matrix.len()
            )));
        }
        let mut rows = matrix.into_iter();
        let w0 = rows.next().unwrap();
        let w1 = rows.next().unwrap();
        if w0.len() != w1.len() {
            return Err(Error::LengthMismatch {
                expected: w0.len(),
                got: w1.len(),
            });
        }
        if w0.is_empty() {
            return Err(Error::InvalidParameter("empty output alphabet".into()));
        }
        for row in [&w0, &w1] {
            let mut sum = 0.0;
            for &p in row {
                if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "transition probability {p} out of [0,1]"
                    )));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > PROB_TOL {
                return Err(Error::InvalidParameter(format!(
                    "row sums to {sum}, expected 1 within {PROB_TOL:e}"
                )));
            }
        }
        let ch = ExplicitChannel { w0, w1 };
        if find_involution(&ch).is_none() {
            return Err(Error::InvalidParameter(
                "channel is not output-symmetric: no involution pairs W(.|0) with W(.|1)".into(),
            ));
        }
        Ok(BmsChannel::Explicit(ch))
    }

    /// Output alphabet size (3 for erasure: the two bits and the erasure mark).
    pub fn alphabet_size(&self) -> usize {
        match self {
            BmsChannel::Erasure { .. } => 3,
            BmsChannel::Crossover { .. } => 2,
            BmsChannel::Explicit(e) => e.alphabet_size(),
        }
    }

    /// Symmetric capacity `I(W)` in bits: the mutual information between a
    /// uniform input and the output.
    pub fn symmetric_capacity(&self) -> f64 {
        match self {
            BmsChannel::Erasure { epsilon } => 1.0 - epsilon,
            BmsChannel::Crossover { p } => 1.0 - h2(*p),
            BmsChannel::Explicit(e) => {
                let mut i = 0.0;
                for y in 0..e.alphabet_size() {
                    let (a, b) = e.probs(y);
                    let marginal = 0.5 * (a + b);
                    if a > 0.0 {
                        i += 0.5 * a * (a / marginal).log2();
                    }
                    if b > 0.0 {
                        i += 0.5 * b * (b / marginal).log2();
                    }
                }
                i
            }
        }
    }

    /// Bhattacharyya parameter `Z(W) = sum_y sqrt(W(y|0) W(y|1))`.
    pub fn bhattacharyya(&self) -> f64 {
        match self {
            BmsChannel::Erasure { epsilon } => *epsilon,
            BmsChannel::Crossover { p } => 2.0 * (p * (1.0 - p)).sqrt(),
            BmsChannel::Explicit(e) => (0..e.alphabet_size())
                .map(|y| {
                    let (a, b) = e.probs(y);
                    (a * b).sqrt()
                })
                .sum(),
        }
    }

    /// Both scalar parameters at once.
    pub fn stats(&self) -> ChannelStats {
        ChannelStats {
            capacity: self.symmetric_capacity(),
            bhattacharyya: self.bhattacharyya(),
        }
    }

    /// The degraded half of the polar transform: two uses of `W` observed
    /// through the parity of their inputs.
    ///
    /// Erasure channels stay erasure channels with parameter `2e - e^2` and
    /// are returned in closed form. Everything else goes through the product
    /// alphabet with likelihood-ratio merging.
    pub fn minus_transform(&self) -> Result<BmsChannel> {
        self.minus_transform_with_cap(ALPHABET_CAP)
    }

    /// [`minus_transform`](Self::minus_transform) with an explicit alphabet cap.
    pub fn minus_transform_with_cap(&self, cap: usize) -> Result<BmsChannel> {
        if let BmsChannel::Erasure { epsilon } = self {
            let e = *epsilon;
            return BmsChannel::erasure(2.0 * e - e * e);
        }
        let w = self.to_explicit();
        let q = w.alphabet_size();
        check_cap(q, cap)?;
        let mut merger = LrMerger::new();
        for y1 in 0..q {
            let (a0, a1) = w.probs(y1);
            for y2 in 0..q {
                let (b0, b1) = w.probs(y2);
                // W-(y1,y2|u) = 1/2 sum_x W(y1|u xor x) W(y2|x)
                let p0 = 0.5 * (a0 * b0 + a1 * b1);
                let p1 = 0.5 * (a1 * b0 + a0 * b1);
                merger.add(p0, p1);
            }
        }
        merger.into_channel(cap)
    }

    /// The upgraded half of the polar transform: two uses of `W` with the
    /// parity bit revealed. Erasure channels map to `erasure(e^2)` in closed
    /// form; `Z` of the result always equals `Z(W)^2`.
    pub fn plus_transform(&self) -> Result<BmsChannel> {
        self.plus_transform_with_cap(ALPHABET_CAP)
    }

    /// [`plus_transform`](Self::plus_transform) with an explicit alphabet cap.
    pub fn plus_transform_with_cap(&self, cap: usize) -> Result<BmsChannel> {
        if let BmsChannel::Erasure { epsilon } = self {
            return BmsChannel::erasure(epsilon * epsilon);
        }
        let w = self.to_explicit();
        let q = w.alphabet_size();
        check_cap(q, cap)?;
        let mut merger = LrMerger::new();
        for y1 in 0..q {
            let (a0, a1) = w.probs(y1);
            for y2 in 0..q {
                let (b0, b1) = w.probs(y2);
                // W+(y1,y2,x|u) = 1/2 W(y1|x xor u) W(y2|u)
                for x in 0..2 {
                    let p0 = 0.5 * if x == 0 { a0 } else { a1 } * b0;
                    let p1 = 0.5 * if x == 0 { a1 } else { a0 } * b1;
                    merger.add(p0, p1);
                }
            }
        }
        merger.into_channel(cap)
    }

    /// View as an explicit transition matrix (erasure uses the three-symbol
    /// alphabet `{0, 1, erased}`).
    pub fn to_explicit(&self) -> ExplicitChannel {
        match self {
            BmsChannel::Erasure { epsilon } => ExplicitChannel {
                w0: vec![1.0 - epsilon, 0.0, *epsilon],
                w1: vec![0.0, 1.0 - epsilon, *epsilon],
            },
            BmsChannel::Crossover { p } => ExplicitChannel {
                w0: vec![1.0 - p, *p],
                w1: vec![*p, 1.0 - p],
            },
            BmsChannel::Explicit(e) => e.clone(),
        }
    }

    /// Transmit one bit, returning the output symbol index.
    ///
    /// Symbol indexing matches [`llr`](Self::llr): erasure channels use
    /// `{0, 1, 2=erased}`, crossover channels use the received bit, explicit
    /// channels use the output column index.
    pub fn transmit<R: Rng>(&self, x: u8, rng: &mut R) -> usize {
        debug_assert!(x <= 1);
        match self {
            BmsChannel::Erasure { epsilon } => {
                if rng.gen::<f64>() < *epsilon {
                    2
                } else {
                    x as usize
                }
            }
            BmsChannel::Crossover { p } => {
                if rng.gen::<f64>() < *p {
                    (1 - x) as usize
                } else {
                    x as usize
                }
            }
            BmsChannel::Explicit(e) => {
                let row = if x == 0 { &e.w0 } else { &e.w1 };
                let mut u = rng.gen::<f64>();
                for (y, &p) in row.iter().enumerate() {
                    if u < p {
                        return y;
                    }
                    u -= p;
                }
                row.len() - 1
            }
        }
    }

    /// Log-likelihood ratio `ln(W(y|0)/W(y|1))` of an output symbol,
    /// saturated at +-[`LLR_SAT`].
    pub fn llr(&self, y: usize) -> f64 {
        match self {
            BmsChannel::Erasure { .. } => match y {
                0 => LLR_SAT,
                1 => -LLR_SAT,
                _ => 0.0,
            },
            BmsChannel::Crossover { p } => {
                let mag = if *p <= 0.0 {
                    LLR_SAT
                } else {
                    (((1.0 - p) / p).ln()).min(LLR_SAT)
                };
                if y == 0 {
                    mag
                } else {
                    -mag
                }
            }
            BmsChannel::Explicit(e) => {
                let (a, b) = e.probs(y);
                if a == 0.0 && b == 0.0 {
                    0.0
                } else if b == 0.0 {
                    LLR_SAT
                } else if a == 0.0 {
                    -LLR_SAT
                } else {
                    (a / b).ln().clamp(-LLR_SAT, LLR_SAT)
                }
            }
        }
    }

    /// A randomly generated explicit symmetric channel, for property tests
    /// and transform validation. `pairs` mirror-symbol pairs plus one
    /// self-symmetric symbol; deterministic in `seed`.
    pub fn random_symmetric(pairs: usize, seed: u64) -> Self {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut w0 = Vec::with_capacity(2 * pairs + 1);
        let mut w1 = Vec::with_capacity(2 * pairs + 1);
        for _ in 0..pairs {
            let a = rng.gen::<f64>();
            let b = rng.gen::<f64>();
            w0.push(a);
            w1.push(b);
            w0.push(b);
            w1.push(a);
        }
        let c = rng.gen::<f64>();
        w0.push(c);
        w1.push(c);
        let s0: f64 = w0.iter().sum();
        for v in w0.iter_mut().chain(w1.iter_mut()) {
            *v /= s0;
        }
        BmsChannel::Explicit(ExplicitChannel { w0, w1 })
    }
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "{name} = {p} is not a probability"
        )));
    }
    Ok(())
}

fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::AlphabetCap {
            size,
            cap,
            at: SubchannelCtx(None),
        });
    }
    Ok(())
}

/// Accumulates product-alphabet symbols into likelihood-ratio equivalence
/// classes: the ratio `W(y|0)/W(y|1)` rounded to 12 significant digits is
/// the class key, and symbols that agree on it to that precision are merged
/// by summing probability mass. Keying the ratio itself (not a compressed
/// form of it) keeps the full dynamic range, which matters once transforms
/// drive ratios past 1e12.
struct LrMerger {
    classes: std::collections::BTreeMap<(i32, i64), (f64, f64)>,
}

impl LrMerger {
    fn new() -> Self {
        Self {
            classes: std::collections::BTreeMap::new(),
        }
    }

    fn add(&mut self, p0: f64, p1: f64) {
        if p0 + p1 <= 0.0 {
            return; // zero-mass symbol, carries no information
        }
        let e = self.classes.entry(lr_class_key(p0, p1)).or_insert((0.0, 0.0));
        e.0 += p0;
        e.1 += p1;
    }

    fn into_channel(self, cap: usize) -> Result<BmsChannel> {
        check_cap(self.classes.len(), cap)?;
        let mut w0 = Vec::with_capacity(self.classes.len());
        let mut w1 = Vec::with_capacity(self.classes.len());
        for (_, (p0, p1)) in self.classes {
            w0.push(p0);
            w1.push(p1);
        }
        Ok(BmsChannel::Explicit(ExplicitChannel { w0, w1 }))
    }
}

/// Key for a likelihood-ratio class: `p0/p1` rounded to 12 significant
/// decimal digits, encoded as (decade, mantissa) so the derived ordering is
/// the numeric one. Ratios 0 and infinity get their own classes at the ends
/// of the ordering.
fn lr_class_key(p0: f64, p1: f64) -> (i32, i64) {
    if p0 == 0.0 {
        return (i32::MIN, 0);
    }
    if p1 == 0.0 {
        return (i32::MAX, 0);
    }
    let ratio = p0 / p1;
    if ratio.is_infinite() {
        return (i32::MAX, 0);
    }
    let e = ratio.log10().floor() as i32;
    let m = (ratio / 10f64.powi(e - 11)).round() as i64;
    if m >= 1_000_000_000_000 {
        (e + 1, m / 10)
    } else {
        (e, m)
    }
}

/// Greedy search for an involution `pi` with `W(y|0) = W(pi(y)|1)` within
/// tolerance 1e-12. Returns the pairing when the channel is symmetric.
fn find_involution(ch: &ExplicitChannel) -> Option<Vec<usize>> {
    let q = ch.alphabet_size();
    // Candidates sorted by W(y|0) so partners can be located by binary search.
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&a, &b| ch.w0[a].total_cmp(&ch.w0[b]));
    let mut pi = vec![usize::MAX; q];
    for y in 0..q {
        if pi[y] != usize::MAX {
            continue;
        }
        let (a, b) = ch.probs(y);
        // Want a partner y' with W(y'|0) ~ b and W(y'|1) ~ a.
        let lo = order.partition_point(|&i| ch.w0[i] < b - PROB_TOL);
        let mut found = false;
        for &cand in &order[lo..] {
            if ch.w0[cand] > b + PROB_TOL {
                break;
            }
            if pi[cand] != usize::MAX && !(cand == y && (a - b).abs() <= PROB_TOL) {
                continue;
            }
            if (ch.w1[cand] - a).abs() <= PROB_TOL {
                pi[y] = cand;
                pi[cand] = y;
                found = true;
                break;
            }
        }
        if !found {
            return None;
        }
    }
    Some(pi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bsc_matrix(p: f64) -> Vec<Vec<f64>> {
        vec![vec![1.0 - p, p], vec![p, 1.0 - p]]
    }

    #[test]
    fn capacity_closed_forms() {
        let w = BmsChannel::crossover(0.0).unwrap();
        assert_eq!(w.symmetric_capacity(), 1.0);
        let w = BmsChannel::erasure(0.5).unwrap();
        assert!((w.symmetric_capacity() - 0.5).abs() < 1e-12);
        // 1 - h2(0.11), cross-checked by direct summation over the matrix
        let w = BmsChannel::crossover(0.11).unwrap();
        let direct = BmsChannel::explicit(bsc_matrix(0.11)).unwrap();
        assert!((w.symmetric_capacity() - 0.500_084_041_835_471_95).abs() < 1e-12);
        assert!((w.symmetric_capacity() - direct.symmetric_capacity()).abs() < 1e-12);
    }

    #[test]
    fn bhattacharyya_closed_forms() {
        assert_eq!(BmsChannel::crossover(0.0).unwrap().bhattacharyya(), 0.0);
        assert!((BmsChannel::erasure(0.3).unwrap().bhattacharyya() - 0.3).abs() < 1e-15);
        // 2 sqrt(0.11 * 0.89)
        let z = BmsChannel::crossover(0.11).unwrap().bhattacharyya();
        assert!((z - 0.625_779_513_886_480_7).abs() < 1e-12);
    }

    #[test]
    fn erasure_transforms_closed_form() {
        let w = BmsChannel::erasure(0.5).unwrap();
        match w.minus_transform().unwrap() {
            BmsChannel::Erasure { epsilon } => assert!((epsilon - 0.75).abs() < 1e-15),
            other => panic!("expected erasure, got {other:?}"),
        }
        match w.plus_transform().unwrap() {
            BmsChannel::Erasure { epsilon } => assert!((epsilon - 0.25).abs() < 1e-15),
            other => panic!("expected erasure, got {other:?}"),
        }
    }

    #[test]
    fn crossover_minus_merges_to_bsc() {
        // The parity of two BSC uses is again a BSC with parameter 2p(1-p).
        let p = 0.11;
        let w = BmsChannel::crossover(p).unwrap();
        let minus = w.minus_transform().unwrap();
        assert_eq!(minus.alphabet_size(), 2);
        let expect = BmsChannel::crossover(2.0 * p * (1.0 - p)).unwrap();
        assert!((minus.bhattacharyya() - expect.bhattacharyya()).abs() < 1e-12);
        assert!((minus.symmetric_capacity() - expect.symmetric_capacity()).abs() < 1e-12);
    }

    #[test]
    fn plus_z_is_square() {
        let w = BmsChannel::crossover(0.11).unwrap();
        let z = w.bhattacharyya();
        let zp = w.plus_transform().unwrap().bhattacharyya();
        assert!((zp - z * z).abs() < 1e-10, "zp={zp} z^2={}", z * z);
    }

    #[test]
    fn transform_laws_on_random_channels() {
        for seed in 0..20 {
            let w = BmsChannel::random_symmetric(3 + (seed as usize % 4), seed);
            let z = w.bhattacharyya();
            let i = w.symmetric_capacity();
            let minus = w.minus_transform().unwrap();
            let plus = w.plus_transform().unwrap();

            let zp = plus.bhattacharyya();
            assert!((zp - z * z).abs() < 1e-10, "seed {seed}: Z+ {zp} vs {}", z * z);

            let zm = minus.bhattacharyya();
            let lo = z * (2.0 - z * z).sqrt();
            let hi = 2.0 * z - z * z;
            assert!(
                zm >= lo - 1e-10 && zm <= hi + 1e-10,
                "seed {seed}: Z- {zm} outside [{lo}, {hi}]"
            );

            let sum = plus.symmetric_capacity() + minus.symmetric_capacity();
            assert!((sum - 2.0 * i).abs() < 1e-9, "seed {seed}: {sum} vs {}", 2.0 * i);
        }
    }

    #[test]
    fn minus_envelope_extremes() {
        // Upper Z- bound is met by erasure channels, lower by crossover.
        let e = 0.4;
        let w = BmsChannel::erasure(e).unwrap();
        let zm = w.minus_transform().unwrap().bhattacharyya();
        assert!((zm - (2.0 * e - e * e)).abs() < 1e-12);

        let p = 0.2;
        let w = BmsChannel::crossover(p).unwrap();
        let z = w.bhattacharyya();
        let zm = w.minus_transform().unwrap().bhattacharyya();
        assert!((zm - z * (2.0 - z * z).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn merging_preserves_scalars() {
        // A channel with duplicated columns merges without moving I or Z.
        let m = vec![
            vec![0.3, 0.3, 0.1, 0.1, 0.2],
            vec![0.1, 0.1, 0.3, 0.3, 0.2],
        ];
        let w = BmsChannel::explicit(m).unwrap();
        let merged = match &w {
            BmsChannel::Explicit(e) => {
                let mut merger = LrMerger::new();
                for y in 0..e.alphabet_size() {
                    let (a, b) = e.probs(y);
                    merger.add(a, b);
                }
                merger.into_channel(ALPHABET_CAP).unwrap()
            }
            _ => unreachable!(),
        };
        assert_eq!(merged.alphabet_size(), 3);
        assert!((merged.symmetric_capacity() - w.symmetric_capacity()).abs() < 1e-12);
        assert!((merged.bhattacharyya() - w.bhattacharyya()).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_channel_rejected() {
        let m = vec![vec![0.8, 0.2], vec![0.5, 0.5]];
        assert!(BmsChannel::explicit(m).is_err());
    }

    #[test]
    fn bad_row_sum_rejected() {
        let m = vec![vec![0.8, 0.1], vec![0.1, 0.8]];
        assert!(BmsChannel::explicit(m).is_err());
    }

    #[test]
    fn alphabet_cap_reported() {
        let w = BmsChannel::random_symmetric(4, 7);
        match w.minus_transform_with_cap(3) {
            Err(Error::AlphabetCap { cap: 3, .. }) => {}
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn channel_spec_round_trip() {
        for json in [
            r#"{"kind":"erasure","epsilon":0.5}"#,
            r#"{"kind":"crossover","p":0.11}"#,
        ] {
            let w: BmsChannel = serde_json::from_str(json).unwrap();
            let back = serde_json::to_string(&w).unwrap();
            let w2: BmsChannel = serde_json::from_str(&back).unwrap();
            assert_eq!(w, w2);
        }
        let bad = r#"{"kind":"erasure","epsilon":1.5}"#;
        assert!(serde_json::from_str::<BmsChannel>(bad).is_err());
    }

    #[test]
    fn transmit_and_llr_agree_on_noiseless() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let w = BmsChannel::crossover(0.0).unwrap();
        for x in [0u8, 1u8] {
            let y = w.transmit(x, &mut rng);
            let l = w.llr(y);
            assert!(if x == 0 { l > 0.0 } else { l < 0.0 });
        }
    }
}
