use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An explicit-channel transform would grow the output alphabet past the
    /// configured cap. Callers that hit this should switch to the bound-tracked
    /// recursion in `polarization` instead of exact transforms.
    #[error(
        "merged output alphabet ({size} symbols{at}) exceeds the cap of {cap}; \
         use the bound-tracked spectrum recursion instead of exact transforms"
    )]
    AlphabetCap {
        size: usize,
        cap: usize,
        /// Sub-channel index at which the recursion failed, when known.
        at: SubchannelCtx,
    },

    /// A request exceeded a hard memory or compute budget.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// Vector lengths disagree.
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// A construction method cannot be applied to the given channel.
    #[error("incompatible method: {0}")]
    IncompatibleMethod(String),

    /// An evaluation point fell outside the analytic tail bands.
    #[error("point {z} is outside the tail bands [0, {band}] and [1-{band}, 1]")]
    OutsideTailBand { z: f64, band: f64 },

    /// A bound target could not be met anywhere in the parameter sweep.
    /// Carries the best bound achieved so the caller can report it.
    #[error("target {target} unattainable within the sweep; best achieved bound {best} at log2(N) = {best_log2_n}")]
    TargetUnattainable {
        target: f64,
        best: f64,
        best_log2_n: f64,
    },
}

/// Optional sub-channel context for alphabet-cap errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubchannelCtx(pub Option<usize>);

impl std::fmt::Display for SubchannelCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.0 {
            Some(i) => write!(f, " at sub-channel {i}"),
            None => Ok(()),
        }
    }
}
