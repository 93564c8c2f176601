//! The recursive supremum functional and its decay rates.
//!
//! Starting from a base function `f0` that is positive on (0,1) and vanishes
//! at both ends, each iterate is
//!
//! ```text
//! f_{k+1}(z) = sup_{y in [z sqrt(2-z^2), z(2-z)]} (f_k(z^2) + f_k(y)) / 2
//! ```
//!
//! for the Bhattacharyya variant, or the symmetric-spread analogue over
//! `[eps_l(x), eps_h(x)]` for the mutual-information variant. The ratio
//! `L_k = sup_z f_k(z)/f0(z)` contracts geometrically; `rho_k = -(1/k) log2 L_k`
//! is the decay rate of interest and is non-decreasing in `k`.
//!
//! Iterates live on a uniform grid. Off-grid evaluations interpolate
//! linearly, and the supremum over an interval is exact for the interpolant:
//! a range-maximum query over the enclosed grid samples plus evaluations at
//! both interval endpoints. Near 0 and 1 the ratio degenerates to 0/0, so a
//! fixed tail band is handled analytically instead: the boundary-exact
//! two-point recursions evaluated down to the closed-form `f0`, or, at
//! depths where that tree is too large, the known boundary limits
//! `2^{(alpha-1)k}` and `2^{(beta-1)k}`.

mod rmq;

use serde::{Deserialize, Serialize};

use crate::math::{h2, h2_inv};
use crate::{Error, Result};
use rmq::SparseTableMax;

/// Default grid resolution; `rho` values reported at this resolution move by
/// less than 1e-4 when the grid is doubled.
pub const DEFAULT_GRID_M: usize = 1 << 17;

/// Minimum accepted grid resolution.
pub const MIN_GRID_M: usize = 1 << 10;

/// Half-open tail bands `[0, TAIL_BAND]` and `[1 - TAIL_BAND, 1]` where the
/// grid ratio is replaced by analytic values.
pub const TAIL_BAND: f64 = 1e-3;

/// Largest iterate depth for which the analytic tail recursion (a binary
/// tree with `2^k` leaves) is evaluated exactly.
pub const TAIL_EXACT_MAX_K: u32 = 25;

/// Depth limit for exact tail values inside [`lk_sup`]; beyond it the
/// boundary limits stand in. Kept smaller than [`TAIL_EXACT_MAX_K`] because
/// the sup visits every band grid point at every k.
const LK_SUP_TAIL_EXACT_K: u32 = 12;

/// Which single-step interval family drives the recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Intervals from the Bhattacharyya transform laws.
    Bhattacharyya,
    /// Intervals from the mutual-information transform laws.
    MutualInformation,
}

/// Boundary selector for the analytic tail recursions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    Left,
    Right,
}

/// A sampled iterate `f_k` on the uniform grid `z_j = j/M`, together with
/// the boundary-tail metadata needed for analytic handling.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    samples: Vec<f64>,
    left_exponent: f64,
    right_exponent: f64,
    k: u32,
    variant: Variant,
}

impl GridFunction {
    /// Grid resolution `M`; there are `M + 1` samples.
    pub fn grid_size(&self) -> usize {
        self.samples.len() - 1
    }

    /// Iteration index `k` (0 for the base function).
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Order of the left tail: `f ~ z^left_exponent` as `z -> 0`.
    pub fn left_exponent(&self) -> f64 {
        self.left_exponent
    }

    /// Order of the right tail: `f ~ (1-z)^right_exponent` as `z -> 1`.
    pub fn right_exponent(&self) -> f64 {
        self.right_exponent
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Linear interpolation at `z` in [0, 1].
    pub fn eval(&self, z: f64) -> f64 {
        debug_assert!((0.0..=1.0).contains(&z), "eval outside [0,1]: {z}");
        let m = self.grid_size();
        let t = z * m as f64;
        let j = (t as usize).min(m - 1);
        let frac = t - j as f64;
        self.samples[j] + frac * (self.samples[j + 1] - self.samples[j])
    }
}

/// Base function `f0(z) = z^alpha (1-z)^beta` sampled on `M + 1` points.
pub fn make_f0(alpha: f64, beta: f64, m: usize) -> Result<GridFunction> {
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !(0.0 < v && v < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} = {v} must lie in (0, 1)"
            )));
        }
    }
    check_grid(m)?;
    let mut samples = Vec::with_capacity(m + 1);
    samples.push(0.0);
    for j in 1..m {
        let z = j as f64 / m as f64;
        samples.push(z.powf(alpha) * (1.0 - z).powf(beta));
    }
    samples.push(0.0);
    Ok(GridFunction {
        samples,
        left_exponent: alpha,
        right_exponent: beta,
        k: 0,
        variant: Variant::Bhattacharyya,
    })
}

/// Base function of the mutual-information variant,
/// `g0(x) = (1 - sqrt(1 - x^2))^0.402 (1 - x^1.11)^0.604`.
///
/// Its tails have orders `x^0.804` (from `1 - sqrt(1-x^2) = x^2/2 + O(x^4)`)
/// and `(1-x)^0.604`, which are recorded for the boundary limits.
pub fn make_g0(m: usize) -> Result<GridFunction> {
    check_grid(m)?;
    let mut samples = Vec::with_capacity(m + 1);
    samples.push(0.0);
    for j in 1..m {
        let x = j as f64 / m as f64;
        samples.push(g0_closed(x));
    }
    samples.push(0.0);
    Ok(GridFunction {
        samples,
        left_exponent: 2.0 * 0.402,
        right_exponent: 0.604,
        k: 0,
        variant: Variant::MutualInformation,
    })
}

fn g0_closed(x: f64) -> f64 {
    // 1 - sqrt(1-x^2) rearranged to avoid cancellation for small x,
    // 1 - x^1.11 via expm1 to keep precision near x = 1.
    let a = x * x / (1.0 + (1.0 - x * x).sqrt());
    let b = -(1.11 * x.ln()).exp_m1();
    a.powf(0.402) * b.powf(0.604)
}

fn check_grid(m: usize) -> Result<()> {
    if m < MIN_GRID_M {
        return Err(Error::InvalidParameter(format!(
            "grid resolution {m} is below the minimum {MIN_GRID_M}"
        )));
    }
    Ok(())
}

/// Interval of admissible symmetric spreads for the mutual-information
/// recursion at `x`: the minus output `x - eps` may range from the
/// crossover-channel extreme up to the erasure-channel extreme `x^2`.
///
/// Guarantees `0 <= eps_l <= eps_h`, absorbing sub-1e-12 numerical noise.
pub fn eps_bounds(x: f64) -> (f64, f64) {
    debug_assert!((0.0..=1.0).contains(&x));
    let eps_h = x - x * x;
    let u = h2_inv(1.0 - x);
    let eps_l = x + h2(2.0 * u * (1.0 - u)) - 1.0;
    debug_assert!(eps_l >= -1e-12, "eps_l = {eps_l} at x = {x}");
    let eps_l = eps_l.clamp(0.0, eps_h);
    (eps_l, eps_h)
}

/// One Bhattacharyya-variant iterate.
///
/// The supremum over `[z sqrt(2-z^2), z(2-z)]` is exact for the piecewise-
/// linear interpolant: a range-maximum over enclosed grid samples combined
/// with evaluations at both interval endpoints.
pub fn step_fk(f: &GridFunction) -> Result<GridFunction> {
    if f.variant != Variant::Bhattacharyya {
        return Err(Error::InvalidParameter(
            "step_fk requires the bhattacharyya variant".into(),
        ));
    }
    let m = f.grid_size();
    let table = SparseTableMax::new(&f.samples);
    let mut samples = vec![0.0; m + 1];
    for (j, out) in samples.iter_mut().enumerate().take(m).skip(1) {
        let z = j as f64 / m as f64;
        let plus_part = f.eval(z * z);
        let lo = z * (2.0 - z * z).sqrt();
        let hi = z * (2.0 - z);
        let mut sup = f.eval(lo).max(f.eval(hi));
        let ilo = (lo * m as f64).ceil() as usize;
        let ihi = ((hi * m as f64).floor() as usize).min(m);
        if ilo <= ihi {
            sup = sup.max(table.max_in(ilo, ihi));
        }
        *out = 0.5 * (plus_part + sup);
    }
    Ok(GridFunction {
        samples,
        k: f.k + 1,
        ..*f
    })
}

/// Precomputed per-grid-point geometry for the mutual-information sweep.
/// The interval bounds depend only on `x`, so one table serves all iterates.
struct GkSweep {
    eps_l: Vec<f64>,
    eps_h: Vec<f64>,
}

impl GkSweep {
    fn new(m: usize) -> Self {
        let mut eps_l = Vec::with_capacity(m + 1);
        let mut eps_h = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let (l, h) = eps_bounds(j as f64 / m as f64);
            eps_l.push(l);
            eps_h.push(h);
        }
        Self { eps_l, eps_h }
    }
}

/// One mutual-information-variant iterate. See [`step_fk`] for the
/// discretization contract; here the objective couples `g(x+eps)` with
/// `g(x-eps)`, whose breakpoints coincide on the grid, so a scan over the
/// enclosed grid offsets plus both endpoint evaluations is again exact for
/// the interpolant.
pub fn step_gk(g: &GridFunction) -> Result<GridFunction> {
    let sweep = GkSweep::new(g.grid_size());
    step_gk_with(g, &sweep)
}

fn step_gk_with(g: &GridFunction, sweep: &GkSweep) -> Result<GridFunction> {
    if g.variant != Variant::MutualInformation {
        return Err(Error::InvalidParameter(
            "step_gk requires the mutual-information variant".into(),
        ));
    }
    let m = g.grid_size();
    let s = &g.samples;
    let mut samples = vec![0.0; m + 1];
    for (j, out) in samples.iter_mut().enumerate().take(m).skip(1) {
        let x = j as f64 / m as f64;
        let (el, eh) = (sweep.eps_l[j], sweep.eps_h[j]);
        let mut sup = 0.5 * (g.eval(x + el) + g.eval(x - el));
        sup = sup.max(0.5 * (g.eval(x + eh) + g.eval(x - eh)));
        let ilo = ((x + el) * m as f64).ceil() as usize;
        let ihi = (((x + eh) * m as f64).floor() as usize).min(2 * j).min(m);
        if ilo <= ihi {
            // the reflected argument x - eps lands exactly on grid index 2j - i
            let fwd = &s[ilo..=ihi];
            let rev = &s[2 * j - ihi..=2 * j - ilo];
            for (a, b) in fwd.iter().zip(rev.iter().rev()) {
                let cand = 0.5 * (a + b);
                if cand > sup {
                    sup = cand;
                }
            }
        }
        *out = sup;
    }
    Ok(GridFunction {
        samples,
        k: g.k + 1,
        ..*g
    })
}

/// Evaluates the boundary-exact recursion for `f_k` analytically at a point
/// inside a tail band, recursing down to the closed-form base function with
/// no grid interpolation.
///
/// Left tail: `f_{k+1}(z) = (f_k(z^2) + f_k(2z - z^2)) / 2`. Right tail uses
/// the mirrored recursion, computed in the distance-to-one coordinate to
/// avoid cancellation. Only the Bhattacharyya variant has closed-form tails.
pub fn tail_step(f: &GridFunction, side: TailSide, z: f64) -> Result<f64> {
    if f.variant != Variant::Bhattacharyya {
        return Err(Error::InvalidParameter(
            "analytic tail recursion applies to the bhattacharyya variant only".into(),
        ));
    }
    if f.k > TAIL_EXACT_MAX_K {
        return Err(Error::ResourceLimit(format!(
            "tail recursion depth {} exceeds {TAIL_EXACT_MAX_K} (2^k leaf evaluations)",
            f.k
        )));
    }
    let (alpha, beta) = (f.left_exponent, f.right_exponent);
    match side {
        TailSide::Left => {
            if !(0.0..=TAIL_BAND).contains(&z) {
                return Err(Error::OutsideTailBand { z, band: TAIL_BAND });
            }
            Ok(tail_left(f.k, z, alpha, beta))
        }
        TailSide::Right => {
            if !(1.0 - TAIL_BAND..=1.0).contains(&z) {
                return Err(Error::OutsideTailBand { z, band: TAIL_BAND });
            }
            Ok(tail_right(f.k, 1.0 - z, alpha, beta))
        }
    }
}

fn f0_closed(z: f64, alpha: f64, beta: f64) -> f64 {
    if z <= 0.0 || z >= 1.0 {
        return 0.0;
    }
    z.powf(alpha) * (1.0 - z).powf(beta)
}

fn tail_left(k: u32, z: f64, alpha: f64, beta: f64) -> f64 {
    if k == 0 {
        return f0_closed(z, alpha, beta);
    }
    let a = tail_left(k - 1, z * z, alpha, beta);
    let b = tail_left(k - 1, 2.0 * z - z * z, alpha, beta);
    0.5 * (a + b)
}

/// Right-tail recursion in the coordinate `u = 1 - z`. The two children are
/// `u -> u(2-u)` (from `z -> z^2`) and `u -> u^2 (2-u)^2 / (1 + z sqrt(2-z^2))`
/// (from `z -> z sqrt(2-z^2)`, rationalized so small `u` keeps full precision).
fn tail_right(k: u32, u: f64, alpha: f64, beta: f64) -> f64 {
    if k == 0 {
        // f0(1-u) = (1-u)^alpha u^beta, kept in the u coordinate so values
        // like u ~ 1e-24 do not collapse through 1 - (1 - u).
        if u <= 0.0 || u >= 1.0 {
            return 0.0;
        }
        return (1.0 - u).powf(alpha) * u.powf(beta);
    }
    let u1 = u * (2.0 - u);
    let z = 1.0 - u;
    let u2 = (u1 * u1) / (1.0 + z * (1.0 + u1).sqrt());
    let a = tail_right(k - 1, u1, alpha, beta);
    let b = tail_right(k - 1, u2, alpha, beta);
    0.5 * (a + b)
}

/// The ratio curve `L_k(z) = f_k(z) / f0(z)`, its supremum `L_k`, and the
/// rate `rho_k = -(1/k) log2 L_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentResult {
    pub k: u32,
    /// Supremum of the ratio curve over (0, 1).
    pub l_k: f64,
    /// `-(1/k) log2(L_k)`, in bits per level.
    pub rho_k: f64,
    /// Grid point attaining the supremum.
    pub argmax_z: f64,
    /// `L_k(z_j)` on the full grid; tail bands carry analytic values.
    pub curve: Vec<f64>,
}

/// Computes the ratio curve and its supremum.
///
/// Interior grid points divide the sampled iterate by the sampled base
/// function. Inside the tail bands the division degenerates to 0/0, so the
/// curve instead carries analytic values: the exact tail recursion while the
/// `2^k` tree is affordable, the boundary limits `2^{(alpha-1)k}` /
/// `2^{(beta-1)k}` beyond that (both sit strictly below the interior
/// supremum for every parameter set used here).
pub fn lk_sup(f_k: &GridFunction, f_0: &GridFunction) -> Result<ExponentResult> {
    if f_k.variant != f_0.variant {
        return Err(Error::InvalidParameter("variant mismatch".into()));
    }
    if f_k.grid_size() != f_0.grid_size() {
        return Err(Error::InvalidParameter("grid mismatch".into()));
    }
    if f_0.k != 0 || f_k.k == 0 {
        return Err(Error::InvalidParameter(
            "lk_sup expects an iterate and the base function".into(),
        ));
    }
    let m = f_k.grid_size();
    let k = f_k.k;
    let (alpha, beta) = (f_0.left_exponent, f_0.right_exponent);
    let left_limit = ((alpha - 1.0) * k as f64).exp2();
    let right_limit = ((beta - 1.0) * k as f64).exp2();
    let exact_tails = f_k.variant == Variant::Bhattacharyya && k <= LK_SUP_TAIL_EXACT_K;

    let mut curve = Vec::with_capacity(m + 1);
    let mut sup = f64::MIN;
    let mut argmax_z = 0.0;
    for j in 0..=m {
        let z = j as f64 / m as f64;
        let l = if z <= TAIL_BAND {
            if exact_tails && j > 0 {
                tail_left(k, z, alpha, beta) / f0_closed(z, alpha, beta)
            } else {
                left_limit
            }
        } else if z >= 1.0 - TAIL_BAND {
            if exact_tails && j < m {
                tail_right(k, 1.0 - z, alpha, beta) / f0_closed(z, alpha, beta)
            } else {
                right_limit
            }
        } else {
            f_k.samples[j] / f_0.samples[j]
        };
        if l > sup {
            sup = l;
            argmax_z = z;
        }
        curve.push(l);
    }
    Ok(ExponentResult {
        k,
        l_k: sup,
        rho_k: -sup.log2() / k as f64,
        argmax_z,
        curve,
    })
}

/// Iterates the functional `k_max` times and reports every `L_k`.
///
/// For the mutual-information variant the base function is fixed and
/// `alpha`/`beta` are ignored. The emitted `rho_k` sequence is non-decreasing
/// up to a 1e-4 tolerance.
pub fn rho_series(
    variant: Variant,
    alpha: f64,
    beta: f64,
    m: usize,
    k_max: u32,
) -> Result<Vec<ExponentResult>> {
    if k_max == 0 || k_max > 100 {
        return Err(Error::InvalidParameter(format!(
            "k_max = {k_max} must lie in 1..=100"
        )));
    }
    let f0 = match variant {
        Variant::Bhattacharyya => make_f0(alpha, beta, m)?,
        Variant::MutualInformation => make_g0(m)?,
    };
    let sweep = match variant {
        Variant::MutualInformation => Some(GkSweep::new(m)),
        Variant::Bhattacharyya => None,
    };
    let mut results = Vec::with_capacity(k_max as usize);
    let mut f = f0.clone();
    for _ in 0..k_max {
        f = match variant {
            Variant::Bhattacharyya => step_fk(&f)?,
            Variant::MutualInformation => step_gk_with(&f, sweep.as_ref().unwrap())?,
        };
        results.push(lk_sup(&f, &f0)?);
    }
    Ok(results)
}
