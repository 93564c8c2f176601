//! Small numeric helpers shared by several modules. All logarithms are base 2.

/// Binary entropy function `h2(x) = -x log2 x - (1-x) log2 (1-x)`, with the
/// conventional continuous extension `h2(0) = h2(1) = 0`.
pub fn h2(x: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&x), "h2 argument out of range: {x}");
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Derivative of the binary entropy, `h2'(x) = log2((1-x)/x)` for `x` in (0,1).
pub fn h2_prime(x: f64) -> f64 {
    ((1.0 - x) / x).log2()
}

/// Inverse of the binary entropy on `[0, 1/2]`, computed by bisection.
///
/// Bisection runs to an interval width below 1e-16, comfortably inside the
/// 1e-14 target used by the callers.
pub fn h2_inv(y: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&y), "h2_inv argument out of range: {y}");
    if y <= 0.0 {
        return 0.0;
    }
    if y >= 1.0 {
        return 0.5;
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    // 60 halvings of [0, 0.5]: final width 0.5 * 2^-60 < 1e-18.
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if h2(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h2_endpoints_and_midpoint() {
        assert_eq!(h2(0.0), 0.0);
        assert_eq!(h2(1.0), 0.0);
        assert!((h2(0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn h2_known_values() {
        // h2(0.11) = 0.11*log2(1/0.11) + 0.89*log2(1/0.89)
        assert!((h2(0.11) - 0.499_915_958_164_528).abs() < 1e-12);
        assert!((h2(0.25) - 0.811_278_124_459_132_8).abs() < 1e-12);
    }

    #[test]
    fn h2_inv_round_trips() {
        for &y in &[1e-6, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0 - 1e-9] {
            let x = h2_inv(y);
            assert!((h2(x) - y).abs() < 1e-13, "y={y} x={x} h2(x)={}", h2(x));
        }
        assert!((h2_inv(0.5) - 0.110_027_864_438_359_55).abs() < 1e-12);
    }

    #[test]
    fn h2_prime_matches_finite_differences() {
        for &x in &[0.05, 0.11, 0.3, 0.45] {
            let h = 1e-7;
            let fd = (h2(x + h) - h2(x - h)) / (2.0 * h);
            assert!((h2_prime(x) - fd).abs() < 1e-6);
        }
    }
}
