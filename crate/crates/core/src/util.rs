//! Small numeric helpers shared across modules.

/// Threshold below which a truncated power base is treated as zero.
pub const POW_FLOOR: f64 = 1e-300;

/// Sub-roundoff band: normalized margins inside it are snapped to zero so
/// that analytically tight inequalities report an exact zero margin.
pub const MARGIN_SNAP: f64 = 1e-13;

/// `base_+^exponent` for possibly-fractional exponents: zero for any base
/// at or below the floor, `exp(exponent * ln base)` otherwise. Avoids NaN
/// from negative bases raised to non-integer powers.
pub fn pow_pos(base: f64, exponent: f64) -> f64 {
    if base > POW_FLOOR {
        (exponent * base.ln()).exp()
    } else {
        0.0
    }
}

/// Normalized margin of the inequality `lhs >= rhs`: positive means the
/// inequality holds. Normalization is by the larger side's magnitude, so
/// margins are comparable across probes spanning many orders of magnitude.
pub fn normalized_margin(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs()).max(POW_FLOOR);
    let margin = (lhs - rhs) / scale;
    if margin.abs() < MARGIN_SNAP {
        0.0
    } else {
        margin
    }
}

/// `n` points spanning `[lo, hi]` with logarithmic spacing (lo, hi > 0).
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo);
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (llo + (lhi - llo) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// `n` points spanning `[lo, hi]` with uniform spacing.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_pos_truncates_nonpositive_bases() {
        assert_eq!(pow_pos(-0.3, 0.5), 0.0);
        assert_eq!(pow_pos(0.0, 2.0), 0.0);
        assert!((pow_pos(2.0, 3.0) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn margin_sign_and_snap() {
        assert!(normalized_margin(2.0, 1.0) > 0.0);
        assert!(normalized_margin(1.0, 2.0) < 0.0);
        let nearly = 1.0 + 1e-15;
        assert_eq!(normalized_margin(nearly, 1.0), 0.0);
    }

    #[test]
    fn logspace_endpoints() {
        let v = logspace(1.0, 100.0, 3);
        assert!((v[0] - 1.0).abs() < 1e-12);
        assert!((v[1] - 10.0).abs() < 1e-9);
        assert!((v[2] - 100.0).abs() < 1e-9);
    }
}
