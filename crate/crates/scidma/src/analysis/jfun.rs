//! Mutual information of a consistent Gaussian LLR density.
//!
//! `mi_of_mean(mu)` is the classic J-function expressed over the message mean
//! `mu` (variance `2 mu`): `I = 1 - E[log2(1 + e^{-L})]`, `L ~ N(mu, 2 mu)`.

use std::f64::consts::{LN_2, PI};

/// Mutual information in `[0, 1)` for a message mean `mu >= 0`.
pub fn mi_of_mean(mu: f64) -> f64 {
    assert!(mu >= 0.0);
    if mu == 0.0 {
        return 0.0;
    }
    let sigma = (2.0 * mu).sqrt();
    // Composite Simpson over l in mu +- 14 sigma; the integrand
    // log2(1 + e^{-l}) grows only linearly to the left, so the Gaussian
    // window dominates.
    let lo = mu - 14.0 * sigma;
    let hi = mu + 14.0 * sigma;
    let n = 2000usize;
    let h = (hi - lo) / n as f64;
    let norm = 1.0 / (4.0 * PI * mu).sqrt();
    let f = |l: f64| -> f64 {
        // ln(1 + e^{-l}) computed stably on both sides.
        let v = if l > 0.0 {
            (-l).exp().ln_1p()
        } else {
            -l + l.exp().ln_1p()
        };
        let d = l - mu;
        v / LN_2 * (-d * d / (4.0 * mu)).exp()
    };
    let mut acc = f(lo) + f(hi);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + h * k as f64);
    }
    (1.0 - acc * h / 3.0 * norm).clamp(0.0, 1.0)
}

/// Inverse of [`mi_of_mean`]: the mean whose consistent Gaussian density has
/// mutual information `i`.
pub fn mean_of_mi(i: f64) -> f64 {
    assert!((0.0..1.0).contains(&i), "mutual information {i} outside [0, 1)");
    if i == 0.0 {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while mi_of_mean(hi) < i {
        hi *= 2.0;
        if hi > 1e6 {
            return hi;
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mi_of_mean(mid) < i {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
