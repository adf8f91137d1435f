//! The Gaussian-approximation `phi` map and its inverse.
//!
//! `phi(mu) = 1 - E[tanh(u/2)]` with `u ~ N(mu, 2*mu)`, the mean-to-error
//! statistic of a consistent Gaussian LLR density. The hot path is served by
//! a dense interpolation table built once from composite-Simpson quadrature;
//! small arguments use a Taylor series and large arguments a matched
//! asymptotic expansion.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Means are clipped here so that `phi_inv` stays finite.
pub const MU_MAX: f64 = 1e4;

const SERIES_MAX: f64 = 1e-4;
const TABLE_MAX: f64 = 100.0;
const TABLE_POINTS: usize = 1 << 16;

/// Asymptotic expansion coefficients of
/// `phi(x) ~ sqrt(pi/x) e^{-x/4} (1 - a1/x + a2/x^2)`.
const ASYM_A1: f64 = PI * PI / 4.0;
const ASYM_A2: f64 = 7.611267695578846; // 5 pi^4 / 64

struct PhiTable {
    ln_lo: f64,
    step: f64,
    ln_phi: Vec<f64>,
    /// Multiplier matching the asymptotic branch to the table at `TABLE_MAX`.
    asym_scale_ln: f64,
}

static TABLE: OnceLock<PhiTable> = OnceLock::new();

fn table() -> &'static PhiTable {
    TABLE.get_or_init(|| {
        let ln_lo = SERIES_MAX.ln();
        let ln_hi = TABLE_MAX.ln();
        let step = (ln_hi - ln_lo) / TABLE_POINTS as f64;
        let ln_phi: Vec<f64> = (0..=TABLE_POINTS)
            .map(|k| phi_quadrature((ln_lo + step * k as f64).exp()).ln())
            .collect();
        let asym_scale_ln = ln_phi[TABLE_POINTS] - ln_asym_raw(TABLE_MAX);
        PhiTable {
            ln_lo,
            step,
            ln_phi,
            asym_scale_ln,
        }
    })
}

fn ln_asym_raw(x: f64) -> f64 {
    0.5 * (PI.ln() - x.ln()) - 0.25 * x + (1.0 - ASYM_A1 / x + ASYM_A2 / (x * x)).ln()
}

/// Direct numeric quadrature of the defining integral; used to build the
/// table (and independently exercised by the tests' oracles).
pub fn phi_quadrature(x: f64) -> f64 {
    assert!(x > 0.0);
    let sigma = (2.0 * x).sqrt();
    // Effective support: the N(x, 2x) factor limits |u - x|; the 2/(1+e^u)
    // factor suppresses u >> 0, so mass concentrates between u = 0 and the
    // Gaussian center. Below zero the log-integrand falls off like
    // u/2 - u^2/(4x) relative to the peak; cut where that reaches -40.
    let lo = -(x * ((1.0 + 160.0 / x).sqrt() - 1.0)) - sigma.min(1.0);
    let hi = x + 13.0 * sigma + 5.0;
    let feature = sigma.min(2.0) / 16.0;
    let mut n = ((hi - lo) / feature).ceil() as usize;
    n = n.clamp(200, 100_000);
    if n % 2 == 1 {
        n += 1;
    }
    let h = (hi - lo) / n as f64;
    let norm = 1.0 / (4.0 * PI * x).sqrt();
    let f = |u: f64| -> f64 {
        let t = 2.0 / (1.0 + u.exp());
        let d = u - x;
        t * (-d * d / (4.0 * x)).exp()
    };
    let mut acc = f(lo) + f(hi);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + h * k as f64);
    }
    acc * h / 3.0 * norm
}

fn phi_series(x: f64) -> f64 {
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x3 * x;
    let x5 = x4 * x;
    1.0 - x / 2.0 + (x3 + 6.0 * x2) / 24.0 - (x5 + 20.0 * x4 + 60.0 * x3) / 240.0
}

fn phi_series_deriv(x: f64) -> f64 {
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x3 * x;
    -0.5 + (3.0 * x2 + 12.0 * x) / 24.0 - (5.0 * x4 + 80.0 * x3 + 180.0 * x2) / 240.0
}

/// `phi(x)` for `x >= 0`; strictly decreasing, `phi(0) = 1`, `phi(x) -> 0`.
pub fn phi(x: f64) -> f64 {
    assert!(x >= 0.0, "phi: negative argument {x}");
    if x == 0.0 {
        return 1.0;
    }
    if x <= SERIES_MAX {
        return phi_series(x);
    }
    if x <= TABLE_MAX {
        let t = table();
        let pos = (x.ln() - t.ln_lo) / t.step;
        let k = (pos.floor() as usize).min(TABLE_POINTS - 1);
        let frac = pos - k as f64;
        let ln_phi = t.ln_phi[k] * (1.0 - frac) + t.ln_phi[k + 1] * frac;
        return ln_phi.exp();
    }
    let t = table();
    (t.asym_scale_ln + ln_asym_raw(x)).exp()
}

/// Inverse of `phi` on `(0, 1]`; result clipped to [`MU_MAX`].
pub fn phi_inv(y: f64) -> f64 {
    assert!(y > 0.0 && y <= 1.0, "phi_inv: argument {y} outside (0, 1]");
    if y == 1.0 {
        return 0.0;
    }
    let t = table();
    let y_series = t.ln_phi[0].exp();
    if y >= y_series {
        // Newton on the small-x series, seeded with the linear term.
        let mut x = 2.0 * (1.0 - y);
        for _ in 0..4 {
            x -= (phi_series(x) - y) / phi_series_deriv(x);
            x = x.max(0.0);
        }
        return x;
    }
    let ln_y = y.ln();
    let y_table_min = t.ln_phi[TABLE_POINTS];
    if ln_y >= y_table_min {
        // ln_phi is strictly decreasing: binary search, then invert the
        // same linear interpolation the forward direction uses.
        let idx = t.ln_phi.partition_point(|&v| v > ln_y);
        let k = idx.clamp(1, TABLE_POINTS) - 1;
        let (a, b) = (t.ln_phi[k], t.ln_phi[k + 1]);
        let frac = if b == a { 0.0 } else { (ln_y - a) / (b - a) };
        let ln_x = t.ln_lo + t.step * (k as f64 + frac);
        return ln_x.exp();
    }
    // Asymptotic branch: Newton on ln phi.
    let mut x = (-4.0 * (ln_y - t.asym_scale_ln - 0.5 * PI.ln())).max(TABLE_MAX);
    for _ in 0..60 {
        let g = t.asym_scale_ln + ln_asym_raw(x) - ln_y;
        let corr = 1.0 - ASYM_A1 / x + ASYM_A2 / (x * x);
        let dg = -0.25 - 0.5 / x + (ASYM_A1 / (x * x) - 2.0 * ASYM_A2 / (x * x * x)) / corr;
        let step = g / dg;
        x -= step;
        if x >= MU_MAX {
            return MU_MAX;
        }
        x = x.max(TABLE_MAX);
        if step.abs() < 1e-12 * x {
            break;
        }
    }
    x.min(MU_MAX)
}

/// Boundary between the two branches of the closed-form approximation.
///
/// The hand-off is often quoted at `x = 10`, but there the asymptotic branch
/// still sits slightly above the low branch, leaving a small upward jump that
/// breaks monotonicity (and hence invertibility). The two branches cross near
/// `x = 14.394`; switching exactly there keeps the map strictly decreasing
/// while changing its values by at most a couple of percent on `(10, 14.4)`.
const APPROX_SPLIT: f64 = 14.394352942168442;

/// Widely used closed-form approximation of `phi`:
/// `exp(-0.4527 x^0.86 + 0.0218)` below the branch point and the first-order
/// asymptotic `sqrt(pi/x) e^{-x/4} (1 - 10/(7x))` above.
///
/// Published decoding thresholds in the Gaussian-approximation literature are
/// computed with this map, so density evolution uses it; [`phi`] is the
/// quadrature-accurate version of the same integral.
pub fn phi_approx(x: f64) -> f64 {
    assert!(x >= 0.0, "phi_approx: negative argument {x}");
    if x == 0.0 {
        1.0
    } else if x < APPROX_SPLIT {
        (-0.4527 * x.powf(0.86) + 0.0218).exp()
    } else {
        (PI / x).sqrt() * (-x / 4.0).exp() * (1.0 - 10.0 / (7.0 * x))
    }
}

/// Inverse of [`phi_approx`] on `(0, 1]`, clipped to [`MU_MAX`].
pub fn phi_approx_inv(y: f64) -> f64 {
    assert!(y > 0.0 && y <= 1.0, "phi_approx_inv: argument {y} outside (0, 1]");
    if y >= phi_approx(0.0) {
        return 0.0;
    }
    if y > phi_approx(APPROX_SPLIT) {
        // The low branch inverts in closed form.
        return ((0.0218 - y.ln()) / 0.4527).powf(1.0 / 0.86);
    }
    // Newton on the log of the asymptotic branch.
    let ln_y = y.ln();
    let mut x = (-4.0 * (ln_y - 0.5 * PI.ln())).max(APPROX_SPLIT);
    for _ in 0..60 {
        let corr = 1.0 - 10.0 / (7.0 * x);
        let g = 0.5 * (PI.ln() - x.ln()) - 0.25 * x + corr.ln() - ln_y;
        let dg = -0.5 / x - 0.25 + 10.0 / (7.0 * x * x) / corr;
        let step = g / dg;
        x -= step;
        if x >= MU_MAX {
            return MU_MAX;
        }
        x = x.max(APPROX_SPLIT);
        if step.abs() < 1e-13 * x {
            break;
        }
    }
    x.min(MU_MAX)
}
