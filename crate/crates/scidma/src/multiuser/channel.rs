//! Complex-baseband multiple-access channel: equal-power users, optional
//! per-chip Rayleigh fading, circularly symmetric Gaussian noise.

use num_complex::Complex64;
use rand::Rng;

use crate::seed::{self, Stream};

/// Fading model per user and chip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelModel {
    /// Unit gains.
    Awgn,
    /// Independent unit-variance complex Gaussian gains per chip.
    Rayleigh,
}

/// Standard normal draw via Box-Muller.
pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    (-2.0 * u.ln()).sqrt() * v.cos()
}

/// Circularly symmetric complex Gaussian with unit total variance.
pub fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(
        standard_normal(rng) * std::f64::consts::FRAC_1_SQRT_2,
        standard_normal(rng) * std::f64::consts::FRAC_1_SQRT_2,
    )
}

/// Equal power split: amplitude `1/sqrt(N)` per user.
pub fn equal_amplitudes(n_users: usize) -> Vec<f64> {
    vec![1.0 / (n_users as f64).sqrt(); n_users]
}

/// Noise variance for a total-power SNR `gamma` in dB with unit sum power.
pub fn noise_variance(gamma_db: f64) -> f64 {
    10f64.powf(-gamma_db / 10.0)
}

/// One frame's channel gains; unit gains for [`ChannelModel::Awgn`].
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub model: ChannelModel,
    /// `gains[user][chip]`.
    pub gains: Vec<Vec<Complex64>>,
    /// Total noise variance per complex chip.
    pub sigma_n2: f64,
}

impl ChannelRealization {
    pub fn draw(
        model: ChannelModel,
        n_users: usize,
        n_chips: usize,
        sigma_n2: f64,
        master_seed: u64,
        frame: u64,
    ) -> Self {
        let gains = match model {
            ChannelModel::Awgn => vec![vec![Complex64::new(1.0, 0.0); n_chips]; n_users],
            ChannelModel::Rayleigh => (0..n_users)
                .map(|u| {
                    let mut rng =
                        seed::stream_rng(master_seed, Stream::Fading, (frame << 16) | u as u64);
                    (0..n_chips).map(|_| complex_normal(&mut rng)).collect()
                })
                .collect(),
        };
        Self {
            model,
            gains,
            sigma_n2,
        }
    }

    pub fn n_chips(&self) -> usize {
        self.gains[0].len()
    }
}

/// Superimposes all users through the channel and adds noise.
pub fn transmit(
    chips: &[Vec<Complex64>],
    amplitudes: &[f64],
    channel: &ChannelRealization,
    master_seed: u64,
    frame: u64,
) -> Vec<Complex64> {
    assert_eq!(chips.len(), amplitudes.len());
    assert_eq!(chips.len(), channel.gains.len());
    let n = channel.n_chips();
    let sigma = channel.sigma_n2.sqrt();
    let mut rng = seed::stream_rng(master_seed, Stream::Noise, frame);
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for ((user_chips, &a), gains) in chips.iter().zip(amplitudes).zip(&channel.gains) {
        assert_eq!(user_chips.len(), n);
        for ((ym, &x), &h) in y.iter_mut().zip(user_chips).zip(gains) {
            *ym += a * h * x;
        }
    }
    for ym in &mut y {
        *ym += sigma * complex_normal(&mut rng);
    }
    y
}
