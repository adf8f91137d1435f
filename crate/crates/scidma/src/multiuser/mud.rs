//! Soft interference cancellation detector.
//!
//! Per chip, each user's soft symbol estimate is subtracted from the received
//! sample; the residual interference power is averaged per spatial sub-block
//! and treated as extra Gaussian noise in the demapper LLR.

use num_complex::Complex64;

use crate::receiver::clip;

/// Soft symbol estimate `tanh(l/2) e^{j phase}` from a mapper a-priori LLR.
#[inline]
pub fn soft_symbol(apriori: f64, phase: f64) -> Complex64 {
    Complex64::from_polar((clip(apriori) / 2.0).tanh(), phase)
}

/// Demaps chips `range` of the received frame for every user and writes the
/// extrinsic LLRs into `extrinsic[user][range]`.
///
/// `range` must be aligned to `chips_per_block`, the sub-block span over which
/// residual interference power is averaged. `apriori[user]` holds mapper
/// a-priori LLRs in chip order for the whole frame.
#[allow(clippy::too_many_arguments)]
pub fn soic_demap(
    y: &[Complex64],
    range: std::ops::Range<usize>,
    gains: &[Vec<Complex64>],
    phases: &[Vec<f64>],
    amplitudes: &[f64],
    apriori: &[Vec<f64>],
    sigma_n2: f64,
    chips_per_block: usize,
    extrinsic: &mut [Vec<f64>],
) {
    let n_users = amplitudes.len();
    assert_eq!(range.start % chips_per_block, 0);
    assert_eq!(range.end % chips_per_block, 0);
    let mut soft: Vec<Vec<Complex64>> = vec![Vec::new(); n_users];
    for block_lo in range.clone().step_by(chips_per_block) {
        let block = block_lo..block_lo + chips_per_block;
        // Soft symbols and per-user residual powers over this block.
        let mut residual_power = vec![0.0f64; n_users];
        for i in 0..n_users {
            soft[i].clear();
            for m in block.clone() {
                let s = soft_symbol(apriori[i][m], phases[i][m]);
                residual_power[i] +=
                    gains[i][m].norm_sqr() * (1.0 - s.norm_sqr());
                soft[i].push(s);
            }
            residual_power[i] *=
                amplitudes[i] * amplitudes[i] / chips_per_block as f64;
        }
        let total_power: f64 = residual_power.iter().sum();
        for (m, off) in block.clone().zip(0..) {
            let mut cancel = Complex64::new(0.0, 0.0);
            for i in 0..n_users {
                cancel += amplitudes[i] * gains[i][m] * soft[i][off];
            }
            let residual_all = y[m] - cancel;
            for j in 0..n_users {
                let r = residual_all + amplitudes[j] * gains[j][m] * soft[j][off];
                let sigma_i2 = total_power - residual_power[j];
                let matched =
                    (r * gains[j][m].conj() * Complex64::from_polar(1.0, -phases[j][m])).re;
                extrinsic[j][m] = 4.0 * amplitudes[j] * matched / (sigma_i2 + sigma_n2);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiuser::channel::{
        equal_amplitudes, transmit, ChannelModel, ChannelRealization,
    };
    use rand::{Rng, SeedableRng};

    fn unit_gains(n_users: usize, n_chips: usize) -> Vec<Vec<Complex64>> {
        vec![vec![Complex64::new(1.0, 0.0); n_chips]; n_users]
    }

    #[test]
    fn single_user_is_matched_filter() {
        let n = 16;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(2);
        let phases: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        let y: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let sigma_n2 = 0.3;
        let mut ext = vec![vec![0.0; n]];
        soic_demap(
            &y,
            0..n,
            &unit_gains(1, n),
            &[phases.clone()],
            &[1.0],
            &[vec![0.0; n]],
            sigma_n2,
            n,
            &mut ext,
        );
        for m in 0..n {
            let want =
                4.0 * (y[m] * Complex64::from_polar(1.0, -phases[m])).re / sigma_n2;
            assert!((ext[0][m] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_apriori_interference_power() {
        // With no feedback, each of the other users contributes its full
        // power: for 8 equal-power users the effective SINR denominator is
        // 7/8 plus the noise variance.
        let n_users = 8;
        let n = 8;
        let amps = equal_amplitudes(n_users);
        let phases = vec![vec![0.0; n]; n_users];
        let apriori = vec![vec![0.0; n]; n_users];
        let y = vec![Complex64::new(1.0, 0.0); n];
        let sigma_n2 = 0.125;
        let mut ext = vec![vec![0.0; n]; n_users];
        soic_demap(
            &y,
            0..n,
            &unit_gains(n_users, n),
            &phases,
            &amps,
            &apriori,
            sigma_n2,
            n,
            &mut ext,
        );
        let want = 4.0 * amps[0] * 1.0 / (7.0 / 8.0 + sigma_n2);
        for j in 0..n_users {
            assert!((ext[j][0] - want).abs() < 1e-12, "user {j}: {}", ext[j][0]);
        }
    }

    #[test]
    fn perfect_feedback_removes_interference() {
        let n_users = 4;
        let n = 32;
        let amps = equal_amplitudes(n_users);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(8);
        let phases: Vec<Vec<f64>> = (0..n_users)
            .map(|_| {
                (0..n)
                    .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                    .collect()
            })
            .collect();
        let bits: Vec<Vec<f64>> = (0..n_users)
            .map(|_| (0..n).map(|_| if rng.gen() { 1.0 } else { -1.0 }).collect())
            .collect();
        let chips: Vec<Vec<Complex64>> = (0..n_users)
            .map(|i| {
                (0..n)
                    .map(|m| Complex64::from_polar(1.0, phases[i][m]) * bits[i][m])
                    .collect()
            })
            .collect();
        let sigma_n2 = 0.2;
        let ch = ChannelRealization::draw(ChannelModel::Awgn, n_users, n, sigma_n2, 6, 0);
        let y = transmit(&chips, &amps, &ch, 6, 0);
        // Certain a-priori on everyone: each user sees a clean channel.
        let apriori: Vec<Vec<f64>> = bits
            .iter()
            .map(|b| b.iter().map(|&x| x * 1e6).collect())
            .collect();
        let mut ext = vec![vec![0.0; n]; n_users];
        soic_demap(
            &y, 0..n, &ch.gains, &phases, &amps, &apriori, sigma_n2, n, &mut ext,
        );
        // Clean single-user chips for comparison.
        for j in 0..n_users {
            let solo = transmit(
                &[chips[j].clone()],
                &[amps[j]],
                &ChannelRealization {
                    model: ChannelModel::Awgn,
                    gains: vec![ch.gains[j].clone()],
                    sigma_n2,
                },
                6,
                0,
            );
            for m in 0..n {
                let want = 4.0 * amps[j]
                    * (solo[m] * Complex64::from_polar(1.0, -phases[j][m])).re
                    / sigma_n2;
                assert!((ext[j][m] - want).abs() < 1e-6, "user {j} chip {m}");
            }
        }
    }

    #[test]
    fn single_user_llr_moments() {
        // BPSK all-plus chips through AWGN: extrinsic LLRs are Gaussian with
        // mean 4 gamma and variance 8 gamma.
        let n = 200_000;
        let sigma_n2 = 0.5;
        let gamma = 1.0 / sigma_n2;
        let chips = vec![vec![Complex64::new(1.0, 0.0); n]];
        let ch = ChannelRealization::draw(ChannelModel::Awgn, 1, n, sigma_n2, 11, 0);
        let y = transmit(&chips, &[1.0], &ch, 11, 0);
        let mut ext = vec![vec![0.0; n]];
        soic_demap(
            &y,
            0..n,
            &ch.gains,
            &[vec![0.0; n]],
            &[1.0],
            &[vec![0.0; n]],
            sigma_n2,
            n,
            &mut ext,
        );
        let mean: f64 = ext[0].iter().sum::<f64>() / n as f64;
        let var: f64 = ext[0].iter().map(|l| (l - mean).powi(2)).sum::<f64>() / n as f64;
        assert!((mean - 4.0 * gamma).abs() < 0.05 * 4.0 * gamma, "mean {mean}");
        assert!((var - 8.0 * gamma).abs() < 0.05 * 8.0 * gamma, "var {var}");
    }
}
