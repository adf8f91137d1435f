//! Monte Carlo BER campaigns over the joint windowed receiver.
//!
//! Frames are independent work units; per-frame randomness is derived from
//! the master seed and the frame index, so results do not depend on the
//! thread count or reduction order.

use std::time::Instant;

use rayon::prelude::*;

use crate::encoder::Encoder;
use crate::error::Result;
use crate::multiuser::{
    build_frame, equal_amplitudes, joint_windowed_receive, noise_variance, transmit,
    ChannelRealization, Interleaver, InterleaverKind,
};
use crate::parity::ParityCheck;
use crate::receiver::bp::TannerGraph;

use super::config::SimConfig;

/// Frames per parallel batch; fixed so the stopping rule is deterministic.
const BATCH: u64 = 32;

/// One SNR point of a campaign.
#[derive(Debug, Clone)]
pub struct BerPoint {
    pub gamma_db: f64,
    pub frames: u64,
    /// Counted bits (info bits, or all code bits in all-zero mode).
    pub bits: u64,
    pub bit_errors: u64,
    /// User-frames containing at least one counted bit error.
    pub frame_errors: u64,
    /// Decoded user-frames (`frames` times the user count).
    pub user_frames: u64,
    /// Reached the configured error target (as opposed to the frame cap).
    pub reached_target: bool,
    /// Per spatial position: errors over all code bits of that position.
    pub position_errors: Vec<u64>,
    pub position_bits: Vec<u64>,
    pub seconds: f64,
}

impl BerPoint {
    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / self.bits as f64
    }

    pub fn fer(&self) -> f64 {
        self.frame_errors as f64 / self.user_frames as f64
    }
}

/// A full campaign: config echo plus one point per SNR value.
#[derive(Debug, Clone)]
pub struct SimResult {
    pub label: String,
    pub config: SimConfig,
    pub points: Vec<BerPoint>,
}

#[derive(Default, Clone)]
struct Counts {
    bit_errors: u64,
    frame_errors: u64,
    position_errors: Vec<u64>,
}

impl Counts {
    fn merge(mut self, other: Counts) -> Counts {
        if self.position_errors.is_empty() {
            return other;
        }
        if other.position_errors.is_empty() {
            return self;
        }
        self.bit_errors += other.bit_errors;
        self.frame_errors += other.frame_errors;
        for (a, b) in self.position_errors.iter_mut().zip(&other.position_errors) {
            *a += b;
        }
        self
    }
}

struct Campaign {
    h: ParityCheck,
    graph: TannerGraph,
    interleavers: Vec<Interleaver>,
    encoder: Option<Encoder>,
    counted_cols: Vec<usize>,
    amps: Vec<f64>,
}

impl Campaign {
    fn build(cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let cp = cfg.coupled()?;
        let h = ParityCheck::lift(&cp, cfg.lifting, cfg.master_seed, cfg.lifting_style)?;
        let graph = TannerGraph::new(&h);
        let total = h.num_cols() * cfg.d_r;
        let block = h.vars_per_position() * cfg.d_r;
        let interleavers = (0..cfg.n_users)
            .map(|u| Interleaver::new(cfg.interleaver, total, block, cfg.master_seed, u))
            .collect::<Result<Vec<_>>>()?;
        let encoder = if cfg.all_zero {
            None
        } else {
            Some(Encoder::from_parity(&h)?)
        };
        let counted_cols = match &encoder {
            Some(enc) => enc.info_cols().to_vec(),
            None => (0..h.num_cols()).collect(),
        };
        let amps = equal_amplitudes(cfg.n_users);
        Ok(Self {
            h,
            graph,
            interleavers,
            encoder,
            counted_cols,
            amps,
        })
    }

    fn simulate_frame(&self, cfg: &SimConfig, sigma_n2: f64, frame: u64) -> Result<Counts> {
        let tx = build_frame(
            &self.h,
            self.encoder.as_ref(),
            &self.interleavers,
            cfg.d_r,
            cfg.master_seed,
            frame,
        );
        let ch = ChannelRealization::draw(
            cfg.channel,
            cfg.n_users,
            tx.chips[0].len(),
            sigma_n2,
            cfg.master_seed,
            frame,
        );
        let y = transmit(&tx.chips, &self.amps, &ch, cfg.master_seed, frame);
        let out = joint_windowed_receive(
            &self.h,
            &self.graph,
            &y,
            &ch,
            &tx.phases,
            &self.amps,
            &self.interleavers,
            cfg.d_r,
            cfg.window,
            cfg.iterations,
            cfg.allow_full_windowed,
        )?;
        let vp = self.h.vars_per_position();
        let mut counts = Counts {
            position_errors: vec![0; self.h.num_variable_positions()],
            ..Counts::default()
        };
        for u in 0..cfg.n_users {
            let mut user_errors = 0u64;
            for &c in &self.counted_cols {
                if out.decisions[u][c] != tx.codewords[u][c] {
                    user_errors += 1;
                }
            }
            counts.bit_errors += user_errors;
            counts.frame_errors += u64::from(user_errors > 0);
            for (v, (&d, &t)) in out.decisions[u].iter().zip(&tx.codewords[u]).enumerate() {
                if d != t {
                    counts.position_errors[v / vp] += 1;
                }
            }
        }
        Ok(counts)
    }
}

/// Runs the campaign of `cfg` over its SNR grid.
pub fn run_ber(cfg: &SimConfig) -> Result<SimResult> {
    let campaign = Campaign::build(cfg)?;
    let bits_per_frame = (campaign.counted_cols.len() * cfg.n_users) as u64;
    let code_bits = campaign.h.num_cols() as u64;
    let vp = campaign.h.vars_per_position() as u64;
    let mut points = Vec::new();
    for &gamma_db in &cfg.gamma_db {
        let start = Instant::now();
        let sigma_n2 = noise_variance(gamma_db);
        let mut total = Counts {
            position_errors: vec![0; campaign.h.num_variable_positions()],
            ..Counts::default()
        };
        let mut frames = 0u64;
        while frames < cfg.max_frames && total.bit_errors < cfg.target_errors {
            let batch = BATCH.min(cfg.max_frames - frames);
            let batch_counts = (frames..frames + batch)
                .into_par_iter()
                .map(|f| campaign.simulate_frame(cfg, sigma_n2, f))
                .try_reduce(Counts::default, |a, b| Ok(a.merge(b)))?;
            total = total.merge(batch_counts);
            frames += batch;
        }
        let reached_target = total.bit_errors >= cfg.target_errors;
        points.push(BerPoint {
            gamma_db,
            frames,
            bits: frames * bits_per_frame,
            bit_errors: total.bit_errors,
            frame_errors: total.frame_errors,
            user_frames: frames * cfg.n_users as u64,
            reached_target,
            position_errors: total.position_errors,
            position_bits: vec![frames * vp * cfg.n_users as u64; (code_bits / vp) as usize],
            seconds: start.elapsed().as_secs_f64(),
        });
    }
    Ok(SimResult {
        label: "ber".into(),
        config: cfg.clone(),
        points,
    })
}

/// The interleaver ablation: sub-block with the sliding window, full-frame
/// with the sliding window (override on), and full-frame with one window
/// spanning the whole chain at a matched total iteration budget.
pub fn run_interleaver_comparison(cfg: &SimConfig) -> Result<Vec<SimResult>> {
    let w = cfg.coupled()?.coupling_width();
    let full_window = cfg.replication + w - 1;
    let num_shifts = (full_window - cfg.window + 1) as u64;

    let mut sub = cfg.clone();
    sub.interleaver = InterleaverKind::SubBlock;
    let mut sub_result = run_ber(&sub)?;
    sub_result.label = "sub_block_windowed".into();

    let mut full_win = cfg.clone();
    full_win.interleaver = InterleaverKind::Full;
    full_win.allow_full_windowed = true;
    let mut full_win_result = run_ber(&full_win)?;
    full_win_result.label = "full_windowed".into();

    let mut full_bp = cfg.clone();
    full_bp.interleaver = InterleaverKind::Full;
    full_bp.window = full_window;
    full_bp.iterations = cfg.iterations * num_shifts as usize;
    let mut full_bp_result = run_ber(&full_bp)?;
    full_bp_result.label = "full_flooding".into();

    Ok(vec![sub_result, full_win_result, full_bp_result])
}

/// CSV with the config echoed in `#` comment lines; byte-identical for
/// identical config and seed.
pub fn ber_csv(result: &SimResult) -> String {
    let mut out = String::new();
    out.push_str(&format!("# label: {}\n", result.label));
    for line in result.config.to_toml().lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str("gamma_db,frames,bits,bit_errors,ber,frame_errors,fer,reached_target\n");
    for p in &result.points {
        out.push_str(&format!(
            "{},{},{},{},{:e},{},{:e},{}\n",
            p.gamma_db,
            p.frames,
            p.bits,
            p.bit_errors,
            p.ber(),
            p.frame_errors,
            p.fer(),
            p.reached_target
        ));
    }
    out
}

/// Per spatial position BER profile as CSV, one row per (SNR, position).
pub fn profile_csv(result: &SimResult) -> String {
    let mut out = String::new();
    out.push_str("gamma_db,position,errors,bits,ber\n");
    for p in &result.points {
        for (pos, (&e, &b)) in p.position_errors.iter().zip(&p.position_bits).enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{:e}\n",
                p.gamma_db,
                pos,
                e,
                b,
                e as f64 / b as f64
            ));
        }
    }
    out
}
