//! Joint multiuser reception: windowed decoding with soft interference
//! cancellation in the loop.
//!
//! Every window shift runs a fixed number of joint iterations. One iteration
//! demaps the active chips for all users, combines the repetition replicas
//! into decoder channel LLRs, performs one flooding sweep inside the window
//! and feeds soft symbol estimates back to the detector. Finalized positions
//! contribute exact remodulated symbols from then on.

use num_complex::Complex64;
use rand::Rng;

use crate::encoder::Encoder;
use crate::error::{Error, Result};
use crate::parity::ParityCheck;
use crate::receiver::bp::{bp_iterate, hard_decision, MessageStore, Span, TannerGraph};
use crate::receiver::window::WindowState;
use crate::receiver::{clip, LLR_CLIP};
use crate::seed::{self, Stream};

use super::channel::ChannelRealization;
use super::interleaver::{Interleaver, InterleaverKind};
use super::mud::soic_demap;

/// Transmit side of one frame for all users.
#[derive(Debug, Clone)]
pub struct FrameTx {
    /// Per-user code bits.
    pub codewords: Vec<Vec<u8>>,
    /// Per-user scrambled unit-modulus chips.
    pub chips: Vec<Vec<Complex64>>,
    /// Per-user scrambling phases.
    pub phases: Vec<Vec<f64>>,
}

/// Encodes, repeats, interleaves and scrambles one frame per user.
///
/// With `encoder` set, each user sends random information bits and phases are
/// drawn from `[0, pi)`. Without it the all-zero codeword is sent and phases
/// cover `[0, 2 pi)`, which keeps the composite signal unbiased.
pub fn build_frame(
    h: &ParityCheck,
    encoder: Option<&Encoder>,
    interleavers: &[Interleaver],
    d_r: usize,
    master_seed: u64,
    frame: u64,
) -> FrameTx {
    let n = h.num_cols();
    let n_users = interleavers.len();
    let phase_span = if encoder.is_some() {
        std::f64::consts::PI
    } else {
        std::f64::consts::TAU
    };
    let mut codewords = Vec::with_capacity(n_users);
    let mut chips = Vec::with_capacity(n_users);
    let mut phases = Vec::with_capacity(n_users);
    for (user, il) in interleavers.iter().enumerate() {
        let idx = (frame << 16) | user as u64;
        let cw = match encoder {
            Some(enc) => {
                let mut rng = seed::stream_rng(master_seed, Stream::InfoBits, idx);
                let info: Vec<u8> = (0..enc.dimension()).map(|_| rng.gen_range(0..2)).collect();
                enc.encode(&info)
            }
            None => vec![0u8; n],
        };
        let rep: Vec<u8> = cw.iter().flat_map(|&b| std::iter::repeat(b).take(d_r)).collect();
        let mut chip_bits = Vec::new();
        il.interleave(&rep, &mut chip_bits);
        let mut rng = seed::stream_rng(master_seed, Stream::Scrambler, idx);
        let ph: Vec<f64> = (0..rep.len()).map(|_| rng.gen_range(0.0..phase_span)).collect();
        let x: Vec<Complex64> = chip_bits
            .iter()
            .zip(&ph)
            .map(|(&b, &p)| Complex64::from_polar(1.0, p) * if b == 0 { 1.0 } else { -1.0 })
            .collect();
        codewords.push(cw);
        chips.push(x);
        phases.push(ph);
    }
    FrameTx {
        codewords,
        chips,
        phases,
    }
}

/// Result of a joint receive: per-user hard decisions and a-posteriori LLRs
/// on code bits.
#[derive(Debug, Clone)]
pub struct JointOutcome {
    pub decisions: Vec<Vec<u8>>,
    pub app: Vec<Vec<f64>>,
}

/// Runs the windowed multiuser receiver on one frame.
///
/// Full-frame interleavers break the locality the windowed schedule relies
/// on; that combination is rejected unless `allow_full_windowed` is set, in
/// which case one full-frame zero-a-priori demap seeds the decoder before the
/// window starts sliding.
#[allow(clippy::too_many_arguments)]
pub fn joint_windowed_receive(
    h: &ParityCheck,
    graph: &TannerGraph,
    y: &[Complex64],
    channel: &ChannelRealization,
    phases: &[Vec<f64>],
    amplitudes: &[f64],
    interleavers: &[Interleaver],
    d_r: usize,
    window: usize,
    iterations: usize,
    allow_full_windowed: bool,
) -> Result<JointOutcome> {
    let n_users = interleavers.len();
    let n = h.num_cols();
    let chips_total = n * d_r;
    let vp = h.vars_per_position();
    let cpb = vp * d_r;
    let schedule = WindowState::new(h, window)?;
    let full_frame_interleaving = interleavers
        .iter()
        .any(|il| il.kind() == InterleaverKind::Full);
    if full_frame_interleaving && schedule.num_shifts() > 1 && !allow_full_windowed {
        return Err(Error::InvalidConfig(
            "full-frame interleaving with a sliding window needs allow_full_windowed".into(),
        ));
    }
    assert_eq!(y.len(), chips_total);

    let mut rep_apriori = vec![vec![0.0f64; chips_total]; n_users];
    let mut mapper_apriori = vec![vec![0.0f64; chips_total]; n_users];
    let mut ext = vec![vec![0.0f64; chips_total]; n_users];
    let mut bp_channel = vec![vec![0.0f64; n]; n_users];
    let mut app = vec![vec![0.0f64; n]; n_users];
    let mut decisions = vec![vec![0u8; n]; n_users];
    let mut stores: Vec<MessageStore> = (0..n_users).map(|_| MessageStore::new(graph)).collect();
    let mut rep_ext = vec![0.0f64; chips_total];

    if full_frame_interleaving {
        soic_demap(
            y,
            0..chips_total,
            &channel.gains,
            phases,
            amplitudes,
            &mapper_apriori,
            channel.sigma_n2,
            cpb,
            &mut ext,
        );
        for u in 0..n_users {
            for m in 0..chips_total {
                rep_apriori[u][interleavers[u].source_of(m)] = ext[u][m];
            }
        }
    }

    let width = h.coupling_width();
    for shift in 0..schedule.num_shifts() {
        let span = schedule.span(shift);
        let chip_range = span.var_lo * cpb..span.var_hi * cpb;
        // Early-stop gate: everything in the window except the freshest
        // coupling width of positions at the right edge, which only converge
        // in later shifts. Demanding the whole window's syndrome would never
        // trigger; gating only the positions about to be finalized triggers
        // too eagerly and costs a few tenths of a dB, because the interior
        // state warm-starts the next shift.
        let fin_end = schedule.finalized(shift).end;
        let gate = Span {
            chk_hi: span
                .chk_hi
                .saturating_sub(width + 1)
                .max(span.chk_hi.min(fin_end + width + 1)),
            ..span.clone()
        };
        for it in 0..iterations {
            // Syndrome early stop: once every user's hard decisions satisfy
            // the gate checks, more sweeps no longer change what gets
            // committed. This is what makes a large iteration cap
            // affordable; only windows that are actually struggling use it.
            if it > 0 && (0..n_users).all(|u| graph.span_satisfied(&gate, &app[u])) {
                break;
            }
            soic_demap(
                y,
                chip_range.clone(),
                &channel.gains,
                phases,
                amplitudes,
                &mapper_apriori,
                channel.sigma_n2,
                cpb,
                &mut ext,
            );
            for u in 0..n_users {
                for m in chip_range.clone() {
                    rep_apriori[u][interleavers[u].source_of(m)] = ext[u][m];
                }
                for (v, chunk) in rep_apriori[u].chunks_exact(d_r).enumerate() {
                    bp_channel[u][v] = chunk.iter().sum();
                }
                bp_iterate(graph, &bp_channel[u], &mut stores[u], &span, &mut app[u]);
                for (r, slot) in rep_ext.iter_mut().enumerate() {
                    let v = r / d_r;
                    *slot = if v / vp < span.var_lo {
                        if decisions[u][v] == 0 { LLR_CLIP } else { -LLR_CLIP }
                    } else {
                        clip(app[u][v] - rep_apriori[u][r])
                    };
                }
                interleavers[u].interleave(&rep_ext, &mut mapper_apriori[u]);
            }
        }
        for pos in schedule.finalized(shift) {
            for u in 0..n_users {
                let lo = pos * vp;
                for v in lo..lo + vp {
                    decisions[u][v] = hard_decision(app[u][v]);
                }
                stores[u].freeze_position(graph, pos, &decisions[u][lo..lo + vp]);
            }
        }
    }
    Ok(JointOutcome { decisions, app })
}
