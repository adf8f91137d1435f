//! Short Monte Carlo BER waterfall for the coupled C1 code with eight users
//! on the AWGN multiple-access channel.
//!
//! The frame cap is kept small so the run finishes in a few minutes; raise
//! `max_frames`/`target_errors` (or pass a config to the `scidma ber`
//! subcommand) for publication-grade floors. The per-shift iteration budget
//! matters: the waterfall sits roughly 0.3 dB above the density evolution
//! threshold at 40 iterations but several dB above it at the quick-look
//! default of 10.

use scidma::harness::{ber_csv, run_ber, SimConfig};

fn main() {
    let cfg = SimConfig {
        gamma_db: vec![1.9, 2.2, 2.5, 2.8],
        lifting: 50,
        iterations: 40,
        max_frames: 64,
        target_errors: 200,
        ..SimConfig::default()
    };
    cfg.validate().expect("valid configuration");
    let result = run_ber(&cfg).expect("simulation runs");
    print!("{}", ber_csv(&result));
}
