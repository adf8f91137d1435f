//! Gap to the Gaussian multiple-access capacity as the user count grows, for
//! the coupled C1 chain with a strong repetition factor.
//!
//! Each point is a density evolution threshold bisection; the full sweep over
//! N in {8, 16, ..., 64} takes a few minutes.

use scidma::analysis::{sweep_users, DeOptions};

fn main() {
    let opts = DeOptions::default();
    let n_list: Vec<usize> = (1..=8).map(|k| 8 * k).collect();
    let points = sweep_users(100, &[10], &n_list, &opts).expect("sweep runs");
    println!("d_r,n_users,r_sum,threshold_db,gap_db");
    for p in &points {
        println!(
            "{},{},{:.4},{},{}",
            p.d_r,
            p.n_users,
            p.r_sum,
            p.threshold_db.map_or("-".into(), |v| format!("{v:.2}")),
            p.gap_db.map_or("-".into(), |v| format!("{v:.2}"))
        );
    }
}
