//! Gaussian-approximation analysis: `phi` map, mutual-information transfer,
//! density evolution, thresholds and EXIT charts.

pub mod de;
pub mod exit;
pub mod jfun;
pub mod phi;
pub mod special;

pub use de::{
    capacity_gap_db, de_iterate, de_run, de_run_with, error_proxy, shannon_limit_db, threshold,
    DeGraph, DeOptions, DeOutcome, DeState, InterferenceModel,
};
pub use exit::{cnd_curve, standard_chart, trajectory, vnd_mud_curve, ExitCurve};
pub use jfun::{mean_of_mi, mi_of_mean};
pub use phi::{phi, phi_approx, phi_approx_inv, phi_inv, MU_MAX};

use crate::error::Result;
use crate::protograph::{CodeId, Protograph};

/// Sum rate `N R_c / d_r` used for capacity gaps.
pub fn sum_rate(code_rate: f64, d_r: u32, n_users: usize) -> f64 {
    n_users as f64 * code_rate / d_r as f64
}

/// One row of a user sweep: threshold and gap to capacity.
#[derive(Debug, Clone)]
pub struct GapPoint {
    pub n_users: usize,
    pub d_r: u32,
    pub r_sum: f64,
    pub threshold_db: Option<f64>,
    pub gap_db: Option<f64>,
}

/// DE-based gap-to-capacity sweep for the coupled `C1` chain over user counts
/// and repetition factors.
pub fn sweep_users(
    replication: usize,
    d_r_list: &[u32],
    n_list: &[usize],
    opts: &DeOptions,
) -> Result<Vec<GapPoint>> {
    let cp = CodeId::C1.coupled(replication)?;
    let graph = DeGraph::from_coupled(&cp);
    let r_c = cp.design_rate_unterminated();
    let mut out = Vec::new();
    for &d_r in d_r_list {
        for &n in n_list {
            let r_sum = sum_rate(r_c, d_r, n);
            // BPSK per-user rate cap: R_c/d_r <= 1 always holds, but the sum
            // rate must stay achievable for a threshold to exist at all.
            let bracket = (shannon_limit_db(r_sum) - 0.5, shannon_limit_db(r_sum) + 20.0);
            let th = threshold(&graph, d_r, n, bracket, 0.01, opts)?;
            out.push(GapPoint {
                n_users: n,
                d_r,
                r_sum,
                threshold_db: th,
                gap_db: th.map(|t| capacity_gap_db(r_sum, t)),
            });
        }
    }
    Ok(out)
}

/// The seven `(d_r, d_v, d_c)` configurations of the threshold table.
pub const THRESHOLD_TABLE_ROWS: [(u32, u32, u32); 7] = [
    (4, 3, 6),
    (4, 4, 8),
    (4, 5, 10),
    (4, 6, 12),
    (2, 3, 4),
    (2, 6, 8),
    (2, 9, 12),
];

/// Uncoupled and coupled thresholds for one table row, bisected to 0.01 dB.
pub fn table_row_thresholds(
    d_r: u32,
    d_v: u32,
    d_c: u32,
    n_users: usize,
    replication: usize,
    opts: &DeOptions,
) -> Result<(Option<f64>, Option<f64>)> {
    let base = Protograph::regular(d_v, d_c)?;
    let unc = DeGraph::from_protograph(&base);
    let parts = crate::protograph::regular_coupled_parts(d_v, d_c)?;
    let cp = crate::protograph::CoupledProtograph::couple(parts, replication)?;
    let cpl = DeGraph::from_coupled(&cp);
    let t_un = threshold(&unc, d_r, n_users, (-1.0, 20.0), 0.01, opts)?;
    let t_sc = threshold(&cpl, d_r, n_users, (-1.0, 20.0), 0.01, opts)?;
    Ok((t_un, t_sc))
}
