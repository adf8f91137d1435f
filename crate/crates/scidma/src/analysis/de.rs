//! Gaussian-approximation density evolution for the coupled ensemble with the
//! soft-interference-cancelling multi-user detector in the loop.
//!
//! Message means flow around the protograph: check-node update through
//! `phi`/`phi_inv`, the repetition-code combiner, the MUD transfer
//! `mu = 4 / (N sigma_n^2 + (N - 1) phi_approx(mu_in))`, and the variable-node sum.

use crate::analysis::phi::{phi_approx, phi_approx_inv, MU_MAX};
use crate::analysis::special::q_func;
use crate::error::{Error, Result};
use crate::protograph::{CoupledProtograph, Protograph};

/// Protograph edge structure used by density evolution. One edge per nonzero
/// base-matrix entry; parallel edges of one entry share a mean and enter the
/// update rules through the multiplicity exponent.
#[derive(Debug, Clone)]
pub struct DeGraph {
    num_rows: usize,
    num_cols: usize,
    edge_row: Vec<u32>,
    edge_col: Vec<u32>,
    edge_mult: Vec<u32>,
    row_edges: Vec<Vec<u32>>,
    col_edges: Vec<Vec<u32>>,
}

impl DeGraph {
    fn build<F: Fn(usize, usize) -> u32>(rows: usize, cols: usize, entry: F) -> Self {
        let mut edge_row = Vec::new();
        let mut edge_col = Vec::new();
        let mut edge_mult = Vec::new();
        let mut row_edges = vec![Vec::new(); rows];
        let mut col_edges = vec![Vec::new(); cols];
        for j in 0..rows {
            for i in 0..cols {
                let b = entry(j, i);
                if b == 0 {
                    continue;
                }
                let e = edge_row.len() as u32;
                edge_row.push(j as u32);
                edge_col.push(i as u32);
                edge_mult.push(b);
                row_edges[j].push(e);
                col_edges[i].push(e);
            }
        }
        Self {
            num_rows: rows,
            num_cols: cols,
            edge_row,
            edge_col,
            edge_mult,
            row_edges,
            col_edges,
        }
    }

    /// Uncoupled ensemble: the base matrix itself.
    pub fn from_protograph(p: &Protograph) -> Self {
        Self::build(p.num_check_types(), p.num_variable_types(), |j, i| {
            p.entry(j, i)
        })
    }

    /// Terminated coupled chain.
    pub fn from_coupled(cp: &CoupledProtograph) -> Self {
        Self::build(cp.num_rows(), cp.num_cols(), |j, i| cp.entry(j, i))
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn num_rows(&self) -> usize {
        self.num_rows
    }

    /// Endpoints `(check type, variable type)` of one edge.
    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        (self.edge_row[e] as usize, self.edge_col[e] as usize)
    }
}

/// Per-edge and per-position message means.
#[derive(Debug, Clone)]
pub struct DeState {
    /// Variable-to-check mean per protograph edge.
    pub mu_v2c: Vec<f64>,
    /// Check-to-variable mean per protograph edge.
    pub mu_c2v: Vec<f64>,
    /// MUD-to-variable mean per variable position.
    pub mu_mud: Vec<f64>,
    /// A-posteriori mean per variable position.
    pub mu_app: Vec<f64>,
    pub iterations: usize,
}

impl DeState {
    /// Zero-a-priori start: `phi_approx(0) = 1` so the MUD sees full interference.
    pub fn init(graph: &DeGraph, d_r: u32, n_users: usize, noise_var: f64) -> Self {
        let mu0 = mud_transfer(0.0, n_users, noise_var);
        Self {
            mu_v2c: vec![d_r as f64 * mu0; graph.edge_row.len()],
            mu_c2v: vec![0.0; graph.edge_row.len()],
            mu_mud: vec![mu0; graph.num_cols],
            mu_app: vec![d_r as f64 * mu0; graph.num_cols],
            iterations: 0,
        }
    }
}

/// MUD mean update: `4 / (N sigma_n^2 + (N - 1) phi_approx(mu_in))` for equal-power
/// users `P_i = 1/N`.
pub fn mud_transfer(mu_in: f64, n_users: usize, noise_var: f64) -> f64 {
    let n = n_users as f64;
    4.0 / (n * noise_var + (n - 1.0) * phi_approx(mu_in.min(MU_MAX)))
}

/// How the residual multiuser interference couples to chain position.
///
/// With sub-block interleaving the chips of one sub-block only collide with
/// the same sub-block of the other users, so every position sees its own
/// interference level. A frame-wide interleaver spreads each sub-block across
/// the whole codeword: converged and unconverged positions then share one
/// averaged interference level, which holds the decoding wave back until the
/// entire chain improves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InterferenceModel {
    /// Per-position interference (sub-block interleaving).
    #[default]
    Aligned,
    /// Frame-averaged interference (full-frame interleaving).
    FrameMixed,
}

/// One synchronized sweep: check-node update, then repetition/MUD, then
/// variable-node update.
pub fn de_iterate(
    graph: &DeGraph,
    d_r: u32,
    n_users: usize,
    noise_var: f64,
    model: InterferenceModel,
    state: &mut DeState,
) {
    let ne = graph.edge_row.len();
    // Check-node update. Work with ln(1 - phi_approx(mu)) per edge; entries with
    // phi = 1 contribute a true zero factor, tracked separately.
    let mut ln_q = vec![0.0f64; ne];
    for e in 0..ne {
        let p = phi_approx(state.mu_v2c[e].min(MU_MAX));
        ln_q[e] = if p >= 1.0 { f64::NEG_INFINITY } else { (-p).ln_1p() };
    }
    for j in 0..graph.num_rows {
        let edges = &graph.row_edges[j];
        let mut finite_sum = 0.0f64;
        let mut zero_mult = 0u32;
        for &e in edges {
            let e = e as usize;
            if ln_q[e].is_finite() {
                finite_sum += graph.edge_mult[e] as f64 * ln_q[e];
            } else {
                zero_mult += graph.edge_mult[e];
            }
        }
        for &e in edges {
            let e = e as usize;
            let own_zero = u32::from(!ln_q[e].is_finite());
            let remaining_zeros = zero_mult - own_zero;
            let mu = if remaining_zeros > 0 {
                0.0
            } else {
                let ln_prod = if own_zero == 1 {
                    finite_sum
                } else {
                    finite_sum - ln_q[e]
                };
                // y = 1 - e^{ln_prod}
                let y = -ln_prod.exp_m1();
                if y <= 0.0 {
                    MU_MAX
                } else {
                    phi_approx_inv(y.min(1.0))
                }
            };
            state.mu_c2v[e] = mu.min(MU_MAX);
        }
    }
    // Repetition combiner and MUD per position. Every column lifts to the
    // same number of code bits, so the frame average is a plain mean.
    let mut sums = vec![0.0f64; graph.num_cols];
    let mut mean_phi = 0.0f64;
    for i in 0..graph.num_cols {
        let sum_in: f64 = graph.col_edges[i]
            .iter()
            .map(|&e| {
                let e = e as usize;
                graph.edge_mult[e] as f64 * state.mu_c2v[e]
            })
            .sum();
        sums[i] = sum_in;
        let mu_to_mud = (d_r as f64 - 1.0) * state.mu_mud[i] + sum_in;
        match model {
            InterferenceModel::Aligned => {
                state.mu_mud[i] = mud_transfer(mu_to_mud, n_users, noise_var);
            }
            InterferenceModel::FrameMixed => {
                mean_phi += phi_approx(mu_to_mud.min(MU_MAX));
            }
        }
    }
    if model == InterferenceModel::FrameMixed {
        let n = n_users as f64;
        let mu = 4.0 / (n * noise_var + (n - 1.0) * mean_phi / graph.num_cols as f64);
        state.mu_mud.fill(mu);
    }
    // Variable-node update.
    for i in 0..graph.num_cols {
        let base = d_r as f64 * state.mu_mud[i] + sums[i];
        state.mu_app[i] = base.min(MU_MAX);
        for &e in &graph.col_edges[i] {
            let e = e as usize;
            state.mu_v2c[e] = (base - state.mu_c2v[e]).min(MU_MAX);
        }
    }
    state.iterations += 1;
}

/// Error proxy `Q(sqrt(mu/2))` of the a-posteriori mean.
pub fn error_proxy(mu_app: f64) -> f64 {
    q_func((mu_app / 2.0).sqrt())
}

/// Stopping rule parameters for a density evolution run.
///
/// On a terminated coupled chain the threshold depends on the iteration
/// budget: the convergence wave needs a number of sweeps proportional to the
/// chain length, so an unbounded budget drifts towards the (lower) infinite-
/// chain wave threshold. The default budget of 3000 sweeps is the operating
/// point the shipped threshold tables are quoted at.
#[derive(Debug, Clone, Copy)]
pub struct DeOptions {
    pub max_iterations: usize,
    /// Converged when every position's error proxy falls below this.
    pub target: f64,
    /// Declared stuck when the whole mean vector moves less than this
    /// (relative) between sweeps.
    pub stall_tol: f64,
    pub interference: InterferenceModel,
}

impl Default for DeOptions {
    fn default() -> Self {
        Self {
            max_iterations: 3000,
            target: 1e-10,
            stall_tol: 1e-10,
            interference: InterferenceModel::default(),
        }
    }
}

/// Outcome of a density evolution run at fixed SNR.
#[derive(Debug, Clone, PartialEq)]
pub enum DeOutcome {
    Converged { iterations: usize },
    /// Reached a fixed point above the target.
    Stalled { iterations: usize, max_error: f64 },
    /// Still moving when the iteration budget ran out.
    IterationLimit { max_error: f64 },
}

impl DeOutcome {
    pub fn converged(&self) -> bool {
        matches!(self, DeOutcome::Converged { .. })
    }
}

/// Runs density evolution at multi-user SNR `gamma_db` until convergence,
/// stall or iteration limit. `observer` sees the state after every sweep.
pub fn de_run_with<F: FnMut(&DeState)>(
    graph: &DeGraph,
    d_r: u32,
    n_users: usize,
    gamma_db: f64,
    opts: &DeOptions,
    mut observer: F,
) -> DeOutcome {
    let noise_var = 10f64.powf(-gamma_db / 10.0);
    let mut state = DeState::init(graph, d_r, n_users, noise_var);
    let mut prev_app = state.mu_app.clone();
    for _ in 0..opts.max_iterations {
        de_iterate(graph, d_r, n_users, noise_var, opts.interference, &mut state);
        observer(&state);
        let max_error = state
            .mu_app
            .iter()
            .map(|&m| error_proxy(m))
            .fold(0.0f64, f64::max);
        if max_error < opts.target {
            return DeOutcome::Converged {
                iterations: state.iterations,
            };
        }
        let moved = state
            .mu_app
            .iter()
            .zip(&prev_app)
            .map(|(&a, &b)| (a - b).abs() / (1.0 + a.abs()))
            .fold(0.0f64, f64::max);
        if moved < opts.stall_tol {
            return DeOutcome::Stalled {
                iterations: state.iterations,
                max_error,
            };
        }
        prev_app.copy_from_slice(&state.mu_app);
    }
    let max_error = state
        .mu_app
        .iter()
        .map(|&m| error_proxy(m))
        .fold(0.0f64, f64::max);
    DeOutcome::IterationLimit { max_error }
}

pub fn de_run(
    graph: &DeGraph,
    d_r: u32,
    n_users: usize,
    gamma_db: f64,
    opts: &DeOptions,
) -> DeOutcome {
    de_run_with(graph, d_r, n_users, gamma_db, opts, |_| {})
}

/// Decoding threshold by bisection to `tol_db`, or `None` when the upper
/// bracket edge does not converge (no threshold inside the bracket).
pub fn threshold(
    graph: &DeGraph,
    d_r: u32,
    n_users: usize,
    bracket_db: (f64, f64),
    tol_db: f64,
    opts: &DeOptions,
) -> Result<Option<f64>> {
    let (mut lo, mut hi) = bracket_db;
    if !(hi > lo) {
        return Err(Error::InvalidArgument("empty SNR bracket".into()));
    }
    if !de_run(graph, d_r, n_users, hi, opts).converged() {
        return Ok(None);
    }
    if de_run(graph, d_r, n_users, lo, opts).converged() {
        // Threshold below the bracket; report the lower edge.
        return Ok(Some(lo));
    }
    while hi - lo > tol_db {
        let mid = 0.5 * (lo + hi);
        if de_run(graph, d_r, n_users, mid, opts).converged() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Shannon limit of the real-input GMAC at sum rate `r_sum` under the
/// multi-user SNR convention: `gamma_Sh = 10 log10(2^{R_sum} - 1)`.
pub fn shannon_limit_db(r_sum: f64) -> f64 {
    assert!(r_sum > 0.0);
    10.0 * (2f64.powf(r_sum) - 1.0).log10()
}

/// Gap of a threshold to the GMAC capacity limit, in dB.
pub fn capacity_gap_db(r_sum: f64, gamma_star_db: f64) -> f64 {
    gamma_star_db - shannon_limit_db(r_sum)
}
