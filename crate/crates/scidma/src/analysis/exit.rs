//! EXIT chart computation for the detector/decoder loop.
//!
//! Two transfer curves: the check-node decoder, and the combined
//! MUD + repetition + variable-node decoder (the MUD feedback is folded into
//! the component by iterating its internal fixed point per a-priori input).
//! Trajectories are traced from density evolution: the flat recursion for a
//! block code and the position-averaged coupled chain.

use crate::analysis::de::{de_run_with, mud_transfer, DeGraph, DeOptions, DeOutcome};
use crate::analysis::jfun::{mean_of_mi, mi_of_mean};
use crate::analysis::phi::{phi_approx, phi_approx_inv, MU_MAX};
use crate::protograph::{CodeId, Protograph};

/// Sampled `(I_A, I_E)` transfer curve.
#[derive(Debug, Clone)]
pub struct ExitCurve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Check-node transfer curve for check degree `d_c`.
pub fn cnd_curve(d_c: u32, samples: usize) -> ExitCurve {
    let mut points = Vec::with_capacity(samples);
    for k in 0..samples {
        let i_a = k as f64 / (samples - 1) as f64 * 0.999_999;
        let mu_a = mean_of_mi(i_a);
        let q = 1.0 - phi_approx(mu_a.min(MU_MAX));
        let y = 1.0 - q.powi(d_c as i32 - 1);
        let mu_out = if y <= 0.0 {
            MU_MAX
        } else {
            phi_approx_inv(y.min(1.0))
        };
        points.push((i_a, mi_of_mean(mu_out.min(MU_MAX))));
    }
    ExitCurve {
        label: "CND".into(),
        points,
    }
}

/// Combined MUD + repetition + variable-node transfer curve for a regular
/// code with variable degree `d_v`.
pub fn vnd_mud_curve(d_v: u32, d_r: u32, n_users: usize, gamma_db: f64, samples: usize) -> ExitCurve {
    let noise_var = 10f64.powf(-gamma_db / 10.0);
    let mut points = Vec::with_capacity(samples);
    for k in 0..samples {
        let i_a = k as f64 / (samples - 1) as f64 * 0.999_999;
        let mu_c = mean_of_mi(i_a);
        // Internal MUD/REP fixed point given the check-side a-priori.
        let mut mu_mud = mud_transfer(0.0, n_users, noise_var);
        for _ in 0..200 {
            let mu_in = (d_r as f64 - 1.0) * mu_mud + d_v as f64 * mu_c;
            let next = mud_transfer(mu_in, n_users, noise_var);
            if (next - mu_mud).abs() < 1e-12 * (1.0 + next) {
                mu_mud = next;
                break;
            }
            mu_mud = next;
        }
        let mu_out = (d_r as f64 * mu_mud + (d_v - 1) as f64 * mu_c).min(MU_MAX);
        points.push((i_a, mi_of_mean(mu_out)));
    }
    ExitCurve {
        label: "MUD+REP+VND".into(),
        points,
    }
}

/// Decoding trajectory extracted from a density evolution run: per sweep the
/// average mutual information of variable-to-check and check-to-variable
/// means (position-averaged for the coupled chain).
pub fn trajectory(
    graph: &DeGraph,
    d_r: u32,
    n_users: usize,
    gamma_db: f64,
    opts: &DeOptions,
) -> (ExitCurve, DeOutcome) {
    let mut points = Vec::new();
    let outcome = de_run_with(graph, d_r, n_users, gamma_db, opts, |state| {
        if points.len() < 10_000 {
            let avg = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
            let i_v = mi_of_mean(avg(&state.mu_v2c).min(MU_MAX));
            let i_c = mi_of_mean(avg(&state.mu_c2v).min(MU_MAX));
            points.push((i_c, i_v));
        }
    });
    (
        ExitCurve {
            label: "trajectory".into(),
            points,
        },
        outcome,
    )
}

/// Curves and trajectories of the standard chart: CND, MUD+REP+VND, the flat
/// (block) trajectory and the coupled trajectory.
pub fn standard_chart(
    code: CodeId,
    replication: usize,
    d_r: u32,
    n_users: usize,
    gamma_db: f64,
    samples: usize,
) -> Vec<ExitCurve> {
    let (d_v, d_c) = match code {
        CodeId::C1 => (3, 6),
        CodeId::C2 => (3, 4),
    };
    let opts = DeOptions::default();
    let block = DeGraph::from_protograph(&Protograph::regular(d_v, d_c).unwrap());
    let coupled = DeGraph::from_coupled(&code.coupled(replication).unwrap());
    let (mut block_traj, _) = trajectory(&block, d_r, n_users, gamma_db, &opts);
    block_traj.label = "block trajectory".into();
    let (mut coupled_traj, _) = trajectory(&coupled, d_r, n_users, gamma_db, &opts);
    coupled_traj.label = "coupled trajectory".into();
    vec![
        vnd_mud_curve(d_v, d_r, n_users, gamma_db, samples),
        cnd_curve(d_c, samples),
        coupled_traj,
        block_traj,
    ]
}
