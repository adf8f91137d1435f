//! Flooding sum-product decoder over a lifted parity-check matrix, with node
//! updates restricted to an active span of spatial positions.

use crate::parity::ParityCheck;

use super::{clip, LLR_CLIP};

/// Edge-indexed view of the Tanner graph. Edge ids are check-major.
#[derive(Debug, Clone)]
pub struct TannerGraph {
    num_vars: usize,
    num_checks: usize,
    /// CSR over checks.
    check_start: Vec<u32>,
    edge_var: Vec<u32>,
    /// Edge ids per variable.
    var_edges: Vec<Vec<u32>>,
    vars_per_pos: usize,
    checks_per_pos: usize,
    num_var_positions: usize,
    num_chk_positions: usize,
}

impl TannerGraph {
    pub fn new(h: &ParityCheck) -> Self {
        let num_vars = h.num_cols();
        let num_checks = h.num_rows();
        let mut check_start = Vec::with_capacity(num_checks + 1);
        let mut edge_var = Vec::new();
        let mut var_edges = vec![Vec::new(); num_vars];
        check_start.push(0);
        for r in 0..num_checks {
            for &c in h.row(r) {
                var_edges[c as usize].push(edge_var.len() as u32);
                edge_var.push(c);
            }
            check_start.push(edge_var.len() as u32);
        }
        Self {
            num_vars,
            num_checks,
            check_start,
            edge_var,
            var_edges,
            vars_per_pos: h.vars_per_position(),
            checks_per_pos: h.checks_per_position(),
            num_var_positions: h.num_variable_positions(),
            num_chk_positions: h.num_check_positions(),
        }
    }

    pub fn num_edges(&self) -> usize {
        self.edge_var.len()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_checks(&self) -> usize {
        self.num_checks
    }

    pub fn num_var_positions(&self) -> usize {
        self.num_var_positions
    }

    pub fn num_chk_positions(&self) -> usize {
        self.num_chk_positions
    }

    pub fn vars_per_pos(&self) -> usize {
        self.vars_per_pos
    }

    /// True when the hard decisions of `app` satisfy every check in the span.
    /// Checks on the span boundary read frozen positions through `app` too,
    /// which still holds their final values.
    pub fn span_satisfied(&self, span: &Span, app: &[f64]) -> bool {
        for c in span.check_nodes(self) {
            let lo = self.check_start[c] as usize;
            let hi = self.check_start[c + 1] as usize;
            let mut parity = 0u8;
            for &v in &self.edge_var[lo..hi] {
                parity ^= hard_decision(app[v as usize]);
            }
            if parity != 0 {
                return false;
            }
        }
        true
    }
}

/// Per-edge message state; frozen positions keep their last values.
#[derive(Debug, Clone)]
pub struct MessageStore {
    pub v2c: Vec<f64>,
    pub c2v: Vec<f64>,
}

impl MessageStore {
    pub fn new(graph: &TannerGraph) -> Self {
        Self {
            v2c: vec![0.0; graph.num_edges()],
            c2v: vec![0.0; graph.num_edges()],
        }
    }

    /// Pins the variable-to-check messages of a decided position to the hard
    /// decisions, so boundary checks of later windows see them as certain.
    pub fn freeze_position(&mut self, graph: &TannerGraph, position: usize, decisions: &[u8]) {
        let lo = position * graph.vars_per_pos;
        for (off, &bit) in decisions.iter().enumerate() {
            let v = lo + off;
            let l = if bit == 0 { LLR_CLIP } else { -LLR_CLIP };
            for &e in &graph.var_edges[v] {
                self.v2c[e as usize] = l;
            }
        }
    }
}

/// Active span in spatial-position units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Span {
    /// Variable positions `[var_lo, var_hi)`.
    pub var_lo: usize,
    pub var_hi: usize,
    /// Check positions `[chk_lo, chk_hi)`.
    pub chk_lo: usize,
    pub chk_hi: usize,
}

impl Span {
    /// Full-span decoding: every position active.
    pub fn full(graph: &TannerGraph) -> Self {
        Self {
            var_lo: 0,
            var_hi: graph.num_var_positions,
            chk_lo: 0,
            chk_hi: graph.num_chk_positions,
        }
    }

    pub fn var_nodes(&self, graph: &TannerGraph) -> std::ops::Range<usize> {
        self.var_lo * graph.vars_per_pos..self.var_hi * graph.vars_per_pos
    }

    pub fn check_nodes(&self, graph: &TannerGraph) -> std::ops::Range<usize> {
        self.chk_lo * graph.checks_per_pos..self.chk_hi * graph.checks_per_pos
    }
}

/// One flooding iteration restricted to `span`: variable-to-check refresh,
/// check update, a-posteriori refresh. `app` entries of active variables are
/// overwritten with `channel + sum of incoming check messages`.
pub fn bp_iterate(
    graph: &TannerGraph,
    channel: &[f64],
    store: &mut MessageStore,
    span: &Span,
    app: &mut [f64],
) {
    assert_eq!(channel.len(), graph.num_vars);
    assert_eq!(app.len(), graph.num_vars);
    for v in span.var_nodes(graph) {
        let total: f64 = graph.var_edges[v]
            .iter()
            .map(|&e| store.c2v[e as usize])
            .sum();
        for &e in &graph.var_edges[v] {
            store.v2c[e as usize] = clip(channel[v] + total - store.c2v[e as usize]);
        }
    }
    for c in span.check_nodes(graph) {
        let lo = graph.check_start[c] as usize;
        let hi = graph.check_start[c + 1] as usize;
        let mut sign = 1.0f64;
        let mut ln_sum = 0.0f64;
        let mut zero_count = 0u32;
        let mut zero_edge = usize::MAX;
        for e in lo..hi {
            let t = (store.v2c[e] / 2.0).tanh();
            if t == 0.0 {
                zero_count += 1;
                zero_edge = e;
            } else {
                if t < 0.0 {
                    sign = -sign;
                }
                ln_sum += t.abs().ln();
            }
        }
        for e in lo..hi {
            let ext = match zero_count {
                0 => {
                    let t = (store.v2c[e] / 2.0).tanh();
                    let mag = (ln_sum - t.abs().ln()).exp().min(1.0 - 1e-15);
                    let s = if t < 0.0 { -sign } else { sign };
                    2.0 * s * mag.atanh()
                }
                1 if e == zero_edge => {
                    let mag = ln_sum.exp().min(1.0 - 1e-15);
                    2.0 * sign * mag.atanh()
                }
                _ => 0.0,
            };
            store.c2v[e] = clip(ext);
        }
    }
    for v in span.var_nodes(graph) {
        let total: f64 = graph.var_edges[v]
            .iter()
            .map(|&e| store.c2v[e as usize])
            .sum();
        app[v] = channel[v] + total;
    }
}

/// Hard decision per LLR: non-negative maps to bit 0.
pub fn hard_decision(llr: f64) -> u8 {
    u8::from(llr < 0.0)
}
