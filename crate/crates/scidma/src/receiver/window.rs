//! Windowed decoding schedule over the coupled chain.
//!
//! A window of `W_d` check positions slides from the left termination to the
//! right one. Each shift runs message passing inside the window only, then
//! finalizes the leftmost variable position: its bits are hard-decided and its
//! outgoing messages pinned, so later windows treat it as known. The last
//! shift finalizes everything that remains.

use crate::error::{Error, Result};
use crate::parity::ParityCheck;

use super::bp::{bp_iterate, hard_decision, MessageStore, Span, TannerGraph};

/// Window geometry for a chain with `L` variable and `L + W - 1` check
/// positions.
#[derive(Debug, Clone)]
pub struct WindowState {
    l: usize,
    w: usize,
    w_d: usize,
}

impl WindowState {
    /// Builds the schedule; `window` is the width `W_d` in check positions.
    pub fn new(h: &ParityCheck, window: usize) -> Result<Self> {
        Self::from_geometry(h.num_variable_positions(), h.coupling_width(), window)
    }

    pub fn from_geometry(l: usize, w: usize, window: usize) -> Result<Self> {
        if window < w {
            return Err(Error::InvalidArgument(format!(
                "window width {window} is below the coupling width {w}"
            )));
        }
        if window > l + w - 1 {
            return Err(Error::InvalidArgument(format!(
                "window width {window} exceeds the {} check positions",
                l + w - 1
            )));
        }
        Ok(Self { l, w, w_d: window })
    }

    pub fn window_width(&self) -> usize {
        self.w_d
    }

    /// Number of window shifts until the whole chain is decided.
    pub fn num_shifts(&self) -> usize {
        self.l + self.w - self.w_d
    }

    /// Active span at a given shift: checks `[p, p + W_d)` and the variable
    /// positions they involve that are not yet finalized.
    pub fn span(&self, shift: usize) -> Span {
        assert!(shift < self.num_shifts());
        Span {
            var_lo: shift,
            var_hi: (shift + self.w_d).min(self.l),
            chk_lo: shift,
            chk_hi: shift + self.w_d,
        }
    }

    /// Variable positions decided after this shift.
    pub fn finalized(&self, shift: usize) -> std::ops::Range<usize> {
        assert!(shift < self.num_shifts());
        if shift + 1 == self.num_shifts() {
            shift..self.l
        } else {
            shift..shift + 1
        }
    }
}

/// Single-user windowed sum-product decoding of channel LLRs. Returns the
/// hard decisions and the final a-posteriori LLRs.
pub fn window_decode(
    h: &ParityCheck,
    graph: &TannerGraph,
    channel: &[f64],
    window: usize,
    iterations: usize,
) -> Result<(Vec<u8>, Vec<f64>)> {
    let schedule = WindowState::new(h, window)?;
    let mut store = MessageStore::new(graph);
    let mut app = channel.to_vec();
    let mut decisions = vec![0u8; h.num_cols()];
    let vp = h.vars_per_position();
    for shift in 0..schedule.num_shifts() {
        let span = schedule.span(shift);
        for _ in 0..iterations {
            bp_iterate(graph, channel, &mut store, &span, &mut app);
        }
        for pos in schedule.finalized(shift) {
            let lo = pos * vp;
            for v in lo..lo + vp {
                decisions[v] = hard_decision(app[v]);
            }
            store.freeze_position(graph, pos, &decisions[lo..lo + vp]);
        }
    }
    Ok((decisions, app))
}
