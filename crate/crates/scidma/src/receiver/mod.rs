//! Single-user decoding machinery: repetition-code soft combiner, sum-product
//! belief propagation and the windowed decoding schedule.

pub mod bp;
pub mod rep;
pub mod window;

pub use bp::{MessageStore, Span, TannerGraph};
pub use rep::{rep_decode, rep_encode_soft};
pub use window::WindowState;

/// LLRs are clipped here to keep the tanh/atanh pipeline stable.
pub const LLR_CLIP: f64 = 30.0;

/// Stage of an LLR vector in the detection/decoding loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Detector extrinsic, symbol order.
    MudExtrinsic,
    /// Repetition a-priori (deinterleaved detector extrinsic).
    RepApriori,
    /// Repetition extrinsic feeding the LDPC decoder.
    RepExtrinsic,
    /// LDPC decoder a-posteriori.
    DecoderAposteriori,
    /// Mapper a-priori (feedback to the detector), symbol order.
    MapperApriori,
}

/// A per-user LLR vector with its loop stage and spatial-block geometry.
#[derive(Debug, Clone)]
pub struct LlrFrame {
    pub stage: Stage,
    pub user: usize,
    /// Values per bit (or per repetition replica, depending on stage).
    pub values: Vec<f64>,
    /// Length of one spatial position in this vector.
    pub block_len: usize,
}

impl LlrFrame {
    pub fn new(stage: Stage, user: usize, values: Vec<f64>, block_len: usize) -> Self {
        Self {
            stage,
            user,
            values,
            block_len,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Clips a single LLR.
#[inline]
pub fn clip(l: f64) -> f64 {
    l.clamp(-LLR_CLIP, LLR_CLIP)
}
