//! Interleave-division multiple access: per-user interleavers, phase
//! scrambling, the Gaussian multiple-access channel and the joint windowed
//! receiver with soft interference cancellation.

pub mod channel;
pub mod interleaver;
pub mod joint;
pub mod mud;

pub use channel::{
    equal_amplitudes, noise_variance, transmit, ChannelModel, ChannelRealization,
};
pub use interleaver::{Interleaver, InterleaverKind};
pub use joint::{build_frame, joint_windowed_receive, FrameTx, JointOutcome};
pub use mud::{soft_symbol, soic_demap};
