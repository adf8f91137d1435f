//! Rate `1/d_r` repetition code: soft combiner and soft re-encoder.

use crate::error::{Error, Result};

use super::{LlrFrame, Stage};

/// Sums each group of `d_r` replica LLRs into one code-bit LLR.
pub fn rep_decode_slice(replicas: &[f64], d_r: usize, out: &mut Vec<f64>) -> Result<()> {
    if d_r == 0 || replicas.len() % d_r != 0 {
        return Err(Error::DimensionMismatch(format!(
            "length {} not divisible by d_r = {d_r}",
            replicas.len()
        )));
    }
    out.clear();
    out.extend(replicas.chunks_exact(d_r).map(|c| c.iter().sum::<f64>()));
    Ok(())
}

/// Extrinsic replica LLRs on the feedback path: each decoder a-posteriori
/// value is replicated `d_r` times minus that replica's own detector input.
pub fn rep_encode_soft_slice(
    aposteriori: &[f64],
    own_inputs: &[f64],
    d_r: usize,
    out: &mut Vec<f64>,
) -> Result<()> {
    if own_inputs.len() != aposteriori.len() * d_r {
        return Err(Error::DimensionMismatch(format!(
            "{} a-posteriori values vs {} replica inputs with d_r = {d_r}",
            aposteriori.len(),
            own_inputs.len()
        )));
    }
    out.clear();
    out.reserve(own_inputs.len());
    for (m, &app) in aposteriori.iter().enumerate() {
        for k in 0..d_r {
            out.push(app - own_inputs[m * d_r + k]);
        }
    }
    Ok(())
}

/// Frame-level wrapper of [`rep_decode_slice`].
pub fn rep_decode(frame: &LlrFrame, d_r: usize) -> Result<LlrFrame> {
    assert_eq!(frame.stage, Stage::RepApriori);
    let mut values = Vec::new();
    rep_decode_slice(&frame.values, d_r, &mut values)?;
    Ok(LlrFrame::new(
        Stage::RepExtrinsic,
        frame.user,
        values,
        frame.block_len / d_r,
    ))
}

/// Frame-level wrapper of [`rep_encode_soft_slice`].
pub fn rep_encode_soft(
    decoder_out: &LlrFrame,
    own_inputs: &LlrFrame,
    d_r: usize,
) -> Result<LlrFrame> {
    assert_eq!(decoder_out.stage, Stage::DecoderAposteriori);
    let mut values = Vec::new();
    rep_encode_soft_slice(&decoder_out.values, &own_inputs.values, d_r, &mut values)?;
    Ok(LlrFrame::new(
        Stage::MapperApriori,
        decoder_out.user,
        values,
        decoder_out.block_len * d_r,
    ))
}
