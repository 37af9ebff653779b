use super::{CodeError, Result};

/// Repeats every bit `factor` times: `(b0, b1) ↦ (b0 × L, b1 × L)`.
pub fn repetition_encode(bits: &[u8], factor: usize) -> Result<Vec<u8>> {
    if factor == 0 {
        return Err(CodeError::RepetitionFactor);
    }
    Ok(bits
        .iter()
        .flat_map(|&b| std::iter::repeat_n(b & 1, factor))
        .collect())
}

/// Sums each group of `factor` LLRs (`ln(P1/P0)`) and slices at zero; a sum
/// of exactly zero decodes to 0.
pub fn repetition_soft_decode(llrs: &[f64], factor: usize) -> Result<Vec<u8>> {
    if factor == 0 {
        return Err(CodeError::RepetitionFactor);
    }
    if !llrs.len().is_multiple_of(factor) {
        return Err(CodeError::Length {
            expected: llrs.len().next_multiple_of(factor),
            got: llrs.len(),
        });
    }
    Ok(llrs
        .chunks_exact(factor)
        .map(|c| (c.iter().sum::<f64>() > 0.0) as u8)
        .collect())
}
