//! Bit-swizzle preconditioner for 32-bit RGBA values: output bits are
//! regrouped by significance, [R7 G7 B7 A7 R6 G6 B6 A6 ... R0 G0 B0 A0]
//! with R7 at bit 31. High-order groups change rarely across smooth
//! gradients, which turns them into long byte runs for the per-component
//! stage. A pure permutation; the inverse is exact.

use super::CodecError;

pub fn swizzle(data: &[u8]) -> Result<Vec<u8>, CodecError> {
    if data.len() % 4 != 0 {
        return Err(CodecError::NotPixelAligned(data.len()));
    }
    let mut out = vec![0u8; data.len()];
    for (pixel, chunk) in data.chunks_exact(4).enumerate() {
        let mut word = 0u32;
        for significance in (0..8).rev() {
            for (channel, &byte) in chunk.iter().enumerate() {
                let bit = (byte >> significance) & 1;
                let position = 31 - ((7 - significance) * 4 + channel);
                word |= (bit as u32) << position;
            }
        }
        out[pixel * 4..pixel * 4 + 4].copy_from_slice(&word.to_be_bytes());
    }
    Ok(out)
}

pub fn unswizzle(data: &[u8]) -> Result<Vec<u8>, CodecError> {
    if data.len() % 4 != 0 {
        return Err(CodecError::NotPixelAligned(data.len()));
    }
    let mut out = vec![0u8; data.len()];
    for (pixel, chunk) in data.chunks_exact(4).enumerate() {
        let word = u32::from_be_bytes(chunk.try_into().unwrap());
        for significance in (0..8).rev() {
            for channel in 0..4 {
                let position = 31 - ((7 - significance) * 4 + channel);
                let bit = ((word >> position) & 1) as u8;
                out[pixel * 4 + channel] |= bit << significance;
            }
        }
    }
    Ok(out)
}
