//! Run-length coding over 64-bit words, comparing two RGBA pixels at a
//! time. A word equal to the all-ones marker introduces a
//! (marker, value, count) run token; runs of two or more identical words
//! become tokens, and literal words that collide with the marker are
//! escaped as runs of one. Trailing bytes that do not fill a word are
//! stored verbatim after the token stream.

use super::CodecError;

const MARKER: u64 = u64::MAX;

pub fn encode(data: &[u8]) -> Vec<u8> {
    let words = data.len() / 8;
    let tail = &data[words * 8..];
    let mut out = Vec::with_capacity(data.len() / 4 + 16);
    let word_at =
        |i: usize| u64::from_le_bytes(data[i * 8..i * 8 + 8].try_into().unwrap());
    let mut i = 0usize;
    while i < words {
        let value = word_at(i);
        let mut run = 1usize;
        while i + run < words && word_at(i + run) == value && run < u32::MAX as usize {
            run += 1;
        }
        if run >= 2 || value == MARKER {
            out.extend_from_slice(&MARKER.to_le_bytes());
            out.extend_from_slice(&value.to_le_bytes());
            out.extend_from_slice(&(run as u32).to_le_bytes());
        } else {
            out.extend_from_slice(&value.to_le_bytes());
        }
        i += run;
    }
    out.extend_from_slice(tail);
    out
}

pub fn decode(stream: &[u8], original_len: usize) -> Result<Vec<u8>, CodecError> {
    let words = original_len / 8;
    let tail_len = original_len - words * 8;
    let mut out = Vec::with_capacity(original_len);
    let mut at = 0usize;
    let read_u64 = |at: &mut usize| -> Result<u64, CodecError> {
        if *at + 8 > stream.len() {
            return Err(CodecError::Truncated);
        }
        let v = u64::from_le_bytes(stream[*at..*at + 8].try_into().unwrap());
        *at += 8;
        Ok(v)
    };
    while out.len() < words * 8 {
        let token = read_u64(&mut at)?;
        if token == MARKER {
            let value = read_u64(&mut at)?;
            if at + 4 > stream.len() {
                return Err(CodecError::Truncated);
            }
            let count = u32::from_le_bytes(stream[at..at + 4].try_into().unwrap()) as usize;
            at += 4;
            if count == 0 || out.len() + count * 8 > words * 8 {
                return Err(CodecError::Corrupt("run overflows original length"));
            }
            for _ in 0..count {
                out.extend_from_slice(&value.to_le_bytes());
            }
        } else {
            out.extend_from_slice(&token.to_le_bytes());
        }
    }
    if at + tail_len != stream.len() {
        return Err(CodecError::Corrupt("tail length mismatch"));
    }
    out.extend_from_slice(&stream[at..]);
    Ok(out)
}
