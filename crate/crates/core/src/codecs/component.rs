//! Byte-granular RLE over the four color component planes. Marker byte
//! 0xff opens a (marker, value, count:u8) token; runs of three or more
//! identical bytes become tokens, and 0xff bytes are always tokenized so
//! the decoder can tell them from the marker.

use super::CodecError;

const MARKER: u8 = 0xff;

fn encode_plane(plane: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(plane.len() / 2 + 8);
    let mut i = 0usize;
    while i < plane.len() {
        let value = plane[i];
        let mut run = 1usize;
        while i + run < plane.len() && plane[i + run] == value && run < 255 {
            run += 1;
        }
        if run >= 3 || value == MARKER {
            out.push(MARKER);
            out.push(value);
            out.push(run as u8);
        } else {
            for _ in 0..run {
                out.push(value);
            }
        }
        i += run;
    }
    out
}

fn decode_plane(stream: &[u8], original_len: usize) -> Result<Vec<u8>, CodecError> {
    let mut out = Vec::with_capacity(original_len);
    let mut at = 0usize;
    while out.len() < original_len {
        if at >= stream.len() {
            return Err(CodecError::Truncated);
        }
        let byte = stream[at];
        at += 1;
        if byte == MARKER {
            if at + 2 > stream.len() {
                return Err(CodecError::Truncated);
            }
            let value = stream[at];
            let count = stream[at + 1] as usize;
            at += 2;
            if count == 0 || out.len() + count > original_len {
                return Err(CodecError::Corrupt("run overflows plane length"));
            }
            out.resize(out.len() + count, value);
        } else {
            out.push(byte);
        }
    }
    if at != stream.len() {
        return Err(CodecError::Corrupt("plane stream has trailing bytes"));
    }
    Ok(out)
}

pub fn encode_planes(data: &[u8]) -> Result<Vec<Vec<u8>>, CodecError> {
    if data.len() % 4 != 0 {
        return Err(CodecError::NotPixelAligned(data.len()));
    }
    Ok((0..4)
        .map(|c| {
            let plane: Vec<u8> = data.iter().skip(c).step_by(4).copied().collect();
            encode_plane(&plane)
        })
        .collect())
}

pub fn decode_planes(streams: &[Vec<u8>], original_len: usize) -> Result<Vec<u8>, CodecError> {
    if streams.len() != 4 {
        return Err(CodecError::Corrupt("expected four component streams"));
    }
    if original_len % 4 != 0 {
        return Err(CodecError::NotPixelAligned(original_len));
    }
    let plane_len = original_len / 4;
    let mut out = vec![0u8; original_len];
    for (c, stream) in streams.iter().enumerate() {
        let plane = decode_plane(stream, plane_len)?;
        for (i, v) in plane.into_iter().enumerate() {
            out[i * 4 + c] = v;
        }
    }
    Ok(out)
}
