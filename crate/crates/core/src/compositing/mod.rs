//! Image recombination: depth and blend kernels, tile assembly, subpixel
//! averaging, and parallel compositing schedules (direct send, binary swap,
//! 2-3 swap, streaming chains) with out-of-order assembly.

mod image;
mod kernels;
mod schedule;

pub use image::{Image, BACKGROUND_DEPTH};
pub use kernels::{accumulate_average, assemble_tile, blend_over, z_composite, BlendOrder};
pub use schedule::{
    assemble_out_of_order, band, build_23_swap, build_binary_swap, build_direct_send,
    build_stream_chain, execute_schedule, Buffers, ChannelIndex, CompositeOp, CompositeSchedule,
    Step,
};

use crate::geometry::PixelViewport;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CompositingError {
    #[error("operation requires a depth buffer on both images")]
    MissingDepth,
    #[error("{what} {region:?} does not fit within {within:?}")]
    OutOfBounds {
        what: &'static str,
        region: PixelViewport,
        within: PixelViewport,
    },
    #[error("images must share the same pixel viewport")]
    MismatchedViewports,
    #[error("no input images")]
    NoInputs,
    #[error("ordered blending cannot run out of order")]
    UnorderedBlend,
    #[error("need at least two channels, got {0}")]
    TooFewChannels(usize),
    #[error("binary swap needs a power-of-two channel count, got {0}")]
    NotPowerOfTwo(usize),
}
