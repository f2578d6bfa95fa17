//! Parallel compositing schedules. A schedule is a list of (round, sender,
//! receiver, region, op) steps; building one is pure planning, executing one
//! applies the pixel kernels round by round. Within a round all payloads are
//! read before any is applied, so any concurrent execution of a round gives
//! the same result.

use crate::geometry::PixelViewport;

use super::image::Image;
use super::kernels::{blend_over, z_composite, BlendOrder};
use super::CompositingError;

pub type ChannelIndex = usize;

/// Which framebuffer attachments a transfer carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Buffers {
    pub color: bool,
    pub depth: bool,
}

impl Buffers {
    pub const COLOR: Buffers = Buffers { color: true, depth: false };
    pub const COLOR_DEPTH: Buffers = Buffers { color: true, depth: true };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositeOp {
    ZComposite,
    /// Receiver lays its own pixels over the received ones (the chain runs
    /// back to front).
    BlendOver,
    Copy,
    Accumulate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub round: u32,
    pub sender: ChannelIndex,
    pub receiver: ChannelIndex,
    pub region: PixelViewport,
    pub buffers: Buffers,
    pub op: CompositeOp,
}

#[derive(Debug, Clone)]
pub struct CompositeSchedule {
    pub channel_count: usize,
    pub destination: ChannelIndex,
    pub steps: Vec<Step>,
}

impl CompositeSchedule {
    pub fn rounds(&self) -> u32 {
        self.steps.iter().map(|s| s.round).max().unwrap_or(0)
    }

    pub fn count_op(&self, op: CompositeOp) -> usize {
        self.steps.iter().filter(|s| s.op == op).count()
    }
}

/// Horizontal band `i` of `n`, counted from the top; the last band is
/// clipped when the height does not divide evenly.
pub fn band(pvp: &PixelViewport, i: usize, n: usize) -> PixelViewport {
    let band_h = (pvp.h as usize).div_ceil(n) as i32;
    let top = pvp.y + pvp.h - band_h * i as i32;
    let bottom = (top - band_h).max(pvp.y);
    if top <= pvp.y {
        return PixelViewport::new(pvp.x, pvp.y, 0, 0);
    }
    PixelViewport::new(pvp.x, bottom, pvp.w, top - bottom)
}

/// Direct send: every channel is responsible for one band. Round 1
/// exchanges color+depth bands between all pairs, round 2 collects the
/// completed bands (color only) on the destination.
pub fn build_direct_send(
    channel_count: usize,
    destination: ChannelIndex,
    pvp: &PixelViewport,
) -> Result<CompositeSchedule, CompositingError> {
    if channel_count < 2 {
        return Err(CompositingError::TooFewChannels(channel_count));
    }
    let mut steps = Vec::new();
    for sender in 0..channel_count {
        for receiver in 0..channel_count {
            if sender == receiver {
                continue;
            }
            steps.push(Step {
                round: 1,
                sender,
                receiver,
                region: band(pvp, receiver, channel_count),
                buffers: Buffers::COLOR_DEPTH,
                op: CompositeOp::ZComposite,
            });
        }
    }
    for sender in 0..channel_count {
        if sender != destination {
            steps.push(Step {
                round: 2,
                sender,
                receiver: destination,
                region: band(pvp, sender, channel_count),
                buffers: Buffers::COLOR,
                op: CompositeOp::Copy,
            });
        }
    }
    Ok(CompositeSchedule { channel_count, destination, steps })
}

fn split_region(region: &PixelViewport, parts: usize, horizontal: bool) -> Vec<PixelViewport> {
    let mut out = Vec::with_capacity(parts);
    if horizontal {
        let mut y = region.y;
        for i in 0..parts {
            let h = (region.h + i as i32) / parts as i32; // distribute remainder
            out.push(PixelViewport::new(region.x, y, region.w, h));
            y += h;
        }
    } else {
        let mut x = region.x;
        for i in 0..parts {
            let w = (region.w + i as i32) / parts as i32;
            out.push(PixelViewport::new(x, region.y, w, region.h));
            x += w;
        }
    }
    out
}

/// Binary swap for a power-of-two channel count: log2(n) pair-swap rounds
/// halving each channel's region, then a gather of the n owned regions.
pub fn build_binary_swap(
    channel_count: usize,
    destination: ChannelIndex,
    pvp: &PixelViewport,
) -> Result<CompositeSchedule, CompositingError> {
    if channel_count == 0 || !channel_count.is_power_of_two() {
        return Err(CompositingError::NotPowerOfTwo(channel_count));
    }
    let mut steps = Vec::new();
    let mut region: Vec<PixelViewport> = vec![*pvp; channel_count];
    let rounds = channel_count.trailing_zeros();
    for r in 0..rounds {
        for ch in 0..channel_count {
            let partner = ch ^ (1 << r);
            let halves = split_region(&region[ch], 2, r % 2 == 0);
            let keep_upper = (ch >> r) & 1 == 1;
            let (keep, send) = if keep_upper {
                (halves[1], halves[0])
            } else {
                (halves[0], halves[1])
            };
            steps.push(Step {
                round: r + 1,
                sender: ch,
                receiver: partner,
                region: send,
                buffers: Buffers::COLOR_DEPTH,
                op: CompositeOp::ZComposite,
            });
            region[ch] = keep;
        }
    }
    for ch in 0..channel_count {
        if ch != destination {
            steps.push(Step {
                round: rounds + 1,
                sender: ch,
                receiver: destination,
                region: region[ch],
                buffers: Buffers::COLOR,
                op: CompositeOp::Copy,
            });
        }
    }
    Ok(CompositeSchedule { channel_count, destination, steps })
}

/// 2-3 swap: works for any channel count by recursively splitting the
/// channel set into two (even counts) or three (odd counts) subsets, each
/// taking responsibility for a matching slice of the current region. Every
/// member forwards its pixels for foreign slices to one member of the
/// owning subset. Equals binary swap when n is a power of two and direct
/// send for n = 3.
pub fn build_23_swap(
    channel_count: usize,
    destination: ChannelIndex,
    pvp: &PixelViewport,
) -> Result<CompositeSchedule, CompositingError> {
    if channel_count < 2 {
        return Err(CompositingError::TooFewChannels(channel_count));
    }
    let mut steps = Vec::new();
    let mut owners: Vec<(ChannelIndex, PixelViewport)> = Vec::new();
    let channels: Vec<ChannelIndex> = (0..channel_count).collect();
    recurse_23(&channels, pvp, 0, &mut steps, &mut owners);
    let gather_round = steps.iter().map(|s| s.round).max().unwrap_or(0) + 1;
    for (ch, region) in owners {
        if ch != destination {
            steps.push(Step {
                round: gather_round,
                sender: ch,
                receiver: destination,
                region,
                buffers: Buffers::COLOR,
                op: CompositeOp::Copy,
            });
        }
    }
    Ok(CompositeSchedule { channel_count, destination, steps })
}

fn recurse_23(
    cohort: &[ChannelIndex],
    region: &PixelViewport,
    depth: u32,
    steps: &mut Vec<Step>,
    owners: &mut Vec<(ChannelIndex, PixelViewport)>,
) {
    let m = cohort.len();
    if m == 1 {
        owners.push((cohort[0], *region));
        return;
    }
    let k = if m % 2 == 0 { 2 } else { 3.min(m) };
    let parts = split_region(region, k, depth % 2 == 0);
    // Subset sizes as equal as possible, larger ones first.
    let base = m / k;
    let rem = m % k;
    let mut subsets: Vec<&[ChannelIndex]> = Vec::with_capacity(k);
    let mut at = 0;
    for i in 0..k {
        let len = base + usize::from(i < rem);
        subsets.push(&cohort[at..at + len]);
        at += len;
    }
    for (i, si) in subsets.iter().enumerate() {
        for (j, sj) in subsets.iter().enumerate() {
            if i == j {
                continue;
            }
            for (t, &sender) in si.iter().enumerate() {
                steps.push(Step {
                    round: depth + 1,
                    sender,
                    receiver: sj[t % sj.len()],
                    region: parts[j],
                    buffers: Buffers::COLOR_DEPTH,
                    op: CompositeOp::ZComposite,
                });
            }
        }
    }
    for (j, sj) in subsets.iter().enumerate() {
        recurse_23(sj, &parts[j], depth + 1, steps, owners);
    }
}

/// Streaming chain: channel i hands its accumulated frame to channel i+1
/// which composites its own rendering on top; the last channel is the
/// destination.
pub fn build_stream_chain(
    channel_count: usize,
    op: CompositeOp,
    pvp: &PixelViewport,
) -> Result<CompositeSchedule, CompositingError> {
    if channel_count < 2 {
        return Err(CompositingError::TooFewChannels(channel_count));
    }
    let buffers = match op {
        CompositeOp::ZComposite => Buffers::COLOR_DEPTH,
        _ => Buffers::COLOR,
    };
    let steps = (0..channel_count - 1)
        .map(|i| Step {
            round: i as u32 + 1,
            sender: i,
            receiver: i + 1,
            region: *pvp,
            buffers,
            op,
        })
        .collect();
    Ok(CompositeSchedule { channel_count, destination: channel_count - 1, steps })
}

/// Runs a schedule over per-channel source images and returns the
/// destination channel's final image. Deterministic: payloads of one round
/// are all captured before any step of the round is applied, and steps
/// apply in (receiver, sender) order.
pub fn execute_schedule(
    schedule: &CompositeSchedule,
    sources: &[Image],
) -> Result<Image, CompositingError> {
    if sources.len() != schedule.channel_count {
        return Err(CompositingError::MismatchedViewports);
    }
    let mut state: Vec<Image> = sources.to_vec();
    let mut rounds: Vec<u32> = schedule.steps.iter().map(|s| s.round).collect();
    rounds.sort_unstable();
    rounds.dedup();
    for round in rounds {
        let mut ordered: Vec<&Step> =
            schedule.steps.iter().filter(|s| s.round == round).collect();
        ordered.sort_by_key(|s| (s.receiver, s.sender));
        let payloads: Vec<Option<Image>> = ordered
            .iter()
            .map(|s| {
                let clipped = s.region.intersect(&state[s.sender].pvp);
                if clipped.is_empty() {
                    None
                } else {
                    Some(state[s.sender].extract(&clipped).expect("region inside sender"))
                }
            })
            .collect();
        for (step, payload) in ordered.iter().zip(payloads) {
            let Some(mut payload) = payload else { continue };
            if !step.buffers.depth {
                payload.depth = None;
            }
            let dst = &mut state[step.receiver];
            match step.op {
                CompositeOp::ZComposite => z_composite(dst, &payload)?,
                CompositeOp::BlendOver => blend_over(dst, &payload, BlendOrder::FrontToBack)?,
                CompositeOp::Copy => {
                    for y in payload.pvp.y..payload.pvp.y + payload.pvp.h {
                        for x in payload.pvp.x..payload.pvp.x + payload.pvp.w {
                            dst.set_rgba(x, y, payload.rgba(x, y));
                        }
                    }
                    dst.roi = dst.roi.union(&payload.pvp);
                }
                CompositeOp::Accumulate => {
                    return Err(CompositingError::UnorderedBlend);
                }
            }
        }
    }
    Ok(state[schedule.destination].clone())
}

/// Folds inputs in arrival order with a commutative operation. Ordered
/// blending depends on configuration order and is rejected here.
pub fn assemble_out_of_order(
    op: CompositeOp,
    arrivals: &[Image],
) -> Result<Image, CompositingError> {
    match op {
        CompositeOp::BlendOver => Err(CompositingError::UnorderedBlend),
        CompositeOp::Accumulate => super::kernels::accumulate_average(arrivals),
        CompositeOp::ZComposite | CompositeOp::Copy => {
            let mut iter = arrivals.iter();
            let first = iter.next().ok_or(CompositingError::NoInputs)?;
            let mut acc = first.clone();
            for img in iter {
                if op == CompositeOp::ZComposite {
                    z_composite(&mut acc, img)?;
                } else {
                    for y in img.pvp.y..img.pvp.y + img.pvp.h {
                        for x in img.pvp.x..img.pvp.x + img.pvp.w {
                            acc.set_rgba(x, y, img.rgba(x, y));
                        }
                    }
                }
            }
            Ok(acc)
        }
    }
}
