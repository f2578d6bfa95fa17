//! Per-pixel recombination kernels. All arithmetic is integer with fixed
//! rounding so results are identical on every platform.

use crate::geometry::PixelViewport;

use super::image::Image;
use super::CompositingError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlendOrder {
    /// `dst` has accumulated the nearer layers; `src` adds a farther one.
    FrontToBack,
    /// `dst` has accumulated the farther layers; `src` lays a nearer one
    /// over it.
    BackToFront,
}

/// `x * (255 - a) / 255` with the fixed `+127` rounding used everywhere.
#[inline]
fn scale_by_inverse_alpha(x: u32, a: u32) -> u32 {
    (x * (255 - a) + 127) / 255
}

/// Depth test per pixel over the overlap: the nearer source wins, ties keep
/// the destination.
pub fn z_composite(dst: &mut Image, src: &Image) -> Result<(), CompositingError> {
    if dst.depth.is_none() || src.depth.is_none() {
        return Err(CompositingError::MissingDepth);
    }
    let overlap = dst.pvp.intersect(&src.pvp).intersect(&src.roi);
    for y in overlap.y..overlap.y + overlap.h {
        for x in overlap.x..overlap.x + overlap.w {
            let si = src.index(x, y);
            let di = dst.index(x, y);
            let sd = src.depth.as_ref().unwrap()[si];
            let dd = dst.depth.as_ref().unwrap()[di];
            if sd < dd {
                dst.depth.as_mut().unwrap()[di] = sd;
                let c = &src.color[si * 4..si * 4 + 4];
                dst.color[di * 4..di * 4 + 4].copy_from_slice(c);
            }
        }
    }
    dst.roi = dst.roi.union(&overlap);
    Ok(())
}

/// Premultiplied-alpha "over" with integer rounding. For back-to-front the
/// source is the nearer layer: `out = src + dst * (255 - src.a)`; for
/// front-to-back the destination has accumulated the nearer layers:
/// `out = dst + src * (255 - dst.a)`.
pub fn blend_over(dst: &mut Image, src: &Image, order: BlendOrder) -> Result<(), CompositingError> {
    let overlap = dst.pvp.intersect(&src.pvp).intersect(&src.roi);
    for y in overlap.y..overlap.y + overlap.h {
        for x in overlap.x..overlap.x + overlap.w {
            let si = src.index(x, y) * 4;
            let di = dst.index(x, y) * 4;
            let s: [u32; 4] = std::array::from_fn(|k| src.color[si + k] as u32);
            let d: [u32; 4] = std::array::from_fn(|k| dst.color[di + k] as u32);
            let out: [u32; 4] = match order {
                BlendOrder::BackToFront => {
                    std::array::from_fn(|k| s[k] + scale_by_inverse_alpha(d[k], s[3]))
                }
                BlendOrder::FrontToBack => {
                    std::array::from_fn(|k| d[k] + scale_by_inverse_alpha(s[k], d[3]))
                }
            };
            for k in 0..4 {
                dst.color[di + k] = out[k].min(255) as u8;
            }
        }
    }
    dst.roi = dst.roi.union(&overlap);
    Ok(())
}

/// Places `src.roi` into `dst`, offset by `offset` destination pixels and
/// scaled by `zoom` (box filter on downscale, sample replication on
/// upscale). Color only; zoomed depth has no meaningful interpolation.
pub fn assemble_tile(
    dst: &mut Image,
    src: &Image,
    offset: (i32, i32),
    zoom: (f64, f64),
) -> Result<(), CompositingError> {
    if zoom == (1.0, 1.0) {
        let target = PixelViewport::new(
            src.roi.x + offset.0,
            src.roi.y + offset.1,
            src.roi.w,
            src.roi.h,
        );
        if dst.pvp.intersect(&target) != target {
            return Err(CompositingError::OutOfBounds {
                what: "assemble placement",
                region: target,
                within: dst.pvp,
            });
        }
        for y in src.roi.y..src.roi.y + src.roi.h {
            for x in src.roi.x..src.roi.x + src.roi.w {
                let c = src.rgba(x, y);
                dst.set_rgba(x + offset.0, y + offset.1, c);
                if let (Some(sd), Some(dd)) = (&src.depth, &mut dst.depth) {
                    dd[((y + offset.1 - dst.pvp.y) * dst.pvp.w + x + offset.0 - dst.pvp.x)
                        as usize] = sd[((y - src.pvp.y) * src.pvp.w + x - src.pvp.x) as usize];
                }
            }
        }
        dst.roi = dst.roi.union(&target);
        return Ok(());
    }

    // Zoomed path: map the ROI extent, then box-filter each destination
    // pixel from the source pixels its footprint covers.
    let dw = ((src.roi.w as f64 * zoom.0).round() as i32).max(if src.roi.w > 0 { 1 } else { 0 });
    let dh = ((src.roi.h as f64 * zoom.1).round() as i32).max(if src.roi.h > 0 { 1 } else { 0 });
    let target = PixelViewport::new(
        (src.roi.x as f64 * zoom.0).round() as i32 + offset.0,
        (src.roi.y as f64 * zoom.1).round() as i32 + offset.1,
        dw,
        dh,
    );
    if dst.pvp.intersect(&target) != target {
        return Err(CompositingError::OutOfBounds {
            what: "zoomed assemble placement",
            region: target,
            within: dst.pvp,
        });
    }
    for dy in 0..dh {
        // Source row window for this destination row.
        let sy0 = (dy as f64 / zoom.1).floor() as i32;
        let sy1 = (((dy + 1) as f64 / zoom.1).ceil() as i32).min(src.roi.h).max(sy0 + 1);
        for dx in 0..dw {
            let sx0 = (dx as f64 / zoom.0).floor() as i32;
            let sx1 = (((dx + 1) as f64 / zoom.0).ceil() as i32).min(src.roi.w).max(sx0 + 1);
            let mut sum = [0u32; 4];
            let mut count = 0u32;
            for sy in sy0..sy1 {
                for sx in sx0..sx1 {
                    let c = src.rgba(src.roi.x + sx.min(src.roi.w - 1), src.roi.y + sy.min(src.roi.h - 1));
                    for k in 0..4 {
                        sum[k] += c[k] as u32;
                    }
                    count += 1;
                }
            }
            let avg: [u8; 4] = std::array::from_fn(|k| ((sum[k] + count / 2) / count) as u8);
            dst.set_rgba(target.x + dx, target.y + dy, avg);
        }
    }
    dst.roi = dst.roi.union(&target);
    Ok(())
}

/// Per-channel mean with round-half-up, used for subpixel recombination.
pub fn accumulate_average(images: &[Image]) -> Result<Image, CompositingError> {
    let first = images.first().ok_or(CompositingError::NoInputs)?;
    if images.iter().any(|i| i.pvp != first.pvp) {
        return Err(CompositingError::MismatchedViewports);
    }
    let n = images.len() as u32;
    let mut out = Image::new_color(first.pvp);
    for i in 0..first.pvp.area() as usize * 4 {
        let sum: u32 = images.iter().map(|img| img.color[i] as u32).sum();
        out.color[i] = ((sum + n / 2) / n) as u8;
    }
    out.roi = images.iter().fold(PixelViewport::new(first.pvp.x, first.pvp.y, 0, 0), |acc, i| {
        acc.union(&i.roi)
    });
    Ok(out)
}
