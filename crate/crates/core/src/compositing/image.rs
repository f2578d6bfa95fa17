//! Pixel-viewport-anchored images: RGBA8 color, optional 32-bit depth
//! (0 = near), and a region-of-interest rectangle.

use crate::geometry::PixelViewport;

use super::CompositingError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    /// Position and extent within the destination channel. Row 0 is the
    /// bottom row.
    pub pvp: PixelViewport,
    /// RGBA8, premultiplied alpha on blending paths, `4 * w * h` bytes.
    pub color: Vec<u8>,
    /// Optional depth, `w * h` values, 0 = nearest.
    pub depth: Option<Vec<u32>>,
    /// Bounding rectangle of meaningful pixels, always inside `pvp`.
    pub roi: PixelViewport,
}

pub const BACKGROUND_DEPTH: u32 = u32::MAX;

impl Image {
    pub fn new_color(pvp: PixelViewport) -> Image {
        Image {
            pvp,
            color: vec![0; pvp.area() as usize * 4],
            depth: None,
            roi: pvp,
        }
    }

    pub fn new_with_depth(pvp: PixelViewport) -> Image {
        Image {
            pvp,
            color: vec![0; pvp.area() as usize * 4],
            depth: Some(vec![BACKGROUND_DEPTH; pvp.area() as usize]),
            roi: pvp,
        }
    }

    pub fn index(&self, x: i32, y: i32) -> usize {
        debug_assert!(self.pvp.contains(x, y), "({x},{y}) outside {:?}", self.pvp);
        ((y - self.pvp.y) as usize) * self.pvp.w as usize + (x - self.pvp.x) as usize
    }

    pub fn rgba(&self, x: i32, y: i32) -> [u8; 4] {
        let i = self.index(x, y) * 4;
        [self.color[i], self.color[i + 1], self.color[i + 2], self.color[i + 3]]
    }

    pub fn set_rgba(&mut self, x: i32, y: i32, c: [u8; 4]) {
        let i = self.index(x, y) * 4;
        self.color[i..i + 4].copy_from_slice(&c);
    }

    pub fn depth_at(&self, x: i32, y: i32) -> Option<u32> {
        let i = self.index(x, y);
        self.depth.as_ref().map(|d| d[i])
    }

    /// Copies the pixels of `region` (destination coordinates) out of this
    /// image into a new one anchored at the same place.
    pub fn extract(&self, region: &PixelViewport) -> Result<Image, CompositingError> {
        let clipped = self.pvp.intersect(region);
        if clipped != *region {
            return Err(CompositingError::OutOfBounds {
                what: "extract region",
                region: *region,
                within: self.pvp,
            });
        }
        let mut out = if self.depth.is_some() {
            Image::new_with_depth(*region)
        } else {
            Image::new_color(*region)
        };
        for y in region.y..region.y + region.h {
            let src = self.index(region.x, y);
            let dst = out.index(region.x, y);
            let w = region.w as usize;
            out.color[dst * 4..(dst + w) * 4].copy_from_slice(&self.color[src * 4..(src + w) * 4]);
            if let (Some(sd), Some(dd)) = (&self.depth, &mut out.depth) {
                dd[dst..dst + w].copy_from_slice(&sd[src..src + w]);
            }
        }
        out.roi = out.pvp.intersect(&self.roi);
        Ok(out)
    }

    /// Shrinks the ROI to the bounding box of pixels that differ from the
    /// cleared state (color 0 and, if present, background depth).
    pub fn shrink_roi_to_content(&mut self) {
        let mut bounds: Option<(i32, i32, i32, i32)> = None;
        for y in self.pvp.y..self.pvp.y + self.pvp.h {
            for x in self.pvp.x..self.pvp.x + self.pvp.w {
                let i = self.index(x, y);
                let written = match &self.depth {
                    Some(d) => d[i] != BACKGROUND_DEPTH,
                    None => self.color[i * 4..i * 4 + 4] != [0, 0, 0, 0],
                };
                if written {
                    bounds = Some(match bounds {
                        None => (x, y, x, y),
                        Some((x0, y0, x1, y1)) => (x0.min(x), y0.min(y), x1.max(x), y1.max(y)),
                    });
                }
            }
        }
        self.roi = match bounds {
            Some((x0, y0, x1, y1)) => PixelViewport::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1),
            None => PixelViewport::new(self.pvp.x, self.pvp.y, 0, 0),
        };
    }

    /// Binary PPM (P6) of the color buffer, alpha dropped, rows flipped to
    /// the format's top-down order.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.pvp.w, self.pvp.h).into_bytes();
        for y in (self.pvp.y..self.pvp.y + self.pvp.h).rev() {
            for x in self.pvp.x..self.pvp.x + self.pvp.w {
                let c = self.rgba(x, y);
                out.extend_from_slice(&c[..3]);
            }
        }
        out
    }

    /// Binary PGM (P5, maxval 65535) of the high 16 depth bits, big-endian
    /// sample bytes as the format requires.
    pub fn to_pgm16(&self) -> Result<Vec<u8>, CompositingError> {
        let depth = self.depth.as_ref().ok_or(CompositingError::MissingDepth)?;
        let mut out = format!("P5\n{} {}\n65535\n", self.pvp.w, self.pvp.h).into_bytes();
        for y in (0..self.pvp.h).rev() {
            for x in 0..self.pvp.w {
                let d = depth[(y * self.pvp.w + x) as usize];
                let d16 = (d >> 16) as u16;
                out.extend_from_slice(&d16.to_be_bytes());
            }
        }
        Ok(out)
    }
}
