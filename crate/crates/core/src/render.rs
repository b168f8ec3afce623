//! Raster rendering of recurrence, distance and overlay matrices.
//!
//! Matrix cell `(i, j)` becomes a `cell_pixels` square whose left edge is at
//! column `i * cell_pixels` and whose bottom edge is `j * cell_pixels` pixels
//! above the bottom of the image, so the earliest state sits at the
//! bottom-left corner and time increases rightward and upward.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::recurrence::{DistanceMatrix, OverlayCell, OverlayMatrix, RecurrenceMatrix};
use crate::scalar::Scalar;

pub type Rgb = [u8; 3];

pub const BLACK: Rgb = [0, 0, 0];
pub const WHITE: Rgb = [255, 255, 255];

/// Piecewise-linear palette between two or more anchor colors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Colormap {
    pub name: String,
    anchors: Vec<Rgb>,
}

impl Colormap {
    pub fn new(name: impl Into<String>, anchors: Vec<Rgb>) -> Result<Self> {
        if anchors.len() < 2 {
            return Err(Error::InvalidParameter(
                "a colormap needs at least two anchors".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            anchors,
        })
    }

    /// Blue, cyan, yellow, red, dark red: near states cool, far states warm.
    pub fn vra() -> Self {
        Self {
            name: "vra".into(),
            anchors: vec![
                [0, 0, 255],
                [0, 255, 255],
                [255, 255, 0],
                [255, 0, 0],
                [128, 0, 0],
            ],
        }
    }

    /// Black at distance zero to white at the maximum.
    pub fn grayscale() -> Self {
        Self {
            name: "gray".into(),
            anchors: vec![BLACK, WHITE],
        }
    }

    pub fn named(name: &str) -> Result<Self> {
        match name {
            "vra" => Ok(Self::vra()),
            "gray" | "grey" => Ok(Self::grayscale()),
            other => Err(Error::InvalidParameter(format!(
                "unknown colormap {other:?} (expected vra or gray)"
            ))),
        }
    }

    pub fn anchors(&self) -> &[Rgb] {
        &self.anchors
    }

    /// Color at `t` in `[0, 1]`; values outside are clamped.
    pub fn map(&self, t: f64) -> Rgb {
        let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
        let segments = self.anchors.len() - 1;
        let pos = t * segments as f64;
        let seg = (pos.floor() as usize).min(segments - 1);
        let frac = pos - seg as f64;
        let (a, b) = (self.anchors[seg], self.anchors[seg + 1]);
        let mut out = [0u8; 3];
        for k in 0..3 {
            let v = f64::from(a[k]) + (f64::from(b[k]) - f64::from(a[k])) * frac;
            out[k] = v.round().clamp(0.0, 255.0) as u8;
        }
        out
    }
}

impl Default for Colormap {
    fn default() -> Self {
        Self::vra()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub cell_pixels: u32,
    pub colormap: Colormap,
    /// Recurrent cells in binary plots.
    pub foreground: Rgb,
    pub background: Rgb,
    pub color_a: Rgb,
    pub color_b: Rgb,
    pub color_both: Rgb,
    /// Upper bound on `width * height`.
    pub max_pixels: u64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            cell_pixels: 1,
            colormap: Colormap::vra(),
            foreground: BLACK,
            background: WHITE,
            color_a: [0, 0, 255],
            color_b: [255, 0, 0],
            color_both: [128, 0, 128],
            max_pixels: 100_000_000,
        }
    }
}

/// 8-bit RGB raster, rows stored top to bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl Image {
    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn raw(&self) -> &[u8] {
        &self.pixels
    }

    /// Pixel at column `x`, row `y` counted from the top.
    pub fn pixel(&self, x: u32, y: u32) -> Rgb {
        let at = (y as usize * self.width as usize + x as usize) * 3;
        [self.pixels[at], self.pixels[at + 1], self.pixels[at + 2]]
    }

    /// PNG bytes: 8-bit RGB, no interlacing, no ancillary chunks.
    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        {
            let mut encoder = png::Encoder::new(&mut out, self.width, self.height);
            encoder.set_color(png::ColorType::Rgb);
            encoder.set_depth(png::BitDepth::Eight);
            encoder.set_compression(png::Compression::Balanced);
            encoder.set_filter(png::Filter::Adaptive);
            let mut writer = encoder
                .write_header()
                .map_err(|e| Error::Encoding(e.to_string()))?;
            writer
                .write_image_data(&self.pixels)
                .map_err(|e| Error::Encoding(e.to_string()))?;
            writer.finish().map_err(|e| Error::Encoding(e.to_string()))?;
        }
        Ok(out)
    }

    /// Decodes an 8-bit RGB PNG such as the ones [`Image::encode_png`] writes.
    pub fn decode_png(bytes: &[u8]) -> Result<Self> {
        let decoder = png::Decoder::new(std::io::Cursor::new(bytes));
        let mut reader = decoder.read_info().map_err(|e| Error::Encoding(e.to_string()))?;
        let size = reader
            .output_buffer_size()
            .ok_or_else(|| Error::Encoding("image too large to decode".into()))?;
        let mut buf = vec![0u8; size];
        let info = reader
            .next_frame(&mut buf)
            .map_err(|e| Error::Encoding(e.to_string()))?;
        if info.color_type != png::ColorType::Rgb || info.bit_depth != png::BitDepth::Eight {
            return Err(Error::Encoding(format!(
                "expected 8-bit RGB, got {:?} {:?}",
                info.color_type, info.bit_depth
            )));
        }
        buf.truncate(info.buffer_size());
        Ok(Self {
            width: info.width,
            height: info.height,
            pixels: buf,
        })
    }
}

fn paint(size: usize, options: &RenderOptions, color_of: impl Fn(usize, usize) -> Rgb) -> Result<Image> {
    if options.cell_pixels < 1 {
        return Err(Error::InvalidParameter("cell_pixels must be at least 1".into()));
    }
    if size == 0 {
        return Err(Error::InvalidParameter("cannot render an empty matrix".into()));
    }
    let side = size as u64 * u64::from(options.cell_pixels);
    if side > u64::from(u32::MAX) || side * side > options.max_pixels {
        return Err(Error::ImageTooLarge {
            width: side,
            height: side,
            budget: options.max_pixels,
        });
    }
    let cp = options.cell_pixels as usize;
    let side = side as usize;
    let mut pixels = vec![0u8; side * side * 3];
    for (y, row) in pixels.chunks_exact_mut(side * 3).enumerate() {
        let j = size - 1 - y / cp;
        for i in 0..size {
            let color = color_of(i, j);
            for px in row[i * cp * 3..(i + 1) * cp * 3].chunks_exact_mut(3) {
                px.copy_from_slice(&color);
            }
        }
    }
    Ok(Image {
        width: side as u32,
        height: side as u32,
        pixels,
    })
}

/// Recurrent cells in `foreground` (black by default), others in `background`.
pub fn render_binary<T: Scalar>(rp: &RecurrenceMatrix<T>, options: &RenderOptions) -> Result<Image> {
    paint(rp.size(), options, |i, j| {
        if rp.get(i, j) {
            options.foreground
        } else {
            options.background
        }
    })
}

/// Distances mapped linearly from `[0, max]` onto the colormap.
pub fn render_distance<T: Scalar>(dm: &DistanceMatrix<T>, options: &RenderOptions) -> Result<Image> {
    let max = dm.max().to_f64_lossy();
    let scale = if max > 0.0 { 1.0 / max } else { 0.0 };
    paint(dm.size(), options, |i, j| {
        options.colormap.map(dm.get(i, j).to_f64_lossy() * scale)
    })
}

pub fn render_overlay(ov: &OverlayMatrix, options: &RenderOptions) -> Result<Image> {
    paint(ov.size(), options, |i, j| match ov.get(i, j) {
        OverlayCell::OnlyA => options.color_a,
        OverlayCell::OnlyB => options.color_b,
        OverlayCell::Both => options.color_both,
        OverlayCell::Neither => options.background,
    })
}
