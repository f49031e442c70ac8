//! Grayscale raster type normalized to the power-of-two square geometry
//! that the position register addresses.
//!
//! An image of arbitrary dimensions is embedded in the top-left corner of
//! an `S`×`S` raster with `S = 2^ceil(log2(max(width, height)))`; the new
//! cells are zero-filled. The original dimensions are kept so quality
//! metrics and bit rates are always computed against the real image, never
//! the padding.

use alloc::vec::Vec;

/// Dense 8-bit grayscale raster, padded to a power-of-two square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    padded_size: u32,
    n: u32,
    pixels: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ImageError {
    #[error("image must have nonzero width and height")]
    EmptyImage,
    #[error("raster has {got} pixels, expected {expected}")]
    RasterSize { expected: usize, got: usize },
}

impl GrayImage {
    /// Builds an image from a `width`×`height` row-major raster, padding it
    /// with zeros to the next power-of-two square.
    pub fn from_raster(width: u32, height: u32, raster: &[u8]) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyImage);
        }
        let expected = width as usize * height as usize;
        if raster.len() != expected {
            return Err(ImageError::RasterSize {
                expected,
                got: raster.len(),
            });
        }
        let side = width.max(height);
        let padded_size = side.next_power_of_two();
        let n = padded_size.trailing_zeros();
        let s = padded_size as usize;
        let mut pixels = alloc::vec![0u8; s * s];
        for y in 0..height as usize {
            let src = y * width as usize;
            let dst = y * s;
            pixels[dst..dst + width as usize].copy_from_slice(&raster[src..src + width as usize]);
        }
        Ok(GrayImage {
            width,
            height,
            padded_size,
            n,
            pixels,
        })
    }

    /// Constant-valued image, handy for tests and synthetic inputs.
    pub fn filled(width: u32, height: u32, value: u8) -> Result<Self, ImageError> {
        let raster = alloc::vec![value; width as usize * height as usize];
        Self::from_raster(width, height, &raster)
    }

    /// Original width in pixels.
    pub fn width(&self) -> u32 {
        self.width
    }

    /// Original height in pixels.
    pub fn height(&self) -> u32 {
        self.height
    }

    /// Side of the padded square raster (`S = 2^n`).
    pub fn padded_size(&self) -> u32 {
        self.padded_size
    }

    /// Position-register half-width, `n = log2(S)`.
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn original_dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    /// Padded raster in row-major order, `padded_size()²` entries.
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Pixel at padded coordinates.
    pub fn get(&self, y: u32, x: u32) -> u8 {
        self.pixels[y as usize * self.padded_size as usize + x as usize]
    }

    /// Iterates the original (unpadded) region in row-major order.
    pub fn original_pixels(&self) -> impl Iterator<Item = u8> + '_ {
        let s = self.padded_size as usize;
        let w = self.width as usize;
        (0..self.height as usize).flat_map(move |y| self.pixels[y * s..y * s + w].iter().copied())
    }
}

/// Pads a raster to the smallest enclosing power-of-two square.
///
/// Same construction as [`GrayImage::from_raster`], exposed under the name
/// of the geometric operation.
pub fn pad_to_power_of_two(
    width: u32,
    height: u32,
    raster: &[u8],
) -> Result<GrayImage, ImageError> {
    GrayImage::from_raster(width, height, raster)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_when_already_square_power_of_two() {
        let img = GrayImage::filled(512, 512, 7).unwrap();
        assert_eq!(img.padded_size(), 512);
        assert_eq!(img.n(), 9);
        assert_eq!(img.pixels().len(), 512 * 512);
    }

    #[test]
    fn pads_to_next_power_of_two() {
        let img = GrayImage::filled(1024, 1024, 0).unwrap();
        assert_eq!(img.padded_size(), 1024);
        assert_eq!(img.n(), 10);

        let img = GrayImage::filled(192, 192, 1).unwrap();
        assert_eq!(img.padded_size(), 256);
        assert_eq!(img.n(), 8);
    }

    #[test]
    fn rectangular_input_zero_fills() {
        let raster: Vec<u8> = (1..=15).collect();
        let img = GrayImage::from_raster(3, 5, &raster).unwrap();
        assert_eq!(img.padded_size(), 8);
        assert_eq!(img.pixels().len(), 64);
        assert_eq!(img.get(0, 0), 1);
        assert_eq!(img.get(4, 2), 15);
        // every cell outside the 3x5 region is zero
        let zeros = img
            .pixels()
            .iter()
            .enumerate()
            .filter(|&(i, &p)| {
                let (y, x) = (i / 8, i % 8);
                (y >= 5 || x >= 3) && p == 0
            })
            .count();
        assert_eq!(zeros, 64 - 15);
    }

    #[test]
    fn padding_preserves_original_pixels() {
        let raster: Vec<u8> = (0..36).map(|i| (i * 7 % 256) as u8).collect();
        let img = GrayImage::from_raster(6, 6, &raster).unwrap();
        let copied: Vec<u8> = img.original_pixels().collect();
        assert_eq!(copied, raster);
    }

    #[test]
    fn empty_dims_rejected() {
        assert_eq!(
            GrayImage::from_raster(0, 4, &[]),
            Err(ImageError::EmptyImage)
        );
        assert_eq!(
            GrayImage::from_raster(4, 0, &[]),
            Err(ImageError::EmptyImage)
        );
    }

    #[test]
    fn raster_size_checked() {
        let err = GrayImage::from_raster(2, 2, &[1, 2, 3]).unwrap_err();
        assert_eq!(
            err,
            ImageError::RasterSize {
                expected: 4,
                got: 3
            }
        );
    }

    #[test]
    fn padded_size_is_tight() {
        for (w, h) in [
            (1u32, 1u32),
            (2, 2),
            (3, 5),
            (192, 192),
            (512, 100),
            (513, 1),
        ] {
            let img = GrayImage::filled(w, h, 1).unwrap();
            let side = w.max(h);
            assert!(img.padded_size().is_power_of_two());
            assert!(side <= img.padded_size());
            assert!(img.padded_size() / 2 < side);
        }
    }
}
