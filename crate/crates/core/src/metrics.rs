//! Quality and rate measurement: MSE, PSNR, and rate-distortion sweeps.
//!
//! PSNR is always computed over the cropped original region; the padding
//! is an encoding artifact and would inflate quality numbers with
//! trivially perfect zero pixels. A zero MSE yields the +∞ sentinel, which
//! the identity transform legitimately hits.

use alloc::string::String;
use alloc::vec::Vec;

use crate::encoders::{build_coeff_map, decode_coeff_map, estimate_cost, CostOptions, EncoderKind};
use crate::image::GrayImage;
use crate::math;
use crate::transform::{QuantSpec, TransformKind};

/// Peak value for 8-bit images.
pub const PEAK_8BIT: f64 = 255.0;

/// The quantization factors used throughout the rate-distortion studies.
pub const DEFAULT_Q_FACTORS: [u32; 5] = [8, 16, 32, 36, 70];

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("images are {a:?} and {b:?}; dimensions must match")]
    Shape { a: (u32, u32), b: (u32, u32) },
    #[error("mean squared error cannot be negative (got {0})")]
    Domain(f64),
    #[error("quantization factor must be at least 1 (got {0})")]
    InvalidQuantFactor(u32),
}

/// Mean squared error over the original (cropped) region.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64, MetricsError> {
    if a.original_dims() != b.original_dims() {
        return Err(MetricsError::Shape {
            a: a.original_dims(),
            b: b.original_dims(),
        });
    }
    let (width, height) = a.original_dims();
    let mut sum = 0.0f64;
    for y in 0..height {
        for x in 0..width {
            let d = a.get(y, x) as f64 - b.get(y, x) as f64;
            sum += d * d;
        }
    }
    Ok(sum / (width as f64 * height as f64))
}

/// Peak signal-to-noise ratio in dB: `20·log10(max/√mse)`. Returns +∞ when
/// the error is exactly zero.
pub fn psnr(mse_value: f64, max_value: f64) -> Result<f64, MetricsError> {
    if mse_value < 0.0 {
        return Err(MetricsError::Domain(mse_value));
    }
    if mse_value == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(20.0 * math::log10(max_value / math::sqrt(mse_value)))
}

/// Encoding scheme identifiers used by the comparison harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    DctGqir,
    DctEfrqi,
    Dwt8Gqir,
    Dwt64Gqir,
    Dwt8Efrqi,
    RawEfrqi,
    RawGqir,
}

impl Scheme {
    pub const ALL: [Scheme; 7] = [
        Scheme::DctGqir,
        Scheme::DctEfrqi,
        Scheme::Dwt8Gqir,
        Scheme::Dwt64Gqir,
        Scheme::Dwt8Efrqi,
        Scheme::RawEfrqi,
        Scheme::RawGqir,
    ];

    pub fn transform(self) -> TransformKind {
        match self {
            Scheme::DctGqir | Scheme::DctEfrqi => TransformKind::Dct8,
            Scheme::Dwt8Gqir | Scheme::Dwt8Efrqi => TransformKind::Haar8,
            Scheme::Dwt64Gqir => TransformKind::Haar64,
            Scheme::RawEfrqi | Scheme::RawGqir => TransformKind::None,
        }
    }

    pub fn encoder(self) -> EncoderKind {
        match self {
            Scheme::DctGqir | Scheme::Dwt8Gqir | Scheme::Dwt64Gqir | Scheme::RawGqir => {
                EncoderKind::Gqir
            }
            Scheme::DctEfrqi | Scheme::Dwt8Efrqi | Scheme::RawEfrqi => EncoderKind::Efrqi,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::DctGqir => "dct-gqir",
            Scheme::DctEfrqi => "dct-efrqi",
            Scheme::Dwt8Gqir => "dwt8-gqir",
            Scheme::Dwt64Gqir => "dwt64-gqir",
            Scheme::Dwt8Efrqi => "dwt8-efrqi",
            Scheme::RawEfrqi => "raw-efrqi",
            Scheme::RawGqir => "raw-gqir",
        }
    }
}

impl core::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::ALL
            .into_iter()
            .find(|scheme| scheme.as_str() == s)
            .ok_or_else(|| alloc::format!("unknown scheme `{s}`"))
    }
}

impl core::fmt::Display for Scheme {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One sample of a rate-distortion curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RDPoint {
    pub scheme: Scheme,
    pub q_factor: u32,
    pub bpp: f64,
    pub psnr_db: f64,
}

/// Sweeps the quantization factors for one scheme: encode, take the bit
/// rate from the cost accounting, decode, and measure PSNR against the
/// original. Points come back ordered by Q ascending. The circuit itself
/// is never built — the gate census and bit counts are closed-form in the
/// map — so sweeps stay fast at any image size.
pub fn rd_curve(
    image: &GrayImage,
    scheme: Scheme,
    q_factors: &[u32],
    centered: bool,
    opts: &CostOptions,
) -> Result<Vec<RDPoint>, MetricsError> {
    let mut ordered: Vec<u32> = q_factors.to_vec();
    ordered.sort_unstable();
    let kind = scheme.transform();
    let mut points = Vec::with_capacity(ordered.len());
    for q_factor in ordered {
        let spec = QuantSpec::new(q_factor).ok_or(MetricsError::InvalidQuantFactor(q_factor))?;
        let map = build_coeff_map(image, kind, centered, spec);
        let report = estimate_cost(&map, scheme.encoder(), opts);
        let decoded = decode_coeff_map(&map, kind, centered, spec);
        let psnr_db = psnr(mse(image, &decoded)?, PEAK_8BIT)?;
        points.push(RDPoint {
            scheme,
            q_factor,
            bpp: report.bpp,
            psnr_db,
        });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::str::FromStr;

    #[test]
    fn mse_of_identical_images_is_zero() {
        let img = GrayImage::filled(4, 4, 40).unwrap();
        assert_eq!(mse(&img, &img).unwrap(), 0.0);
    }

    #[test]
    fn mse_single_pixel() {
        let a = GrayImage::from_raster(1, 1, &[0]).unwrap();
        let b = GrayImage::from_raster(1, 1, &[2]).unwrap();
        assert_eq!(mse(&a, &b).unwrap(), 4.0);
    }

    #[test]
    fn mse_direct_evaluation() {
        let a = GrayImage::from_raster(2, 2, &[0, 0, 0, 0]).unwrap();
        let b = GrayImage::from_raster(2, 2, &[1, 2, 3, 4]).unwrap();
        assert_eq!(mse(&a, &b).unwrap(), 7.5);
    }

    #[test]
    fn mse_ignores_padding() {
        // 3x3 rasters pad to 4x4; differences only ever counted inside 3x3
        let a = GrayImage::from_raster(3, 3, &[9; 9]).unwrap();
        let b = GrayImage::from_raster(3, 3, &[9; 9]).unwrap();
        assert_eq!(mse(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn mse_shape_error() {
        let a = GrayImage::filled(2, 2, 0).unwrap();
        let b = GrayImage::filled(2, 3, 0).unwrap();
        assert_eq!(
            mse(&a, &b),
            Err(MetricsError::Shape {
                a: (2, 2),
                b: (2, 3)
            })
        );
    }

    #[test]
    fn psnr_anchor_values() {
        assert_eq!(psnr(0.0, PEAK_8BIT).unwrap(), f64::INFINITY);
        let db = psnr(1.0, PEAK_8BIT).unwrap();
        assert!((db - 48.1308).abs() < 1e-3);
        let zero = psnr(255.0 * 255.0, PEAK_8BIT).unwrap();
        assert!(zero.abs() < 1e-12);
        assert_eq!(psnr(-1.0, PEAK_8BIT), Err(MetricsError::Domain(-1.0)));
    }

    #[test]
    fn psnr_strictly_decreasing_in_mse() {
        let mut last = f64::INFINITY;
        for mse_value in [0.5, 1.0, 2.0, 10.0, 100.0, 10000.0] {
            let db = psnr(mse_value, PEAK_8BIT).unwrap();
            assert!(db < last);
            last = db;
        }
    }

    #[test]
    fn scheme_names_round_trip() {
        for scheme in Scheme::ALL {
            assert_eq!(Scheme::from_str(scheme.as_str()).unwrap(), scheme);
        }
        assert!(Scheme::from_str("dct-foo").is_err());
    }

    #[test]
    fn rd_curve_on_black_image_is_free_and_perfect() {
        let img = GrayImage::filled(16, 16, 0).unwrap();
        let points = rd_curve(
            &img,
            Scheme::DctEfrqi,
            &DEFAULT_Q_FACTORS,
            false,
            &CostOptions::default(),
        )
        .unwrap();
        assert_eq!(points.len(), 5);
        for p in &points {
            assert_eq!(p.bpp, 0.0);
            assert_eq!(p.psnr_db, f64::INFINITY);
        }
        // ordered by Q ascending
        let qs: Vec<u32> = points.iter().map(|p| p.q_factor).collect();
        assert_eq!(qs, alloc::vec![8, 16, 32, 36, 70]);
        // centered, the level shift leaves a DC per block and its
        // quantization error (e.g. Q=36 reconstructs level 2, ~42 dB)
        let points = rd_curve(
            &img,
            Scheme::DctEfrqi,
            &DEFAULT_Q_FACTORS,
            true,
            &CostOptions::default(),
        )
        .unwrap();
        for p in &points {
            assert!(p.bpp > 0.0);
            assert!(p.psnr_db > 40.0);
        }
    }

    #[test]
    fn rd_curve_handles_degenerate_single_pixel_image() {
        // padded size 1: blocks clip to a single sample everywhere
        let img = GrayImage::from_raster(1, 1, &[200]).unwrap();
        for scheme in [Scheme::DctEfrqi, Scheme::Dwt8Gqir, Scheme::RawGqir] {
            let points = rd_curve(&img, scheme, &[1], true, &CostOptions::default()).unwrap();
            assert!(points[0].psnr_db > 40.0, "{scheme}: {:?}", points[0]);
        }
    }

    #[test]
    fn rd_curve_rejects_zero_q() {
        let img = GrayImage::filled(8, 8, 10).unwrap();
        assert_eq!(
            rd_curve(&img, Scheme::DctGqir, &[0], true, &CostOptions::default()),
            Err(MetricsError::InvalidQuantFactor(0))
        );
    }

    #[test]
    fn gqir_and_efrqi_share_psnr_but_not_rate() {
        let raster: Vec<u8> = (0..256).map(|i| (i * 37 % 97 + 80) as u8).collect();
        let img = GrayImage::from_raster(16, 16, &raster).unwrap();
        let opts = CostOptions::default();
        let gq = rd_curve(&img, Scheme::DctGqir, &DEFAULT_Q_FACTORS, true, &opts).unwrap();
        let ef = rd_curve(&img, Scheme::DctEfrqi, &DEFAULT_Q_FACTORS, true, &opts).unwrap();
        for (a, b) in gq.iter().zip(&ef) {
            assert_eq!(a.psnr_db, b.psnr_db);
            assert_ne!(a.bpp, b.bpp);
        }
    }
}
