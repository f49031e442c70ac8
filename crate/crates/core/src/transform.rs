//! Block transforms and uniform scalar quantization.
//!
//! The forward path is an orthonormal 2-D DCT-II on 8×8 blocks (with an
//! optional −128 level shift, JPEG style) or a single level of the 2-D Haar
//! decomposition on 8×8 or 64×64 blocks. Both kernels are orthonormal, so
//! energy is preserved and the inverses are exact transposes.
//!
//! Quantization is a single scalar divisor with round-half-away-from-zero,
//! which keeps the rule odd: `quantize(-x) == -quantize(x)`. Magnitudes are
//! clamped to 255 so every level fits the 8-qubit value register; callers
//! can observe the clamp through [`quantize_full`].

use alloc::string::String;
use alloc::vec::Vec;

use crate::math;

/// Largest representable coefficient magnitude (`2^8 - 1`).
pub const MAX_MAGNITUDE: i32 = 255;

/// Level shift applied to samples when centering is enabled.
pub const CENTER_OFFSET: f64 = 128.0;

/// Block transform selector for the compression pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    /// 8×8 block DCT-II.
    Dct8,
    /// 8×8 block level-1 Haar decomposition.
    Haar8,
    /// 64×64 block level-1 Haar decomposition.
    Haar64,
    /// No transform: raw pixel values are encoded directly.
    None,
}

impl TransformKind {
    /// Nominal block side; `None` for the identity transform.
    pub fn nominal_block(self) -> Option<u32> {
        match self {
            TransformKind::Dct8 | TransformKind::Haar8 => Some(8),
            TransformKind::Haar64 => Some(64),
            TransformKind::None => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TransformKind::Dct8 => "dct8",
            TransformKind::Haar8 => "haar8",
            TransformKind::Haar64 => "haar64",
            TransformKind::None => "none",
        }
    }
}

impl core::str::FromStr for TransformKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dct8" => Ok(TransformKind::Dct8),
            "haar8" => Ok(TransformKind::Haar8),
            "haar64" => Ok(TransformKind::Haar64),
            "none" => Ok(TransformKind::None),
            other => Err(alloc::format!("unknown transform `{other}`")),
        }
    }
}

impl core::fmt::Display for TransformKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One block of real transform coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffBlock {
    /// (block_row, block_col) of this block within the image, in blocks.
    pub origin: (u32, u32),
    /// Pixels per side.
    pub block_size: usize,
    /// `block_size²` coefficients, row-major.
    pub values: Vec<f64>,
}

/// Uniform scalar quantization divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantSpec {
    q_factor: u32,
}

impl QuantSpec {
    /// Returns `None` when `q_factor` is zero.
    pub fn new(q_factor: u32) -> Option<Self> {
        (q_factor >= 1).then_some(QuantSpec { q_factor })
    }

    pub fn q_factor(self) -> u32 {
        self.q_factor
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShapeError {
    #[error("block has {got} samples, expected {expected}")]
    BlockLen { expected: usize, got: usize },
    #[error("unsupported block size {0}")]
    BlockSize(usize),
}

/// Orthonormal 1-D DCT-II basis, row-major: `basis[u * b + i]`.
fn dct_basis(b: usize) -> Vec<f64> {
    let mut basis = alloc::vec![0.0; b * b];
    let norm0 = math::sqrt(1.0 / b as f64);
    let norm = math::sqrt(2.0 / b as f64);
    for u in 0..b {
        let a = if u == 0 { norm0 } else { norm };
        for i in 0..b {
            let angle = core::f64::consts::PI * (2 * i + 1) as f64 * u as f64 / (2 * b) as f64;
            basis[u * b + i] = a * math::cos(angle);
        }
    }
    basis
}

/// Forward 2-D DCT-II on a `b`×`b` block, any `b ≥ 1`.
pub(crate) fn dct2(samples: &[f64], b: usize, centered: bool) -> Vec<f64> {
    debug_assert_eq!(samples.len(), b * b);
    let basis = dct_basis(b);
    let shift = if centered { CENTER_OFFSET } else { 0.0 };
    // rows first: t[i][v] = sum_j x[i][j] * basis[v][j]
    let mut t = alloc::vec![0.0; b * b];
    for i in 0..b {
        for v in 0..b {
            let mut acc = 0.0;
            for j in 0..b {
                acc += (samples[i * b + j] - shift) * basis[v * b + j];
            }
            t[i * b + v] = acc;
        }
    }
    // then columns: c[u][v] = sum_i t[i][v] * basis[u][i]
    let mut coeffs = alloc::vec![0.0; b * b];
    for v in 0..b {
        for u in 0..b {
            let mut acc = 0.0;
            for i in 0..b {
                acc += t[i * b + v] * basis[u * b + i];
            }
            coeffs[u * b + v] = acc;
        }
    }
    coeffs
}

/// Inverse of [`dct2`].
pub(crate) fn idct2(coeffs: &[f64], b: usize, centered: bool) -> Vec<f64> {
    debug_assert_eq!(coeffs.len(), b * b);
    let basis = dct_basis(b);
    let shift = if centered { CENTER_OFFSET } else { 0.0 };
    // columns first: t[i][v] = sum_u c[u][v] * basis[u][i]
    let mut t = alloc::vec![0.0; b * b];
    for v in 0..b {
        for i in 0..b {
            let mut acc = 0.0;
            for u in 0..b {
                acc += coeffs[u * b + v] * basis[u * b + i];
            }
            t[i * b + v] = acc;
        }
    }
    let mut samples = alloc::vec![0.0; b * b];
    for i in 0..b {
        for j in 0..b {
            let mut acc = 0.0;
            for v in 0..b {
                acc += t[i * b + v] * basis[v * b + j];
            }
            samples[i * b + j] = acc + shift;
        }
    }
    samples
}

/// One level of the orthonormal 2-D Haar decomposition on a `b`×`b` block
/// (`b` even). Quadrants: LL top-left, detail bands elsewhere. A single
/// sample has no pairs to mix and passes through unchanged.
pub(crate) fn haar2(samples: &[f64], b: usize) -> Vec<f64> {
    debug_assert_eq!(samples.len(), b * b);
    debug_assert!(b == 1 || b.is_multiple_of(2));
    if b < 2 {
        return samples.to_vec();
    }
    let half = b / 2;
    let s = core::f64::consts::FRAC_1_SQRT_2;
    // rows: low | high halves
    let mut t = alloc::vec![0.0; b * b];
    for i in 0..b {
        for k in 0..half {
            let a = samples[i * b + 2 * k];
            let d = samples[i * b + 2 * k + 1];
            t[i * b + k] = (a + d) * s;
            t[i * b + half + k] = (a - d) * s;
        }
    }
    // columns: low top, high bottom
    let mut out = alloc::vec![0.0; b * b];
    for j in 0..b {
        for k in 0..half {
            let a = t[(2 * k) * b + j];
            let d = t[(2 * k + 1) * b + j];
            out[k * b + j] = (a + d) * s;
            out[(half + k) * b + j] = (a - d) * s;
        }
    }
    out
}

/// Inverse of [`haar2`].
pub(crate) fn ihaar2(coeffs: &[f64], b: usize) -> Vec<f64> {
    debug_assert_eq!(coeffs.len(), b * b);
    debug_assert!(b == 1 || b.is_multiple_of(2));
    if b < 2 {
        return coeffs.to_vec();
    }
    let half = b / 2;
    let s = core::f64::consts::FRAC_1_SQRT_2;
    let mut t = alloc::vec![0.0; b * b];
    for j in 0..b {
        for k in 0..half {
            let lo = coeffs[k * b + j];
            let hi = coeffs[(half + k) * b + j];
            t[(2 * k) * b + j] = (lo + hi) * s;
            t[(2 * k + 1) * b + j] = (lo - hi) * s;
        }
    }
    let mut out = alloc::vec![0.0; b * b];
    for i in 0..b {
        for k in 0..half {
            let lo = t[i * b + k];
            let hi = t[i * b + half + k];
            out[i * b + 2 * k] = (lo + hi) * s;
            out[i * b + 2 * k + 1] = (lo - hi) * s;
        }
    }
    out
}

fn check_len(samples: &[f64], b: usize) -> Result<(), ShapeError> {
    if samples.len() != b * b {
        return Err(ShapeError::BlockLen {
            expected: b * b,
            got: samples.len(),
        });
    }
    Ok(())
}

/// Orthonormal 2-D DCT-II of an 8×8 block. With `centered` set, 128 is
/// subtracted from every sample first.
pub fn dct2_block(samples: &[f64], centered: bool) -> Result<CoeffBlock, ShapeError> {
    check_len(samples, 8)?;
    Ok(CoeffBlock {
        origin: (0, 0),
        block_size: 8,
        values: dct2(samples, 8, centered),
    })
}

/// Exact inverse of [`dct2_block`]. With `centered` set, 128 is added back
/// after the inverse kernel.
pub fn idct2_block(coeffs: &CoeffBlock, centered: bool) -> Result<Vec<f64>, ShapeError> {
    if coeffs.block_size != 8 {
        return Err(ShapeError::BlockSize(coeffs.block_size));
    }
    check_len(&coeffs.values, 8)?;
    Ok(idct2(&coeffs.values, 8, centered))
}

/// One level of the 2-D Haar decomposition; `block_size` must be 8 or 64.
pub fn haar_dwt_block(samples: &[f64], block_size: usize) -> Result<CoeffBlock, ShapeError> {
    if block_size != 8 && block_size != 64 {
        return Err(ShapeError::BlockSize(block_size));
    }
    check_len(samples, block_size)?;
    Ok(CoeffBlock {
        origin: (0, 0),
        block_size,
        values: haar2(samples, block_size),
    })
}

/// Exact inverse of [`haar_dwt_block`].
pub fn haar_idwt_block(coeffs: &CoeffBlock) -> Result<Vec<f64>, ShapeError> {
    if coeffs.block_size != 8 && coeffs.block_size != 64 {
        return Err(ShapeError::BlockSize(coeffs.block_size));
    }
    check_len(&coeffs.values, coeffs.block_size)?;
    Ok(ihaar2(&coeffs.values, coeffs.block_size))
}

/// Quantizes one coefficient: round-half-away-from-zero of `coeff / Q`,
/// magnitude clamped to [`MAX_MAGNITUDE`].
pub fn quantize(coeff: f64, spec: QuantSpec) -> i32 {
    quantize_full(coeff, spec).0
}

/// Like [`quantize`], also reporting whether the magnitude clamp fired.
pub fn quantize_full(coeff: f64, spec: QuantSpec) -> (i32, bool) {
    let scaled = math::round(coeff / spec.q_factor as f64);
    if scaled > MAX_MAGNITUDE as f64 {
        (MAX_MAGNITUDE, true)
    } else if scaled < -MAX_MAGNITUDE as f64 {
        (-MAX_MAGNITUDE, true)
    } else {
        (scaled as i32, false)
    }
}

/// Inverse quantization: `level × Q`.
pub fn dequantize(level: i32, spec: QuantSpec) -> f64 {
    level as f64 * spec.q_factor as f64
}
