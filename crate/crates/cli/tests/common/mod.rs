//! Shared fixtures: deterministic synthetic grayscale images standing in
//! for the four-image sample corpus (deer 1024×1024, cameraman 192×192,
//! scenery 512×512, lena 512×512).
//!
//! Each 8×8 tile is synthesized directly in the frequency domain — a
//! smoothly shaded DC level plus two to four strong AC bins with widely
//! varied magnitudes — then inverse-transformed to pixels. That yields
//! content that is sparse under the block DCT with non-trivial coefficient
//! popcounts, stays clamp-free at Q=1 under the centered convention, and
//! quantizes smoothly across the factor sweep.

// shared between test binaries; not every binary uses every fixture
#![allow(dead_code)]

use qimc_core::GrayImage;

const TAU: f64 = core::f64::consts::TAU;

/// xorshift64*; deterministic across platforms.
pub struct Rng64(u64);

impl Rng64 {
    pub fn new(seed: u64) -> Self {
        Rng64(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn gen_range(&mut self, lo: u32, hi: u32) -> u32 {
        lo + (self.next_u64() % (hi - lo) as u64) as u32
    }
}

/// Synthesis-side inverse 8×8 DCT, written from the definition; the
/// fixtures stay independent of the code under test.
#[allow(clippy::needless_range_loop)]
fn idct8(coeffs: &[f64; 64]) -> [f64; 64] {
    let mut basis = [[0.0f64; 8]; 8];
    for u in 0..8 {
        let a = if u == 0 {
            (1.0f64 / 8.0).sqrt()
        } else {
            (2.0f64 / 8.0).sqrt()
        };
        for i in 0..8 {
            basis[u][i] = a * ((2 * i + 1) as f64 * u as f64 * core::f64::consts::PI / 16.0).cos();
        }
    }
    let mut out = [0.0f64; 64];
    for i in 0..8 {
        for j in 0..8 {
            let mut acc = 0.0;
            for u in 0..8 {
                for v in 0..8 {
                    let c = coeffs[u * 8 + v];
                    if c != 0.0 {
                        acc += c * basis[u][i] * basis[v][j];
                    }
                }
            }
            out[i * 8 + j] = acc;
        }
    }
    out
}

pub fn synth_image(width: u32, height: u32, seed: u64) -> GrayImage {
    let mut rng = Rng64::new(seed);
    let fx = 1.0 + (seed % 3) as f64;
    let fy = 2.0 + (seed % 2) as f64;
    let phase = rng.next_f64() * TAU;
    let blocks_wide = (width as usize).div_ceil(8);
    let blocks_tall = (height as usize).div_ceil(8);
    let mut raster = vec![0u8; width as usize * height as usize];
    for by in 0..blocks_tall {
        for bx in 0..blocks_wide {
            let u = bx as f64 / blocks_wide as f64;
            let v = by as f64 / blocks_tall as f64;
            // slow shading; kept small enough that no DC can clamp at Q=1
            let shade = 24.0 * (TAU * (fx * u + 0.31)).sin() * (TAU * (fy * v + 0.77)).cos()
                + 6.0 * (TAU * (u + v) + phase).sin();
            let mut coeffs = [0.0f64; 64];
            coeffs[0] = 8.0 * shade;
            let bins = 2 + rng.gen_range(0, 3);
            // worst-case basis amplitude is 0.25; budget the magnitudes so
            // pixels stay inside [0, 255] and spectra inside the clamp
            let mut budget = 126.0 - shade.abs();
            for _ in 0..bins {
                let (cu, cv) = loop {
                    let cu = rng.gen_range(0, 8) as usize;
                    let cv = rng.gen_range(0, 8) as usize;
                    if (cu, cv) != (0, 0) && coeffs[cu * 8 + cv] == 0.0 {
                        break (cu, cv);
                    }
                };
                let mut magnitude = 20.0 + 230.0 * rng.next_f64().powf(1.5);
                if magnitude * 0.25 > budget {
                    magnitude = budget / 0.25;
                }
                if magnitude < 8.0 {
                    continue;
                }
                budget -= magnitude * 0.25;
                let sign = if rng.next_f64() < 0.5 { -1.0 } else { 1.0 };
                coeffs[cu * 8 + cv] = sign * magnitude;
            }
            let pixels = idct8(&coeffs);
            for i in 0..8usize {
                let y = by * 8 + i;
                if y >= height as usize {
                    continue;
                }
                for j in 0..8usize {
                    let x = bx * 8 + j;
                    if x >= width as usize {
                        continue;
                    }
                    raster[y * width as usize + x] =
                        (128.0 + pixels[i * 8 + j]).round().clamp(0.0, 255.0) as u8;
                }
            }
        }
    }
    GrayImage::from_raster(width, height, &raster).unwrap()
}

pub fn deer() -> GrayImage {
    synth_image(1024, 1024, 1)
}

pub fn cameraman() -> GrayImage {
    synth_image(192, 192, 2)
}

pub fn scenery() -> GrayImage {
    synth_image(512, 512, 3)
}

pub fn lena() -> GrayImage {
    synth_image(512, 512, 4)
}
