//! Sparse coefficient maps, the GQIR / EFRQI / DCTEFRQI preparation
//! circuits that realize them, and the classical cost accounting.
//!
//! A [`CoeffMap`] keeps only the non-zero quantized coefficients — dropping
//! the zeros is the compression. GQIR writes each set bit of a magnitude
//! with its own position-controlled NOT, so it pays the full `2n`-bit
//! address once per set bit. EFRQI routes the value bits through the
//! auxiliary qubit: one position-controlled NOT raises the auxiliary, plain
//! CNOTs copy the bits, and a second position-controlled NOT resets it, so
//! the address is paid twice per coefficient regardless of popcount. That
//! asymmetry is exactly what the bit-rate accounting below measures.

use alloc::collections::BTreeMap;

use crate::circuit::{Circuit, Gate, GateCensus, LayoutError};
use crate::image::GrayImage;
use crate::math;
use crate::transform::{self, QuantSpec, TransformKind};

/// Number of value qubits used by the pipeline (8-bit magnitudes).
pub const VALUE_QUBITS: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(level: i32) -> Sign {
        if level < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn apply(self, magnitude: u32) -> i32 {
        match self {
            Sign::Plus => magnitude as i32,
            Sign::Minus => -(magnitude as i32),
        }
    }
}

/// One non-zero coefficient: magnitude in `[1, 255]` plus a sign carried
/// classically (the value register holds magnitudes only).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapEntry {
    pub magnitude: u8,
    pub sign: Sign,
}

/// Sparse map from padded `(y, x)` position to non-zero coefficient.
///
/// Also records the recipe that produced it (transform, centering,
/// quantization factor) so the decode path and the serialized sidecar stay
/// self-describing, and the number of magnitudes clamped by quantization.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffMap {
    n: u32,
    original_dims: (u32, u32),
    transform: TransformKind,
    centered: bool,
    q_factor: u32,
    clamped_count: u64,
    entries: BTreeMap<(u32, u32), MapEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("position ({y}, {x}) outside the {side}x{side} padded grid")]
    PositionOutOfRange { y: u32, x: u32, side: u32 },
    #[error("zero magnitudes are omitted, not stored")]
    ZeroMagnitude,
}

impl CoeffMap {
    pub fn new(
        n: u32,
        original_dims: (u32, u32),
        transform: TransformKind,
        centered: bool,
        q_factor: u32,
    ) -> Self {
        CoeffMap {
            n,
            original_dims,
            // centering only applies to the DCT path
            centered: centered && transform == TransformKind::Dct8,
            transform,
            q_factor,
            clamped_count: 0,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, y: u32, x: u32, magnitude: u8, sign: Sign) -> Result<(), MapError> {
        let side = 1u32 << self.n;
        if y >= side || x >= side {
            return Err(MapError::PositionOutOfRange { y, x, side });
        }
        if magnitude == 0 {
            return Err(MapError::ZeroMagnitude);
        }
        self.entries.insert((y, x), MapEntry { magnitude, sign });
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Side of the padded grid the positions address.
    pub fn padded_size(&self) -> u32 {
        1 << self.n
    }

    pub fn original_dims(&self) -> (u32, u32) {
        self.original_dims
    }

    pub fn transform(&self) -> TransformKind {
        self.transform
    }

    pub fn centered(&self) -> bool {
        self.centered
    }

    pub fn q_factor(&self) -> u32 {
        self.q_factor
    }

    /// Coefficients whose magnitude hit the 255 clamp during quantization.
    pub fn clamped_count(&self) -> u64 {
        self.clamped_count
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in raster order (y-major ascending).
    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), MapEntry)> + '_ {
        self.entries.iter().map(|(&pos, &entry)| (pos, entry))
    }

    pub fn get(&self, y: u32, x: u32) -> Option<MapEntry> {
        self.entries.get(&(y, x)).copied()
    }

    /// Magnitude at a position, zero when absent.
    pub fn magnitude_at(&self, y: u32, x: u32) -> u32 {
        self.get(y, x).map_or(0, |e| e.magnitude as u32)
    }

    /// Transform coefficients carry a classical sign bit each; raw pixel
    /// maps do not.
    pub fn is_signed(&self) -> bool {
        self.transform != TransformKind::None
    }

    /// Total count of 1-bits over all magnitudes.
    pub fn coeff_one_bits(&self) -> u64 {
        self.entries
            .values()
            .map(|e| e.magnitude.count_ones() as u64)
            .sum()
    }

    pub(crate) fn set_clamped_count(&mut self, count: u64) {
        self.clamped_count = count;
    }
}

/// Which preparation circuit family the cost accounting refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncoderKind {
    Gqir,
    Efrqi,
}

/// Block-address overhead accounting mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockBitsMode {
    /// Global positions already locate the block; no extra bits.
    #[default]
    None,
    /// `ceil(log2(block_count))` extra bits per entry.
    Log2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CostOptions {
    pub block_bits: BlockBitsMode,
}

/// Gate counts plus the classical bit accounting behind the quantum bit
/// rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostReport {
    pub nonzero_count: u64,
    /// 1-bits over all magnitudes; these are the value-setting gates.
    pub coeff_one_bits: u64,
    /// Address bits consumed by position-controlled gates: `2n` per
    /// value-setting gate for GQIR, `2 × 2n` per entry for EFRQI.
    pub position_bits: u64,
    /// One classical sign bit per entry for transform coefficients.
    pub sign_bits: u64,
    pub block_bits: u64,
    pub clamped_count: u64,
    pub gate_census: GateCensus,
    /// Total bits divided by the original pixel count.
    pub bpp: f64,
}

impl CostReport {
    pub fn total_bits(&self) -> u64 {
        self.coeff_one_bits + self.position_bits + self.sign_bits + self.block_bits
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error("magnitude {magnitude} does not fit the {q}-qubit value register")]
    Range { magnitude: u32, q: u32 },
}

/// Effective block side: the nominal transform block, clipped to the
/// padded raster when the whole image is smaller than one block.
fn effective_block(kind: TransformKind, padded_size: u32) -> u32 {
    kind.nominal_block()
        .map_or(padded_size, |b| b.min(padded_size))
}

fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        64 - (x - 1).leading_zeros()
    }
}

/// Applies the block transform and quantizer to the padded raster and
/// collects the non-zero levels at their global `(y, x)` coordinates.
/// `transform = None` keeps raw pixels (spec and centering are ignored).
///
/// Blocks lying entirely in the padding are skipped: they can never touch
/// the cropped reconstruction, and under the centered convention their
/// all-zero pixels would otherwise cost a spurious DC per block.
pub fn build_coeff_map(
    image: &GrayImage,
    kind: TransformKind,
    centered: bool,
    spec: QuantSpec,
) -> CoeffMap {
    let n = image.n();
    let (width, height) = image.original_dims();
    let mut map = CoeffMap::new(n, image.original_dims(), kind, centered, spec.q_factor());
    let size = image.padded_size();

    if kind == TransformKind::None {
        for y in 0..size {
            for x in 0..size {
                let value = image.get(y, x);
                if value != 0 {
                    map.insert(y, x, value, Sign::Plus)
                        .expect("position within grid");
                }
            }
        }
        return map;
    }

    let b = effective_block(kind, size) as usize;
    let centered = map.centered();
    let mut samples = alloc::vec![0.0f64; b * b];
    let mut clamped = 0u64;
    for by in 0..(size as usize / b) {
        for bx in 0..(size as usize / b) {
            if (by * b) as u32 >= height || (bx * b) as u32 >= width {
                continue;
            }
            for u in 0..b {
                for v in 0..b {
                    samples[u * b + v] = image.get((by * b + u) as u32, (bx * b + v) as u32) as f64;
                }
            }
            let coeffs = match kind {
                TransformKind::Dct8 => transform::dct2(&samples, b, centered),
                TransformKind::Haar8 | TransformKind::Haar64 => transform::haar2(&samples, b),
                TransformKind::None => unreachable!(),
            };
            for u in 0..b {
                for v in 0..b {
                    let (level, was_clamped) = transform::quantize_full(coeffs[u * b + v], spec);
                    clamped += was_clamped as u64;
                    if level != 0 {
                        let y = (by * b + u) as u32;
                        let x = (bx * b + v) as u32;
                        map.insert(y, x, level.unsigned_abs() as u8, Sign::of(level))
                            .expect("position within grid");
                    }
                }
            }
        }
    }
    map.set_clamped_count(clamped);
    map
}

/// Reconstructs an image from a coefficient map: dequantize, inverse block
/// transform, round, clamp to `[0, 255]`, crop to the original dimensions.
///
/// The transform, centering flag, and quantization spec must match the ones
/// the map was built with; a mismatch is not detectable and produces
/// garbage. `transform = None` returns the stored pixels directly.
pub fn decode_coeff_map(
    map: &CoeffMap,
    kind: TransformKind,
    centered: bool,
    spec: QuantSpec,
) -> GrayImage {
    let size = map.padded_size();
    let (width, height) = map.original_dims();

    if kind == TransformKind::None {
        let mut raster = alloc::vec![0u8; width as usize * height as usize];
        for ((y, x), entry) in map.entries() {
            if y < height && x < width {
                raster[(y * width + x) as usize] = entry.magnitude;
            }
        }
        return GrayImage::from_raster(width, height, &raster).expect("original dims are nonzero");
    }

    let centered = centered && kind == TransformKind::Dct8;
    let s = size as usize;
    let mut grid = alloc::vec![0.0f64; s * s];
    for ((y, x), entry) in map.entries() {
        let level = entry.sign.apply(entry.magnitude as u32);
        grid[y as usize * s + x as usize] = transform::dequantize(level, spec);
    }

    let b = effective_block(kind, size) as usize;
    let mut coeffs = alloc::vec![0.0f64; b * b];
    let mut raster = alloc::vec![0u8; width as usize * height as usize];
    for by in 0..(s / b) {
        for bx in 0..(s / b) {
            if (by * b) as u32 >= height || (bx * b) as u32 >= width {
                continue;
            }
            for u in 0..b {
                for v in 0..b {
                    coeffs[u * b + v] = grid[(by * b + u) * s + bx * b + v];
                }
            }
            let samples = match kind {
                TransformKind::Dct8 => transform::idct2(&coeffs, b, centered),
                TransformKind::Haar8 | TransformKind::Haar64 => transform::ihaar2(&coeffs, b),
                TransformKind::None => unreachable!(),
            };
            for u in 0..b {
                let y = (by * b + u) as u32;
                if y >= height {
                    continue;
                }
                for v in 0..b {
                    let x = (bx * b + v) as u32;
                    if x >= width {
                        continue;
                    }
                    let value = math::round(samples[u * b + v]).clamp(0.0, 255.0) as u8;
                    raster[(y * width + x) as usize] = value;
                }
            }
        }
    }
    GrayImage::from_raster(width, height, &raster).expect("original dims are nonzero")
}

fn check_magnitudes(map: &CoeffMap, q: u32) -> Result<(), EncodeError> {
    if q >= 8 {
        return Ok(());
    }
    let limit = 1u32 << q;
    for (_, entry) in map.entries() {
        if entry.magnitude as u32 >= limit {
            return Err(EncodeError::Range {
                magnitude: entry.magnitude as u32,
                q,
            });
        }
    }
    Ok(())
}

fn classical_bits(map: &CoeffMap, kind: EncoderKind, opts: &CostOptions) -> (u64, u64, u64, u64) {
    let n = map.n() as u64;
    let entries = map.len() as u64;
    let ones = map.coeff_one_bits();
    let position_bits = match kind {
        EncoderKind::Gqir => 2 * n * ones,
        EncoderKind::Efrqi => 2 * (2 * n) * entries,
    };
    let sign_bits = if map.is_signed() { entries } else { 0 };
    let block_bits = match opts.block_bits {
        BlockBitsMode::None => 0,
        BlockBitsMode::Log2 => {
            if map.transform() == TransformKind::None {
                0
            } else {
                let b = effective_block(map.transform(), map.padded_size()) as u64;
                let blocks_per_side = map.padded_size() as u64 / b;
                let block_count = blocks_per_side * blocks_per_side;
                ceil_log2(block_count) as u64 * entries
            }
        }
    };
    (ones, position_bits, sign_bits, block_bits)
}

fn build_report(
    map: &CoeffMap,
    kind: EncoderKind,
    census: GateCensus,
    opts: &CostOptions,
) -> CostReport {
    let (ones, position_bits, sign_bits, block_bits) = classical_bits(map, kind, opts);
    let (width, height) = map.original_dims();
    let pixels = width as u64 * height as u64;
    let total = ones + position_bits + sign_bits + block_bits;
    CostReport {
        nonzero_count: map.len() as u64,
        coeff_one_bits: ones,
        position_bits,
        sign_bits,
        block_bits,
        clamped_count: map.clamped_count(),
        gate_census: census,
        bpp: total as f64 / pixels as f64,
    }
}

/// Closed-form gate census for a map, without building the circuit. The
/// formulas are exact; tests assert they match the built circuits.
pub fn estimate_census(map: &CoeffMap, kind: EncoderKind) -> GateCensus {
    let entries = map.len() as u64;
    let ones = map.coeff_one_bits();
    match kind {
        EncoderKind::Gqir => GateCensus {
            hadamard: 2 * map.n() as u64,
            toffoli_like: ones,
            ..GateCensus::default()
        },
        EncoderKind::Efrqi => GateCensus {
            hadamard: 2 * map.n() as u64,
            toffoli_like: 2 * entries,
            cnot: ones,
            ..GateCensus::default()
        },
    }
}

/// Cost report straight from the map, used where the circuit itself is not
/// needed (rate-distortion sweeps over large images).
pub fn estimate_cost(map: &CoeffMap, kind: EncoderKind, opts: &CostOptions) -> CostReport {
    build_report(map, kind, estimate_census(map, kind), opts)
}

/// Builds the GQIR preparation circuit: a Hadamard wall on the position
/// register, then one NOT per set magnitude bit, controlled by the full
/// position address.
pub fn encode_gqir(map: &CoeffMap, q: u32) -> Result<(Circuit, CostReport), EncodeError> {
    encode_gqir_with(map, q, &CostOptions::default())
}

pub fn encode_gqir_with(
    map: &CoeffMap,
    q: u32,
    opts: &CostOptions,
) -> Result<(Circuit, CostReport), EncodeError> {
    check_magnitudes(map, q)?;
    let mut circuit = Circuit::new(q, map.n())?;
    let layout = circuit.layout();
    circuit.append_hadamard_wall();
    for ((y, x), entry) in map.entries() {
        for bit in set_bits(entry.magnitude, q) {
            let gate =
                Gate::controlled_not(layout.value_qubit(bit), layout.position_controls(y, x));
            circuit
                .push(gate)
                .expect("gate indices derived from layout");
        }
    }
    let report = build_report(map, EncoderKind::Gqir, circuit.gate_census(), opts);
    Ok((circuit, report))
}

/// Builds the EFRQI preparation circuit: per entry, a position-controlled
/// NOT raises the auxiliary qubit, CNOTs copy each set bit into the value
/// register, and the same position-controlled NOT resets the auxiliary.
pub fn encode_efrqi(map: &CoeffMap, q: u32) -> Result<(Circuit, CostReport), EncodeError> {
    encode_efrqi_with(map, q, &CostOptions::default())
}

pub fn encode_efrqi_with(
    map: &CoeffMap,
    q: u32,
    opts: &CostOptions,
) -> Result<(Circuit, CostReport), EncodeError> {
    check_magnitudes(map, q)?;
    let mut circuit = Circuit::new(q, map.n())?;
    let layout = circuit.layout();
    circuit.append_hadamard_wall();
    for ((y, x), entry) in map.entries() {
        let bridge = Gate::controlled_not(layout.aux_qubit(), layout.position_controls(y, x));
        circuit
            .push(bridge.clone())
            .expect("gate indices derived from layout");
        for bit in set_bits(entry.magnitude, q) {
            let gate = Gate::cnot(layout.aux_qubit(), layout.value_qubit(bit));
            circuit
                .push(gate)
                .expect("gate indices derived from layout");
        }
        circuit
            .push(bridge)
            .expect("gate indices derived from layout");
    }
    let report = build_report(map, EncoderKind::Efrqi, circuit.gate_census(), opts);
    Ok((circuit, report))
}

/// The full scheme: 8×8 block DCT with quantization, then EFRQI encoding
/// of the surviving coefficients. Returns the map alongside the circuit so
/// the decode path can reconstruct the image.
pub fn encode_dctefrqi(
    image: &GrayImage,
    spec: QuantSpec,
    q: u32,
) -> Result<(Circuit, CoeffMap, CostReport), EncodeError> {
    encode_dctefrqi_with(image, spec, q, true, &CostOptions::default())
}

pub fn encode_dctefrqi_with(
    image: &GrayImage,
    spec: QuantSpec,
    q: u32,
    centered: bool,
    opts: &CostOptions,
) -> Result<(Circuit, CoeffMap, CostReport), EncodeError> {
    let map = build_coeff_map(image, TransformKind::Dct8, centered, spec);
    let (circuit, report) = encode_efrqi_with(&map, q, opts)?;
    Ok((circuit, map, report))
}

fn set_bits(magnitude: u8, q: u32) -> impl Iterator<Item = u32> {
    (0..q.min(8)).filter(move |&bit| magnitude & (1 << bit) != 0)
}
