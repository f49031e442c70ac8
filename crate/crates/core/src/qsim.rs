//! Dense statevector simulator for the encoder gate set.
//!
//! Only Hadamard and (multi-)controlled NOT reach the simulator, so every
//! amplitude stays real; the state is still stored as complex numbers to
//! keep the representation general. Qubit `k` is the k-th least
//! significant bit of the amplitude index, which makes the basis index of
//! a prepared coefficient simply `magnitude | aux << q | position bits`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::circuit::{Circuit, GateKind, Polarity, RegisterLayout};
use crate::encoders::CoeffMap;
use crate::math;
use crate::transform::TransformKind;

/// Hard cap on simulated register width (2^24 amplitudes ≈ 256 MiB).
pub const MAX_SIM_QUBITS: u32 = 24;

/// Amplitude tolerance for prepared-state verification.
pub const VERIFY_TOLERANCE: f64 = 1e-10;

/// Amplitudes below this are treated as zero when reading a state back.
pub const READBACK_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("{total} qubits exceed the {max}-qubit simulation budget")]
    Capacity { total: u32, max: u32 },
    #[error("state has position half-width n={state_n}, map has n={map_n}")]
    LayoutMismatch { state_n: u32, map_n: u32 },
    #[error("map magnitude {magnitude} does not fit the {q}-qubit value register")]
    ValueOverflow { magnitude: u32, q: u32 },
    #[error("position ({y}, {x}) holds {found} distinct values above threshold")]
    MalformedState { y: u32, x: u32, found: u32 },
}

/// Full amplitude vector over a register layout.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: RegisterLayout,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// Index of the basis state with the given value register contents,
    /// auxiliary bit, and position.
    pub fn basis_index(&self, value: u32, aux: u32, y: u32, x: u32) -> usize {
        basis_index(self.layout, value, aux, y, x)
    }

    /// Σ|amplitude|², 1 for any normalized state.
    pub fn norm_sqr_sum(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Basis index bits contributed by the position register for `(y, x)`.
fn position_bits(layout: RegisterLayout, y: u32, x: u32) -> usize {
    let q = layout.q();
    let n = layout.n();
    let mut bits = 0usize;
    for j in 0..n {
        if (y >> (n - 1 - j)) & 1 == 1 {
            bits |= 1 << (q + 1 + j);
        }
        if (x >> (n - 1 - j)) & 1 == 1 {
            bits |= 1 << (q + 1 + n + j);
        }
    }
    bits
}

fn basis_index(layout: RegisterLayout, value: u32, aux: u32, y: u32, x: u32) -> usize {
    debug_assert!(value < (1 << layout.q()) && aux <= 1);
    value as usize | (aux as usize) << layout.q() | position_bits(layout, y, x)
}

/// Applies the circuit's gates in order to |0…0⟩.
pub fn simulate(circuit: &Circuit) -> Result<StateVector, SimError> {
    let layout = circuit.layout();
    let total = layout.total();
    if total > MAX_SIM_QUBITS {
        return Err(SimError::Capacity {
            total,
            max: MAX_SIM_QUBITS,
        });
    }
    let len = 1usize << total;
    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); len];
    amps[0] = Complex64::new(1.0, 0.0);

    for gate in circuit.gates() {
        match gate.kind {
            GateKind::Identity => {}
            GateKind::Hadamard => {
                let bit = 1usize << gate.target;
                let scale = core::f64::consts::FRAC_1_SQRT_2;
                for i in 0..len {
                    if i & bit == 0 {
                        let a = amps[i];
                        let b = amps[i | bit];
                        amps[i] = (a + b) * scale;
                        amps[i | bit] = (a - b) * scale;
                    }
                }
            }
            GateKind::Not => {
                let bit = 1usize << gate.target;
                let mut pos_mask = 0usize;
                let mut neg_mask = 0usize;
                for c in &gate.controls {
                    match c.polarity {
                        Polarity::Positive => pos_mask |= 1 << c.qubit,
                        Polarity::Negative => neg_mask |= 1 << c.qubit,
                    }
                }
                for i in 0..len {
                    if i & bit == 0 && i & pos_mask == pos_mask && i & neg_mask == 0 {
                        amps.swap(i, i | bit);
                    }
                }
            }
        }
    }
    Ok(StateVector {
        layout,
        amplitudes: amps,
    })
}

/// Result of checking a state against its coefficient map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyReport {
    pub ok: bool,
    /// Largest |amplitude − expected| over the whole state.
    pub max_deviation: f64,
}

/// Checks that the state is exactly the prepared coefficient state: for
/// every position `p`, amplitude `1/2^n` at (value = magnitude at `p` or
/// 0, aux = 0, position = `p`), and zero everywhere else.
pub fn verify_prepared_state(
    state: &StateVector,
    map: &CoeffMap,
) -> Result<VerifyReport, SimError> {
    let layout = state.layout();
    if layout.n() != map.n() {
        return Err(SimError::LayoutMismatch {
            state_n: layout.n(),
            map_n: map.n(),
        });
    }
    let value_limit = 1u32 << layout.q().min(31);
    for (_, entry) in map.entries() {
        if entry.magnitude as u32 >= value_limit {
            return Err(SimError::ValueOverflow {
                magnitude: entry.magnitude as u32,
                q: layout.q(),
            });
        }
    }

    let side = 1u32 << layout.n();
    let target = 1.0 / (1u64 << layout.n()) as f64;
    let mut expected_hits = alloc::vec![false; state.amplitudes.len()];
    let mut max_dev = 0.0f64;
    for y in 0..side {
        for x in 0..side {
            let idx = basis_index(layout, map.magnitude_at(y, x), 0, y, x);
            expected_hits[idx] = true;
            let dev = math::sqrt((state.amplitudes[idx] - target).norm_sqr());
            max_dev = max_dev.max(dev);
        }
    }
    for (i, amp) in state.amplitudes.iter().enumerate() {
        if !expected_hits[i] {
            let dev = math::sqrt(amp.norm_sqr());
            max_dev = max_dev.max(dev);
        }
    }
    Ok(VerifyReport {
        ok: max_dev <= VERIFY_TOLERANCE,
        max_deviation: max_dev,
    })
}

/// Reads the magnitudes back out of a prepared state. For each position
/// exactly one value index may carry weight; non-zero values become map
/// entries. Signs are not present in the state and come back as `+`; the
/// map's dimensions are the padded square since cropping information is
/// classical.
pub fn read_back(state: &StateVector) -> Result<CoeffMap, SimError> {
    let layout = state.layout();
    if layout.q() > 8 {
        return Err(SimError::ValueOverflow {
            magnitude: 0,
            q: layout.q(),
        });
    }
    let side = 1u32 << layout.n();
    let mut map = CoeffMap::new(layout.n(), (side, side), TransformKind::None, false, 1);
    for y in 0..side {
        for x in 0..side {
            let mut found: Option<u32> = None;
            let mut count = 0u32;
            for value in 0..(1u32 << layout.q()) {
                let amp = state.amplitudes[basis_index(layout, value, 0, y, x)];
                if math::sqrt(amp.norm_sqr()) > READBACK_THRESHOLD {
                    count += 1;
                    found = Some(value);
                }
            }
            if count != 1 {
                return Err(SimError::MalformedState { y, x, found: count });
            }
            let value = found.expect("count == 1");
            if value != 0 {
                map.insert(y, x, value as u8, crate::encoders::Sign::Plus)
                    .expect("position within grid");
            }
        }
    }
    Ok(map)
}
