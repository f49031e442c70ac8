//! Quantum circuit intermediate representation.
//!
//! The register layout is fixed by construction: `q` value qubits (qubit
//! `i` carries bit `i` of the coefficient magnitude), one auxiliary qubit
//! at index `q`, then `2n` position qubits holding the Y coordinate
//! followed by the X coordinate, most-significant bit first. Gate order is
//! application order.
//!
//! Control polarity is first-class: a negative control matches a qubit in
//! |0⟩. Addressing a position whose bits are mixed 0/1 therefore needs no
//! X-sandwich at build time; the expansion to positive-only controls is a
//! separate rewrite used on export.

use alloc::vec::Vec;

/// Register layout of `q + 2n + 1` qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegisterLayout {
    q: u32,
    n: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("value and position registers need at least one qubit each (q={q}, n={n})")]
pub struct LayoutError {
    pub q: u32,
    pub n: u32,
}

impl RegisterLayout {
    pub fn new(q: u32, n: u32) -> Result<Self, LayoutError> {
        if q == 0 || n == 0 {
            return Err(LayoutError { q, n });
        }
        Ok(RegisterLayout { q, n })
    }

    /// Value-register width in qubits.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Position half-width; each coordinate uses `n` qubits.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Total qubit count, `q + 2n + 1`.
    pub fn total(&self) -> u32 {
        self.q + 2 * self.n + 1
    }

    /// Qubit carrying bit `i` of the coefficient magnitude.
    pub fn value_qubit(&self, bit: u32) -> u32 {
        debug_assert!(bit < self.q);
        bit
    }

    /// The bridging qubit between value and position registers.
    pub fn aux_qubit(&self) -> u32 {
        self.q
    }

    /// Position qubits in register order: Y MSB..LSB, then X MSB..LSB.
    pub fn position_qubits(&self) -> impl Iterator<Item = u32> {
        let start = self.q + 1;
        start..start + 2 * self.n
    }

    /// Controls addressing position `(y, x)`: one per position qubit, with
    /// polarity matching the corresponding address bit.
    pub fn position_controls(&self, y: u32, x: u32) -> Vec<Control> {
        debug_assert!(y < (1 << self.n) && x < (1 << self.n));
        let mut controls = Vec::with_capacity(2 * self.n as usize);
        let start = self.q + 1;
        for j in 0..self.n {
            let bit = (y >> (self.n - 1 - j)) & 1;
            controls.push(Control {
                qubit: start + j,
                polarity: if bit == 1 {
                    Polarity::Positive
                } else {
                    Polarity::Negative
                },
            });
        }
        for j in 0..self.n {
            let bit = (x >> (self.n - 1 - j)) & 1;
            controls.push(Control {
                qubit: start + self.n + j,
                polarity: if bit == 1 {
                    Polarity::Positive
                } else {
                    Polarity::Negative
                },
            });
        }
        controls
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Identity,
    Hadamard,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Control matches |1⟩.
    Positive,
    /// Control matches |0⟩.
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: u32,
    pub polarity: Polarity,
}

/// One gate: a kind, a target, and zero or more polarized controls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub target: u32,
    pub controls: Vec<Control>,
}

impl Gate {
    pub fn hadamard(target: u32) -> Self {
        Gate {
            kind: GateKind::Hadamard,
            target,
            controls: Vec::new(),
        }
    }

    pub fn not(target: u32) -> Self {
        Gate {
            kind: GateKind::Not,
            target,
            controls: Vec::new(),
        }
    }

    pub fn controlled_not(target: u32, controls: Vec<Control>) -> Self {
        Gate {
            kind: GateKind::Not,
            target,
            controls,
        }
    }

    /// Single positive control.
    pub fn cnot(control: u32, target: u32) -> Self {
        Gate {
            kind: GateKind::Not,
            target,
            controls: alloc::vec![Control {
                qubit: control,
                polarity: Polarity::Positive
            }],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum GateError {
    #[error("target qubit {target} outside register of {total} qubits")]
    TargetOutOfRange { target: u32, total: u32 },
    #[error("control qubit {control} outside register of {total} qubits")]
    ControlOutOfRange { control: u32, total: u32 },
    #[error("qubit {0} appears more than once in the control list")]
    DuplicateControl(u32),
    #[error("target qubit {0} cannot also be a control")]
    TargetIsControl(u32),
    #[error("{0:?} gates take no controls")]
    ControlsNotAllowed(GateKind),
}

/// Gate counts by kind and control arity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateCensus {
    pub hadamard: u64,
    /// Uncontrolled NOT gates.
    pub not: u64,
    /// NOT gates with exactly one control.
    pub cnot: u64,
    /// NOT gates with two or more controls.
    pub toffoli_like: u64,
    pub identity: u64,
}

impl GateCensus {
    pub fn total(&self) -> u64 {
        self.hadamard + self.not + self.cnot + self.toffoli_like + self.identity
    }
}

/// Ordered gate list over a register layout; gates apply left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    layout: RegisterLayout,
    gates: Vec<Gate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("no free qubit available to borrow for a {controls}-control NOT on {total} qubits")]
    NoBorrowQubit { controls: usize, total: u32 },
}

impl Circuit {
    /// Empty circuit over `q + 2n + 1` qubits, semantically the all-zeros
    /// initial state.
    pub fn new(q: u32, n: u32) -> Result<Self, LayoutError> {
        Ok(Circuit {
            layout: RegisterLayout::new(q, n)?,
            gates: Vec::new(),
        })
    }

    pub fn with_layout(layout: RegisterLayout) -> Self {
        Circuit {
            layout,
            gates: Vec::new(),
        }
    }

    pub fn layout(&self) -> RegisterLayout {
        self.layout
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends a gate after validating it against the layout.
    pub fn push(&mut self, gate: Gate) -> Result<(), GateError> {
        let total = self.layout.total();
        if gate.target >= total {
            return Err(GateError::TargetOutOfRange {
                target: gate.target,
                total,
            });
        }
        if !gate.controls.is_empty() && gate.kind != GateKind::Not {
            return Err(GateError::ControlsNotAllowed(gate.kind));
        }
        for (i, c) in gate.controls.iter().enumerate() {
            if c.qubit >= total {
                return Err(GateError::ControlOutOfRange {
                    control: c.qubit,
                    total,
                });
            }
            if c.qubit == gate.target {
                return Err(GateError::TargetIsControl(c.qubit));
            }
            if gate.controls[..i].iter().any(|prev| prev.qubit == c.qubit) {
                return Err(GateError::DuplicateControl(c.qubit));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends H on each of the `2n` position qubits, creating the uniform
    /// position superposition. Identity gates on the value and auxiliary
    /// qubits are implicit: they do not change the state and are not
    /// materialized, so gate counts track only effective gates.
    pub fn append_hadamard_wall(&mut self) {
        for qubit in self.layout.position_qubits() {
            // indices derived from the layout are always in range
            self.gates.push(Gate::hadamard(qubit));
        }
    }

    /// Exact gate counts by kind and control arity.
    pub fn gate_census(&self) -> GateCensus {
        let mut census = GateCensus::default();
        for gate in &self.gates {
            match (gate.kind, gate.controls.len()) {
                (GateKind::Identity, _) => census.identity += 1,
                (GateKind::Hadamard, _) => census.hadamard += 1,
                (GateKind::Not, 0) => census.not += 1,
                (GateKind::Not, 1) => census.cnot += 1,
                (GateKind::Not, _) => census.toffoli_like += 1,
            }
        }
        census
    }

    /// Rewrites every negative control into an X-sandwich around the same
    /// gate with positive-only controls. Preserves the unitary action.
    pub fn expand_negative_controls(&self) -> Circuit {
        let mut out = Circuit::with_layout(self.layout);
        for gate in &self.gates {
            let negatives: Vec<u32> = gate
                .controls
                .iter()
                .filter(|c| c.polarity == Polarity::Negative)
                .map(|c| c.qubit)
                .collect();
            for &qubit in &negatives {
                out.gates.push(Gate::not(qubit));
            }
            out.gates.push(Gate {
                kind: gate.kind,
                target: gate.target,
                controls: gate
                    .controls
                    .iter()
                    .map(|c| Control {
                        qubit: c.qubit,
                        polarity: Polarity::Positive,
                    })
                    .collect(),
            });
            for &qubit in &negatives {
                out.gates.push(Gate::not(qubit));
            }
        }
        out
    }

    /// Rewrites every NOT with three or more controls into a network of
    /// Toffoli gates, borrowing one idle register qubit per split. No
    /// qubits are added; a gate whose support already covers the whole
    /// register cannot be decomposed and yields an error.
    pub fn decompose_mcx(&self) -> Result<Circuit, DecomposeError> {
        let mut out = Circuit::with_layout(self.layout);
        for gate in &self.gates {
            if gate.kind == GateKind::Not && gate.controls.len() >= 3 {
                decompose_into(gate, self.layout.total(), &mut out.gates)?;
            } else {
                out.gates.push(gate.clone());
            }
        }
        Ok(out)
    }
}

/// Splits a k-control NOT (k ≥ 3) as A·B·A·B where A flips a borrowed
/// qubit under the first half of the controls and B targets the original
/// qubit under the second half plus the borrow. The borrowed qubit may
/// hold any state; it is restored. Recurses until every piece is a
/// Toffoli or smaller.
fn decompose_into(gate: &Gate, total: u32, out: &mut Vec<Gate>) -> Result<(), DecomposeError> {
    if gate.controls.len() <= 2 {
        out.push(gate.clone());
        return Ok(());
    }
    let borrow = (0..total)
        .find(|&qubit| qubit != gate.target && gate.controls.iter().all(|c| c.qubit != qubit))
        .ok_or(DecomposeError::NoBorrowQubit {
            controls: gate.controls.len(),
            total,
        })?;
    let split = gate.controls.len().div_ceil(2);
    let first = Gate {
        kind: GateKind::Not,
        target: borrow,
        controls: gate.controls[..split].to_vec(),
    };
    let mut second_controls = gate.controls[split..].to_vec();
    second_controls.push(Control {
        qubit: borrow,
        polarity: Polarity::Positive,
    });
    let second = Gate {
        kind: GateKind::Not,
        target: gate.target,
        controls: second_controls,
    };
    for _ in 0..2 {
        decompose_into(&first, total, out)?;
        decompose_into(&second, total, out)?;
    }
    Ok(())
}
