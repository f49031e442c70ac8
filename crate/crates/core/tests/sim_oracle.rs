//! Checks the statevector simulator against a dense matrix-product oracle
//! on small registers, and the circuit rewrites (negative-control
//! expansion, multi-controlled NOT decomposition) against the simulator.

use qimc_core::circuit::{Circuit, Control, Gate, Polarity};
use qimc_core::qsim::simulate;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Full 2^t × 2^t matrix of one gate, row-major. All gates in the set are
/// real, so the oracle works in f64.
fn gate_matrix(gate: &Gate, total: u32) -> Vec<f64> {
    let dim = 1usize << total;
    let mut m = vec![0.0; dim * dim];
    match gate.kind {
        qimc_core::GateKind::Identity => {
            for i in 0..dim {
                m[i * dim + i] = 1.0;
            }
        }
        qimc_core::GateKind::Hadamard => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let bit = 1usize << gate.target;
            for r in 0..dim {
                for c in 0..dim {
                    if (r & !bit) == (c & !bit) {
                        let sign = if r & bit != 0 && c & bit != 0 { -s } else { s };
                        m[r * dim + c] = sign;
                    }
                }
            }
        }
        qimc_core::GateKind::Not => {
            let bit = 1usize << gate.target;
            for c in 0..dim {
                let matched = gate.controls.iter().all(|ctl| {
                    let set = c & (1usize << ctl.qubit) != 0;
                    match ctl.polarity {
                        Polarity::Positive => set,
                        Polarity::Negative => !set,
                    }
                });
                let r = if matched { c ^ bit } else { c };
                m[r * dim + c] = 1.0;
            }
        }
    }
    m
}

/// Applies each gate's dense matrix in order to |0…0⟩.
fn oracle_state(circuit: &Circuit) -> Vec<f64> {
    let total = circuit.layout().total();
    let dim = 1usize << total;
    let mut state = vec![0.0; dim];
    state[0] = 1.0;
    for gate in circuit.gates() {
        let m = gate_matrix(gate, total);
        let mut next = vec![0.0; dim];
        for r in 0..dim {
            let mut acc = 0.0;
            for c in 0..dim {
                acc += m[r * dim + c] * state[c];
            }
            next[r] = acc;
        }
        state = next;
    }
    state
}

fn random_circuit(rng: &mut ChaCha8Rng, q: u32, n: u32, gates: usize) -> Circuit {
    let mut circuit = Circuit::new(q, n).unwrap();
    let total = circuit.layout().total();
    for _ in 0..gates {
        if rng.gen_bool(0.4) {
            circuit
                .push(Gate::hadamard(rng.gen_range(0..total)))
                .unwrap();
        } else {
            let target = rng.gen_range(0..total);
            let mut others: Vec<u32> = (0..total).filter(|&qb| qb != target).collect();
            others.shuffle(rng);
            let arity = rng.gen_range(0..=others.len().min(4));
            let controls: Vec<Control> = others[..arity]
                .iter()
                .map(|&qubit| Control {
                    qubit,
                    polarity: if rng.gen_bool(0.5) {
                        Polarity::Positive
                    } else {
                        Polarity::Negative
                    },
                })
                .collect();
            circuit
                .push(Gate::controlled_not(target, controls))
                .unwrap();
        }
    }
    circuit
}

fn assert_states_match(circuit: &Circuit, tolerance: f64) {
    let expected = oracle_state(circuit);
    let state = simulate(circuit).unwrap();
    for (amp, want) in state.amplitudes().iter().zip(&expected) {
        assert!(
            (amp.re - want).abs() <= tolerance && amp.im == 0.0,
            "amplitude {} vs oracle {want}",
            amp.re
        );
    }
}

#[test]
fn simulator_matches_dense_oracle_on_small_registers() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    let layouts = [
        (1u32, 1u32),
        (2, 1),
        (3, 1),
        (4, 1),
        (5, 1),
        (1, 2),
        (2, 2),
        (3, 2),
    ];
    let mut checked = 0;
    for round in 0..15 {
        for &(q, n) in &layouts {
            let circuit = random_circuit(&mut rng, q, n, 8 + round);
            assert_states_match(&circuit, 1e-12);
            checked += 1;
        }
    }
    assert!(checked >= 100);
}

#[test]
fn encoder_circuits_match_dense_oracle() {
    // q = 5, n = 1 keeps the whole register at 8 qubits
    let mut rng = ChaCha8Rng::seed_from_u64(0xE0C);
    for _ in 0..10 {
        let mut map =
            qimc_core::encoders::CoeffMap::new(1, (2, 2), qimc_core::TransformKind::None, false, 1);
        for y in 0..2 {
            for x in 0..2 {
                if rng.gen_bool(0.7) {
                    map.insert(y, x, rng.gen_range(1..32), qimc_core::Sign::Plus)
                        .unwrap();
                }
            }
        }
        let (gqir, _) = qimc_core::encoders::encode_gqir(&map, 5).unwrap();
        let (efrqi, _) = qimc_core::encoders::encode_efrqi(&map, 5).unwrap();
        assert_states_match(&gqir, 1e-12);
        assert_states_match(&efrqi, 1e-12);
    }
}

#[test]
fn negative_control_expansion_preserves_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF00D);
    for _ in 0..40 {
        let circuit = random_circuit(&mut rng, 3, 2, 12); // 8 qubits
        let expanded = circuit.expand_negative_controls();
        assert!(expanded
            .gates()
            .iter()
            .all(|g| g.controls.iter().all(|c| c.polarity == Polarity::Positive)));
        let a = simulate(&circuit).unwrap();
        let b = simulate(&expanded).unwrap();
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((x - y).norm_sqr().sqrt() <= 1e-12);
        }
    }
    // and at 12 qubits for scale
    let circuit = random_circuit(&mut rng, 5, 3, 30);
    let a = simulate(&circuit).unwrap();
    let b = simulate(&circuit.expand_negative_controls()).unwrap();
    for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
        assert!((x - y).norm_sqr().sqrt() <= 1e-12);
    }
}

#[test]
fn mcx_decomposition_preserves_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACE);
    for total_controls in 3..=6u32 {
        for _ in 0..10 {
            // q + 2n + 1 = 10 qubits, gate uses total_controls of them
            let mut circuit = Circuit::new(5, 2).unwrap();
            circuit.append_hadamard_wall();
            for qb in 0..3 {
                circuit.push(Gate::hadamard(qb)).unwrap();
            }
            let total = circuit.layout().total();
            let mut qubits: Vec<u32> = (0..total).collect();
            qubits.shuffle(&mut rng);
            let target = qubits[0];
            let controls: Vec<Control> = qubits[1..=total_controls as usize]
                .iter()
                .map(|&qubit| Control {
                    qubit,
                    polarity: if rng.gen_bool(0.5) {
                        Polarity::Positive
                    } else {
                        Polarity::Negative
                    },
                })
                .collect();
            circuit
                .push(Gate::controlled_not(target, controls))
                .unwrap();

            let decomposed = circuit.decompose_mcx().unwrap();
            assert!(decomposed.gates().iter().all(|g| g.controls.len() <= 2));
            let a = simulate(&circuit).unwrap();
            let b = simulate(&decomposed).unwrap();
            for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
                assert!((x - y).norm_sqr().sqrt() <= 1e-12);
            }
        }
    }
}

#[test]
fn decompose_then_expand_is_toffoli_only_and_equivalent() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let circuit = random_circuit(&mut rng, 2, 2, 14); // 7 qubits
    let rewritten = circuit.decompose_mcx().unwrap().expand_negative_controls();
    assert!(rewritten
        .gates()
        .iter()
        .all(|g| g.controls.len() <= 2
            && g.controls.iter().all(|c| c.polarity == Polarity::Positive)));
    let a = simulate(&circuit).unwrap();
    let b = simulate(&rewritten).unwrap();
    for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
        assert!((x - y).norm_sqr().sqrt() <= 1e-12);
    }
}
