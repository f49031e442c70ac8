//! Canonical file formats: circuit JSON, coefficient-map sidecar JSON,
//! encode reports, QASM 2.0 text, and the rate-distortion CSV.
//!
//! The JSON formats are byte-stable: fields serialize in declaration
//! order, entries and gates in deterministic order, and nothing depends on
//! hashing or float formatting quirks. The wire structs below *are* the
//! format definition; core types convert to and from them.

use serde::{Deserialize, Serialize};

use qimc_core::circuit::{Circuit, Control, Gate, GateKind, Polarity};
use qimc_core::encoders::{CoeffMap, CostReport, Sign};
use qimc_core::metrics::RDPoint;
use qimc_core::transform::TransformKind;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid circuit: {0}")]
    Circuit(String),
    #[error("invalid coefficient map: {0}")]
    Map(String),
    #[error("cannot export: {0}")]
    Export(String),
}

// ---------------------------------------------------------------------------
// circuit JSON

#[derive(Serialize, Deserialize)]
struct LayoutDoc {
    q: u32,
    n: u32,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum KindDoc {
    Identity,
    Hadamard,
    Not,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
enum PolarityDoc {
    Positive,
    Negative,
}

#[derive(Serialize, Deserialize)]
struct ControlDoc {
    qubit: u32,
    polarity: PolarityDoc,
}

#[derive(Serialize, Deserialize)]
struct GateDoc {
    kind: KindDoc,
    target: u32,
    controls: Vec<ControlDoc>,
}

#[derive(Serialize, Deserialize)]
struct CircuitDoc {
    layout: LayoutDoc,
    gates: Vec<GateDoc>,
}

/// Canonical JSON bytes for a circuit; exporting twice is byte-identical.
pub fn circuit_to_json(circuit: &Circuit) -> Vec<u8> {
    let doc = CircuitDoc {
        layout: LayoutDoc {
            q: circuit.layout().q(),
            n: circuit.layout().n(),
        },
        gates: circuit
            .gates()
            .iter()
            .map(|gate| GateDoc {
                kind: match gate.kind {
                    GateKind::Identity => KindDoc::Identity,
                    GateKind::Hadamard => KindDoc::Hadamard,
                    GateKind::Not => KindDoc::Not,
                },
                target: gate.target,
                controls: gate
                    .controls
                    .iter()
                    .map(|c| ControlDoc {
                        qubit: c.qubit,
                        polarity: match c.polarity {
                            Polarity::Positive => PolarityDoc::Positive,
                            Polarity::Negative => PolarityDoc::Negative,
                        },
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_vec(&doc).expect("serialization cannot fail")
}

/// Parses and validates circuit JSON; every gate is checked against the
/// layout.
pub fn circuit_from_json(bytes: &[u8]) -> Result<Circuit, FormatError> {
    let doc: CircuitDoc = serde_json::from_slice(bytes)?;
    let mut circuit = Circuit::new(doc.layout.q, doc.layout.n)
        .map_err(|e| FormatError::Circuit(e.to_string()))?;
    for gate in doc.gates {
        let gate = Gate {
            kind: match gate.kind {
                KindDoc::Identity => GateKind::Identity,
                KindDoc::Hadamard => GateKind::Hadamard,
                KindDoc::Not => GateKind::Not,
            },
            target: gate.target,
            controls: gate
                .controls
                .into_iter()
                .map(|c| Control {
                    qubit: c.qubit,
                    polarity: match c.polarity {
                        PolarityDoc::Positive => Polarity::Positive,
                        PolarityDoc::Negative => Polarity::Negative,
                    },
                })
                .collect(),
        };
        circuit
            .push(gate)
            .map_err(|e| FormatError::Circuit(e.to_string()))?;
    }
    Ok(circuit)
}

// ---------------------------------------------------------------------------
// coefficient-map sidecar JSON

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    y: u32,
    x: u32,
    magnitude: u8,
    sign: char,
}

#[derive(Serialize, Deserialize)]
struct MapDoc {
    n: u32,
    original_dims: (u32, u32),
    transform: String,
    centered: bool,
    q_factor: u32,
    entries: Vec<EntryDoc>,
}

/// Canonical sidecar JSON: the decode recipe (transform, centering,
/// quantization factor) plus the entries in raster order.
pub fn coeffmap_to_json(map: &CoeffMap) -> Vec<u8> {
    let doc = MapDoc {
        n: map.n(),
        original_dims: map.original_dims(),
        transform: map.transform().as_str().to_string(),
        centered: map.centered(),
        q_factor: map.q_factor(),
        entries: map
            .entries()
            .map(|((y, x), entry)| EntryDoc {
                y,
                x,
                magnitude: entry.magnitude,
                sign: match entry.sign {
                    Sign::Plus => '+',
                    Sign::Minus => '-',
                },
            })
            .collect(),
    };
    serde_json::to_vec(&doc).expect("serialization cannot fail")
}

pub fn coeffmap_from_json(bytes: &[u8]) -> Result<CoeffMap, FormatError> {
    let doc: MapDoc = serde_json::from_slice(bytes)?;
    let transform: TransformKind = doc.transform.parse().map_err(FormatError::Map)?;
    if doc.q_factor == 0 {
        return Err(FormatError::Map("q_factor must be at least 1".into()));
    }
    let mut map = CoeffMap::new(
        doc.n,
        doc.original_dims,
        transform,
        doc.centered,
        doc.q_factor,
    );
    for entry in doc.entries {
        let sign = match entry.sign {
            '+' => Sign::Plus,
            '-' => Sign::Minus,
            other => return Err(FormatError::Map(format!("bad sign {other:?}"))),
        };
        map.insert(entry.y, entry.x, entry.magnitude, sign)
            .map_err(|e| FormatError::Map(e.to_string()))?;
    }
    Ok(map)
}

// ---------------------------------------------------------------------------
// encode report JSON

#[derive(Serialize, Deserialize)]
struct CensusDoc {
    hadamard: u64,
    not: u64,
    cnot: u64,
    toffoli_like: u64,
    identity: u64,
}

#[derive(Serialize, Deserialize)]
struct ReportDoc {
    scheme: String,
    q_factor: u32,
    centered: bool,
    width: u32,
    height: u32,
    padded_size: u32,
    n: u32,
    nonzero_count: u64,
    coeff_one_bits: u64,
    position_bits: u64,
    sign_bits: u64,
    block_bits: u64,
    clamped_count: u64,
    gate_census: CensusDoc,
    bpp: f64,
}

pub fn report_to_json(scheme: &str, map: &CoeffMap, report: &CostReport) -> Vec<u8> {
    let (width, height) = map.original_dims();
    let doc = ReportDoc {
        scheme: scheme.to_string(),
        q_factor: map.q_factor(),
        centered: map.centered(),
        width,
        height,
        padded_size: map.padded_size(),
        n: map.n(),
        nonzero_count: report.nonzero_count,
        coeff_one_bits: report.coeff_one_bits,
        position_bits: report.position_bits,
        sign_bits: report.sign_bits,
        block_bits: report.block_bits,
        clamped_count: report.clamped_count,
        gate_census: CensusDoc {
            hadamard: report.gate_census.hadamard,
            not: report.gate_census.not,
            cnot: report.gate_census.cnot,
            toffoli_like: report.gate_census.toffoli_like,
            identity: report.gate_census.identity,
        },
        bpp: report.bpp,
    };
    serde_json::to_vec(&doc).expect("serialization cannot fail")
}

// ---------------------------------------------------------------------------
// QASM 2.0

/// How NOT gates with three or more controls are emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum McxStyle {
    /// Declare `opaque mcx<k>` gates and reference them.
    #[default]
    Opaque,
    /// Rewrite into Toffolis by borrowing idle register qubits.
    Decompose,
}

/// Renders a circuit as QASM 2.0 text. Negative controls are expanded to
/// X-sandwiches; larger controlled NOTs follow `style`.
pub fn circuit_to_qasm(circuit: &Circuit, style: McxStyle) -> Result<String, FormatError> {
    let rewritten = match style {
        McxStyle::Opaque => circuit.expand_negative_controls(),
        McxStyle::Decompose => circuit
            .decompose_mcx()
            .map_err(|e| FormatError::Export(e.to_string()))?
            .expand_negative_controls(),
    };

    let mut arities: Vec<usize> = rewritten
        .gates()
        .iter()
        .filter(|g| g.kind == GateKind::Not && g.controls.len() >= 3)
        .map(|g| g.controls.len())
        .collect();
    arities.sort_unstable();
    arities.dedup();

    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    for &arity in &arities {
        let args: Vec<String> = (0..arity).map(|i| format!("c{i}")).collect();
        out.push_str(&format!("opaque mcx{arity} {},t;\n", args.join(",")));
    }
    out.push_str(&format!("qreg q[{}];\n", rewritten.layout().total()));

    for gate in rewritten.gates() {
        match (gate.kind, gate.controls.len()) {
            (GateKind::Identity, _) => out.push_str(&format!("id q[{}];\n", gate.target)),
            (GateKind::Hadamard, _) => out.push_str(&format!("h q[{}];\n", gate.target)),
            (GateKind::Not, 0) => out.push_str(&format!("x q[{}];\n", gate.target)),
            (GateKind::Not, 1) => out.push_str(&format!(
                "cx q[{}],q[{}];\n",
                gate.controls[0].qubit, gate.target
            )),
            (GateKind::Not, 2) => out.push_str(&format!(
                "ccx q[{}],q[{}],q[{}];\n",
                gate.controls[0].qubit, gate.controls[1].qubit, gate.target
            )),
            (GateKind::Not, arity) => {
                let args: Vec<String> = gate
                    .controls
                    .iter()
                    .map(|c| format!("q[{}]", c.qubit))
                    .collect();
                out.push_str(&format!(
                    "mcx{arity} {},q[{}];\n",
                    args.join(","),
                    gate.target
                ));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// rate-distortion CSV

/// CSV with header `scheme,q,bpp,psnr_db`, six decimals, `inf` for the
/// zero-error sentinel. Byte-stable.
pub fn rd_points_to_csv(points: &[RDPoint]) -> Vec<u8> {
    let mut out = String::from("scheme,q,bpp,psnr_db\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{:.6},{:.6}\n",
            p.scheme.as_str(),
            p.q_factor,
            p.bpp,
            p.psnr_db
        ));
    }
    out.into_bytes()
}
