//! Grayscale image compression into quantum image-preparation circuits.
//!
//! The pipeline is classical preparation followed by quantum-circuit
//! construction: block-transform an image (8×8 DCT or level-1 Haar),
//! quantize with a scalar factor, keep only the non-zero coefficients,
//! then build the circuit that prepares the corresponding basis-encoded
//! state — GQIR (one position-controlled NOT per set magnitude bit) or
//! EFRQI (value bits routed through one auxiliary qubit). A dense
//! statevector simulator verifies desk-scale circuits against their maps,
//! and the metrics module assembles PSNR-versus-bit-rate curves from the
//! classical cost accounting alone, so sweeps scale to megapixel images.
//!
//! The crate is `no_std`-compatible (`alloc` required): disable default
//! features and enable `libm` for the float math.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod circuit;
pub mod encoders;
pub mod image;
mod math;
pub mod metrics;
pub mod qsim;
pub mod transform;

pub use circuit::{Circuit, Gate, GateCensus, GateKind, Polarity, RegisterLayout};
pub use encoders::{CoeffMap, CostOptions, CostReport, EncoderKind, Sign};
pub use image::GrayImage;
pub use metrics::{RDPoint, Scheme};
pub use qsim::StateVector;
pub use transform::{QuantSpec, TransformKind};
