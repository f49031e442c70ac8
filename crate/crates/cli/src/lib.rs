//! IO companion for the compression toolkit: PGM ingestion, the canonical
//! circuit/sidecar/report file formats, QASM export, and the `qimc`
//! command-line tool.

pub mod cli;
pub mod formats;
pub mod pgm;
