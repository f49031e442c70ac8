//! The `qimc` command line: encode, decode, verify, rd-curve.
//!
//! Exit codes: 0 success, 1 data or verification failure, 2 usage, 3
//! capacity (circuit too wide to simulate). Verification is its own
//! command rather than part of encode: the bit accounting works at any
//! image size, while simulation is desk-scale only.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use qimc_core::encoders::{
    build_coeff_map, decode_coeff_map, encode_efrqi_with, encode_gqir_with, BlockBitsMode,
    CostOptions,
};
use qimc_core::metrics::{self, Scheme, DEFAULT_Q_FACTORS};
use qimc_core::qsim::{self, simulate, verify_prepared_state};
use qimc_core::transform::QuantSpec;
use qimc_core::EncoderKind;

use crate::formats;
use crate::pgm;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Capacity(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Data(_) | CliError::Io(_) => 1,
            CliError::Capacity(_) => 3,
        }
    }
}

impl From<pgm::PgmError> for CliError {
    fn from(err: pgm::PgmError) -> Self {
        CliError::Data(err.to_string())
    }
}

impl From<formats::FormatError> for CliError {
    fn from(err: formats::FormatError) -> Self {
        CliError::Data(err.to_string())
    }
}

impl From<metrics::MetricsError> for CliError {
    fn from(err: metrics::MetricsError) -> Self {
        CliError::Data(err.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "qimc",
    version,
    about = "Compress grayscale images into quantum image-preparation circuits"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Encode a PGM image into a preparation circuit plus sidecar files
    Encode(EncodeArgs),
    /// Reconstruct a PGM image from a coefficient-map sidecar
    Decode(DecodeArgs),
    /// Simulate a circuit and check it prepares exactly its map
    Verify(VerifyArgs),
    /// Sweep quantization factors and write a bit-rate/PSNR CSV
    RdCurve(RdCurveArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum BlockBitsArg {
    #[default]
    None,
    Log2,
}

impl From<BlockBitsArg> for BlockBitsMode {
    fn from(arg: BlockBitsArg) -> Self {
        match arg {
            BlockBitsArg::None => BlockBitsMode::None,
            BlockBitsArg::Log2 => BlockBitsMode::Log2,
        }
    }
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse()
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    /// Input PGM image (P5 or P2)
    pub input: PathBuf,
    /// Encoding scheme
    #[arg(long, value_parser = parse_scheme, default_value = "dct-efrqi")]
    pub scheme: Scheme,
    /// Quantization factor
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..), default_value_t = 16)]
    pub q: u32,
    /// Skip the -128 level shift before the DCT
    #[arg(long)]
    pub no_center: bool,
    /// Block-address overhead accounting
    #[arg(long, value_enum, default_value_t)]
    pub block_bits: BlockBitsArg,
    /// Also write circuit.qasm
    #[arg(long)]
    pub emit_qasm: bool,
    /// How NOTs with three or more controls appear in QASM
    #[arg(long, value_enum, default_value_t)]
    pub mcx_style: McxStyleArg,
    /// Directory for circuit.json, coeffmap.json, report.json
    #[arg(long, short, default_value = ".")]
    pub output: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum McxStyleArg {
    /// Reference `opaque mcx<k>` declarations
    #[default]
    Opaque,
    /// Rewrite into Toffolis by borrowing idle register qubits
    Decompose,
}

impl From<McxStyleArg> for formats::McxStyle {
    fn from(arg: McxStyleArg) -> Self {
        match arg {
            McxStyleArg::Opaque => formats::McxStyle::Opaque,
            McxStyleArg::Decompose => formats::McxStyle::Decompose,
        }
    }
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    /// Coefficient-map sidecar (coeffmap.json)
    pub coeffmap: PathBuf,
    /// Reconstructed PGM path
    #[arg(long, short, default_value = "decoded.pgm")]
    pub output: PathBuf,
    /// Print PSNR against this original image
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Cross-check: sidecar must have been produced by this scheme
    #[arg(long, value_parser = parse_scheme)]
    pub scheme: Option<Scheme>,
    /// Cross-check: sidecar must carry this quantization factor
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub q: Option<u32>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Circuit JSON
    pub circuit: PathBuf,
    /// Coefficient-map sidecar the circuit is supposed to prepare
    pub coeffmap: PathBuf,
    /// Refuse to simulate wider registers
    #[arg(long, default_value_t = qsim::MAX_SIM_QUBITS)]
    pub qubit_budget: u32,
}

#[derive(Args, Debug)]
pub struct RdCurveArgs {
    /// Input PGM image
    pub input: PathBuf,
    /// Scheme to sweep; repeat the flag to compare several
    #[arg(long = "scheme", value_parser = parse_scheme, required = true)]
    pub schemes: Vec<Scheme>,
    /// Quantization factors; defaults to 8 16 32 36 70
    #[arg(long = "q", value_parser = clap::value_parser!(u32).range(1..))]
    pub q: Vec<u32>,
    /// Skip the -128 level shift before the DCT
    #[arg(long)]
    pub no_center: bool,
    /// Block-address overhead accounting
    #[arg(long, value_enum, default_value_t)]
    pub block_bits: BlockBitsArg,
    /// CSV output path (written atomically)
    #[arg(long, short)]
    pub output: PathBuf,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Encode(args) => cmd_encode(args),
        Command::Decode(args) => cmd_decode(args),
        Command::Verify(args) => cmd_verify(args),
        Command::RdCurve(args) => cmd_rd_curve(args),
    }
}

fn load_image(path: &Path) -> Result<qimc_core::GrayImage, CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
    Ok(pgm::load_pgm(&bytes)?)
}

pub fn cmd_encode(args: EncodeArgs) -> Result<(), CliError> {
    let image = load_image(&args.input)?;
    let spec = QuantSpec::new(args.q).expect("clap enforces q >= 1");
    let opts = CostOptions {
        block_bits: args.block_bits.into(),
    };
    let centered = !args.no_center;

    let map = build_coeff_map(&image, args.scheme.transform(), centered, spec);
    let result = match args.scheme.encoder() {
        EncoderKind::Gqir => encode_gqir_with(&map, qimc_core::encoders::VALUE_QUBITS, &opts),
        EncoderKind::Efrqi => encode_efrqi_with(&map, qimc_core::encoders::VALUE_QUBITS, &opts),
    };
    let (circuit, report) = result.map_err(|e| CliError::Data(e.to_string()))?;

    fs::create_dir_all(&args.output)?;
    fs::write(
        args.output.join("circuit.json"),
        formats::circuit_to_json(&circuit),
    )?;
    fs::write(
        args.output.join("coeffmap.json"),
        formats::coeffmap_to_json(&map),
    )?;
    fs::write(
        args.output.join("report.json"),
        formats::report_to_json(args.scheme.as_str(), &map, &report),
    )?;
    if args.emit_qasm {
        let qasm = formats::circuit_to_qasm(&circuit, args.mcx_style.into())?;
        fs::write(args.output.join("circuit.qasm"), qasm)?;
    }
    println!(
        "encoded {}: {} entries over {} qubits, bpp {:.6}",
        args.input.display(),
        report.nonzero_count,
        circuit.layout().total(),
        report.bpp
    );
    Ok(())
}

pub fn cmd_decode(args: DecodeArgs) -> Result<(), CliError> {
    let bytes = fs::read(&args.coeffmap)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", args.coeffmap.display())))?;
    let map = formats::coeffmap_from_json(&bytes)?;

    if let Some(scheme) = args.scheme {
        if scheme.transform() != map.transform() {
            return Err(CliError::Data(format!(
                "sidecar was built with transform `{}`, scheme `{scheme}` expects `{}`",
                map.transform(),
                scheme.transform()
            )));
        }
    }
    if let Some(q) = args.q {
        if q != map.q_factor() {
            return Err(CliError::Data(format!(
                "sidecar carries q_factor {}, got --q {q}",
                map.q_factor()
            )));
        }
    }

    let spec = QuantSpec::new(map.q_factor())
        .ok_or_else(|| CliError::Data("sidecar q_factor is zero".into()))?;
    let decoded = decode_coeff_map(&map, map.transform(), map.centered(), spec);
    fs::write(&args.output, pgm::save_pgm(&decoded, true))?;

    if let Some(reference) = &args.reference {
        let original = load_image(reference)?;
        let psnr = metrics::psnr(metrics::mse(&original, &decoded)?, metrics::PEAK_8BIT)?;
        println!("psnr_db: {psnr:.6}");
    }
    Ok(())
}

pub fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let circuit_bytes = fs::read(&args.circuit)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", args.circuit.display())))?;
    let circuit = formats::circuit_from_json(&circuit_bytes)?;
    let map_bytes = fs::read(&args.coeffmap)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", args.coeffmap.display())))?;
    let map = formats::coeffmap_from_json(&map_bytes)?;

    let total = circuit.layout().total();
    if total > args.qubit_budget {
        return Err(CliError::Capacity(format!(
            "{total} qubits exceed the verification budget of {}; \
             simulation is desk-scale only",
            args.qubit_budget
        )));
    }
    let state = simulate(&circuit).map_err(|e| match e {
        qsim::SimError::Capacity { .. } => CliError::Capacity(e.to_string()),
        other => CliError::Data(other.to_string()),
    })?;
    let report = verify_prepared_state(&state, &map).map_err(|e| CliError::Data(e.to_string()))?;
    println!("ok: {}", report.ok);
    println!("max_deviation: {:e}", report.max_deviation);
    if !report.ok {
        return Err(CliError::Data(
            "prepared state does not match the coefficient map".into(),
        ));
    }
    Ok(())
}

pub fn cmd_rd_curve(args: RdCurveArgs) -> Result<(), CliError> {
    let image = load_image(&args.input)?;
    let q_factors: Vec<u32> = if args.q.is_empty() {
        DEFAULT_Q_FACTORS.to_vec()
    } else {
        args.q.clone()
    };
    let opts = CostOptions {
        block_bits: args.block_bits.into(),
    };
    let centered = !args.no_center;

    let mut points = Vec::new();
    for &scheme in &args.schemes {
        points.extend(metrics::rd_curve(
            &image, scheme, &q_factors, centered, &opts,
        )?);
    }
    let csv = formats::rd_points_to_csv(&points);

    // write to a temp file in the destination directory, then rename, so a
    // failed run never leaves a partial CSV
    let dir = args.output.parent().filter(|p| !p.as_os_str().is_empty());
    let mut tmp = tempfile::NamedTempFile::new_in(dir.unwrap_or(Path::new(".")))?;
    tmp.write_all(&csv)?;
    tmp.persist(&args.output)
        .map_err(|e| CliError::Io(e.error))?;
    println!("wrote {} rows to {}", points.len(), args.output.display());
    Ok(())
}
