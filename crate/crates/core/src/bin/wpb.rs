//! Command-line front end: encode, decode, info, metrics, gen.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wpb_codec::synth::{generate, SynthKind};
use wpb_codec::{
    compression_stats, decode, encode, format_psnr, load_pnm, psnr, read_container, save_pnm, CodecConfig,
    WaveletId,
};

#[derive(Parser)]
#[command(name = "wpb", version, about = "Wavelet-packet best-tree image codec")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a binary PGM/PPM into a WPB1 container.
    Encode {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        codec: CodecFlags,
        /// Decode the result again and report its PSNR.
        #[arg(long)]
        verify: bool,
    },
    /// Expand a WPB1 container into PGM (gray) or PPM (colour).
    Decode { input: PathBuf, output: PathBuf },
    /// Print the header and per-plane tree statistics of a container.
    Info { input: PathBuf },
    /// PSNR between two PNM images.
    Metrics { a: PathBuf, b: PathBuf },
    /// Write a synthetic gray test image.
    Gen {
        #[arg(value_parser = ["horizontal", "vertical", "gradient", "constant", "noise"])]
        kind: String,
        size: usize,
        output: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(clap::Args)]
struct CodecFlags {
    /// haar, db2, db4 or bior2_2
    #[arg(long)]
    wavelet: Option<String>,
    /// Maximum decomposition level.
    #[arg(long)]
    levels: Option<u8>,
    /// Threshold of the best-tree cost count.
    #[arg(long)]
    cost_threshold: Option<f64>,
    /// Luma hard threshold.
    #[arg(long)]
    threshold: Option<f64>,
    /// Luma quantizer step.
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    chroma_threshold: Option<f64>,
    #[arg(long)]
    chroma_step: Option<f64>,
    /// Run smoothing tolerance in quantizer steps.
    #[arg(long)]
    rle_delta: Option<u32>,
}

enum Failure {
    Usage(String),
    Op(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Op(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

impl CodecFlags {
    fn config(&self) -> std::result::Result<CodecConfig, Failure> {
        let mut cfg = CodecConfig::default();
        if let Some(w) = &self.wavelet {
            cfg.wavelet = w.parse::<WaveletId>().map_err(|e| Failure::Usage(e.to_string()))?;
        }
        if let Some(j) = self.levels {
            cfg.max_level = j;
        }
        if let Some(t) = self.cost_threshold {
            cfg.cost_threshold = t;
        }
        if let Some(t) = self.threshold {
            cfg.luma.hard_threshold = t;
        }
        if let Some(s) = self.step {
            cfg.luma.step = s;
        }
        if let Some(t) = self.chroma_threshold {
            cfg.chroma.hard_threshold = t;
        }
        if let Some(s) = self.chroma_step {
            cfg.chroma.step = s;
        }
        if let Some(d) = self.rle_delta {
            cfg.rle_delta = d;
        }
        Ok(cfg)
    }
}

fn read(path: &Path) -> std::result::Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Op(format!("cannot open {}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> CmdResult {
    std::fs::write(path, bytes).map_err(|e| Failure::Op(format!("cannot write {}: {e}", path.display())))
}

fn cmd_encode(input: &Path, output: &Path, flags: &CodecFlags, verify: bool) -> CmdResult {
    let cfg = flags.config()?;
    let img = load_pnm(&read(input)?)?;
    let bytes = encode(&img, &cfg)?;
    write(output, &bytes)?;
    let stats = compression_stats(img.raw_len(), bytes.len())?;
    let quality = if verify { format_psnr(psnr(&img, &decode(&bytes)?)?) } else { "n/a".to_string() };
    println!("ratio={:.4} percent={:.4} psnr={quality}", stats.ratio, stats.percentage);
    Ok(())
}

fn cmd_decode(input: &Path, output: &Path) -> CmdResult {
    let img = decode(&read(input)?)?;
    write(output, &save_pnm(&img))
}

fn cmd_info(input: &Path) -> CmdResult {
    let c = read_container(&read(input)?)?;
    let h = &c.header;
    println!(
        "format=WPB1 version=1 colorspace={} width={} height={} wavelet={} levels={}",
        h.colorspace.name(),
        h.width,
        h.height,
        h.wavelet,
        h.max_level
    );
    let leaves: usize = c.planes.iter().map(|p| p.topology.leaf_count()).sum();
    let depth = c.planes.iter().map(|p| p.topology.depth()).max().unwrap_or(0);
    println!("planes={} leaves={leaves} depth={depth}", h.plane_count);
    for (i, p) in c.planes.iter().enumerate() {
        let hist: Vec<String> = p
            .topology
            .depth_histogram()
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(d, n)| format!("{d}:{n}"))
            .collect();
        println!(
            "plane {i}: leaves={} depth={} histogram={} threshold={} step={} delta={} value_table={} run_table={} pairs={} payload_bytes={}",
            p.topology.leaf_count(),
            p.topology.depth(),
            hist.join(","),
            p.hard_threshold,
            p.quant_step,
            p.rle_delta,
            p.value_table.len(),
            p.run_table.len(),
            p.pair_count,
            p.payload.len()
        );
    }
    Ok(())
}

fn cmd_metrics(a: &Path, b: &Path) -> CmdResult {
    let (a, b) = (load_pnm(&read(a)?)?, load_pnm(&read(b)?)?);
    println!("{}", format_psnr(psnr(&a, &b)?));
    Ok(())
}

fn cmd_gen(kind: &str, size: usize, output: &Path, seed: u64) -> CmdResult {
    let kind: SynthKind = kind.parse().map_err(|e: wpb_codec::Error| Failure::Usage(e.to_string()))?;
    let img = generate(kind, size, seed)?;
    write(output, &save_pnm(&img))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Encode { input, output, codec, verify } => cmd_encode(input, output, codec, *verify),
        Command::Decode { input, output } => cmd_decode(input, output),
        Command::Info { input } => cmd_info(input),
        Command::Metrics { a, b } => cmd_metrics(a, b),
        Command::Gen { kind, size, output, seed } => cmd_gen(kind, *size, output, *seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("wpb: usage error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Op(msg)) => {
            eprintln!("wpb: {msg}");
            ExitCode::from(1)
        }
    }
}
