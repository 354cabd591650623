//! `sccorr` command-line front end.

mod output;

use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use sccorr::{
    encode, run_pipeline, scc_counts, sweep_correlation, sweep_ops, Bitstream, GrayImage,
    Manipulator, OpSweepConfig, PipelineConfig, RngConfig, StageOffsets, SweepOp, Variant,
};

use output::{format_scc, sig6, write_atomic, Sink};

#[derive(Parser)]
#[command(
    name = "sccorr",
    version,
    about = "Stochastic computing correlation experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the bitstream encoding `value / n` drawn from a generator.
    Gen {
        /// Generator, e.g. `lfsr:w=8,seed=1`, `vdc:w=8` or `halton:base=3`.
        #[arg(long)]
        rng: RngConfig,
        /// Stream length.
        #[arg(long)]
        n: usize,
        /// Number of ones to encode, in 0..=n.
        #[arg(long)]
        value: u64,
    },
    /// Print the overlap counts and SCC of two streams, one per line.
    Scc {
        /// Input file; reads standard input when absent or `-`.
        file: Option<PathBuf>,
    },
    /// Sweep every value pair through a correlation circuit (CSV).
    SweepCorrelate {
        #[arg(long, value_enum)]
        circuit: CircuitKind,
        /// Save depth, or buffer depth for `decorr`.
        #[arg(long, default_value_t = 1)]
        depth: u32,
        /// Number of FSM stages in series (`sync` and `desync`).
        #[arg(long, default_value_t = 1)]
        stages: usize,
        /// Force held bits out before the stream ends.
        #[arg(long)]
        flush: bool,
        /// Give later series stages alternating initial offsets.
        #[arg(long)]
        alternate: bool,
        /// Initial output bit of the isolator.
        #[arg(long)]
        init_one: bool,
        #[arg(long, default_value = "vdc:w=8,start=1")]
        rng_x: RngConfig,
        #[arg(long, default_value = "halton:base=3")]
        rng_y: RngConfig,
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep every value pair through an arithmetic operator (CSV).
    SweepOps {
        #[arg(long)]
        op: SweepOp,
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        depth: u32,
        #[arg(long, default_value = "vdc:w=8,start=1")]
        rng_x: RngConfig,
        #[arg(long, default_value = "halton:base=3")]
        rng_y: RngConfig,
        /// Generator of the 0.5 select stream used by `scaled-add`.
        #[arg(long, default_value = "halton:base=5")]
        rng_sel: RngConfig,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the blur and edge-detection pipeline and print a JSON report.
    Pipeline {
        #[arg(long, default_value = "sync")]
        variant: Variant,
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        tile: usize,
        /// Synchronizer save depth.
        #[arg(long, default_value_t = 1)]
        depth: u32,
        /// Synchronizers in series per XOR pair.
        #[arg(long, default_value_t = 3)]
        stages: usize,
        /// PGM input; a built-in 64x64 test card when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Edge image destination (binary PGM).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Report destination; the report is always printed as well.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CircuitKind {
    Sync,
    Desync,
    Decorr,
    Isolator,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Gen { rng, n, value } => {
            let stream = encode(value, &rng, n)?;
            println!("{stream}");
        }
        Command::Scc { file } => cmd_scc(file)?,
        Command::SweepCorrelate {
            circuit,
            depth,
            stages,
            flush,
            alternate,
            init_one,
            rng_x,
            rng_y,
            n,
            out,
        } => {
            let offsets = if alternate {
                StageOffsets::Alternating
            } else {
                StageOffsets::Zero
            };
            let manipulator = match circuit {
                CircuitKind::Sync => Manipulator::Synchronizer {
                    depth,
                    stages,
                    flush,
                    offsets,
                },
                CircuitKind::Desync => Manipulator::Desynchronizer {
                    depth,
                    stages,
                    flush,
                    offsets,
                },
                CircuitKind::Decorr => Manipulator::decorrelator(depth as usize),
                CircuitKind::Isolator => Manipulator::Isolator { init: init_one },
            };
            cmd_sweep_correlate(&manipulator, &rng_x, &rng_y, n, out)?;
        }
        Command::SweepOps {
            op,
            n,
            depth,
            rng_x,
            rng_y,
            rng_sel,
            out,
        } => {
            let cfg = OpSweepConfig {
                rng_x,
                rng_y,
                rng_sel,
                n,
                depth,
            };
            cmd_sweep_ops(op, &cfg, out)?;
        }
        Command::Pipeline {
            variant,
            n,
            tile,
            depth,
            stages,
            input,
            output,
            report,
        } => {
            let mut cfg = PipelineConfig::with_length(variant, n);
            cfg.tile = tile;
            cfg.depth = depth;
            cfg.stages = stages;
            cmd_pipeline(&cfg, input, output, report)?;
        }
    }
    Ok(())
}

fn cmd_scc(file: Option<PathBuf>) -> Result<()> {
    let text = match file.filter(|p| p.as_os_str() != "-") {
        Some(path) => {
            std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?
        }
        None => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .context("reading standard input")?;
            buf
        }
    };
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let (Some(x), Some(y)) = (lines.next(), lines.next()) else {
        bail!("expected two bitstream lines");
    };
    let x: Bitstream = x.parse().context("first stream")?;
    let y: Bitstream = y.parse().context("second stream")?;
    let counts = scc_counts(&x, &y)?;
    println!(
        "a={} b={} c={} d={}",
        counts.a, counts.b, counts.c, counts.d
    );
    println!("scc={}", format_scc(counts.scc()));
    Ok(())
}

fn cmd_sweep_correlate(
    manipulator: &Manipulator,
    rng_x: &RngConfig,
    rng_y: &RngConfig,
    n: usize,
    out: Option<PathBuf>,
) -> Result<()> {
    let sweep = sweep_correlation(manipulator, rng_x, rng_y, n)?;
    let r = &sweep.report;
    let mut sink = Sink::new(out.as_deref())?;
    {
        let mut w = csv::Writer::from_writer(sink.writer());
        w.write_record(["x", "y", "input_scc", "output_scc", "bias_x", "bias_y"])?;
        for rec in &sweep.records {
            w.write_record([
                rec.x.to_string(),
                rec.y.to_string(),
                sig6(rec.input_scc),
                sig6(rec.output_scc),
                sig6(rec.bias_x),
                sig6(rec.bias_y),
            ])?;
        }
        w.write_record([
            "mean".to_string(),
            String::new(),
            sig6(r.mean_input_scc),
            sig6(r.mean_output_scc),
            sig6(r.mean_bias_x),
            sig6(r.mean_bias_y),
        ])?;
        w.flush()?;
    }
    sink.finish()?;
    eprintln!(
        "pairs={} skipped={} mean_input_scc={} mean_output_scc={} mean_bias_x={} mean_bias_y={}",
        r.pairs,
        r.skipped,
        sig6(r.mean_input_scc),
        sig6(r.mean_output_scc),
        sig6(r.mean_bias_x),
        sig6(r.mean_bias_y)
    );
    Ok(())
}

fn cmd_sweep_ops(op: SweepOp, cfg: &OpSweepConfig, out: Option<PathBuf>) -> Result<()> {
    let sweep = sweep_ops(op, cfg)?;
    let r = &sweep.report;
    let mut sink = Sink::new(out.as_deref())?;
    {
        let mut w = csv::Writer::from_writer(sink.writer());
        w.write_record(["x", "y", "exact", "measured", "error", "abs_error"])?;
        for rec in &sweep.records {
            w.write_record([
                rec.x.to_string(),
                rec.y.to_string(),
                sig6(rec.exact),
                sig6(rec.measured),
                sig6(rec.error),
                sig6(rec.error.abs()),
            ])?;
        }
        w.write_record([
            "mean".to_string(),
            String::new(),
            String::new(),
            String::new(),
            sig6(r.mean_bias),
            sig6(r.mean_abs_error),
        ])?;
        w.flush()?;
    }
    sink.finish()?;
    eprintln!(
        "op={op} pairs={} skipped={} mean_abs_error={} mean_bias={}",
        r.pairs,
        r.skipped,
        sig6(r.mean_abs_error),
        sig6(r.mean_bias)
    );
    Ok(())
}

fn cmd_pipeline(
    cfg: &PipelineConfig,
    input: Option<PathBuf>,
    output: Option<PathBuf>,
    report_path: Option<PathBuf>,
) -> Result<()> {
    let img = match input {
        Some(path) => GrayImage::read_pgm(&path)?,
        None => GrayImage::test_card(64, 64)?,
    };
    let (edges, report) = run_pipeline(&img, cfg)?;
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(path) = output {
        write_atomic(&path, &edges.encode_pgm())?;
    }
    if let Some(path) = report_path {
        write_atomic(&path, format!("{json}\n").as_bytes())?;
    }
    println!("{json}");
    Ok(())
}
