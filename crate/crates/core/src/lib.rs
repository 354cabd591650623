//! Bit-exact simulation of stochastic computing (SC) circuits, centered on
//! circuits that manipulate the correlation between two bitstreams.
//!
//! * [`bitstream`] and [`metrics`]: packed streams, value decoding, SCC.
//! * [`rng`] and [`convert`]: LFSR / Van der Corput / Halton generators and
//!   D/S, S/D conversion.
//! * [`gates`]: AND/OR/XOR/MUX arithmetic and the isolator delay.
//! * [`correlate`]: synchronizer, desynchronizer and shuffle-buffer
//!   decorrelator.
//! * [`ops`]: max / min / saturating add built from those circuits.
//! * [`sweep`]: exhaustive value-pair experiments.
//! * [`pipeline`]: tiled blur + edge-detect accelerator model.

pub mod bitstream;
pub mod convert;
pub mod correlate;
pub mod error;
pub mod gates;
pub mod metrics;
pub mod ops;
pub mod pipeline;
pub mod rng;
pub mod sweep;

pub use bitstream::{Bitstream, Encoding};
pub use convert::{d_to_s, encode, regenerate, s_to_d, Regeneration};
pub use correlate::{
    compose_series, decorrelate, run_pairwise, Circuit, Desynchronizer, PairCircuit, ShuffleBuffer,
    Synchronizer,
};
pub use error::{Error, Result};
pub use metrics::{abs_error, bias, scc, scc_counts, value, SccCounts};
pub use ops::{desync_sat_add, exact_oracle, sync_max, sync_min, ExactOp};
pub use pipeline::{run_pipeline, GrayImage, PipelineConfig, PipelineReport, Variant};
pub use rng::{RngConfig, RngKind, RngStream};
pub use sweep::{
    sweep_correlation, sweep_ops, CorrelationSweep, Manipulator, OpSweep, OpSweepConfig,
    StageOffsets, SweepOp, SweepReport,
};
