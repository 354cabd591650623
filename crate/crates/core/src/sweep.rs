//! Exhaustive value-pair sweeps.
//!
//! For every pair of non-constant input values `(x, y)` in `1..n`, streams
//! are generated from two configured sequences, pushed through a circuit,
//! and summarized. Pairs where either generated input stream is constant
//! have no defined correlation and are skipped, not averaged as zero.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bitstream::{Bitstream, Encoding};
use crate::convert::encode;
use crate::correlate::{
    compose_series, decorrelate, run_pairwise, Circuit, Desynchronizer, Synchronizer,
};
use crate::error::{Error, Result};
use crate::gates;
use crate::metrics::{bias, scc_counts};
use crate::ops::{self, ExactOp};
use crate::rng::RngConfig;

/// Initial state of stages after the first in a series chain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StageOffsets {
    /// Every stage starts empty.
    #[default]
    Zero,
    /// Later stages start holding one bit: synchronizers alternate X/Y,
    /// desynchronizers hold an X one on every other stage.
    Alternating,
}

/// The circuit applied to each stream pair in a correlation sweep.
#[derive(Clone, Debug, PartialEq)]
pub enum Manipulator {
    Synchronizer {
        depth: u32,
        stages: usize,
        flush: bool,
        offsets: StageOffsets,
    },
    Desynchronizer {
        depth: u32,
        stages: usize,
        flush: bool,
        offsets: StageOffsets,
    },
    Decorrelator {
        depth: usize,
        aux_x: RngConfig,
        aux_y: RngConfig,
    },
    /// One-cycle delay on the X stream only.
    Isolator { init: bool },
}

impl Manipulator {
    pub fn synchronizer(depth: u32) -> Self {
        Self::Synchronizer {
            depth,
            stages: 1,
            flush: false,
            offsets: StageOffsets::Zero,
        }
    }

    pub fn desynchronizer(depth: u32) -> Self {
        Self::Desynchronizer {
            depth,
            stages: 1,
            flush: false,
            offsets: StageOffsets::Zero,
        }
    }

    /// Shuffle buffers driven by Halton(2) and Halton(3) draws.
    pub fn decorrelator(depth: usize) -> Self {
        Self::Decorrelator {
            depth,
            aux_x: RngConfig::halton(2),
            aux_y: RngConfig::halton(3),
        }
    }

    /// Builds the pairing circuit for FSM-based manipulators.
    pub fn circuit(&self) -> Result<Option<Circuit>> {
        let (sync, depth, stages, offsets) = match *self {
            Self::Synchronizer {
                depth,
                stages,
                offsets,
                ..
            } => (true, depth, stages, offsets),
            Self::Desynchronizer {
                depth,
                stages,
                offsets,
                ..
            } => (false, depth, stages, offsets),
            _ => return Ok(None),
        };
        let chain = (0..stages)
            .map(|i| {
                let alternate = offsets == StageOffsets::Alternating && i > 0;
                if sync {
                    let offset = match (alternate, i % 2) {
                        (false, _) => 0,
                        (true, 1) => 1,
                        (true, _) => -1,
                    };
                    Ok(Circuit::Sync(
                        Synchronizer::new(depth)?.with_initial(offset)?,
                    ))
                } else {
                    let held = u32::from(alternate && i % 2 == 1);
                    Ok(Circuit::Desync(
                        Desynchronizer::new(depth)?.with_initial(held)?,
                    ))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        compose_series(chain).map(Some)
    }

    fn flush(&self) -> bool {
        matches!(
            self,
            Self::Synchronizer { flush: true, .. } | Self::Desynchronizer { flush: true, .. }
        )
    }

    /// Applies the manipulator to one pair.
    pub fn apply(&self, x: &Bitstream, y: &Bitstream) -> Result<(Bitstream, Bitstream)> {
        if let Some(mut circuit) = self.circuit()? {
            return run_pairwise(&mut circuit, x, y, self.flush());
        }
        match self {
            Self::Decorrelator {
                depth,
                aux_x,
                aux_y,
            } => decorrelate(x, y, *depth, aux_x, aux_y),
            Self::Isolator { init } => Ok((gates::isolator(x, *init), y.clone())),
            _ => unreachable!("pairing circuits handled above"),
        }
    }
}

/// One row of a correlation sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationRecord {
    pub x: u64,
    pub y: u64,
    pub input_scc: f64,
    pub output_scc: f64,
    pub bias_x: f64,
    pub bias_y: f64,
}

/// Means over the swept pairs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub pairs: usize,
    pub skipped: usize,
    pub mean_input_scc: f64,
    pub mean_output_scc: f64,
    pub mean_bias_x: f64,
    pub mean_bias_y: f64,
    /// Mean of `(|bias_x| + |bias_y|) / 2`.
    pub mean_abs_bias: f64,
}

#[derive(Clone, Debug)]
pub struct CorrelationSweep {
    pub records: Vec<CorrelationRecord>,
    pub report: SweepReport,
}

/// Streams for every input value `1..n`, indexed by `value - 1`.
fn value_streams(rng: &RngConfig, n: usize) -> Result<Vec<Bitstream>> {
    (1..n as u64).map(|v| encode(v, rng, n)).collect()
}

fn live_pairs(xs: &[Bitstream], ys: &[Bitstream]) -> (Vec<(usize, usize)>, usize) {
    let total = xs.len() * ys.len();
    let pairs: Vec<(usize, usize)> = (0..xs.len())
        .flat_map(|i| (0..ys.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| !xs[i].is_constant() && !ys[j].is_constant())
        .collect();
    let skipped = total - pairs.len();
    (pairs, skipped)
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        0.0
    } else {
        sum / count as f64
    }
}

pub fn sweep_correlation(
    manipulator: &Manipulator,
    rng_x: &RngConfig,
    rng_y: &RngConfig,
    n: usize,
) -> Result<CorrelationSweep> {
    if n < 2 {
        return Err(Error::Config(format!("sweep length {n} must be >= 2")));
    }
    // surface configuration errors once instead of per pair
    manipulator.circuit()?;
    let xs = value_streams(rng_x, n)?;
    let ys = value_streams(rng_y, n)?;
    let (pairs, skipped) = live_pairs(&xs, &ys);
    let records = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (&xs[i], &ys[j]);
            let (xo, yo) = manipulator.apply(x, y)?;
            Ok(CorrelationRecord {
                x: i as u64 + 1,
                y: j as u64 + 1,
                input_scc: scc_counts(x, y)?.scc(),
                output_scc: scc_counts(&xo, &yo)?.scc(),
                bias_x: bias(&xo, x, Encoding::Unipolar)?,
                bias_y: bias(&yo, y, Encoding::Unipolar)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = SweepReport {
        pairs: records.len(),
        skipped,
        mean_input_scc: mean(records.iter().map(|r| r.input_scc)),
        mean_output_scc: mean(records.iter().map(|r| r.output_scc)),
        mean_bias_x: mean(records.iter().map(|r| r.bias_x)),
        mean_bias_y: mean(records.iter().map(|r| r.bias_y)),
        mean_abs_bias: mean(
            records
                .iter()
                .map(|r| 0.5 * (r.bias_x.abs() + r.bias_y.abs())),
        ),
    };
    Ok(CorrelationSweep { records, report })
}

/// Operators available to [`sweep_ops`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepOp {
    OrMax,
    SyncMax,
    AndMin,
    SyncMin,
    OrSatAdd,
    DesyncSatAdd,
    Mult,
    ScaledAdd,
    Sub,
}

impl SweepOp {
    pub const ALL: [SweepOp; 9] = [
        Self::OrMax,
        Self::SyncMax,
        Self::AndMin,
        Self::SyncMin,
        Self::OrSatAdd,
        Self::DesyncSatAdd,
        Self::Mult,
        Self::ScaledAdd,
        Self::Sub,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::OrMax => "or-max",
            Self::SyncMax => "sync-max",
            Self::AndMin => "and-min",
            Self::SyncMin => "sync-min",
            Self::OrSatAdd => "or-satadd",
            Self::DesyncSatAdd => "desync-satadd",
            Self::Mult => "mult",
            Self::ScaledAdd => "scaled-add",
            Self::Sub => "sub",
        }
    }

    pub fn exact(self) -> ExactOp {
        match self {
            Self::OrMax | Self::SyncMax => ExactOp::Max,
            Self::AndMin | Self::SyncMin => ExactOp::Min,
            Self::OrSatAdd | Self::DesyncSatAdd => ExactOp::SatAdd,
            Self::Mult => ExactOp::Mult,
            Self::ScaledAdd => ExactOp::ScaledAdd,
            Self::Sub => ExactOp::AbsDiff,
        }
    }

    /// Runs the circuit on one pair. `sel` is only read by `ScaledAdd`.
    pub fn apply(
        self,
        x: &Bitstream,
        y: &Bitstream,
        sel: &Bitstream,
        depth: u32,
    ) -> Result<Bitstream> {
        match self {
            Self::OrMax | Self::OrSatAdd => gates::sat_add(x, y),
            Self::SyncMax => ops::sync_max(x, y, depth),
            Self::AndMin | Self::Mult => gates::mult(x, y),
            Self::SyncMin => ops::sync_min(x, y, depth),
            Self::DesyncSatAdd => ops::desync_sat_add(x, y, depth),
            Self::ScaledAdd => gates::scaled_add(x, y, sel),
            Self::Sub => gates::sub_correlated(x, y),
        }
    }
}

impl FromStr for SweepOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| Error::UnknownOp(s.to_string()))
    }
}

impl fmt::Display for SweepOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One row of an operator sweep. `exact` is evaluated on the decoded input
/// stream values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OpRecord {
    pub x: u64,
    pub y: u64,
    pub exact: f64,
    pub measured: f64,
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OpReport {
    pub pairs: usize,
    pub skipped: usize,
    pub mean_abs_error: f64,
    /// Mean of `measured - exact`.
    pub mean_bias: f64,
}

#[derive(Clone, Debug)]
pub struct OpSweep {
    pub records: Vec<OpRecord>,
    pub report: OpReport,
}

/// Settings for [`sweep_ops`].
#[derive(Clone, Debug)]
pub struct OpSweepConfig {
    pub rng_x: RngConfig,
    pub rng_y: RngConfig,
    /// Generator of the 0.5 select stream for the scaled adder.
    pub rng_sel: RngConfig,
    pub n: usize,
    pub depth: u32,
}

pub fn sweep_ops(op: SweepOp, cfg: &OpSweepConfig) -> Result<OpSweep> {
    let n = cfg.n;
    if n < 2 {
        return Err(Error::Config(format!("sweep length {n} must be >= 2")));
    }
    if cfg.depth == 0 {
        return Err(Error::Config("save depth must be >= 1".into()));
    }
    let xs = value_streams(&cfg.rng_x, n)?;
    let ys = value_streams(&cfg.rng_y, n)?;
    let sel = encode(n as u64 / 2, &cfg.rng_sel, n)?;
    let exact_op = op.exact();
    let (pairs, skipped) = live_pairs(&xs, &ys);
    let records = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (&xs[i], &ys[j]);
            let out = op.apply(x, y, &sel, cfg.depth)?;
            let exact = exact_op.eval(x.value(Encoding::Unipolar), y.value(Encoding::Unipolar));
            let measured = out.value(Encoding::Unipolar);
            Ok(OpRecord {
                x: i as u64 + 1,
                y: j as u64 + 1,
                exact,
                measured,
                error: measured - exact,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let report = OpReport {
        pairs: records.len(),
        skipped,
        mean_abs_error: mean(records.iter().map(|r| r.error.abs())),
        mean_bias: mean(records.iter().map(|r| r.error)),
    };
    Ok(OpSweep { records, report })
}
