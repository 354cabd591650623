//! Composite operators: a correlation manipulator followed by a gate.

use std::fmt;
use std::str::FromStr;

use crate::bitstream::Bitstream;
use crate::correlate::{run_pairwise, Desynchronizer, Synchronizer};
use crate::error::{Error, Result};

/// Maximum: synchronize, then OR.
pub fn sync_max(x: &Bitstream, y: &Bitstream, depth: u32) -> Result<Bitstream> {
    let (xs, ys) = run_pairwise(&mut Synchronizer::new(depth)?, x, y, false)?;
    xs.or(&ys)
}

/// Minimum: synchronize, then AND.
pub fn sync_min(x: &Bitstream, y: &Bitstream, depth: u32) -> Result<Bitstream> {
    let (xs, ys) = run_pairwise(&mut Synchronizer::new(depth)?, x, y, false)?;
    xs.and(&ys)
}

/// Saturating add: desynchronize, then OR.
pub fn desync_sat_add(x: &Bitstream, y: &Bitstream, depth: u32) -> Result<Bitstream> {
    let (xd, yd) = run_pairwise(&mut Desynchronizer::new(depth)?, x, y, false)?;
    xd.or(&yd)
}

/// Real-valued reference functions for error measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExactOp {
    Max,
    Min,
    SatAdd,
    Mult,
    ScaledAdd,
    AbsDiff,
}

impl ExactOp {
    pub fn eval(self, x: f64, y: f64) -> f64 {
        match self {
            Self::Max => x.max(y),
            Self::Min => x.min(y),
            Self::SatAdd => (x + y).min(1.0),
            Self::Mult => x * y,
            Self::ScaledAdd => 0.5 * (x + y),
            Self::AbsDiff => (x - y).abs(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Self::Max => "max",
            Self::Min => "min",
            Self::SatAdd => "satadd",
            Self::Mult => "mult",
            Self::ScaledAdd => "scaledadd",
            Self::AbsDiff => "absdiff",
        }
    }
}

impl FromStr for ExactOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "max" => Self::Max,
            "min" => Self::Min,
            "satadd" => Self::SatAdd,
            "mult" => Self::Mult,
            "scaledadd" => Self::ScaledAdd,
            "absdiff" => Self::AbsDiff,
            _ => return Err(Error::UnknownOp(s.to_string())),
        })
    }
}

impl fmt::Display for ExactOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Looks up `op` by name and evaluates it.
pub fn exact_oracle(op: &str, x: f64, y: f64) -> Result<f64> {
    Ok(op.parse::<ExactOp>()?.eval(x, y))
}
