//! Stateful circuits that raise or lower the correlation of a stream pair
//! without changing the encoded values.
//!
//! * [`Synchronizer`] pairs up 1s across the two streams (toward SCC = +1).
//! * [`Desynchronizer`] splits coincident 1s apart (toward SCC = -1).
//! * [`ShuffleBuffer`] / [`decorrelate`] scramble bit order (toward SCC = 0).
//!
//! The two pairing FSMs share the [`PairCircuit`] interface so they can be
//! chained with [`compose_series`] and driven by [`run_pairwise`].

mod desync;
mod shuffle;
mod sync;

pub use desync::Desynchronizer;
pub use shuffle::{decorrelate, ShuffleBuffer};
pub use sync::Synchronizer;

use crate::bitstream::Bitstream;
use crate::error::{check_len, Error, Result};

/// A clocked two-input, two-output bit-serial circuit.
pub trait PairCircuit {
    fn step(&mut self, x: bool, y: bool) -> (bool, bool);

    /// Step with end-of-stream flushing. `remaining` counts the cycles left
    /// including this one.
    fn step_flushing(&mut self, x: bool, y: bool, remaining: usize) -> (bool, bool);

    /// Back to the configured initial state.
    fn reset(&mut self);

    /// Bits currently held back, as (x ones, y ones).
    fn pending(&self) -> (u32, u32);
}

/// A synchronizer, a desynchronizer, or a chain of circuits in series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Circuit {
    Sync(Synchronizer),
    Desync(Desynchronizer),
    Series(Vec<Circuit>),
}

impl Circuit {
    pub fn synchronizer(depth: u32) -> Result<Self> {
        Ok(Self::Sync(Synchronizer::new(depth)?))
    }

    pub fn desynchronizer(depth: u32) -> Result<Self> {
        Ok(Self::Desync(Desynchronizer::new(depth)?))
    }
}

impl PairCircuit for Circuit {
    fn step(&mut self, x: bool, y: bool) -> (bool, bool) {
        match self {
            Self::Sync(c) => c.step(x, y),
            Self::Desync(c) => c.step(x, y),
            Self::Series(stages) => stages
                .iter_mut()
                .fold((x, y), |(x, y), stage| stage.step(x, y)),
        }
    }

    fn step_flushing(&mut self, x: bool, y: bool, remaining: usize) -> (bool, bool) {
        match self {
            Self::Sync(c) => c.step_flushing(x, y, remaining),
            Self::Desync(c) => c.step_flushing(x, y, remaining),
            Self::Series(stages) => stages
                .iter_mut()
                .fold((x, y), |(x, y), stage| stage.step_flushing(x, y, remaining)),
        }
    }

    fn reset(&mut self) {
        match self {
            Self::Sync(c) => c.reset(),
            Self::Desync(c) => c.reset(),
            Self::Series(stages) => stages.iter_mut().for_each(PairCircuit::reset),
        }
    }

    fn pending(&self) -> (u32, u32) {
        match self {
            Self::Sync(c) => c.pending(),
            Self::Desync(c) => c.pending(),
            Self::Series(stages) => stages.iter().fold((0, 0), |(px, py), stage| {
                let (x, y) = stage.pending();
                (px + x, py + y)
            }),
        }
    }
}

/// Chains `stages` so the outputs of stage `i` feed stage `i + 1`.
/// A single stage is returned unchanged.
pub fn compose_series(mut stages: Vec<Circuit>) -> Result<Circuit> {
    match stages.len() {
        0 => Err(Error::EmptySeries),
        1 => Ok(stages.pop().unwrap()),
        _ => Ok(Circuit::Series(stages)),
    }
}

/// Resets `circuit` and streams the pair through it.
pub fn run_pairwise<C: PairCircuit + ?Sized>(
    circuit: &mut C,
    x: &Bitstream,
    y: &Bitstream,
    flush: bool,
) -> Result<(Bitstream, Bitstream)> {
    check_len(x.len(), y.len())?;
    circuit.reset();
    let n = x.len();
    let mut out_x = Vec::with_capacity(n);
    let mut out_y = Vec::with_capacity(n);
    for t in 0..n {
        let (a, b) = if flush {
            circuit.step_flushing(x.get(t), y.get(t), n - t)
        } else {
            circuit.step(x.get(t), y.get(t))
        };
        out_x.push(a);
        out_y.push(b);
    }
    Ok((out_x.into_iter().collect(), out_y.into_iter().collect()))
}
