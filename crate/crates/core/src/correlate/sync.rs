use super::PairCircuit;
use crate::error::{Error, Result};

/// Pairs unmatched 1s across two streams.
///
/// State is a signed count `saved` in `[-depth, depth]`: positive values are
/// X ones held back, negative values are Y ones held back. On a mismatched
/// cycle the circuit either releases a held bit of the other stream as a
/// coincident `(1, 1)`, or holds the lone 1 and emits `(0, 0)`. When the
/// store is full, mismatches pass through unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synchronizer {
    depth: u32,
    initial: i32,
    saved: i32,
}

impl Synchronizer {
    pub fn new(depth: u32) -> Result<Self> {
        if depth == 0 || depth > i32::MAX as u32 {
            return Err(Error::Config(format!("save depth {depth} must be >= 1")));
        }
        Ok(Self {
            depth,
            initial: 0,
            saved: 0,
        })
    }

    /// Starts with `offset` bits already saved (positive: X, negative: Y).
    pub fn with_initial(mut self, offset: i32) -> Result<Self> {
        if offset.unsigned_abs() > self.depth {
            return Err(Error::Config(format!(
                "initial offset {offset} exceeds save depth {}",
                self.depth
            )));
        }
        self.initial = offset;
        self.saved = offset;
        Ok(self)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn saved(&self) -> i32 {
        self.saved
    }

    fn owed(&self) -> usize {
        self.saved.unsigned_abs() as usize
    }
}

impl PairCircuit for Synchronizer {
    fn step(&mut self, x: bool, y: bool) -> (bool, bool) {
        let d = self.depth as i32;
        match (x, y) {
            (true, false) if self.saved < 0 => {
                self.saved += 1;
                (true, true)
            }
            (true, false) if self.saved < d => {
                self.saved += 1;
                (false, false)
            }
            (false, true) if self.saved > 0 => {
                self.saved -= 1;
                (true, true)
            }
            (false, true) if self.saved > -d => {
                self.saved -= 1;
                (false, false)
            }
            _ => (x, y),
        }
    }

    fn step_flushing(&mut self, x: bool, y: bool, remaining: usize) -> (bool, bool) {
        let owed = self.owed();
        if owed > 0 && owed >= remaining {
            // emit the held stream's bit every cycle until the end
            if self.saved > 0 {
                self.saved += i32::from(x) - 1;
                return (true, y);
            }
            self.saved -= i32::from(y) - 1;
            return (x, true);
        }
        let before = self.saved;
        let out = self.step(x, y);
        if self.owed() > owed && self.owed() >= remaining {
            // a fresh save could not be released before the end; pass instead
            self.saved = before;
            return (x, y);
        }
        out
    }

    fn reset(&mut self) {
        self.saved = self.initial;
    }

    fn pending(&self) -> (u32, u32) {
        if self.saved >= 0 {
            (self.saved as u32, 0)
        } else {
            (0, self.saved.unsigned_abs())
        }
    }
}
