use super::PairCircuit;
use crate::error::{Error, Result};

/// Splits coincident 1s apart.
///
/// On a `(1, 1)` cycle the X one is held back (up to `depth` of them) and
/// `(0, 1)` is emitted; on a `(0, 0)` cycle a held X one is released as
/// `(1, 0)`. Mismatched cycles pass through. Y is never modified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Desynchronizer {
    depth: u32,
    initial: u32,
    saved: u32,
}

impl Desynchronizer {
    pub fn new(depth: u32) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Config("save depth must be >= 1".into()));
        }
        Ok(Self {
            depth,
            initial: 0,
            saved: 0,
        })
    }

    /// Starts with `saved` X ones already held.
    pub fn with_initial(mut self, saved: u32) -> Result<Self> {
        if saved > self.depth {
            return Err(Error::Config(format!(
                "initial saved count {saved} exceeds save depth {}",
                self.depth
            )));
        }
        self.initial = saved;
        self.saved = saved;
        Ok(self)
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn saved(&self) -> u32 {
        self.saved
    }
}

impl PairCircuit for Desynchronizer {
    fn step(&mut self, x: bool, y: bool) -> (bool, bool) {
        match (x, y) {
            (true, true) if self.saved < self.depth => {
                self.saved += 1;
                (false, true)
            }
            (false, false) if self.saved > 0 => {
                self.saved -= 1;
                (true, false)
            }
            _ => (x, y),
        }
    }

    fn step_flushing(&mut self, x: bool, y: bool, remaining: usize) -> (bool, bool) {
        let owed = self.saved as usize;
        if owed > 0 && owed >= remaining {
            self.saved = self.saved + u32::from(x) - 1;
            return (true, y);
        }
        if x && y && owed + 1 >= remaining {
            return (x, y);
        }
        self.step(x, y)
    }

    fn reset(&mut self) {
        self.saved = self.initial;
    }

    fn pending(&self) -> (u32, u32) {
        (self.saved, 0)
    }
}
