use crate::bitstream::Bitstream;
use crate::error::{check_len, Error, Result};
use crate::rng::{RngConfig, RngStream};

/// Small randomly addressed bit memory that scrambles stream order.
///
/// Each cycle an auxiliary draw `r` in `[0, depth]` either passes the input
/// (`r == depth`) or swaps it with slot `r`. Slots `0..ceil(depth/2)` start
/// at 1 and the rest at 0.
#[derive(Clone, Debug)]
pub struct ShuffleBuffer {
    memory: Vec<bool>,
    aux: RngStream,
}

impl ShuffleBuffer {
    pub fn new(depth: usize, aux: &RngConfig) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Config("shuffle buffer depth must be >= 1".into()));
        }
        let mut buf = Self {
            memory: vec![false; depth],
            aux: aux.stream(depth as u64 + 1)?,
        };
        buf.reset();
        Ok(buf)
    }

    pub fn depth(&self) -> usize {
        self.memory.len()
    }

    pub fn reset(&mut self) {
        let ones = self.memory.len().div_ceil(2);
        for (slot, bit) in self.memory.iter_mut().enumerate() {
            *bit = slot < ones;
        }
        self.aux.reset();
    }

    pub fn stored_ones(&self) -> u64 {
        self.memory.iter().filter(|&&b| b).count() as u64
    }

    pub fn step(&mut self, x: bool) -> bool {
        let r = self.aux.next_value() as usize;
        match self.memory.get_mut(r) {
            Some(slot) => std::mem::replace(slot, x),
            None => x,
        }
    }

    /// Resets and shuffles a whole stream.
    pub fn run(&mut self, x: &Bitstream) -> Bitstream {
        self.reset();
        x.iter().map(|bit| self.step(bit)).collect()
    }
}

/// Two shuffle buffers with distinct auxiliary generators, one per stream.
pub fn decorrelate(
    x: &Bitstream,
    y: &Bitstream,
    depth: usize,
    rng_a: &RngConfig,
    rng_b: &RngConfig,
) -> Result<(Bitstream, Bitstream)> {
    check_len(x.len(), y.len())?;
    if rng_a == rng_b {
        return Err(Error::IdenticalRngs);
    }
    let mut a = ShuffleBuffer::new(depth, rng_a)?;
    let mut b = ShuffleBuffer::new(depth, rng_b)?;
    Ok((a.run(x), b.run(y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> Bitstream {
        s.parse().unwrap()
    }

    // vdc(1) over range 2 draws 0, 1, 0, 1, ...: swap with slot 0, then pass.
    #[test]
    fn alternating_swap_and_pass() {
        let mut buf = ShuffleBuffer::new(1, &RngConfig::vdc(1)).unwrap();
        assert_eq!(buf.run(&bs("11111111")), bs("11111111"));
        assert_eq!(buf.run(&bs("00000000")), bs("10000000"));
        assert_eq!(buf.run(&bs("01000000")), bs("11000000"));
    }

    #[test]
    fn pass_draws_copy_the_input() {
        // start=1 flips the phase: draws are 1, 0, 1, 0, ... so even cycles pass
        let mut buf = ShuffleBuffer::new(1, &RngConfig::vdc(1).with_start(1)).unwrap();
        let x = bs("10100101");
        let out = buf.run(&x);
        for t in (0..8).step_by(2) {
            assert_eq!(out.get(t), x.get(t));
        }
    }

    #[test]
    fn ones_ledger() {
        let x = bs("1101001110100011110000101");
        let mut buf = ShuffleBuffer::new(4, &RngConfig::halton(3)).unwrap();
        let initial = buf.stored_ones();
        let out = buf.run(&x);
        assert_eq!(out.ones() + buf.stored_ones(), x.ones() + initial);
    }

    #[test]
    fn output_is_a_permutation_of_input_and_buffer() {
        // Tag every input and initial slot with a unique label, run the same
        // swap schedule on labels, and check the emitted labels are distinct.
        let depth = 4;
        let n = 64;
        let mut aux = RngConfig::vdc(8).stream(depth as u64 + 1).unwrap();
        let mut memory: Vec<usize> = (n..n + depth).collect();
        let mut emitted = Vec::new();
        for t in 0..n {
            let r = aux.next_value() as usize;
            if r < depth {
                emitted.push(std::mem::replace(&mut memory[r], t));
            } else {
                emitted.push(t);
            }
        }
        let mut all: Vec<usize> = emitted.iter().chain(&memory).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..n + depth).collect::<Vec<_>>());

        let x: Bitstream = (0..n).map(|t| t % 3 == 0).collect();
        let mut buf = ShuffleBuffer::new(depth, &RngConfig::vdc(8)).unwrap();
        let out = buf.run(&x);
        for (t, label) in emitted.iter().enumerate() {
            let expect = if *label < n {
                x.get(*label)
            } else {
                *label - n < depth.div_ceil(2)
            };
            assert_eq!(out.get(t), expect);
        }
    }

    #[test]
    fn identical_configs_rejected() {
        let x = bs("1010");
        let cfg = RngConfig::halton(3);
        assert!(matches!(
            decorrelate(&x, &x, 4, &cfg, &cfg),
            Err(Error::IdenticalRngs)
        ));
        assert!(decorrelate(&x, &x, 4, &cfg, &RngConfig::halton(2)).is_ok());
    }

    #[test]
    fn half_of_buffer_starts_at_one() {
        for depth in 1..9 {
            let buf = ShuffleBuffer::new(depth, &RngConfig::halton(2)).unwrap();
            assert_eq!(buf.stored_ones() as usize, depth.div_ceil(2));
        }
    }
}
