//! Digital/stochastic conversion and regeneration.

use crate::bitstream::Bitstream;
use crate::error::{Error, Result};
use crate::rng::{RngConfig, RngStream};

/// Comparator D/S converter: bit `t` is 1 iff `r_t < x`.
///
/// `rng` must have been opened with range `n`; it is advanced `n` times.
pub fn d_to_s(x: u64, rng: &mut RngStream, n: usize) -> Result<Bitstream> {
    if n == 0 {
        return Err(Error::EmptyStream);
    }
    if x > n as u64 {
        return Err(Error::ValueOutOfRange { value: x, n });
    }
    if rng.range() != n as u64 {
        return Err(Error::Config(format!(
            "rng range {} does not match stream length {n}",
            rng.range()
        )));
    }
    Ok(Bitstream::from_fn(n, |_| rng.next_value() < x))
}

/// D/S conversion with a freshly opened generator.
pub fn encode(x: u64, rng: &RngConfig, n: usize) -> Result<Bitstream> {
    let mut stream = rng.stream(n as u64)?;
    d_to_s(x, &mut stream, n)
}

/// Counter S/D converter.
pub fn s_to_d(x: &Bitstream) -> u64 {
    x.ones()
}

/// Generator assignment for [`regenerate`].
#[derive(Clone, Debug)]
pub enum Regeneration {
    /// Every stream is re-encoded against the same sequence, which nests
    /// their supports (pairwise SCC = +1).
    Shared(RngConfig),
    /// Stream `i` uses `configs[i]`.
    PerStream(Vec<RngConfig>),
}

/// S/D followed by D/S for every stream.
pub fn regenerate(streams: &[Bitstream], how: &Regeneration) -> Result<Vec<Bitstream>> {
    let Some(first) = streams.first() else {
        return Ok(Vec::new());
    };
    let n = first.len();
    for s in streams {
        crate::error::check_len(n, s.len())?;
    }
    match how {
        Regeneration::Shared(cfg) => {
            let mut rng = cfg.stream(n as u64)?;
            // one pass of the generator, reused as the comparator input of every stream
            let seq: Vec<u64> = (0..n).map(|_| rng.next_value()).collect();
            Ok(streams
                .iter()
                .map(|s| {
                    let x = s_to_d(s);
                    Bitstream::from_fn(n, |t| seq[t] < x)
                })
                .collect())
        }
        Regeneration::PerStream(cfgs) => {
            if cfgs.len() != streams.len() {
                return Err(Error::Config(format!(
                    "{} generator configs for {} streams",
                    cfgs.len(),
                    streams.len()
                )));
            }
            streams
                .iter()
                .zip(cfgs)
                .map(|(s, cfg)| encode(s_to_d(s), cfg, n))
                .collect()
        }
    }
}
