//! Deterministic integer sequences used to generate and manipulate streams.
//!
//! Three families are supported: Fibonacci LFSRs, Van der Corput (base-2
//! radical inverse, i.e. bit reversal) and Halton (radical inverse in an
//! arbitrary base). Each is a pure function of its configuration and the
//! cycle index, scaled exactly onto an integer range `[0, range)`.
//!
//! Configurations have a compact text form used on the command line:
//!
//! ```text
//! lfsr:w=8,seed=1            vdc:w=8            halton:base=3
//! lfsr:w=8,seed=1,taps=8-6-5-4,start=0          vdc:w=8,start=1
//! ```

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Maximal-length Fibonacci tap sets, indexed by register width.
///
/// Tap `k` reads bit `width - k` of the register (the output end is tap
/// `width`).
const DEFAULT_TAPS: &[(u32, &[u32])] = &[
    (2, &[2, 1]),
    (3, &[3, 2]),
    (4, &[4, 3]),
    (5, &[5, 3]),
    (6, &[6, 5]),
    (7, &[7, 6]),
    (8, &[8, 6, 5, 4]),
    (9, &[9, 5]),
    (10, &[10, 7]),
    (11, &[11, 9]),
    (12, &[12, 6, 4, 1]),
    (13, &[13, 4, 3, 1]),
    (14, &[14, 5, 3, 1]),
    (15, &[15, 14]),
    (16, &[16, 15, 13, 4]),
    (17, &[17, 14]),
    (18, &[18, 11]),
    (19, &[19, 6, 2, 1]),
    (20, &[20, 17]),
    (21, &[21, 19]),
    (22, &[22, 21]),
    (23, &[23, 18]),
    (24, &[24, 23, 22, 17]),
];

pub fn default_taps(width: u32) -> Option<&'static [u32]> {
    DEFAULT_TAPS
        .iter()
        .find(|(w, _)| *w == width)
        .map(|(_, taps)| *taps)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RngKind {
    Lfsr {
        width: u32,
        seed: u64,
        taps: Vec<u32>,
    },
    Vdc {
        width: u32,
    },
    Halton {
        base: u64,
    },
}

/// Generator description. `start` is the index of the first emitted element
/// (LFSR: number of steps skipped after the seed).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RngConfig {
    pub kind: RngKind,
    pub start: u64,
}

impl RngConfig {
    pub fn lfsr(width: u32, seed: u64) -> Result<Self> {
        let taps = default_taps(width)
            .ok_or_else(|| Error::InvalidRng(format!("no default taps for width {width}")))?
            .to_vec();
        Self::lfsr_with_taps(width, seed, taps)
    }

    pub fn lfsr_with_taps(width: u32, seed: u64, taps: Vec<u32>) -> Result<Self> {
        let cfg = Self {
            kind: RngKind::Lfsr { width, seed, taps },
            start: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Van der Corput over `width` bits, starting at index 0.
    pub fn vdc(width: u32) -> Self {
        Self {
            kind: RngKind::Vdc { width },
            start: 0,
        }
    }

    /// Halton in `base`, starting at index 1 (index 0 is always zero).
    pub fn halton(base: u64) -> Self {
        Self {
            kind: RngKind::Halton { base },
            start: 1,
        }
    }

    pub fn with_start(mut self, start: u64) -> Self {
        self.start = start;
        self
    }

    /// Native range of the raw sequence: `2^w` for LFSR/VDC, `None` for
    /// Halton (which scales to any range).
    pub fn native_range(&self) -> Option<u64> {
        match self.kind {
            RngKind::Lfsr { width, .. } | RngKind::Vdc { width } => Some(1 << width),
            RngKind::Halton { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match &self.kind {
            RngKind::Lfsr { width, seed, taps } => {
                if !(2..=32).contains(width) {
                    return Err(Error::InvalidRng(format!(
                        "lfsr width {width} not in 2..=32"
                    )));
                }
                if *seed == 0 {
                    return Err(Error::InvalidRng("lfsr seed must be nonzero".into()));
                }
                if *seed >= 1 << width {
                    return Err(Error::InvalidRng(format!(
                        "lfsr seed {seed} does not fit in {width} bits"
                    )));
                }
                if taps.is_empty() || taps.iter().any(|&k| k == 0 || k > *width) {
                    return Err(Error::InvalidRng(format!(
                        "lfsr taps {taps:?} must lie in 1..={width}"
                    )));
                }
                if !taps.contains(width) {
                    return Err(Error::InvalidRng(format!("lfsr taps must include {width}")));
                }
            }
            RngKind::Vdc { width } => {
                if !(1..=32).contains(width) {
                    return Err(Error::InvalidRng(format!(
                        "vdc width {width} not in 1..=32"
                    )));
                }
            }
            RngKind::Halton { base } => {
                if *base < 2 {
                    return Err(Error::InvalidRng(format!(
                        "halton base {base} must be >= 2"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Opens a stream emitting values in `[0, range)`.
    pub fn stream(&self, range: u64) -> Result<RngStream> {
        RngStream::new(self.clone(), range)
    }
}

impl fmt::Display for RngConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RngKind::Lfsr { width, seed, taps } => {
                write!(f, "lfsr:w={width},seed={seed}")?;
                if default_taps(*width) != Some(taps.as_slice()) {
                    let taps: Vec<String> = taps.iter().map(u32::to_string).collect();
                    write!(f, ",taps={}", taps.join("-"))?;
                }
                if self.start != 0 {
                    write!(f, ",start={}", self.start)?;
                }
            }
            RngKind::Vdc { width } => {
                write!(f, "vdc:w={width}")?;
                if self.start != 0 {
                    write!(f, ",start={}", self.start)?;
                }
            }
            RngKind::Halton { base } => {
                write!(f, "halton:base={base}")?;
                if self.start != 1 {
                    write!(f, ",start={}", self.start)?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for RngConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidRng(format!("`{s}`: {msg}"));
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut width = None;
        let mut seed = None;
        let mut base = None;
        let mut taps = None;
        let mut start = None;
        for item in rest.split(',').filter(|p| !p.is_empty()) {
            let (key, val) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{item}`")))?;
            let num = || {
                val.parse::<u64>()
                    .map_err(|_| bad(format!("`{val}` is not an unsigned integer")))
            };
            match key {
                "w" => {
                    width = Some(u32::try_from(num()?).map_err(|_| bad("width too large".into()))?)
                }
                "seed" => seed = Some(num()?),
                "base" => base = Some(num()?),
                "start" => start = Some(num()?),
                "taps" => {
                    taps = Some(
                        val.split('-')
                            .map(|t| t.parse::<u32>().map_err(|_| bad(format!("bad tap `{t}`"))))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                _ => return Err(bad(format!("unknown key `{key}`"))),
            }
        }
        let require_width = |w: Option<u32>| w.ok_or_else(|| bad("missing w=".into()));
        let cfg = match name {
            "lfsr" => {
                let width = require_width(width)?;
                let seed = seed.unwrap_or(1);
                let mut cfg = match &taps {
                    Some(taps) => Self::lfsr_with_taps(width, seed, taps.clone())?,
                    None => Self::lfsr(width, seed)?,
                };
                cfg.start = start.unwrap_or(0);
                cfg
            }
            "vdc" => Self::vdc(require_width(width)?).with_start(start.unwrap_or(0)),
            "halton" => Self::halton(base.ok_or_else(|| bad("missing base=".into()))?)
                .with_start(start.unwrap_or(1)),
            other => return Err(bad(format!("unknown generator `{other}`"))),
        };
        if name != "lfsr" && (seed.is_some() || taps.is_some()) {
            return Err(bad("seed/taps only apply to lfsr".into()));
        }
        if name == "halton" && width.is_some() {
            return Err(bad("halton takes base=, not w=".into()));
        }
        if name != "halton" && base.is_some() {
            return Err(bad("base only applies to halton".into()));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// One Fibonacci LFSR step. Returns the next state and the value emitted
/// this cycle (the current state).
pub fn lfsr_next(state: u64, width: u32, taps: &[u32]) -> (u64, u64) {
    let feedback = taps.iter().fold(0, |acc, &k| acc ^ (state >> (width - k)));
    let next = (state >> 1) | ((feedback & 1) << (width - 1));
    (next, state)
}

/// Bit reversal of `t mod 2^width` within `width` bits.
pub fn vdc_next(t: u64, width: u32) -> u64 {
    let masked = t & ((1u64 << width) - 1);
    masked.reverse_bits() >> (64 - width)
}

/// Radical inverse of `t` in `base` as an exact fraction `(num, den)`.
pub fn radical_inverse(mut t: u64, base: u64) -> (u128, u128) {
    let base = u128::from(base);
    let (mut num, mut den) = (0u128, 1u128);
    while t > 0 {
        let digit = u128::from(t) % base;
        num = num * base + digit;
        den *= base;
        t = (u128::from(t) / base) as u64;
    }
    (num, den)
}

/// `floor(range * radical_inverse_base(t))`, computed exactly.
pub fn halton_next(t: u64, base: u64, range: u64) -> u64 {
    let (num, den) = radical_inverse(t, base);
    (num * u128::from(range) / den) as u64
}

/// A running generator emitting one integer in `[0, range)` per cycle.
#[derive(Clone, Debug)]
pub struct RngStream {
    config: RngConfig,
    range: u64,
    index: u64,
    lfsr_state: u64,
}

impl RngStream {
    pub fn new(config: RngConfig, range: u64) -> Result<Self> {
        config.validate()?;
        if range < 2 {
            return Err(Error::InvalidRng(format!("range {range} must be >= 2")));
        }
        let mut stream = Self {
            lfsr_state: match config.kind {
                RngKind::Lfsr { seed, .. } => seed,
                _ => 0,
            },
            config,
            range,
            index: 0,
        };
        stream.reset();
        Ok(stream)
    }

    pub fn config(&self) -> &RngConfig {
        &self.config
    }

    pub fn range(&self) -> u64 {
        self.range
    }

    /// Rewinds to the configured start.
    pub fn reset(&mut self) {
        self.index = self.config.start;
        if let RngKind::Lfsr {
            width,
            seed,
            ref taps,
            ..
        } = self.config.kind
        {
            self.lfsr_state = seed;
            for _ in 0..self.config.start {
                self.lfsr_state = lfsr_next(self.lfsr_state, width, taps).0;
            }
        }
    }

    pub fn next_value(&mut self) -> u64 {
        let r = match &self.config.kind {
            RngKind::Lfsr { width, taps, .. } => {
                let (next, raw) = lfsr_next(self.lfsr_state, *width, taps);
                self.lfsr_state = next;
                scale_pow2(raw, *width, self.range)
            }
            RngKind::Vdc { width } => scale_pow2(vdc_next(self.index, *width), *width, self.range),
            RngKind::Halton { base } => halton_next(self.index, *base, self.range),
        };
        self.index += 1;
        r
    }
}

impl Iterator for RngStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        Some(self.next_value())
    }
}

fn scale_pow2(raw: u64, width: u32, range: u64) -> u64 {
    ((u128::from(raw) * u128::from(range)) >> width) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn period(width: u32, seed: u64, taps: &[u32]) -> u64 {
        let mut s = seed;
        for steps in 1.. {
            s = lfsr_next(s, width, taps).0;
            assert_ne!(s, 0, "lfsr reached the lockup state");
            if s == seed {
                return steps;
            }
        }
        unreachable!()
    }

    #[test]
    fn default_taps_are_maximal() {
        for &(width, taps) in DEFAULT_TAPS.iter().filter(|(w, _)| *w <= 16) {
            assert_eq!(period(width, 1, taps), (1 << width) - 1, "width {width}");
        }
    }

    #[test]
    fn lfsr_period_255_for_any_seed() {
        let taps = default_taps(8).unwrap();
        for seed in [1, 2, 77, 128, 255] {
            assert_eq!(period(8, seed, taps), 255);
        }
    }

    #[test]
    fn lfsr_streams_replay() {
        let cfg = RngConfig::lfsr(8, 45).unwrap();
        let a: Vec<u64> = cfg.stream(256).unwrap().take(600).collect();
        let b: Vec<u64> = cfg.stream(256).unwrap().take(600).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|&r| (1..256).contains(&r)));
    }

    #[test]
    fn lfsr_rejects_zero_seed() {
        assert!(RngConfig::lfsr(8, 0).is_err());
        assert!("lfsr:w=8,seed=0".parse::<RngConfig>().is_err());
    }

    #[test]
    fn vdc_three_bit_sequence() {
        let got: Vec<u64> = (0..8).map(|t| vdc_next(t, 3)).collect();
        assert_eq!(got, vec![0, 4, 2, 6, 1, 5, 3, 7]);
        assert_eq!(vdc_next(0, 8), 0);
    }

    #[test]
    fn vdc_period_is_a_permutation() {
        let mut seen: Vec<u64> = (0..256).map(|t| vdc_next(t, 8)).collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..256).collect::<Vec<_>>());
    }

    #[test]
    fn halton_base3_scaled_to_nine() {
        let got: Vec<u64> = (1..=3).map(|t| halton_next(t, 3, 9)).collect();
        assert_eq!(got, vec![3, 6, 1]);
    }

    #[test]
    fn halton_base2_matches_vdc() {
        let halton: Vec<u64> = RngConfig::halton(2)
            .with_start(0)
            .stream(16)
            .unwrap()
            .take(16)
            .collect();
        let vdc: Vec<u64> = RngConfig::vdc(4).stream(16).unwrap().take(16).collect();
        assert_eq!(halton, vdc);
        // default Halton skips index 0, so it is VDC shifted by one cycle
        let shifted: Vec<u64> = RngConfig::halton(2).stream(16).unwrap().take(15).collect();
        assert_eq!(shifted, vdc[1..]);
    }

    #[test]
    fn radical_inverse_in_unit_interval() {
        for base in [2, 3, 5, 7, 31] {
            for t in 0..2000 {
                let (num, den) = radical_inverse(t, base);
                assert!(num < den);
            }
        }
    }

    #[test]
    fn scaled_ranges_stay_in_bounds() {
        for cfg in [
            RngConfig::vdc(8),
            RngConfig::halton(3),
            RngConfig::lfsr(8, 9).unwrap(),
        ] {
            for range in [2, 5, 16, 256, 1000] {
                assert!(cfg.stream(range).unwrap().take(512).all(|r| r < range));
            }
        }
    }

    #[test]
    fn grammar_round_trip() {
        for text in [
            "lfsr:w=8,seed=1",
            "lfsr:w=8,seed=3,taps=8-4-3-2,start=5",
            "vdc:w=8",
            "vdc:w=8,start=1",
            "halton:base=3",
            "halton:base=5,start=0",
        ] {
            let cfg: RngConfig = text.parse().unwrap();
            assert_eq!(cfg.to_string(), text);
        }
    }

    #[test]
    fn grammar_errors() {
        for text in [
            "sobol:w=8",
            "vdc",
            "halton:base=1",
            "lfsr:w=8,seed=300",
            "vdc:w=8,seed=2",
            "halton:w=3",
            "vdc:w=x",
            "lfsr:w=8,taps=4-3",
        ] {
            assert!(text.parse::<RngConfig>().is_err(), "{text}");
        }
    }

    #[test]
    fn start_offsets_skip_elements() {
        let full: Vec<u64> = RngConfig::lfsr(8, 1)
            .unwrap()
            .stream(256)
            .unwrap()
            .take(10)
            .collect();
        let skipped: Vec<u64> = RngConfig::lfsr(8, 1)
            .unwrap()
            .with_start(3)
            .stream(256)
            .unwrap()
            .take(7)
            .collect();
        assert_eq!(skipped, full[3..]);
    }
}
