//! Correlation, bias and error metrics over bitstream pairs.
//!
//! Everything is computed from exact integer counts; conversion to `f64`
//! happens only in the returned value.

use serde::Serialize;

use crate::bitstream::{Bitstream, Encoding};
use crate::error::{check_len, Result};

/// Positional overlap tallies of two equal-length streams.
///
/// `a`: both 1, `b`: x only, `c`: y only, `d`: both 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SccCounts {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl SccCounts {
    pub fn len(&self) -> u64 {
        self.a + self.b + self.c + self.d
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Numerator and the branch-selected denominator of the SCC ratio.
    ///
    /// The denominator is zero exactly when either stream is constant.
    pub fn ratio(&self) -> (i128, i128) {
        let (a, b, c, d) = (
            i128::from(self.a),
            i128::from(self.b),
            i128::from(self.c),
            i128::from(self.d),
        );
        let n = a + b + c + d;
        let (ones_x, ones_y) = (a + b, a + c);
        let num = a * d - b * c;
        let den = if a * d > b * c {
            n * ones_x.min(ones_y) - ones_x * ones_y
        } else {
            ones_x * ones_y - n * (a - d).max(0)
        };
        (num, den)
    }

    /// SCC, or `None` when it is undefined (a constant stream).
    pub fn scc_checked(&self) -> Option<f64> {
        match self.ratio() {
            (_, 0) => None,
            (num, den) => Some(num as f64 / den as f64),
        }
    }

    /// SCC with the undefined case mapped to 0.
    pub fn scc(&self) -> f64 {
        self.scc_checked().unwrap_or(0.0)
    }
}

pub fn scc_counts(x: &Bitstream, y: &Bitstream) -> Result<SccCounts> {
    check_len(x.len(), y.len())?;
    let a = x.and_ones(y)?;
    let b = x.ones() - a;
    let c = y.ones() - a;
    let d = x.len() as u64 - a - b - c;
    Ok(SccCounts { a, b, c, d })
}

/// Stochastic computing correlation in [-1, 1]; 0 when either stream is
/// constant.
pub fn scc(x: &Bitstream, y: &Bitstream) -> Result<f64> {
    Ok(scc_counts(x, y)?.scc())
}

pub fn value(x: &Bitstream, enc: Encoding) -> f64 {
    x.value(enc)
}

/// `value(out) - value(inp)`, computed from the ones difference.
pub fn bias(out: &Bitstream, inp: &Bitstream, enc: Encoding) -> Result<f64> {
    check_len(out.len(), inp.len())?;
    let diff = out.ones() as f64 - inp.ones() as f64;
    let n = out.len() as f64;
    Ok(match enc {
        Encoding::Unipolar => diff / n,
        Encoding::Bipolar => 2.0 * diff / n,
    })
}

pub fn abs_error(measured: f64, exact: f64) -> f64 {
    (measured - exact).abs()
}
