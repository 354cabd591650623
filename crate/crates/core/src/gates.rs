//! Combinational SC arithmetic and the isolator delay element.
//!
//! Each gate is exact bitwise logic; its arithmetic meaning depends on the
//! correlation of the operands.

use crate::bitstream::Bitstream;
use crate::error::{check_len, Result};

/// AND: `p_x * p_y` for uncorrelated operands, `min` for SCC = +1,
/// `max(0, p_x + p_y - 1)` for SCC = -1.
pub fn mult(x: &Bitstream, y: &Bitstream) -> Result<Bitstream> {
    x.and(y)
}

/// 2:1 multiplexer: `sel_t ? x_t : y_t`, value `0.5 (p_x + p_y)` when `sel`
/// is an uncorrelated 0.5 stream.
pub fn scaled_add(x: &Bitstream, y: &Bitstream, sel: &Bitstream) -> Result<Bitstream> {
    check_len(x.len(), y.len())?;
    check_len(x.len(), sel.len())?;
    let words: Vec<u64> = x
        .words()
        .iter()
        .zip(y.words())
        .zip(sel.words())
        .map(|((&a, &b), &s)| (s & a) | (!s & b))
        .collect();
    Bitstream::from_words(words, x.len())
}

/// OR: `min(1, p_x + p_y)` for SCC = -1.
pub fn sat_add(x: &Bitstream, y: &Bitstream) -> Result<Bitstream> {
    x.or(y)
}

/// XOR: `|p_x - p_y|` for SCC = +1.
pub fn sub_correlated(x: &Bitstream, y: &Bitstream) -> Result<Bitstream> {
    x.xor(y)
}

/// One-cycle delay: `out_0 = init`, `out_t = x_{t-1}`. The last input bit
/// falls off the end.
pub fn isolator(x: &Bitstream, init: bool) -> Bitstream {
    Bitstream::from_fn(x.len(), |t| if t == 0 { init } else { x.get(t - 1) })
}
