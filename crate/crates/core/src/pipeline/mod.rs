//! Tiled Gaussian-blur then Roberts-cross edge detection, simulated bit by
//! bit.
//!
//! The input image is processed in `tile x tile` blocks. For each block:
//!
//! 1. the clamped `(tile + 3)^2` input halo is D/S converted, each pixel
//!    against a Halton sequence whose base depends on the parity of its row
//!    and column;
//! 2. a 16-leg multiplexer per blurred pixel realizes the binomial kernel.
//!    All multiplexers share one select sequence, and each select draw is
//!    held for a block of cycles so that every blurred stream is a chain of
//!    contiguous low-discrepancy segments;
//! 3. the `(tile + 1)^2` blurred streams get the variant's correlation
//!    treatment and feed XOR absolute-difference pairs and a scaled adder;
//! 4. the edge streams are counted back to intensities.
//!
//! Diagonal neighbours always differ in both row and column parity, so every
//! pair that meets at an XOR gate was generated from two different Halton
//! bases and is uncorrelated unless the variant intervenes.
//!
//! Tiles are independent and run in parallel.

mod image;
mod reference;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use image::GrayImage;
pub use reference::{blur, reference_pipeline, roberts_cross, RealImage, BLUR_WEIGHTS};

use crate::bitstream::Bitstream;
use crate::convert::{encode, regenerate, Regeneration};
use crate::correlate::{run_pairwise, Circuit};
use crate::error::{Error, Result};
use crate::gates::{scaled_add, sub_correlated};
use crate::rng::{RngConfig, RngKind};
use crate::sweep::{Manipulator, StageOffsets};

/// Correlation handling between the blur and edge stages.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Blurred streams feed the edge detector directly.
    None,
    /// Blurred streams are counted and re-encoded against one shared
    /// sequence.
    Regen,
    /// A synchronizer precedes each XOR pair.
    #[default]
    Sync,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::None, Variant::Regen, Variant::Sync];

    fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Regen => "regen",
            Self::Sync => "sync",
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown pipeline variant `{s}`")))
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Multiplexer legs of the binomial kernel as `(dy, dx)` offsets. Each tap
/// appears as many times as its kernel weight.
pub const BLUR_LEGS: [(i8, i8); 16] = [
    (-1, -1),
    (-1, 0),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, -1),
    (0, 0),
    (0, 0),
    (0, 0),
    (0, 0),
    (0, 1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 0),
    (1, 1),
];

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    /// Stream length.
    pub n: usize,
    pub tile: usize,
    pub variant: Variant,
    /// Synchronizer save depth for [`Variant::Sync`].
    pub depth: u32,
    /// Synchronizers chained in series per XOR pair, with alternating
    /// initial offsets.
    pub stages: usize,
    /// Halton bases for pixel generation, indexed by
    /// `2 * (row % 2) + (col % 2)`.
    pub pixel_bases: [u64; 4],
    /// Blur multiplexer select generator (range 16).
    pub blur_select: RngConfig,
    /// Cycles each blur select draw is held for.
    pub select_hold: usize,
    /// Edge scaled-adder select generator (range `n`, thresholded at `n/2`).
    pub edge_select: RngConfig,
    /// Shared generator for [`Variant::Regen`] (range `n`).
    pub regen: RngConfig,
}

impl PipelineConfig {
    /// Defaults: N = 256, 10x10 tiles, three depth-1 synchronizers in
    /// series.
    pub fn new(variant: Variant) -> Self {
        Self::with_length(variant, 256)
    }

    pub fn with_length(variant: Variant, n: usize) -> Self {
        let width = n.max(2).next_power_of_two().trailing_zeros();
        Self {
            n,
            tile: 10,
            variant,
            depth: 1,
            stages: 3,
            pixel_bases: [2, 5, 3, 7],
            blur_select: RngConfig::vdc(4),
            select_hold: 16,
            edge_select: RngConfig::halton(31),
            regen: RngConfig::vdc(width),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tile < 2 {
            return Err(Error::Config(format!(
                "tile size {} must be >= 2",
                self.tile
            )));
        }
        if self.n < 2 {
            return Err(Error::Config(format!(
                "stream length {} must be >= 2",
                self.n
            )));
        }
        if self.depth == 0 || self.stages == 0 {
            return Err(Error::Config(
                "save depth and stage count must be >= 1".into(),
            ));
        }
        if self.select_hold == 0 {
            return Err(Error::Config("select hold must be >= 1".into()));
        }
        for cfg in [&self.edge_select, &self.regen] {
            if let RngKind::Vdc { width } = cfg.kind {
                if 1usize << width != self.n {
                    return Err(Error::Config(format!(
                        "vdc width {width} needs stream length {}, got {}",
                        1u64 << width,
                        self.n
                    )));
                }
            }
        }
        for &base in &self.pixel_bases {
            RngConfig::halton(base).validate()?;
        }
        self.blur_select.validate()
    }

    fn pixel_rng(&self, row: usize, col: usize) -> RngConfig {
        RngConfig::halton(self.pixel_bases[2 * (row % 2) + col % 2])
    }

    fn sync_chain(&self) -> Result<Circuit> {
        let chain = Manipulator::Synchronizer {
            depth: self.depth,
            stages: self.stages,
            flush: false,
            offsets: StageOffsets::Alternating,
        }
        .circuit()?;
        chain.ok_or_else(|| Error::Config("synchronizer chain unavailable".into()))
    }

    /// D/S threshold for an 8-bit level: `round(level * n / 255)`.
    fn level(&self, pixel: u8) -> u64 {
        (u64::from(pixel) * self.n as u64 * 2 + 255) / 510
    }
}

/// Summary of one pipeline run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineReport {
    pub variant: Variant,
    pub n: usize,
    pub tile: usize,
    /// Mean absolute error on [0, 1] against [`reference_pipeline`].
    pub mae: f64,
    pub psnr: f64,
    pub seconds: f64,
}

/// Edge values of one tile, row-major over `rows x cols`.
#[derive(Clone, Debug, PartialEq)]
pub struct TileOutput {
    pub row0: usize,
    pub col0: usize,
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<f64>,
}

/// One blurred stream from its 3x3 window (row-major) and the per-cycle
/// multiplexer leg.
pub fn gaussian_blur_sc(window: &[Bitstream], select: &[u8]) -> Result<Bitstream> {
    if window.len() != 9 {
        return Err(Error::Config(format!(
            "blur window needs 9 streams, got {}",
            window.len()
        )));
    }
    let n = window[0].len();
    for s in window {
        crate::error::check_len(n, s.len())?;
    }
    crate::error::check_len(n, select.len())?;
    let taps: Vec<usize> = BLUR_LEGS
        .iter()
        .map(|&(dy, dx)| ((dy + 1) * 3 + dx + 1) as usize)
        .collect();
    let mut out = Vec::with_capacity(n);
    for (t, &leg) in select.iter().enumerate() {
        let tap = *taps
            .get(usize::from(leg))
            .ok_or_else(|| Error::Config(format!("select leg {leg} out of range")))?;
        out.push(window[tap].get(t));
    }
    Ok(out.into_iter().collect())
}

/// Edge stream of the 2x2 window `[p00 p01; p10 p11]`:
/// `0.5 (|p00 - p11| + |p01 - p10|)`.
pub fn roberts_cross_sc(
    window: [&Bitstream; 4],
    cfg: &PipelineConfig,
    select: &Bitstream,
) -> Result<Bitstream> {
    let [p00, p01, p10, p11] = window;
    let (diag, anti) = match cfg.variant {
        Variant::None => (sub_correlated(p00, p11)?, sub_correlated(p01, p10)?),
        Variant::Regen => {
            let group = [p00.clone(), p01.clone(), p10.clone(), p11.clone()];
            let g = regenerate(&group, &Regeneration::Shared(cfg.regen.clone()))?;
            (sub_correlated(&g[0], &g[3])?, sub_correlated(&g[1], &g[2])?)
        }
        Variant::Sync => {
            let mut sync = cfg.sync_chain()?;
            let (a, d) = run_pairwise(&mut sync, p00, p11, false)?;
            let (b, c) = run_pairwise(&mut sync, p01, p10, false)?;
            (sub_correlated(&a, &d)?, sub_correlated(&b, &c)?)
        }
    };
    scaled_add(&diag, &anti, select)
}

/// Per-cycle multiplexer legs shared by every blurred pixel.
pub fn blur_select(cfg: &PipelineConfig) -> Result<Vec<u8>> {
    let mut rng = cfg.blur_select.stream(BLUR_LEGS.len() as u64)?;
    let mut out = Vec::with_capacity(cfg.n);
    while out.len() < cfg.n {
        let leg = rng.next_value() as u8;
        for _ in 0..cfg.select_hold {
            out.push(leg);
        }
    }
    out.truncate(cfg.n);
    Ok(out)
}

fn edge_select(cfg: &PipelineConfig) -> Result<Bitstream> {
    encode(cfg.n as u64 / 2, &cfg.edge_select, cfg.n)
}

/// Runs one tile whose top-left output pixel is `(row0, col0)`.
pub fn process_tile(
    img: &GrayImage,
    cfg: &PipelineConfig,
    row0: usize,
    col0: usize,
) -> Result<TileOutput> {
    cfg.validate()?;
    let select = blur_select(cfg)?;
    let sel = edge_select(cfg)?;
    process_tile_with(img, cfg, row0, col0, &select, &sel)
}

fn process_tile_with(
    img: &GrayImage,
    cfg: &PipelineConfig,
    row0: usize,
    col0: usize,
    blur_sel: &[u8],
    edge_sel: &Bitstream,
) -> Result<TileOutput> {
    if row0 >= img.height() || col0 >= img.width() {
        return Err(Error::Config(format!(
            "tile origin ({row0}, {col0}) outside {}x{} image",
            img.width(),
            img.height()
        )));
    }
    let rows = cfg.tile.min(img.height() - row0);
    let cols = cfg.tile.min(img.width() - col0);

    // input halo: one pixel around the blurred grid, which itself extends
    // one past the tile on the bottom and right
    let halo_rows = rows + 3;
    let halo_cols = cols + 3;
    let mut halo = Vec::with_capacity(halo_rows * halo_cols);
    for hr in 0..halo_rows {
        for hc in 0..halo_cols {
            let (r, c) = img.clamp((row0 + hr) as isize - 1, (col0 + hc) as isize - 1);
            halo.push(encode(
                cfg.level(img.get(r, c)),
                &cfg.pixel_rng(r, c),
                cfg.n,
            )?);
        }
    }

    let grid_rows = rows + 1;
    let grid_cols = cols + 1;
    let mut blurred = Vec::with_capacity(grid_rows * grid_cols);
    for gr in 0..grid_rows {
        for gc in 0..grid_cols {
            // blurred positions past the image repeat the last row/column
            let (r, c) = img.clamp((row0 + gr) as isize, (col0 + gc) as isize);
            let (hr0, hc0) = (r + 1 - row0, c + 1 - col0);
            let window: Vec<Bitstream> = (0..9)
                .map(|k| halo[(hr0 + k / 3 - 1) * halo_cols + hc0 + k % 3 - 1].clone())
                .collect();
            blurred.push(gaussian_blur_sc(&window, blur_sel)?);
        }
    }

    let mut values = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let at = |dr: usize, dc: usize| &blurred[(r + dr) * grid_cols + c + dc];
            let edge = roberts_cross_sc([at(0, 0), at(0, 1), at(1, 0), at(1, 1)], cfg, edge_sel)?;
            values.push(edge.ones() as f64 / cfg.n as f64);
        }
    }
    Ok(TileOutput {
        row0,
        col0,
        rows,
        cols,
        values,
    })
}

/// Tile origins in row-major order.
pub fn tile_origins(img: &GrayImage, tile: usize) -> Vec<(usize, usize)> {
    (0..img.height())
        .step_by(tile)
        .flat_map(|r| (0..img.width()).step_by(tile).map(move |c| (r, c)))
        .collect()
}

/// Places tile outputs into a full-size value grid. Order does not matter.
pub fn assemble(img: &GrayImage, tiles: &[TileOutput]) -> Vec<f64> {
    let mut values = vec![0.0; img.width() * img.height()];
    for t in tiles {
        for r in 0..t.rows {
            for c in 0..t.cols {
                values[(t.row0 + r) * img.width() + t.col0 + c] = t.values[r * t.cols + c];
            }
        }
    }
    values
}

/// Edge values in [0, 1] for every pixel.
pub fn edge_values(img: &GrayImage, cfg: &PipelineConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let blur_sel = blur_select(cfg)?;
    let edge_sel = edge_select(cfg)?;
    let tiles = tile_origins(img, cfg.tile)
        .into_par_iter()
        .map(|(r, c)| process_tile_with(img, cfg, r, c, &blur_sel, &edge_sel))
        .collect::<Result<Vec<_>>>()?;
    Ok(assemble(img, &tiles))
}

/// Runs the SC pipeline and scores it against the floating-point model.
pub fn run_pipeline(img: &GrayImage, cfg: &PipelineConfig) -> Result<(GrayImage, PipelineReport)> {
    let started = Instant::now();
    let values = edge_values(img, cfg)?;
    let reference = reference_pipeline(img);
    let (mae, psnr) = score(&values, &reference.values);
    let pixels = values
        .iter()
        .map(|v| (v * 255.0).round().clamp(0.0, 255.0) as u8)
        .collect();
    let out = GrayImage::new(img.width(), img.height(), pixels)?;
    let report = PipelineReport {
        variant: cfg.variant,
        n: cfg.n,
        tile: cfg.tile,
        mae,
        psnr,
        seconds: started.elapsed().as_secs_f64(),
    };
    Ok((out, report))
}

/// Mean absolute error and PSNR (peak 1.0; infinite for a perfect match).
pub fn score(measured: &[f64], reference: &[f64]) -> (f64, f64) {
    let count = measured.len().max(1) as f64;
    let (abs, sq) = measured
        .iter()
        .zip(reference)
        .fold((0.0, 0.0), |(a, s), (m, r)| {
            (a + (m - r).abs(), s + (m - r) * (m - r))
        });
    let mse = sq / count;
    let psnr = if mse == 0.0 {
        f64::INFINITY
    } else {
        -10.0 * mse.log10()
    };
    (abs / count, psnr)
}
