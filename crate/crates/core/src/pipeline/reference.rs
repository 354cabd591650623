//! Floating-point model of the blur and edge-detect pipeline.

use super::image::GrayImage;

/// Row-major real-valued image.
#[derive(Clone, Debug, PartialEq)]
pub struct RealImage {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl RealImage {
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    fn get_clamped(&self, row: usize, col: usize) -> f64 {
        self.get(row.min(self.height - 1), col.min(self.width - 1))
    }
}

/// 3x3 binomial kernel `[1 2 1; 2 4 2; 1 2 1] / 16`, row-major.
pub const BLUR_WEIGHTS: [u32; 9] = [1, 2, 1, 2, 4, 2, 1, 2, 1];

/// Clamp-to-edge binomial blur of pixels scaled to [0, 1].
pub fn blur(img: &GrayImage) -> RealImage {
    let (w, h) = (img.width(), img.height());
    let mut values = Vec::with_capacity(w * h);
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for (k, weight) in BLUR_WEIGHTS.iter().enumerate() {
                let (dy, dx) = (k as isize / 3 - 1, k as isize % 3 - 1);
                let p = img.get_clamped(r as isize + dy, c as isize + dx);
                acc += f64::from(*weight) * f64::from(p) / 255.0;
            }
            values.push(acc / 16.0);
        }
    }
    RealImage {
        width: w,
        height: h,
        values,
    }
}

/// `0.5 (|a - d| + |b - c|)` over each clamped 2x2 window `[a b; c d]`.
pub fn roberts_cross(img: &RealImage) -> RealImage {
    let mut values = Vec::with_capacity(img.values.len());
    for r in 0..img.height {
        for c in 0..img.width {
            let a = img.get(r, c);
            let b = img.get_clamped(r, c + 1);
            let cc = img.get_clamped(r + 1, c);
            let d = img.get_clamped(r + 1, c + 1);
            values.push(0.5 * ((a - d).abs() + (b - cc).abs()));
        }
    }
    RealImage {
        width: img.width,
        height: img.height,
        values,
    }
}

/// Exact blur followed by exact edge detection.
pub fn reference_pipeline(img: &GrayImage) -> RealImage {
    roberts_cross(&blur(img))
}
