//! 8-bit grayscale images and binary/ASCII PGM I/O.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Row-major pixels; `pixels.len()` must equal `width * height`.
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Image(format!("empty image {width}x{height}")));
        }
        if pixels.len() != width * height {
            return Err(Error::Image(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, level: u8) -> Result<Self> {
        Self::new(width, height, vec![level; width * height])
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> u8) -> Result<Self> {
        let pixels = (0..height)
            .flat_map(|r| (0..width).map(move |c| (r, c)))
            .map(|(r, c)| f(r, c))
            .collect();
        Self::new(width, height, pixels)
    }

    /// Synthetic test card: vertical gradient background, a bright disk, a
    /// dark rectangle, a diagonal bar and a fine checker patch.
    pub fn test_card(width: usize, height: usize) -> Result<Self> {
        let (w, h) = (width as f64, height as f64);
        Self::from_fn(width, height, |r, c| {
            let (y, x) = (r as f64 / h, c as f64 / w);
            let mut v = 50.0 + 150.0 * y;
            let (dy, dx) = (y - 0.3, x - 0.32);
            if dy * dy + dx * dx < 0.04 {
                v = 225.0;
            }
            if (0.58..0.88).contains(&y) && (0.52..0.9).contains(&x) {
                v = 28.0;
            }
            if ((x - y) - 0.45).abs() < 0.04 {
                v = 160.0;
            }
            if (0.08..0.3).contains(&y) && (0.66..0.9).contains(&x) && (r / 4 + c / 4) % 2 == 0 {
                v = 110.0;
            }
            v.round().clamp(0.0, 255.0) as u8
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    /// Pixel with coordinates clamped to the image border.
    pub fn get_clamped(&self, row: isize, col: isize) -> u8 {
        let (r, c) = self.clamp(row, col);
        self.get(r, c)
    }

    pub fn clamp(&self, row: isize, col: isize) -> (usize, usize) {
        (
            row.clamp(0, self.height as isize - 1) as usize,
            col.clamp(0, self.width as isize - 1) as usize,
        )
    }

    /// Parses P2 (ASCII) or P5 (binary) PGM data with maxval <= 255.
    /// Other maxvals are rescaled to 0..=255.
    pub fn decode_pgm(data: &[u8]) -> Result<Self> {
        let mut cur = Cursor { data, pos: 0 };
        let magic = cur.token()?;
        let binary = match magic.as_str() {
            "P5" => true,
            "P2" => false,
            other => return Err(Error::Image(format!("unsupported magic `{other}`"))),
        };
        let width = cur.number()?;
        let height = cur.number()?;
        let maxval = cur.number()?;
        if maxval == 0 || maxval > 255 {
            return Err(Error::Image(format!("unsupported maxval {maxval}")));
        }
        let count = width
            .checked_mul(height)
            .ok_or_else(|| Error::Image("image dimensions overflow".into()))?;
        let raw: Vec<usize> = if binary {
            // exactly one whitespace byte separates the header from the raster
            cur.pos += 1;
            let end = cur.pos + count;
            let bytes = data
                .get(cur.pos..end)
                .ok_or_else(|| Error::Image(format!("raster truncated: need {count} bytes")))?;
            bytes.iter().map(|&b| usize::from(b)).collect()
        } else {
            (0..count).map(|_| cur.number()).collect::<Result<_>>()?
        };
        let mut pixels = Vec::with_capacity(count);
        for v in raw {
            if v > maxval {
                return Err(Error::Image(format!("sample {v} exceeds maxval {maxval}")));
            }
            pixels.push(((v * 255 + maxval / 2) / maxval) as u8);
        }
        Self::new(width, height, pixels)
    }

    /// Binary P5 with maxval 255.
    pub fn encode_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn read_pgm(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let data = fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::decode_pgm(&data).map_err(|e| Error::Image(format!("{}: {e}", path.display())))
    }

    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.encode_pgm()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while self.data.get(self.pos).is_some_and(|&b| b != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<String> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self
            .data
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Image("unexpected end of header".into()));
        }
        Ok(String::from_utf8_lossy(&self.data[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<usize> {
        let tok = self.token()?;
        tok.parse()
            .map_err(|_| Error::Image(format!("expected a number, got `{tok}`")))
    }
}
