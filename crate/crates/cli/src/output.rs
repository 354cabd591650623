//! Output helpers: atomic file writes and number formatting.

use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use tempfile::NamedTempFile;

/// Destination that is either standard output or a file written through a
/// temporary sibling. The file only appears once [`Sink::finish`] succeeds;
/// on any earlier failure the temporary is deleted on drop.
pub enum Sink {
    Stdout(BufWriter<io::Stdout>),
    File {
        tmp: BufWriter<NamedTempFile>,
        target: std::path::PathBuf,
    },
}

impl Sink {
    pub fn new(path: Option<&Path>) -> Result<Self> {
        Ok(match path {
            None => Self::Stdout(BufWriter::new(io::stdout())),
            Some(target) => Self::File {
                tmp: BufWriter::new(temp_beside(target)?),
                target: target.to_path_buf(),
            },
        })
    }

    pub fn writer(&mut self) -> &mut dyn Write {
        match self {
            Self::Stdout(w) => w,
            Self::File { tmp, .. } => tmp,
        }
    }

    pub fn finish(self) -> Result<()> {
        match self {
            Self::Stdout(mut w) => w.flush().context("writing standard output"),
            Self::File { tmp, target } => {
                let tmp = tmp.into_inner().map_err(|e| e.into_error())?;
                tmp.persist(&target)
                    .with_context(|| format!("writing {}", target.display()))?;
                Ok(())
            }
        }
    }
}

fn temp_beside(target: &Path) -> Result<NamedTempFile> {
    let dir = match target.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))
}

/// Writes `bytes` to `target` atomically.
pub fn write_atomic(target: &Path, bytes: &[u8]) -> Result<()> {
    let mut sink = Sink::new(Some(target))?;
    sink.writer()
        .write_all(bytes)
        .with_context(|| format!("writing {}", target.display()))?;
    sink.finish()
}

/// Six significant digits in plain decimal notation, trailing zeros trimmed.
pub fn sig6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() {
            "0".into()
        } else {
            v.to_string()
        };
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let text = format!("{v:.decimals$}");
    let text = if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    };
    if text == "-0" {
        "0".into()
    } else {
        text
    }
}

/// SCC with three decimals and an explicit sign on positive values.
pub fn format_scc(v: f64) -> String {
    let text = format!("{v:.3}");
    match text.as_str() {
        "-0.000" | "0.000" => "0.000".into(),
        _ if v > 0.0 => format!("+{text}"),
        _ => text,
    }
}
