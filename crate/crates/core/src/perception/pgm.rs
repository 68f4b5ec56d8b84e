use std::io::{BufRead, Write};

use super::Heatmap;
use crate::error::{Error, Result};

const MAXVAL: u32 = 65535;

/// Binary 16-bit PGM, values scaled by 65535.
pub fn write_pgm<W: Write>(h: &Heatmap, mut out: W) -> Result<()> {
    write!(out, "P5\n{} {}\n{MAXVAL}\n", h.width(), h.height())?;
    let mut buf = Vec::with_capacity(2 * h.values().len());
    for v in h.values() {
        let q = (v * MAXVAL as f64).round() as u16;
        buf.extend_from_slice(&q.to_be_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(format!("pgm: {}", msg.into()))
}

/// Reads the next whitespace-separated header token, skipping `#` comments.
fn token<R: BufRead>(r: &mut R) -> Result<String> {
    let mut tok = String::new();
    let mut byte = [0u8; 1];
    loop {
        if r.read(&mut byte)? == 0 {
            break;
        }
        let c = byte[0];
        if c == b'#' && tok.is_empty() {
            let mut skip = Vec::new();
            r.read_until(b'\n', &mut skip)?;
            continue;
        }
        if c.is_ascii_whitespace() {
            if tok.is_empty() {
                continue;
            }
            break;
        }
        tok.push(c as char);
    }
    if tok.is_empty() {
        return Err(bad("truncated header"));
    }
    Ok(tok)
}

pub fn read_pgm<R: BufRead>(mut r: R) -> Result<Heatmap> {
    if token(&mut r)? != "P5" {
        return Err(bad("expected P5 magic"));
    }
    let mut num = |what: &str| -> Result<usize> { token(&mut r)?.parse().map_err(|_| bad(format!("bad {what}"))) };
    let width = num("width")?;
    let height = num("height")?;
    let maxval = num("maxval")?;
    if maxval == 0 || maxval > MAXVAL as usize {
        return Err(bad(format!("maxval {maxval} out of range")));
    }
    let wide = maxval > 255;
    let n = width * height;
    let mut raw = vec![0u8; if wide { 2 * n } else { n }];
    r.read_exact(&mut raw).map_err(|_| bad("truncated pixel data"))?;
    let scale = maxval as f64;
    let values = if wide {
        raw.chunks_exact(2).map(|b| u16::from_be_bytes([b[0], b[1]]) as f64 / scale).collect()
    } else {
        raw.iter().map(|&b| b as f64 / scale).collect()
    };
    Heatmap::from_values(width, height, values)
}
