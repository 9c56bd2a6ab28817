//! Binary PGM (P5) input and PPM (P6) output.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::raster::Raster;

pub type Rgb = [u8; 3];

/// Colors for ids; ids missing from the map get [`fallback_color`].
pub type Palette = BTreeMap<u32, Rgb>;

/// Reads a binary (P5) PGM as a one-band raster. 16-bit samples
/// (maxval > 255) are big-endian.
pub fn load_pgm(path: &Path) -> Result<Raster> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let (width, height, maxval, offset) = parse_header(&bytes).map_err(|r| Error::format(path, r))?;

    let sample = if maxval > 255 { 2 } else { 1 };
    let expected = width * height * sample;
    let payload = &bytes[offset..];
    if payload.len() < expected {
        return Err(Error::format(
            path,
            format!(
                "truncated payload: {} bytes, expected {expected}",
                payload.len()
            ),
        ));
    }
    let payload = &payload[..expected];
    let values = if sample == 1 {
        payload.iter().map(|&b| f64::from(b)).collect()
    } else {
        payload
            .chunks_exact(2)
            .map(|c| f64::from(u16::from_be_bytes([c[0], c[1]])))
            .collect()
    };
    Raster::with_names(width, height, vec![values], vec!["gray".to_string()])
}

fn parse_header(bytes: &[u8]) -> std::result::Result<(usize, usize, usize, usize), String> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err("not a binary PGM (magic P5 expected)".into());
    }
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for field in fields.iter_mut() {
        // whitespace and comments
        loop {
            match bytes.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err("truncated header".into());
        }
        *field = std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or("header value out of range")?;
    }
    // exactly one whitespace byte separates header and payload
    match bytes.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err("truncated header".into()),
    }
    let [width, height, maxval] = fields;
    if width == 0 || height == 0 {
        return Err(format!("zero dimension {width}x{height}"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(format!("maxval {maxval} outside 1..=65535"));
    }
    Ok((width, height, maxval, pos))
}

/// Stable color for an id without a palette entry.
pub fn fallback_color(id: u32) -> Rgb {
    // splitmix64 finalizer
    let mut z = u64::from(id).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    let [r, g, b, ..] = z.to_le_bytes();
    [r, g, b]
}

/// Encodes a P6 image: header `P6\n<w> <h>\n255\n` followed by RGB triples.
pub fn encode_ppm(ids: &[u32], width: usize, height: usize, palette: &Palette) -> Result<Vec<u8>> {
    if ids.len() != width * height {
        return Err(Error::DimensionMismatch(format!(
            "{} ids for a {width}x{height} image",
            ids.len()
        )));
    }
    let header = format!("P6\n{width} {height}\n255\n");
    let mut out = Vec::with_capacity(header.len() + 3 * ids.len());
    out.extend_from_slice(header.as_bytes());
    for &id in ids {
        let rgb = palette.get(&id).copied().unwrap_or_else(|| fallback_color(id));
        out.extend_from_slice(&rgb);
    }
    Ok(out)
}

/// Renders a per-pixel id image (segment labels or class indices) to `path`.
pub fn render_ppm(
    ids: &[u32],
    width: usize,
    height: usize,
    palette: &Palette,
    path: &Path,
) -> Result<()> {
    let bytes = encode_ppm(ids, width, height, palette)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
