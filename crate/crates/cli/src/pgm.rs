//! Binary PGM (P5) encoding of dwell grids and a decoder for verification.
//!
//! Pixels are 8-bit gray, `round(255 * dwell / d_max)`, written row-major
//! with grid row 0 first. The decoder accepts any standards-conforming P5
//! header (comments, arbitrary whitespace) with a maxval of at most 255.

use ssdiv_core::DwellGrid;

/// Gray level for one dwell: `round(255 * dwell / d_max)`.
///
/// Dwells are in `[1, d_max]`, so the result is in `[1, 255]` and 0 is
/// reserved for pixels that were never rendered.
#[must_use]
pub fn gray(dwell: u32, d_max: u32) -> u8 {
    (255.0 * dwell as f64 / d_max as f64).round() as u8
}

/// Encodes a rendered grid as a binary PGM image, grid row 0 first.
#[must_use]
pub fn encode(grid: &DwellGrid) -> Vec<u8> {
    let n = grid.n();
    let header = format!("P5\n{n} {n}\n255\n");
    let d_max = grid.d_max();
    let mut bytes = Vec::with_capacity(header.len() + grid.cells().len());
    bytes.extend_from_slice(header.as_bytes());
    bytes.extend(grid.cells().iter().map(|&dwell| gray(dwell, d_max)));
    bytes
}

/// A decoded 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: u32,
    pub height: u32,
    /// Row-major samples, row 0 first.
    pub pixels: Vec<u8>,
}

/// Reads the next header token, skipping whitespace and `#` comments.
fn next_token(bytes: &[u8], pos: &mut usize) -> Result<String, String> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    if start == *pos {
        return Err("truncated header".into());
    }
    Ok(String::from_utf8_lossy(&bytes[start..*pos]).into_owned())
}

fn header_number(bytes: &[u8], pos: &mut usize, what: &str) -> Result<u32, String> {
    let token = next_token(bytes, pos)?;
    token.parse().map_err(|_| format!("bad {what}: {token:?}"))
}

/// Decodes a binary PGM (P5) image with maxval at most 255.
pub fn decode(bytes: &[u8]) -> Result<Image, String> {
    let mut pos = 0;
    let magic = next_token(bytes, &mut pos)?;
    if magic != "P5" {
        return Err(format!("not a binary PGM (magic {magic:?})"));
    }
    let width = header_number(bytes, &mut pos, "width")?;
    let height = header_number(bytes, &mut pos, "height")?;
    let maxval = header_number(bytes, &mut pos, "maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(format!("unsupported maxval {maxval}"));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err("missing raster separator".into());
    }
    pos += 1;
    let expected = width as usize * height as usize;
    let raster = &bytes[pos..];
    if raster.len() != expected {
        return Err(format!(
            "raster holds {} bytes, dimensions need {expected}",
            raster.len()
        ));
    }
    Ok(Image {
        width,
        height,
        pixels: raster.to_vec(),
    })
}
