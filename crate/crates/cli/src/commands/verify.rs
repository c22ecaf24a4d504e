//! `ssdiv verify`: compare two PGM images under the 1000 ppm gate.
//!
//! Exit 0 when `mismatched * 1000 <= total`, exit 1 when the images differ
//! beyond that, exit 2 when the dimensions make them incomparable.

use crate::commands::bench::mismatch_ppm;
use crate::{pgm, CmdResult, Failure, VerifyArgs};

/// The gate itself: at most one mismatched pixel per thousand.
#[must_use]
pub fn within_gate(mismatched: u64, total: u64) -> bool {
    mismatched * 1000 <= total
}

fn load(path: &std::path::Path) -> Result<pgm::Image, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", path.display())))?;
    pgm::decode(&bytes).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

pub fn run(args: &VerifyArgs) -> CmdResult {
    let a = load(&args.a)?;
    let b = load(&args.b)?;
    if (a.width, a.height) != (b.width, b.height) {
        return Err(Failure::Usage(format!(
            "dimension mismatch: {} is {}x{}, {} is {}x{}",
            args.a.display(),
            a.width,
            a.height,
            args.b.display(),
            b.width,
            b.height
        )));
    }
    let total = a.pixels.len() as u64;
    let mismatched = a
        .pixels
        .iter()
        .zip(&b.pixels)
        .filter(|(x, y)| x != y)
        .count() as u64;
    println!(
        "total_pixels={total} mismatched_pixels={mismatched} mismatch_ppm={}",
        mismatch_ppm(mismatched, total)
    );
    if within_gate(mismatched, total) {
        Ok(())
    } else {
        Err(Failure::Runtime(format!(
            "{mismatched} of {total} pixels differ, beyond the 1000 ppm gate"
        )))
    }
}
