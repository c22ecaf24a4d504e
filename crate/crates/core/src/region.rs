//! Square pixel regions addressed by their top-left corner.

use crate::error::{Error, Result};

/// One square region of the pixel domain.
///
/// `x` is the column and `y` the row of the top-left pixel. Regions produced
/// by the engines at level `i` have `side = n / (g * r^i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RegionOffset {
    pub x: u32,
    pub y: u32,
    pub side: u32,
}

impl RegionOffset {
    pub fn new(x: u32, y: u32, side: u32) -> Self {
        RegionOffset { x, y, side }
    }

    /// Checks the region is non-empty and fits an `n x n` grid.
    pub fn validate(&self, n: u32) -> Result<()> {
        if self.side == 0 {
            return Err(Error::EmptyRegion);
        }
        let fits = |start: u32| (start as u64 + self.side as u64) <= n as u64;
        if !fits(self.x) || !fits(self.y) {
            return Err(Error::RegionOutOfBounds {
                x: self.x,
                y: self.y,
                side: self.side,
                n,
            });
        }
        Ok(())
    }

    pub fn area(&self) -> u64 {
        self.side as u64 * self.side as u64
    }

    /// Number of border pixels: `4*side - 4`, or 1 for a single pixel.
    pub fn border_len(&self) -> u64 {
        if self.side <= 1 {
            self.side as u64
        } else {
            4 * (self.side as u64 - 1)
        }
    }

    /// All pixels, row-major.
    pub fn pixels(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let (x, y, side) = (self.x, self.y, self.side);
        (y..y + side).flat_map(move |py| (x..x + side).map(move |px| (px, py)))
    }

    /// Border pixels in a fixed order: top row left to right, bottom row
    /// left to right, then the left and right columns without their corners.
    /// The order never changes the uniformity verdict, but keeping it fixed
    /// keeps work tallies reproducible.
    pub fn border_pixels(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let (x, y, side) = (self.x, self.y, self.side);
        let top = (x..x + side).map(move |px| (px, y));
        let bottom = (x..x + side)
            .map(move |px| (px, y + side - 1))
            .filter(move |_| side > 1);
        let inner = y + 1..y + side.saturating_sub(1);
        let sides = inner.flat_map(move |py| [(x, py), (x + side - 1, py)]);
        top.chain(bottom).chain(sides)
    }

    /// The `r x r` children of this region, row-major. Requires `r` to
    /// divide `side`.
    pub fn children(&self, r: u32) -> impl Iterator<Item = RegionOffset> + '_ {
        let child = self.side / r;
        debug_assert_eq!(child * r, self.side, "r must divide side");
        let (x, y) = (self.x, self.y);
        (0..r).flat_map(move |cy| {
            (0..r).map(move |cx| RegionOffset::new(x + cx * child, y + cy * child, child))
        })
    }
}
