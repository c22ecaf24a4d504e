//! Mandelbrot dwell evaluation, the exhaustive renderer, and the
//! perimeter test the subdivision engines build on.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pool::build_pool;
use crate::region::RegionOffset;

/// Axis-aligned window of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Viewport {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let v = Viewport {
            re_min,
            re_max,
            im_min,
            im_max,
        };
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.re_min >= self.re_max || self.im_min >= self.im_max {
            return Err(Error::BadViewport);
        }
        Ok(())
    }

    /// The frame used throughout the benchmarks: `[-1.5, -1] x [0.5, 1]`,
    /// a band outside the set whose dwell plateaus reward subdivision.
    pub const fn bench_frame() -> Self {
        Viewport {
            re_min: -1.5,
            re_max: -1.0,
            im_min: 0.5,
            im_max: 1.0,
        }
    }
}

impl Default for Viewport {
    fn default() -> Self {
        Viewport::bench_frame()
    }
}

/// Everything needed to evaluate a pixel without storing it: domain side,
/// window, and iteration limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGeom {
    pub n: u32,
    pub viewport: Viewport,
    pub d_max: u32,
}

impl GridGeom {
    pub fn new(n: u32, viewport: Viewport, d_max: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooSmall {
                name: "n",
                min: 1,
                value: 0,
            });
        }
        if d_max == 0 {
            return Err(Error::TooSmall {
                name: "d_max",
                min: 1,
                value: 0,
            });
        }
        viewport.validate()?;
        Ok(GridGeom { n, viewport, d_max })
    }

    /// Dwell of the pixel at column `x`, row `y`.
    #[must_use]
    pub fn pixel_dwell(&self, x: u32, y: u32) -> u32 {
        let (re, im) = pixel_to_complex(y, x, self.n, &self.viewport);
        dwell(re, im, self.d_max)
    }
}

/// Maps a pixel to the complex point at its center.
///
/// Column `j` spans the real axis, row `i` the imaginary axis; both sample
/// at `min + (index + 0.5) * extent / n`, so row 0 sits at the `im_min`
/// edge of the window.
#[must_use]
pub fn pixel_to_complex(i: u32, j: u32, n: u32, viewport: &Viewport) -> (f64, f64) {
    let nf = n as f64;
    let re = viewport.re_min + (j as f64 + 0.5) * (viewport.re_max - viewport.re_min) / nf;
    let im = viewport.im_min + (i as f64 + 0.5) * (viewport.im_max - viewport.im_min) / nf;
    (re, im)
}

/// First iterate of `z <- z^2 + c` (from `z = 0`) whose magnitude exceeds 2,
/// or `d_max` if none does within the limit.
///
/// The escape test is strict (`|z|^2 > 4`), so points that land exactly on
/// magnitude 2 keep iterating.
#[must_use]
pub fn dwell(re: f64, im: f64, d_max: u32) -> u32 {
    let mut zr = 0.0f64;
    let mut zi = 0.0f64;
    let mut zr2 = 0.0f64;
    let mut zi2 = 0.0f64;
    for i in 1..=d_max {
        zi = 2.0 * zr * zi + im;
        zr = zr2 - zi2 + re;
        zr2 = zr * zr;
        zi2 = zi * zi;
        if zr2 + zi2 > 4.0 {
            return i;
        }
    }
    d_max
}

/// Row-major grid of dwell values over an `n x n` pixel domain.
///
/// A fully rendered grid holds values in `[1, d_max]`. Freshly created
/// grids are zeroed; 0 marks a pixel no engine has written yet.
#[derive(Debug, Clone, PartialEq)]
pub struct DwellGrid {
    geom: GridGeom,
    cells: Vec<u32>,
}

impl DwellGrid {
    /// Allocates a zeroed grid.
    pub fn new(n: u32, viewport: Viewport, d_max: u32) -> Result<Self> {
        let geom = GridGeom::new(n, viewport, d_max)?;
        Ok(DwellGrid {
            geom,
            cells: vec![0; n as usize * n as usize],
        })
    }

    pub fn n(&self) -> u32 {
        self.geom.n
    }

    pub fn d_max(&self) -> u32 {
        self.geom.d_max
    }

    pub fn viewport(&self) -> &Viewport {
        &self.geom.viewport
    }

    pub fn geom(&self) -> GridGeom {
        self.geom
    }

    /// Dwell at column `x`, row `y`.
    pub fn get(&self, x: u32, y: u32) -> u32 {
        self.cells[y as usize * self.geom.n as usize + x as usize]
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    pub(crate) fn cells_mut(&mut self) -> &mut [u32] {
        &mut self.cells
    }

    /// Number of cells whose values differ from `other`'s.
    pub fn mismatch(&self, other: &DwellGrid) -> Result<u64> {
        if self.cells.len() != other.cells.len() {
            return Err(Error::SizeMismatch {
                a: self.cells.len(),
                b: other.cells.len(),
            });
        }
        Ok(self
            .cells
            .iter()
            .zip(&other.cells)
            .filter(|(a, b)| a != b)
            .count() as u64)
    }
}

/// Writes `value` to every pixel of `region`.
pub fn fill_region(grid: &mut DwellGrid, region: RegionOffset, value: u32) -> Result<()> {
    region.validate(grid.n())?;
    if value < 1 || value > grid.d_max() {
        return Err(Error::DwellRange {
            value,
            d_max: grid.d_max(),
        });
    }
    let n = grid.n() as usize;
    let (x, side) = (region.x as usize, region.side as usize);
    for y in region.y as usize..region.y as usize + side {
        grid.cells_mut()[y * n + x..y * n + x + side].fill(value);
    }
    Ok(())
}

/// Evaluates the dwell of every border pixel of `region` and returns the
/// shared value if they all agree, `None` otherwise.
///
/// This is the uniformity test of the subdivision engines: a region whose
/// whole perimeter shares one dwell is assumed to hold that dwell
/// throughout. A single-pixel region is trivially uniform.
pub fn perimeter_common_dwell(geom: &GridGeom, region: RegionOffset) -> Result<Option<u32>> {
    region.validate(geom.n)?;
    Ok(perimeter_common_dwell_unchecked(geom, region))
}

/// [`perimeter_common_dwell`] without bounds validation, for engines whose
/// regions are in bounds by construction. The full border is always
/// evaluated; its cost is exactly [`RegionOffset::border_len`] dwells,
/// matching the boundary-test term of the cost model.
pub(crate) fn perimeter_common_dwell_unchecked(
    geom: &GridGeom,
    region: RegionOffset,
) -> Option<u32> {
    let mut pixels = region.border_pixels();
    let first = pixels
        .next()
        .map(|(x, y)| geom.pixel_dwell(x, y))
        .expect("regions are non-empty by validation");
    let mut uniform = true;
    for (x, y) in pixels {
        // Evaluate the full border rather than breaking early so the work
        // spent here is a fixed function of the region size.
        if geom.pixel_dwell(x, y) != first {
            uniform = false;
        }
    }
    uniform.then_some(first)
}

/// Renders every pixel directly, rows split across `workers` threads.
/// The baseline all subdivision renders are compared against.
pub fn exhaustive_render(
    n: u32,
    viewport: &Viewport,
    d_max: u32,
    workers: usize,
) -> Result<DwellGrid> {
    let mut grid = DwellGrid::new(n, *viewport, d_max)?;
    let geom = grid.geom();
    let pool = build_pool(workers)?;
    pool.install(|| {
        grid.cells_mut()
            .par_chunks_mut(n as usize)
            .enumerate()
            .for_each(|(row, cells)| {
                for (col, cell) in cells.iter_mut().enumerate() {
                    *cell = geom.pixel_dwell(col as u32, row as u32);
                }
            });
    });
    Ok(grid)
}
