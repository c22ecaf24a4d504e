//! Level-by-level adaptive subdivision renderer.
//!
//! Rendering proceeds in flat passes over a read table of same-side regions
//! (see [`Olt`]). Every region is classified once per pass:
//!
//! * uniform perimeter: the region is filled with the shared dwell,
//! * mixed perimeter and children would stay at least `B` wide: the region
//!   subdivides, inserting its `r x r` children into the write table,
//! * mixed perimeter otherwise: the region is a leaf and every pixel is
//!   evaluated directly.
//!
//! The tables swap roles after each pass until no region subdivides. Passes
//! never recurse; within a pass regions are independent tasks, and the two
//! scheduling schemes only change how pixel work is cut into tasks, never
//! what is written. A rendered grid is therefore identical across schemes,
//! worker counts, and the recursive engine.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fractal::{perimeter_common_dwell_unchecked, DwellGrid, GridGeom, Viewport};
use crate::olt::{initial_grid, Olt, OltWriter};
use crate::pool::build_pool;
use crate::region::RegionOffset;
use crate::sink::PixelSink;

/// How a region's pixel work is cut into tasks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// One task per region: the task classifies the region and performs all
    /// of its pixel work itself.
    Sbr,
    /// Classification stays one task per region, but fill and leaf pixel
    /// work is split into square tiles so wide regions cannot serialize a
    /// pass.
    Mbr,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Sbr => "SBR",
            Scheme::Mbr => "MBR",
        })
    }
}

/// Subdivision engine configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AskConfig {
    /// Initial regions per axis (power of two, at most `n`).
    pub g: u32,
    /// Children per axis on subdivision (power of two, at least 2).
    pub r: u32,
    /// Stopping side: a region subdivides only if its children would have
    /// side at least `b` (power of two).
    pub b: u32,
    pub scheme: Scheme,
    /// Tile side for [`Scheme::Mbr`] pixel work (power of two).
    pub tile: u32,
    /// Worker threads, at least 1.
    pub workers: usize,
}

impl Default for AskConfig {
    fn default() -> Self {
        AskConfig {
            g: 32,
            r: 4,
            b: 16,
            scheme: Scheme::Sbr,
            tile: 16,
            workers: 1,
        }
    }
}

impl AskConfig {
    /// Checks the configuration against a domain side `n`.
    ///
    /// Requires powers of two throughout and one of two tilings: either
    /// `n = g * B * r^k` for some integer `k >= 0`, so leaves land exactly
    /// on side `B`, or `n / g <= B`, in which case no region can ever
    /// subdivide and the run degenerates to one pass over the initial grid.
    pub fn validate(&self, n: u32) -> Result<()> {
        for (name, value) in [
            ("n", n as u64),
            ("g", self.g as u64),
            ("r", self.r as u64),
            ("B", self.b as u64),
            ("tile", self.tile as u64),
        ] {
            if value == 0 || !value.is_power_of_two() {
                return Err(Error::PowerOfTwo { name, value });
            }
        }
        if self.r < 2 {
            return Err(Error::TooSmall {
                name: "r",
                min: 2,
                value: self.r as u64,
            });
        }
        if self.workers == 0 {
            return Err(Error::TooSmall {
                name: "workers",
                min: 1,
                value: 0,
            });
        }
        let bad_tiling = Error::BadTiling {
            n: n as u64,
            g: self.g as u64,
            r: self.r as u64,
            b: self.b as u64,
        };
        if self.g > n {
            return Err(bad_tiling);
        }
        let side0 = n / self.g;
        if side0 > self.b {
            let ratio = side0 / self.b;
            if !ratio
                .trailing_zeros()
                .is_multiple_of(self.r.trailing_zeros())
            {
                return Err(bad_tiling);
            }
        }
        Ok(())
    }
}

/// Work counters for one engine pass.
///
/// `q_pixels` counts boundary-test dwell evaluations, `t_pixels` pixels
/// written by fills, and `a_pixels` pixels evaluated directly in leaves.
/// Across all levels of a render, `t_pixels + a_pixels` sums to `n^2`:
/// every pixel is resolved exactly once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LevelStats {
    pub level: u32,
    pub regions_in: u64,
    pub filled: u64,
    pub subdivided: u64,
    pub leaf_processed: u64,
    pub q_pixels: u64,
    pub t_pixels: u64,
    pub a_pixels: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Decision {
    Fill(u32),
    Leaf,
    Subdivide,
}

pub(crate) fn classify(geom: &GridGeom, config: &AskConfig, region: RegionOffset) -> Decision {
    if let Some(value) = perimeter_common_dwell_unchecked(geom, region) {
        return Decision::Fill(value);
    }
    if region.side / config.r >= config.b {
        Decision::Subdivide
    } else {
        Decision::Leaf
    }
}

/// Splits one region's pixel work into tasks under the given scheme:
/// the whole region for [`Scheme::Sbr`], `ceil(side / tile)^2` square tiles
/// for [`Scheme::Mbr`]. Tiles partition the region exactly.
#[must_use]
pub fn scheme_dispatch(region: RegionOffset, scheme: Scheme, tile: u32) -> Vec<RegionOffset> {
    match scheme {
        Scheme::Sbr => vec![region],
        Scheme::Mbr => {
            let t = tile.max(1).min(region.side);
            let per_axis = region.side / t;
            let mut tiles = Vec::with_capacity(per_axis as usize * per_axis as usize);
            for ty in 0..per_axis {
                for tx in 0..per_axis {
                    tiles.push(RegionOffset::new(region.x + tx * t, region.y + ty * t, t));
                }
            }
            tiles
        }
    }
}

/// Fills one rectangle through the sink.
///
/// # Safety
/// The caller must own every pixel of `rect` (see [`PixelSink`]).
pub(crate) unsafe fn fill_task(sink: &PixelSink<'_>, rect: RegionOffset, value: u32) {
    for (x, y) in rect.pixels() {
        // SAFETY: ownership of the rectangle is the caller's contract.
        unsafe { sink.write(x, y, value) };
    }
}

/// Evaluates every pixel of one rectangle through the sink.
///
/// # Safety
/// The caller must own every pixel of `rect` (see [`PixelSink`]).
pub(crate) unsafe fn leaf_task(sink: &PixelSink<'_>, geom: &GridGeom, rect: RegionOffset) {
    for (x, y) in rect.pixels() {
        // SAFETY: ownership of the rectangle is the caller's contract.
        unsafe { sink.write(x, y, geom.pixel_dwell(x, y)) };
    }
}

/// Runs one pass: classifies every region of `read`, performs fill and leaf
/// pixel work, and returns the next level's table plus this pass's stats.
///
/// Runs its tasks on the ambient worker pool. All regions in `read` must
/// share one side and lie inside the grid.
pub fn process_level(
    read: &Olt,
    grid: &mut DwellGrid,
    config: &AskConfig,
    level: u32,
) -> Result<(Olt, LevelStats)> {
    let n = grid.n();
    config.validate(n)?;
    read.uniform_side()?;
    for region in read.entries() {
        region.validate(n)?;
    }

    let geom = grid.geom();
    let writer = OltWriter::new(read.len(), config.r);
    let sink = PixelSink::new(grid.cells_mut(), n as usize);

    let insert_children = |region: &RegionOffset| {
        let base = writer.reserve_slots();
        for (k, child) in region.children(config.r).enumerate() {
            // SAFETY: slots base..base + r^2 belong to this reservation.
            unsafe { writer.write_slot(base + k, child) };
        }
    };

    let decisions: Vec<Decision> = match config.scheme {
        Scheme::Sbr => read
            .entries()
            .par_iter()
            .map(|region| {
                let decision = classify(&geom, config, *region);
                match decision {
                    // SAFETY: regions of one level are disjoint and this
                    // task is the only one processing `region`.
                    Decision::Fill(value) => unsafe { fill_task(&sink, *region, value) },
                    Decision::Leaf => unsafe { leaf_task(&sink, &geom, *region) },
                    Decision::Subdivide => insert_children(region),
                }
                decision
            })
            .collect(),
        Scheme::Mbr => {
            // Classification and insertion stay one task per region.
            let decisions: Vec<Decision> = read
                .entries()
                .par_iter()
                .map(|region| {
                    let decision = classify(&geom, config, *region);
                    if decision == Decision::Subdivide {
                        insert_children(region);
                    }
                    decision
                })
                .collect();
            // Pixel work is re-cut into tiles across all resolved regions.
            let tiles: Vec<(RegionOffset, Option<u32>)> = read
                .entries()
                .iter()
                .zip(&decisions)
                .flat_map(|(region, decision)| {
                    let value = match decision {
                        Decision::Fill(value) => Some(*value),
                        Decision::Leaf => None,
                        Decision::Subdivide => return Vec::new(),
                    };
                    scheme_dispatch(*region, Scheme::Mbr, config.tile)
                        .into_iter()
                        .map(|tile| (tile, value))
                        .collect()
                })
                .collect();
            tiles.par_iter().for_each(|(tile, value)| match value {
                // SAFETY: tiles of resolved regions are mutually disjoint
                // and each is processed by exactly one task.
                Some(value) => unsafe { fill_task(&sink, *tile, *value) },
                None => unsafe { leaf_task(&sink, &geom, *tile) },
            });
            decisions
        }
    };

    let mut stats = LevelStats {
        level,
        regions_in: read.len() as u64,
        ..LevelStats::default()
    };
    for (region, decision) in read.entries().iter().zip(&decisions) {
        stats.q_pixels += region.border_len();
        match decision {
            Decision::Fill(_) => {
                stats.filled += 1;
                stats.t_pixels += region.area();
            }
            Decision::Leaf => {
                stats.leaf_processed += 1;
                stats.a_pixels += region.area();
            }
            Decision::Subdivide => stats.subdivided += 1,
        }
    }

    let next = writer.finish();
    debug_assert_eq!(
        next.len() as u64,
        stats.subdivided * (config.r as u64).pow(2)
    );
    Ok((next, stats))
}

/// Renders the window by repeated [`process_level`] passes until no region
/// subdivides. Returns the grid and one stats record per pass.
pub fn ask_render(
    n: u32,
    viewport: &Viewport,
    d_max: u32,
    config: &AskConfig,
) -> Result<(DwellGrid, Vec<LevelStats>)> {
    config.validate(n)?;
    let mut grid = DwellGrid::new(n, *viewport, d_max)?;
    let pool = build_pool(config.workers)?;
    let mut all_stats = Vec::new();
    pool.install(|| -> Result<()> {
        let mut read = initial_grid(n, config.g)?;
        let mut level = 0;
        while !read.is_empty() {
            let (next, stats) = process_level(&read, &mut grid, config, level)?;
            all_stats.push(stats);
            read = next;
            level += 1;
        }
        Ok(())
    })?;
    Ok((grid, all_stats))
}
