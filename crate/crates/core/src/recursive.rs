//! Fork-join subdivision renderer.
//!
//! The comparison engine for the level-by-level renderer in [`crate::ask`]:
//! identical classification and stopping rule, but subdividing regions fork
//! one task per child instead of queueing children into a table for the
//! next pass. Dynamic nesting maps a tree of tasks onto the worker pool.
//!
//! Because both engines share the classification logic and pixel kernels,
//! their rendered grids are bit-identical on the same input; only the
//! scheduling differs. [`TreeStats::tasks_spawned`] counts region tasks,
//! which equals the total regions processed by the level engine.

use std::sync::atomic::{AtomicU32, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::ask::{classify, fill_task, leaf_task, scheme_dispatch, AskConfig, Decision, Scheme};
use crate::error::Result;
use crate::fractal::{DwellGrid, GridGeom, Viewport};
use crate::olt::initial_grid;
use crate::pool::build_pool;
use crate::region::RegionOffset;
use crate::sink::PixelSink;

/// Shape of the task tree a run produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TreeStats {
    /// Region tasks executed, including the initial grid's.
    pub tasks_spawned: u64,
    /// Deepest task level reached; initial regions sit at depth 1.
    pub max_depth: u32,
}

struct Ctx<'a> {
    geom: GridGeom,
    config: AskConfig,
    sink: PixelSink<'a>,
    tasks: AtomicU64,
    depth: AtomicU32,
}

fn region_task<'a>(scope: &rayon::Scope<'a>, ctx: &'a Ctx<'a>, region: RegionOffset, depth: u32) {
    ctx.tasks.fetch_add(1, Ordering::Relaxed);
    ctx.depth.fetch_max(depth, Ordering::Relaxed);
    let value = match classify(&ctx.geom, &ctx.config, region) {
        Decision::Subdivide => {
            for child in region.children(ctx.config.r) {
                scope.spawn(move |scope| region_task(scope, ctx, child, depth + 1));
            }
            return;
        }
        Decision::Fill(value) => Some(value),
        Decision::Leaf => None,
    };
    match ctx.config.scheme {
        // SAFETY: region tasks cover disjoint regions, and a resolved
        // region is touched only by the task that resolved it.
        Scheme::Sbr => match value {
            Some(value) => unsafe { fill_task(&ctx.sink, region, value) },
            None => unsafe { leaf_task(&ctx.sink, &ctx.geom, region) },
        },
        Scheme::Mbr => {
            scheme_dispatch(region, Scheme::Mbr, ctx.config.tile)
                .par_iter()
                .for_each(|tile| match value {
                    // SAFETY: tiles partition this task's region.
                    Some(value) => unsafe { fill_task(&ctx.sink, *tile, value) },
                    None => unsafe { leaf_task(&ctx.sink, &ctx.geom, *tile) },
                });
        }
    }
}

/// Renders the window with the fork-join engine.
pub fn recursive_render(
    n: u32,
    viewport: &Viewport,
    d_max: u32,
    config: &AskConfig,
) -> Result<(DwellGrid, TreeStats)> {
    config.validate(n)?;
    let mut grid = DwellGrid::new(n, *viewport, d_max)?;
    let pool = build_pool(config.workers)?;
    let root = initial_grid(n, config.g)?;
    let stats = pool.install(|| {
        let ctx = Ctx {
            geom: grid.geom(),
            config: *config,
            sink: PixelSink::new(grid.cells_mut(), n as usize),
            tasks: AtomicU64::new(0),
            depth: AtomicU32::new(0),
        };
        rayon::scope(|scope| {
            for region in root.entries() {
                let region = *region;
                let ctx = &ctx;
                scope.spawn(move |scope| region_task(scope, ctx, region, 1));
            }
        });
        TreeStats {
            tasks_spawned: ctx.tasks.into_inner(),
            max_depth: ctx.depth.into_inner(),
        }
    });
    Ok((grid, stats))
}
