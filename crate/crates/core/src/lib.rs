//! Cost model and renderers for adaptive subdivision of self-similar-density
//! workloads.
//!
//! A self-similar-density workload assigns every cell of an `n x n` domain a
//! cost, and regions of uniform cost can be resolved wholesale once their
//! boundary proves uniform. The canonical instance here is Mandelbrot dwell
//! rendering: a region whose perimeter shares one dwell is filled with that
//! dwell instead of being evaluated per pixel.
//!
//! The crate has two halves that validate each other:
//!
//! * an analytic cost model ([`cost_model`]) that predicts work and wall time
//!   for exhaustive evaluation versus probabilistic subdivision, plus a
//!   Monte Carlo simulator ([`sim`]) of the same subdivision process, and
//! * two executable renderers over the same decision rules: a level-by-level
//!   engine driven by compact offset lookup tables ([`ask`]) and a recursive
//!   fork-join engine ([`recursive`]), both checked against the exhaustive
//!   renderer in [`fractal`].
//!
//! [`optimizer`] sweeps subdivision parameters against either the model or
//! wall-clock measurements, and [`linearize`] provides the canonical
//! flattening used to address k-dimensional region grids.

#![forbid(unsafe_op_in_unsafe_fn)]

pub mod ask;
pub mod cost_model;
pub mod error;
pub mod fractal;
pub mod linearize;
pub mod olt;
pub mod optimizer;
pub mod params;
pub mod recursive;
pub mod region;
pub mod sim;

mod pool;
mod sink;

pub use ask::{ask_render, process_level, scheme_dispatch, AskConfig, LevelStats, Scheme};
pub use cost_model::{
    depth_tau, exhaustive_time, exhaustive_work, general_subdivision_work, mbr_time, report,
    sbr_time, speedups, ssd_work, work_reduction_factor, CostReport, WorkBreakdown,
};
pub use error::{Error, Result};
pub use fractal::{
    dwell, exhaustive_render, perimeter_common_dwell, pixel_to_complex, DwellGrid, GridGeom,
    Viewport,
};
pub use linearize::{canonical_index, canonical_inverse, olt_size_k, GridDims};
pub use olt::{initial_grid, Olt, OltWriter};
pub use optimizer::{
    grid_search_empirical, grid_search_model, time_runs, EmpiricalSweep, Engine, FixedParams,
    LandscapePoint, Objective, SweepSpec,
};
pub use params::{ModelParams, ProbProfile};
pub use recursive::{recursive_render, TreeStats};
pub use region::RegionOffset;
pub use sim::{simulate_subdivision_work, SimStats};
