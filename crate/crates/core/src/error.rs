//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by parameter validation, geometry checks, and sweeps.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be a power of two, got {value}")]
    PowerOfTwo { name: &'static str, value: u64 },

    #[error("{name} must be at least {min}, got {value}")]
    TooSmall {
        name: &'static str,
        min: u64,
        value: u64,
    },

    #[error("initial regions exceed the domain: g*B = {got} > n = {n}")]
    GridExceedsDomain { got: u64, n: u64 },

    #[error("{name} must be a probability in [0, 1], got {value}")]
    Probability { name: &'static str, value: f64 },

    #[error("{name} must be finite and at least {min}, got {value}")]
    FloatTooSmall {
        name: &'static str,
        min: f64,
        value: f64,
    },

    #[error("probability profile has {got} levels but depth tau = {tau} requires {want}")]
    ProfileLength { got: usize, tau: u32, want: usize },

    #[error(
        "domain n = {n} is not tileable by g = {g}, r = {r}, B = {b}: \
         need n = g*B*r^k for some integer k >= 0, or n/g <= B"
    )]
    BadTiling { n: u64, g: u64, r: u64, b: u64 },

    #[error("viewport must have re_min < re_max and im_min < im_max")]
    BadViewport,

    #[error("region side must be at least 1")]
    EmptyRegion,

    #[error("region (x = {x}, y = {y}, side = {side}) does not fit a {n}x{n} grid")]
    RegionOutOfBounds { x: u32, y: u32, side: u32, n: u32 },

    #[error("mixed region sides in one level: expected {expected}, found {found}")]
    MixedSides { expected: u32, found: u32 },

    #[error("fill value {value} outside dwell range [1, {d_max}]")]
    DwellRange { value: u32, d_max: u32 },

    #[error("coordinate {value} out of range on axis {axis} with extent {extent}")]
    CoordOutOfRange {
        axis: usize,
        value: u64,
        extent: u64,
    },

    #[error("scalar {value} out of range for a grid of {cells} cells")]
    ScalarOutOfRange { value: u64, cells: u64 },

    #[error("dimension list must be non-empty with every extent at least 1")]
    BadDims,

    #[error("point has {got} coordinates but the grid has {want} axes")]
    RankMismatch { got: usize, want: usize },

    #[error("{what} overflows 64 bits")]
    Overflow { what: &'static str },

    #[error("sweep produced no feasible parameter combination")]
    NoFeasiblePoint,

    #[error("objective {objective} is not available for {engine} sweeps")]
    UnsupportedObjective {
        objective: &'static str,
        engine: &'static str,
    },

    #[error("grids differ in size: {a} cells vs {b} cells")]
    SizeMismatch { a: usize, b: usize },

    #[error("could not build worker pool: {0}")]
    WorkerPool(String),
}

pub type Result<T> = std::result::Result<T, Error>;
