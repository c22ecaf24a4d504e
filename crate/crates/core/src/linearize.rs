//! Canonical flattening of k-dimensional grid coordinates.
//!
//! A point `p` in a grid with per-axis extents `|G|_0, ..., |G|_{k-1}` maps
//! to the scalar
//!
//! ```text
//! s = sum_d p_d * prod_{q < d} |G|_q
//! ```
//!
//! with the empty product equal to 1, so axis 0 varies fastest. For k = 2
//! this is the familiar `p_x + |G|_x * p_y`, and for k = 3 it adds
//! `|G|_y * |G|_x * p_z`. The mapping is a bijection onto
//! `[0, prod_d |G|_d)`; [`canonical_inverse`] recovers the point by repeated
//! division.

use crate::error::{Error, Result};

/// Per-axis extents of a k-dimensional grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridDims(Vec<u64>);

impl GridDims {
    /// Validates a non-empty list of extents, each at least 1.
    pub fn new(extents: Vec<u64>) -> Result<Self> {
        if extents.is_empty() || extents.contains(&0) {
            return Err(Error::BadDims);
        }
        Ok(GridDims(extents))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn extents(&self) -> &[u64] {
        &self.0
    }

    /// Total cell count `prod_d |G|_d`.
    pub fn cells(&self) -> Result<u64> {
        let mut total: u64 = 1;
        for &e in &self.0 {
            total = total
                .checked_mul(e)
                .ok_or(Error::Overflow { what: "grid cells" })?;
        }
        Ok(total)
    }
}

/// Flattens a point to its canonical scalar, axis 0 fastest.
pub fn canonical_index(point: &[u64], dims: &GridDims) -> Result<u64> {
    if point.len() != dims.rank() {
        return Err(Error::RankMismatch {
            got: point.len(),
            want: dims.rank(),
        });
    }
    let mut scalar: u64 = 0;
    let mut stride: u64 = 1;
    for (axis, (&coord, &extent)) in point.iter().zip(dims.extents()).enumerate() {
        if coord >= extent {
            return Err(Error::CoordOutOfRange {
                axis,
                value: coord,
                extent,
            });
        }
        let term = coord
            .checked_mul(stride)
            .ok_or(Error::Overflow { what: "index term" })?;
        scalar = scalar.checked_add(term).ok_or(Error::Overflow {
            what: "scalar index",
        })?;
        stride = stride.checked_mul(extent).ok_or(Error::Overflow {
            what: "axis stride",
        })?;
    }
    Ok(scalar)
}

/// Recovers the point a scalar came from; inverse of [`canonical_index`].
pub fn canonical_inverse(scalar: u64, dims: &GridDims) -> Result<Vec<u64>> {
    let cells = dims.cells()?;
    if scalar >= cells {
        return Err(Error::ScalarOutOfRange {
            value: scalar,
            cells,
        });
    }
    let mut rest = scalar;
    let mut point = Vec::with_capacity(dims.rank());
    for &extent in dims.extents() {
        point.push(rest % extent);
        rest /= extent;
    }
    Ok(point)
}

/// Slots needed by a write table after `count` reservations of one
/// `r_0 x ... x r_{k-1}` child block each.
pub fn olt_size_k(count: u64, r_per_axis: &[u64]) -> Result<u64> {
    if r_per_axis.is_empty() || r_per_axis.contains(&0) {
        return Err(Error::BadDims);
    }
    let mut slots = count;
    for &r in r_per_axis {
        slots = slots
            .checked_mul(r)
            .ok_or(Error::Overflow { what: "slot count" })?;
    }
    Ok(slots)
}
