//! Shared-write access to a dwell grid for tasks owning disjoint pixels.

use std::cell::UnsafeCell;

/// View of a grid's cells that many tasks may write through concurrently,
/// provided no two tasks ever touch the same pixel.
///
/// The subdivision engines satisfy that by construction: the regions of one
/// level partition the domain, tiles partition their region, and a region is
/// written by exactly one decision (fill, leaf evaluation, or neither when
/// it subdivides and its children take over).
pub(crate) struct PixelSink<'a> {
    cells: &'a [UnsafeCell<u32>],
    n: usize,
}

// SAFETY: writers uphold the disjoint-pixel contract documented above, so no
// cell is ever written by two threads and no cell is read while written.
unsafe impl Sync for PixelSink<'_> {}
unsafe impl Send for PixelSink<'_> {}

impl<'a> PixelSink<'a> {
    pub fn new(cells: &'a mut [u32], n: usize) -> Self {
        assert_eq!(cells.len(), n * n, "cell buffer must be n x n");
        // SAFETY: UnsafeCell<u32> has the same layout as u32, and the
        // exclusive borrow hands this view sole access for its lifetime.
        let cells = unsafe { &*(cells as *mut [u32] as *const [UnsafeCell<u32>]) };
        PixelSink { cells, n }
    }

    /// Writes one pixel.
    ///
    /// # Safety
    /// The caller must be the only task writing pixel `(x, y)` while this
    /// sink exists, and the pixel must be in bounds.
    pub unsafe fn write(&self, x: u32, y: u32, value: u32) {
        let idx = y as usize * self.n + x as usize;
        debug_assert!(idx < self.cells.len());
        // SAFETY: bounds and exclusivity guaranteed by the caller.
        unsafe { *self.cells[idx].get() = value }
    }
}
