//! Offset lookup tables: compact per-level region lists.
//!
//! The level-by-level engine keeps two tables: a read table listing every
//! region of the current level, and a write table the level's tasks insert
//! children into. Insertion must stay compact without any ordering between
//! tasks, so the write table hands out slots through a single shared
//! counter: each subdividing region atomically advances the counter by one
//! and owns the `r^2` consecutive slots starting at the pre-advance value
//! times `r^2`. After the level, the counter holds the number of regions
//! that subdivided and the written prefix is exactly `count * r^2` slots,
//! gap-free, with only its internal order depending on scheduling.

use std::cell::UnsafeCell;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::region::RegionOffset;

/// Compact list of the regions of one level.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Olt {
    entries: Vec<RegionOffset>,
}

impl Olt {
    pub fn from_entries(entries: Vec<RegionOffset>) -> Self {
        Olt { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[RegionOffset] {
        &self.entries
    }

    /// The side all entries share, or an error on the first disagreement.
    /// Empty tables have no side.
    pub fn uniform_side(&self) -> Result<Option<u32>> {
        let Some(first) = self.entries.first() else {
            return Ok(None);
        };
        for e in &self.entries {
            if e.side != first.side {
                return Err(Error::MixedSides {
                    expected: first.side,
                    found: e.side,
                });
            }
        }
        Ok(Some(first.side))
    }
}

/// The `g x g` level-0 table: regions of side `n / g`, row-major.
pub fn initial_grid(n: u32, g: u32) -> Result<Olt> {
    for (name, value) in [("n", n), ("g", g)] {
        if value == 0 || !value.is_power_of_two() {
            return Err(Error::PowerOfTwo {
                name,
                value: value as u64,
            });
        }
    }
    if g > n {
        return Err(Error::GridExceedsDomain {
            got: g as u64,
            n: n as u64,
        });
    }
    let side = n / g;
    let mut entries = Vec::with_capacity(g as usize * g as usize);
    for gy in 0..g {
        for gx in 0..g {
            entries.push(RegionOffset::new(gx * side, gy * side, side));
        }
    }
    Ok(Olt::from_entries(entries))
}

/// Concurrent writer filling the next level's table.
///
/// Pre-sized for the worst case of every parent subdividing:
/// `parents * r^2` slots. Each subdividing parent calls [`reserve_slots`]
/// once and writes its `r^2` children into the returned block.
///
/// [`reserve_slots`]: OltWriter::reserve_slots
pub struct OltWriter {
    slots: Box<[UnsafeCell<RegionOffset>]>,
    reserved: AtomicUsize,
    child_slots: usize,
}

// SAFETY: slot blocks come from a fetch_add counter, so distinct
// reservations never overlap and each block is written only by its owner.
unsafe impl Sync for OltWriter {}
unsafe impl Send for OltWriter {}

impl OltWriter {
    /// A writer with capacity for `parents` reservations of `r * r` slots.
    pub fn new(parents: usize, r: u32) -> Self {
        let child_slots = (r as usize) * (r as usize);
        let slots = (0..parents * child_slots)
            .map(|_| UnsafeCell::new(RegionOffset::default()))
            .collect();
        OltWriter {
            slots,
            reserved: AtomicUsize::new(0),
            child_slots,
        }
    }

    /// Total slots available.
    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    /// Reservations made so far; after a level pass, the number of regions
    /// that subdivided.
    pub fn reserved(&self) -> usize {
        self.reserved.load(Ordering::Relaxed)
    }

    /// Atomically claims the next block of `r^2` slots and returns its base
    /// index: the pre-advance counter value scaled by the block size.
    ///
    /// Panics if the pre-sized capacity is exceeded; that is a caller bug,
    /// since at most one reservation per parent is ever legal.
    pub fn reserve_slots(&self) -> usize {
        let prev = self.reserved.fetch_add(1, Ordering::Relaxed);
        let base = prev * self.child_slots;
        assert!(
            base + self.child_slots <= self.slots.len(),
            "write table capacity exceeded: reservation {prev} with {} slots of {}",
            self.child_slots,
            self.slots.len(),
        );
        base
    }

    /// Writes one slot of a reserved block.
    ///
    /// # Safety
    /// `slot` must lie inside a block the calling task reserved, and no slot
    /// may be written twice.
    pub unsafe fn write_slot(&self, slot: usize, region: RegionOffset) {
        debug_assert!(slot < self.slots.len());
        // SAFETY: reservation blocks are disjoint and owned by their task.
        unsafe { *self.slots[slot].get() = region }
    }

    /// Finishes the level: the compact prefix of all reserved blocks.
    pub fn finish(self) -> Olt {
        let len = self.reserved() * self.child_slots;
        let entries = self
            .slots
            .into_vec()
            .into_iter()
            .take(len)
            .map(UnsafeCell::into_inner)
            .collect();
        Olt::from_entries(entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rayon::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn initial_grid_tiles_the_domain_row_major() {
        let olt = initial_grid(16, 4).unwrap();
        assert_eq!(olt.len(), 16);
        assert_eq!(olt.uniform_side().unwrap(), Some(4));
        assert_eq!(olt.entries()[0], RegionOffset::new(0, 0, 4));
        assert_eq!(olt.entries()[1], RegionOffset::new(4, 0, 4));
        assert_eq!(olt.entries()[4], RegionOffset::new(0, 4, 4));
        let mut covered = HashSet::new();
        for e in olt.entries() {
            for p in e.pixels() {
                assert!(covered.insert(p), "pixel {p:?} covered twice");
            }
        }
        assert_eq!(covered.len(), 256, "regions must cover all of 16 x 16");
    }

    #[test]
    fn initial_grid_of_one_region_is_the_whole_domain() {
        let olt = initial_grid(64, 1).unwrap();
        assert_eq!(olt.entries(), &[RegionOffset::new(0, 0, 64)]);
    }

    #[test]
    fn initial_grid_rejects_bad_inputs() {
        assert!(initial_grid(48, 4).is_err(), "n must be a power of two");
        assert!(initial_grid(16, 3).is_err(), "g must be a power of two");
        assert!(initial_grid(16, 32).is_err(), "g must not exceed n");
        assert!(initial_grid(16, 0).is_err());
    }

    #[test]
    fn uniform_side_flags_mixed_levels() {
        let olt = Olt::from_entries(vec![RegionOffset::new(0, 0, 4), RegionOffset::new(4, 0, 8)]);
        assert_eq!(
            olt.uniform_side().unwrap_err(),
            Error::MixedSides {
                expected: 4,
                found: 8
            }
        );
        assert_eq!(Olt::default().uniform_side().unwrap(), None);
    }

    #[test]
    fn reservations_are_consecutive_blocks() {
        let writer = OltWriter::new(8, 2);
        assert_eq!(writer.capacity(), 32);
        assert_eq!(writer.reserve_slots(), 0);
        assert_eq!(writer.reserve_slots(), 4);
        assert_eq!(writer.reserve_slots(), 8);
        assert_eq!(writer.reserved(), 3);
    }

    #[test]
    #[should_panic(expected = "capacity exceeded")]
    fn over_reservation_panics() {
        let writer = OltWriter::new(1, 2);
        writer.reserve_slots();
        writer.reserve_slots();
    }

    #[test]
    fn concurrent_reservations_stay_compact() {
        // Stress the counter: many tasks race to reserve and write blocks;
        // afterwards the occupied prefix must be exactly the union of all
        // blocks with no gaps and no overlaps, whatever the interleaving.
        for round in 0..20 {
            let parents = 97 + round; // not a multiple of anything convenient
            let r = 2u32;
            let writer = OltWriter::new(parents, r);
            (0..parents as u32).into_par_iter().for_each(|parent| {
                let base = writer.reserve_slots();
                for k in 0..(r * r) as usize {
                    // Tag each slot with its writer so coverage is checkable.
                    // SAFETY: slots base..base+4 belong to this reservation.
                    unsafe {
                        writer.write_slot(base + k, RegionOffset::new(parent, k as u32, 1));
                    }
                }
            });
            assert_eq!(writer.reserved(), parents);
            let olt = writer.finish();
            assert_eq!(olt.len(), parents * 4, "compact prefix of count * r^2");
            let mut seen = HashSet::new();
            for e in olt.entries() {
                assert!(e.side == 1, "placeholder leaked into the prefix");
                assert!(seen.insert((e.x, e.y)), "slot written twice: {e:?}");
            }
            assert_eq!(seen.len(), parents * 4);
        }
    }

    #[test]
    fn finish_drops_unreserved_capacity() {
        let writer = OltWriter::new(4, 4);
        let base = writer.reserve_slots();
        for k in 0..16 {
            unsafe { writer.write_slot(base + k, RegionOffset::new(k as u32, 0, 2)) };
        }
        let olt = writer.finish();
        assert_eq!(olt.len(), 16, "one reservation of r^2 = 16 slots");
        assert!(olt.entries().iter().all(|e| e.side == 2));
    }
}
