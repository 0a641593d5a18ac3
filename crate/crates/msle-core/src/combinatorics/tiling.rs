//! Cover-inclusive Dyck tilings of skew shapes between two Dyck paths.
//!
//! Exhaustive enumeration, intended as a small-N cross-check for the signed
//! entries of the inverse incidence matrix.

use super::dyck::DyckPath;
use crate::error::{Error, Result};

/// Default cap on the number of atomic squares in an enumerated shape.
pub const DEFAULT_AREA_CAP: usize = 64;

/// The region between two comparable Dyck paths, `lower` pointwise below
/// `upper`. Atomic squares are diamonds centered at `(k, m)` with
/// `k in 1..2N-1` and `m = lower(k)+1, lower(k)+3, ..., upper(k)-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewShape {
    lower: DyckPath,
    upper: DyckPath,
    area: usize,
}

impl SkewShape {
    pub fn new(lower: DyckPath, upper: DyckPath) -> Result<Self> {
        let area = lower.skew_area(&upper)? as usize;
        Ok(Self { lower, upper, area })
    }

    pub fn lower(&self) -> &DyckPath {
        &self.lower
    }

    pub fn upper(&self) -> &DyckPath {
        &self.upper
    }

    /// Number of atomic squares `|alpha / beta|`.
    pub fn area(&self) -> usize {
        self.area
    }

    fn contains_cell(&self, k: usize, m: i64) -> bool {
        if k == 0 || k >= 2 * self.lower.n() {
            return false;
        }
        let lo = self.lower.height(k) as i64;
        let hi = self.upper.height(k) as i64;
        m > lo && m < hi && (m - lo) % 2 == 1
    }

    /// Cells in column-major order: by column, bottom to top.
    fn cells(&self) -> Vec<(usize, i64)> {
        let mut out = Vec::with_capacity(self.area);
        for k in 1..2 * self.lower.n() {
            let lo = self.lower.height(k) as i64;
            let hi = self.upper.height(k) as i64;
            let mut m = lo + 1;
            while m < hi {
                out.push((k, m));
                m += 2;
            }
        }
        out
    }
}

/// A Dyck tile: one atomic square per column over a contiguous column range,
/// center heights forming a shifted Dyck path (start = end = minimum).
#[derive(Debug, Clone)]
struct Tile {
    start: usize,
    heights: Vec<i64>,
}

impl Tile {
    fn end(&self) -> usize {
        self.start + self.heights.len() - 1
    }

    fn height_at(&self, k: usize) -> i64 {
        self.heights[k - self.start]
    }
}

/// Two tiles may coexist in a cover-inclusive tiling iff their horizontal
/// extents are disjoint, or the upper one's extent sits inside the lower's.
fn compatible(t1: &Tile, t2: &Tile) -> bool {
    let lo = t1.start.max(t2.start);
    let hi = t1.end().min(t2.end());
    if lo > hi {
        return true;
    }
    // Tiles are disjoint, so over the shared columns one sits strictly above.
    let (above, below) = if t1.height_at(lo) > t2.height_at(lo) {
        (t1, t2)
    } else {
        (t2, t1)
    };
    below.start <= above.start && above.end() <= below.end()
}

/// Count the cover-inclusive Dyck tilings of `shape` by exhaustive search.
/// The empty shape counts one (the empty tiling).
pub fn count_cover_inclusive_tilings(shape: &SkewShape) -> Result<u64> {
    count_with_cap(shape, DEFAULT_AREA_CAP)
}

pub fn count_with_cap(shape: &SkewShape, area_cap: usize) -> Result<u64> {
    if shape.area() > area_cap {
        return Err(Error::CapacityExceeded {
            what: "skew shape area",
            value: shape.area(),
            cap: area_cap,
        });
    }
    let cells = shape.cells();
    let mut filled = vec![false; cells.len()];
    let mut placed: Vec<Tile> = Vec::new();
    let cell_index = |k: usize, m: i64| cells.iter().position(|&c| c == (k, m));
    let mut count = 0u64;
    search(
        shape,
        &cells,
        &cell_index,
        &mut filled,
        &mut placed,
        &mut count,
    );
    Ok(count)
}

fn search(
    shape: &SkewShape,
    cells: &[(usize, i64)],
    cell_index: &dyn Fn(usize, i64) -> Option<usize>,
    filled: &mut Vec<bool>,
    placed: &mut Vec<Tile>,
    count: &mut u64,
) {
    let Some(first) = filled.iter().position(|&f| !f) else {
        *count += 1;
        return;
    };
    let (k0, m0) = cells[first];
    // The tile covering the first free cell must have its bottom-left there:
    // columns to the left are full and lower cells in this column are full.
    // Grow the ridge rightward; every return to the base height m0 closes a
    // candidate tile.
    let mut heights = vec![m0];
    grow(
        shape, cells, cell_index, filled, placed, count, k0, m0, &mut heights,
    );
}

#[allow(clippy::too_many_arguments)]
fn grow(
    shape: &SkewShape,
    cells: &[(usize, i64)],
    cell_index: &dyn Fn(usize, i64) -> Option<usize>,
    filled: &mut Vec<bool>,
    placed: &mut Vec<Tile>,
    count: &mut u64,
    k0: usize,
    m0: i64,
    heights: &mut Vec<i64>,
) {
    let last = *heights.last().unwrap();
    if last == m0 {
        let tile = Tile {
            start: k0,
            heights: heights.clone(),
        };
        if placed.iter().all(|t| compatible(t, &tile)) {
            let idxs: Vec<usize> = (0..heights.len())
                .map(|i| cell_index(k0 + i, heights[i]).unwrap())
                .collect();
            for &i in &idxs {
                filled[i] = true;
            }
            placed.push(tile);
            search(shape, cells, cell_index, filled, placed, count);
            placed.pop();
            for &i in &idxs {
                filled[i] = false;
            }
        }
    }
    // Extend by one column, stepping the ridge up or down (never below base).
    let k = k0 + heights.len();
    for step in [1i64, -1] {
        let m = last + step;
        if m < m0 || !shape.contains_cell(k, m) {
            continue;
        }
        if let Some(i) = cell_index(k, m) {
            if !filled[i] {
                heights.push(m);
                grow(
                    shape, cells, cell_index, filled, placed, count, k0, m0, heights,
                );
                heights.pop();
            }
        }
    }
}
