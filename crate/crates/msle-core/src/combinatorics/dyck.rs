//! Dyck paths and the wedge operations used by the Kenyon–Wilson machinery.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A Dyck path of `2n` unit steps: heights `h(0..=2n)` with `h(0) = h(2n) = 0`,
/// `h(k) >= 0` and `|h(k) - h(k-1)| = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyckPath {
    heights: Vec<u32>,
}

impl DyckPath {
    pub fn new(heights: Vec<u32>) -> Result<Self> {
        if heights.len() % 2 != 1 {
            return Err(Error::InvalidPattern(format!(
                "Dyck path needs an odd number of heights, got {}",
                heights.len()
            )));
        }
        if *heights.first().unwrap() != 0 || *heights.last().unwrap() != 0 {
            return Err(Error::InvalidPattern(
                "Dyck path must start and end at height 0".into(),
            ));
        }
        for w in heights.windows(2) {
            if w[0].abs_diff(w[1]) != 1 {
                return Err(Error::InvalidPattern(format!(
                    "Dyck path steps must be +-1, got {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(Self { heights })
    }

    /// Number of links `n` (the path has `2n` steps).
    pub fn n(&self) -> usize {
        (self.heights.len() - 1) / 2
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    /// Height after `k` steps, `k in 0..=2n`.
    pub fn height(&self, k: usize) -> u32 {
        self.heights[k]
    }

    /// True if step `k` (from `k-1` to `k`) goes up, `k in 1..=2n`.
    pub fn is_up_step(&self, k: usize) -> bool {
        self.heights[k] > self.heights[k - 1]
    }

    /// Up-wedge at `j`: local maximum, i.e. an up-step into `j` followed by a down-step.
    pub fn has_up_wedge(&self, j: usize) -> bool {
        j >= 1 && j + 1 < self.heights.len() && self.is_up_step(j) && !self.is_up_step(j + 1)
    }

    /// Down-wedge at `j`: local minimum strictly inside the path.
    pub fn has_down_wedge(&self, j: usize) -> bool {
        j >= 1 && j + 1 < self.heights.len() && !self.is_up_step(j) && self.is_up_step(j + 1)
    }

    pub fn has_wedge(&self, j: usize) -> bool {
        self.has_up_wedge(j) || self.has_down_wedge(j)
    }

    /// Slope at `j`: neither a local max nor a local min.
    pub fn has_slope(&self, j: usize) -> bool {
        j >= 1 && j + 1 < self.heights.len() && !self.has_wedge(j)
    }

    /// Convert the down-wedge at `j` into an up-wedge (raise height at `j` by 2).
    pub fn lift(&self, j: usize) -> Result<Self> {
        if !self.has_down_wedge(j) {
            return Err(Error::WedgeAbsent { j, kind: "down" });
        }
        let mut heights = self.heights.clone();
        heights[j] += 2;
        Ok(Self { heights })
    }

    /// Remove the up-wedge at `j`, shortening the path by two steps.
    pub fn remove_up_wedge(&self, j: usize) -> Result<Self> {
        if !self.has_up_wedge(j) {
            return Err(Error::WedgeAbsent { j, kind: "up" });
        }
        self.remove_two_steps(j)
    }

    /// Remove the down-wedge at `j`, shortening the path by two steps.
    pub fn remove_down_wedge(&self, j: usize) -> Result<Self> {
        if !self.has_down_wedge(j) {
            return Err(Error::WedgeAbsent { j, kind: "down" });
        }
        self.remove_two_steps(j)
    }

    /// Remove whichever wedge sits at `j`.
    pub fn remove_wedge(&self, j: usize) -> Result<Self> {
        if !self.has_wedge(j) {
            return Err(Error::WedgeAbsent { j, kind: "any" });
        }
        self.remove_two_steps(j)
    }

    fn remove_two_steps(&self, j: usize) -> Result<Self> {
        // Drop the steps j and j+1; heights beyond keep their values.
        let mut heights = Vec::with_capacity(self.heights.len() - 2);
        heights.extend_from_slice(&self.heights[..j]);
        heights.extend_from_slice(&self.heights[j + 2..]);
        // The spliced heights differ by the removed wedge's net zero displacement,
        // so the result is again a valid Dyck path.
        Self::new(heights)
    }

    /// Pointwise partial order: `self(k) <= other(k)` for all `k`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        if self.heights.len() != other.heights.len() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(self
            .heights
            .iter()
            .zip(&other.heights)
            .all(|(a, b)| a <= b))
    }

    /// Number of atomic squares in the skew shape between `self` (lower) and `upper`.
    pub fn skew_area(&self, upper: &Self) -> Result<u32> {
        if !self.leq(upper)? {
            return Err(Error::InvalidPattern(
                "lower path is not pointwise below upper path".into(),
            ));
        }
        Ok(self
            .heights
            .iter()
            .zip(&upper.heights)
            .map(|(a, b)| (b - a) / 2)
            .sum())
    }

    /// All Dyck paths with `2n` steps, in descending lexicographic order on heights
    /// (rainbow first, fully unnested last). This is the crate-wide canonical order.
    pub fn enumerate(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut heights = vec![0u32; 2 * n + 1];
        fn rec(heights: &mut Vec<u32>, k: usize, out: &mut Vec<DyckPath>) {
            let len = heights.len();
            if k == len - 1 {
                if heights[k] == 0 {
                    out.push(DyckPath {
                        heights: heights.clone(),
                    });
                }
                return;
            }
            let h = heights[k];
            let remaining = (len - 1 - k - 1) as u32;
            // Up step first so the output comes out in descending lex order.
            if h + 1 <= remaining {
                heights[k + 1] = h + 1;
                rec(heights, k + 1, out);
            }
            if h > 0 && h - 1 <= remaining {
                heights[k + 1] = h - 1;
                rec(heights, k + 1, out);
            }
        }
        rec(&mut heights, 0, &mut out);
        out
    }
}
