//! Geometric checkpoint grids.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Sorted checkpoints at which running sums are sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointGrid {
    pub x_min: u64,
    pub x_max: u64,
    /// Nominal ratio between consecutive points.
    pub ratio: f64,
    pub points: Vec<u64>,
}

/// Geometric grid `x_min, x_min*ratio, ...` rounded to integers and closed
/// with `x_max`.
pub fn make_grid(x_min: u64, x_max: u64, ratio: f64) -> Result<CheckpointGrid> {
    if x_min < 2 {
        return invalid(format!("grid start {x_min} below 2"));
    }
    if x_min >= x_max {
        return invalid(format!("grid needs x_min < x_max, got [{x_min}, {x_max}]"));
    }
    if !(ratio.is_finite() && ratio > 1.0) {
        return invalid(format!("grid ratio must exceed 1, got {ratio}"));
    }
    let mut points = vec![x_min];
    let start = x_min as f64;
    let mut k = 1i32;
    loop {
        let next = (start * ratio.powi(k)).round();
        k += 1;
        if next >= x_max as f64 {
            break;
        }
        let next = next as u64;
        if next > *points.last().unwrap() {
            points.push(next);
        }
    }
    points.push(x_max);
    Ok(CheckpointGrid {
        x_min,
        x_max,
        ratio,
        points,
    })
}

impl CheckpointGrid {
    /// Grid from explicit strictly increasing points.
    pub fn from_points(points: Vec<u64>) -> Result<Self> {
        if points.is_empty() {
            return invalid("grid needs at least one point");
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("grid points must be strictly increasing");
        }
        let ratio = points
            .windows(2)
            .filter(|w| w[0] > 0)
            .map(|w| w[1] as f64 / w[0] as f64)
            .fold(1.0, f64::max);
        Ok(CheckpointGrid {
            x_min: points[0],
            x_max: *points.last().unwrap(),
            ratio,
            points,
        })
    }

    /// Degrees `first..=last`, used by the function-field experiments.
    pub fn degrees(first: u64, last: u64) -> Result<Self> {
        if first > last {
            return invalid(format!("empty degree range {first}..={last}"));
        }
        Self::from_points((first..=last).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decades() {
        assert_eq!(make_grid(10, 1000, 10.0).unwrap().points, vec![10, 100, 1000]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(make_grid(2, 2, 1.5).is_err());
        assert!(make_grid(10, 100, 1.0).is_err());
        assert!(make_grid(10, 100, 0.5).is_err());
        assert!(make_grid(1, 100, 2.0).is_err());
        assert!(CheckpointGrid::from_points(vec![3, 3]).is_err());
    }

    #[test]
    fn large_grid_ends_at_max() {
        let g = make_grid(1_000, 1_000_000_000, 1.05).unwrap();
        assert_eq!(*g.points.last().unwrap(), 1_000_000_000);
        assert!(g.points.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g, make_grid(1_000, 1_000_000_000, 1.05).unwrap());
    }

    proptest! {
        #[test]
        fn grid_invariants(x_min in 2u64..10_000, span in 1u64..1_000_000, ratio in 1.001f64..20.0) {
            let x_max = x_min + span;
            let g = make_grid(x_min, x_max, ratio).unwrap();
            prop_assert_eq!(g.points[0], x_min);
            prop_assert_eq!(*g.points.last().unwrap(), x_max);
            for w in g.points.windows(2) {
                prop_assert!(w[0] < w[1]);
                // rounding both ends moves a step by at most half a unit each
                prop_assert!(w[1] as f64 <= w[0] as f64 * ratio + (ratio + 1.0) / 2.0);
            }
        }
    }
}
