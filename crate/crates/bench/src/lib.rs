//! Inputs shared by the benchmarks.

use chebias_core::{make_grid, CheckpointGrid};

/// Geometric grid from 100 to `limit` at ratio 1.1.
pub fn grid_to(limit: u64) -> CheckpointGrid {
    make_grid(100, limit, 1.1).expect("valid grid")
}

#[cfg(test)]
mod tests {
    #[test]
    fn grid_reaches_limit() {
        assert_eq!(super::grid_to(10_000).x_max, 10_000);
    }
}
