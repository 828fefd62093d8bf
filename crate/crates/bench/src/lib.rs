//! Fixtures shared by the benchmarks.

pub use tricomi::nonlinear::{compact_bump, SimulationConfig};
pub use tricomi::{Field, GridSpec};

/// A square grid of `points` per axis on `[−16, 16)²`.
pub fn plane(points: usize) -> GridSpec {
    GridSpec::new(2, 16.0, points).expect("valid grid")
}

/// Smooth compactly supported data of radius 2.
pub fn bump(grid: GridSpec) -> Field {
    compact_bump(grid, 2.0)
}
