//! Computational toolkit for Chebyshev-type prime biases.
//!
//! Primes are streamed from a segmented sieve into compensated accumulators
//! that sample weighted sums `Σ N(p)^{-s}` per class on a geometric grid.
//! Predicted slopes come from character theory (Dirichlet characters,
//! quadratic forms, residue classes of `F_q[T]`), and central values of the
//! relevant L-functions are computed to check the nonvanishing they rely on.

pub mod arith;
pub mod dirichlet;
pub mod error;
pub mod function_field;
pub mod grid;
pub mod quadratic;
pub mod sieve;
pub mod summation;
pub mod tau;

pub use error::{Error, Result};
pub use function_field::{ff_bias_series, ff_euler_product, PolyFq};
pub use grid::{make_grid, CheckpointGrid};
pub use sieve::{drive, primes_up_to, sieve_segment, stream_primes, PrimeConsumer, SegmentBitmap, SieveConfig};
pub use summation::{
    accumulate_series, density_report, fit_loglog_slope, residual_series, CheckpointSeries, LinearCombo,
    PrimeClassifier, Scale, WeightedSum,
};
pub use tau::{delta_coefficients, DeltaExpansion};
