//! Weighted prime sums sampled on checkpoint grids, their residuals against
//! `C·log log x` predictions, slope fits and density reports.

mod accumulate;
mod classify;
mod compensated;
mod series;

pub use accumulate::{
    accumulate_series, mertens_residual, run_sieved, AccumulatorState, BankSnapshot, CheckpointBank, PrimeRace,
    SeriesAccumulator, SeriesConsumer, ALL_COLUMN, EXCLUDED_COLUMN,
};
pub use classify::{AllPrimes, PrimeClassifier, ResidueClassifier};
pub use compensated::{Compensated, Weight, WeightedSum};
pub use series::{
    column_range, density_report, fit_loglog_slope, fit_slope, prediction_column, residual_column, residual_series,
    CheckpointSeries, Column, DensityReport, LabelInfo, LinearCombo, Scale, LOGLOG_MIN_X, MIN_FIT_POINTS,
};
