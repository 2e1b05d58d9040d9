//! Coefficients of the discriminant modular form and the prime sums of its
//! normalized coefficients.

mod bias;
mod cache;
mod expansion;

pub use bias::{tau_bias_series, TauBias, SYM2_COLUMN, TAU_COLUMN};
pub use cache::{decode_cache, encode_cache, load_or_compute, read_cache, write_cache, CACHE_MAGIC};
pub use expansion::{delta_coefficients, DeltaExpansion, MAX_ORDER, PENTAGONAL_MAX_ORDER};
