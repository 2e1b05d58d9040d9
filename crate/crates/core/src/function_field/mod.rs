//! Polynomial analogues over `F_q[T]`: irreducibles, unit groups modulo `M`,
//! their characters and L-polynomials, and the degree-indexed bias series.

mod bias;
mod irreducible;
mod lpoly;
mod poly;
mod units;

pub use bias::{ff_bias_series, ff_central_values, ff_euler_product, CENTRAL_CHECK_BUDGET};
pub use irreducible::{enumerate_irreducibles, factor_poly, irreducible_count, Irreducibles, ENUMERATION_BUDGET};
pub use lpoly::{class_histogram, coefficient_counts, l_polynomial, LPolynomial};
pub use poly::{PolyFq, MAX_FIELD};
pub use units::{unit_class_table, FfCharacter, UnitClassTable, RESIDUE_BUDGET, UNIT_BUDGET};
