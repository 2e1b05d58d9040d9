//! Quadratic fields: Kronecker splitting, reduced binary quadratic forms of
//! negative discriminant and the bias series built on them.

mod bias;
mod forms;
mod kronecker;

pub use bias::{genus_central_values, principal_bias_series, splitting_bias_series, PrincipalBias, SplittingBias};
pub use forms::{class_group, prime_ideal_classes, reduce_form, BinaryQuadraticForm, ClassGroup};
pub use kronecker::{kronecker, splitting_type, FundamentalDiscriminant, SplittingClassifier, SplittingType};
