//! Dirichlet characters, central L-values and the bias slopes they predict.

mod character;
mod euler;
mod group;
mod lvalue;
mod slope;

pub use character::{characters, characters_trivial_on, root_of_unity, DirichletCharacter};
pub use euler::{drh_residual, partial_euler_product, EulerProductAccumulator, MAX_LOG_POWER};
pub use group::{is_quadratic_residue, t_of_q, unit_group, UnitGroupStructure, MAX_MODULUS};
pub use lvalue::{central_values, hurwitz_zeta, l_half, l_half_value, CENTRAL_ZERO_TOL};
pub use slope::{predict_class_slope, predict_pair_slope, CosetBias, CyclotomicBias, SlopePrediction};
