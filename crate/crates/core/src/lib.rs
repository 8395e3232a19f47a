//! Exact Haar integration on compact Lie groups through Laurent-polynomial
//! coordinates, with numeric cross-checks and an obstruction test for
//! vanishing power integrals.

pub mod error;
pub mod expr;
pub mod groupmodel;
pub mod laurent;
pub mod mathieu;
pub mod measure;
pub mod numeric;
pub mod rational;
pub mod rootsystem;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use expr::Expr;
pub use groupmodel::{coordinate_matrix, numeric_point, reduce_function, CMatrix, CoordinateMatrixPair, GroupModel};
pub use laurent::{GaussianRational, LaurentPoly, Monomial};
pub use measure::{measure_spec, GroupSpec, MeasureSpec, SimpleFactor};
pub use rational::Rational;
pub use rootsystem::{Root, RootSystem, RootType};
pub use weyl::{beta_sequence, canonical_longest_word, BetaSequence, ReducedWord};
