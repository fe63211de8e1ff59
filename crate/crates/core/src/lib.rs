//! Graph realizability of first-order hyperbolic boundary systems.
//!
//! [`realize`] decides whether a flat boundary system over `2m` solution
//! components comes from `m` two-component systems on the edges of a graph
//! and reconstructs that graph. [`netcompile`] goes the other way, and
//! [`roundtrip`] chains the two.

pub mod binmat;
pub mod cli;
pub mod dot;
pub mod error;
pub mod flowconn;
pub mod io;
pub mod linedigraph;
pub mod netcompile;
pub mod realize;
pub mod roundtrip;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type ExactMatrix = binmat::RealMatrix<Rational>;
pub type FloatMatrix = binmat::RealMatrix<f64>;
pub type ExactBoundarySystem = realize::BoundarySystem<Rational>;
pub type FloatBoundarySystem = realize::BoundarySystem<f64>;
pub type ExactProblem = netcompile::MetricGraphProblem<Rational>;
pub type FloatProblem = netcompile::MetricGraphProblem<f64>;
pub type ExactNetwork = realize::RealizedNetwork<Rational>;
pub type FloatNetwork = realize::RealizedNetwork<f64>;
