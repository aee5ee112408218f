//! Exact-arithmetic workbench for quommutator deformations of the Lie
//! superalgebras spl(N,1): structure tables, normal ordering, associativity
//! (overlap) checking, finite-difference representations on graded
//! polynomial spaces, and quasi-exactly-solvable operator generation.
//!
//! All arithmetic is exact, over the field of rational functions in the
//! deformation parameters with rational coefficients. Everything is
//! immutable after construction and safe to share across threads.

pub mod builders;
pub mod docs;
pub mod error;
pub mod generator;
pub mod linalg;
pub mod matrix;
pub mod osp12;
pub mod param;
pub mod qes;
pub mod rational;
pub mod rep;
pub mod rewrite;
pub mod rng;
pub mod scalar;
pub mod space;
pub mod table;
pub mod text;

pub use error::{Error, Result};
pub use generator::{Expression, Generator, Word};
pub use matrix::Matrix;
pub use param::Param;
pub use rational::Rat;
pub use scalar::{q_number, q_number_of, LaurentPoly, Monomial, Scalar};
pub use space::{GradedSpace, PolyBasis};
pub use table::{Rule, StructureTable};
