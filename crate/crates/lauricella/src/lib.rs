//! Computations around the Lauricella hypergeometric period map: exact
//! cyclotomic arithmetic, weight-system classification with the INT and
//! half-INT discreteness conditions, invariant Hermitian forms and
//! complex-reflection monodromy over a cyclotomic field, eigenspace and
//! arithmeticity bookkeeping for the associated cyclic covers, numerical
//! period evaluation with Gauss-Jacobi quadrature, and an exhaustive
//! bounded-denominator census.

pub mod cli;
pub mod cover;
pub mod error;
pub mod exactnum;
pub mod hermitian;
mod matrix;
pub mod monodromy;
pub mod periods;
pub mod scanner;
pub mod weights;

pub use error::{Error, Result};
pub use exactnum::{CyclotomicNumber, Rational};
pub use hermitian::{HermitianGram, Signature};
pub use monodromy::MonodromyElement;
pub use periods::{Configuration, PeriodVector, QuadratureRule};
pub use weights::{CaseLabel, WeightSystem};
