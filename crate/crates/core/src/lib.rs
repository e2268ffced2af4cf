//! Exact and high-precision evaluation of equivariant analytic torsion and
//! analytic torsion forms on ℙ¹-bundles.
//!
//! Every closed-form result has a second, independent evaluation path
//! (numerical quadrature, direct summation, or an alternative algebraic
//! assembly), and the [`acceptance`] module runs the cross-checks.

pub mod acceptance;
pub mod chowring;
pub mod error;
pub mod numerics;
pub mod quadrature;
pub mod scurrent;
pub mod series;
pub mod specfun;
pub mod torsion;
pub mod torsionform;

pub use error::{Error, Result};
pub use numerics::{BigReal, ConstExpr, ConstSymbol, Precision, Rational};
