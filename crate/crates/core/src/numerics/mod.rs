//! Shared numerical kernels: quadrature, special functions, local shape
//! functions, and generalized symmetric eigensolvers.
//!
//! Everything here is a pure function of its inputs and safe to call from
//! parallel sweeps.

pub mod banded;
pub mod eigen;
pub mod laguerre;
pub mod quadrature;
pub mod shape;

pub use banded::{inertia_below, lowest_eigenpair, SymBanded};
pub use eigen::{solve_generalized_symmetric, EigenSolution};
pub use laguerre::{laguerre_l2, laguerre_l2_scaled};
pub use quadrature::{gauss_laguerre, gauss_legendre, HalfLineRule, QuadratureRule};
pub use shape::{shape_functions, ShapeFunctionSet, ShapeOrder, ShapeSample};
