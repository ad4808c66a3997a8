//! Radial finite-element discretization with an infinite-element tail.

pub mod assemble;
pub mod element;
pub mod mesh;
pub mod tail;

pub use assemble::{assemble, ground_point, AssembledSystem};
pub use element::{element_matrices, LocalMatrices};
pub use mesh::{build_mesh, Mesh};
pub use tail::{tail_correction, TailCorrection};
