//! Finite-size-scaling toolkit for locating critical couplings and critical
//! exponents of parameter-dependent Schrödinger Hamiltonians.
//!
//! The validation workload is the Hulthén potential, whose critical data are
//! known in closed form ([`hulthen`]). Two independent discretizations feed
//! the scaling analysis: a Slater–Laguerre basis truncation ([`basis`]) and a
//! radial finite-element method with an exponential tail element ([`fem`]).
//! The [`fss`] module turns ladders of truncated expectation values into
//! pseudocritical sequences, extrapolated critical parameters, and data
//! collapses. A companion large-dimension two-electron model with a
//! symmetry-breaking transition lives in [`larged`].

pub mod basis;
pub mod error;
pub mod fem;
pub mod fss;
pub mod hulthen;
pub mod larged;
pub mod numerics;
pub mod sweep;

pub use error::{Error, Result};
