//! Finite-size-scaling engine: Δ and Γ functions, crossing detection,
//! pseudocritical sequences with 1/N extrapolation, data collapse, and
//! exponential tail fits.

pub mod analysis;
pub mod collapse;
pub mod table;

pub use analysis::{
    consecutive_gamma_curves, delta, find_crossing, fit_tail_length, gamma_alpha, gamma_curve,
    pseudocritical_sequence, Extrapolated, GammaCurve, PseudoCriticalSequence, PseudoEntry,
};
pub use collapse::{data_collapse, CollapseCloud, CollapseDataset};
pub use table::ExpectationTable;
