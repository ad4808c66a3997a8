//! Infinite-element correction beyond the mesh cutoff.
//!
//! On `[r_c, ∞)` the solution is approximated by the decaying profile
//! `ψ(r) = ψ(r_c) e^{-(r - r_c)}`, so the weak-form integrals over the tail
//! reduce to scalar contributions at the value DOF of the last node.

use crate::basis::coupling_shape;
use crate::error::{Error, Result};
use crate::numerics::quadrature::gauss_laguerre;

#[derive(Debug, Clone, Copy)]
pub struct TailCorrection {
    pub kinetic: f64,
    /// λ-factored Hulthén contribution.
    pub coupling_potential: f64,
    pub overlap: f64,
}

pub fn tail_correction(r_c: f64) -> Result<TailCorrection> {
    if !(r_c > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tail needs r_c > 0, got {r_c}"
        )));
    }
    // ∫_{r_c}^∞ r² e^{-2(r-r_c)} dr in closed form.
    let overlap = r_c * r_c / 2.0 + r_c / 2.0 + 0.25;
    // The profile's derivative is itself up to sign, so the kinetic integral
    // is half the overlap one.
    let kinetic = 0.5 * overlap;
    // ∫_{r_c}^∞ r² e^{-2(r-r_c)} V̂(r) dr with t = 2(r - r_c).
    let rule = gauss_laguerre(50)?;
    let coupling_potential = rule.integrate(|t| {
        let r = r_c + 0.5 * t;
        0.5 * (-t).exp() * r * r * coupling_shape(r)
    });
    Ok(TailCorrection {
        kinetic,
        coupling_potential,
        overlap,
    })
}
