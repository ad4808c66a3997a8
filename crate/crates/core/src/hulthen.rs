//! Closed-form reference solution of the Hulthén problem.
//!
//! The screened potential `V(r) = -(λ/a²) e^{-r/a} / (1 - e^{-r/a})` binds
//! only finitely many s-states; level n exists for `λ > n²/2` and reaches the
//! continuum threshold exactly at the critical coupling `λ_c = n²/2`. These
//! formulas are the oracle for every numerical method in the crate.

use crate::error::{Error, Result};

/// The potential's parameters: coupling `λ` and range `a`.
#[derive(Debug, Clone, Copy)]
pub struct HulthenPotential {
    pub lambda: f64,
    pub a: f64,
}

impl HulthenPotential {
    pub fn new(lambda: f64, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "scale a must be > 0, got {a}"
            )));
        }
        if !(lambda >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coupling must be >= 0, got {lambda}"
            )));
        }
        Ok(HulthenPotential { lambda, a })
    }

    /// V(r), in the units of the radial equation.
    pub fn evaluate(&self, r: f64) -> f64 {
        let x = r / self.a;
        // 1 - e^{-x} via expm1 to keep the small-x limit (-λ/(a r)) accurate.
        self.lambda / (self.a * self.a) * (-x).exp() / (-x).exp_m1()
    }
}

/// Critical data of the analytic solution for a given level.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticCriticality {
    pub lambda_c: f64,
    /// Energy exponent: E ~ (λ - λ_c)^α.
    pub alpha: f64,
    /// Length exponent: ξ ~ |λ - λ_c|^{-ν}.
    pub nu: f64,
}

pub fn analytic_criticality(n: u32) -> AnalyticCriticality {
    AnalyticCriticality {
        lambda_c: critical_coupling(n),
        alpha: 2.0,
        nu: 1.0,
    }
}

impl AnalyticCriticality {
    /// Ground-state correlation length at coupling λ (unit range parameter);
    /// diverges like (λ - 1/2)^{-ν} at threshold.
    pub fn xi(&self, lambda: f64) -> Result<f64> {
        correlation_length(lambda, 1.0)
    }
}

/// Bound-state energy `E_n = -(1/a²)(2λ - n²)² / (8n²)`, or `None` when the
/// level is not bound (λ <= n²/2).
pub fn energy_level(n: u32, lambda: f64, a: f64) -> Result<Option<f64>> {
    if n < 1 {
        return Err(Error::InvalidParameter("level index n must be >= 1".into()));
    }
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scale a must be > 0, got {a}"
        )));
    }
    let n2 = (n as f64) * (n as f64);
    if lambda <= n2 / 2.0 {
        return Ok(None);
    }
    let t = 2.0 * lambda - n2;
    Ok(Some(-t * t / (8.0 * n2 * a * a)))
}

/// Critical coupling `λ_c = n²/2` of level n.
pub fn critical_coupling(n: u32) -> f64 {
    let nf = n as f64;
    nf * nf / 2.0
}

/// Largest bound level at coupling λ: the largest n with `λ > n²/2` and
/// `E_n < 0`; zero when nothing is bound.
pub fn max_bound_level(lambda: f64) -> u32 {
    if lambda <= 0.5 {
        return 0;
    }
    let mut n = (2.0 * lambda).sqrt().floor() as u32;
    // Guard against the exact-threshold case n² = 2λ, which is unbound.
    while n >= 1 && lambda <= (n as f64) * (n as f64) / 2.0 {
        n -= 1;
    }
    n
}

/// Ground-state correlation length from the tail of the probability density
/// `P(r) = |χ(r)|² ~ e^{-r/ξ}`.
///
/// The reduced wavefunction decays as `e^{-κr}` with `κ = √(-2E₁)`, so
/// `ξ = 1/(2κ) = a/(2λ - 1)` for n = 1; it diverges as `(λ - λ_c)^{-1}`
/// (exponent ν = 1).
pub fn correlation_length(lambda: f64, a: f64) -> Result<f64> {
    let e1 = energy_level(1, lambda, a)?
        .ok_or_else(|| Error::NoBoundState(format!("no ground state at λ = {lambda}")))?;
    let kappa = (-2.0 * e1).sqrt();
    Ok(1.0 / (2.0 * kappa))
}
