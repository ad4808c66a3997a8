//! Two-electron atom in the large-dimension Hartree–Fock limit.
//!
//! The scaled effective energy
//!   E(r₁, r₂) = (1/2)(1/r₁² + 1/r₂²) - Z(1/r₁ + 1/r₂)
//!               + 1/√(r₁² + r₂²) - ε(r₁ - r₂)
//! has a symmetric minimum r₁ = r₂ for Z ≥ Z_c = √2 and a pair of broken
//! minima below, a textbook mean-field transition with η = (r₁-r₂)/r₁ as
//! the order parameter. Everything here is deterministic: Newton runs from
//! closed-form seeds, and the exponents come from log-log fits over pinned
//! windows.

use crate::error::{Error, Result};

/// A classified stationary point of the effective energy.
#[derive(Debug, Clone, Copy)]
pub struct LargeDState {
    pub z: f64,
    pub field: f64,
    pub r1: f64,
    pub r2: f64,
    pub energy: f64,
    /// Order parameter (r₁ - r₂)/r₁.
    pub eta: f64,
    /// Ascending eigenvalues of the 2×2 Hessian at the reported point.
    pub hessian_eigs: [f64; 2],
}

/// Fitted mean-field exponents, each as (value, fit uncertainty).
#[derive(Debug, Clone, Copy)]
pub struct MeanFieldExponents {
    pub beta: (f64, f64),
    pub alpha_e: (f64, f64),
    pub delta: (f64, f64),
    pub gamma: (f64, f64),
    pub z_c: f64,
}

pub fn effective_energy(r1: f64, r2: f64, z: f64, field: f64) -> Result<f64> {
    if !(r1 > 0.0) || !(r2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "radii must be positive, got ({r1}, {r2})"
        )));
    }
    Ok(energy_raw(r1, r2, z, field))
}

#[inline]
fn energy_raw(r1: f64, r2: f64, z: f64, field: f64) -> f64 {
    0.5 * (1.0 / (r1 * r1) + 1.0 / (r2 * r2)) - z * (1.0 / r1 + 1.0 / r2)
        + 1.0 / (r1 * r1 + r2 * r2).sqrt()
        - field * (r1 - r2)
}

fn gradient(r1: f64, r2: f64, z: f64, field: f64) -> [f64; 2] {
    let s = r1 * r1 + r2 * r2;
    let s32 = s * s.sqrt();
    [
        -1.0 / (r1 * r1 * r1) + z / (r1 * r1) - r1 / s32 - field,
        -1.0 / (r2 * r2 * r2) + z / (r2 * r2) - r2 / s32 + field,
    ]
}

fn hessian(r1: f64, r2: f64, z: f64) -> [[f64; 2]; 2] {
    let s = r1 * r1 + r2 * r2;
    let s52 = s * s * s.sqrt();
    let h11 =
        3.0 / (r1 * r1 * r1 * r1) - 2.0 * z / (r1 * r1 * r1) - (r2 * r2 - 2.0 * r1 * r1) / s52;
    let h22 =
        3.0 / (r2 * r2 * r2 * r2) - 2.0 * z / (r2 * r2 * r2) - (r1 * r1 - 2.0 * r2 * r2) / s52;
    let h12 = 3.0 * r1 * r2 / s52;
    [[h11, h12], [h12, h22]]
}

fn hessian_eigs(h: [[f64; 2]; 2]) -> [f64; 2] {
    let tr = h[0][0] + h[1][1];
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    [tr / 2.0 - disc, tr / 2.0 + disc]
}

/// Radius of the symmetric stationary point r₁ = r₂ = 2/(2Z - 1/√2).
fn symmetric_radius(z: f64) -> f64 {
    2.0 / (2.0 * z - 1.0 / 2.0f64.sqrt())
}

/// Damped Newton descent from a seed; deterministic. Returns the stationary
/// point with its gradient norm.
fn newton_descent(mut r1: f64, mut r2: f64, z: f64, field: f64) -> Option<(f64, f64, f64)> {
    let gtol = 1e-13;
    let mut best: Option<(f64, f64, f64)> = None;
    for _ in 0..300 {
        let g = gradient(r1, r2, z, field);
        let gn = g[0].abs().max(g[1].abs());
        if best.map_or(true, |(_, _, b)| gn < b) {
            best = Some((r1, r2, gn));
        }
        if gn <= gtol {
            return Some((r1, r2, gn));
        }
        let h = hessian(r1, r2, z);
        // Levenberg shift keeps the step a descent direction when the
        // Hessian is indefinite far from a minimum.
        let eigs = hessian_eigs(h);
        let mu = if eigs[0] <= 1e-12 {
            1e-12 - eigs[0]
        } else {
            0.0
        };
        let (a, b, c, d) = (h[0][0] + mu, h[0][1], h[1][0], h[1][1] + mu);
        let det = a * d - b * c;
        if det == 0.0 || !det.is_finite() {
            return best;
        }
        let mut dx = [-(d * g[0] - b * g[1]) / det, -(-c * g[0] + a * g[1]) / det];
        // Inside a positive-definite basin with a short step, plain Newton
        // converges quadratically; an energy-decrease gate would reject the
        // endgame steps whose descent is below round-off.
        let step_norm = dx[0].abs().max(dx[1].abs());
        if mu == 0.0 && step_norm <= 1e-3 * (r1 + r2) {
            let (n1, n2) = (r1 + dx[0], r2 + dx[1]);
            if n1 > 0.0 && n2 > 0.0 {
                r1 = n1;
                r2 = n2;
                continue;
            }
        }
        // Backtrack on the energy, keeping radii positive.
        let e0 = energy_raw(r1, r2, z, field);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let (n1, n2) = (r1 + t * dx[0], r2 + t * dx[1]);
            if n1 > 0.0 && n2 > 0.0 && energy_raw(n1, n2, z, field) <= e0 + 1e-18 {
                r1 = n1;
                r2 = n2;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            // Try a pure (damped) gradient step before giving up.
            dx = [-g[0], -g[1]];
            let mut t = 1e-2;
            let mut moved = false;
            for _ in 0..60 {
                let (n1, n2) = (r1 + t * dx[0], r2 + t * dx[1]);
                if n1 > 0.0 && n2 > 0.0 && energy_raw(n1, n2, z, field) < e0 {
                    r1 = n1;
                    r2 = n2;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if !moved {
                return best;
            }
        }
    }
    best
}

fn classify(r1: f64, r2: f64, z: f64, field: f64) -> LargeDState {
    let h = hessian(r1, r2, z);
    LargeDState {
        z,
        field,
        r1,
        r2,
        energy: energy_raw(r1, r2, z, field),
        eta: (r1 - r2) / r1,
        hessian_eigs: hessian_eigs(h),
    }
}

/// Global minimum of the effective energy over (r₁, r₂).
///
/// Newton runs from the symmetric closed-form seed and from both broken
/// seeds (r, r/2) and (r/2, r); minima (Hessian eigenvalues ≥ -1e-9) are
/// kept and the lowest-energy one returned. At ε = 0 the broken phase has a
/// ±η pair; the η ≥ 0 member is reported.
pub fn minimize_ground(z: f64, field: f64) -> Result<LargeDState> {
    if !(z > 0.9) {
        return Err(Error::InvalidParameter(format!(
            "charge must exceed 0.9, got {z}"
        )));
    }
    let rs = symmetric_radius(z);
    let seeds = [(rs, rs), (rs, 0.5 * rs), (0.5 * rs, rs)];
    let mut minima: Vec<LargeDState> = Vec::new();
    let mut diagnostics = Vec::new();
    for (s1, s2) in seeds {
        match newton_descent(s1, s2, z, field) {
            Some((r1, r2, gn)) if gn <= 1e-10 => {
                let st = classify(r1, r2, z, field);
                if st.hessian_eigs[0] >= -1e-9 {
                    minima.push(st);
                }
            }
            Some((_, _, gn)) => {
                diagnostics.push(format!("seed ({s1:.3}, {s2:.3}): |g| = {gn:.2e}"))
            }
            None => diagnostics.push(format!("seed ({s1:.3}, {s2:.3}): diverged")),
        }
    }
    if minima.is_empty() {
        return Err(Error::Numerical(format!(
            "no minimum found at Z = {z}, ε = {field}: {}",
            diagnostics.join("; ")
        )));
    }
    minima.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    // Within the energy resolution the broken seeds can stall at a tiny
    // spurious |η| right at the transition; prefer the most symmetric of the
    // degenerate states, and the η ≥ 0 member of a mirror pair.
    let e_min = minima[0].energy;
    let band = 1e-12 * (1.0 + e_min.abs());
    let mut best = minima
        .iter()
        .filter(|s| s.energy <= e_min + band)
        .min_by(|a, b| {
            a.eta
                .abs()
                .total_cmp(&b.eta.abs())
                .then(b.eta.total_cmp(&a.eta))
        })
        .copied()
        .expect("at least one minimum");
    // Canonical sign at zero field: the mirror state is implied.
    if field == 0.0 && best.eta < 0.0 {
        best = classify(best.r2, best.r1, z, field);
    }
    Ok(best)
}

/// Z where the symmetric solution loses stability, located by bisection on
/// the smallest Hessian eigenvalue at the symmetric stationary point.
pub fn critical_charge() -> f64 {
    let smallest_eig = |z: f64| {
        let r = symmetric_radius(z);
        hessian_eigs(hessian(r, r, z))[0]
    };
    let (mut lo, mut hi) = (1.2f64, 1.6f64);
    debug_assert!(smallest_eig(lo) < 0.0 && smallest_eig(hi) > 0.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if smallest_eig(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn line_fit(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let mut ss = 0.0;
    for &(x, y) in pts {
        let r = y - (intercept + slope * x);
        ss += r * r;
    }
    let var = ss / (n - 2.0).max(1.0) / (sxx - sx * sx / n);
    (slope, var.max(0.0).sqrt())
}

fn log_ladder(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| lo * (hi / lo).powf(k as f64 / (count - 1) as f64))
        .collect()
}

/// Susceptibility ∂η/∂ε at ε = 0 by a centered difference.
pub fn susceptibility(z: f64, step: f64) -> Result<f64> {
    let plus = minimize_ground(z, step)?;
    let minus = minimize_ground(z, -step)?;
    Ok((plus.eta - minus.eta) / (2.0 * step))
}

/// Mean-field exponents from pinned log-log fit windows.
///
/// β from η(Z) on the broken side; the energy exponent from the singular
/// part |E_broken - E_symmetric| (the total energy is regular at Z_c, so the
/// literal power law only holds for its singular part); δ from ε(η) at Z_c;
/// γ from the susceptibility on the symmetric side. The susceptibility
/// difference step shrinks like ΔZ^{3/2} so the probe field stays inside
/// the linear-response window at every ladder point.
pub fn extract_exponents() -> Result<MeanFieldExponents> {
    let z_c = critical_charge();
    let dz_ladder = log_ladder(1e-4, 1e-2, 12);

    // β: η ~ (-ΔZ)^β as ΔZ → 0⁻. The order parameter carries a strong
    // √ΔZ correction (local slope ≈ 0.5 - 0.55 √ΔZ), so its fit window sits
    // two decades deeper than the others or the fitted exponent lands near
    // 0.48.
    let mut beta_pts = Vec::new();
    for &dz in &log_ladder(1e-6, 1e-4, 12) {
        let st = minimize_ground(z_c - dz, 0.0)?;
        if st.eta <= 0.0 {
            return Err(Error::Numerical(format!(
                "no symmetry breaking at ΔZ = -{dz:.1e}"
            )));
        }
        beta_pts.push((dz.ln(), st.eta.ln()));
    }
    let beta = line_fit(&beta_pts);

    // Energy exponent: |E_broken - E_sym| ~ |ΔZ|^α on the broken side.
    let mut alpha_pts = Vec::new();
    for &dz in &dz_ladder {
        let z = z_c - dz;
        let broken = minimize_ground(z, 0.0)?;
        let r = symmetric_radius(z);
        let e_sym = energy_raw(r, r, z, 0.0);
        let gap = e_sym - broken.energy;
        if gap <= 0.0 {
            return Err(Error::Numerical(format!(
                "broken branch not below the symmetric one at ΔZ = -{dz:.1e}"
            )));
        }
        alpha_pts.push((dz.ln(), gap.ln()));
    }
    let alpha_e = line_fit(&alpha_pts);

    // δ: ε ~ η^δ at Z_c; the field ladder maps to η in roughly [1e-4, 1e-2].
    let mut delta_pts = Vec::new();
    for &eps in &log_ladder(1e-11, 1e-6, 12) {
        let st = minimize_ground(z_c, eps)?;
        if st.eta <= 0.0 {
            return Err(Error::Numerical(format!(
                "field ε = {eps:.1e} did not polarize the solution"
            )));
        }
        delta_pts.push((st.eta.ln(), eps.ln()));
    }
    let delta = line_fit(&delta_pts);

    // γ: ∂η/∂ε|₀ ~ ΔZ^{-γ} for Z → Z_c⁺.
    let mut gamma_pts = Vec::new();
    for &dz in &dz_ladder {
        let step = (1e-6f64).min(0.03 * dz.powf(1.5));
        let chi = susceptibility(z_c + dz, step)?;
        if chi <= 0.0 {
            return Err(Error::Numerical(format!(
                "non-positive susceptibility at ΔZ = {dz:.1e}"
            )));
        }
        gamma_pts.push((dz.ln(), chi.ln()));
    }
    let (gslope, gerr) = line_fit(&gamma_pts);

    Ok(MeanFieldExponents {
        beta,
        alpha_e,
        delta,
        gamma: (-gslope, gerr),
        z_c,
    })
}
