//! The scaling analysis: Δ ratios, Γ curves, crossings, pseudocritical
//! sequences and their 1/N extrapolation.
//!
//! At the critical coupling a truncated expectation obeys
//! `⟨O⟩^{(N)} ~ N^{-μ/ν}`, so the two-size log-ratio Δ becomes
//! size-independent there. The ratio Γ = Δ_H / (Δ_H - Δ_{∂V/∂λ}) crosses at
//! the critical point with ordinate α, and ν follows from Δ_H = α/ν.

use crate::error::{Error, Result};
use crate::fss::table::ExpectationTable;

/// Two-size log-ratio `Δ = ln(O_N/O_N') / ln(N'/N)`, taken on magnitudes.
/// The inputs must share a sign and be non-zero; an exact `N^{-p}` law gives
/// `Δ = +p`.
pub fn delta(o_n: f64, o_n2: f64, n: usize, n2: usize) -> Result<f64> {
    if n == n2 {
        return Err(Error::InvalidParameter("Δ needs two distinct sizes".into()));
    }
    if o_n == 0.0 || o_n2 == 0.0 || (o_n < 0.0) != (o_n2 < 0.0) {
        return Err(Error::Domain(format!(
            "Δ undefined for values {o_n} and {o_n2} (zero or mixed sign)"
        )));
    }
    Ok((o_n.abs() / o_n2.abs()).ln() / ((n2 as f64) / (n as f64)).ln())
}

/// Γ from the two Δ values; `None` flags the pole `|Δ_H - Δ_dV| < 1e-12`.
pub fn gamma_from_deltas(delta_h: f64, delta_dv: f64) -> Option<f64> {
    let den = delta_h - delta_dv;
    if den.abs() < 1e-12 {
        None
    } else {
        Some(delta_h / den)
    }
}

/// Γ_α at one grid point for the size pair (N, N').
pub fn gamma_alpha(lambda: f64, n: usize, nprime: usize, table: &ExpectationTable) -> Result<f64> {
    let li = table.lambda_index(lambda)?;
    let i = table.size_index(n)?;
    let j = table.size_index(nprime)?;
    let dh = delta(table.energy[i][li], table.energy[j][li], n, nprime)?;
    let dv = delta(table.dv[i][li], table.dv[j][li], n, nprime)?;
    gamma_from_deltas(dh, dv)
        .ok_or_else(|| Error::Domain(format!("Γ pole at λ = {lambda} for sizes ({n}, {nprime})")))
}

/// Γ_α(λ) sampled on the table grid for one size pair; flagged points
/// (mixed-sign or vanishing expectations, Δ poles) are stored as NaN.
#[derive(Debug, Clone)]
pub struct GammaCurve {
    pub n: usize,
    pub nprime: usize,
    pub lambdas: Vec<f64>,
    pub gamma: Vec<f64>,
}

pub fn gamma_curve(table: &ExpectationTable, n: usize, nprime: usize) -> Result<GammaCurve> {
    if n == nprime {
        return Err(Error::InvalidParameter(
            "Γ curve needs two distinct sizes".into(),
        ));
    }
    let i = table.size_index(n)?;
    let j = table.size_index(nprime)?;
    let gamma = (0..table.lambdas.len())
        .map(|li| {
            let dh = delta(table.energy[i][li], table.energy[j][li], n, nprime);
            let dv = delta(table.dv[i][li], table.dv[j][li], n, nprime);
            match (dh, dv) {
                (Ok(dh), Ok(dv)) => gamma_from_deltas(dh, dv).unwrap_or(f64::NAN),
                _ => f64::NAN,
            }
        })
        .collect();
    Ok(GammaCurve {
        n,
        nprime,
        lambdas: table.lambdas.clone(),
        gamma,
    })
}

/// Γ curves for consecutive ladder pairs (N_0,N_1), (N_1,N_2), ...
pub fn consecutive_gamma_curves(table: &ExpectationTable) -> Result<Vec<GammaCurve>> {
    table
        .sizes
        .windows(2)
        .map(|w| gamma_curve(table, w[0], w[1]))
        .collect()
}

/// Γ values too far from physical exponents mark the blow-up region near a
/// pole; cells touching them are not crossing candidates.
const GAMMA_CAP: f64 = 10.0;

fn valid(g: f64) -> bool {
    g.is_finite() && g.abs() <= GAMMA_CAP
}

/// Crossing (λ*, Γ*) of two Γ curves on the shared grid.
///
/// The curves are interpolated linearly inside each cell and the difference
/// bisected to |Δλ| ≤ 1e-10. Cells adjacent to flagged or blown-up samples
/// are skipped, so the crossing returned is the first one in the smooth
/// region, scanning upward in λ.
pub fn find_crossing(a: &GammaCurve, b: &GammaCurve) -> Result<(f64, f64)> {
    if a.lambdas.len() != b.lambdas.len()
        || a.lambdas
            .iter()
            .zip(&b.lambdas)
            .any(|(x, y)| (x - y).abs() > 1e-12 * (1.0 + x.abs()))
    {
        return Err(Error::InvalidParameter(
            "Γ curves on different grids".into(),
        ));
    }
    let m = a.lambdas.len();
    for i in 0..m - 1 {
        // Smoothness window: the cell plus two neighbors on each side must be
        // clean on both curves.
        let wlo = i.saturating_sub(2);
        let whi = (i + 3).min(m - 1);
        if !(wlo..=whi).all(|k| valid(a.gamma[k]) && valid(b.gamma[k])) {
            continue;
        }
        let d0 = a.gamma[i] - b.gamma[i];
        let d1 = a.gamma[i + 1] - b.gamma[i + 1];
        if d0 == 0.0 && d1 == 0.0 {
            continue; // locally identical curves define no crossing
        }
        if d0 == 0.0 {
            return Ok((a.lambdas[i], a.gamma[i]));
        }
        if d0 * d1 < 0.0 {
            let (mut lo, mut hi) = (a.lambdas[i], a.lambdas[i + 1]);
            let cell = (a.lambdas[i], a.lambdas[i + 1]);
            let lerp = |curve: &GammaCurve, x: f64| {
                let t = (x - cell.0) / (cell.1 - cell.0);
                curve.gamma[i] * (1.0 - t) + curve.gamma[i + 1] * t
            };
            let sign_lo = d0 > 0.0;
            while hi - lo > 1e-10 {
                let mid = 0.5 * (lo + hi);
                let d = lerp(a, mid) - lerp(b, mid);
                if (d > 0.0) == sign_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let star = 0.5 * (lo + hi);
            return Ok((star, lerp(a, star)));
        }
    }
    Err(Error::NoCrossing(format!(
        "curves ({}, {}) and ({}, {}) do not intersect in the smooth region",
        a.n, a.nprime, b.n, b.nprime
    )))
}

/// One pseudocritical estimate, labeled by the smallest size of its triple.
#[derive(Debug, Clone, Copy)]
pub struct PseudoEntry {
    pub n: usize,
    pub lambda_c: f64,
    pub alpha: f64,
    pub nu: f64,
}

/// Extrapolated value with the fit's residual scale as its uncertainty.
#[derive(Debug, Clone, Copy)]
pub struct Extrapolated {
    pub value: f64,
    pub uncertainty: f64,
}

#[derive(Debug, Clone)]
pub struct PseudoCriticalSequence {
    pub entries: Vec<PseudoEntry>,
    pub lambda_c: Extrapolated,
    pub alpha: Extrapolated,
    pub nu: Extrapolated,
    pub warnings: Vec<String>,
}

/// Linear interpolation of the pair's Δ_H at an off-grid λ.
fn delta_h_at(table: &ExpectationTable, n: usize, nprime: usize, lambda: f64) -> Result<f64> {
    let i = table.size_index(n)?;
    let j = table.size_index(nprime)?;
    let grid = &table.lambdas;
    let k = match grid.iter().position(|&l| l >= lambda) {
        Some(0) => 0,
        Some(k) => k - 1,
        None => grid.len() - 2,
    };
    let k = k.min(grid.len() - 2);
    let d0 = delta(table.energy[i][k], table.energy[j][k], n, nprime)?;
    let d1 = delta(table.energy[i][k + 1], table.energy[j][k + 1], n, nprime)?;
    let t = (lambda - grid[k]) / (grid[k + 1] - grid[k]);
    Ok(d0 * (1.0 - t) + d1 * t)
}

/// Pseudocritical (λ_c^{(N)}, α^{(N)}, ν^{(N)}) from every consecutive size
/// triple, with degree-2 extrapolation in 1/N.
pub fn pseudocritical_sequence(table: &ExpectationTable) -> Result<PseudoCriticalSequence> {
    if table.sizes.len() < 3 {
        return Err(Error::InvalidParameter(
            "pseudocritical sequence needs at least 3 sizes".into(),
        ));
    }
    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    for w in table.sizes.windows(3) {
        let (n0, n1, n2) = (w[0], w[1], w[2]);
        let curve_a = gamma_curve(table, n0, n1)?;
        let curve_b = gamma_curve(table, n1, n2)?;
        match find_crossing(&curve_a, &curve_b) {
            Ok((lambda_star, gamma_star)) => {
                let dh = delta_h_at(table, n0, n1, lambda_star)?;
                entries.push(PseudoEntry {
                    n: n0,
                    lambda_c: lambda_star,
                    alpha: gamma_star,
                    nu: gamma_star / dh,
                });
            }
            Err(e) => warnings.push(format!("triple ({n0}, {n1}, {n2}) skipped: {e}")),
        }
    }
    if entries.len() < 3 {
        return Err(Error::NoCrossing(format!(
            "only {} crossings found; need at least 3 for extrapolation",
            entries.len()
        )));
    }
    let inv_n: Vec<f64> = entries.iter().map(|e| 1.0 / e.n as f64).collect();
    let fit = |ys: Vec<f64>| extrapolate_in_inverse_size(&inv_n, &ys);
    let (lambda_c, w1) = fit(entries.iter().map(|e| e.lambda_c).collect())?;
    let (alpha, w2) = fit(entries.iter().map(|e| e.alpha).collect())?;
    let (nu, w3) = fit(entries.iter().map(|e| e.nu).collect())?;
    for w in [w1, w2, w3].into_iter().flatten() {
        warnings.push(w);
    }
    Ok(PseudoCriticalSequence {
        entries,
        lambda_c,
        alpha,
        nu,
        warnings,
    })
}

/// Least-squares degree-2 polynomial in x = 1/N evaluated at x = 0; falls
/// back to degree 1 when the normal equations degenerate. The uncertainty is
/// the fit's root-mean-square residual.
pub fn extrapolate_in_inverse_size(
    xs: &[f64],
    ys: &[f64],
) -> Result<(Extrapolated, Option<String>)> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::InvalidParameter(
            "extrapolation needs at least 3 entries".into(),
        ));
    }
    if let Some(c) = polyfit(xs, ys, 2) {
        let rms = fit_rms(xs, ys, &c);
        return Ok((
            Extrapolated {
                value: c[0],
                uncertainty: rms,
            },
            None,
        ));
    }
    let c = polyfit(xs, ys, 1).ok_or_else(|| {
        Error::Numerical("both degree-2 and degree-1 extrapolation fits degenerated".into())
    })?;
    let rms = fit_rms(xs, ys, &c);
    Ok((
        Extrapolated {
            value: c[0],
            uncertainty: rms,
        },
        Some("degree-2 extrapolation degenerated; used degree 1".into()),
    ))
}

fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Option<Vec<f64>> {
    let m = degree + 1;
    let mut ata = nalgebra::DMatrix::<f64>::zeros(m, m);
    let mut atb = nalgebra::DVector::<f64>::zeros(m);
    for (&x, &y) in xs.iter().zip(ys) {
        let mut pow = vec![1.0; m];
        for k in 1..m {
            pow[k] = pow[k - 1] * x;
        }
        for a in 0..m {
            atb[a] += pow[a] * y;
            for b in 0..m {
                ata[(a, b)] += pow[a] * pow[b];
            }
        }
    }
    // Reject near-singular systems rather than returning garbage.
    let lu = ata.clone().lu();
    let det = lu.determinant();
    let scale: f64 = (0..m).map(|i| ata[(i, i)]).product();
    if det.abs() <= 1e-13 * scale.abs() {
        return None;
    }
    lu.solve(&atb).map(|c| c.iter().copied().collect())
}

fn fit_rms(xs: &[f64], ys: &[f64], coeffs: &[f64]) -> f64 {
    let mut ss = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let mut fx = 0.0;
        for &c in coeffs.iter().rev() {
            fx = fx * x + c;
        }
        ss += (y - fx) * (y - fx);
    }
    let dof = xs.len().saturating_sub(coeffs.len()).max(1);
    (ss / dof as f64).sqrt()
}

/// ξ from a least-squares fit of ln P against r; the samples must be
/// strictly positive and decaying.
pub fn fit_tail_length(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InvalidParameter(
            "tail fit needs at least 2 samples".into(),
        ));
    }
    if samples.iter().any(|&(_, p)| p <= 0.0) {
        return Err(Error::Domain(
            "tail fit window contains non-positive densities".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(r, p)| (r, p.ln())).collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if slope >= 0.0 {
        return Err(Error::Domain(format!(
            "density does not decay over the window (slope {slope})"
        )));
    }
    Ok(-1.0 / slope)
}
