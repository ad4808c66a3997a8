//! Slater–Laguerre basis truncation of the Hulthén Hamiltonian.
//!
//! The radial basis `Φ_n(r) = √((1/4π)/((n+1)(n+2))) e^{-r/2} L_n^{(2)}(r)`
//! is orthonormal under `4π ∫ Φ_m Φ_n r² dr`, so the overlap matrix is the
//! identity. The kinetic matrix has a closed form; the potential matrix is
//! integrated with a high-order half-line rule and cross-checked at a higher
//! order before use.

use crate::error::{Error, Result};
use crate::numerics::laguerre::laguerre_l2_scaled;
use crate::numerics::quadrature::gauss_laguerre;
use crate::numerics::solve_generalized_symmetric;
use nalgebra::{DMatrix, DVector};

/// λ-independent matrices of the truncated Hamiltonian `H(λ) = K + λV`.
#[derive(Debug, Clone)]
pub struct OperatorPair {
    pub kinetic: DMatrix<f64>,
    /// Matrix of the Hulthén shape `-e^{-r}/(1-e^{-r})` with λ factored out.
    pub coupling_potential: DMatrix<f64>,
    pub overlap: DMatrix<f64>,
    pub size: usize,
}

/// Ground-state data at one (λ, N).
#[derive(Debug, Clone)]
pub struct GroundPoint {
    pub lambda: f64,
    pub size: usize,
    pub energy: f64,
    /// ⟨∂V_λ/∂λ⟩ = ⟨V⟩ in the U-normalized ground state.
    pub dv_expectation: f64,
    pub coefficients: DVector<f64>,
}

fn normalization(n: usize) -> f64 {
    let nf = n as f64;
    1.0 / (4.0 * std::f64::consts::PI * (nf + 1.0) * (nf + 2.0)).sqrt()
}

/// `Φ_n(r)`.
pub fn basis_function(n: usize, r: f64) -> f64 {
    normalization(n) * laguerre_l2_scaled(n, r)
}

/// Hulthén shape with the coupling factored out: `-e^{-r}/(1-e^{-r})`.
#[inline]
pub fn coupling_shape(r: f64) -> f64 {
    (-r).exp() / (-r).exp_m1()
}

/// Closed-form kinetic entry `(1/2) 4π ∫ Φ_m' Φ_n' r² dr`.
///
/// Integration by parts is not needed: with `L' = -L^{(3)}` and the summation
/// identity `L_{n-1}^{(3)} = Σ_{k<n} L_k^{(2)}`, the derivative products
/// reduce to weighted orthogonality sums. With p = min(m, n):
///   T_mn = [p(p+1)(p+2)/3 + c (p+1)(p+2)] / (2 √((m+1)(m+2)(n+1)(n+2))),
/// where c = 1/4 on the diagonal and 1/2 off it.
fn kinetic_entry(m: usize, n: usize) -> f64 {
    let p = m.min(n) as f64;
    let c = if m == n { 0.25 } else { 0.5 };
    let bracket = p * (p + 1.0) * (p + 2.0) / 3.0 + c * (p + 1.0) * (p + 2.0);
    let mf = m as f64;
    let nf = n as f64;
    bracket / (2.0 * ((mf + 1.0) * (mf + 2.0) * (nf + 1.0) * (nf + 2.0)).sqrt())
}

fn potential_matrix(n: usize, order: usize) -> Result<DMatrix<f64>> {
    let rule = gauss_laguerre(order)?;
    let k = rule.nodes.len();
    // Scaled Laguerre table: ell[node][degree].
    let mut ell = vec![vec![0.0f64; n]; k];
    for (i, &x) in rule.nodes.iter().enumerate() {
        let s = (-0.5 * x).exp();
        let mut lm = s;
        let mut l = s * (3.0 - x);
        for j in 0..n {
            ell[i][j] = if j == 0 { lm } else { l };
            if j >= 1 {
                let kf = j as f64;
                let lp = ((2.0 * kf + 3.0 - x) * l - (kf + 2.0) * lm) / (kf + 1.0);
                lm = l;
                l = lp;
            }
        }
    }
    let mut v = DMatrix::zeros(n, n);
    for m in 0..n {
        for q in m..n {
            let mut acc = 0.0;
            for i in 0..k {
                let x = rule.nodes[i];
                acc += rule.weights[i] * x * x * coupling_shape(x) * ell[i][m] * ell[i][q];
            }
            let mf = m as f64;
            let qf = q as f64;
            let norm = 1.0 / ((mf + 1.0) * (mf + 2.0) * (qf + 1.0) * (qf + 2.0)).sqrt();
            v[(m, q)] = norm * acc;
            v[(q, m)] = v[(m, q)];
        }
    }
    Ok(v)
}

/// Kinetic, coupling-potential and overlap matrices at truncation order N.
pub fn build_operator_pair(n: usize) -> Result<OperatorPair> {
    if !(2..=60).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "basis size must be in 2..=60, got {n}"
        )));
    }
    let mut kinetic = DMatrix::zeros(n, n);
    for m in 0..n {
        for q in 0..n {
            kinetic[(m, q)] = kinetic_entry(m, q);
        }
    }
    let v200 = potential_matrix(n, 200)?;
    let v300 = potential_matrix(n, 300)?;
    let mut worst = 0.0f64;
    for m in 0..n {
        for q in 0..n {
            worst = worst.max((v200[(m, q)] - v300[(m, q)]).abs());
        }
    }
    if worst > 1e-9 {
        return Err(Error::Accuracy(format!(
            "potential quadrature orders 200/300 disagree by {worst:.3e}"
        )));
    }
    Ok(OperatorPair {
        kinetic,
        coupling_potential: v300,
        overlap: DMatrix::identity(n, n),
        size: n,
    })
}

/// Lowest eigenpair of `(K + λV) c = E U c` with the ⟨V⟩ expectation.
pub fn ground_point(pair: &OperatorPair, lambda: f64) -> Result<GroundPoint> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "coupling must be >= 0, got {lambda}"
        )));
    }
    let h = &pair.kinetic + lambda * &pair.coupling_potential;
    let sol = solve_generalized_symmetric(&h, &pair.overlap, 1)?;
    let c = sol.eigenvectors.into_iter().next().expect("k = 1");
    let dv = (c.transpose() * &pair.coupling_potential * &c)[(0, 0)];
    Ok(GroundPoint {
        lambda,
        size: pair.size,
        energy: sol.eigenvalues[0],
        dv_expectation: dv,
        coefficients: c,
    })
}
