//! Dense generalized symmetric eigensolver.
//!
//! The pencil `H v = ε U v` (U symmetric positive definite) is reduced to a
//! standard symmetric problem through the Cholesky factor of U and handed to
//! a deterministic dense solver. Eigenvalues come back ascending and the
//! eigenvectors U-orthonormal.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone)]
pub struct EigenSolution {
    /// Ascending eigenvalues, `k` of them.
    pub eigenvalues: Vec<f64>,
    /// Matching eigenvectors, U-orthonormal.
    pub eigenvectors: Vec<DVector<f64>>,
}

/// `k` lowest eigenpairs of `H v = ε U v`.
pub fn solve_generalized_symmetric(
    h: &DMatrix<f64>,
    u: &DMatrix<f64>,
    k: usize,
) -> Result<EigenSolution> {
    let n = h.nrows();
    if h.ncols() != n || u.nrows() != n || u.ncols() != n {
        return Err(Error::InvalidParameter(format!(
            "dimension mismatch: H is {}x{}, U is {}x{}",
            h.nrows(),
            h.ncols(),
            u.nrows(),
            u.ncols()
        )));
    }
    if k < 1 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={n}")));
    }

    let chol = nalgebra::linalg::Cholesky::new(u.clone())
        .ok_or_else(|| Error::Decomposition("overlap matrix is not positive definite".into()))?;
    let l = chol.l();

    // A = L^{-1} H L^{-T}, symmetrized against round-off.
    let y = l
        .solve_lower_triangular(h)
        .ok_or_else(|| Error::Decomposition("singular Cholesky factor".into()))?;
    let a_t = l
        .solve_lower_triangular(&y.transpose())
        .ok_or_else(|| Error::Decomposition("singular Cholesky factor".into()))?;
    let a = 0.5 * (&a_t + a_t.transpose());

    let eig = nalgebra::linalg::SymmetricEigen::new(a);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));

    let lt = l.transpose();
    let mut eigenvalues = Vec::with_capacity(k);
    let mut eigenvectors = Vec::with_capacity(k);
    for &idx in order.iter().take(k) {
        eigenvalues.push(eig.eigenvalues[idx]);
        let y = eig.eigenvectors.column(idx).into_owned();
        let mut v = lt
            .solve_upper_triangular(&y)
            .ok_or_else(|| Error::Decomposition("singular Cholesky factor".into()))?;
        canonicalize_sign(&mut v);
        eigenvectors.push(v);
    }
    Ok(EigenSolution {
        eigenvalues,
        eigenvectors,
    })
}

/// Flip the vector so its largest-magnitude component is positive.
pub fn canonicalize_sign(v: &mut DVector<f64>) {
    let mut best = 0usize;
    let mut mag = 0.0;
    for (i, &x) in v.iter().enumerate() {
        if x.abs() > mag {
            mag = x.abs();
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.neg_mut();
    }
}
