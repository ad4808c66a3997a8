//! Dense tables of truncated ground-state expectations over a (size, λ) grid.

use crate::error::{Error, Result};

/// Ground-state energy and ⟨∂V_λ/∂λ⟩ for every ladder size on a shared
/// λ-grid.
#[derive(Debug, Clone)]
pub struct ExpectationTable {
    pub method: String,
    /// Ladder sizes, ascending (basis dimension or element count).
    pub sizes: Vec<usize>,
    /// Shared λ-grid, ascending.
    pub lambdas: Vec<f64>,
    /// energy[size_index][lambda_index]
    pub energy: Vec<Vec<f64>>,
    /// dv[size_index][lambda_index]
    pub dv: Vec<Vec<f64>>,
}

impl ExpectationTable {
    pub fn new(
        method: impl Into<String>,
        sizes: Vec<usize>,
        lambdas: Vec<f64>,
        energy: Vec<Vec<f64>>,
        dv: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if sizes.is_empty() || lambdas.len() < 2 {
            return Err(Error::InvalidParameter(
                "table needs at least one size and two λ points".into(),
            ));
        }
        if sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "sizes must be strictly ascending".into(),
            ));
        }
        if lambdas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "λ-grid must be strictly ascending".into(),
            ));
        }
        if energy.len() != sizes.len() || dv.len() != sizes.len() {
            return Err(Error::InvalidParameter(
                "table rows must match sizes".into(),
            ));
        }
        for (row_e, row_d) in energy.iter().zip(&dv) {
            if row_e.len() != lambdas.len() || row_d.len() != lambdas.len() {
                return Err(Error::InvalidParameter("table has holes".into()));
            }
            if row_e.iter().chain(row_d.iter()).any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(
                    "table contains non-finite values".into(),
                ));
            }
        }
        Ok(ExpectationTable {
            method: method.into(),
            sizes,
            lambdas,
            energy,
            dv,
        })
    }

    pub fn size_index(&self, n: usize) -> Result<usize> {
        self.sizes
            .iter()
            .position(|&s| s == n)
            .ok_or_else(|| Error::InvalidParameter(format!("size {n} not in table")))
    }

    pub fn lambda_index(&self, lambda: f64) -> Result<usize> {
        let tol = 1e-12 * (1.0 + lambda.abs());
        self.lambdas
            .iter()
            .position(|&l| (l - lambda).abs() <= tol)
            .ok_or_else(|| Error::InvalidParameter(format!("λ = {lambda} not on the grid")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_or_nonfinite_tables() {
        let bad = ExpectationTable::new(
            "t",
            vec![4, 8],
            vec![0.1, 0.2],
            vec![vec![1.0, 2.0], vec![3.0]],
            vec![vec![1.0, 2.0], vec![3.0, 4.0]],
        );
        assert!(bad.is_err());
        let nan = ExpectationTable::new(
            "t",
            vec![4],
            vec![0.1, 0.2],
            vec![vec![f64::NAN, 2.0]],
            vec![vec![1.0, 2.0]],
        );
        assert!(nan.is_err());
        let unsorted = ExpectationTable::new(
            "t",
            vec![8, 4],
            vec![0.1, 0.2],
            vec![vec![1.0, 2.0], vec![1.0, 2.0]],
            vec![vec![1.0, 2.0], vec![1.0, 2.0]],
        );
        assert!(unsorted.is_err());
    }

    #[test]
    fn lookup_by_size_and_lambda() {
        let t = ExpectationTable::new(
            "t",
            vec![4, 8],
            vec![0.1, 0.2, 0.3],
            vec![vec![1.0; 3], vec![2.0; 3]],
            vec![vec![0.5; 3], vec![0.25; 3]],
        )
        .unwrap();
        assert_eq!(t.size_index(8).unwrap(), 1);
        assert!(t.size_index(5).is_err());
        assert_eq!(t.lambda_index(0.2).unwrap(), 1);
        assert!(t.lambda_index(0.15).is_err());
    }
}
