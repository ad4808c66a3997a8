//! Associated Laguerre polynomials of order 2, used by the Slater basis.

use crate::error::{Error, Result};

/// `L_n^{(2)}(r)` by the forward three-term recurrence.
///
/// Stable for the orders this crate needs (n <= ~60 over the quadrature
/// range).
pub fn laguerre_l2(n: i64, r: f64) -> Result<f64> {
    if n < 0 {
        return Err(Error::InvalidParameter(format!(
            "laguerre_l2 needs n >= 0, got {n}"
        )));
    }
    Ok(laguerre_l2_scaled(n as usize, r) * (0.5 * r).exp())
}

/// `e^{-r/2} L_n^{(2)}(r)`.
///
/// The exponential is folded into the recurrence seed so products of two
/// scaled values never leave f64 range, even at quadrature nodes past
/// r ~ 1000.
pub fn laguerre_l2_scaled(n: usize, r: f64) -> f64 {
    let s = (-0.5 * r).exp();
    let mut lm = s; // L_0^{(2)} = 1
    if n == 0 {
        return lm;
    }
    let mut l = s * (3.0 - r); // L_1^{(2)} = 3 - r
    for k in 1..n {
        let kf = k as f64;
        // (k+1) L_{k+1}^{(2)} = (2k+3-r) L_k^{(2)} - (k+2) L_{k-1}^{(2)}
        let lp = ((2.0 * kf + 3.0 - r) * l - (kf + 2.0) * lm) / (kf + 1.0);
        lm = l;
        l = lp;
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::gauss_legendre;
    use approx::assert_relative_eq;

    #[test]
    fn degree_zero_is_one() {
        for r in [0.0, 0.3, 1.7, 25.0] {
            assert_relative_eq!(laguerre_l2(0, r).unwrap(), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn degree_one_is_three_minus_r() {
        for r in [0.0, 0.5, 3.0, 11.25] {
            assert_relative_eq!(laguerre_l2(1, r).unwrap(), 3.0 - r, epsilon = 1e-12);
        }
    }

    #[test]
    fn degree_two_closed_form() {
        // L_2^{(2)}(r) = (r^2 - 8r + 12) / 2
        for r in [0.0, 1.0, 2.5, 6.0] {
            let expect = (r * r - 8.0 * r + 12.0) / 2.0;
            assert_relative_eq!(laguerre_l2(2, r).unwrap(), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn negative_degree_rejected() {
        assert!(laguerre_l2(-1, 1.0).is_err());
    }

    /// ∫_0^∞ r^2 e^{-r} L_m^{(2)} L_n^{(2)} dr = δ_mn (n+1)(n+2),
    /// checked against composite Gauss-Legendre on [0, 250], which does not
    /// share any code with the Laguerre recurrence path being verified.
    #[test]
    fn weighted_orthogonality_against_composite_legendre_oracle() {
        let panels: Vec<_> = (0..25)
            .map(|p| gauss_legendre(40, 10.0 * p as f64, 10.0 * (p + 1) as f64).unwrap())
            .collect();
        for m in 0..=10usize {
            for n in 0..=10usize {
                let mut val = 0.0;
                for rule in &panels {
                    val += rule
                        .integrate(|r| r * r * laguerre_l2_scaled(m, r) * laguerre_l2_scaled(n, r));
                }
                let expect = if m == n {
                    (n as f64 + 1.0) * (n as f64 + 2.0)
                } else {
                    0.0
                };
                assert!(
                    (val - expect).abs() <= 1e-10,
                    "m={m} n={n}: got {val}, want {expect}"
                );
            }
        }
    }
}
