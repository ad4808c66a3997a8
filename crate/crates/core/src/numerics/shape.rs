//! Local shape functions on the reference element [0, 1].

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use std::sync::OnceLock;

/// Interpolation order of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeOrder {
    Linear,
    HermiteQuintic,
}

impl ShapeOrder {
    /// Degrees of freedom carried by each node.
    pub fn dofs_per_node(self) -> usize {
        match self {
            ShapeOrder::Linear => 1,
            ShapeOrder::HermiteQuintic => 3,
        }
    }

    /// Local shape functions per element (two nodes).
    pub fn local_dofs(self) -> usize {
        2 * self.dofs_per_node()
    }
}

/// Values and first/second derivatives of all local shape functions at one
/// local coordinate.
#[derive(Debug, Clone)]
pub struct ShapeSample {
    pub value: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

/// A set of local shape functions with the interpolation property: each
/// function's defining nodal degree of freedom is 1, all others 0.
#[derive(Debug, Clone, Copy)]
pub struct ShapeFunctionSet {
    pub order: ShapeOrder,
}

/// Monomial coefficients of the six quintic Hermite shapes, row i holding
/// the coefficients of t^0..t^5 for shape i. DOF ordering per node:
/// value, slope, curvature; node 0 first.
fn hermite_coefficients() -> &'static [[f64; 6]; 6] {
    static COEFFS: OnceLock<[[f64; 6]; 6]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        // Row k of the condition matrix evaluates DOF k of a monomial t^j:
        // p(0), p'(0), p''(0), p(1), p'(1), p''(1).
        let mut cond = DMatrix::<f64>::zeros(6, 6);
        for j in 0..6usize {
            let jf = j as f64;
            cond[(0, j)] = if j == 0 { 1.0 } else { 0.0 };
            cond[(1, j)] = if j == 1 { 1.0 } else { 0.0 };
            cond[(2, j)] = if j == 2 { 2.0 } else { 0.0 };
            cond[(3, j)] = 1.0;
            cond[(4, j)] = jf;
            cond[(5, j)] = jf * (jf - 1.0);
        }
        let lu = cond.lu();
        let mut out = [[0.0; 6]; 6];
        for (i, row) in out.iter_mut().enumerate() {
            let mut e = DVector::<f64>::zeros(6);
            e[i] = 1.0;
            let c = lu
                .solve(&e)
                .expect("Hermite interpolation system is regular");
            for (j, v) in row.iter_mut().enumerate() {
                *v = c[j];
            }
        }
        out
    })
}

impl ShapeFunctionSet {
    pub fn evaluate(&self, t: f64) -> ShapeSample {
        match self.order {
            ShapeOrder::Linear => ShapeSample {
                value: vec![1.0 - t, t],
                d1: vec![-1.0, 1.0],
                d2: vec![0.0, 0.0],
            },
            ShapeOrder::HermiteQuintic => {
                let coeffs = hermite_coefficients();
                let mut value = vec![0.0; 6];
                let mut d1 = vec![0.0; 6];
                let mut d2 = vec![0.0; 6];
                for i in 0..6 {
                    let c = &coeffs[i];
                    // Horner evaluation of p, p', p''.
                    let mut v = 0.0;
                    let mut dv = 0.0;
                    let mut ddv = 0.0;
                    for j in (0..6).rev() {
                        ddv = ddv * t + 2.0 * dv;
                        dv = dv * t + v;
                        v = v * t + c[j];
                    }
                    value[i] = v;
                    d1[i] = dv;
                    d2[i] = ddv;
                }
                ShapeSample { value, d1, d2 }
            }
        }
    }
}

pub fn shape_functions(order: ShapeOrder) -> Result<ShapeFunctionSet> {
    match order {
        ShapeOrder::Linear | ShapeOrder::HermiteQuintic => Ok(ShapeFunctionSet { order }),
    }
}

/// Parse a shape order name, for CLI and config plumbing.
impl std::str::FromStr for ShapeOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(ShapeOrder::Linear),
            "hermite-quintic" | "hermite" => Ok(ShapeOrder::HermiteQuintic),
            other => Err(Error::InvalidParameter(format!(
                "unknown shape order '{other}'"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn linear_at_left_node() {
        let s = shape_functions(ShapeOrder::Linear).unwrap().evaluate(0.0);
        assert_eq!(s.value, vec![1.0, 0.0]);
    }

    #[test]
    fn linear_partition_of_unity() {
        let set = shape_functions(ShapeOrder::Linear).unwrap();
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            let s = set.evaluate(t);
            assert_relative_eq!(s.value[0] + s.value[1], 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn hermite_interpolation_conditions() {
        let set = shape_functions(ShapeOrder::HermiteQuintic).unwrap();
        let s0 = set.evaluate(0.0);
        let s1 = set.evaluate(1.0);
        // DOF k of shape i is δ_ik; DOFs are (v, v', v'') at t=0 then t=1.
        for i in 0..6 {
            let dofs = [
                s0.value[i],
                s0.d1[i],
                s0.d2[i],
                s1.value[i],
                s1.d1[i],
                s1.d2[i],
            ];
            for (k, &d) in dofs.iter().enumerate() {
                let want = if k == i { 1.0 } else { 0.0 };
                assert!(
                    (d - want).abs() < 1e-12,
                    "shape {i}, dof {k}: got {d}, want {want}"
                );
            }
        }
    }

    /// The two value shapes reproduce constants: φ₁(ξ) + φ₂(ξ) = 1, sampled
    /// at 100 points.
    #[test]
    fn hermite_value_shapes_reproduce_constants() {
        let set = shape_functions(ShapeOrder::HermiteQuintic).unwrap();
        for k in 0..=100 {
            let t = k as f64 / 100.0;
            let s = set.evaluate(t);
            assert!(
                (s.value[0] + s.value[3] - 1.0).abs() < 1e-13,
                "t={t}: {}",
                s.value[0] + s.value[3]
            );
        }
    }

    #[test]
    fn hermite_matches_known_quintic_value_shape() {
        // φ₁(t) = 1 - 10t³ + 15t⁴ - 6t⁵ is the classical quintic Hermite
        // value shape.
        let set = shape_functions(ShapeOrder::HermiteQuintic).unwrap();
        for t in [0.1, 0.35, 0.5, 0.8] {
            let s = set.evaluate(t);
            let expect = 1.0 - 10.0 * t.powi(3) + 15.0 * t.powi(4) - 6.0 * t.powi(5);
            assert_relative_eq!(s.value[0], expect, epsilon = 1e-13);
        }
    }
}
