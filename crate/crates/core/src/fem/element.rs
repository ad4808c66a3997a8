//! Local element matrices of the weak-form radial problem.
//!
//! On an element `[r_a, r_b]` the local blocks are
//!   kinetic  = (1/2) ∫ r² B_a' B_b' dr,
//!   potential = ∫ r² B_a B_b (-e^{-r}/(1-e^{-r})) dr  (coupling factored out),
//!   overlap  = ∫ r² B_a B_b dr,
//! evaluated with a fixed 4-point Gauss rule mapped onto the element. The
//! integrands are regular at the origin: r² times the screened-Coulomb shape
//! behaves like -r there.

use crate::basis::coupling_shape;
use crate::numerics::quadrature::QuadratureRule;
use crate::numerics::shape::{shape_functions, ShapeOrder};
use nalgebra::DMatrix;

#[derive(Debug, Clone)]
pub struct LocalMatrices {
    pub kinetic: DMatrix<f64>,
    pub potential: DMatrix<f64>,
    pub overlap: DMatrix<f64>,
}

/// Local matrices on `[r_a, r_b]`.
///
/// `pot_rule` (4-point Gauss in production) handles the screened-Coulomb
/// potential; `poly_rule` must be exact for the polynomial kinetic and
/// overlap integrands (degree 12 for quintic shapes with the r² weight), or
/// underintegration breaks the variational bound at the 1e-6 level.
///
/// Hermite local DOFs are (value, slope, curvature) per node, so the slope
/// and curvature shapes carry factors h and h² that convert nodal
/// r-derivatives into reference-coordinate ones.
pub fn element_matrices(
    r_a: f64,
    r_b: f64,
    order: ShapeOrder,
    pot_rule: &QuadratureRule,
    poly_rule: &QuadratureRule,
) -> LocalMatrices {
    let h = r_b - r_a;
    let set = shape_functions(order).expect("order is valid by construction");
    let nd = order.local_dofs();
    let dpn = order.dofs_per_node();

    let mut kinetic = DMatrix::zeros(nd, nd);
    let mut potential = DMatrix::zeros(nd, nd);
    let mut overlap = DMatrix::zeros(nd, nd);

    let mut val = vec![0.0; nd];
    let mut der = vec![0.0; nd];
    let scaled_shapes = |t: f64, val: &mut [f64], der: &mut [f64]| {
        let s = set.evaluate(t);
        for node in 0..2 {
            for d in 0..dpn {
                let a = node * dpn + d;
                let scale = h.powi(d as i32);
                val[a] = scale * s.value[a];
                der[a] = scale * s.d1[a] / h;
            }
        }
    };

    for (&t, &w) in poly_rule.nodes.iter().zip(&poly_rule.weights) {
        let r = r_a + h * t;
        scaled_shapes(t, &mut val, &mut der);
        let wr2 = w * h * r * r;
        for a in 0..nd {
            for b in a..nd {
                kinetic[(a, b)] += 0.5 * wr2 * der[a] * der[b];
                overlap[(a, b)] += wr2 * val[a] * val[b];
            }
        }
    }
    for (&t, &w) in pot_rule.nodes.iter().zip(&pot_rule.weights) {
        let r = r_a + h * t;
        scaled_shapes(t, &mut val, &mut der);
        let wvr2 = w * h * r * r * coupling_shape(r);
        for a in 0..nd {
            for b in a..nd {
                potential[(a, b)] += wvr2 * val[a] * val[b];
            }
        }
    }
    for a in 0..nd {
        for b in 0..a {
            kinetic[(a, b)] = kinetic[(b, a)];
            overlap[(a, b)] = overlap[(b, a)];
            potential[(a, b)] = potential[(b, a)];
        }
    }
    LocalMatrices {
        kinetic,
        potential,
        overlap,
    }
}
