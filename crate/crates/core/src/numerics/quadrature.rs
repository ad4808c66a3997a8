//! Gaussian quadrature rules.
//!
//! `gauss_legendre` builds rules on finite intervals; `gauss_laguerre` builds
//! half-line rules for integrands that decay like `e^{-x}` times a slowly
//! varying factor. Nodes are found by Newton iteration on the orthogonal
//! polynomial, using scaled recurrences so that high orders (several hundred
//! points) stay inside f64 range.

use crate::error::{Error, Result};

/// A quadrature rule on a finite interval `[a, b]`.
///
/// An `n`-point rule integrates polynomials of degree `<= 2n - 1` exactly;
/// `degree` records that bound.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub degree: usize,
}

impl QuadratureRule {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre rule with `n` points on `[a, b]`.
///
/// Nodes are the roots of `P_n`, refined by Newton iteration to ~1e-15 and
/// symmetrized about the midpoint so the rule is exactly mirror-symmetric.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!(
            "gauss_legendre needs n >= 1, got {n}"
        )));
    }
    if !(a < b) {
        return Err(Error::InvalidParameter(format!(
            "gauss_legendre needs a < b, got [{a}, {b}]"
        )));
    }

    // Roots on [-1, 1]; only the lower half is computed, the rest mirrored.
    let m = n.div_ceil(2);
    let mut ref_nodes = vec![0.0f64; n];
    let mut ref_weights = vec![0.0f64; n];
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, z);
            let dz = p / dp;
            z -= dz;
            if dz.abs() <= 1e-15 * (1.0 + z.abs()) {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, z);
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        // cos() above starts from the largest root; store ascending.
        ref_nodes[n - 1 - i] = z;
        ref_weights[n - 1 - i] = w;
        ref_nodes[i] = -z;
        ref_weights[i] = w;
    }
    if n % 2 == 1 {
        ref_nodes[n / 2] = 0.0;
    }

    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let nodes = ref_nodes.iter().map(|&z| mid + half * z).collect();
    let weights = ref_weights.iter().map(|&w| w * half).collect();
    Ok(QuadratureRule {
        nodes,
        weights,
        degree: 2 * n - 1,
    })
}

/// Half-line quadrature for integrands with an `e^{-x}` envelope.
///
/// The rule approximates `∫_0^∞ g(x) dx ≈ Σ w_k g(x_k)` and is exact whenever
/// `e^{x} g(x)` is a polynomial of degree `<= 2n - 1`. The stored weights are
/// the Gauss–Laguerre weights multiplied by `e^{x_k}`, which keeps them
/// representable at high order (the bare weights underflow beyond x ~ 700).
#[derive(Debug, Clone)]
pub struct HalfLineRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl HalfLineRule {
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Scaled Laguerre values `e^{-x/2} L_k(x)` for k = n-1, n, n+1.
fn scaled_laguerre_triplet(n: usize, x: f64) -> (f64, f64, f64) {
    let s = (-0.5 * x).exp();
    let mut lm = s; // L_0 scaled
    let mut l = s * (1.0 - x); // L_1 scaled
    if n == 0 {
        // (L_{-1} unused) return (_, L_0, L_1)
        return (0.0, lm, l);
    }
    for k in 1..n {
        let kf = k as f64;
        let lp = ((2.0 * kf + 1.0 - x) * l - kf * lm) / (kf + 1.0);
        lm = l;
        l = lp;
    }
    let nf = n as f64;
    let lnext = ((2.0 * nf + 1.0 - x) * l - nf * lm) / (nf + 1.0);
    (lm, l, lnext)
}

/// Gauss–Laguerre rule (weight `e^{-x}`, alpha = 0) with scaled weights.
pub fn gauss_laguerre(n: usize) -> Result<HalfLineRule> {
    if n < 1 {
        return Err(Error::InvalidParameter(format!(
            "gauss_laguerre needs n >= 1, got {n}"
        )));
    }
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let nf = n as f64;
    let mut z = 0.0f64;
    for i in 0..n {
        // Stroud–Secrest style initial guesses, then Newton.
        if i == 0 {
            z = 3.0 / (1.0 + 2.4 * nf);
        } else if i == 1 {
            z += 15.0 / (1.0 + 2.5 * nf);
        } else {
            let ai = (i - 1) as f64;
            z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2]);
        }
        for _ in 0..200 {
            let (lm, l, _) = scaled_laguerre_triplet(n, z);
            // x L_n' = n (L_n - L_{n-1}); same relation holds for scaled values.
            let dl = nf * (l - lm) / z;
            let dz = l / dl;
            z -= dz;
            if dz.abs() <= 1e-14 * (1.0 + z.abs()) {
                break;
            }
        }
        let (_, _, lnext) = scaled_laguerre_triplet(n, z);
        // w_k e^{x_k} = x_k / ((n+1)^2 [e^{-x_k/2} L_{n+1}(x_k)]^2)
        let d = (nf + 1.0) * lnext;
        nodes[i] = z;
        weights[i] = z / (d * d);
    }
    Ok(HalfLineRule { nodes, weights })
}
