//! Global assembly and the generalized eigenproblem of the radial FEM.

use crate::basis::GroundPoint;
use crate::error::{Error, Result};
use crate::fem::element::element_matrices;
use crate::fem::mesh::Mesh;
use crate::fem::tail::tail_correction;
use crate::numerics::banded::{lowest_eigenpair, SymBanded};
use crate::numerics::quadrature::gauss_legendre;
use crate::numerics::shape::{shape_functions, ShapeOrder};
use nalgebra::DVector;

/// Globally assembled matrices of `H(λ) ψ = ε U ψ`.
///
/// No essential condition is imposed at the origin: the r² weight of the
/// weak form already enforces regularity there, and constraining ψ(0) = 0
/// would be wrong for s-states. The only boundary handling is the decaying
/// tail beyond r_c: its scalar integrals are added at the last value DOF,
/// and for Hermite elements the last node's slope and curvature DOFs are
/// tied to the value DOF by the profile (slope = -value, curvature = +value).
#[derive(Debug, Clone)]
pub struct AssembledSystem {
    pub kinetic: SymBanded,
    pub coupling_potential: SymBanded,
    pub overlap: SymBanded,
    /// Pre-reduction global DOF indices per element.
    pub dof_map: Vec<Vec<usize>>,
    pub order: ShapeOrder,
    pub mesh: Mesh,
    /// System size after tying the tail DOFs.
    pub n_dofs: usize,
}

pub fn assemble(mesh: &Mesh, order: ShapeOrder) -> Result<AssembledSystem> {
    assemble_impl(mesh, order, true)
}

/// Assembly without the infinite tail (natural boundary at r_c); kept for
/// diagnosing how much the tail moves the spectrum.
#[cfg(test)]
pub(crate) fn assemble_open(mesh: &Mesh, order: ShapeOrder) -> Result<AssembledSystem> {
    assemble_impl(mesh, order, false)
}

fn assemble_impl(mesh: &Mesh, order: ShapeOrder, with_tail: bool) -> Result<AssembledSystem> {
    let m = mesh.element_count();
    if m == 0 {
        return Err(Error::InvalidParameter("empty mesh".into()));
    }
    let dpn = order.dofs_per_node();
    let full = (m + 1) * dpn;
    let hb = 2 * dpn - 1;

    let mut kinetic = SymBanded::zeros(full, hb);
    let mut potential = SymBanded::zeros(full, hb);
    let mut overlap = SymBanded::zeros(full, hb);

    // 4-point Gauss for the potential; a rule exact for the degree-12
    // polynomial kinetic/overlap integrands of the quintic shapes.
    let pot_rule = gauss_legendre(4, 0.0, 1.0)?;
    let poly_rule = gauss_legendre(7, 0.0, 1.0)?;
    let dof_map: Vec<Vec<usize>> = (0..m).map(|e| (e * dpn..(e + 2) * dpn).collect()).collect();

    // Fixed summation order by left endpoint, so a permuted element list
    // assembles bit-identically.
    let mut order_idx: Vec<usize> = (0..m).collect();
    order_idx.sort_by(|&a, &b| mesh.elements[a].0.total_cmp(&mesh.elements[b].0));

    for &e in &order_idx {
        let (ra, rb) = mesh.elements[e];
        let local = element_matrices(ra, rb, order, &pot_rule, &poly_rule);
        let base = (ra / mesh.h).round() as usize * dpn;
        let nd = order.local_dofs();
        for a in 0..nd {
            for b in 0..nd {
                let (ga, gb) = (base + a, base + b);
                if ga >= gb {
                    kinetic.add(ga, gb, local.kinetic[(a, b)]);
                    potential.add(ga, gb, local.potential[(a, b)]);
                    overlap.add(ga, gb, local.overlap[(a, b)]);
                }
            }
        }
    }

    if !with_tail {
        return Ok(AssembledSystem {
            kinetic,
            coupling_potential: potential,
            overlap,
            dof_map,
            order,
            mesh: mesh.clone(),
            n_dofs: full,
        });
    }

    let tail = tail_correction(mesh.r_c)?;
    let (kinetic, potential, overlap, n_dofs) = match order {
        ShapeOrder::Linear => {
            let q = full - 1;
            kinetic.add(q, q, tail.kinetic);
            potential.add(q, q, tail.coupling_potential);
            overlap.add(q, q, tail.overlap);
            (kinetic, potential, overlap, full)
        }
        ShapeOrder::HermiteQuintic => {
            // Fold slope and curvature of the last node into its value DOF
            // with weights (-1, +1), then add the tail scalars there.
            let q = full - 3;
            let fold = |a: &SymBanded, extra: f64| {
                let mut out = SymBanded::zeros(q + 1, hb);
                for j in 0..q {
                    for d in 0..=hb.min(q - 1 - j) {
                        out.set(j + d, j, a.get(j + d, j));
                    }
                }
                for i in q.saturating_sub(hb)..q {
                    let v = a.get(i, q) - a.get(i, q + 1) + a.get(i, q + 2);
                    out.set(q, i, v);
                }
                let vqq = a.get(q, q) + a.get(q + 1, q + 1) + a.get(q + 2, q + 2)
                    - 2.0 * a.get(q, q + 1)
                    + 2.0 * a.get(q, q + 2)
                    - 2.0 * a.get(q + 1, q + 2)
                    + extra;
                out.set(q, q, vqq);
                out
            };
            let k = fold(&kinetic, tail.kinetic);
            let v = fold(&potential, tail.coupling_potential);
            let u = fold(&overlap, tail.overlap);
            (k, v, u, q + 1)
        }
    };

    Ok(AssembledSystem {
        kinetic,
        coupling_potential: potential,
        overlap,
        dof_map,
        order,
        mesh: mesh.clone(),
        n_dofs,
    })
}

/// Lowest eigenpair of the assembled pencil at coupling λ.
///
/// The smallest eigenvalue is bracketed from below by the Coulomb bound
/// E ≥ -λ²/2 (the Hulthén potential dominates -λ/r pointwise), with margin.
pub fn ground_point(system: &AssembledSystem, lambda: f64) -> Result<GroundPoint> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "coupling must be >= 0, got {lambda}"
        )));
    }
    let h = system
        .kinetic
        .plus_scaled(&system.coupling_potential, lambda);
    let lo = -0.6 * lambda * lambda - 0.5;
    let (energy, x) = lowest_eigenpair(&h, &system.overlap, lo, 1.0)?;
    let mut vx = vec![0.0; system.n_dofs];
    system.coupling_potential.matvec(&x, &mut vx);
    let dv = x.iter().zip(&vx).map(|(a, b)| a * b).sum();
    Ok(GroundPoint {
        lambda,
        size: system.mesh.element_count(),
        energy,
        dv_expectation: dv,
        coefficients: DVector::from_vec(x),
    })
}

impl AssembledSystem {
    /// Evaluate the wavefunction of a solution vector at radius r, using the
    /// local shape expansion inside the mesh and the exponential profile
    /// beyond the cutoff.
    pub fn wavefunction(&self, coeffs: &[f64], r: f64) -> f64 {
        let dpn = self.order.dofs_per_node();
        let m = self.mesh.element_count();
        let full = (m + 1) * dpn;
        // Re-expand tied tail DOFs.
        let mut x = vec![0.0; full];
        x[..coeffs.len()].copy_from_slice(coeffs);
        if self.order == ShapeOrder::HermiteQuintic && self.n_dofs == full - 2 {
            let q = full - 3;
            x[q + 1] = -coeffs[q];
            x[q + 2] = coeffs[q];
        }
        if r >= self.mesh.r_c {
            let psi_rc = x[full - dpn];
            return psi_rc * (-(r - self.mesh.r_c)).exp();
        }
        let e = ((r / self.mesh.h).floor() as usize).min(m - 1);
        let (ra, rb) = self.mesh.elements[e];
        let h = rb - ra;
        let t = (r - ra) / h;
        let set = shape_functions(self.order).expect("valid order");
        let s = set.evaluate(t);
        let mut psi = 0.0;
        for node in 0..2 {
            for d in 0..dpn {
                let a = node * dpn + d;
                psi += x[e * dpn + a] * h.powi(d as i32) * s.value[a];
            }
        }
        psi
    }
}
