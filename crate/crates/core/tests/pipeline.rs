//! Cross-module pipeline checks: sweep tables feeding the scaling analysis.

use qcrit_core::fem;
use qcrit_core::fss;
use qcrit_core::hulthen;
use qcrit_core::numerics::shape::ShapeOrder;
use qcrit_core::sweep::{build_table, lambda_grid, size_ladder, Method};

fn line_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// All consecutive-pair crossings for basis sizes >= 20 sit in a window of
/// width 1e-3 around the exact critical coupling.
#[test]
fn basis_crossings_cluster_at_the_critical_coupling() {
    let sizes = size_ladder(20, 32, 2).unwrap();
    let lambdas = lambda_grid(0.46, 0.56, 501).unwrap();
    let (table, _) = build_table(Method::Basis, &sizes, &lambdas, 0.5).unwrap();
    let curves = fss::consecutive_gamma_curves(&table).unwrap();
    for pair in curves.windows(2) {
        let (lstar, _) = fss::find_crossing(&pair[0], &pair[1]).unwrap();
        assert!(
            (lstar - 0.5).abs() <= 5e-4,
            "crossing of ({},{}) x ({},{}) at {lstar}",
            pair[0].n,
            pair[0].nprime,
            pair[1].n,
            pair[1].nprime
        );
    }
}

/// With the element count as the scaling size, the pseudocritical couplings
/// approach threshold monotonically in M.
#[test]
fn fem_pseudocritical_sequence_is_monotone_in_size() {
    let sizes = size_ladder(40, 68, 4).unwrap();
    let lambdas = lambda_grid(0.46, 0.56, 501).unwrap();
    let (table, _) = build_table(Method::FemHermite, &sizes, &lambdas, 0.5).unwrap();
    let seq = fss::pseudocritical_sequence(&table).unwrap();
    assert!(seq.entries.len() >= 4);
    for w in seq.entries.windows(2) {
        assert!(
            w[1].lambda_c > w[0].lambda_c,
            "λ^(M) not monotone: {:?}",
            seq.entries.iter().map(|e| e.lambda_c).collect::<Vec<_>>()
        );
    }
}

/// The fitted tail length of the Hermite ground density reproduces the
/// closed-form correlation length at λ = 1 to 2%.
#[test]
fn fem_density_tail_matches_analytic_correlation_length() {
    let mesh = fem::build_mesh(50.0, 0.5).unwrap();
    let sys = fem::assemble(&mesh, ShapeOrder::HermiteQuintic).unwrap();
    let gp = fem::ground_point(&sys, 1.0).unwrap();
    let coeffs: Vec<f64> = gp.coefficients.iter().copied().collect();
    let samples: Vec<(f64, f64)> = (0..=40)
        .map(|k| {
            let r = 15.0 + 0.25 * k as f64;
            let psi = sys.wavefunction(&coeffs, r);
            (r, r * r * psi * psi)
        })
        .collect();
    let xi_fit = fss::fit_tail_length(&samples).unwrap();
    let xi = hulthen::correlation_length(1.0, 1.0).unwrap();
    assert!(
        ((xi_fit - xi) / xi).abs() <= 0.02,
        "fit {xi_fit}, closed form {xi}"
    );
}

/// ξ(λ) fitted from ground densities diverges toward threshold with
/// exponent ν = 1: the log-log slope against λ - λ_c is -1 within 5%.
#[test]
fn tail_length_ladder_reproduces_length_exponent() {
    let mesh = fem::build_mesh(150.0, 0.5).unwrap();
    let sys = fem::assemble(&mesh, ShapeOrder::HermiteQuintic).unwrap();
    let mut pts = Vec::new();
    for lambda in [0.6, 0.58, 0.56, 0.54, 0.52] {
        let gp = fem::ground_point(&sys, lambda).unwrap();
        let coeffs: Vec<f64> = gp.coefficients.iter().copied().collect();
        let xi_guide = hulthen::correlation_length(lambda, 1.0).unwrap();
        let samples: Vec<(f64, f64)> = (0..=30)
            .map(|k| {
                let r = xi_guide + k as f64 / 30.0 * xi_guide;
                let psi = sys.wavefunction(&coeffs, r);
                (r, r * r * psi * psi)
            })
            .collect();
        let xi_fit = fss::fit_tail_length(&samples).unwrap();
        pts.push(((lambda - 0.5f64).ln(), xi_fit.ln()));
    }
    let slope = line_slope(&pts);
    assert!((slope + 1.0).abs() <= 0.05, "slope {slope}");
}

/// Residual and orthonormality contract on a production-size assembled
/// pencil (1201 degrees of freedom).
#[test]
fn residual_contract_on_large_assembled_system() {
    let mesh = fem::build_mesh(200.0, 0.5).unwrap();
    let sys = fem::assemble(&mesh, ShapeOrder::HermiteQuintic).unwrap();
    assert_eq!(sys.n_dofs, 3 * 401 - 2);
    let gp = fem::ground_point(&sys, 1.0).unwrap();
    let x: Vec<f64> = gp.coefficients.iter().copied().collect();
    let h = sys.kinetic.plus_scaled(&sys.coupling_potential, 1.0);
    let mut hx = vec![0.0; sys.n_dofs];
    let mut ux = vec![0.0; sys.n_dofs];
    h.matvec(&x, &mut hx);
    sys.overlap.matvec(&x, &mut ux);
    let resid: f64 = hx
        .iter()
        .zip(&ux)
        .map(|(&a, &b)| (a - gp.energy * b).powi(2))
        .sum::<f64>()
        .sqrt();
    let hnorm: f64 = hx.iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!(
        resid / hnorm <= 1e-10,
        "relative residual {}",
        resid / hnorm
    );
    let unorm: f64 = x.iter().zip(&ux).map(|(a, b)| a * b).sum();
    assert!((unorm - 1.0).abs() <= 1e-10);
}

/// Collapse quality, scanned over a coarse 3-axis parameter grid, is
/// minimized at the grid point nearest the true critical parameters.
#[test]
fn collapse_quality_is_minimized_at_the_true_parameters() {
    let sizes = size_ladder(8, 24, 4).unwrap();
    let lambdas = lambda_grid(0.46, 0.56, 201).unwrap();
    let (table, _) = build_table(Method::Basis, &sizes, &lambdas, 0.5).unwrap();
    let lcs = [0.49, 0.495, 0.5, 0.505, 0.51];
    let alphas = [1.6, 1.8, 2.0, 2.2, 2.4];
    let nus = [0.6, 0.8, 1.0, 1.2, 1.4];
    let mut best = (f64::INFINITY, 0.0, 0.0, 0.0);
    for &lc in &lcs {
        for &a in &alphas {
            for &nu in &nus {
                let q = fss::data_collapse(&table, lc, a, nu).unwrap().quality;
                if q < best.0 {
                    best = (q, lc, a, nu);
                }
            }
        }
    }
    assert_eq!(
        (best.1, best.2, best.3),
        (0.5, 2.0, 1.0),
        "quality minimized at ({}, {}, {}) with q = {:.3e}",
        best.1,
        best.2,
        best.3,
        best.0
    );
}

/// At fixed size the ground energy decreases monotonically in the coupling
/// across the whole sweep grid.
#[test]
fn ground_energy_is_monotone_in_the_coupling() {
    let sizes = size_ladder(8, 16, 4).unwrap();
    let lambdas = lambda_grid(0.46, 0.56, 201).unwrap();
    let (table, _) = build_table(Method::Basis, &sizes, &lambdas, 0.5).unwrap();
    for (si, row) in table.energy.iter().enumerate() {
        for w in row.windows(2) {
            assert!(
                w[1] < w[0],
                "E not decreasing in λ at N = {}",
                table.sizes[si]
            );
        }
    }
}
