//! Symmetric banded matrices and the lowest eigenpair of a banded pencil.
//!
//! Assembled finite-element systems are banded with half-bandwidth 1 (linear)
//! or 5 (Hermite quintic). Sweeping a fine coupling grid over ladders of a
//! thousand or more degrees of freedom makes a full dense decomposition per
//! grid point far too slow, so the pencil `H ψ = ε U ψ` is solved here by
//! Sturm-count bisection on banded LDLᵀ factorizations followed by inverse
//! iteration, all deterministic. The dense solver in [`super::eigen`] remains
//! the reference oracle for this path.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Symmetric banded matrix in lower-band storage:
/// `data[d * n + j] = A[j + d][j]` for `0 <= d <= hb`, `j + d < n`.
#[derive(Debug, Clone)]
pub struct SymBanded {
    pub n: usize,
    pub hb: usize,
    data: Vec<f64>,
}

impl SymBanded {
    pub fn zeros(n: usize, hb: usize) -> Self {
        SymBanded {
            n,
            hb,
            data: vec![0.0; (hb + 1) * n],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d > self.hb {
            0.0
        } else {
            self.data[d * self.n + lo]
        }
    }

    /// Add `v` to the (i, j) entry; only the lower triangle is stored.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        debug_assert!(d <= self.hb, "entry ({i},{j}) outside band");
        self.data[d * self.n + lo] += v;
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        debug_assert!(d <= self.hb, "entry ({i},{j}) outside band");
        self.data[d * self.n + lo] = v;
    }

    /// `self + t * other`, same shape and bandwidth.
    pub fn plus_scaled(&self, other: &SymBanded, t: f64) -> SymBanded {
        assert_eq!(self.n, other.n);
        assert_eq!(self.hb, other.hb);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a + t * b)
            .collect();
        SymBanded {
            n: self.n,
            hb: self.hb,
            data,
        }
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n;
        y[..n].fill(0.0);
        for d in 0..=self.hb {
            let band = &self.data[d * n..d * n + (n - d)];
            if d == 0 {
                for (j, &a) in band.iter().enumerate() {
                    y[j] += a * x[j];
                }
            } else {
                for (j, &a) in band.iter().enumerate() {
                    y[j + d] += a * x[j];
                    y[j] += a * x[j + d];
                }
            }
        }
    }

    /// y = |A| |x|, the componentwise-magnitude product that bounds the
    /// round-off incurred by `matvec`.
    pub fn abs_matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n;
        y[..n].fill(0.0);
        for d in 0..=self.hb {
            let band = &self.data[d * n..d * n + (n - d)];
            if d == 0 {
                for (j, &a) in band.iter().enumerate() {
                    y[j] += a.abs() * x[j].abs();
                }
            } else {
                for (j, &a) in band.iter().enumerate() {
                    y[j + d] += a.abs() * x[j].abs();
                    y[j] += a.abs() * x[j + d].abs();
                }
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for j in 0..self.n {
            for d in 0..=self.hb.min(self.n - 1 - j) {
                let v = self.data[d * self.n + j];
                m[(j + d, j)] = v;
                m[(j, j + d)] = v;
            }
        }
        m
    }

    /// Raw band storage, for bit-exact comparisons.
    pub fn band_data(&self) -> &[f64] {
        &self.data
    }
}

/// Number of eigenvalues of `H x = ε U x` strictly below `sigma`, via the
/// signs of the pivots of the banded LDLᵀ factorization of `H - σU`.
/// Returns `None` when a pivot collapses (σ effectively on an eigenvalue of a
/// leading submatrix); callers retry with a perturbed shift.
fn inertia_below_raw(h: &SymBanded, u: &SymBanded, sigma: f64) -> Option<usize> {
    let n = h.n;
    let hb = h.hb;
    let w = hb + 1;
    // Working copy of the lower band of H - σU, column-major within the band.
    let mut a = vec![0.0f64; w * n];
    for d in 0..w {
        for j in 0..n.saturating_sub(d) {
            a[j * w + d] = h.data[d * n + j] - sigma * u.data[d * n + j];
        }
    }
    let mut negatives = 0usize;
    for j in 0..n {
        let d = a[j * w];
        if d == 0.0 || d.abs() < 1e-290 {
            return None;
        }
        if d < 0.0 {
            negatives += 1;
        }
        let reach = hb.min(n - 1 - j);
        // Trailing update: A[r][c] -= A[r][j] A[c][j] / d for j < c <= r <= j+reach.
        for c in 1..=reach {
            let ljc = a[j * w + c];
            if ljc == 0.0 {
                continue;
            }
            let f = ljc / d;
            for r in c..=reach {
                a[(j + c) * w + (r - c)] -= f * a[j * w + r];
            }
        }
    }
    Some(negatives)
}

/// Inertia count with deterministic shift perturbation on pivot breakdown.
pub fn inertia_below(h: &SymBanded, u: &SymBanded, sigma: f64) -> Result<usize> {
    let mut s = sigma;
    for attempt in 0..8 {
        if let Some(c) = inertia_below_raw(h, u, s) {
            return Ok(c);
        }
        let bump = 2.0f64.powi(attempt) * 1e-13 * (1.0 + sigma.abs());
        s = sigma + bump;
    }
    Err(Error::Numerical(format!(
        "LDLT pivot breakdown persisted near shift {sigma}"
    )))
}

/// LU factorization of a banded matrix with partial pivoting (LAPACK gbtrf
/// layout: `ab[kl + ku + i - j, j]` holds A(i,j), with `kl` extra rows of
/// fill space).
struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<f64>,
    ipiv: Vec<usize>,
}

impl BandLu {
    /// Factor `H - σU`.
    fn factor_shifted(h: &SymBanded, u: &SymBanded, sigma: f64) -> Result<Self> {
        let n = h.n;
        let kl = h.hb;
        let ku = h.hb;
        let ldab = 2 * kl + ku + 1;
        let kv = kl + ku;
        let mut ab = vec![0.0f64; ldab * n];
        for j in 0..n {
            for d in 0..=kl.min(n - 1 - j) {
                let v = h.data[d * n + j] - sigma * u.data[d * n + j];
                // A(j+d, j) and its mirror A(j, j+d).
                ab[j * ldab + kv + d] = v;
                if d > 0 {
                    ab[(j + d) * ldab + kv - d] = v;
                }
            }
        }

        let mut ipiv = vec![0usize; n];
        let mut ju = 0usize;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let col = j * ldab;
            let mut jp = 0usize;
            let mut amax = ab[col + kv].abs();
            for p in 1..=km {
                let v = ab[col + kv + p].abs();
                if v > amax {
                    amax = v;
                    jp = p;
                }
            }
            ipiv[j] = j + jp;
            let piv = ab[col + kv + jp];
            if piv == 0.0 {
                return Err(Error::Numerical(format!(
                    "exactly singular shifted matrix at column {j}"
                )));
            }
            ju = ju.max((j + ku + jp).min(n - 1));
            if jp != 0 {
                for c in j..=ju {
                    let i1 = c * ldab + kv + (j + jp) - c;
                    let i2 = c * ldab + kv + j - c;
                    ab.swap(i1, i2);
                }
            }
            if km > 0 {
                let inv = 1.0 / ab[col + kv];
                for p in 1..=km {
                    ab[col + kv + p] *= inv;
                }
                for c in (j + 1)..=ju {
                    let ajc = ab[c * ldab + kv + j - c];
                    if ajc != 0.0 {
                        for p in 1..=km {
                            ab[c * ldab + kv + j + p - c] -= ab[col + kv + p] * ajc;
                        }
                    }
                }
            }
        }
        Ok(BandLu {
            n,
            kl,
            ku,
            ldab,
            ab,
            ipiv,
        })
    }

    fn solve_in_place(&self, b: &mut [f64]) {
        let (n, kl, ku, ldab) = (self.n, self.kl, self.ku, self.ldab);
        let kv = kl + ku;
        for j in 0..n.saturating_sub(1) {
            let p = self.ipiv[j];
            if p != j {
                b.swap(p, j);
            }
            let km = kl.min(n - 1 - j);
            for i in 1..=km {
                b[j + i] -= self.ab[j * ldab + kv + i] * b[j];
            }
        }
        for j in (0..n).rev() {
            b[j] /= self.ab[j * ldab + kv];
            let top = j.saturating_sub(kl + ku);
            for i in top..j {
                b[i] -= self.ab[j * ldab + kv + i - j] * b[j];
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Lowest eigenpair of `H x = ε U x` inside a bracket that is widened until
/// it provably contains the smallest eigenvalue.
///
/// The eigenvector is returned U-normalized with canonical sign.
pub fn lowest_eigenpair(
    h: &SymBanded,
    u: &SymBanded,
    lo0: f64,
    hi0: f64,
) -> Result<(f64, Vec<f64>)> {
    let n = h.n;
    let width0 = (hi0 - lo0).max(1.0);

    let mut lo = lo0;
    let mut step = width0;
    let mut guard = 0;
    while inertia_below(h, u, lo)? > 0 {
        lo -= step;
        step *= 2.0;
        guard += 1;
        if guard > 60 {
            return Err(Error::Numerical(
                "could not bracket the lowest eigenvalue from below".into(),
            ));
        }
    }
    let mut hi = hi0;
    step = width0;
    guard = 0;
    while inertia_below(h, u, hi)? == 0 {
        hi += step;
        step *= 2.0;
        guard += 1;
        if guard > 60 {
            return Err(Error::Numerical(
                "could not bracket the lowest eigenvalue from above".into(),
            ));
        }
    }

    // Bisect until the bracket pins the eigenvalue to near round-off.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if hi - lo <= 1e-14 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if inertia_below(h, u, mid)? == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Inverse iteration with the shift parked just below the eigenvalue.
    let gap = (hi - lo).max(1e-15 * (1.0 + lo.abs()));
    let sigma = lo - 10.0 * gap;
    let lu = BandLu::factor_shifted(h, u, sigma)?;

    let mut x = vec![1.0f64; n];
    let mut ux = vec![0.0f64; n];
    u.matvec(&x, &mut ux);
    let unorm = dot(&x, &ux).sqrt();
    x.iter_mut().for_each(|v| *v /= unorm);

    let mut hx = vec![0.0f64; n];
    let mut habsx = vec![0.0f64; n];
    let mut theta = 0.0;
    let mut converged = false;
    for _ in 0..30 {
        u.matvec(&x, &mut ux);
        let mut y = ux.clone();
        lu.solve_in_place(&mut y);
        u.matvec(&y, &mut ux);
        let ynorm = dot(&y, &ux).sqrt();
        if !ynorm.is_finite() || ynorm == 0.0 {
            return Err(Error::Numerical(
                "inverse iteration produced a degenerate vector".into(),
            ));
        }
        y.iter_mut().for_each(|v| *v /= ynorm);
        x = y;

        u.matvec(&x, &mut ux);
        h.matvec(&x, &mut hx);
        theta = dot(&x, &hx) / dot(&x, &ux);
        let mut resid = 0.0f64;
        let mut hnorm = 0.0f64;
        for i in 0..n {
            let r = hx[i] - theta * ux[i];
            resid += r * r;
            hnorm += hx[i] * hx[i];
        }
        // Near the continuum threshold ‖Hx‖ itself goes to zero through
        // cancellation while the round-off of forming Hx stays at machine
        // epsilon times the componentwise scale ‖|H||x|‖, so the relative
        // test gets that floor.
        h.abs_matvec(&x, &mut habsx);
        let floor = 50.0 * f64::EPSILON * norm2(&habsx);
        let tol = (1e-11 * hnorm.sqrt()).max(floor);
        if resid.sqrt() <= tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "inverse iteration stalled near ε = {theta} (bracket [{lo}, {hi}])"
        )));
    }

    // Canonical sign on the largest component.
    let mut best = 0usize;
    let mut mag = 0.0;
    for (i, &v) in x.iter().enumerate() {
        if v.abs() > mag {
            mag = v.abs();
            best = i;
        }
    }
    if x[best] < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
    Ok((theta, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eigen::solve_generalized_symmetric;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_banded_pencil(rng: &mut impl Rng, n: usize, hb: usize) -> (SymBanded, SymBanded) {
        let mut h = SymBanded::zeros(n, hb);
        let mut u = SymBanded::zeros(n, hb);
        for j in 0..n {
            for d in 0..=hb.min(n - 1 - j) {
                h.set(j + d, j, rng.gen_range(-1.0..1.0));
                if d == 0 {
                    u.set(j, j, rng.gen_range(1.0..2.0) + hb as f64);
                } else {
                    u.set(j + d, j, rng.gen_range(-0.2..0.2));
                }
            }
        }
        (h, u)
    }

    #[test]
    fn matvec_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (h, _) = random_banded_pencil(&mut rng, 17, 3);
        let x: Vec<f64> = (0..17).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut y = vec![0.0; 17];
        h.matvec(&x, &mut y);
        let dense = h.to_dense();
        let yd = dense * nalgebra::DVector::from_column_slice(&x);
        for i in 0..17 {
            assert_relative_eq!(y[i], yd[i], epsilon = 1e-13);
        }
    }

    #[test]
    fn inertia_counts_match_dense_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (h, u) = random_banded_pencil(&mut rng, 30, 4);
        let sol = solve_generalized_symmetric(&h.to_dense(), &u.to_dense(), 30).unwrap();
        for sigma in [-2.0, -0.5, -0.1, 0.0, 0.1, 0.5, 2.0] {
            let count = inertia_below(&h, &u, sigma).unwrap();
            let want = sol.eigenvalues.iter().filter(|&&e| e < sigma).count();
            assert_eq!(count, want, "sigma = {sigma}");
        }
    }

    #[test]
    fn lowest_eigenpair_matches_dense_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(n, hb) in &[(25usize, 1usize), (40, 5), (90, 5)] {
            let (h, u) = random_banded_pencil(&mut rng, n, hb);
            let (eps, x) = lowest_eigenpair(&h, &u, -5.0, 5.0).unwrap();
            let dense = solve_generalized_symmetric(&h.to_dense(), &u.to_dense(), 1).unwrap();
            assert_relative_eq!(eps, dense.eigenvalues[0], epsilon = 1e-11);

            let mut hx = vec![0.0; n];
            let mut ux = vec![0.0; n];
            h.matvec(&x, &mut hx);
            u.matvec(&x, &mut ux);
            let resid: f64 = hx
                .iter()
                .zip(&ux)
                .map(|(&a, &b)| (a - eps * b).powi(2))
                .sum::<f64>()
                .sqrt();
            let hnorm: f64 = hx.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(resid / hnorm <= 1e-10, "residual {}", resid / hnorm);
            // U-normalized.
            let g = dot(&x, &ux);
            assert_relative_eq!(g, 1.0, epsilon = 1e-10);
        }
    }
}
