//! Data-collapse check of the scaling ansatz.
//!
//! Each table row is rescaled to `x = N^{1/ν}(λ - λ_c)`, `y = E N^{α/ν}`.
//! If the ansatz holds, all size clouds fall on one universal curve; the
//! quality score is the mean squared deviation of each cloud from a cubic
//! spline through the pooled, binned points, normalized by the pooled
//! variance. Zero means a perfect collapse.

use crate::error::{Error, Result};
use crate::fss::table::ExpectationTable;

#[derive(Debug, Clone)]
pub struct CollapseCloud {
    pub n: usize,
    /// (x, y) per λ grid point.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct CollapseDataset {
    pub clouds: Vec<CollapseCloud>,
    pub quality: f64,
}

/// Natural cubic spline through strictly increasing knots.
struct Spline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl Spline {
    fn fit(xs: Vec<f64>, ys: Vec<f64>) -> Spline {
        let n = xs.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // Tridiagonal system for interior second derivatives.
            let mut sub = vec![0.0; n];
            let mut diag = vec![0.0; n];
            let mut sup = vec![0.0; n];
            let mut rhs = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                sub[i] = h0 / 6.0;
                diag[i] = (h0 + h1) / 3.0;
                sup[i] = h1 / 6.0;
                rhs[i] = (ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0;
            }
            for i in 2..n - 1 {
                let w = sub[i] / diag[i - 1];
                diag[i] -= w * sup[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            if n >= 3 {
                m[n - 2] = rhs[n - 2] / diag[n - 2];
                for i in (1..n - 2).rev() {
                    m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
                }
            }
        }
        Spline { xs, ys, m }
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if n == 1 {
            return self.ys[0];
        }
        // End segments extend beyond the knot range.
        let i = match self.xs.binary_search_by(|v| v.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        };
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

const BINS: usize = 200;

pub fn data_collapse(
    table: &ExpectationTable,
    lambda_c: f64,
    alpha: f64,
    nu: f64,
) -> Result<CollapseDataset> {
    if !(nu > 0.0) || !lambda_c.is_finite() || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "collapse needs finite parameters with ν > 0; got λ_c={lambda_c}, α={alpha}, ν={nu}"
        )));
    }
    let mut clouds = Vec::with_capacity(table.sizes.len());
    for (i, &n) in table.sizes.iter().enumerate() {
        let nf = n as f64;
        let xscale = nf.powf(1.0 / nu);
        let yscale = nf.powf(alpha / nu);
        let points: Vec<(f64, f64)> = table
            .lambdas
            .iter()
            .zip(&table.energy[i])
            .map(|(&l, &e)| (xscale * (l - lambda_c), e * yscale))
            .collect();
        clouds.push(CollapseCloud { n, points });
    }

    // Pooled, binned reference curve.
    let mut pooled: Vec<(f64, f64)> = clouds
        .iter()
        .flat_map(|c| c.points.iter().copied())
        .collect();
    pooled.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (x_min, x_max) = (pooled[0].0, pooled[pooled.len() - 1].0);
    let width = (x_max - x_min).max(f64::MIN_POSITIVE);
    let mut sums = vec![(0.0f64, 0.0f64, 0usize); BINS];
    for &(x, y) in &pooled {
        let b = (((x - x_min) / width) * BINS as f64) as usize;
        let b = b.min(BINS - 1);
        sums[b].0 += x;
        sums[b].1 += y;
        sums[b].2 += 1;
    }
    let mut knot_x = Vec::new();
    let mut knot_y = Vec::new();
    for &(sx, sy, c) in &sums {
        if c > 0 {
            knot_x.push(sx / c as f64);
            knot_y.push(sy / c as f64);
        }
    }
    let spline = Spline::fit(knot_x, knot_y);

    let mean_y: f64 = pooled.iter().map(|p| p.1).sum::<f64>() / pooled.len() as f64;
    let var_y: f64 = pooled
        .iter()
        .map(|p| (p.1 - mean_y) * (p.1 - mean_y))
        .sum::<f64>()
        / pooled.len() as f64;
    let var_y = var_y.max(f64::MIN_POSITIVE);

    let mut quality = 0.0;
    for cloud in &clouds {
        let msd: f64 = cloud
            .points
            .iter()
            .map(|&(x, y)| {
                let d = y - spline.eval(x);
                d * d
            })
            .sum::<f64>()
            / cloud.points.len() as f64;
        quality += msd;
    }
    quality /= clouds.len() as f64 * var_y;

    Ok(CollapseDataset { clouds, quality })
}
