//! Parallel construction of expectation tables over (size, λ) ladders.
//!
//! Ground-point evaluations are independent, so each size runs as its own
//! task and λ points fan out beneath it. Results are collected in (size, λ)
//! index order, which keeps the output bit-identical for any thread count.

use crate::basis;
use crate::error::{Error, Result};
use crate::fem;
use crate::fss::ExpectationTable;
use crate::numerics::shape::ShapeOrder;
use rayon::prelude::*;
use std::time::Instant;

/// Which discretization feeds the scaling analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Basis,
    FemLinear,
    FemHermite,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Basis => "basis",
            Method::FemLinear => "fem-linear",
            Method::FemHermite => "fem-hermite",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basis" => Ok(Method::Basis),
            "fem-linear" => Ok(Method::FemLinear),
            "fem-hermite" => Ok(Method::FemHermite),
            other => Err(Error::InvalidParameter(format!(
                "unknown method '{other}' (expected basis, fem-linear or fem-hermite)"
            ))),
        }
    }
}

/// Wall-clock seconds spent on one ladder size.
#[derive(Debug, Clone, Copy)]
pub struct SizeTiming {
    pub size: usize,
    pub seconds: f64,
}

/// Integer ladder `min..=max` in steps of `step`.
pub fn size_ladder(min: usize, max: usize, step: usize) -> Result<Vec<usize>> {
    if step == 0 || min > max {
        return Err(Error::InvalidParameter(format!(
            "bad size ladder {min}:{max}:{step}"
        )));
    }
    Ok((min..=max).step_by(step).collect())
}

/// Uniform λ-grid with `count` points on [min, max].
pub fn lambda_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(min < max) {
        return Err(Error::InvalidParameter(format!(
            "bad λ grid {min}:{max}:{count}"
        )));
    }
    Ok((0..count)
        .map(|k| min + (max - min) * k as f64 / (count - 1) as f64)
        .collect())
}

fn size_row(method: Method, n: usize, lambdas: &[f64], h: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let points: Vec<basis::GroundPoint> = match method {
        Method::Basis => {
            let pair = basis::build_operator_pair(n)
                .map_err(|e| Error::Numerical(format!("basis N={n}: {e}")))?;
            lambdas
                .par_iter()
                .map(|&l| {
                    basis::ground_point(&pair, l)
                        .map_err(|e| Error::Numerical(format!("basis N={n}, λ={l}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?
        }
        Method::FemLinear | Method::FemHermite => {
            let order = if method == Method::FemLinear {
                ShapeOrder::Linear
            } else {
                ShapeOrder::HermiteQuintic
            };
            let mesh = fem::build_mesh(n as f64 * h, h)
                .map_err(|e| Error::Numerical(format!("fem M={n}: {e}")))?;
            let sys = fem::assemble(&mesh, order)
                .map_err(|e| Error::Numerical(format!("fem M={n}: {e}")))?;
            lambdas
                .par_iter()
                .map(|&l| {
                    fem::ground_point(&sys, l)
                        .map_err(|e| Error::Numerical(format!("fem M={n}, λ={l}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok((
        points.iter().map(|p| p.energy).collect(),
        points.iter().map(|p| p.dv_expectation).collect(),
    ))
}

/// Energy and ⟨V⟩ for every (size, λ) of the ladder.
///
/// `h` is the element length; ignored by the basis method. For FEM ladders
/// the cutoff grows with the element count, r_c = N·h.
pub fn build_table(
    method: Method,
    sizes: &[usize],
    lambdas: &[f64],
    h: f64,
) -> Result<(ExpectationTable, Vec<SizeTiming>)> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("empty size ladder".into()));
    }
    let rows: Vec<(Vec<f64>, Vec<f64>, SizeTiming)> = sizes
        .par_iter()
        .map(|&n| {
            let start = Instant::now();
            let (e, dv) = size_row(method, n, lambdas, h)?;
            Ok((
                e,
                dv,
                SizeTiming {
                    size: n,
                    seconds: start.elapsed().as_secs_f64(),
                },
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut energy = Vec::with_capacity(rows.len());
    let mut dv = Vec::with_capacity(rows.len());
    let mut timings = Vec::with_capacity(rows.len());
    for (e, d, t) in rows {
        energy.push(e);
        dv.push(d);
        timings.push(t);
    }
    let table = ExpectationTable::new(method.tag(), sizes.to_vec(), lambdas.to_vec(), energy, dv)?;
    Ok((table, timings))
}
