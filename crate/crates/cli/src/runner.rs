//! Sweep orchestration, CSV persistence, and run reports.

use crate::config::RunConfig;
use crate::CliError;
use qcrit_core::fss::{self, ExpectationTable};
use qcrit_core::hulthen;
use qcrit_core::larged;
use qcrit_core::sweep::{self, SizeTiming};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything a run reports: reproducible body plus a timing header.
#[derive(Debug, Default)]
pub struct RunReport {
    pub title: String,
    pub config_echo: String,
    /// Non-reproducible header lines (timestamp, timings).
    pub header: Vec<String>,
    /// Reproducible body lines.
    pub body: Vec<String>,
    pub manifest: Vec<PathBuf>,
}

impl RunReport {
    fn new(title: &str, cfg: &RunConfig) -> Self {
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunReport {
            title: title.to_string(),
            config_echo: cfg.echo(),
            header: vec![format!("version: {VERSION}"), format!("timestamp: {stamp}")],
            body: Vec::new(),
            manifest: Vec::new(),
        }
    }

    fn push_timings(&mut self, timings: &[SizeTiming]) {
        let line = timings
            .iter()
            .map(|t| format!("N={} {:.2}s", t.size, t.seconds))
            .collect::<Vec<_>>()
            .join(" | ");
        self.header.push(format!("per-size timing: {line}"));
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# qcrit {} report", self.title);
        for h in &self.header {
            let _ = writeln!(s, "# {h}");
        }
        let _ = writeln!(s, "\n[config]");
        s.push_str(&self.config_echo);
        let _ = writeln!(s, "\n[results]");
        for b in &self.body {
            let _ = writeln!(s, "{b}");
        }
        let _ = writeln!(s, "\n[files]");
        for f in &self.manifest {
            let _ = writeln!(s, "{}", f.display());
        }
        s
    }

    fn finish(&self, out_dir: &Path) -> Result<(), CliError> {
        write_file(&out_dir.join("report.txt"), &self.render())?;
        print!("{}", self.render());
        Ok(())
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Runtime(format!("creating {}: {e}", dir.display())))
}

/// Shortest-roundtrip float formatting keeps the CSVs byte-stable across
/// thread counts and reload-exact.
fn fmt(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

fn table_path(dir: &Path) -> PathBuf {
    dir.join("table.csv")
}

fn save_table(dir: &Path, table: &ExpectationTable, h: f64) -> Result<PathBuf, CliError> {
    let mut s = String::from("method,h,N,lambda,energy,dv\n");
    for (si, &n) in table.sizes.iter().enumerate() {
        for (li, &l) in table.lambdas.iter().enumerate() {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                table.method,
                fmt(h),
                n,
                fmt(l),
                fmt(table.energy[si][li]),
                fmt(table.dv[si][li])
            );
        }
    }
    let path = table_path(dir);
    write_file(&path, &s)?;
    Ok(path)
}

pub fn load_table(dir: &Path) -> Result<ExpectationTable, CliError> {
    let path = table_path(dir);
    let text = std::fs::read_to_string(&path).map_err(|e| {
        CliError::MissingInput(format!("no expectation table at {}: {e}", path.display()))
    })?;
    let mut method = String::new();
    let mut sizes: Vec<usize> = Vec::new();
    let mut lambdas: Vec<f64> = Vec::new();
    let mut energy: Vec<Vec<f64>> = Vec::new();
    let mut dv: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 6 {
            return Err(CliError::Runtime(format!(
                "{}:{}: expected 6 columns",
                path.display(),
                lineno + 1
            )));
        }
        let bad = |what: &str| {
            CliError::Runtime(format!("{}:{}: bad {what}", path.display(), lineno + 1))
        };
        method = cols[0].to_string();
        let n: usize = cols[2].parse().map_err(|_| bad("size"))?;
        let l: f64 = cols[3].parse().map_err(|_| bad("lambda"))?;
        let e: f64 = cols[4].parse().map_err(|_| bad("energy"))?;
        let d: f64 = cols[5].parse().map_err(|_| bad("dv"))?;
        if sizes.last() != Some(&n) {
            sizes.push(n);
            energy.push(Vec::new());
            dv.push(Vec::new());
        }
        if sizes.len() == 1 {
            lambdas.push(l);
        }
        energy.last_mut().unwrap().push(e);
        dv.last_mut().unwrap().push(d);
    }
    ExpectationTable::new(method, sizes, lambdas, energy, dv)
        .map_err(|e| CliError::Runtime(format!("reloading table: {e}")))
}

fn build_table_for(cfg: &RunConfig) -> Result<(ExpectationTable, Vec<SizeTiming>), CliError> {
    let sizes = sweep::size_ladder(cfg.sizes.0, cfg.sizes.1, cfg.sizes.2)
        .map_err(|e| CliError::Config(e.to_string()))?;
    if sizes.len() < 3 {
        return Err(CliError::Config(format!(
            "ladder {}:{}:{} has {} sizes; pseudocritical sequences need at least 3",
            cfg.sizes.0,
            cfg.sizes.1,
            cfg.sizes.2,
            sizes.len()
        )));
    }
    let lambdas = sweep::lambda_grid(cfg.lambda.0, cfg.lambda.1, cfg.lambda.2)
        .map_err(|e| CliError::Config(e.to_string()))?;
    sweep::build_table(cfg.method, &sizes, &lambdas, cfg.h)
        .map_err(|e| CliError::Runtime(format!("table build failed: {e}")))
}

fn write_gamma_curves(dir: &Path, table: &ExpectationTable) -> Result<PathBuf, CliError> {
    let curves = fss::consecutive_gamma_curves(table)
        .map_err(|e| CliError::Runtime(format!("gamma curves: {e}")))?;
    let mut s = String::from("N,Nprime,lambda,gamma\n");
    for c in &curves {
        for (l, g) in c.lambdas.iter().zip(&c.gamma) {
            let _ = writeln!(s, "{},{},{},{}", c.n, c.nprime, fmt(*l), fmt(*g));
        }
    }
    let path = dir.join("gamma_curves.csv");
    write_file(&path, &s)?;
    Ok(path)
}

fn write_pseudocritical(
    dir: &Path,
    seq: &fss::PseudoCriticalSequence,
) -> Result<PathBuf, CliError> {
    let mut s = String::from("N,inv_N,lambda_c,alpha,nu\n");
    for e in &seq.entries {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            e.n,
            fmt(1.0 / e.n as f64),
            fmt(e.lambda_c),
            fmt(e.alpha),
            fmt(e.nu)
        );
    }
    let path = dir.join("pseudocritical.csv");
    write_file(&path, &s)?;
    Ok(path)
}

fn write_extrapolated(dir: &Path, seq: &fss::PseudoCriticalSequence) -> Result<PathBuf, CliError> {
    let mut s = String::from("lambda_c,lambda_c_err,alpha,alpha_err,nu,nu_err\n");
    let _ = writeln!(
        s,
        "{},{},{},{},{},{}",
        fmt(seq.lambda_c.value),
        fmt(seq.lambda_c.uncertainty),
        fmt(seq.alpha.value),
        fmt(seq.alpha.uncertainty),
        fmt(seq.nu.value),
        fmt(seq.nu.uncertainty)
    );
    let path = dir.join("extrapolated.csv");
    write_file(&path, &s)?;
    Ok(path)
}

pub fn load_extrapolated(dir: &Path) -> Result<(f64, f64, f64), CliError> {
    let path = dir.join("extrapolated.csv");
    let text = std::fs::read_to_string(&path).map_err(|e| {
        CliError::MissingInput(format!("no extrapolated values at {}: {e}", path.display()))
    })?;
    let line = text
        .lines()
        .nth(1)
        .ok_or_else(|| CliError::Runtime(format!("{} is empty", path.display())))?;
    let cols: Vec<&str> = line.split(',').collect();
    if cols.len() != 6 {
        return Err(CliError::Runtime(format!("{} malformed", path.display())));
    }
    let p = |i: usize| -> Result<f64, CliError> {
        cols[i]
            .parse()
            .map_err(|_| CliError::Runtime(format!("{} malformed", path.display())))
    };
    Ok((p(0)?, p(2)?, p(4)?))
}

/// `fss` subcommand: ladder sweep, Γ curves, pseudocritical sequence,
/// extrapolation, and a collapse-quality figure of merit.
pub fn run_fss(cfg: &RunConfig) -> Result<RunReport, CliError> {
    ensure_dir(&cfg.output)?;
    let mut report = RunReport::new("fss", cfg);
    let (table, timings) = build_table_for(cfg)?;
    report.push_timings(&timings);

    let seq = fss::pseudocritical_sequence(&table)
        .map_err(|e| CliError::Runtime(format!("pseudocritical analysis: {e}")))?;
    let quality = fss::data_collapse(&table, seq.lambda_c.value, seq.alpha.value, seq.nu.value)
        .map_err(|e| CliError::Runtime(format!("collapse check: {e}")))?
        .quality;

    report
        .manifest
        .push(save_table(&cfg.output, &table, cfg.h)?);
    report
        .manifest
        .push(write_gamma_curves(&cfg.output, &table)?);
    report
        .manifest
        .push(write_pseudocritical(&cfg.output, &seq)?);
    report.manifest.push(write_extrapolated(&cfg.output, &seq)?);

    report.body.push(format!(
        "pseudocritical entries: {} (of {} triples)",
        seq.entries.len(),
        table.sizes.len().saturating_sub(2)
    ));
    for e in &seq.entries {
        report.body.push(format!(
            "  N = {:>4}  lambda_c = {:.7}  alpha = {:.5}  nu = {:.6}",
            e.n, e.lambda_c, e.alpha, e.nu
        ));
    }
    for w in &seq.warnings {
        report.body.push(format!("warning: {w}"));
    }
    report.body.push(format!(
        "extrapolated: lambda_c = {:.7} +/- {:.1e}, alpha = {:.5} +/- {:.1e}, nu = {:.6} +/- {:.1e}",
        seq.lambda_c.value,
        seq.lambda_c.uncertainty,
        seq.alpha.value,
        seq.alpha.uncertainty,
        seq.nu.value,
        seq.nu.uncertainty
    ));
    report.body.push(format!(
        "collapse quality at extrapolated parameters: {:.3e}",
        quality
    ));
    report.finish(&cfg.output)?;
    Ok(report)
}

/// `collapse` subcommand: rescaled clouds and the quality score.
///
/// Reuses `table.csv` from a paired `fss` run when present; otherwise the
/// table is recomputed unless `--no-recompute` forbids it. Parameters come
/// from the flags, falling back to `extrapolated.csv`, falling back to a
/// fresh pseudocritical analysis of the table.
pub fn run_collapse(cfg: &RunConfig) -> Result<RunReport, CliError> {
    ensure_dir(&cfg.output)?;
    let mut report = RunReport::new("collapse", cfg);

    let table = match load_table(&cfg.output) {
        Ok(t) => {
            report.body.push(format!(
                "table: reused {} ({} sizes x {} lambdas, method {})",
                table_path(&cfg.output).display(),
                t.sizes.len(),
                t.lambdas.len(),
                t.method
            ));
            t
        }
        Err(CliError::MissingInput(msg)) if cfg.no_recompute => {
            return Err(CliError::MissingInput(format!(
                "{msg} (recomputation disabled)"
            )));
        }
        Err(CliError::MissingInput(_)) => {
            let (t, timings) = build_table_for(cfg)?;
            report.push_timings(&timings);
            report.manifest.push(save_table(&cfg.output, &t, cfg.h)?);
            report.body.push("table: recomputed".to_string());
            t
        }
        Err(e) => return Err(e),
    };

    let (lambda_c, alpha, nu) = match (cfg.lambda_c, cfg.alpha, cfg.nu) {
        (Some(l), Some(a), Some(n)) => (l, a, n),
        _ => {
            let fallback = match load_extrapolated(&cfg.output) {
                Ok(v) => v,
                Err(CliError::MissingInput(_)) => {
                    let seq = fss::pseudocritical_sequence(&table)
                        .map_err(|e| CliError::Runtime(format!("pseudocritical analysis: {e}")))?;
                    (seq.lambda_c.value, seq.alpha.value, seq.nu.value)
                }
                Err(e) => return Err(e),
            };
            (
                cfg.lambda_c.unwrap_or(fallback.0),
                cfg.alpha.unwrap_or(fallback.1),
                cfg.nu.unwrap_or(fallback.2),
            )
        }
    };

    let collapse = fss::data_collapse(&table, lambda_c, alpha, nu)
        .map_err(|e| CliError::Runtime(format!("collapse: {e}")))?;

    let mut s = String::from("N,x,y\n");
    for cloud in &collapse.clouds {
        for &(x, y) in &cloud.points {
            let _ = writeln!(s, "{},{},{}", cloud.n, fmt(x), fmt(y));
        }
    }
    let path = cfg.output.join("collapse.csv");
    write_file(&path, &s)?;
    report.manifest.push(path);

    report.body.push(format!(
        "parameters: lambda_c = {lambda_c}, alpha = {alpha}, nu = {nu}"
    ));
    report
        .body
        .push(format!("collapse quality: {:.6e}", collapse.quality));
    report.finish(&cfg.output)?;
    Ok(report)
}

/// `larged` subcommand: symmetry-breaking curve, critical charge, exponents.
pub fn run_larged(cfg: &RunConfig) -> Result<RunReport, CliError> {
    ensure_dir(&cfg.output)?;
    let mut report = RunReport::new("larged", cfg);

    // η(Z) curve on a fixed grid; failures are surfaced per grid point.
    let mut s = String::from("Z,r1,r2,eta,energy,hess_min\n");
    let count = 201;
    for k in 0..count {
        let z = 1.0 + k as f64 / (count as f64 - 1.0);
        let st = larged::minimize_ground(z, 0.0)
            .map_err(|e| CliError::Runtime(format!("minimization failed at Z = {z}: {e}")))?;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            fmt(z),
            fmt(st.r1),
            fmt(st.r2),
            fmt(st.eta),
            fmt(st.energy),
            fmt(st.hessian_eigs[0])
        );
    }
    let path = cfg.output.join("larged.csv");
    write_file(&path, &s)?;
    report.manifest.push(path);

    let ex = larged::extract_exponents()
        .map_err(|e| CliError::Runtime(format!("exponent extraction: {e}")))?;
    report.body.push(format!("Z_c = {:.6}", ex.z_c));
    report
        .body
        .push(format!("beta  = {:.4} +/- {:.1e}", ex.beta.0, ex.beta.1));
    report.body.push(format!(
        "alpha = {:.4} +/- {:.1e} (singular part of the energy)",
        ex.alpha_e.0, ex.alpha_e.1
    ));
    report
        .body
        .push(format!("delta = {:.4} +/- {:.1e}", ex.delta.0, ex.delta.1));
    report
        .body
        .push(format!("gamma = {:.4} +/- {:.1e}", ex.gamma.0, ex.gamma.1));
    report.finish(&cfg.output)?;
    Ok(report)
}

/// `analytic` subcommand: closed-form reference data on the λ grid.
pub fn run_analytic(cfg: &RunConfig) -> Result<RunReport, CliError> {
    ensure_dir(&cfg.output)?;
    let mut report = RunReport::new("analytic", cfg);
    let lambdas = sweep::lambda_grid(cfg.lambda.0, cfg.lambda.1, cfg.lambda.2)
        .map_err(|e| CliError::Config(e.to_string()))?;

    let mut s = String::from("lambda,energy_n1,xi\n");
    for &l in &lambdas {
        let e = hulthen::energy_level(1, l, 1.0).map_err(|e| CliError::Runtime(e.to_string()))?;
        if let Some(e) = e {
            let xi = hulthen::correlation_length(l, 1.0)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
            let _ = writeln!(s, "{},{},{}", fmt(l), fmt(e), fmt(xi));
        }
    }
    let path = cfg.output.join("analytic.csv");
    write_file(&path, &s)?;
    report.manifest.push(path);

    for n in 1..=5u32 {
        report.body.push(format!(
            "lambda_c(n = {n}) = {}",
            fmt(hulthen::critical_coupling(n))
        ));
    }
    report
        .body
        .push("exponents: alpha = 2 (energy), nu = 1 (length)".to_string());
    let n_max = hulthen::max_bound_level(cfg.lambda.1);
    report.body.push(format!(
        "bound levels at lambda = {}: {}",
        cfg.lambda.1, n_max
    ));
    report.finish(&cfg.output)?;
    Ok(report)
}
