//! Reproducible parallel Monte Carlo studies over a grid of
//! `(beta, rho, delta_n^-1)` cells.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::estimators::{asymptotic_variance, estimate, EstimateReport, EstimatorConfig};
use crate::io::{fmt_human, fmt_machine};
use crate::path::{simulate_replication, ModelConfig};
use crate::rng::derive_seed;
use crate::sampling::SchemeConfig;
use crate::stable::{stable_constants, StableLaw, DEFAULT_MC_SEED};

/// Abort threshold on the fraction of failed replications in a cell.
pub const MAX_FAILURE_RATE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub betas: Vec<f64>,
    pub rhos: Vec<f64>,
    pub delta_inv: Vec<u64>,
    pub n_reps: usize,
    pub master_seed: u64,
    /// Template; its stable index is replaced per cell.
    pub model: ModelConfig,
    /// Template; its `delta_n` is replaced per cell.
    pub scheme: SchemeConfig,
    /// Template; its `rho` is replaced per cell.
    pub estimator: EstimatorConfig,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
}

impl StudyConfig {
    /// The full reference grid at the given size.
    pub fn reference(n_reps: usize, master_seed: u64) -> Result<Self> {
        Ok(Self {
            betas: vec![1.1, 1.3, 1.5, 1.7, 1.9],
            rhos: vec![0.5, 2.0],
            delta_inv: vec![1000, 10_000],
            n_reps,
            master_seed,
            model: ModelConfig::reference(1.5)?,
            scheme: SchemeConfig::default(),
            estimator: EstimatorConfig::default(),
            workers: 0,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_reps == 0 {
            return Err(Error::param("a study needs at least one replication"));
        }
        if self.betas.is_empty() || self.rhos.is_empty() || self.delta_inv.is_empty() {
            return Err(Error::param("study grid is empty"));
        }
        for b in &self.betas {
            StableLaw::new(*b, 1.0)?;
        }
        if self.delta_inv.contains(&0) {
            return Err(Error::param("delta_inv must be positive"));
        }
        for rho in &self.rhos {
            EstimatorConfig {
                rho: *rho,
                ..self.estimator.clone()
            }
            .validate()?;
        }
        self.model.validate()
    }
}

/// Aggregates of one study cell.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub beta: f64,
    pub rho: f64,
    pub delta_inv: u64,
    pub mean_beta_hat: f64,
    /// Sample variance of `u_n^(beta/2) sqrt(N) (estimate - beta)`; absent
    /// with fewer than two successful replications.
    pub emp_var_std: Option<f64>,
    pub theo_var: f64,
    pub n_failed: usize,
    pub mean_n_obs: f64,
}

pub const STUDY_CSV_HEADER: &str = "beta,rho,delta_inv,mean,emp_var,theo_var,n_failed,mean_n_obs";

impl StudyRow {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            fmt_machine(self.beta),
            fmt_machine(self.rho),
            self.delta_inv,
            fmt_machine(self.mean_beta_hat),
            self.emp_var_std.map_or_else(|| "NA".into(), fmt_machine),
            fmt_machine(self.theo_var),
            self.n_failed,
            fmt_machine(self.mean_n_obs)
        )
    }

    pub fn to_table_line(&self) -> String {
        format!(
            "{:>5} {:>5} {:>7} {:>8} {:>9} {:>9} {:>6} {:>9}",
            self.beta,
            self.rho,
            self.delta_inv,
            fmt_human(self.mean_beta_hat),
            self.emp_var_std.map_or_else(|| "NA".into(), fmt_human),
            fmt_human(self.theo_var),
            self.n_failed,
            fmt_human(self.mean_n_obs)
        )
    }
}

pub fn study_csv(rows: &[StudyRow]) -> String {
    let mut out = String::from(STUDY_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    out
}

/// Points of a normal QQ plot.
#[derive(Debug, Clone, PartialEq)]
pub struct QQData {
    /// `(theoretical_quantile, sample_quantile)`, sorted.
    pub pairs: Vec<(f64, f64)>,
    pub label: String,
}

impl QQData {
    /// Largest `|sample - theoretical|` over the plotting positions in
    /// `[(1 - central)/2, (1 + central)/2]`.
    pub fn max_central_deviation(&self, central: f64) -> f64 {
        let m = self.pairs.len() as f64;
        let lo = 0.5 * (1.0 - central);
        let hi = 1.0 - lo;
        self.pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let pos = (*i as f64 + 0.5) / m;
                pos >= lo && pos <= hi
            })
            .map(|(_, (t, s))| (s - t).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("theoretical_q,sample_q\n");
        for (t, s) in &self.pairs {
            let _ = writeln!(out, "{},{}", fmt_machine(*t), fmt_machine(*s));
        }
        out
    }
}

/// Sorted `std_stats / sqrt(variance)` against standard normal quantiles at
/// plotting positions `(i - 1/2) / m`.
pub fn qq_data(std_stats: &[f64], variance: f64, label: impl Into<String>) -> Result<QQData> {
    if std_stats.len() < 10 {
        return Err(Error::InsufficientData {
            needed: 10,
            got: std_stats.len(),
        });
    }
    if std_stats.iter().any(|v| !v.is_finite()) {
        return Err(Error::Data("QQ input contains non-finite values".into()));
    }
    if !(variance > 0.0) {
        return Err(Error::param("QQ variance must be positive"));
    }
    let sd = variance.sqrt();
    let mut sample: Vec<f64> = std_stats.iter().map(|v| v / sd).collect();
    sample.sort_by(f64::total_cmp);
    let m = sample.len() as f64;
    let normal = Normal::standard();
    let pairs = sample
        .into_iter()
        .enumerate()
        .map(|(i, s)| (normal.inverse_cdf((i as f64 + 0.5) / m), s))
        .collect();
    Ok(QQData {
        pairs,
        label: label.into(),
    })
}

/// Fraction of reports whose confidence interval contains `true_beta`.
pub fn coverage_report(reports: &[EstimateReport], true_beta: f64) -> f64 {
    if reports.is_empty() {
        return f64::NAN;
    }
    let hits = reports
        .iter()
        .filter(|r| r.ci_low <= true_beta && true_beta <= r.ci_high)
        .count();
    hits as f64 / reports.len() as f64
}

/// One successful replication.
#[derive(Debug, Clone, PartialEq)]
pub struct RepRecord {
    pub rep: usize,
    pub seed: u64,
    pub report: EstimateReport,
}

/// Everything produced for one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub row: StudyRow,
    /// Scaled errors over the theoretical variance; absent below ten
    /// successes.
    pub qq: Option<QQData>,
    pub coverage: f64,
    pub records: Vec<RepRecord>,
    pub failures: Vec<(usize, String)>,
}

impl CellResult {
    pub fn label(&self) -> String {
        format!(
            "beta={} rho={} delta_inv={}",
            self.row.beta, self.row.rho, self.row.delta_inv
        )
    }

    /// File-name friendly cell identifier.
    pub fn slug(&self) -> String {
        format!(
            "beta{}_rho{}_n{}",
            self.row.beta, self.row.rho, self.row.delta_inv
        )
    }
}

fn is_replication_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::Degenerate(_)
            | Error::Data(_)
            | Error::InsufficientData { .. }
            | Error::Simulation { .. }
    )
}

fn sample_variance(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    Some(xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64)
}

fn run_cell(cfg: &StudyConfig, ix: [usize; 3], theo_var: f64) -> Result<CellResult> {
    let beta = cfg.betas[ix[0]];
    let rho = cfg.rhos[ix[1]];
    let delta_inv = cfg.delta_inv[ix[2]];

    let mut model = cfg.model.clone();
    model.stable = StableLaw::new(beta, cfg.model.stable.scale)?;
    let scheme = SchemeConfig {
        delta_n: 1.0 / delta_inv as f64,
        ..cfg.scheme.clone()
    };
    let est = EstimatorConfig {
        rho,
        ..cfg.estimator.clone()
    };

    let outcomes: Vec<(usize, u64, Result<EstimateReport>)> = (0..cfg.n_reps)
        .into_par_iter()
        .map(|rep| {
            let seed = derive_seed(
                cfg.master_seed,
                &[ix[0] as u64, ix[1] as u64, ix[2] as u64, rep as u64],
            );
            let out = simulate_replication(&model, &scheme, seed).and_then(|path| {
                estimate(
                    path.observed_times(),
                    path.observed_values(),
                    &est,
                    Some(beta),
                )
            });
            (rep, seed, out)
        })
        .collect();

    let mut records = Vec::with_capacity(cfg.n_reps);
    let mut failures = Vec::new();
    for (rep, seed, out) in outcomes {
        match out {
            Ok(report) => records.push(RepRecord { rep, seed, report }),
            Err(e) if is_replication_failure(&e) => failures.push((rep, e.to_string())),
            Err(e) => return Err(e),
        }
    }
    if failures.len() as f64 > MAX_FAILURE_RATE * cfg.n_reps as f64 {
        return Err(Error::Study(format!(
            "{} of {} replications failed for beta={beta} rho={rho} delta_inv={delta_inv}; first: {}",
            failures.len(),
            cfg.n_reps,
            failures[0].1
        )));
    }

    let n_ok = records.len() as f64;
    let mean_beta_hat = records.iter().map(|r| r.report.estimate()).sum::<f64>() / n_ok;
    let mean_n_obs = records.iter().map(|r| r.report.n_obs as f64).sum::<f64>() / n_ok;
    let scaled: Vec<f64> = records
        .iter()
        .filter_map(|r| r.report.scaled_error)
        .collect();
    let reports: Vec<EstimateReport> = records.iter().map(|r| r.report.clone()).collect();

    let row = StudyRow {
        beta,
        rho,
        delta_inv,
        mean_beta_hat,
        emp_var_std: sample_variance(&scaled),
        theo_var,
        n_failed: failures.len(),
        mean_n_obs,
    };
    let label = format!("beta={beta} rho={rho} delta_inv={delta_inv}");
    let qq = if scaled.len() >= 10 {
        Some(qq_data(&scaled, theo_var, label)?)
    } else {
        None
    };
    Ok(CellResult {
        row,
        qq,
        coverage: coverage_report(&reports, beta),
        records,
        failures,
    })
}

fn run_all(cfg: &StudyConfig) -> Result<Vec<CellResult>> {
    // The limit constants depend on beta only.
    let mut theo: HashMap<(usize, usize), f64> = HashMap::new();
    for (bi, beta) in cfg.betas.iter().enumerate() {
        let law = StableLaw::new(*beta, 1.0)?;
        let c = stable_constants(
            cfg.estimator.p,
            &law,
            &cfg.scheme.phi,
            cfg.estimator.mc_size,
            DEFAULT_MC_SEED,
        )?;
        for (ri, rho) in cfg.rhos.iter().enumerate() {
            theo.insert(
                (bi, ri),
                asymptotic_variance(*beta, *rho, c.kappa_beta_beta, c.c_p_beta)?,
            );
        }
    }
    let mut cells = Vec::new();
    for bi in 0..cfg.betas.len() {
        for ri in 0..cfg.rhos.len() {
            for di in 0..cfg.delta_inv.len() {
                cells.push(run_cell(cfg, [bi, ri, di], theo[&(bi, ri)])?);
            }
        }
    }
    Ok(cells)
}

/// Runs every cell. Replication `r` of cell `(b, p, d)` draws from the seed
/// `derive_seed(master_seed, [b, p, d, r])`, so results do not depend on the
/// worker count; aggregation runs in replication order.
pub fn run_study(cfg: &StudyConfig) -> Result<Vec<CellResult>> {
    cfg.validate()?;
    if cfg.workers == 0 {
        return run_all(cfg);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Study(format!("cannot build worker pool: {e}")))?;
    pool.install(|| run_all(cfg))
}
