//! Empirical characteristic function estimator of the jump activity index.
//!
//! Index conventions: observations are `tau_0, ..., tau_N` with prices
//! `x_0, ..., x_N`. The rescaled increment with 1-based index `i` (`1..=N`)
//! lives at `incs[i - 1]`. Local scales `V_i` exist for `i = k+3..=N` and are
//! stored at `vhat[i - k - 3]`; the same offset applies to the gap factors
//! `chi_i` (with `r` in place of `k`).

use std::fmt::Write as _;

use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::io::fmt_machine;
use crate::stable::{self, PhiKind, PhiSpec, StableConstants, StableLaw};

/// How the plug-in constants of the limiting variance are obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum VarianceSource {
    /// `kappa_{beta,beta}` and `kappa_{p,beta}` estimated from the gaps.
    DataDriven,
    /// Constants computed from a known duration law.
    KnownPhi { phi: PhiSpec, seed: u64 },
}

impl VarianceSource {
    pub fn label(&self) -> &'static str {
        match self {
            VarianceSource::DataDriven => "data",
            VarianceSource::KnownPhi { .. } => "known_phi",
        }
    }
}

/// Tuning of the estimator. Sequences are set from `N = N_n(1)`:
/// `k = ceil(N^k_exponent)`, `r = ceil(N^r_exponent)`,
/// `u = u_scale * N^-u_exponent` and `v = rho * u`.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimatorConfig {
    pub p: f64,
    pub rho: f64,
    pub u_exponent: f64,
    pub u_scale: f64,
    pub k_exponent: f64,
    pub r_exponent: f64,
    pub debias: bool,
    pub mc_size: usize,
    pub beta_clamp: (f64, f64),
    /// Minimum number of summands in every average.
    pub min_terms: usize,
    pub variance_source: VarianceSource,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            p: 0.5,
            rho: 0.5,
            u_exponent: 1.0 / 3.0,
            u_scale: 1.0,
            k_exponent: 2.0 / 3.0,
            r_exponent: 0.8,
            debias: false,
            mc_size: stable::DEFAULT_MC_SIZE,
            beta_clamp: (1.01, 1.99),
            min_terms: 10,
            variance_source: VarianceSource::DataDriven,
        }
    }
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::param(format!("p = {} outside (0, 1)", self.p)));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) || self.rho == 1.0 {
            return Err(Error::param(format!(
                "rho = {} must be positive and != 1",
                self.rho
            )));
        }
        for (name, e) in [
            ("u_exponent", self.u_exponent),
            ("k_exponent", self.k_exponent),
            ("r_exponent", self.r_exponent),
        ] {
            if !(e > 0.0 && e < 1.0) {
                return Err(Error::param(format!("{name} = {e} outside (0, 1)")));
            }
        }
        if !(self.u_scale > 0.0 && self.u_scale.is_finite()) {
            return Err(Error::param("u_scale must be positive"));
        }
        let (lo, hi) = self.beta_clamp;
        if !(lo > 1.0 && lo < hi && hi < 2.0) {
            return Err(Error::param(format!(
                "beta clamp ({lo}, {hi}) must satisfy 1 < lo < hi < 2"
            )));
        }
        Ok(())
    }

    /// `(k_n, r_n, u_n, v_n)` for `n_obs` observations.
    pub fn sequences(&self, n_obs: usize) -> (usize, usize, f64, f64) {
        let n = n_obs as f64;
        // Rounding noise in exact powers (1000^(2/3)) must not bump the ceiling.
        let ceil = |x: f64| ((x - 1e-9).ceil() as usize).max(1);
        let k = ceil(n.powf(self.k_exponent));
        let r = ceil(n.powf(self.r_exponent));
        let u = self.u_scale * n.powf(-self.u_exponent);
        (k, r, u, self.rho * u)
    }
}

/// Result of one estimation run.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub beta_hat: f64,
    pub beta_bar: Option<f64>,
    pub l_u: f64,
    pub l_v: f64,
    pub u_n: f64,
    pub v_n: f64,
    pub k_n: usize,
    pub r_n: usize,
    pub n_obs: usize,
    pub kappa_hat: f64,
    pub kappa_p_hat: f64,
    /// `kappa_{beta,beta}` and `C_{p,beta}` actually used in the variance.
    pub kappa_beta_beta: f64,
    pub c_p_beta: f64,
    pub variance_source: &'static str,
    pub variance_hat: f64,
    /// `u_n^(beta/2) sqrt(N) (estimate - beta)` with the true `beta`.
    pub scaled_error: Option<f64>,
    /// `scaled_error / sqrt(variance_hat)`.
    pub std_stat: Option<f64>,
    pub ci_low: f64,
    pub ci_high: f64,
    pub warnings: Vec<String>,
}

/// Column order of [`EstimateReport::to_csv_row`].
pub const REPORT_CSV_HEADER: &str = "beta_hat,beta_bar,l_u,l_v,u_n,v_n,k_n,r_n,n_obs,kappa_hat,\
kappa_p_hat,kappa_beta_beta,c_p_beta,variance_source,variance_hat,scaled_error,std_stat,ci_low,ci_high,warnings";

impl EstimateReport {
    /// The debiased estimate when available, otherwise `beta_hat`.
    pub fn estimate(&self) -> f64 {
        self.beta_bar.unwrap_or(self.beta_hat)
    }

    /// `key = value` lines; floats with 17 significant digits.
    pub fn to_record(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), fmt_machine);
        let mut s = String::new();
        let _ = writeln!(s, "beta_hat = {}", fmt_machine(self.beta_hat));
        let _ = writeln!(s, "beta_bar = {}", opt(self.beta_bar));
        let _ = writeln!(s, "ci_low = {}", fmt_machine(self.ci_low));
        let _ = writeln!(s, "ci_high = {}", fmt_machine(self.ci_high));
        let _ = writeln!(s, "variance_hat = {}", fmt_machine(self.variance_hat));
        let _ = writeln!(s, "variance_source = {}", self.variance_source);
        let _ = writeln!(s, "kappa_hat = {}", fmt_machine(self.kappa_hat));
        let _ = writeln!(s, "kappa_p_hat = {}", fmt_machine(self.kappa_p_hat));
        let _ = writeln!(s, "kappa_beta_beta = {}", fmt_machine(self.kappa_beta_beta));
        let _ = writeln!(s, "c_p_beta = {}", fmt_machine(self.c_p_beta));
        let _ = writeln!(s, "l_u = {}", fmt_machine(self.l_u));
        let _ = writeln!(s, "l_v = {}", fmt_machine(self.l_v));
        let _ = writeln!(s, "u_n = {}", fmt_machine(self.u_n));
        let _ = writeln!(s, "v_n = {}", fmt_machine(self.v_n));
        let _ = writeln!(s, "k_n = {}", self.k_n);
        let _ = writeln!(s, "r_n = {}", self.r_n);
        let _ = writeln!(s, "n_obs = {}", self.n_obs);
        let _ = writeln!(s, "scaled_error = {}", opt(self.scaled_error));
        let _ = writeln!(s, "std_stat = {}", opt(self.std_stat));
        let _ = writeln!(s, "warnings = {}", self.warnings.join("; "));
        s
    }

    /// One row matching [`REPORT_CSV_HEADER`].
    pub fn to_csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), fmt_machine);
        [
            fmt_machine(self.beta_hat),
            opt(self.beta_bar),
            fmt_machine(self.l_u),
            fmt_machine(self.l_v),
            fmt_machine(self.u_n),
            fmt_machine(self.v_n),
            self.k_n.to_string(),
            self.r_n.to_string(),
            self.n_obs.to_string(),
            fmt_machine(self.kappa_hat),
            fmt_machine(self.kappa_p_hat),
            fmt_machine(self.kappa_beta_beta),
            fmt_machine(self.c_p_beta),
            self.variance_source.to_string(),
            fmt_machine(self.variance_hat),
            opt(self.scaled_error),
            opt(self.std_stat),
            fmt_machine(self.ci_low),
            fmt_machine(self.ci_high),
            format!("\"{}\"", self.warnings.join("; ").replace('"', "'")),
        ]
        .join(",")
    }
}

fn check_times(taus: &[f64]) -> Result<()> {
    for (i, w) in taus.windows(2).enumerate() {
        if !(w[1] > w[0]) {
            return Err(Error::Data(format!(
                "observation times not strictly increasing at index {}",
                i + 1
            )));
        }
    }
    Ok(())
}

/// `delta_proxy * (x_i - x_{i-1}) / (tau_i - tau_{i-1})` for `i = 1..=N`.
pub fn rescaled_increments(taus: &[f64], xs: &[f64], delta_proxy: f64) -> Result<Vec<f64>> {
    if taus.len() != xs.len() {
        return Err(Error::Data(format!(
            "{} times but {} values",
            taus.len(),
            xs.len()
        )));
    }
    if taus.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: taus.len(),
        });
    }
    check_times(taus)?;
    Ok(taus
        .windows(2)
        .zip(xs.windows(2))
        .map(|(t, x)| delta_proxy * (x[1] - x[0]) / (t[1] - t[0]))
        .collect())
}

/// Trailing local scale `V_i = (1/k) sum_{j=i-k-1}^{i-2} |D_j - D_{j-1}|^p`
/// for `i = k+3..=N`, where `D_j` is the `j`-th rescaled increment.
pub fn local_scale(incs: &[f64], p: f64, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::param("window length k must be at least 1"));
    }
    let n = incs.len();
    if n < k + 3 {
        return Err(Error::InsufficientData {
            needed: k + 3,
            got: n,
        });
    }
    // powed[j] = |D_j - D_{j-1}|^p for j >= 2 (1-based D).
    let mut powed = vec![0.0; n + 1];
    for j in 2..=n {
        powed[j] = (incs[j - 1] - incs[j - 2]).abs().powf(p);
    }
    let inv_k = 1.0 / k as f64;
    (k + 3..=n)
        .map(|i| {
            let v = powed[i - k - 1..=i - 2].iter().sum::<f64>() * inv_k;
            if v > 0.0 {
                Ok(v)
            } else {
                Err(Error::Data(format!(
                    "local scale vanishes at observation {i}: no price movement in its window"
                )))
            }
        })
        .collect()
}

/// `(D_i - D_{i-1}) / V_i^(1/p)` for `i = k+3..=N`.
fn normalized_differences(incs: &[f64], vhat: &[f64], p: f64, k: usize) -> Result<Vec<f64>> {
    let n = incs.len();
    if n <= k + 2 {
        return Err(Error::InsufficientData {
            needed: k + 3,
            got: n,
        });
    }
    if vhat.len() != n - k - 2 {
        return Err(Error::Data(format!(
            "local scale has {} entries, expected {}",
            vhat.len(),
            n - k - 2
        )));
    }
    let inv_p = 1.0 / p;
    Ok((k + 3..=n)
        .zip(vhat)
        .map(|(i, v)| (incs[i - 1] - incs[i - 2]) / v.powf(inv_p))
        .collect())
}

/// `1 - mean cos(u theta)` accumulated as `mean 2 sin^2(u theta / 2)`.
fn deficit(thetas: &[f64], u: f64) -> f64 {
    let sum: f64 = thetas
        .iter()
        .map(|t| {
            let s = (0.5 * u * t).sin();
            2.0 * s * s
        })
        .sum();
    sum / thetas.len() as f64
}

/// Deficits at `u` and `v`. When one argument is exactly twice the other the
/// larger one is derived termwise via `1 - cos 2x = 2a(2 - a)`, `a = 1 - cos x`,
/// which keeps the deficit ratio at or below 4 under rounding.
fn deficit_pair(thetas: &[f64], u: f64, v: f64) -> (f64, f64) {
    let doubled = |small: f64| -> (f64, f64) {
        let (mut sa, mut sb) = (0.0, 0.0);
        for t in thetas {
            let s = (0.5 * small * t).sin();
            let a = 2.0 * s * s;
            sa += a;
            sb += 2.0 * a * (2.0 - a);
        }
        let n = thetas.len() as f64;
        (sa / n, sb / n)
    };
    if u == 2.0 * v {
        let (dv, du) = doubled(v);
        (du, dv)
    } else if v == 2.0 * u {
        doubled(u)
    } else {
        (deficit(thetas, u), deficit(thetas, v))
    }
}

/// `(1 / (N-k-2)) sum_{i=k+3}^{N} cos(u (D_i - D_{i-1}) / V_i^(1/p))`.
pub fn ecf_statistic(incs: &[f64], vhat: &[f64], p: f64, u: f64, k: usize) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::param("u must be positive"));
    }
    let thetas = normalized_differences(incs, vhat, p, k)?;
    Ok(1.0 - deficit(&thetas, u))
}

/// `ln(d_u / d_v) / ln(u / v)`, evaluated with the larger argument on top so
/// the result is exactly symmetric under swapping `(d_u, u)` with `(d_v, v)`.
pub fn beta_from_deficits(d_u: f64, d_v: f64, u: f64, v: f64) -> Result<f64> {
    if !(u > 0.0 && v > 0.0) || u == v {
        return Err(Error::param("u and v must be positive and distinct"));
    }
    if !(d_u > 0.0 && d_v > 0.0) {
        return Err(Error::degenerate(
            "empirical characteristic function equals one: u too small or insufficient data",
        ));
    }
    Ok(if u > v {
        (d_u / d_v).ln() / (u / v).ln()
    } else {
        (d_v / d_u).ln() / (v / u).ln()
    })
}

/// `(log(-(l_u - 1)) - log(-(l_v - 1))) / log(u / v)`.
pub fn beta_hat(l_u: f64, l_v: f64, u: f64, v: f64) -> Result<f64> {
    if !(l_u < 1.0 && l_v < 1.0) {
        return Err(Error::degenerate(
            "empirical characteristic function equals one: u too small or insufficient data",
        ));
    }
    beta_from_deficits(1.0 - l_u, 1.0 - l_v, u, v)
}

/// Bias-corrected estimator using third-order corrections `deb_u`, `deb_v`.
pub fn beta_bar(l_u: f64, l_v: f64, u: f64, v: f64, deb_u: f64, deb_v: f64) -> Result<f64> {
    let (a, b) = ((1.0 - l_u) + deb_u, (1.0 - l_v) + deb_v);
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::degenerate("bias-corrected deficit is not positive"));
    }
    beta_from_deficits(a, b, u, v)
}

/// Gap factors
/// `chi_i = (r / (tau_{i-2} - tau_{i-2-r}))^(1-b) ((tau_i - tau_{i-1})^(1-b) + (tau_{i-1} - tau_{i-2})^(1-b))`
/// for `i = r+3..=N`.
pub fn gap_factors(taus: &[f64], beta_est: f64, r: usize) -> Result<Vec<f64>> {
    if r == 0 {
        return Err(Error::param("r must be at least 1"));
    }
    if taus.len() < r + 4 {
        return Err(Error::InsufficientData {
            needed: r + 4,
            got: taus.len(),
        });
    }
    check_times(taus)?;
    let n = taus.len() - 1;
    let e = 1.0 - beta_est;
    let rf = r as f64;
    Ok((r + 3..=n)
        .map(|i| {
            let local = (rf / (taus[i - 2] - taus[i - 2 - r])).powf(e);
            local * ((taus[i] - taus[i - 1]).powf(e) + (taus[i - 1] - taus[i - 2]).powf(e))
        })
        .collect())
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Estimator of `kappa_{beta,beta}` from the observation times.
pub fn kappa_hat(taus: &[f64], beta_est: f64, r: usize) -> Result<f64> {
    Ok(mean(&gap_factors(taus, beta_est, r)?))
}

/// Estimator of `kappa_{p,beta}`: the gap factors raised to `p/beta` before
/// averaging, and the `beta/p` root taken afterwards.
pub fn kappa_p_hat(taus: &[f64], beta_est: f64, p: f64, r: usize) -> Result<f64> {
    if !(p > 0.0 && p <= beta_est) {
        return Err(Error::param(format!("p = {p} must lie in (0, beta]")));
    }
    let chi = gap_factors(taus, beta_est, r)?;
    Ok(kappa_p_from_factors(&chi, beta_est, p))
}

fn kappa_p_from_factors(chi: &[f64], beta: f64, p: f64) -> f64 {
    let pow = p / beta;
    let m = chi.iter().map(|c| c.powf(pow)).sum::<f64>() / chi.len() as f64;
    m.powf(beta / p)
}

fn deb_from_factors(chi: &[f64], beta: f64, u: f64, c_p_beta: f64) -> f64 {
    let a = c_p_beta * u.powf(beta);
    let n = chi.len() as f64;
    let m2 = chi.iter().map(|c| c * c).sum::<f64>() / n;
    let m3 = chi.iter().map(|c| c * c * c).sum::<f64>() / n;
    a * a * m2 / 2.0 - a * a * a * m3 / 6.0
}

/// Estimate of `E[(C u^b G)^2] / 2 - E[(C u^b G)^3] / 6` with the moments of
/// `G = phi1^(1-b) + phi2^(1-b)` replaced by averages of the gap factors.
pub fn deb_hat(taus: &[f64], beta_est: f64, u: f64, c_p_beta: f64, r: usize) -> Result<f64> {
    let chi = gap_factors(taus, beta_est, r)?;
    Ok(deb_from_factors(&chi, beta_est, u, c_p_beta))
}

/// Limiting variance of `u_n^(beta/2) sqrt(N) (beta_hat - beta)`.
pub fn asymptotic_variance(beta: f64, rho: f64, kappa_bb: f64, c_p_beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 2.0) {
        return Err(Error::param(format!("beta = {beta} outside (0, 2)")));
    }
    if !(rho > 0.0) || rho == 1.0 {
        return Err(Error::param(format!(
            "rho = {rho} must be positive and != 1"
        )));
    }
    if !(kappa_bb > 0.0 && c_p_beta > 0.0) {
        return Err(Error::param("kappa and C must be positive"));
    }
    let rb = rho.powf(beta);
    let cross = 2.0 + 2.0 * rb - (1.0 + rho).powf(beta) - (1.0 - rho).abs().powf(beta);
    let numerator = (rb + 1.0) * (4.0 - 2f64.powf(beta)) - 2.0 * cross;
    let log_inv = (1.0 / rho).ln();
    Ok(numerator / (kappa_bb * rb * log_inv * log_inv * c_p_beta))
}

/// First-order limit `L(p, u, beta) = E exp(-u^beta C (phi1^(1-beta) + phi2^(1-beta)))`.
///
/// Exact for constant and tabulated duration laws, seeded Monte Carlo
/// otherwise.
#[allow(non_snake_case)]
pub fn theoretical_L(
    u: f64,
    beta: f64,
    spec: &PhiSpec,
    constants: &StableConstants,
    mc_size: usize,
    seed: u64,
) -> f64 {
    let a = u.powf(beta) * constants.c_p_beta;
    let e = 1.0 - beta;
    match spec.kind() {
        PhiKind::Constant => (-2.0 * a).exp(),
        PhiKind::Table { values, weights } => {
            let total: f64 = weights.iter().sum();
            let norm = spec.normalization();
            let mut acc = 0.0;
            for (v1, w1) in values.iter().zip(weights) {
                for (v2, w2) in values.iter().zip(weights) {
                    let g = (v1 / norm).powf(e) + (v2 / norm).powf(e);
                    acc += w1 * w2 * (-a * g).exp_m1();
                }
            }
            1.0 + acc / (total * total)
        }
        PhiKind::TruncatedExponential { .. } => {
            1.0 + stable::mc_mean(spec, mc_size, seed, |x, y| {
                (-a * (x.powf(e) + y.powf(e))).exp_m1()
            })
        }
    }
}

fn two_sided_z95() -> f64 {
    Normal::standard().inverse_cdf(0.975)
}

/// Full estimation pipeline on observations `(taus, xs)` with `taus[0]` the
/// start of the observation window.
pub fn estimate(
    taus: &[f64],
    xs: &[f64],
    cfg: &EstimatorConfig,
    true_beta: Option<f64>,
) -> Result<EstimateReport> {
    cfg.validate()?;
    if taus.len() != xs.len() {
        return Err(Error::Data(format!(
            "{} times but {} values",
            taus.len(),
            xs.len()
        )));
    }
    if let Some(ix) = taus.iter().chain(xs).position(|v| !v.is_finite()) {
        return Err(Error::Data(format!(
            "non-finite input at position {}",
            ix % taus.len().max(1)
        )));
    }
    let n_obs = taus.len().saturating_sub(1);
    if n_obs < 2 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: taus.len(),
        });
    }
    let (k, r, u, v) = cfg.sequences(n_obs);
    let needed = k.max(r) + 2 + cfg.min_terms;
    if n_obs < needed {
        return Err(Error::InsufficientData {
            needed: needed + 1,
            got: taus.len(),
        });
    }

    let incs = rescaled_increments(taus, xs, 1.0 / n_obs as f64)?;
    let vhat = local_scale(&incs, cfg.p, k)?;
    let thetas = normalized_differences(&incs, &vhat, cfg.p, k)?;
    let (d_u, d_v) = deficit_pair(&thetas, u, v);
    let beta_hat = beta_from_deficits(d_u, d_v, u, v)?;

    let mut warnings = Vec::new();
    let (lo, hi) = cfg.beta_clamp;
    let plug = beta_hat.clamp(lo, hi);
    if plug != beta_hat {
        warnings.push(format!(
            "beta_hat = {beta_hat:.6} outside [{lo}, {hi}]; plug-ins use {plug}"
        ));
    }

    let chi = gap_factors(taus, plug, r)?;
    let kappa_hat = mean(&chi);
    let kappa_p_hat = kappa_p_from_factors(&chi, plug, cfg.p);

    let (kappa_bb, c_p_beta) = match &cfg.variance_source {
        VarianceSource::DataDriven => {
            let ratio = stable::ratio_a_mu(cfg.p, plug)?;
            (kappa_hat, ratio / kappa_p_hat)
        }
        VarianceSource::KnownPhi { phi, seed } => {
            let law = StableLaw::new(plug, 1.0)?;
            let c = stable::stable_constants(cfg.p, &law, phi, cfg.mc_size, *seed)?;
            (c.kappa_beta_beta, c.c_p_beta)
        }
    };
    let variance_hat = asymptotic_variance(plug, cfg.rho, kappa_bb, c_p_beta)?;

    let beta_bar = if cfg.debias {
        let deb_u = deb_from_factors(&chi, plug, u, c_p_beta);
        let deb_v = deb_from_factors(&chi, plug, v, c_p_beta);
        let (a, b) = (d_u + deb_u, d_v + deb_v);
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::degenerate("bias-corrected deficit is not positive"));
        }
        Some(beta_from_deficits(a, b, u, v)?)
    } else {
        None
    };

    let sqrt_n = (n_obs as f64).sqrt();
    let se = variance_hat.sqrt() / (u.powf(plug / 2.0) * sqrt_n);
    let half = two_sided_z95() * se;

    let point = beta_bar.unwrap_or(beta_hat);
    let scaled_error = true_beta.map(|b| u.powf(b / 2.0) * sqrt_n * (point - b));
    let std_stat = scaled_error.map(|s| s / variance_hat.sqrt());

    Ok(EstimateReport {
        beta_hat,
        beta_bar,
        l_u: 1.0 - d_u,
        l_v: 1.0 - d_v,
        u_n: u,
        v_n: v,
        k_n: k,
        r_n: r,
        n_obs,
        kappa_hat,
        kappa_p_hat,
        kappa_beta_beta: kappa_bb,
        c_p_beta,
        variance_source: cfg.variance_source.label(),
        variance_hat,
        scaled_error,
        std_stat,
        ci_low: beta_hat - half,
        ci_high: beta_hat + half,
        warnings,
    })
}
