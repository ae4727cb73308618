//! Symmetric stable laws, sampling-duration laws and the constants that tie
//! them together in the limit of the empirical characteristic function.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quadrature::integrate;
use crate::rng;

/// Default Monte Carlo size for `kappa_{p,beta}`.
pub const DEFAULT_MC_SIZE: usize = 10_000_000;
/// Seed used for constant evaluation unless the caller supplies one.
pub const DEFAULT_MC_SEED: u64 = 0x5eed_4b41_5050;

const MC_CHUNK: usize = 1 << 16;

fn check_beta(beta: f64) -> Result<()> {
    if beta > 1.0 && beta < 2.0 {
        Ok(())
    } else {
        Err(Error::param(format!(
            "stability index {beta} outside (1, 2)"
        )))
    }
}

/// Driving stable law with Lévy density `scale * |x|^(-1-beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableLaw {
    pub beta: f64,
    pub scale: f64,
}

impl StableLaw {
    pub fn new(beta: f64, scale: f64) -> Result<Self> {
        check_beta(beta)?;
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::param(format!(
                "stable scale A = {scale} must be positive"
            )));
        }
        Ok(Self { beta, scale })
    }

    /// `A_beta` of this law: `E exp(iuL_t) = exp(-A_beta |u|^beta t)`.
    pub fn a_beta(&self) -> f64 {
        a_beta_unchecked(self.beta, self.scale)
    }
}

/// Chambers–Mallows–Stuck sampler for the symmetric stable law with
/// characteristic function `exp(-|u|^beta)`.
#[derive(Debug, Clone, Copy)]
pub struct StandardStable {
    beta: f64,
    inv_beta: f64,
    tail_exp: f64,
}

impl StandardStable {
    pub fn new(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self {
            beta,
            inv_beta: 1.0 / beta,
            tail_exp: (1.0 - beta) / beta,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Distribution<f64> for StandardStable {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = Open01.sample(rng);
        let v = PI * u - FRAC_PI_2;
        let w: f64 = Exp1.sample(rng);
        let cos_v = v.cos();
        (self.beta * v).sin() / cos_v.powf(self.inv_beta)
            * (((1.0 - self.beta) * v).cos() / w).powf(self.tail_exp)
    }
}

/// One draw of the standard symmetric `beta`-stable law.
pub fn sample_standard_stable<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> Result<f64> {
    Ok(StandardStable::new(beta)?.sample(rng))
}

/// `int_0^inf (1 - cos y) y^(-1-beta) dy`.
///
/// On `[0, 1]` the cosine series integrates termwise,
/// `sum_{k>=1} (-1)^(k+1) / ((2k)! (2k - beta))`. On `[1, inf)` the
/// non-oscillating part is `1/beta` and the cosine part is integrated by
/// parts twice so that the remaining integrand decays like `y^(-3-beta)`
/// before it is handed to the adaptive rule.
fn levy_khintchine_integral(beta: f64) -> f64 {
    let mut head = 0.0;
    let mut fact = 1.0;
    for k in 1..=12u32 {
        let two_k = 2.0 * k as f64;
        fact *= (two_k - 1.0) * two_k;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        head += sign / (fact * (two_k - beta));
    }

    // J(a) = int_1^inf cos(y) y^-a dy; J(1+b) = -sin1 + (1+b)(cos1 - (2+b) J(3+b)).
    let period = PI;
    let panels = 2000;
    let mut far = 0.0;
    for k in 0..panels {
        let a = 1.0 + k as f64 * period;
        far += integrate(|y: f64| y.cos() * y.powf(-3.0 - beta), a, a + period, 1e-17);
    }
    let cos_part = -1f64.sin() + (1.0 + beta) * (1f64.cos() - (2.0 + beta) * far);
    head + 1.0 / beta - cos_part
}

fn a_beta_unchecked(beta: f64, scale: f64) -> f64 {
    2.0 * scale * levy_khintchine_integral(beta)
}

/// `A_beta = 2A int_0^inf (1 - cos y) y^(-1-beta) dy`.
pub fn a_beta(beta: f64, scale: f64) -> Result<f64> {
    StableLaw::new(beta, scale).map(|law| law.a_beta())
}

/// Closed form `-2A Gamma(-beta) cos(pi beta / 2)`, kept as a cross-check of
/// the quadrature.
pub fn a_beta_closed_form(beta: f64, scale: f64) -> Result<f64> {
    StableLaw::new(beta, scale)?;
    Ok(-2.0 * scale * gamma(-beta) * (PI * beta / 2.0).cos())
}

/// `E|Z|^p` for `Z` standard symmetric stable, `0 < p < beta`.
pub fn standard_abs_moment(p: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(p > 0.0 && p < beta) {
        return Err(Error::param(format!("moment order {p} outside (0, beta)")));
    }
    Ok(
        2f64.powf(p) * gamma(0.5 * (1.0 + p)) * gamma(1.0 - p / beta)
            / (PI.sqrt() * gamma(1.0 - 0.5 * p)),
    )
}

/// Closed form of `A_beta / mu_{p,beta}`; it does not depend on `A`.
pub fn ratio_a_mu(p: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(p > 0.0 && p < beta / 2.0) {
        return Err(Error::param(format!("p = {p} must lie in (0, beta/2)")));
    }
    Ok(standard_abs_moment(p, beta)?.powf(-beta / p))
}

/// Law of the sampling-duration variable before normalisation.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiKind {
    /// `max(Exp(rate), floor)`.
    TruncatedExponential {
        rate: f64,
        floor: f64,
    },
    Constant,
    /// Discrete law on `values` with (unnormalised) `weights`.
    Table {
        values: Vec<f64>,
        weights: Vec<f64>,
    },
}

/// Sampling-duration law `phi`, normalised so that `E[phi] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSpec {
    kind: PhiKind,
    normalization: f64,
    cumulative: Vec<f64>,
}

impl Default for PhiSpec {
    fn default() -> Self {
        Self::truncated_exponential(1.0, 0.1).expect("default phi law is valid")
    }
}

impl PhiSpec {
    pub fn truncated_exponential(rate: f64, floor: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::param(format!("phi rate {rate} must be positive")));
        }
        if !(floor > 0.0 && floor.is_finite()) {
            return Err(Error::param(format!("phi floor {floor} must be positive")));
        }
        // E[max(X, c)] = c + exp(-rate c) / rate
        let normalization = floor + (-rate * floor).exp() / rate;
        Ok(Self {
            kind: PhiKind::TruncatedExponential { rate, floor },
            normalization,
            cumulative: Vec::new(),
        })
    }

    pub fn constant() -> Self {
        Self {
            kind: PhiKind::Constant,
            normalization: 1.0,
            cumulative: Vec::new(),
        }
    }

    pub fn table(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.len() != weights.len() {
            return Err(Error::param(
                "phi table needs equally many values and weights",
            ));
        }
        if values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::param("phi table values must be positive"));
        }
        if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return Err(Error::param("phi table weights must be non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::param("phi table weights sum to zero"));
        }
        let normalization = values.iter().zip(&weights).map(|(v, w)| v * w).sum::<f64>() / total;
        let cumulative = weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        Ok(Self {
            kind: PhiKind::Table { values, weights },
            normalization,
            cumulative,
        })
    }

    pub fn kind(&self) -> &PhiKind {
        &self.kind
    }

    /// Divisor turning the raw duration into one with unit mean.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Smallest value `phi` can take.
    pub fn lower_bound(&self) -> f64 {
        match &self.kind {
            PhiKind::TruncatedExponential { floor, .. } => floor / self.normalization,
            PhiKind::Constant => 1.0,
            PhiKind::Table { values, weights } => {
                values
                    .iter()
                    .zip(weights)
                    .filter(|(_, w)| **w > 0.0)
                    .map(|(v, _)| *v)
                    .fold(f64::INFINITY, f64::min)
                    / self.normalization
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match &self.kind {
            PhiKind::TruncatedExponential { rate, floor } => {
                let e: f64 = Exp1.sample(rng);
                (e / rate).max(*floor) / self.normalization
            }
            PhiKind::Constant => 1.0,
            PhiKind::Table { values, .. } => {
                let total = *self.cumulative.last().expect("validated table");
                let target = rng.random::<f64>() * total;
                let ix = self.cumulative.partition_point(|c| *c <= target);
                values[ix.min(values.len() - 1)] / self.normalization
            }
        }
    }
}

/// One draw of `phi`.
pub fn sample_phi<R: Rng + ?Sized>(spec: &PhiSpec, rng: &mut R) -> f64 {
    spec.sample(rng)
}

/// `E[phi^q]` for `q > -2`.
pub fn phi_moment(spec: &PhiSpec, q: f64) -> Result<f64> {
    if !(q > -2.0) || !q.is_finite() {
        return Err(Error::param(format!("moment order {q} must exceed -2")));
    }
    let norm = spec.normalization;
    Ok(match &spec.kind {
        PhiKind::Constant => 1.0,
        PhiKind::Table { values, weights } => {
            let total: f64 = weights.iter().sum();
            values
                .iter()
                .zip(weights)
                .map(|(v, w)| w * (v / norm).powf(q))
                .sum::<f64>()
                / total
        }
        PhiKind::TruncatedExponential { rate, floor } => {
            let (rate, floor) = (*rate, *floor);
            let atom = floor.powf(q) * (1.0 - (-rate * floor).exp());
            // Density mass beyond floor + 60/rate is below exp(-60).
            let span = 60.0 / rate;
            let panels = 60;
            let width = span / panels as f64;
            let tail: f64 = (0..panels)
                .map(|k| {
                    let a = floor + k as f64 * width;
                    integrate(
                        |x: f64| x.powf(q) * rate * (-rate * x).exp(),
                        a,
                        a + width,
                        1e-16,
                    )
                })
                .sum();
            (atom + tail) * norm.powf(-q)
        }
    })
}

/// `kappa_{p,beta} = E[(phi1^(1-beta) + phi2^(1-beta))^(p/beta)]^(beta/p)`.
///
/// Exact for constant and tabulated laws and for `p == beta`; otherwise a
/// seeded Monte Carlo over `mc_size` independent pairs. Results do not depend
/// on the number of worker threads.
pub fn kappa_p_beta(p: f64, beta: f64, spec: &PhiSpec, mc_size: usize, seed: u64) -> Result<f64> {
    if !(p > 0.0 && p <= beta) {
        return Err(Error::param(format!("p = {p} must lie in (0, beta]")));
    }
    let e = 1.0 - beta;
    if p == beta {
        return Ok(2.0 * phi_moment(spec, e)?);
    }
    let pow = p / beta;
    Ok(match &spec.kind {
        PhiKind::Constant => 2.0,
        PhiKind::Table { values, weights } => {
            let total: f64 = weights.iter().sum();
            let norm = spec.normalization;
            let mut acc = 0.0;
            for (v1, w1) in values.iter().zip(weights) {
                for (v2, w2) in values.iter().zip(weights) {
                    let g = (v1 / norm).powf(e) + (v2 / norm).powf(e);
                    acc += w1 * w2 * g.powf(pow);
                }
            }
            (acc / (total * total)).powf(1.0 / pow)
        }
        PhiKind::TruncatedExponential { .. } => {
            if mc_size == 0 {
                return Err(Error::param("Monte Carlo size must be positive"));
            }
            let mean = mc_mean(spec, mc_size, seed, |phi1, phi2| {
                (phi1.powf(e) + phi2.powf(e)).powf(pow)
            });
            mean.powf(1.0 / pow)
        }
    })
}

/// Mean of `f(phi1, phi2)` over `size` independent pairs, chunked over
/// deterministic sub-streams.
pub(crate) fn mc_mean<F>(spec: &PhiSpec, size: usize, seed: u64, f: F) -> f64
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let chunks = size.div_ceil(MC_CHUNK);
    let sums: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng::stream(rng::derive_seed(seed, &[c as u64]), 0);
            let len = MC_CHUNK.min(size - c * MC_CHUNK);
            (0..len)
                .map(|_| {
                    let a = spec.sample(&mut rng);
                    let b = spec.sample(&mut rng);
                    f(a, b)
                })
                .sum()
        })
        .collect();
    sums.iter().sum::<f64>() / size as f64
}

/// Constants entering the limit of the empirical characteristic function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableConstants {
    pub a_beta: f64,
    pub mu_p_beta: f64,
    pub kappa_p_beta: f64,
    pub kappa_beta_beta: f64,
    pub c_p_beta: f64,
}

impl StableConstants {
    /// Assembles the constants from `A_beta / mu_{p,beta}` and the two
    /// sampling constants; `c_p_beta = a_beta / (mu_p_beta * kappa_p_beta)`.
    pub fn assemble(a_beta: f64, ratio: f64, kappa_p_beta: f64, kappa_beta_beta: f64) -> Self {
        let mu_p_beta = a_beta / ratio;
        Self {
            a_beta,
            mu_p_beta,
            kappa_p_beta,
            kappa_beta_beta,
            c_p_beta: a_beta / (mu_p_beta * kappa_p_beta),
        }
    }
}

pub fn stable_constants(
    p: f64,
    law: &StableLaw,
    spec: &PhiSpec,
    mc_size: usize,
    seed: u64,
) -> Result<StableConstants> {
    let ratio = ratio_a_mu(p, law.beta)?;
    let kappa_bb = 2.0 * phi_moment(spec, 1.0 - law.beta)?;
    let kappa_p = kappa_p_beta(p, law.beta, spec, mc_size, seed)?;
    Ok(StableConstants::assemble(
        law.a_beta(),
        ratio,
        kappa_p,
        kappa_bb,
    ))
}
