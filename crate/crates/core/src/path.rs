//! Euler simulation of `X = X0 + int alpha ds + int sigma_{s-} dL_s (+ Y)` on a
//! random observation grid.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::io::TickSeries;
use crate::rng::{self, PATH_STREAM, SCHEME_STREAM};
use crate::sampling::{SamplingTimes, SchemeConfig};
use crate::stable::{StableLaw, StandardStable};

/// Jump-size law of the optional compound-Poisson component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpLaw {
    /// `+size` or `-size` with equal probability.
    TwoPoint { size: f64 },
    /// Uniform on `[-half_width, half_width]`.
    Uniform { half_width: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualJumps {
    pub intensity: f64,
    pub law: JumpLaw,
}

impl ResidualJumps {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.law {
            JumpLaw::TwoPoint { size } => {
                if rng.random::<bool>() {
                    size
                } else {
                    -size
                }
            }
            JumpLaw::Uniform { half_width } => half_width * (2.0 * rng.random::<f64>() - 1.0),
        }
    }
}

/// Model for the observed process.
///
/// `alpha` mean-reverts, `d alpha = alpha_speed (alpha_level - alpha) dt + alpha_vol dW`,
/// and `d sigma = sigma_loading * alpha dW` shares the same Brownian driver.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelConfig {
    pub x0: f64,
    pub alpha0: f64,
    pub sigma0: f64,
    pub alpha_speed: f64,
    pub alpha_level: f64,
    pub alpha_vol: f64,
    pub sigma_loading: f64,
    pub stable: StableLaw,
    pub residual_jumps: Option<ResidualJumps>,
    pub euler_substep_divisor: usize,
}

impl ModelConfig {
    /// The reference stochastic-volatility model with unit starting values.
    pub fn reference(beta: f64) -> Result<Self> {
        Ok(Self {
            x0: 1.0,
            alpha0: 1.0,
            sigma0: 1.0,
            alpha_speed: 2.0,
            alpha_level: 1.0,
            alpha_vol: 2.0,
            sigma_loading: 1.0,
            stable: StableLaw::new(beta, 1.0)?,
            residual_jumps: None,
            euler_substep_divisor: 5,
        })
    }

    /// Constant drift and volatility.
    pub fn constant(beta: f64, drift: f64, sigma: f64) -> Result<Self> {
        Ok(Self {
            x0: 0.0,
            alpha0: drift,
            sigma0: sigma,
            alpha_speed: 0.0,
            alpha_level: drift,
            alpha_vol: 0.0,
            sigma_loading: 0.0,
            ..Self::reference(beta)?
        })
    }

    pub fn validate(&self) -> Result<()> {
        StableLaw::new(self.stable.beta, self.stable.scale)?;
        if self.euler_substep_divisor == 0 {
            return Err(Error::param("Euler substep divisor must be at least 1"));
        }
        let coeffs = [
            self.x0,
            self.alpha0,
            self.sigma0,
            self.alpha_speed,
            self.alpha_level,
            self.alpha_vol,
            self.sigma_loading,
        ];
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::param("model coefficients must be finite"));
        }
        if let Some(res) = &self.residual_jumps {
            if !(res.intensity >= 0.0 && res.intensity.is_finite()) {
                return Err(Error::param("residual jump intensity must be non-negative"));
            }
        }
        Ok(())
    }
}

/// Observed values of one simulated path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub times: SamplingTimes,
    /// `X` at every entry of `times.taus`, overshooting time included.
    pub values: Vec<f64>,
    pub true_beta: f64,
    pub seed: Option<u64>,
    pub metadata: BTreeMap<String, f64>,
}

impl PathSample {
    /// Observation times in `[0, horizon]`.
    pub fn observed_times(&self) -> &[f64] {
        self.times.observed()
    }

    pub fn observed_values(&self) -> &[f64] {
        &self.values[..=self.times.n_obs]
    }

    pub fn tick_series(&self) -> TickSeries {
        TickSeries {
            times: self.observed_times().to_vec(),
            prices: self.observed_values().to_vec(),
            source: match self.seed {
                Some(s) => format!("simulated beta={} seed={s}", self.true_beta),
                None => format!("simulated beta={}", self.true_beta),
            },
        }
    }
}

/// Euler scheme on a refinement of the observation grid.
///
/// Each gap is split into `euler_substep_divisor` equal substeps. On a
/// substep of length `h` the stable increment is exact in law,
/// `(A_beta h)^(1/beta) S`, and is multiplied by `sigma` at the left
/// endpoint.
pub fn simulate_path<R: Rng + ?Sized>(
    model: &ModelConfig,
    times: &SamplingTimes,
    rng: &mut R,
) -> Result<PathSample> {
    model.validate()?;
    let taus = &times.taus;
    if taus.first() != Some(&0.0) || taus.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Data(
            "observation times must start at 0 and increase".into(),
        ));
    }

    let beta = model.stable.beta;
    let a_beta = model.stable.a_beta();
    let stable = StandardStable::new(beta)?;
    let m = model.euler_substep_divisor;
    let inv_beta = 1.0 / beta;

    let mut x = model.x0;
    let mut alpha = model.alpha0;
    let mut sigma = model.sigma0;
    let mut values = Vec::with_capacity(taus.len());
    values.push(x);

    let residual = model.residual_jumps.filter(|r| r.intensity > 0.0);
    let mut next_jump = match &residual {
        Some(r) => {
            let e: f64 = Exp1.sample(rng);
            e / r.intensity
        }
        None => f64::INFINITY,
    };
    let mut n_jumps = 0usize;

    for w in taus.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let h = (t1 - t0) / m as f64;
        let sqrt_h = h.sqrt();
        let stable_scale = (a_beta * h).powf(inv_beta);
        for k in 0..m {
            let z: f64 = StandardNormal.sample(rng);
            let dw = sqrt_h * z;
            let dl = stable_scale * stable.sample(rng);
            x += alpha * h + sigma * dl;
            let alpha_prev = alpha;
            alpha += model.alpha_speed * (model.alpha_level - alpha) * h + model.alpha_vol * dw;
            sigma += model.sigma_loading * alpha_prev * dw;

            if let Some(r) = &residual {
                let end = if k + 1 == m {
                    t1
                } else {
                    t0 + (k + 1) as f64 * h
                };
                while next_jump <= end {
                    x += r.draw(rng);
                    n_jumps += 1;
                    let e: f64 = Exp1.sample(rng);
                    next_jump += e / r.intensity;
                }
            }
            if !(x.is_finite() && alpha.is_finite() && sigma.is_finite()) {
                return Err(Error::Simulation {
                    time: t0 + (k + 1) as f64 * h,
                    reason: "state became non-finite".into(),
                });
            }
        }
        values.push(x);
    }

    let mut metadata = BTreeMap::new();
    metadata.insert("clamp_events".to_string(), times.clamp_events as f64);
    metadata.insert("substeps".to_string(), (m * (taus.len() - 1)) as f64);
    metadata.insert("substep_divisor".to_string(), m as f64);
    metadata.insert("residual_jumps".to_string(), n_jumps as f64);

    Ok(PathSample {
        times: times.clone(),
        values,
        true_beta: beta,
        seed: None,
        metadata,
    })
}

/// Scheme and path from independent sub-streams of `rep_seed`.
pub fn simulate_replication(
    model: &ModelConfig,
    scheme: &SchemeConfig,
    rep_seed: u64,
) -> Result<PathSample> {
    let times = scheme.generate(&mut rng::stream(rep_seed, SCHEME_STREAM))?;
    let mut path = simulate_path(model, &times, &mut rng::stream(rep_seed, PATH_STREAM))?;
    path.seed = Some(rep_seed);
    Ok(path)
}
