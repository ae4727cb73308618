//! Random observation schemes `tau_i = tau_{i-1} + delta_n * phi_i * lambda(tau_{i-2})`.

use std::fmt::Write as _;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::io::fmt_machine;
use crate::stable::PhiSpec;

/// Times within `TIME_SLACK * horizon` above a cut-off count as observed
/// before it, so that accumulated rounding in the recursion does not drop
/// the last grid point of a regular scheme.
pub const TIME_SLACK: f64 = 1e-9;

/// Ornstein–Uhlenbeck intensity `d lambda = speed (level - lambda) dt + vol dW`,
/// clamped from below at `clamp_floor`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaSpec {
    pub level: f64,
    pub speed: f64,
    pub vol: f64,
    pub init: f64,
    pub clamp_floor: f64,
}

impl Default for LambdaSpec {
    fn default() -> Self {
        Self {
            level: 5.0,
            speed: 1.0,
            vol: 1.0,
            init: 1.0,
            clamp_floor: 0.05,
        }
    }
}

impl LambdaSpec {
    /// Deterministic `lambda == value`.
    pub fn constant(value: f64) -> Self {
        Self {
            level: value,
            speed: 0.0,
            vol: 0.0,
            init: value,
            clamp_floor: value.min(0.05),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.level,
            self.speed,
            self.vol,
            self.init,
            self.clamp_floor,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::param("intensity parameters must be finite"));
        }
        if !(self.init > 0.0 && self.clamp_floor > 0.0) {
            return Err(Error::param(
                "intensity init and clamp floor must be positive",
            ));
        }
        if self.speed < 0.0 || self.vol < 0.0 {
            return Err(Error::param("intensity speed and vol must be non-negative"));
        }
        Ok(())
    }
}

/// Everything needed to draw one observation scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    pub delta_n: f64,
    pub lambda: LambdaSpec,
    pub phi: PhiSpec,
    pub horizon: f64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            delta_n: 1e-3,
            lambda: LambdaSpec::default(),
            phi: PhiSpec::default(),
            horizon: 1.0,
        }
    }
}

impl SchemeConfig {
    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<SamplingTimes> {
        generate_times(self.delta_n, &self.lambda, &self.phi, self.horizon, rng)
    }
}

/// A generated observation grid.
///
/// `taus[0] = 0`. The final entry is the first time beyond the horizon; it is
/// kept so the recursion can be replayed but is not counted in `n_obs`.
/// `phi_draws[0]` is a zero placeholder since `tau_0` has no duration.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingTimes {
    pub taus: Vec<f64>,
    pub lambda_at_tau: Vec<f64>,
    pub phi_draws: Vec<f64>,
    pub n_obs: usize,
    pub delta_n: f64,
    pub horizon: f64,
    /// Number of Euler substeps at which the intensity hit its floor.
    pub clamp_events: usize,
}

impl SamplingTimes {
    /// `tau_0, ..., tau_{N_n(horizon)}`.
    pub fn observed(&self) -> &[f64] {
        &self.taus[..=self.n_obs]
    }

    /// Writes the `(index, tau, lambda_at_tau, phi)` CSV representation.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,tau,lambda_at_tau,phi\n");
        for i in 0..self.taus.len() {
            let _ = writeln!(
                out,
                "{i},{},{},{}",
                fmt_machine(self.taus[i]),
                fmt_machine(self.lambda_at_tau[i]),
                fmt_machine(self.phi_draws[i])
            );
        }
        out
    }
}

struct Intensity<'a> {
    spec: &'a LambdaSpec,
    value: f64,
    time: f64,
    max_step: f64,
    clamp_events: usize,
}

impl Intensity<'_> {
    /// Euler steps of length at most `max_step`, landing exactly on `target`.
    fn advance_to<R: Rng + ?Sized>(&mut self, target: f64, rng: &mut R) {
        let span = target - self.time;
        let steps = (span / self.max_step).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        let sqrt_h = h.sqrt();
        let s = self.spec;
        for _ in 0..steps {
            let z: f64 = StandardNormal.sample(rng);
            self.value += s.speed * (s.level - self.value) * h + s.vol * sqrt_h * z;
            if self.value < s.clamp_floor {
                self.value = s.clamp_floor;
                self.clamp_events += 1;
            }
        }
        self.time = target;
    }
}

/// Draws the observation scheme on `[0, horizon]` plus one overshooting time.
pub fn generate_times<R: Rng + ?Sized>(
    delta_n: f64,
    lambda: &LambdaSpec,
    phi: &PhiSpec,
    horizon: f64,
    rng: &mut R,
) -> Result<SamplingTimes> {
    if !(delta_n > 0.0 && delta_n.is_finite()) {
        return Err(Error::param(format!(
            "delta_n = {delta_n} must be positive"
        )));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::param(format!(
            "horizon = {horizon} must be positive"
        )));
    }
    lambda.validate()?;

    let cutoff = horizon * (1.0 + TIME_SLACK);
    let expected = (horizon / delta_n).ceil() as usize + 2;
    let mut taus = Vec::with_capacity(expected);
    let mut lams = Vec::with_capacity(expected);
    let mut phis = Vec::with_capacity(expected);
    let mut intensity = Intensity {
        spec: lambda,
        value: lambda.init,
        time: 0.0,
        max_step: delta_n / 5.0,
        clamp_events: 0,
    };

    taus.push(0.0);
    lams.push(lambda.init);
    phis.push(0.0);

    let phi1 = phi.sample(rng);
    let tau1 = delta_n * phi1;
    taus.push(tau1);
    phis.push(phi1);
    if tau1 <= 0.0 {
        return Err(Error::Simulation {
            time: 0.0,
            reason: "non-increasing observation time".into(),
        });
    }
    intensity.advance_to(tau1, rng);
    lams.push(intensity.value);

    while *taus.last().expect("non-empty") <= cutoff {
        let i = taus.len();
        let phi_i = phi.sample(rng);
        let prev = taus[i - 1];
        let next = prev + delta_n * phi_i * lams[i - 2];
        if !(next > prev) {
            return Err(Error::Simulation {
                time: prev,
                reason: "non-increasing observation time".into(),
            });
        }
        taus.push(next);
        phis.push(phi_i);
        intensity.advance_to(next, rng);
        lams.push(intensity.value);
    }

    let n_obs = taus.len() - 2;
    Ok(SamplingTimes {
        taus,
        lambda_at_tau: lams,
        phi_draws: phis,
        n_obs,
        delta_n,
        horizon,
        clamp_events: intensity.clamp_events,
    })
}

/// `N_n(t)`: the number of `i >= 1` with `tau_i <= t`.
pub fn count_observations(times: &SamplingTimes, t: f64) -> Result<usize> {
    if !(t >= 0.0 && t <= times.horizon) {
        return Err(Error::param(format!(
            "t = {t} outside [0, {}]",
            times.horizon
        )));
    }
    let cutoff = t + TIME_SLACK * times.horizon;
    Ok(times.taus[1..=times.n_obs].partition_point(|tau| *tau <= cutoff))
}
