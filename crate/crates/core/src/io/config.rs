//! INI-style run configuration.
//!
//! ```text
//! [model]
//! beta = 1.5
//! [scheme]
//! delta_inv = 1000
//! [estimator]
//! rho = 0.5
//! [study]
//! betas = 1.1, 1.3
//! ```
//!
//! Missing keys keep their defaults; unknown sections or keys are errors.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimators::{EstimatorConfig, VarianceSource};
use crate::harness::StudyConfig;
use crate::path::{JumpLaw, ModelConfig, ResidualJumps};
use crate::sampling::{LambdaSpec, SchemeConfig};
use crate::stable::{PhiKind, PhiSpec, StableLaw, DEFAULT_MC_SEED};

#[derive(Debug, Clone, PartialEq)]
pub struct IniEntry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IniSection {
    pub name: String,
    pub line: usize,
    pub entries: Vec<IniEntry>,
}

/// Parsed INI text, in file order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ini {
    pub sections: Vec<IniSection>,
}

impl Ini {
    pub fn section(&self, name: &str) -> Option<&IniSection> {
        self.sections.iter().find(|s| s.name == name)
    }
}

fn config_err(line: usize, key: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        line,
        key: key.to_string(),
        reason: reason.into(),
    }
}

/// Parses `[section]` headers and `key = value` lines. `#` and `;` start
/// comment lines.
pub fn parse_ini(text: &str) -> Result<Ini> {
    let mut ini = Ini::default();
    for (ix, raw) in text.lines().enumerate() {
        let line = ix + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') || s.starts_with(';') {
            continue;
        }
        if let Some(rest) = s.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| config_err(line, "", "unterminated section header"))?
                .trim();
            if name.is_empty() {
                return Err(config_err(line, "", "empty section name"));
            }
            if ini.section(name).is_some() {
                return Err(config_err(line, name, "duplicate section"));
            }
            ini.sections.push(IniSection {
                name: name.to_string(),
                line,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = s
            .split_once('=')
            .ok_or_else(|| config_err(line, "", "expected `key = value`"))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(config_err(line, "", "empty key"));
        }
        let section = ini
            .sections
            .last_mut()
            .ok_or_else(|| config_err(line, key, "key outside of any section"))?;
        if section.entries.iter().any(|e| e.key == key) {
            return Err(config_err(line, key, "duplicate key"));
        }
        section.entries.push(IniEntry {
            key: key.to_string(),
            value: value.trim().to_string(),
            line,
        });
    }
    Ok(ini)
}

fn parse_value<T: FromStr>(e: &IniEntry) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    e.value
        .parse::<T>()
        .map_err(|err| config_err(e.line, &e.key, format!("cannot parse `{}`: {err}", e.value)))
}

fn parse_list<T: FromStr>(e: &IniEntry) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    e.value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|err| config_err(e.line, &e.key, format!("cannot parse `{s}`: {err}")))
        })
        .collect()
}

fn wrap<T>(line: usize, key: &str, r: Result<T>) -> Result<T> {
    r.map_err(|err| config_err(line, key, err.to_string()))
}

fn parse_bool(e: &IniEntry) -> Result<bool> {
    match e.value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(config_err(
            e.line,
            &e.key,
            format!("`{}` is not a boolean", e.value),
        )),
    }
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Grid and size of a Monte Carlo study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudySection {
    pub betas: Vec<f64>,
    pub rhos: Vec<f64>,
    pub delta_inv: Vec<u64>,
    pub reps: usize,
    pub seed: u64,
    pub workers: usize,
}

impl Default for StudySection {
    fn default() -> Self {
        Self {
            betas: vec![1.1, 1.3, 1.5, 1.7, 1.9],
            rhos: vec![0.5, 2.0],
            delta_inv: vec![1000, 10_000],
            reps: 1000,
            seed: 1,
            workers: 0,
        }
    }
}

/// Full run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub scheme: SchemeConfig,
    pub estimator: EstimatorConfig,
    pub study: StudySection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelConfig::reference(1.5).expect("default model is valid"),
            scheme: SchemeConfig::default(),
            estimator: EstimatorConfig::default(),
            study: StudySection::default(),
        }
    }
}

/// Sections `RunConfig` reads.
pub const CONFIG_SECTIONS: [&str; 4] = ["model", "scheme", "estimator", "study"];

struct PhiKeys {
    kind: String,
    rate: f64,
    floor: f64,
    values: Vec<f64>,
    weights: Vec<f64>,
    line: usize,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_ini(&parse_ini(text)?, &[])
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Builds a configuration; sections named in `extra` are skipped.
    pub fn from_ini(ini: &Ini, extra: &[&str]) -> Result<Self> {
        let mut cfg = Self::default();
        let mut phi = PhiKeys {
            kind: "truncated_exponential".into(),
            rate: 1.0,
            floor: 0.1,
            values: Vec::new(),
            weights: Vec::new(),
            line: 0,
        };
        let mut beta = cfg.model.stable.beta;
        let mut scale = cfg.model.stable.scale;
        let mut residual_intensity = 0.0;
        let mut residual_law = "two_point".to_string();
        let mut residual_size = 1.0;
        let mut variance = "data".to_string();
        let mut variance_seed = DEFAULT_MC_SEED;

        for section in &ini.sections {
            if extra.contains(&section.name.as_str()) {
                continue;
            }
            for e in &section.entries {
                let m = &mut cfg.model;
                let s = &mut cfg.scheme;
                let est = &mut cfg.estimator;
                let st = &mut cfg.study;
                match (section.name.as_str(), e.key.as_str()) {
                    ("model", "beta") => beta = parse_value(e)?,
                    ("model", "stable_scale") => scale = parse_value(e)?,
                    ("model", "x0") => m.x0 = parse_value(e)?,
                    ("model", "alpha0") => m.alpha0 = parse_value(e)?,
                    ("model", "sigma0") => m.sigma0 = parse_value(e)?,
                    ("model", "alpha_speed") => m.alpha_speed = parse_value(e)?,
                    ("model", "alpha_level") => m.alpha_level = parse_value(e)?,
                    ("model", "alpha_vol") => m.alpha_vol = parse_value(e)?,
                    ("model", "sigma_loading") => m.sigma_loading = parse_value(e)?,
                    ("model", "substep_divisor") => m.euler_substep_divisor = parse_value(e)?,
                    ("model", "residual_intensity") => residual_intensity = parse_value(e)?,
                    ("model", "residual_law") => residual_law = e.value.clone(),
                    ("model", "residual_size") => residual_size = parse_value(e)?,

                    ("scheme", "delta_inv") => {
                        let n: f64 = parse_value(e)?;
                        if !(n > 0.0) {
                            return Err(config_err(e.line, &e.key, "must be positive"));
                        }
                        s.delta_n = 1.0 / n;
                    }
                    ("scheme", "delta_n") => s.delta_n = parse_value(e)?,
                    ("scheme", "horizon") => s.horizon = parse_value(e)?,
                    ("scheme", "lambda_level") => s.lambda.level = parse_value(e)?,
                    ("scheme", "lambda_speed") => s.lambda.speed = parse_value(e)?,
                    ("scheme", "lambda_vol") => s.lambda.vol = parse_value(e)?,
                    ("scheme", "lambda_init") => s.lambda.init = parse_value(e)?,
                    ("scheme", "lambda_floor") => s.lambda.clamp_floor = parse_value(e)?,
                    ("scheme", "lambda_constant") => {
                        s.lambda = LambdaSpec::constant(parse_value(e)?);
                    }
                    ("scheme", "phi") => {
                        phi.kind = e.value.clone();
                        phi.line = e.line;
                    }
                    ("scheme", "phi_rate") => phi.rate = parse_value(e)?,
                    ("scheme", "phi_floor") => phi.floor = parse_value(e)?,
                    ("scheme", "phi_values") => phi.values = parse_list(e)?,
                    ("scheme", "phi_weights") => phi.weights = parse_list(e)?,

                    ("estimator", "p") => est.p = parse_value(e)?,
                    ("estimator", "rho") => est.rho = parse_value(e)?,
                    ("estimator", "u_exponent") => est.u_exponent = parse_value(e)?,
                    ("estimator", "u_scale") => est.u_scale = parse_value(e)?,
                    ("estimator", "k_exponent") => est.k_exponent = parse_value(e)?,
                    ("estimator", "r_exponent") => est.r_exponent = parse_value(e)?,
                    ("estimator", "debias") => est.debias = parse_bool(e)?,
                    ("estimator", "mc_size") => est.mc_size = parse_value(e)?,
                    ("estimator", "beta_clamp_lo") => est.beta_clamp.0 = parse_value(e)?,
                    ("estimator", "beta_clamp_hi") => est.beta_clamp.1 = parse_value(e)?,
                    ("estimator", "min_terms") => est.min_terms = parse_value(e)?,
                    ("estimator", "variance") => variance = e.value.clone(),
                    ("estimator", "variance_seed") => variance_seed = parse_value(e)?,

                    ("study", "betas") => st.betas = parse_list(e)?,
                    ("study", "rhos") => st.rhos = parse_list(e)?,
                    ("study", "delta_inv") => st.delta_inv = parse_list(e)?,
                    ("study", "reps") => st.reps = parse_value(e)?,
                    ("study", "seed") => st.seed = parse_value(e)?,
                    ("study", "workers") => st.workers = parse_value(e)?,

                    (sec, key) if CONFIG_SECTIONS.contains(&sec) => {
                        return Err(config_err(e.line, key, format!("unknown key in [{sec}]")));
                    }
                    (sec, _) => {
                        return Err(config_err(section.line, sec, "unknown section"));
                    }
                }
            }
            if section.entries.is_empty() && !CONFIG_SECTIONS.contains(&section.name.as_str()) {
                return Err(config_err(section.line, &section.name, "unknown section"));
            }
        }

        let line_of = |sec: &str, key: &str| {
            ini.section(sec)
                .and_then(|s| s.entries.iter().find(|e| e.key == key))
                .map_or(0, |e| e.line)
        };

        cfg.model.stable = wrap(
            line_of("model", "beta"),
            "beta",
            StableLaw::new(beta, scale),
        )?;
        cfg.model.residual_jumps = if residual_intensity > 0.0 {
            let law = match residual_law.as_str() {
                "two_point" => JumpLaw::TwoPoint {
                    size: residual_size,
                },
                "uniform" => JumpLaw::Uniform {
                    half_width: residual_size,
                },
                other => {
                    return Err(config_err(
                        line_of("model", "residual_law"),
                        "residual_law",
                        format!("unknown jump law `{other}` (two_point, uniform)"),
                    ))
                }
            };
            Some(ResidualJumps {
                intensity: residual_intensity,
                law,
            })
        } else {
            None
        };
        wrap(0, "model", cfg.model.validate())?;

        cfg.scheme.phi = wrap(
            phi.line,
            "phi",
            match phi.kind.as_str() {
                "truncated_exponential" => PhiSpec::truncated_exponential(phi.rate, phi.floor),
                "constant" => Ok(PhiSpec::constant()),
                "table" => PhiSpec::table(phi.values, phi.weights),
                other => Err(Error::param(format!(
                    "unknown phi law `{other}` (truncated_exponential, constant, table)"
                ))),
            },
        )?;
        wrap(0, "scheme", cfg.scheme.lambda.validate())?;
        if !(cfg.scheme.delta_n > 0.0 && cfg.scheme.horizon > 0.0) {
            return Err(config_err(
                0,
                "scheme",
                "delta_n and horizon must be positive",
            ));
        }

        cfg.estimator.variance_source = match variance.as_str() {
            "data" => VarianceSource::DataDriven,
            "known_phi" => VarianceSource::KnownPhi {
                phi: cfg.scheme.phi.clone(),
                seed: variance_seed,
            },
            other => {
                return Err(config_err(
                    line_of("estimator", "variance"),
                    "variance",
                    format!("unknown variance source `{other}` (data, known_phi)"),
                ))
            }
        };
        wrap(0, "estimator", cfg.estimator.validate())?;
        Ok(cfg)
    }

    /// INI text that parses back to `self`.
    pub fn to_ini(&self) -> String {
        let m = &self.model;
        let s = &self.scheme;
        let e = &self.estimator;
        let st = &self.study;
        let mut out = String::new();
        let _ = writeln!(out, "[model]");
        let _ = writeln!(out, "beta = {}", m.stable.beta);
        let _ = writeln!(out, "stable_scale = {}", m.stable.scale);
        let _ = writeln!(out, "x0 = {}", m.x0);
        let _ = writeln!(out, "alpha0 = {}", m.alpha0);
        let _ = writeln!(out, "sigma0 = {}", m.sigma0);
        let _ = writeln!(out, "alpha_speed = {}", m.alpha_speed);
        let _ = writeln!(out, "alpha_level = {}", m.alpha_level);
        let _ = writeln!(out, "alpha_vol = {}", m.alpha_vol);
        let _ = writeln!(out, "sigma_loading = {}", m.sigma_loading);
        let _ = writeln!(out, "substep_divisor = {}", m.euler_substep_divisor);
        match &m.residual_jumps {
            Some(r) => {
                let (law, size) = match r.law {
                    JumpLaw::TwoPoint { size } => ("two_point", size),
                    JumpLaw::Uniform { half_width } => ("uniform", half_width),
                };
                let _ = writeln!(out, "residual_intensity = {}", r.intensity);
                let _ = writeln!(out, "residual_law = {law}");
                let _ = writeln!(out, "residual_size = {size}");
            }
            None => {
                let _ = writeln!(out, "residual_intensity = 0");
            }
        }

        let _ = writeln!(out, "\n[scheme]");
        let _ = writeln!(out, "delta_n = {}", s.delta_n);
        let _ = writeln!(out, "horizon = {}", s.horizon);
        let _ = writeln!(out, "lambda_level = {}", s.lambda.level);
        let _ = writeln!(out, "lambda_speed = {}", s.lambda.speed);
        let _ = writeln!(out, "lambda_vol = {}", s.lambda.vol);
        let _ = writeln!(out, "lambda_init = {}", s.lambda.init);
        let _ = writeln!(out, "lambda_floor = {}", s.lambda.clamp_floor);
        match s.phi.kind() {
            PhiKind::TruncatedExponential { rate, floor } => {
                let _ = writeln!(out, "phi = truncated_exponential");
                let _ = writeln!(out, "phi_rate = {rate}");
                let _ = writeln!(out, "phi_floor = {floor}");
            }
            PhiKind::Constant => {
                let _ = writeln!(out, "phi = constant");
            }
            PhiKind::Table { values, weights } => {
                let _ = writeln!(out, "phi = table");
                let _ = writeln!(out, "phi_values = {}", join(values));
                let _ = writeln!(out, "phi_weights = {}", join(weights));
            }
        }

        let _ = writeln!(out, "\n[estimator]");
        let _ = writeln!(out, "p = {}", e.p);
        let _ = writeln!(out, "rho = {}", e.rho);
        let _ = writeln!(out, "u_exponent = {}", e.u_exponent);
        let _ = writeln!(out, "u_scale = {}", e.u_scale);
        let _ = writeln!(out, "k_exponent = {}", e.k_exponent);
        let _ = writeln!(out, "r_exponent = {}", e.r_exponent);
        let _ = writeln!(out, "debias = {}", e.debias);
        let _ = writeln!(out, "mc_size = {}", e.mc_size);
        let _ = writeln!(out, "beta_clamp_lo = {}", e.beta_clamp.0);
        let _ = writeln!(out, "beta_clamp_hi = {}", e.beta_clamp.1);
        let _ = writeln!(out, "min_terms = {}", e.min_terms);
        let _ = writeln!(out, "variance = {}", e.variance_source.label());
        if let VarianceSource::KnownPhi { seed, .. } = &e.variance_source {
            let _ = writeln!(out, "variance_seed = {seed}");
        }

        let _ = writeln!(out, "\n[study]");
        let _ = writeln!(out, "betas = {}", join(&st.betas));
        let _ = writeln!(out, "rhos = {}", join(&st.rhos));
        let _ = writeln!(out, "delta_inv = {}", join(&st.delta_inv));
        let _ = writeln!(out, "reps = {}", st.reps);
        let _ = writeln!(out, "seed = {}", st.seed);
        let _ = writeln!(out, "workers = {}", st.workers);
        out
    }

    pub fn study_config(&self) -> StudyConfig {
        StudyConfig {
            betas: self.study.betas.clone(),
            rhos: self.study.rhos.clone(),
            delta_inv: self.study.delta_inv.clone(),
            n_reps: self.study.reps,
            master_seed: self.study.seed,
            model: self.model.clone(),
            scheme: self.scheme.clone(),
            estimator: self.estimator.clone(),
            workers: self.study.workers,
        }
    }
}
