//! Simulation and estimation of the jump activity index of pure-jump
//! semimartingales observed at random, irregular times.
//!
//! The crate is organised bottom-up:
//!
//! * [`stable`]: symmetric stable sampling, duration laws and limit constants.
//! * [`sampling`]: the random observation scheme driven by an intensity process.
//! * [`path`]: Euler simulation of the observed process on that scheme.
//! * [`estimators`]: the empirical characteristic function estimator, its
//!   variance and the debiased variant.
//! * [`harness`]: parallel, reproducible Monte Carlo studies and QQ data.
//! * [`io`]: configuration files, tick CSV, reports, SVG and run manifests.

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimators;
pub mod harness;
pub mod io;
pub mod path;
pub mod quadrature;
pub mod rng;
pub mod sampling;
pub mod stable;

pub use error::{Error, Result};
pub use estimators::{estimate, EstimateReport, EstimatorConfig, VarianceSource};
pub use harness::{run_study, CellResult, QQData, StudyConfig, StudyRow};
pub use path::{simulate_path, simulate_replication, ModelConfig, PathSample};
pub use sampling::{generate_times, LambdaSpec, SamplingTimes, SchemeConfig};
pub use stable::{PhiSpec, StableConstants, StableLaw};
