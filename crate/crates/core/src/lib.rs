//! Blur-noise mixture diffusion on small grids.
//!
//! The forward process corrupts a sample with a blend of DCT-domain Gaussian
//! blurring and additive Gaussian noise; the ratio of the two corruption
//! levels (the blur-to-noise ratio, BNR) interpolates between the usual
//! noise-only ("hot") process and a deterministic blur-only ("cold") one.
//! The reverse process splits generation into denoising toward a blurry
//! estimate and deblurring back the missing detail.
//!
//! The crate provides:
//!
//! - [`spectral`]: orthonormal 2D DCT transforms and blur masks;
//! - [`schedule`]: monotone corruption schedules parameterized by BNR;
//! - [`forward`]: forward marginals and inference transitions;
//! - [`oracle`]: closed-form optimal predictors on Gaussian-mixture data;
//! - [`predictor`]: a small trainable two-headed network with hand-rolled
//!   backprop;
//! - [`sampler`]: the reverse generative process with Euler and Heun steps
//!   and the four head parameterization variants;
//! - [`analysis`]: radial PSD estimation, power-law fits, BNR selection and
//!   two-sample quality metrics;
//! - [`experiment`] and [`config`]: the reproducible sweep drivers behind
//!   the CLI.

pub mod analysis;
pub mod config;
pub mod error;
pub mod experiment;
pub mod forward;
pub mod grid;
pub mod imageio;
pub mod oracle;
pub mod plot;
pub mod predictor;
pub mod rng;
pub mod sampler;
pub mod schedule;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::Grid;
pub use rng::NoiseSource;
pub use schedule::DiffusionSchedule;
