//! Corruption schedules: the monotone blur/noise sequences driving the
//! forward process, parameterized by the blur-to-noise ratio (BNR).

use std::io::Write;

use crate::error::{Error, Result};

/// The per-step corruption levels of one diffusion process.
///
/// Arrays are indexed `0..=T` with `alpha[0] = beta[0] = 0`, so step
/// `t = 1 -> 0` lands exactly on clean data. `beta` is the noise std in data
/// space, `alpha` the Gaussian blur std in pixels, and `sigma` the
/// stochasticity of each reverse step (`sigma[t] <= beta[t-1]`).
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionSchedule {
    beta: Vec<f64>,
    alpha: Vec<f64>,
    sigma: Vec<f64>,
    bnr: Option<f64>,
}

impl DiffusionSchedule {
    /// Number of discretization steps `T`.
    pub fn steps(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn alpha(&self, t: usize) -> f64 {
        self.alpha[t]
    }

    pub fn beta(&self, t: usize) -> f64 {
        self.beta[t]
    }

    pub fn sigma(&self, t: usize) -> f64 {
        self.sigma[t]
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alpha
    }

    pub fn betas(&self) -> &[f64] {
        &self.beta
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigma
    }

    /// The constant blur-to-noise ratio this schedule was built from, if any.
    /// Preset schedules with a varying ratio return `None`.
    pub fn constant_bnr(&self) -> Option<f64> {
        self.bnr
    }

    pub fn check_step(&self, t: usize) -> Result<()> {
        if t >= 1 && t <= self.steps() {
            Ok(())
        } else {
            Err(Error::StepOutOfRange {
                t,
                steps: self.steps(),
            })
        }
    }

    /// Blur-to-noise ratio at step `t`: `alpha[t] / beta[t]`.
    ///
    /// By convention this is `+inf` when only the noise level vanishes and
    /// `0` when both levels vanish.
    pub fn bnr_of(&self, t: usize) -> Result<f64> {
        self.check_step(t)?;
        let (a, b) = (self.alpha[t], self.beta[t]);
        Ok(if b > 0.0 {
            a / b
        } else if a > 0.0 {
            f64::INFINITY
        } else {
            0.0
        })
    }

    /// Serialize as CSV with columns `t,alpha,beta,sigma`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,alpha,beta,sigma")?;
        for t in 0..=self.steps() {
            writeln!(out, "{},{},{},{}", t, self.alpha[t], self.beta[t], self.sigma[t])?;
        }
        Ok(())
    }

    fn validate(self) -> Result<Self> {
        let t_max = self.steps();
        for t in 1..=t_max {
            if !(self.alpha[t].is_finite() && self.beta[t].is_finite() && self.sigma[t].is_finite())
            {
                return Err(Error::NonFinite("schedule entries".into()));
            }
            if self.alpha[t] < self.alpha[t - 1] || self.beta[t] < self.beta[t - 1] {
                return Err(Error::invalid(
                    "alpha and beta sequences must be non-decreasing",
                ));
            }
            if self.sigma[t] < 0.0 || self.sigma[t] > self.beta[t - 1] {
                return Err(Error::invalid(format!(
                    "sigma[{t}] must lie in [0, beta[{}]]",
                    t - 1
                )));
            }
        }
        Ok(self)
    }
}

/// Noise level at position `(t-1)/(T-1)` of the rho-power interpolation
/// between `beta_min` and `beta_max`.
fn rho_grid(t: usize, steps: usize, beta_min: f64, beta_max: f64, rho: f64) -> f64 {
    if steps == 1 {
        // Degenerate single-step grid: the prior level.
        return beta_max;
    }
    let s = (t - 1) as f64 / (steps - 1) as f64;
    let lo = beta_min.powf(1.0 / rho);
    let hi = beta_max.powf(1.0 / rho);
    (lo + s * (hi - lo)).powf(rho)
}

fn check_grid_params(steps: usize, beta_min: f64, beta_max: f64, rho: f64) -> Result<()> {
    if steps < 1 {
        return Err(Error::invalid("schedule needs at least one step"));
    }
    if !(beta_min > 0.0 && beta_max > beta_min && beta_min.is_finite() && beta_max.is_finite()) {
        return Err(Error::invalid(format!(
            "noise range must satisfy 0 < beta_min < beta_max, got [{beta_min}, {beta_max}]"
        )));
    }
    if !(rho >= 1.0 && rho.is_finite()) {
        return Err(Error::invalid(format!("rho must be >= 1, got {rho}")));
    }
    Ok(())
}

fn sigma_from_betas(beta: &[f64], eta: f64) -> Vec<f64> {
    let mut sigma = vec![0.0; beta.len()];
    for t in 1..beta.len() {
        let (prev, cur) = (beta[t - 1], beta[t]);
        if prev > 0.0 && cur > 0.0 {
            let ratio = (prev / cur).min(1.0);
            let s = eta * prev * (1.0 - ratio * ratio).sqrt();
            sigma[t] = s.clamp(0.0, prev);
        }
    }
    sigma
}

/// Build a constant-BNR schedule: `beta` follows the rho-power grid between
/// `beta_min` and `beta_max`, `alpha[t] = bnr * beta[t]`, and
/// `sigma[t] = eta * beta[t-1] * sqrt(1 - (beta[t-1]/beta[t])^2)`.
///
/// `eta = 0` gives a deterministic reverse process, `eta = 1` the fully
/// stochastic ancestral one.
pub fn make_bnr_schedule(
    steps: usize,
    beta_min: f64,
    beta_max: f64,
    rho: f64,
    bnr: f64,
    eta: f64,
) -> Result<DiffusionSchedule> {
    check_grid_params(steps, beta_min, beta_max, rho)?;
    if !(bnr >= 0.0 && bnr.is_finite()) {
        return Err(Error::invalid(format!(
            "bnr must be a finite nonnegative real, got {bnr}"
        )));
    }
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::invalid(format!("eta must lie in [0, 1], got {eta}")));
    }
    let mut beta = vec![0.0; steps + 1];
    for t in 1..=steps {
        beta[t] = rho_grid(t, steps, beta_min, beta_max, rho);
    }
    let alpha = beta.iter().map(|b| bnr * b).collect();
    let sigma = sigma_from_betas(&beta, eta);
    DiffusionSchedule {
        beta,
        alpha,
        sigma,
        bnr: Some(bnr),
    }
    .validate()
}

/// Parameters of the rising-BNR preset modeled after blur-heavy schedules
/// from prior diffusion work: the blur-to-noise ratio climbs from near zero
/// to `bnr_max` as `sin^2(pi t / 2T)` while `beta` follows the usual
/// rho-power grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BlurringPresetParams {
    pub beta_min: f64,
    pub beta_max: f64,
    pub rho: f64,
    pub bnr_max: f64,
    pub eta: f64,
}

impl Default for BlurringPresetParams {
    fn default() -> Self {
        BlurringPresetParams {
            beta_min: 0.02,
            beta_max: 8.0,
            rho: 7.0,
            bnr_max: 4.0,
            eta: 0.0,
        }
    }
}

/// Build the rising-BNR preset. `bnr_of` increases strictly with `t`
/// (towards cold diffusion late in the forward process), while alpha and
/// beta stay monotone.
pub fn make_blurring_diffusion_schedule(
    steps: usize,
    params: &BlurringPresetParams,
) -> Result<DiffusionSchedule> {
    check_grid_params(steps, params.beta_min, params.beta_max, params.rho)?;
    if !(params.bnr_max > 0.0 && params.bnr_max.is_finite()) {
        return Err(Error::invalid("bnr_max must be positive"));
    }
    if !(0.0..=1.0).contains(&params.eta) {
        return Err(Error::invalid("eta must lie in [0, 1]"));
    }
    let mut beta = vec![0.0; steps + 1];
    let mut alpha = vec![0.0; steps + 1];
    for t in 1..=steps {
        beta[t] = rho_grid(t, steps, params.beta_min, params.beta_max, params.rho);
        let phase = std::f64::consts::PI * t as f64 / (2.0 * steps as f64);
        alpha[t] = params.bnr_max * phase.sin().powi(2) * beta[t];
    }
    let sigma = sigma_from_betas(&beta, params.eta);
    DiffusionSchedule {
        beta,
        alpha,
        sigma,
        bnr: None,
    }
    .validate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_bnr_means_no_blur() {
        let s = make_bnr_schedule(8, 0.02, 8.0, 7.0, 0.0, 0.5).unwrap();
        assert!(s.alphas().iter().all(|&a| a == 0.0));
        assert_eq!(s.bnr_of(5).unwrap(), 0.0);
    }

    #[test]
    fn zero_eta_means_deterministic() {
        let s = make_bnr_schedule(8, 0.02, 8.0, 7.0, 0.5, 0.0).unwrap();
        assert!(s.sigmas().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn frozen_rho_grid_values() {
        // Scalar-script oracle for T=4, beta in [0.02, 8], rho=7, bnr=0.5.
        let s = make_bnr_schedule(4, 0.02, 8.0, 7.0, 0.5, 1.0).unwrap();
        let expect_beta = [
            0.0,
            0.020000000000000014,
            0.271071463171479,
            1.8033759750169986,
            8.000000000000002,
        ];
        let expect_sigma = [
            0.0,
            0.0,
            0.0199454889382295,
            0.26799165960258464,
            1.7569592761764388,
        ];
        for t in 0..=4 {
            assert_abs_diff_eq!(s.beta(t), expect_beta[t], epsilon = 1e-14);
            assert_abs_diff_eq!(s.alpha(t), 0.5 * expect_beta[t], epsilon = 1e-14);
            assert_abs_diff_eq!(s.sigma(t), expect_sigma[t], epsilon = 1e-14);
        }
        for t in 1..=4 {
            assert_eq!(s.bnr_of(t).unwrap(), 0.5);
        }
    }

    #[test]
    fn single_step_schedule_uses_prior_level() {
        let s = make_bnr_schedule(1, 0.02, 8.0, 7.0, 0.5, 0.0).unwrap();
        assert_eq!(s.steps(), 1);
        assert_eq!(s.beta(1), 8.0);
        assert_eq!(s.alpha(1), 4.0);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(make_bnr_schedule(0, 0.02, 8.0, 7.0, 0.5, 0.0).is_err());
        assert!(make_bnr_schedule(4, -0.1, 8.0, 7.0, 0.5, 0.0).is_err());
        assert!(make_bnr_schedule(4, 8.0, 0.02, 7.0, 0.5, 0.0).is_err());
        assert!(make_bnr_schedule(4, 0.02, 8.0, 0.5, 0.5, 0.0).is_err());
        assert!(make_bnr_schedule(4, 0.02, 8.0, 7.0, -1.0, 0.0).is_err());
        assert!(make_bnr_schedule(4, 0.02, 8.0, 7.0, 0.5, 1.5).is_err());
    }

    #[test]
    fn preset_bnr_rises() {
        let s = make_blurring_diffusion_schedule(32, &BlurringPresetParams::default()).unwrap();
        assert!(s.bnr_of(1).unwrap() < s.bnr_of(32).unwrap());
        for t in 2..=32 {
            assert!(s.bnr_of(t).unwrap() > s.bnr_of(t - 1).unwrap());
            assert!(s.alpha(t) >= s.alpha(t - 1));
            assert!(s.beta(t) >= s.beta(t - 1));
        }
        assert_eq!(s.constant_bnr(), None);
    }

    #[test]
    fn preset_frozen_endpoints() {
        // Generated once from the preset formula and committed here.
        let s = make_blurring_diffusion_schedule(32, &BlurringPresetParams::default()).unwrap();
        assert_abs_diff_eq!(s.beta(1), 0.020000000000000014, epsilon = 1e-14);
        assert_abs_diff_eq!(s.alpha(1), 0.0001926109331121247, epsilon = 1e-14);
        assert_abs_diff_eq!(s.beta(16), 0.6800009569902453, epsilon = 1e-13);
        assert_abs_diff_eq!(s.alpha(16), 1.3600019139804904, epsilon = 1e-13);
        assert_abs_diff_eq!(s.beta(32), 8.000000000000002, epsilon = 1e-13);
        assert_abs_diff_eq!(s.alpha(32), 32.00000000000001, epsilon = 1e-12);
        // Mid-grid ratio oracle: bnr(16) = 4 sin^2(pi/4) = 2.
        assert_abs_diff_eq!(s.bnr_of(16).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn bnr_of_range_checks() {
        let s = make_bnr_schedule(4, 0.02, 8.0, 7.0, 0.5, 0.0).unwrap();
        assert!(s.bnr_of(0).is_err());
        assert!(s.bnr_of(5).is_err());
    }

    #[test]
    fn csv_roundtrip_shape() {
        let s = make_bnr_schedule(3, 0.1, 2.0, 3.0, 1.0, 1.0).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,alpha,beta,sigma");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("0,0,0,0"));
    }
}
