//! The forward corruption process and its inference transitions.
//!
//! `forward_sample` draws from the marginal `N(blur(x0, alpha_t), beta_t^2 I)`.
//! The transition toward step `t-1`, conditioned on `(x_t, x0)`, has a mean
//! that can be written in two algebraically identical forms; both are
//! implemented and cross-checked, since the decomposed form is what the
//! two-headed predictor parameterizes.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::rng::NoiseSource;
use crate::schedule::DiffusionSchedule;
use crate::spectral::{make_blur_mask, DctPlan};

// L-inf tolerance for detecting inconsistent conditioning when beta[t] = 0.
const DEGENERATE_TOL: f64 = 1e-9;

/// Draw from the forward marginal at step `t`; `t = 0` returns `x0` exactly.
pub fn forward_sample(
    x0: &Grid,
    schedule: &DiffusionSchedule,
    t: usize,
    rng: &mut NoiseSource,
) -> Result<Grid> {
    if t == 0 {
        return Ok(x0.clone());
    }
    schedule.check_step(t)?;
    let plan = DctPlan::new(x0.height(), x0.width());
    let mask = make_blur_mask(x0.height(), x0.width(), schedule.alpha(t))?;
    let mut out = plan.apply_blur(x0, &mask)?;
    let beta = schedule.beta(t);
    if beta > 0.0 {
        let noise = rng.normal_grid(x0.height(), x0.width());
        out.axpy(beta, &noise);
    }
    Ok(out)
}

struct TransitionTerms {
    blur_prev: Grid,
    blur_cur: Grid,
    // sqrt(beta[t-1]^2 - sigma[t]^2)
    dir_scale: f64,
    beta: f64,
}

fn transition_terms(
    x0: &Grid,
    x_t: &Grid,
    schedule: &DiffusionSchedule,
    t: usize,
) -> Result<TransitionTerms> {
    schedule.check_step(t)?;
    x0.check_shape(x_t)?;
    let plan = DctPlan::new(x0.height(), x0.width());
    let mask_prev = make_blur_mask(x0.height(), x0.width(), schedule.alpha(t - 1))?;
    let mask_cur = make_blur_mask(x0.height(), x0.width(), schedule.alpha(t))?;
    let blur_prev = plan.apply_blur(x0, &mask_prev)?;
    let blur_cur = plan.apply_blur(x0, &mask_cur)?;
    let beta = schedule.beta(t);
    if beta == 0.0 && x_t.linf_distance(&blur_cur) > DEGENERATE_TOL {
        return Err(Error::DegenerateConditioning);
    }
    let beta_prev = schedule.beta(t - 1);
    let sigma = schedule.sigma(t);
    let dir_scale = (beta_prev * beta_prev - sigma * sigma).max(0.0).sqrt();
    Ok(TransitionTerms {
        blur_prev,
        blur_cur,
        dir_scale,
        beta,
    })
}

/// Mean of the inference transition `q_sigma(x_{t-1} | x_t, x0)`:
/// `blur(x0, a_{t-1}) + sqrt(beta[t-1]^2 - sigma[t]^2) * (x_t - blur(x0, a_t)) / beta[t]`.
///
/// When `beta[t] = 0` the schedule is still cold at `t`; the noise-direction
/// term is defined as zero (and `x_t` must equal the blurred `x0`).
pub fn transition_mean(
    x0: &Grid,
    x_t: &Grid,
    schedule: &DiffusionSchedule,
    t: usize,
) -> Result<Grid> {
    let terms = transition_terms(x0, x_t, schedule, t)?;
    let mut out = terms.blur_prev;
    if terms.beta > 0.0 && terms.dir_scale != 0.0 {
        let coeff = terms.dir_scale / terms.beta;
        out.axpy(coeff, x_t);
        out.axpy(-coeff, &terms.blur_cur);
    }
    Ok(out)
}

/// The same mean in its three-term decomposed form:
/// `x_t + [detail refresh] + [step toward the blurry x0]`.
///
/// The first correction adds the spectral detail revealed between masks
/// `a_t` and `a_{t-1}`; the second moves along the direction pointing to the
/// blurry `x0`. Must agree with [`transition_mean`] to floating-point
/// reassociation error.
pub fn decomposed_transition_mean(
    x0: &Grid,
    x_t: &Grid,
    schedule: &DiffusionSchedule,
    t: usize,
) -> Result<Grid> {
    let terms = transition_terms(x0, x_t, schedule, t)?;
    let mut out = x_t.clone();
    // Detail refresh: blur(x0, a_{t-1}) - blur(x0, a_t).
    out.axpy(1.0, &terms.blur_prev);
    out.axpy(-1.0, &terms.blur_cur);
    if terms.beta > 0.0 {
        let coeff = (terms.beta - terms.dir_scale) / terms.beta;
        out.axpy(coeff, &terms.blur_cur);
        out.axpy(-coeff, x_t);
    }
    Ok(out)
}

/// Draw from the inference transition: mean plus `sigma[t]` noise.
pub fn transition_sample(
    x0: &Grid,
    x_t: &Grid,
    schedule: &DiffusionSchedule,
    t: usize,
    rng: &mut NoiseSource,
) -> Result<Grid> {
    let mut out = transition_mean(x0, x_t, schedule, t)?;
    let sigma = schedule.sigma(t);
    if sigma > 0.0 {
        let noise = rng.normal_grid(x0.height(), x0.width());
        out.axpy(sigma, &noise);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::make_bnr_schedule;
    use crate::spectral::apply_blur;

    fn toy_grid() -> Grid {
        Grid::from_fn(4, 4, |r, c| ((r * 4 + c) as f64 * 0.731).sin())
    }

    #[test]
    fn t_zero_returns_x0_exactly() {
        let s = make_bnr_schedule(6, 0.02, 8.0, 7.0, 0.5, 0.0).unwrap();
        let x0 = toy_grid();
        let mut rng = NoiseSource::new(7);
        let x = forward_sample(&x0, &s, 0, &mut rng).unwrap();
        assert_eq!(x, x0);
        assert_eq!(rng.draws(), 0);
    }

    #[test]
    fn out_of_range_step_rejected() {
        let s = make_bnr_schedule(6, 0.02, 8.0, 7.0, 0.5, 0.0).unwrap();
        let x0 = toy_grid();
        let mut rng = NoiseSource::new(7);
        assert!(forward_sample(&x0, &s, 7, &mut rng).is_err());
        assert!(transition_mean(&x0, &x0, &s, 0).is_err());
    }

    #[test]
    fn noiseless_exact_conditioning_steps_to_previous_blur() {
        let s = make_bnr_schedule(6, 0.02, 8.0, 7.0, 1.0, 0.0).unwrap();
        let x0 = toy_grid();
        let t = 4;
        let mask_t = make_blur_mask(4, 4, s.alpha(t)).unwrap();
        let x_t = apply_blur(&x0, &mask_t).unwrap();
        let mean = transition_mean(&x0, &x_t, &s, t).unwrap();
        let mask_prev = make_blur_mask(4, 4, s.alpha(t - 1)).unwrap();
        let expect = apply_blur(&x0, &mask_prev).unwrap();
        assert!(mean.linf_distance(&expect) < 1e-12);
    }

    #[test]
    fn x_t_dependence_scales_with_direction_coefficient() {
        let s = make_bnr_schedule(5, 0.5, 4.0, 2.0, 0.3, 1.0).unwrap();
        let x0 = toy_grid();
        let t = 3;
        let x_a = Grid::constant(4, 4, 5.0);
        let x_b = Grid::constant(4, 4, -5.0);
        let m_a = transition_mean(&x0, &x_a, &s, t).unwrap();
        let m_b = transition_mean(&x0, &x_b, &s, t).unwrap();
        let dir_scale = (s.beta(t - 1).powi(2) - s.sigma(t).powi(2)).sqrt();
        let expect_gap = dir_scale / s.beta(t) * 10.0;
        assert!((m_a.linf_distance(&m_b) - expect_gap).abs() < 1e-10);
    }

    #[test]
    fn decomposed_identity_on_random_inputs() {
        let s = make_bnr_schedule(8, 0.05, 6.0, 5.0, 0.7, 0.6).unwrap();
        let x0 = toy_grid();
        let mut rng = NoiseSource::new(99);
        for t in 1..=8 {
            let x_t = forward_sample(&x0, &s, t, &mut rng).unwrap();
            let a = transition_mean(&x0, &x_t, &s, t).unwrap();
            let b = decomposed_transition_mean(&x0, &x_t, &s, t).unwrap();
            let scale = a.linf_norm().max(1.0);
            assert!(
                a.linf_distance(&b) / scale < 1e-12,
                "forms disagree at t={t}: {}",
                a.linf_distance(&b)
            );
        }
    }

    #[test]
    fn zero_sigma_transition_sample_is_the_mean() {
        let s = make_bnr_schedule(6, 0.02, 8.0, 7.0, 0.5, 0.0).unwrap();
        let x0 = toy_grid();
        let mut rng = NoiseSource::new(3);
        let x_t = forward_sample(&x0, &s, 4, &mut rng).unwrap();
        let mean = transition_mean(&x0, &x_t, &s, 4).unwrap();
        let sample = transition_sample(&x0, &x_t, &s, 4, &mut rng).unwrap();
        assert_eq!(mean, sample);
    }
}
