//! Semi-infinite integrals against the oscillating Airy tail.
//!
//! `∫_{θ0}^∞ g(θ) Ai(η - θ) dθ` converges only conditionally when `g` decays
//! slowly. Past a window the integral is cut into half periods of the
//! leading phase `(2/3)s^{3/2}`, `s = θ - η`; the partial sums alternate and
//! are summed with Wynn's epsilon algorithm.

use std::f64::consts::PI;

use crate::airy::{ai_unchecked, AiryEvalConfig};
use crate::error::{Error, Result};
use crate::quadrature::{gk21, integrate, wynn_epsilon, Estimate, Tolerance};

const MIN_HALF_PERIODS: usize = 8;
const MAX_HALF_PERIODS: usize = 400;
/// Smallest `s = θ - η` at which half-period summation may start.
const MIN_OSCILLATORY_START: f64 = 8.0;

fn phase(s: f64) -> f64 {
    2.0 / 3.0 * s * s.sqrt()
}

fn phase_inverse(z: f64) -> f64 {
    (1.5 * z).powf(2.0 / 3.0)
}

/// `∫_{theta_start}^∞ g(θ) Ai(eta - θ) dθ`.
///
/// `g` must be smooth beyond the last entry of `breakpoints` and decay no
/// slower than a constant. `window` is the minimal distance `θ - η` at
/// which the half-period summation starts.
pub(crate) fn airy_tail<G: Fn(f64) -> f64>(
    g: G,
    eta: f64,
    theta_start: f64,
    breakpoints: &[f64],
    window: f64,
    cfg: &AiryEvalConfig,
    tol: Tolerance,
) -> Result<Estimate> {
    let integrand = |theta: f64| {
        let w = g(theta);
        if w == 0.0 {
            0.0
        } else {
            w * ai_unchecked(eta - theta, cfg)
        }
    };

    let last_break = breakpoints
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let theta_osc = theta_start
        .max(eta + window.max(MIN_OSCILLATORY_START))
        .max(last_break);

    let mut total = integrate(integrand, theta_start, theta_osc, breakpoints, tol)?;

    let z0 = phase(theta_osc - eta);
    let mut left = theta_osc;
    let mut sums = Vec::with_capacity(64);
    let mut running = 0.0;
    let mut panel_error = 0.0;
    let mut quiet = 0usize;
    for k in 1..=MAX_HALF_PERIODS {
        let right = eta + phase_inverse(z0 + k as f64 * PI);
        let mut piece = gk21(&integrand, left, right);
        if piece.error > 0.1 * tol.abs {
            piece = integrate(integrand, left, right, &[], tol)?;
        }
        running += piece.value;
        panel_error += piece.error;
        sums.push(running);
        left = right;

        // Integrands that die out (e.g. Gaussian data) need no extrapolation.
        if piece.value.abs() <= 1e-3 * tol.abs {
            quiet += 1;
            if quiet >= 3 && k >= 3 {
                total += Estimate::new(running, panel_error);
                return Ok(total);
            }
        } else {
            quiet = 0;
        }

        if k >= MIN_HALF_PERIODS {
            let extrapolated = wynn_epsilon(&sums);
            if extrapolated.error <= tol.abs.max(tol.rel * extrapolated.value.abs()) {
                total += Estimate::new(extrapolated.value, panel_error + extrapolated.error);
                return Ok(total);
            }
        }
    }
    let extrapolated = wynn_epsilon(&sums);
    Err(Error::AccuracyNotReached {
        value: total.value + extrapolated.value,
        error_estimate: total.error + panel_error + extrapolated.error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_line_normalisation() {
        // ∫_0^∞ Ai(-θ) dθ = 2/3
        let cfg = AiryEvalConfig::default();
        let e = airy_tail(|_| 1.0, 0.0, 0.0, &[], 10.0, &cfg, Tolerance::default()).unwrap();
        assert!((e.value - 2.0 / 3.0).abs() < 1e-12, "{e:?}");
    }

    #[test]
    fn window_does_not_change_value() {
        let cfg = AiryEvalConfig::default();
        let tol = Tolerance::default();
        let g = |t: f64| 1.0 / (1.0 + t * t);
        let a = airy_tail(g, 1.5, 0.5, &[], 10.0, &cfg, tol).unwrap();
        let b = airy_tail(g, 1.5, 0.5, &[], 30.0, &cfg, tol).unwrap();
        assert!((a.value - b.value).abs() < 1e-12, "{a:?} {b:?}");
    }
}
