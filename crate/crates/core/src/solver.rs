//! Convolution solution `u(x,t) = ∫ f(cθ) Ai(η - θ) dθ`, `c = (3t)^{1/3}`,
//! `η = x/c`.
//!
//! The θ-line is split at `±μ`, `μ = σ/c`, `σ = (|x|³ + t)^{p/3}`. The
//! central piece is integrated directly. On each tail `f` is replaced by its
//! power expansion plus remainder: the constant term closes through `F`,
//! the inverse-power moments and the remainder are integrated numerically.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::airy::{ai_integral_complement_estimate, ai_unchecked, AiryEvalConfig};
use crate::asymptotics;
use crate::error::{ensure_finite, Error, Result};
use crate::initial_data::{PowerTailFunction, Side};
use crate::oscillatory::airy_tail;
use crate::quadrature::{integrate, Estimate, Tolerance};

/// Beyond this argument `Ai` is below 1e-37 and the decaying side is cut.
const DECAY_CUTOFF: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitConfig {
    pub p: f64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self { p: 0.6 }
    }
}

impl SplitConfig {
    pub fn new(p: f64) -> Result<Self> {
        let sc = Self { p };
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p > 0.0 && self.p < 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!(
                "split exponent p must lie in (0, 1), got {}",
                self.p
            )))
        }
    }

    pub fn sigma(&self, x: f64, t: f64) -> f64 {
        (x.abs().powi(3) + t).powf(self.p / 3.0)
    }

    pub fn mu(&self, x: f64, t: f64) -> f64 {
        self.sigma(x, t) / time_scale(t)
    }
}

/// `(3t)^{1/3}`.
pub fn time_scale(t: f64) -> f64 {
    (3.0 * t).cbrt()
}

/// Self-similar variable `x / (3t)^{1/3}`.
pub fn eta(x: f64, t: f64) -> f64 {
    x / time_scale(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Number of tail coefficients used; capped by what the data supplies.
    pub tail_terms: usize,
    /// Base distance `θ - η` after which oscillatory tails are summed by
    /// half periods. Scaled by `max(1, |η|^{1/2})`.
    pub osc_window: f64,
    pub airy: AiryEvalConfig,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_subdivisions: 4000,
            tail_terms: 8,
            osc_window: 10.0,
            airy: AiryEvalConfig::default(),
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.abs_tol) || !positive(self.rel_tol) {
            return Err(Error::InvalidConfig(format!(
                "tolerances must be positive, got abs {} rel {}",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions == 0 || self.tail_terms == 0 {
            return Err(Error::InvalidConfig(
                "max_subdivisions and tail_terms must be at least 1".into(),
            ));
        }
        if !positive(self.osc_window) {
            return Err(Error::InvalidConfig(format!(
                "osc_window must be positive, got {}",
                self.osc_window
            )));
        }
        self.airy.validate()
    }

    pub fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.abs_tol, self.rel_tol, self.max_subdivisions)
    }

    pub fn window_for(&self, eta: f64) -> f64 {
        self.osc_window * eta.abs().sqrt().max(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionSample {
    pub x: f64,
    pub t: f64,
    pub eta: f64,
    pub u: f64,
    pub u_leading: f64,
    pub residual: f64,
    pub error_estimate: f64,
}

/// `∫_μ^∞ θ^{-n} Ai(η ∓ θ) dθ`, upper sign on the plus side.
pub fn tail_moment(n: usize, eta: f64, mu: f64, side: Side, qc: &QuadratureConfig) -> Result<f64> {
    tail_moment_estimate(n, eta, mu, side, qc).map(|e| e.value)
}

pub(crate) fn tail_moment_estimate(
    n: usize,
    eta: f64,
    mu: f64,
    side: Side,
    qc: &QuadratureConfig,
) -> Result<Estimate> {
    ensure_finite(eta, "eta")?;
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::Domain(format!("mu must be positive, got {mu}")));
    }
    let cfg = &qc.airy;
    if n == 0 {
        return match side {
            Side::Plus => {
                let (f, err) = ai_integral_complement_estimate(eta - mu, cfg)?;
                Ok(Estimate::new(1.0 - f, err))
            }
            Side::Minus => {
                let (f, err) = ai_integral_complement_estimate(eta + mu, cfg)?;
                Ok(Estimate::new(f, err))
            }
        };
    }
    let power = |theta: f64| theta.powi(-(n as i32));
    match side {
        Side::Plus => airy_tail(power, eta, mu, &[], qc.window_for(eta), cfg, qc.tolerance()),
        Side::Minus => integrate(
            |theta| power(theta) * ai_unchecked(eta + theta, cfg),
            mu,
            decay_end(eta, mu),
            &[],
            qc.tolerance(),
        ),
    }
}

fn decay_end(eta: f64, mu: f64) -> f64 {
    mu.max(DECAY_CUTOFF - eta)
}

/// `u(x, t)` with an absolute error estimate.
pub fn eval_u(
    f: &PowerTailFunction,
    x: f64,
    t: f64,
    sc: &SplitConfig,
    qc: &QuadratureConfig,
) -> Result<Estimate> {
    ensure_finite(x, "x")?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    sc.validate()?;
    let c = time_scale(t);
    let eta = x / c;
    let mu = sc.mu(x, t);
    let tol = qc.tolerance();
    let cfg = &qc.airy;

    let scaled_breaks = |keep: &dyn Fn(f64) -> bool, sign: f64| -> Vec<f64> {
        f.breakpoints()
            .iter()
            .map(|&b| sign * b / c)
            .filter(|&b| keep(b))
            .collect()
    };

    let mut parts: Vec<Estimate> = Vec::with_capacity(16);

    let inner = scaled_breaks(&|b| b > -mu && b < mu, 1.0);
    parts.push(integrate(
        |theta| f.eval(c * theta) * ai_unchecked(eta - theta, cfg),
        -mu,
        mu,
        &inner,
        tol,
    )?);

    for side in [Side::Plus, Side::Minus] {
        let coeffs = f.tail_coeffs(side);
        let n_terms = qc.tail_terms.min(coeffs.len());
        let sign = match side {
            Side::Plus => 1.0,
            Side::Minus => -1.0,
        };
        for (n, &fn_) in coeffs[..n_terms].iter().enumerate() {
            if fn_ == 0.0 {
                continue;
            }
            // (±cθ)^{-n}
            let factor = fn_ * (sign * c).powi(-(n as i32));
            parts.push(tail_moment_estimate(n, eta, mu, side, qc)?.scaled(factor));
        }

        let remainder = |theta: f64| {
            let y = sign * c * theta;
            f.eval(y) - f.tail_expansion(y, n_terms)
        };
        let breaks = scaled_breaks(&|b| b > mu, sign);
        let piece = match side {
            Side::Plus => airy_tail(remainder, eta, mu, &breaks, qc.window_for(eta), cfg, tol)?,
            Side::Minus => integrate(
                |theta| {
                    let r = remainder(theta);
                    if r == 0.0 {
                        0.0
                    } else {
                        r * ai_unchecked(eta + theta, cfg)
                    }
                },
                mu,
                decay_end(eta, mu).max(breaks.last().copied().unwrap_or(mu)),
                &breaks,
                tol,
            )?,
        };
        parts.push(piece);
    }

    let total: Estimate = parts.iter().copied().sum();
    // Rounding in the sum of pieces that partly cancel.
    let magnitude: f64 = parts.iter().map(|e| e.value.abs()).sum();
    let value = total.value;
    if !value.is_finite() {
        return Err(Error::AccuracyNotReached {
            value,
            error_estimate: total.error,
        });
    }
    Ok(Estimate::new(
        value,
        total.error + 8.0 * f64::EPSILON * magnitude,
    ))
}

/// Full sample at one point, including the leading asymptotic term.
pub fn sample(
    f: &PowerTailFunction,
    x: f64,
    t: f64,
    sc: &SplitConfig,
    qc: &QuadratureConfig,
) -> Result<SolutionSample> {
    let u = eval_u(f, x, t, sc, qc)?;
    let u_leading = asymptotics::leading(f, x, t, &qc.airy)?;
    Ok(SolutionSample {
        x,
        t,
        eta: eta(x, t),
        u: u.value,
        u_leading,
        residual: u.value - u_leading,
        error_estimate: u.error,
    })
}

/// One grid cell; failed cells keep their coordinates and the error.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub x: f64,
    pub t: f64,
    pub outcome: Result<SolutionSample>,
}

/// Samples on `ts × xs`, ordered by `t` and then `x`. Cells are evaluated
/// in parallel; each is independent so the output equals a sequential run.
pub fn eval_grid(
    f: &PowerTailFunction,
    xs: &[f64],
    ts: &[f64],
    sc: &SplitConfig,
    qc: &QuadratureConfig,
) -> Result<Vec<GridCell>> {
    if let Some(&bad) = ts.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
        return Err(Error::Domain(format!(
            "t values must be positive, got {bad}"
        )));
    }
    if let Some(&bad) = xs.iter().find(|x| !x.is_finite()) {
        return Err(Error::Domain(format!("x values must be finite, got {bad}")));
    }
    sc.validate()?;
    qc.validate()?;
    let points: Vec<(f64, f64)> = ts
        .iter()
        .flat_map(|&t| xs.iter().map(move |&x| (x, t)))
        .collect();
    Ok(points
        .into_par_iter()
        .map(|(x, t)| GridCell {
            x,
            t,
            outcome: sample(f, x, t, sc, qc),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy::{ai_integral_complement, leading_profile_w};
    use crate::initial_data::make_builtin;

    fn configs() -> (SplitConfig, QuadratureConfig) {
        (SplitConfig::default(), QuadratureConfig::default())
    }

    #[test]
    fn sigma_at_origin() {
        for p in [0.1, 0.5, 0.9] {
            assert_eq!(SplitConfig::new(p).unwrap().sigma(0.0, 1.0), 1.0);
        }
        assert!(SplitConfig::new(1.0).is_err());
        assert!(SplitConfig::new(0.0).is_err());
    }

    #[test]
    fn constant_is_conserved() {
        let (sc, qc) = configs();
        let f = make_builtin("constant", &[2.0]).unwrap();
        for (x, t) in [(0.0, 1.0), (-7.0, 3.0), (12.0, 50.0)] {
            let u = eval_u(&f, x, t, &sc, &qc).unwrap();
            assert!((u.value - 2.0).abs() < 1e-10, "{x} {t} {u:?}");
        }
    }

    #[test]
    fn step_solution() {
        let (sc, qc) = configs();
        let f = make_builtin("step", &[]).unwrap();
        for (x, t) in [(0.0, 1.0), (-6.0, 2.0), (4.0, 10.0), (-10.0, 1.0)] {
            let u = eval_u(&f, x, t, &sc, &qc).unwrap();
            let w = leading_profile_w(eta(x, t), &qc.airy).unwrap();
            assert!((u.value - 0.5 - w).abs() < 1e-9, "{x} {t} {u:?}");
        }
    }

    #[test]
    fn non_positive_time() {
        let (sc, qc) = configs();
        let f = make_builtin("atan", &[]).unwrap();
        assert!(matches!(
            eval_u(&f, 0.0, 0.0, &sc, &qc),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            eval_u(&f, 0.0, -1.0, &sc, &qc),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn zeroth_moment_closed_forms() {
        let qc = QuadratureConfig::default();
        let (eta, mu) = (0.4, 1.3);
        let plus = tail_moment(0, eta, mu, Side::Plus, &qc).unwrap();
        let f = ai_integral_complement(eta - mu, &qc.airy).unwrap();
        assert_eq!(plus, 1.0 - f);
        let minus = tail_moment(0, eta, mu, Side::Minus, &qc).unwrap();
        assert_eq!(minus, ai_integral_complement(eta + mu, &qc.airy).unwrap());
        assert!(tail_moment(1, 0.0, 0.0, Side::Plus, &qc).is_err());
    }

    #[test]
    fn grid_order_and_zero_data() {
        let (sc, qc) = configs();
        let f = make_builtin("constant", &[0.0]).unwrap();
        let cells = eval_grid(&f, &[-1.0, 1.0], &[1.0, 2.0], &sc, &qc).unwrap();
        let coords: Vec<_> = cells.iter().map(|c| (c.x, c.t)).collect();
        assert_eq!(coords, [(-1.0, 1.0), (1.0, 1.0), (-1.0, 2.0), (1.0, 2.0)]);
        for c in cells {
            let s = c.outcome.unwrap();
            assert_eq!((s.u, s.residual), (0.0, 0.0));
        }
    }
}
