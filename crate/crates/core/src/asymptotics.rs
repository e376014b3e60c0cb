//! Leading large-time term, the Taylor-regularised kernels `Ψ_n`, the
//! boundary functions `B_n^±`, and the `(x, t)` regions on which the
//! expansion is stated.

use serde::{Deserialize, Serialize};

use crate::airy::{ai_derivatives, ai_unchecked, leading_profile_w, AiryEvalConfig};
use crate::error::{ensure_finite, Error, Result};
use crate::initial_data::{PowerTailFunction, Side};
use crate::quadrature::{integrate, Tolerance};
use crate::solver;

/// `|θ|` below which `Ψ_n` is summed from its Taylor series instead of the
/// subtracted closed form.
const PSI_SERIES_RADIUS: f64 = 0.5;
const PSI_SERIES_TERMS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// `t ≥ |x|^α`.
    T { alpha: f64 },
    /// `x > 0`, `0 < t < |x|^α`.
    XPlus { alpha: f64 },
    /// `x < 0`, `0 < t < |x|^α`.
    XMinus { alpha: f64 },
    /// `t > |x|^{1+δ}`, where the leading term keeps its asymptotic character.
    Expansion { delta: f64 },
}

pub fn classify(x: f64, t: f64, region: Region) -> bool {
    let ax = x.abs();
    match region {
        Region::T { alpha } => t >= ax.powf(alpha),
        Region::XPlus { alpha } => x > 0.0 && t > 0.0 && t < ax.powf(alpha),
        Region::XMinus { alpha } => x < 0.0 && t > 0.0 && t < ax.powf(alpha),
        Region::Expansion { delta } => t > ax.powf(1.0 + delta),
    }
}

/// `γ = α/(3p) - 1`.
pub fn gamma(alpha: f64, p: f64) -> f64 {
    alpha / (3.0 * p) - 1.0
}

/// The two constants that fix the leading term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeadingTerm {
    pub f0_plus: f64,
    pub f0_minus: f64,
}

impl LeadingTerm {
    pub fn of(f: &PowerTailFunction) -> Result<Self> {
        match (f.tail_coeffs_plus().first(), f.tail_coeffs_minus().first()) {
            (Some(&f0_plus), Some(&f0_minus)) => Ok(Self { f0_plus, f0_minus }),
            _ => Err(Error::IncompleteData(format!(
                "`{}` has no f_0 coefficient on one side",
                f.label()
            ))),
        }
    }

    pub fn at_eta(&self, eta: f64, cfg: &AiryEvalConfig) -> Result<f64> {
        let w = leading_profile_w(eta, cfg)?;
        Ok((self.f0_plus - self.f0_minus) * w + 0.5 * (self.f0_plus + self.f0_minus))
    }

    pub fn value(&self, x: f64, t: f64, cfg: &AiryEvalConfig) -> Result<f64> {
        ensure_finite(x, "x")?;
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("t must be positive, got {t}")));
        }
        self.at_eta(solver::eta(x, t), cfg)
    }
}

/// `(f_0^+ - f_0^-) W(η) + (f_0^+ + f_0^-)/2`.
pub fn leading(f: &PowerTailFunction, x: f64, t: f64, cfg: &AiryEvalConfig) -> Result<f64> {
    LeadingTerm::of(f)?.value(x, t, cfg)
}

/// `Ψ_n(θ, η) = θ^{-n} [Ai(η - θ) - Σ_{r<n} (-θ)^r Ai^{(r)}(η)/r!]`,
/// continued to `(-1)^n Ai^{(n)}(η)/n!` at `θ = 0`.
pub fn psi_n(n: usize, theta: f64, eta: f64, cfg: &AiryEvalConfig) -> Result<f64> {
    ensure_finite(theta, "theta")?;
    ensure_finite(eta, "eta")?;
    if n == 0 || n > cfg.max_deriv_order {
        return Err(Error::UnsupportedOrder {
            order: n,
            max: cfg.max_deriv_order,
        });
    }
    if theta.abs() < PSI_SERIES_RADIUS {
        return psi_series(n, theta, eta, cfg);
    }
    let d = ai_derivatives(eta, n - 1, cfg)?;
    let mut taylor = 0.0;
    let mut power = 1.0;
    for (r, dr) in d.iter().enumerate() {
        if r > 0 {
            power *= -theta / r as f64;
        }
        taylor += power * dr;
    }
    Ok((ai_unchecked(eta - theta, cfg) - taylor) / theta.powi(n as i32))
}

/// `Σ_j (-1)^{n+j} θ^j Ai^{(n+j)}(η)/(n+j)!`.
fn psi_series(n: usize, theta: f64, eta: f64, cfg: &AiryEvalConfig) -> Result<f64> {
    let d = ai_derivatives(eta, n + PSI_SERIES_TERMS, cfg)?;
    let mut coeff = 1.0;
    for k in 1..=n {
        coeff /= -(k as f64);
    }
    let mut sum = coeff * d[n];
    for j in 1..=PSI_SERIES_TERMS {
        coeff *= -theta / (n + j) as f64;
        sum += coeff * d[n + j];
    }
    Ok(sum)
}

/// `Σ_{r=0}^{n-2} Ai^{(r)}(η)/(r!(r-n+1)) + ∫ Ψ_n(θ, η) dθ` over `[-1, 0]`
/// (minus side) or `[0, 1]` (plus side).
pub fn b_n(n: usize, eta: f64, side: Side, cfg: &AiryEvalConfig) -> Result<f64> {
    ensure_finite(eta, "eta")?;
    if n == 0 || n > cfg.max_deriv_order {
        return Err(Error::UnsupportedOrder {
            order: n,
            max: cfg.max_deriv_order,
        });
    }
    let d = ai_derivatives(eta, n, cfg)?;
    let mut sum = 0.0;
    let mut factorial = 1.0;
    for (r, dr) in d.iter().enumerate().take(n.saturating_sub(1)) {
        if r > 0 {
            factorial *= r as f64;
        }
        sum += dr / (factorial * (r as f64 - n as f64 + 1.0));
    }
    let (a, b) = match side {
        Side::Minus => (-1.0, 0.0),
        Side::Plus => (0.0, 1.0),
    };
    // psi_n only fails on order or non-finite input, both excluded above.
    let integral = integrate(
        |theta| psi_n(n, theta, eta, cfg).unwrap_or(f64::NAN),
        a,
        b,
        &[],
        Tolerance::new(1e-13, 1e-11, 2000),
    )?;
    Ok(sum + integral.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy::{ai, ai_deriv, AI_PRIME_ZERO, AI_ZERO};
    use crate::initial_data::make_builtin;
    use std::f64::consts::PI;

    fn cfg() -> AiryEvalConfig {
        AiryEvalConfig::default()
    }

    #[test]
    fn leading_examples() {
        let c = cfg();
        let k = make_builtin("constant", &[4.0]).unwrap();
        assert_eq!(leading(&k, 3.0, 2.0, &c).unwrap(), 4.0);
        let step = make_builtin("step", &[]).unwrap();
        assert!((leading(&step, 0.0, 7.0, &c).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let atan = make_builtin("atan", &[]).unwrap();
        let (x, t) = (1.5, 2.0);
        let w = leading_profile_w(solver::eta(x, t), &c).unwrap();
        assert!((leading(&atan, x, t, &c).unwrap() - PI * w).abs() < 1e-15);
    }

    #[test]
    fn data_without_f0_is_rejected() {
        use std::sync::Arc;
        let ok = PowerTailFunction::new("x", Arc::new(|x| x), vec![1.0], vec![1.0], 1.0);
        assert!(ok.is_ok());
        let none = PowerTailFunction::new("x", Arc::new(|x| x), vec![], vec![1.0], 1.0);
        assert!(matches!(none, Err(Error::IncompleteData(_))));
    }

    #[test]
    fn psi_limits() {
        let c = cfg();
        let eta = 0.8;
        let limit = psi_n(1, 0.0, eta, &c).unwrap();
        assert!((limit + ai_deriv(eta, 1, &c).unwrap()).abs() < 1e-15);
        let near = psi_n(1, 1e-3, eta, &c).unwrap();
        let expect = -ai_deriv(eta, 1, &c).unwrap() + 0.5e-3 * ai_deriv(eta, 2, &c).unwrap();
        assert!((near - expect).abs() < 1e-7, "{near} {expect}");
    }

    #[test]
    fn psi_direct_value() {
        let c = cfg();
        let expect = (ai(-0.5, &c).unwrap() - AI_ZERO + 0.5 * AI_PRIME_ZERO) / 0.25;
        assert!((psi_n(2, 0.5, 0.0, &c).unwrap() - expect).abs() < 1e-14);
    }

    #[test]
    fn psi_branches_agree_at_switch() {
        let c = cfg();
        for n in 1..=4 {
            for eta in [-40.0, -6.0, -1.0, 0.0, 2.5] {
                let inside = psi_series(n, PSI_SERIES_RADIUS, eta, &c).unwrap();
                let outside = psi_n(n, PSI_SERIES_RADIUS, eta, &c).unwrap();
                let tol = 1e-9 * (1.0 + inside.abs());
                assert!((inside - outside).abs() < tol, "n={n} eta={eta}");
            }
        }
    }

    #[test]
    fn psi_order_range() {
        let c = cfg();
        assert!(matches!(
            psi_n(0, 0.1, 0.0, &c),
            Err(Error::UnsupportedOrder { .. })
        ));
        assert!(matches!(
            psi_n(13, 0.1, 0.0, &c),
            Err(Error::UnsupportedOrder { .. })
        ));
    }

    #[test]
    fn b1_has_no_sum() {
        let c = cfg();
        let direct = integrate(
            |th| psi_n(1, th, 0.3, &c).unwrap(),
            -1.0,
            0.0,
            &[],
            Tolerance::default(),
        )
        .unwrap();
        assert!((b_n(1, 0.3, Side::Minus, &c).unwrap() - direct.value).abs() < 1e-12);
    }

    #[test]
    fn region_membership() {
        assert!(classify(0.0, 1.0, Region::T { alpha: 2.7 }));
        assert!(!classify(2.0, 1.0, Region::T { alpha: 2.5 }));
        assert!(classify(-2.0, 1.0, Region::XMinus { alpha: 2.5 }));
        assert!(!classify(-2.0, 1.0, Region::XPlus { alpha: 2.5 }));
        assert!(classify(3.0, 10.0, Region::Expansion { delta: 0.5 }));
        assert!((gamma(2.4, 0.5) - 0.6).abs() < 1e-15);
    }
}
